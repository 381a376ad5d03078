"""
Brauer monoid diagrams and their concatenation arithmetic.

A diagram on n strands is a perfect matching of 2n points: points 1..n run
along the top row (left to right) and points n+1..2n along the bottom row,
so bottom position k is point n+k. We store the matching as a `partner`
tuple with partner[p-1] = q whenever points p and q are joined.

Multiplication is concatenation: multiply(x, y) glues x's bottom row onto
y's top row (x stacked above y) and removes closed loops, returning the
composite diagram together with the loop count c, as in x·y = q^c·z. The
loop count carries no weight at q = 1 but is tracked for callers that
assert the defining relations.

Canonical order: the edge list of a diagram, each edge written (small,
large) and the list sorted by smaller endpoint, is unique; diagrams are
enumerated in lexicographic order of these edge lists and that order is
the state-index convention for every matrix built downstream.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterator, Sequence


@dataclass(frozen=True)
class BrauerDiagram:
    """A perfect matching on the 2n points of a two-row diagram."""

    n: int
    partner: tuple[int, ...]

    def __post_init__(self):
        n, p = self.n, self.partner
        if n < 1:
            raise ValueError(f"strand count must be positive, got {n}")
        if len(p) != 2 * n:
            raise ValueError(f"partner array must have length {2 * n}, got {len(p)}")
        for a in range(1, 2 * n + 1):
            b = p[a - 1]
            if not 1 <= b <= 2 * n:
                raise ValueError(f"point {a} matched outside 1..{2 * n}")
            if b == a:
                raise ValueError(f"point {a} is a fixed point")
            if p[b - 1] != a:
                raise ValueError(f"partner array is not an involution at {a}")

    def partner_of(self, p: int) -> int:
        return self.partner[p - 1]

    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edge list, each (small, large), sorted by smaller endpoint."""
        return tuple(
            (a, self.partner[a - 1])
            for a in range(1, 2 * self.n + 1)
            if self.partner[a - 1] > a
        )

    def sort_key(self) -> tuple[tuple[int, int], ...]:
        return self.edges()

    def __str__(self) -> str:
        return format_diagram(self)


@dataclass(frozen=True)
class LoopProduct:
    """Concatenation result: the composite diagram and the closed-loop count."""

    diagram: BrauerDiagram
    loops: int


def identity_diagram(n: int) -> BrauerDiagram:
    return BrauerDiagram(n, tuple(range(n + 1, 2 * n + 1)) + tuple(range(1, n + 1)))


def generator(kind: str, i: int, n: int) -> BrauerDiagram:
    """The generator r_i (strand swap) or e_i (cup/cap pair) in Br_n."""
    if kind not in ("r", "e"):
        raise ValueError(f"generator kind must be 'r' or 'e', got {kind!r}")
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range 1..{n - 1}")
    p = list(range(n + 1, 2 * n + 1)) + list(range(1, n + 1))
    if kind == "r":
        p[i - 1], p[i] = i + 1 + n, i + n
        p[i - 1 + n], p[i + n] = i + 1, i
    else:
        p[i - 1], p[i] = i + 1, i
        p[i - 1 + n], p[i + n] = i + 1 + n, i + n
    return BrauerDiagram(n, tuple(p))


def _multiply_raw(x: tuple[int, ...], y: tuple[int, ...], n: int) -> tuple[tuple[int, ...], int]:
    """Concatenation on raw partner tuples (0-indexed internals, hot path)."""
    # Point encoding inside the trace: 0..n-1 are composite top points,
    # n..2n-1 composite bottom points. Middle (glued) positions are 0..n-1.
    out = [0] * (2 * n)
    seen_mid = [False] * n
    for start in range(2 * n):
        if out[start]:
            continue
        # start < n: top of x; else bottom of y.
        if start < n:
            side, v = 0, start
        else:
            side, v = 1, start
        while True:
            if side == 0:
                v = x[v] - 1  # x's partner, 0-indexed
                if v < n:
                    tgt = v
                    break
                seen_mid[v - n] = True
                side, v = 1, v - n  # cross into y's top row
            else:
                v = y[v] - 1
                if v >= n:
                    tgt = v
                    break
                seen_mid[v] = True
                side, v = 0, v + n  # cross into x's bottom row
        out[start] = tgt + 1
        out[tgt] = start + 1
    loops = 0
    for m in range(n):
        if seen_mid[m]:
            continue
        loops += 1
        v = m
        while not seen_mid[v]:
            seen_mid[v] = True
            w = x[v + n] - 1 - n  # partner within x's bottom row
            seen_mid[w] = True
            v = y[w] - 1  # partner within y's top row
    return tuple(out), loops


def multiply(x: BrauerDiagram, y: BrauerDiagram) -> LoopProduct:
    """Concatenate x above y; returns the composite and the loop count c."""
    if x.n != y.n:
        raise ValueError(f"cannot multiply diagrams on {x.n} and {y.n} strands")
    partner, loops = _multiply_raw(x.partner, y.partner, x.n)
    return LoopProduct(BrauerDiagram(x.n, partner), loops)


def product(diagrams: Sequence[BrauerDiagram]) -> BrauerDiagram:
    """Left-to-right concatenation of several diagrams, loops discarded."""
    if not diagrams:
        raise ValueError("empty product")
    acc = diagrams[0]
    for d in diagrams[1:]:
        acc = multiply(acc, d).diagram
    return acc


def _pairings(points: list[int]) -> Iterator[list[tuple[int, int]]]:
    if not points:
        yield []
        return
    a = points[0]
    rest = points[1:]
    for k, b in enumerate(rest):
        sub = rest[:k] + rest[k + 1:]
        for tail in _pairings(sub):
            yield [(a, b)] + tail


@functools.lru_cache(maxsize=None)
def enumerate_diagrams(n: int) -> tuple[BrauerDiagram, ...]:
    """All (2n-1)!! diagrams, sorted lexicographically by canonical edge list.

    The recursive pairing always matches the smallest unmatched point first,
    so the generated edge lists are already canonical.
    """
    if n < 1:
        raise ValueError("strand count must be positive")
    out = []
    for pairing in _pairings(list(range(1, 2 * n + 1))):
        partner = [0] * (2 * n)
        for a, b in pairing:
            partner[a - 1] = b
            partner[b - 1] = a
        out.append(BrauerDiagram(n, tuple(partner)))
    out.sort(key=BrauerDiagram.sort_key)
    return tuple(out)


@functools.lru_cache(maxsize=None)
def diagram_index(n: int) -> dict[BrauerDiagram, int]:
    """Position of each diagram in the canonical enumeration order."""
    return {d: k for k, d in enumerate(enumerate_diagrams(n))}


def is_permutation(d: BrauerDiagram) -> bool:
    """True iff every edge joins a top point to a bottom point."""
    return all(d.partner[a - 1] > d.n for a in range(1, d.n + 1))


def inverse(d: BrauerDiagram) -> BrauerDiagram:
    """Transpose (row swap) of a permutation diagram."""
    if not is_permutation(d):
        raise ValueError("only permutation diagrams have inverses")
    n = d.n
    out = [0] * (2 * n)
    for a in range(1, 2 * n + 1):
        fa = a + n if a <= n else a - n
        b = d.partner[a - 1]
        out[fa - 1] = b + n if b <= n else b - n
    return BrauerDiagram(n, tuple(out))


def lower_horizontal_edges(d: BrauerDiagram) -> frozenset[tuple[int, int]]:
    """Edges with both endpoints in the bottom row, as (small, large) pairs."""
    return frozenset(
        (a, d.partner[a - 1])
        for a in range(d.n + 1, 2 * d.n + 1)
        if d.partner[a - 1] > a
    )


def upper_horizontal_edges(d: BrauerDiagram) -> frozenset[tuple[int, int]]:
    """Edges with both endpoints in the top row."""
    return frozenset(
        (a, d.partner[a - 1])
        for a in range(1, d.n + 1)
        if a < d.partner[a - 1] <= d.n
    )


def permutation_diagram(one_line: Sequence[int], n: int | None = None) -> BrauerDiagram:
    """Permutation diagram from one-line notation: top k joins bottom one_line[k-1]."""
    if n is None:
        n = len(one_line)
    if sorted(one_line) != list(range(1, n + 1)):
        raise ValueError(f"{one_line!r} is not a permutation of 1..{n}")
    partner = [0] * (2 * n)
    for k, v in enumerate(one_line, start=1):
        partner[k - 1] = v + n
        partner[v + n - 1] = k
    return BrauerDiagram(n, tuple(partner))


def one_line(d: BrauerDiagram) -> tuple[int, ...]:
    """One-line notation of a permutation diagram."""
    if not is_permutation(d):
        raise ValueError("diagram is not a permutation")
    return tuple(d.partner[a - 1] - d.n for a in range(1, d.n + 1))


def _point_name(p: int, n: int) -> str:
    return f"t{p}" if p <= n else f"b{p - n}"


def format_diagram(d: BrauerDiagram) -> str:
    """Canonical text form: edges `p-q` sorted by smaller endpoint, `|`-joined."""
    return "|".join(
        f"{_point_name(a, d.n)}-{_point_name(b, d.n)}" for a, b in d.edges()
    )


def parse_diagram(text: str) -> BrauerDiagram:
    """Inverse of format_diagram; the strand count is inferred from the points."""
    pairs = []
    max_idx = 0
    for part in text.split("|"):
        ends = part.split("-")
        if len(ends) != 2:
            raise ValueError(f"malformed edge {part!r}")
        parsed = []
        for name in ends:
            name = name.strip()
            if len(name) < 2 or name[0] not in "tb" or not name[1:].isdigit():
                raise ValueError(f"malformed point name {name!r}")
            idx = int(name[1:])
            if idx < 1:
                raise ValueError(f"point index must be >= 1 in {name!r}")
            max_idx = max(max_idx, idx)
            parsed.append((name[0], idx))
        pairs.append(tuple(parsed))
    n = max_idx
    partner = [0] * (2 * n)
    for (ra, ia), (rb, ib) in pairs:
        a = ia if ra == "t" else ia + n
        b = ib if rb == "t" else ib + n
        if partner[a - 1] or partner[b - 1]:
            raise ValueError(f"point {_point_name(a if partner[a-1] else b, n)} matched twice")
        if a == b:
            raise ValueError(f"point {_point_name(a, n)} matched to itself")
        partner[a - 1] = b
        partner[b - 1] = a
    for p in range(1, 2 * n + 1):
        if partner[p - 1] == 0:
            raise ValueError(f"point {_point_name(p, n)} unmatched")
    return BrauerDiagram(n, tuple(partner))


def double_factorial_odd(n: int) -> int:
    """(2n-1)!!, the number of diagrams on n strands."""
    out = 1
    for k in range(1, 2 * n, 2):
        out *= k
    return out
