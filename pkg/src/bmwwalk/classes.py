"""
Communication classes of the scans and their pairing machinery.

Left multiplication by r_i never touches an existing lower horizontal
edge and cannot create one, so the closed classes of every scan are the
fibers of the lower-horizontal-edge set. Classes are keyed and ordered by
that edge set; members are ordered by the canonical diagram order.

A star pairing matches two classes of equal m through the upper
configuration: identical upper horizontal edges plus the same relative
through-strand pattern once each class's free bottom points are ranked in
increasing position. The s-assignment greedily associates distinct
non-involution permutations, closed under neither inversion nor repeats,
to the members of a class; determinism matters more than the choice.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

from .brauer import (
    BrauerDiagram,
    enumerate_diagrams,
    inverse,
    lower_horizontal_edges,
    multiply,
    one_line,
    permutation_diagram,
    upper_horizontal_edges,
)
from .chains import ScanChain, restrict

LowerKey = tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class CommClass:
    """All diagrams sharing one lower-horizontal-edge set."""

    n: int
    lower_edges: LowerKey
    members: tuple[BrauerDiagram, ...]

    @property
    def m(self) -> int:
        return len(self.lower_edges)

    def __contains__(self, d: BrauerDiagram) -> bool:
        return d in set(self.members)


def lower_key(d: BrauerDiagram) -> LowerKey:
    return tuple(sorted(lower_horizontal_edges(d)))


@functools.lru_cache(maxsize=None)
def partition(n: int) -> tuple[CommClass, ...]:
    """All classes, ordered lexicographically by lower-edge key."""
    buckets: dict[LowerKey, list[BrauerDiagram]] = {}
    for d in enumerate_diagrams(n):
        buckets.setdefault(lower_key(d), []).append(d)
    out = []
    for key in sorted(buckets):
        members = tuple(sorted(buckets[key], key=BrauerDiagram.sort_key))
        out.append(CommClass(n, key, members))
    return tuple(out)


def class_of(d: BrauerDiagram) -> CommClass:
    key = lower_key(d)
    for cls in partition(d.n):
        if cls.lower_edges == key:
            return cls
    raise AssertionError("partition missed a lower-edge key")


def is_closed(cls: CommClass, chain: ScanChain) -> bool:
    """True iff no member's column places mass outside the class."""
    member_set = set(cls.members)
    for d in cls.members:
        for target, v in chain.column_of(d).items():
            if v != 0 and target not in member_set:
                return False
    return True


def submatrix(chain: ScanChain, cls: CommClass) -> ScanChain:
    """The chain restricted to a closed class, in class member order."""
    if not is_closed(cls, chain):
        raise ValueError("class is not closed under the chain")
    return restrict(chain, cls.members)


def upper_configuration(d: BrauerDiagram):
    """Upper edges plus the rank pattern of through strands.

    Free bottom points (those not covered by a lower horizontal edge) are
    ranked 1..k in increasing position; each through strand is recorded as
    (top point, rank of its bottom point). Two diagrams in classes of equal
    m agree on this data exactly when one is the star image of the other.
    """
    n = d.n
    lower = {p for edge in lower_horizontal_edges(d) for p in edge}
    free = sorted(p for p in range(n + 1, 2 * n + 1) if p not in lower)
    rank = {p: k + 1 for k, p in enumerate(free)}
    through = tuple(
        sorted((t, rank[d.partner_of(t)]) for t in range(1, n + 1) if d.partner_of(t) > n)
    )
    return (tuple(sorted(upper_horizontal_edges(d))), through)


@dataclass(frozen=True)
class StarPairing:
    """Bijection w -> w* between two classes of equal m, by upper configuration."""

    class_a: CommClass
    class_b: CommClass
    images: tuple[BrauerDiagram, ...]  # aligned with class_a.members

    def star(self, d: BrauerDiagram) -> BrauerDiagram:
        """w* for w in class_a, or w for w* in class_b (the involution)."""
        for w, ws in zip(self.class_a.members, self.images):
            if d == w:
                return ws
            if d == ws:
                return w
        raise KeyError(f"{d} lies in neither paired class")


def star_pairing(class_a: CommClass, class_b: CommClass) -> StarPairing:
    if class_a.lower_edges == class_b.lower_edges:
        raise ValueError("star pairing requires two distinct classes")
    if class_a.m != class_b.m or class_a.m < 1:
        raise ValueError("star pairing requires equal m >= 1")
    census = {}
    for w in class_b.members:
        cfg = upper_configuration(w)
        if cfg in census:
            raise ValueError("upper configuration repeats inside a class")
        census[cfg] = w
    images = []
    for w in class_a.members:
        cfg = upper_configuration(w)
        if cfg not in census:
            raise ValueError(f"no partner with the upper configuration of {w}")
        images.append(census[cfg])
    if len(set(images)) != len(images):
        raise AssertionError("star map failed to be a bijection")
    return StarPairing(class_a, class_b, tuple(images))


def perm_order(d: BrauerDiagram) -> int:
    """Multiplicative order of a permutation diagram."""
    word = one_line(d)
    order = 1
    for length in _cycle_lengths(word):
        order = order * length // math.gcd(order, length)
    return order


def _cycle_lengths(word: tuple[int, ...]):
    seen = [False] * len(word)
    for start in range(len(word)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = word[k] - 1
            length += 1
        yield length


@dataclass(frozen=True)
class SAssignment:
    """Distinct permutations s_x, of order > 2 and inverse-free, per member."""

    members: tuple[BrauerDiagram, ...]
    perms: tuple[BrauerDiagram, ...]

    def s_of(self, x: BrauerDiagram) -> BrauerDiagram:
        return self.perms[self.members.index(x)]


def involution_count(n: int) -> int:
    """Number of order-2 elements of S_n: sum over k of n!/((n-2k)! k! 2^k)."""
    if n < 1:
        raise ValueError("n must be positive")
    return sum(
        math.factorial(n) // (math.factorial(n - 2 * k) * math.factorial(k) * 2**k)
        for k in range(1, n // 2 + 1)
    )


def pick_s_assignment(cls: CommClass) -> SAssignment:
    """Greedy deterministic assignment over S_n in one-line lex order.

    Accept a permutation when its order exceeds 2 and its inverse was not
    already accepted; assign accepted permutations to members in class
    order. Requires capacity 2·|class| among the non-involutions of S_n,
    which holds exactly for the m >= 2 classes (and for m = 1 classes
    re-read at n+1 through the embedding).
    """
    n = cls.n
    needed = len(cls.members)
    capacity = math.factorial(n) - involution_count(n) - 1
    if 2 * needed > capacity:
        raise ValueError(
            f"class of size {needed} needs {2 * needed} non-involutions; "
            f"S_{n} has only {capacity}"
        )
    accepted: list[BrauerDiagram] = []
    accepted_set: set[BrauerDiagram] = set()
    for word in itertools.permutations(range(1, n + 1)):
        g = permutation_diagram(word)
        if perm_order(g) <= 2:
            continue
        if inverse(g) in accepted_set:
            continue
        accepted.append(g)
        accepted_set.add(g)
        if len(accepted) == needed:
            break
    else:
        raise AssertionError("greedy assignment exhausted S_n despite capacity")
    return SAssignment(cls.members, tuple(accepted))


def embed_diagram(d: BrauerDiagram) -> BrauerDiagram:
    """The same diagram with one vertical strand appended on the right."""
    n = d.n
    partner = [0] * (2 * n + 2)
    for a in range(1, 2 * n + 1):
        b = d.partner_of(a)
        a2 = a if a <= n else a + 1
        b2 = b if b <= n else b + 1
        partner[a2 - 1] = b2
    partner[n] = 2 * n + 2
    partner[2 * n + 1] = n + 1
    return BrauerDiagram(n + 1, tuple(partner))


def embed_m1(cls: CommClass) -> CommClass:
    """View an m = 1 class inside Br_{n+1} by appending a vertical strand.

    The embedded members form a closed set for the level-(n+1) chains K_i
    with i <= n-1, and the corresponding blocks coincide with the original
    class's blocks; Appendix-style analysis then proceeds at n+1 where the
    symmetric group is large enough for the s-assignment.
    """
    if cls.m != 1:
        raise ValueError("embedding applies to classes with exactly one lower edge")
    members = tuple(
        sorted((embed_diagram(d) for d in cls.members), key=BrauerDiagram.sort_key)
    )
    return CommClass(cls.n + 1, lower_key(members[0]), members)
