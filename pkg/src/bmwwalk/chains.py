"""
Exact-rational Markov chains over the diagram basis.

Matrices are column-stochastic and sparse: the entry stored at
(row y, column x) is the probability of moving from state x to state y in
one step, matching the column layout of a left-multiplication operator.
Products compose in column-action order, so the rightmost factor of a
matrix product acts first on a distribution.

Everything here is a fractions.Fraction; no floating point enters any
chain, stationary distribution, or distance computation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .brauer import BrauerDiagram, enumerate_diagrams, generator, multiply
from .words import length_table

Column = tuple[tuple[int, Fraction], ...]


class FixedPointError(RuntimeError):
    """A distribution claimed stationary is not an exact fixed point."""


def validate_theta(theta: Fraction) -> Fraction:
    theta = Fraction(theta)
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie strictly between 0 and 1, got {theta}")
    return theta


def parse_theta(text: str) -> Fraction:
    """Parse an exact rational 'P/Q' (or integer ratio string) into (0,1)."""
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
    return validate_theta(value)


@dataclass(frozen=True)
class Distribution:
    """Exact weights over an ordered state subset; non-negative, sum 1."""

    states: tuple[BrauerDiagram, ...]
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.states) != len(self.weights):
            raise ValueError("states and weights must have equal length")
        if any(w < 0 for w in self.weights):
            raise ValueError("negative weight in distribution")
        if sum(self.weights) != 1:
            raise ValueError("distribution weights must sum to exactly 1")

    def weight_of(self, d: BrauerDiagram) -> Fraction:
        return self.weights[self.states.index(d)]


def delta_distribution(states: tuple[BrauerDiagram, ...], x: BrauerDiagram) -> Distribution:
    k = states.index(x)
    return Distribution(
        states, tuple(Fraction(1 if j == k else 0) for j in range(len(states)))
    )


@dataclass(frozen=True)
class ScanChain:
    """Sparse column-stochastic matrix over an ordered diagram state list."""

    n: int
    states: tuple[BrauerDiagram, ...]
    columns: tuple[Column, ...]
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.columns) != len(self.states):
            raise ValueError("one column per state required")
        object.__setattr__(self, "_index", {d: k for k, d in enumerate(self.states)})

    def state_index(self, d: BrauerDiagram) -> int:
        return self._index[d]

    def entry(self, row: BrauerDiagram, col: BrauerDiagram) -> Fraction:
        r = self._index[row]
        for rr, v in self.columns[self._index[col]]:
            if rr == r:
                return v
        return Fraction(0)

    def column_of(self, col: BrauerDiagram) -> dict[BrauerDiagram, Fraction]:
        return {self.states[r]: v for r, v in self.columns[self._index[col]]}

    def check_column_stochastic(self) -> None:
        for k, col in enumerate(self.columns):
            if any(v < 0 for _, v in col):
                raise ValueError(f"negative entry in column {k}")
            if sum(v for _, v in col) != 1:
                raise ValueError(f"column {k} does not sum to 1 exactly")

    def is_symmetric(self) -> bool:
        sparse = {}
        for c, col in enumerate(self.columns):
            for r, v in col:
                sparse[(r, c)] = v
        return all(sparse.get((c, r), Fraction(0)) == v for (r, c), v in sparse.items())

    def __matmul__(self, other: "ScanChain") -> "ScanChain":
        """Matrix product; (A @ B) applies B first."""
        if self.states != other.states:
            raise ValueError("chains must share the same state list")
        cols = []
        for col in other.columns:
            acc: dict[int, Fraction] = {}
            for mid, w in col:
                for r, v in self.columns[mid]:
                    acc[r] = acc.get(r, Fraction(0)) + w * v
            cols.append(tuple(sorted((r, v) for r, v in acc.items() if v != 0)))
        return ScanChain(self.n, self.states, tuple(cols))


def _column(entries: dict[int, Fraction]) -> Column:
    return tuple(sorted((r, v) for r, v in entries.items() if v != 0))


def identity_chain(n: int, states: tuple[BrauerDiagram, ...] | None = None) -> ScanChain:
    if states is None:
        states = enumerate_diagrams(n)
    cols = tuple(((k, Fraction(1)),) for k in range(len(states)))
    return ScanChain(n, states, cols)


def build_ki(n: int, i: int, theta: Fraction) -> ScanChain:
    """The Metropolis chain K_i for left multiplication by r_i.

    Column at d: with d' = r_i·d (loops dropped), a single entry 1 at d'
    when L(d') >= L(d), else theta at d' and 1-theta at d.
    """
    theta = validate_theta(theta)
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range 1..{n - 1}")
    states = enumerate_diagrams(n)
    index = {d: k for k, d in enumerate(states)}
    lengths = length_table(n)
    ri = generator("r", i, n)
    cols = []
    for d in states:
        dprime = multiply(ri, d).diagram
        if lengths[dprime][2] >= lengths[d][2]:
            cols.append(_column({index[dprime]: Fraction(1)}))
        else:
            cols.append(_column({index[dprime]: theta, index[d]: 1 - theta}))
    return ScanChain(n, states, tuple(cols))


def shift_proposal(n: int, i: int) -> ScanChain:
    """The deterministic proposal P'_i: from d move to r_i·d (symmetric)."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"generator index {i} out of range 1..{n - 1}")
    states = enumerate_diagrams(n)
    index = {d: k for k, d in enumerate(states)}
    ri = generator("r", i, n)
    cols = tuple(
        _column({index[multiply(ri, d).diagram]: Fraction(1)}) for d in states
    )
    return ScanChain(n, states, cols)


def metropolize(proposal: ScanChain, pi: Distribution) -> ScanChain:
    """Metropolis modification of a symmetric proposal toward target pi."""
    if proposal.states != pi.states:
        raise ValueError("proposal and target must share the same state list")
    if not proposal.is_symmetric():
        raise ValueError("proposal chain is not symmetric")
    if any(w == 0 for w in pi.weights):
        raise ValueError("target distribution must be positive on the state set")
    cols = []
    for x, col in enumerate(proposal.columns):
        entries: dict[int, Fraction] = {}
        diag = Fraction(0)
        for y, p in col:
            if y == x:
                diag += p
                continue
            ratio = pi.weights[y] / pi.weights[x]
            if ratio >= 1:
                entries[y] = entries.get(y, Fraction(0)) + p
            else:
                entries[y] = entries.get(y, Fraction(0)) + p * ratio
                diag += p * (1 - ratio)
        if diag != 0:
            entries[x] = entries.get(x, Fraction(0)) + diag
        cols.append(_column(entries))
    return ScanChain(proposal.n, proposal.states, tuple(cols))


def scan_sequence(kind: str, n: int) -> tuple[int, ...]:
    """Generator indices of one sweep, in the order they are applied.

    short: 1, 2, ..., n-1, n-1, ..., 2, 1.
    long:  the blocks (1,1), (1,2,2,1), ..., (1,...,n-1,n-1,...,1).
    gen:i: the single index i.
    The random scan has no deterministic sequence and is rejected here.
    """
    if kind == "short":
        up = list(range(1, n))
        return tuple(up + up[::-1])
    if kind == "long":
        seq: list[int] = []
        for k in range(1, n):
            up = list(range(1, k + 1))
            seq.extend(up + up[::-1])
        return tuple(seq)
    if kind.startswith("gen:"):
        i = int(kind.split(":", 1)[1])
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} out of range 1..{n - 1}")
        return (i,)
    raise ValueError(f"no deterministic sweep for scan kind {kind!r}")


def compose_scan(kind: str, n: int, theta: Fraction) -> ScanChain:
    """The scan matrix: random, short, long, or a single K_i ('gen:i')."""
    theta = validate_theta(theta)
    if kind == "random":
        states = enumerate_diagrams(n)
        acc: list[dict[int, Fraction]] = [dict() for _ in states]
        share = Fraction(1, n - 1)
        for i in range(1, n):
            ki = build_ki(n, i, theta)
            for c, col in enumerate(ki.columns):
                for r, v in col:
                    acc[c][r] = acc[c].get(r, Fraction(0)) + share * v
        return ScanChain(n, states, tuple(_column(c) for c in acc))
    seq = scan_sequence(kind, n)
    factors = {i: build_ki(n, i, theta) for i in set(seq)}
    out = identity_chain(n)
    for i in seq:
        out = factors[i] @ out  # applied-first factors accumulate on the right
    return out


def basis_distribution(
    states: tuple[BrauerDiagram, ...], theta: Fraction
) -> Distribution:
    """Weights proportional to theta^{-L(d)} over the given states."""
    theta = validate_theta(theta)
    n = states[0].n
    lengths = length_table(n)
    raw = [theta ** (-lengths[d][2]) for d in states]
    total = sum(raw)
    return Distribution(tuple(states), tuple(w / total for w in raw))


def stationary(
    chain: ScanChain, members: tuple[BrauerDiagram, ...], theta: Fraction
) -> Distribution:
    """The class-restricted stationary distribution, verified exactly.

    Raises FixedPointError if the class is not closed under the chain or
    theta^{-L} normalized over the class is not an exact fixed point.
    """
    pi = basis_distribution(members, theta)
    member_set = set(members)
    index = {d: k for k, d in enumerate(members)}
    image = [Fraction(0)] * len(members)
    for d in members:
        for target, v in chain.column_of(d).items():
            if v == 0:
                continue
            if target not in member_set:
                raise FixedPointError(
                    f"class is not closed: {d} reaches {target} with weight {v}"
                )
            image[index[target]] += pi.weights[index[d]] * v
    if tuple(image) != pi.weights:
        raise FixedPointError(
            "theta^{-L} restricted to the class is not a fixed point of the chain"
        )
    return pi


def step(chain: ScanChain, dist: Distribution) -> Distribution:
    """One exact chain step applied to a distribution over chain.states."""
    if dist.states != chain.states:
        raise ValueError("distribution must be over the chain's state list")
    out = [Fraction(0)] * len(chain.states)
    for c, w in enumerate(dist.weights):
        if w == 0:
            continue
        for r, v in chain.columns[c]:
            out[r] += w * v
    return Distribution(chain.states, tuple(out))


def power(chain: ScanChain, m: int) -> ScanChain:
    """Exact m-th matrix power; power(chain, 0) is the identity."""
    if m < 0:
        raise ValueError("negative chain power")
    out = identity_chain(chain.n, chain.states)
    base = chain
    while m:
        if m & 1:
            out = base @ out
        m >>= 1
        if m:
            base = base @ base
    return out


def restrict(chain: ScanChain, members: tuple[BrauerDiagram, ...]) -> ScanChain:
    """Submatrix of the chain on a closed state subset."""
    index = {d: k for k, d in enumerate(members)}
    member_set = set(members)
    cols = []
    for d in members:
        entries: dict[int, Fraction] = {}
        for target, v in chain.column_of(d).items():
            if target not in member_set:
                raise ValueError(f"subset not closed: {d} reaches {target}")
            entries[index[target]] = v
        cols.append(_column(entries))
    return ScanChain(chain.n, tuple(members), tuple(cols))


def tv_distance(d1: Distribution, d2: Distribution) -> Fraction:
    """Total variation distance, (1/2)·sum |d1 - d2|."""
    if d1.states != d2.states:
        raise ValueError("distributions must share the same state list")
    return sum(
        (abs(a - b) for a, b in zip(d1.weights, d2.weights)), Fraction(0)
    ) / 2


def tv_distance_subsets(d1: Distribution, d2: Distribution) -> Fraction:
    """TV by its max-over-subsets definition; brute force, small supports only."""
    if d1.states != d2.states:
        raise ValueError("distributions must share the same state list")
    k = len(d1.states)
    if k > 16:
        raise ValueError("subset enumeration limited to 16 states")
    best = Fraction(0)
    for mask in range(1 << k):
        acc = Fraction(0)
        for j in range(k):
            if mask >> j & 1:
                acc += d1.weights[j] - d2.weights[j]
        best = max(best, abs(acc))
    return best


def chi2_norm(f: Distribution, pi: Distribution) -> Fraction:
    """The chi-square diagnostic ||f/pi - 1||_2^2 = sum (f/pi - 1)^2 pi.

    Uses the convention f/pi = 0 wherever pi vanishes, so zero-mass states
    contribute nothing.
    """
    if f.states != pi.states:
        raise ValueError("distributions must share the same state list")
    out = Fraction(0)
    for fw, pw in zip(f.weights, pi.weights):
        if pw == 0:
            continue
        out += (fw / pw - 1) ** 2 * pw
    return out
