"""
Seeded simulation of the scans, one diagram at a time.

The sampler never materializes a scan matrix: each step looks up the
r_i-neighbour of the current diagram and the sign of the length change in
precomputed per-n tables, then resolves the theta-coin. Bernoulli(theta)
is exact for rational theta: a uniform variate is revealed 64 bits at a
time and compared against theta by integer arithmetic, extending only on
the (probability 2^-64) boundary chunk.

Reproducibility contract: run_scan(seed) consumes a single random.Random
stream; the random scan draws its generator index immediately before each
step and the theta-coin, when needed, immediately after. For independent
walks, sample_distribution seeds a master stream with the report seed and
draws one 64-bit child seed per walk, in walk order, before any walk runs.
"""

from __future__ import annotations

import functools
import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .brauer import (
    BrauerDiagram,
    diagram_index,
    enumerate_diagrams,
    format_diagram,
    generator,
    multiply,
)
from .chains import scan_sequence, validate_theta
from .classes import class_of
from .words import length_table


@functools.lru_cache(maxsize=None)
def _move_tables(n: int) -> dict[int, tuple[tuple[int, ...], tuple[bool, ...]]]:
    """Per generator index: target state index and needs-coin flag arrays."""
    states = enumerate_diagrams(n)
    index = {d: k for k, d in enumerate(states)}
    lengths = length_table(n)
    out = {}
    for i in range(1, n):
        ri = generator("r", i, n)
        targets = []
        coins = []
        for d in states:
            dprime = multiply(ri, d).diagram
            targets.append(index[dprime])
            coins.append(lengths[dprime][2] < lengths[d][2])
        out[i] = (tuple(targets), tuple(coins))
    return out


def bernoulli(rng: random.Random, theta: Fraction) -> bool:
    """Exact theta-coin: True with probability exactly theta."""
    if theta == Fraction(1, 2):
        return rng.getrandbits(1) == 1
    p, q = theta.numerator, theta.denominator
    acc = 0
    bits = 0
    while True:
        acc = (acc << 64) | rng.getrandbits(64)
        bits += 64
        scaled = p << bits
        if (acc + 1) * q <= scaled:
            return True
        if acc * q >= scaled:
            return False


@dataclass
class WalkState:
    """A walk in progress; the rng advances as the walk steps."""

    current: BrauerDiagram
    step: int
    rng: random.Random


def step_walk(state: WalkState, i: int, theta: Fraction) -> WalkState:
    """One K_i step: move to r_i·d sure when L does not drop, else coin."""
    theta = validate_theta(theta)
    n = state.current.n
    tables = _move_tables(n)
    if i not in tables:
        raise ValueError(f"generator index {i} out of range 1..{n - 1}")
    states = enumerate_diagrams(n)
    idx = diagram_index(n)[state.current]
    targets, coins = tables[i]
    if not coins[idx] or bernoulli(state.rng, theta):
        nxt = states[targets[idx]]
    else:
        nxt = state.current
    return WalkState(nxt, state.step + 1, state.rng)


def _run_indices(
    idx: int,
    indices,
    targets_by_i,
    coins_by_i,
    rng: random.Random,
    theta: Fraction,
) -> int:
    half = theta == Fraction(1, 2)
    p, q = theta.numerator, theta.denominator
    getrandbits = rng.getrandbits
    for i in indices:
        targets, coins = targets_by_i[i], coins_by_i[i]
        if not coins[idx]:
            idx = targets[idx]
            continue
        if half:
            heads = getrandbits(1) == 1
        else:
            acc = 0
            bits = 0
            while True:
                acc = (acc << 64) | getrandbits(64)
                bits += 64
                scaled = p << bits
                if (acc + 1) * q <= scaled:
                    heads = True
                    break
                if acc * q >= scaled:
                    heads = False
                    break
        if heads:
            idx = targets[idx]
    return idx


def run_scan(
    start: BrauerDiagram,
    kind: str,
    theta: Fraction,
    sweeps: int,
    seed: int,
) -> WalkState:
    """Run whole sweeps of a scan from a seeded stream.

    A sweep is the scan's generator sequence: 2(n-1) steps for the short
    scan, n(n-1) for the long one, one step for gen:i, and 2(n-1)
    uniformly drawn indices for the random scan.
    """
    theta = validate_theta(theta)
    if sweeps < 0:
        raise ValueError("sweeps must be non-negative")
    n = start.n
    rng = random.Random(seed)
    tables = _move_tables(n)
    targets_by_i = {i: t for i, (t, _) in tables.items()}
    coins_by_i = {i: c for i, (_, c) in tables.items()}
    states = enumerate_diagrams(n)
    idx = diagram_index(n)[start]
    steps = 0
    if kind == "random":
        per_sweep = 2 * (n - 1)
        for _ in range(sweeps):
            indices = [rng.randrange(1, n) for _ in range(per_sweep)]
            idx = _run_indices(idx, indices, targets_by_i, coins_by_i, rng, theta)
            steps += per_sweep
    else:
        seq = scan_sequence(kind, n)
        for _ in range(sweeps):
            idx = _run_indices(idx, seq, targets_by_i, coins_by_i, rng, theta)
            steps += len(seq)
    return WalkState(states[idx], steps, rng)


@dataclass(frozen=True)
class SampleReport:
    """Empirical counts of walk endpoints against the exact class law."""

    scan: str
    theta: str
    sweeps: int
    count: int
    seed: int
    start: str
    counts: tuple[tuple[str, int], ...]  # class members in class order
    chi_square: float | None
    p_value: float | None
    degenerate: bool

    def as_json(self) -> str:
        return json.dumps(
            {
                "scan": self.scan,
                "theta": self.theta,
                "sweeps": self.sweeps,
                "count": self.count,
                "seed": self.seed,
                "start": self.start,
                "counts": dict(self.counts),
                "chi_square": self.chi_square,
                "p_value": self.p_value,
                "degenerate": self.degenerate,
            },
            indent=2,
        )


def _chi2_sf(stat: float, df: int) -> float:
    from scipy.stats import chi2

    return float(chi2.sf(stat, df))


def sample_distribution(
    start: BrauerDiagram,
    kind: str,
    theta: Fraction,
    sweeps: int,
    count: int,
    seed: int,
) -> SampleReport:
    """Endpoint frequencies of independent seeded walks vs exact pi."""
    theta = validate_theta(theta)
    if count < 1:
        raise ValueError("count must be >= 1")
    n = start.n
    cls = class_of(start)
    master = random.Random(seed)
    child_seeds = [master.getrandbits(64) for _ in range(count)]

    tables = _move_tables(n)
    targets_by_i = {i: t for i, (t, _) in tables.items()}
    coins_by_i = {i: c for i, (_, c) in tables.items()}
    states = enumerate_diagrams(n)
    start_idx = diagram_index(n)[start]
    seq = None if kind == "random" else scan_sequence(kind, n)
    per_sweep = 2 * (n - 1) if kind == "random" else len(seq)

    tallies: dict[int, int] = {}
    for child in child_seeds:
        rng = random.Random(child)
        idx = start_idx
        for _ in range(sweeps):
            indices = (
                [rng.randrange(1, n) for _ in range(per_sweep)]
                if seq is None
                else seq
            )
            idx = _run_indices(idx, indices, targets_by_i, coins_by_i, rng, theta)
        tallies[idx] = tallies.get(idx, 0) + 1

    from .chains import basis_distribution

    pi = basis_distribution(cls.members, theta)
    index = diagram_index(n)
    counts = tuple(
        (format_diagram(d), tallies.get(index[d], 0)) for d in cls.members
    )
    degenerate = count < 5 * len(cls.members)
    chi_square = None
    p_value = None
    if count >= 2:
        stat = 0.0
        for (name, obs), w in zip(counts, pi.weights):
            expected = float(w) * count
            stat += (obs - expected) ** 2 / expected
        chi_square = stat
        if not degenerate:
            p_value = _chi2_sf(stat, len(cls.members) - 1)
    return SampleReport(
        scan=kind,
        theta=str(theta),
        sweeps=sweeps,
        count=count,
        seed=seed,
        start=format_diagram(start),
        counts=counts,
        chi_square=chi_square,
        p_value=p_value,
        degenerate=degenerate,
    )


def one_step_frequencies(
    start: BrauerDiagram, i: int, theta: Fraction, trials: int, seed: int
) -> dict[BrauerDiagram, int]:
    """Empirical one-step law of K_i from a fixed state."""
    theta = validate_theta(theta)
    n = start.n
    tables = _move_tables(n)
    targets, coins = tables[i]
    states = enumerate_diagrams(n)
    idx = diagram_index(n)[start]
    rng = random.Random(seed)
    out: dict[int, int] = {}
    for _ in range(trials):
        if not coins[idx] or bernoulli(rng, theta):
            landed = targets[idx]
        else:
            landed = idx
        out[landed] = out.get(landed, 0) + 1
    return {states[k]: v for k, v in out.items()}
