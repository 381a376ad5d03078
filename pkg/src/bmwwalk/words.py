"""
Reduced generator words and the length data they induce.

Words are sequences of letters r_i / e_i, evaluated left to right by
diagram concatenation at q = 1. A constrained word never contains the
adjacent pair e_{i+1} r_i. The search space is the automaton whose states
are (diagram, last letter) with that single forbidden transition; the
distance of a diagram from the identity state is l'_Br(d).

The canonical reduced expression of a diagram is the lexicographically
least among its minimum-length constrained words, under the letter order
r_1 < e_1 < r_2 < e_2 < ... ; e(d) is the e-letter count of that word and
the walk length is L(d) = l'_Br(d) + e(d). A breadth-first search that
expands letters in lex order reaches every diagram first through exactly
that word.

Minimal constrained words of one diagram do NOT all share one e-count:
the smallest counterexamples are e2e1r2 = e2r2r1 at n = 3 and, immune to
any adjacent-pair strengthening of the constraint, e2e1e3e2 = e2r3r1e2 at
n = 4. all_minimal_words exposes the full set so callers can observe
this; the canonical word keeps every derived quantity deterministic.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass

from .brauer import (
    BrauerDiagram,
    LoopProduct,
    _multiply_raw,
    generator,
    identity_diagram,
    multiply,
)

_LastKey = "tuple[str, int] | None"


@dataclass(frozen=True)
class Letter:
    """A single generator letter."""

    kind: str
    index: int

    def __post_init__(self):
        if self.kind not in ("r", "e"):
            raise ValueError(f"letter kind must be 'r' or 'e', got {self.kind!r}")
        if self.index < 1:
            raise ValueError(f"letter index must be >= 1, got {self.index}")

    def sort_key(self) -> tuple[int, int]:
        return (self.index, 0 if self.kind == "r" else 1)

    def __str__(self) -> str:
        return f"{self.kind}{self.index}"


@dataclass(frozen=True)
class ReducedWord:
    """A minimum-length constrained word together with its target and counts."""

    letters: tuple[Letter, ...]
    target: BrauerDiagram
    length: int
    e_count: int

    def __str__(self) -> str:
        return "".join(str(letter) for letter in self.letters) or "id"


class WordSearchError(RuntimeError):
    """The constrained BFS failed to reach a diagram (should be impossible)."""


class WordEnumerationCap(RuntimeError):
    """all_minimal_words exceeded its word cap."""


def _forbidden(last, kind: str, index: int) -> bool:
    # The single constraint: no e_{i+1} immediately followed by r_i.
    return last is not None and last[0] == "e" and kind == "r" and last[1] == index + 1


@functools.lru_cache(maxsize=None)
def _letter_order(n: int) -> tuple[tuple[str, int], ...]:
    out = []
    for i in range(1, n):
        out.append(("r", i))
        out.append(("e", i))
    return tuple(out)


class _Search:
    """Constrained-word BFS over (diagram, last-letter) states for one n."""

    def __init__(self, n: int):
        self.n = n
        gens = {key: generator(key[0], key[1], n).partner for key in _letter_order(n)}
        start = (identity_diagram(n).partner, None)
        dist: dict = {start: 0}
        parent: dict = {start: None}
        first: dict = {start[0]: start}
        layers: list[list] = [[start]]
        queue = deque([start])
        while queue:
            state = queue.popleft()
            d, last = state
            ln = dist[state]
            for key in _letter_order(n):
                if _forbidden(last, key[0], key[1]):
                    continue
                nd, _ = _multiply_raw(d, gens[key], n)
                t = (nd, key)
                if t not in dist:
                    dist[t] = ln + 1
                    parent[t] = (state, key)
                    if nd not in first:
                        first[nd] = t
                    while len(layers) <= ln + 1:
                        layers.append([])
                    layers[ln + 1].append(t)
                    queue.append(t)
        self.gens = gens
        self.dist = dist
        self.parent = parent
        self.first = first
        self.layers = layers
        expected = 1
        for k in range(1, 2 * n, 2):
            expected *= k
        if len(first) != expected:
            raise WordSearchError(
                f"BFS reached {len(first)} of {expected} diagrams at n={n}"
            )

    def word_for(self, partner: tuple[int, ...]) -> tuple[tuple[str, int], ...]:
        state = self.first[partner]
        letters = []
        while self.parent[state] is not None:
            state, key = self.parent[state]
            letters.append(key)
        return tuple(reversed(letters))

    @functools.cached_property
    def reverse_dag(self) -> dict:
        """Shortest-path predecessors of every state, letter included."""
        rev: dict = {state: [] for state in self.dist}
        for layer in self.layers[:-1]:
            for state in layer:
                d, last = state
                ln = self.dist[state]
                for key in _letter_order(self.n):
                    if _forbidden(last, key[0], key[1]):
                        continue
                    nd, _ = _multiply_raw(d, self.gens[key], self.n)
                    t = (nd, key)
                    if self.dist[t] == ln + 1:
                        rev[t].append((state, key))
        return rev


@functools.lru_cache(maxsize=None)
def _search(n: int) -> _Search:
    return _Search(n)


@functools.lru_cache(maxsize=None)
def length_table(n: int) -> dict[BrauerDiagram, tuple[int, int, int]]:
    """Per diagram: (l'_Br, e count of the canonical word, L)."""
    search = _search(n)
    out = {}
    for partner, state in search.first.items():
        lp = search.dist[state]
        word = search.word_for(partner)
        ec = sum(1 for kind, _ in word if kind == "e")
        out[BrauerDiagram(n, partner)] = (lp, ec, lp + ec)
    return out


def reduced_expression(d: BrauerDiagram) -> ReducedWord:
    """The canonical (lex-least minimum-length constrained) word for d."""
    search = _search(d.n)
    if d.partner not in search.first:
        raise WordSearchError(f"diagram unreachable at n={d.n}")
    word = search.word_for(d.partner)
    letters = tuple(Letter(kind, index) for kind, index in word)
    return ReducedWord(
        letters=letters,
        target=d,
        length=len(letters),
        e_count=sum(1 for letter in letters if letter.kind == "e"),
    )


def lprime(d: BrauerDiagram) -> int:
    return length_table(d.n)[d][0]


def e_count(d: BrauerDiagram) -> int:
    return length_table(d.n)[d][1]


def bmw_length(d: BrauerDiagram) -> int:
    """L(d) = l'_Br(d) + e(d), the walk's graded length."""
    return length_table(d.n)[d][2]


def evaluate(letters, n: int) -> LoopProduct:
    """Evaluate a word left to right by concatenation, accumulating loops."""
    acc = identity_diagram(n)
    loops = 0
    for letter in letters:
        step = multiply(acc, generator(letter.kind, letter.index, n))
        acc = step.diagram
        loops += step.loops
    return LoopProduct(acc, loops)


def all_minimal_words(d: BrauerDiagram, max_words: int = 200_000) -> tuple[ReducedWord, ...]:
    """Every minimum-length constrained word for d, lexicographically sorted.

    Enumerates shortest paths in the BFS DAG; raises WordEnumerationCap when
    more than max_words words would be produced. Intended for small n.
    """
    search = _search(d.n)
    if d.partner not in search.first:
        raise WordSearchError(f"diagram unreachable at n={d.n}")
    lp = search.dist[search.first[d.partner]]
    rev = search.reverse_dag
    targets = [
        (d.partner, key)
        for key in list(_letter_order(d.n)) + [None]
        if (d.partner, key) in search.dist and search.dist[(d.partner, key)] == lp
    ]
    words: list[tuple[tuple[str, int], ...]] = []

    def back(state, suffix):
        # suffix collects letters from the end of the word backwards; a
        # state's own last letter is the label of every edge into it.
        if len(words) > max_words:
            raise WordEnumerationCap(f"more than {max_words} minimal words for {d}")
        last = state[1]
        if last is None:
            words.append(tuple(reversed(suffix)))
            return
        suffix.append(last)
        for prev, _ in rev[state]:
            back(prev, suffix)
        suffix.pop()

    for t in targets:
        back(t, [])

    out = []
    for word in sorted(set(words)):
        letters = tuple(Letter(kind, index) for kind, index in word)
        out.append(
            ReducedWord(
                letters=letters,
                target=d,
                length=len(letters),
                e_count=sum(1 for letter in letters if letter.kind == "e"),
            )
        )
    return tuple(out)


@functools.lru_cache(maxsize=None)
def e_count_sets(n: int) -> dict[BrauerDiagram, frozenset[int]]:
    """All e-counts achieved by minimal constrained words, per diagram.

    Layered dynamic programming over the BFS DAG; cheaper than enumerating
    the words themselves.
    """
    search = _search(n)
    esets: dict = {state: set() for state in search.dist}
    esets[(identity_diagram(n).partner, None)] = {0}
    for k, layer in enumerate(search.layers[:-1]):
        for state in layer:
            d, last = state
            for key in _letter_order(n):
                if _forbidden(last, key[0], key[1]):
                    continue
                nd, _ = _multiply_raw(d, search.gens[key], n)
                t = (nd, key)
                if search.dist[t] == k + 1:
                    add = 1 if key[0] == "e" else 0
                    esets[t] |= {e + add for e in esets[state]}
    out: dict[BrauerDiagram, set[int]] = {}
    for partner, state in search.first.items():
        lp = search.dist[state]
        acc: set[int] = set()
        for key in list(_letter_order(n)) + [None]:
            s = (partner, key)
            if s in search.dist and search.dist[s] == lp:
                acc |= esets[s]
        out[BrauerDiagram(n, partner)] = acc
    return {d: frozenset(s) for d, s in out.items()}
