"""
Fixed reference matrices for the n = 3 chain and its class example.

The K_1 chain on 15 states decomposes as R ⊕ E1 ⊕ E2 ⊕ E3 under the
block state listings below (given as generator words, top factor first).
These matrices and the averaged two-generator example on the class of e_1
are the golden targets the verify suite and the acceptance tests compare
against, entry by entry, in exact rationals.
"""

from __future__ import annotations

from fractions import Fraction

from .brauer import BrauerDiagram, generator, identity_diagram, product

Matrix = list[list[Fraction]]


def _words_to_diagrams(n: int, words: list[list[tuple[str, int]]]) -> list[BrauerDiagram]:
    out = []
    for word in words:
        if not word:
            out.append(identity_diagram(n))
        else:
            out.append(product([generator(kind, i, n) for kind, i in word]))
    return out


def appendix_a_states() -> dict[str, list[BrauerDiagram]]:
    """Block state listings, in the reference order."""
    r, e = "r", "e"
    return {
        "R": _words_to_diagrams(3, [
            [], [(r, 1)], [(r, 2)],
            [(r, 1), (r, 2)], [(r, 2), (r, 1)], [(r, 1), (r, 2), (r, 1)],
        ]),
        "E1": _words_to_diagrams(3, [[(e, 1)], [(r, 2), (e, 1)], [(e, 2), (e, 1)]]),
        "E2": _words_to_diagrams(3, [[(e, 2)], [(r, 1), (e, 2)], [(e, 1), (e, 2)]]),
        "E3": _words_to_diagrams(3, [
            [(e, 1), (r, 2)], [(r, 2), (e, 1), (r, 2)], [(e, 2), (e, 1), (r, 2)],
        ]),
    }


def appendix_a_k1(theta: Fraction) -> dict[str, Matrix]:
    """The four diagonal blocks of K_1 at n = 3, rows/columns as listed."""
    t = Fraction(theta)
    u = 1 - t
    z, o = Fraction(0), Fraction(1)
    return {
        "R": [
            [z, t, z, z, z, z],
            [o, u, z, z, z, z],
            [z, z, z, t, z, z],
            [z, z, o, u, z, z],
            [z, z, z, z, z, t],
            [z, z, z, z, o, u],
        ],
        "E1": [
            [o, z, z],
            [z, z, t],
            [z, o, u],
        ],
        "E2": [
            [z, t, z],
            [o, u, z],
            [z, z, o],
        ],
        "E3": [
            [o, z, z],
            [z, z, t],
            [z, o, u],
        ],
    }


def example_states() -> tuple[list[BrauerDiagram], list[BrauerDiagram]]:
    """The paired classes of e_1 and e_1·r_2, in the reference order."""
    states = appendix_a_states()
    return states["E1"], states["E3"]


def example_2k1(theta: Fraction) -> Matrix:
    """2·[K]_1 for K the n = 3 random scan, restricted to the class of e_1."""
    t = Fraction(theta)
    return [
        [Fraction(1), t, Fraction(0)],
        [Fraction(1), 1 - t, t],
        [Fraction(0), Fraction(1), 2 - t],
    ]


def restrict_to_listing(chain, listing: list[BrauerDiagram]) -> Matrix:
    """Dense block of a chain on an explicitly ordered state listing."""
    return [[chain.entry(row, col) for col in listing] for row in listing]
