"""
Exact arithmetic in Q adjoined sqrt(theta) and sqrt(Z).

Shifted-basis computations live in the field Q(sqrt(theta), sqrt(Z)) for
Z the class normalizer. An element is stored as four rational coordinates
(a, b, c, d) meaning a + b*sqrt(theta) + c*sqrt(Z) + d*sqrt(theta*Z).

Coordinates are canonical: whenever theta, Z, or theta*Z is a rational
square the corresponding radical is folded into the rational coordinates
at construction, so {1, sqrt(theta), sqrt(Z), sqrt(theta*Z)} restricted to
the surviving coordinates is linearly independent over Q and an element
is zero exactly when all its coordinates are zero.

Signs of nonzero elements are decided by adaptive-precision interval
evaluation: rational square-root enclosures are refined (doubling the bit
count) until the interval excludes zero. Exact zeros short-circuit via
the canonical form, so the refinement always terminates; a hard cap
raises SignPrecisionError rather than guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_SIGN_BITS_CAP = 1 << 16


class SignPrecisionError(RuntimeError):
    """Interval refinement hit the precision cap without deciding a sign."""


def exact_sqrt(q: Fraction) -> Fraction | None:
    """The exact rational square root of q, or None if q is not a square."""
    if q < 0:
        raise ValueError("negative radicand")
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt_bounds(q: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Rational enclosure lo <= sqrt(q) <= hi with hi - lo <= 2^-bits."""
    p, r = q.numerator, q.denominator
    t = math.isqrt(p * r << (2 * bits))
    scale = r << bits
    return Fraction(t, scale), Fraction(t + 1, scale)


@dataclass(frozen=True)
class QuadField:
    """The coefficient field Q(sqrt(theta), sqrt(Z))."""

    theta: Fraction
    z: Fraction

    def __post_init__(self):
        if self.theta <= 0 or self.z <= 0:
            raise ValueError("radicands must be positive")

    @property
    def _roots(self) -> tuple[Fraction | None, Fraction | None, Fraction | None]:
        return (
            exact_sqrt(self.theta),
            exact_sqrt(self.z),
            exact_sqrt(self.theta * self.z),
        )

    def canonicalize(
        self, a: Fraction, b: Fraction, c: Fraction, d: Fraction
    ) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        rt, rz, rtz = self._roots
        if rt is not None:
            a, b = a + b * rt, Fraction(0)
            c, d = c + d * rt, Fraction(0)
        if rz is not None:
            a, c = a + c * rz, Fraction(0)
            b, d = b + d * rz, Fraction(0)
        elif rt is None and rtz is not None:
            # sqrt(Z) = sqrt(theta*Z)/sqrt(theta) = rtz*sqrt(theta)/theta
            a, d = a + d * rtz, Fraction(0)
            b, c = b + c * rtz / self.theta, Fraction(0)
        return a, b, c, d

    def element(self, a=0, b=0, c=0, d=0) -> "ExtScalar":
        coords = self.canonicalize(Fraction(a), Fraction(b), Fraction(c), Fraction(d))
        return ExtScalar(self, coords)

    def zero(self) -> "ExtScalar":
        return self.element()

    def one(self) -> "ExtScalar":
        return self.element(1)

    def from_rational(self, q) -> "ExtScalar":
        return self.element(Fraction(q))

    def sqrt_theta(self) -> "ExtScalar":
        return self.element(b=1)

    def sqrt_z(self) -> "ExtScalar":
        return self.element(c=1)

    def theta_half_power(self, k: int) -> "ExtScalar":
        """theta^(k/2) for integer k, negative allowed."""
        q, rem = divmod(k, 2)
        whole = Fraction(self.theta) ** q
        return self.element(a=whole) if rem == 0 else self.element(b=whole)


@dataclass(frozen=True)
class ExtScalar:
    """An element of a QuadField, in canonical coordinates."""

    field: QuadField
    coords: tuple[Fraction, Fraction, Fraction, Fraction]

    def _check(self, other: "ExtScalar") -> "ExtScalar":
        if isinstance(other, ExtScalar):
            if other.field != self.field:
                raise ValueError("scalars from different fields")
            return other
        return self.field.from_rational(other)

    def __add__(self, other) -> "ExtScalar":
        other = self._check(other)
        return ExtScalar(
            self.field, tuple(x + y for x, y in zip(self.coords, other.coords))
        )

    __radd__ = __add__

    def __neg__(self) -> "ExtScalar":
        return ExtScalar(self.field, tuple(-x for x in self.coords))

    def __sub__(self, other) -> "ExtScalar":
        return self + (-self._check(other))

    def __rsub__(self, other) -> "ExtScalar":
        return self._check(other) - self

    def __mul__(self, other) -> "ExtScalar":
        other = self._check(other)
        a1, b1, c1, d1 = self.coords
        a2, b2, c2, d2 = other.coords
        t, z = self.field.theta, self.field.z
        a = a1 * a2 + b1 * b2 * t + c1 * c2 * z + d1 * d2 * t * z
        b = a1 * b2 + b1 * a2 + (c1 * d2 + d1 * c2) * z
        c = a1 * c2 + c1 * a2 + (b1 * d2 + d1 * b2) * t
        d = a1 * d2 + d1 * a2 + b1 * c2 + c1 * b2
        return ExtScalar(self.field, self.field.canonicalize(a, b, c, d))

    __rmul__ = __mul__

    def _conj_theta(self) -> "ExtScalar":
        a, b, c, d = self.coords
        return ExtScalar(self.field, (a, -b, c, -d))

    def _conj_z(self) -> "ExtScalar":
        a, b, c, d = self.coords
        return ExtScalar(self.field, (a, b, -c, -d))

    def inverse(self) -> "ExtScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverting zero scalar")
        partial = self._conj_theta() * self._conj_z() * self._conj_theta()._conj_z()
        norm = self * partial
        a, b, c, d = norm.coords
        assert b == c == d == 0, "conjugate product failed to be rational"
        return ExtScalar(self.field, tuple(x / a for x in partial.coords))

    def __truediv__(self, other) -> "ExtScalar":
        return self * self._check(other).inverse()

    def __rtruediv__(self, other) -> "ExtScalar":
        return self._check(other) * self.inverse()

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.coords[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        return self.coords[0]

    def sign(self, bits_cap: int = DEFAULT_SIGN_BITS_CAP) -> int:
        """-1, 0, or +1; exact zero short-circuits, else interval refinement."""
        if self.is_zero():
            return 0
        if self.is_rational():
            return -1 if self.coords[0] < 0 else 1
        a, b, c, d = self.coords
        radicands = (self.field.theta, self.field.z, self.field.theta * self.field.z)
        bits = 64
        while bits <= bits_cap:
            lo, hi = a, a
            for coeff, q in zip((b, c, d), radicands):
                if coeff == 0:
                    continue
                ql, qh = sqrt_bounds(q, bits)
                if coeff >= 0:
                    lo += coeff * ql
                    hi += coeff * qh
                else:
                    lo += coeff * qh
                    hi += coeff * ql
            if lo > 0:
                return 1
            if hi < 0:
                return -1
            bits *= 2
        raise SignPrecisionError(
            f"sign undecided at {bits_cap} bits for coords {self.coords}"
        )

    def __str__(self) -> str:
        a, b, c, d = self.coords
        parts = []
        if a or not any(self.coords):
            parts.append(str(a))
        if b:
            parts.append(f"{b}*sqrt(theta)")
        if c:
            parts.append(f"{c}*sqrt(Z)")
        if d:
            parts.append(f"{d}*sqrt(theta*Z)")
        return " + ".join(parts)
