"""Scalar backends: floating complex numbers and exact Gaussian rationals.

The floating backend is the default everywhere.  The exact backend exists for
incidence decisions (collinearity, segment overlap, side-of-line tests) where
a float can silently give the wrong answer; geometric predicates convert their
inputs to `GaussianRational` on demand.  Every float is exactly representable
as a Fraction, so the conversion loses nothing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union


@dataclass(frozen=True)
class GaussianRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction
    im: Fraction

    def __add__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other: "GaussianRational") -> "GaussianRational":
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __truediv__(self, other: "GaussianRational") -> "GaussianRational":
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    @staticmethod
    def of(z: Union[complex, float, int, "GaussianRational"]) -> "GaussianRational":
        if isinstance(z, GaussianRational):
            return z
        z = complex(z)
        return GaussianRational(Fraction(z.real), Fraction(z.imag))


Scalar = Union[complex, GaussianRational]


def as_complex(z: Scalar) -> complex:
    return z.to_complex() if isinstance(z, GaussianRational) else complex(z)


def exact(z: Scalar) -> GaussianRational:
    return GaussianRational.of(z)


TWO_PI = 2.0 * math.pi


def wrap_angle(theta: float) -> float:
    """Reduce an angle to [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    return t


# ---------------------------------------------------------------------------
# Declared rotation angles.
#
# Whether arg(a)/2pi is rational is undecidable from a float, but it is
# preserved by the word operations the basis-change moves perform:
# arg(a^n b) = n arg(a) + arg(b).  A declared angle tracks this through
# products so discreteness tests stay exact in declared-polar mode.
# ---------------------------------------------------------------------------

RATIONAL = "rational"
IRRATIONAL = "irrational"
UNKNOWN = "unknown"


@dataclass(frozen=True)
class AngleTag:
    """Declared knowledge about arg(a) as a multiple of 2*pi.

    kind == RATIONAL:   turns is an exact Fraction, angle = 2*pi*turns.
    kind == IRRATIONAL: radians holds the numeric angle, declared irrational.
    kind == UNKNOWN:    nothing declared (heuristics may still be applied).
    """

    kind: str
    turns: Fraction = Fraction(0)
    radians: float = 0.0

    @staticmethod
    def rational(turns: Fraction) -> "AngleTag":
        t = Fraction(turns) % 1
        return AngleTag(RATIONAL, turns=t, radians=TWO_PI * float(t))

    @staticmethod
    def irrational(radians: float) -> "AngleTag":
        return AngleTag(IRRATIONAL, radians=wrap_angle(radians))

    @staticmethod
    def unknown() -> "AngleTag":
        return AngleTag(UNKNOWN)

    def angle(self) -> float:
        if self.kind == RATIONAL:
            return TWO_PI * float(self.turns)
        return self.radians

    def __add__(self, other: "AngleTag") -> "AngleTag":
        if self.kind == UNKNOWN or other.kind == UNKNOWN:
            return AngleTag.unknown()
        if self.kind == RATIONAL and other.kind == RATIONAL:
            return AngleTag.rational(self.turns + other.turns)
        if self.kind == RATIONAL:
            return AngleTag.irrational(TWO_PI * float(self.turns) + other.radians)
        if other.kind == RATIONAL:
            return AngleTag.irrational(self.radians + TWO_PI * float(other.turns))
        # irrational + irrational can cancel; we cannot know.
        return AngleTag.unknown()

    def __neg__(self) -> "AngleTag":
        if self.kind == RATIONAL:
            return AngleTag.rational(-self.turns)
        if self.kind == IRRATIONAL:
            return AngleTag.irrational(-self.radians)
        return AngleTag.unknown()

    def times(self, n: int) -> "AngleTag":
        if n == 0:
            return AngleTag.rational(Fraction(0))
        if self.kind == RATIONAL:
            return AngleTag.rational(n * self.turns)
        if self.kind == IRRATIONAL:
            return AngleTag.irrational(n * self.radians)
        return AngleTag.unknown()


def rationalize_angle(theta: float, max_den: int = 10**6, tol: float = 1e-9):
    """Continued-fraction guess for theta/2pi; returns a Fraction or None.

    Used only in heuristic mode.  A hit within `tol` of a denominator up to
    `max_den` is treated as rational with that denominator.
    """
    turns = wrap_angle(theta) / TWO_PI
    frac = Fraction(turns).limit_denominator(max_den)
    if abs(float(frac) - turns) <= tol:
        return frac % 1
    return None
