"""Moebius transformations of the Riemann sphere and their classification.

Maps are stored as 2x2 complex matrices [[a, b], [c, d]] with ad - bc != 0,
acting by z -> (az + b)/(cz + d).  Equality is projective: normalized maps
compare up to a global sign, unnormalized ones up to a global scalar.  The
point at infinity is a tagged value, never a float sentinel.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union

from .scalars import AngleTag, GaussianRational, Scalar, as_complex, wrap_angle

DEFAULT_TOL = 1e-9


class NotAffineError(ValueError):
    pass


class DuplicatePointsError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Points of CP^1
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CP1Point:
    """A point of the Riemann sphere: a finite complex value or infinity."""

    value: Optional[complex]

    @staticmethod
    def of(z: Union[complex, float, int]) -> "CP1Point":
        return CP1Point(complex(z))

    @staticmethod
    def infinity() -> "CP1Point":
        return CP1Point(None)

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def __repr__(self) -> str:
        return "oo" if self.is_infinity else f"{self.value!r}"


INF = CP1Point.infinity()


def cp1_close(p: CP1Point, q: CP1Point, tol: float = 1e-9) -> bool:
    """Approximate equality on the sphere, via the chordal metric idea."""
    if p.is_infinity and q.is_infinity:
        return True
    if p.is_infinity or q.is_infinity:
        z = q.value if p.is_infinity else p.value
        return abs(z) > 1.0 / tol
    num = abs(p.value - q.value)
    den = math.sqrt(1 + abs(p.value) ** 2) * math.sqrt(1 + abs(q.value) ** 2)
    return num / den <= tol


# ---------------------------------------------------------------------------
# Maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MoebiusMap:
    a: complex
    b: complex
    c: complex
    d: complex
    normalized: bool = False
    # Declared knowledge about arg of the linear part, for affine maps given
    # in polar form.  Carried through composition when that is sound.
    angle: Optional[AngleTag] = None

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_matrix(a, b, c, d, normalize: bool = True,
                    angle: Optional[AngleTag] = None) -> "MoebiusMap":
        a, b, c, d = complex(a), complex(b), complex(c), complex(d)
        det = a * d - b * c
        if abs(det) < 1e-300:
            raise ValueError("singular matrix is not a Moebius map")
        if normalize:
            s = cmath.sqrt(det)
            return MoebiusMap(a / s, b / s, c / s, d / s, True, angle)
        return MoebiusMap(a, b, c, d, False, angle)

    @staticmethod
    def identity() -> "MoebiusMap":
        return MoebiusMap(1.0, 0.0, 0.0, 1.0, True, AngleTag.rational(Fraction(0)))

    @staticmethod
    def affine(a, b, angle: Optional[AngleTag] = None) -> "MoebiusMap":
        """z -> a z + b, a != 0."""
        a, b = complex(a), complex(b)
        if a == 0:
            raise ValueError("affine map needs a != 0")
        if angle is None:
            angle = AngleTag.unknown()
        return MoebiusMap.from_matrix(a, b, 0.0, 1.0, angle=angle)

    @staticmethod
    def translation(c) -> "MoebiusMap":
        return MoebiusMap.affine(1.0, c, angle=AngleTag.rational(Fraction(0)))

    @staticmethod
    def point_swap(b) -> "MoebiusMap":
        """z -> 1/(b z): the maps preserving {0, oo} that swap the two points."""
        return MoebiusMap.from_matrix(0.0, 1.0, complex(b), 0.0)

    # -- basic algebra -------------------------------------------------------

    def matrix(self) -> Tuple[complex, complex, complex, complex]:
        return (self.a, self.b, self.c, self.d)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        """Matrix product self * other: apply `other` first, then `self`."""
        a = self.a * other.a + self.b * other.c
        b = self.a * other.b + self.b * other.d
        c = self.c * other.a + self.d * other.c
        d = self.c * other.b + self.d * other.d
        angle = None
        if self.is_affine() and other.is_affine() and \
                self.angle is not None and other.angle is not None:
            angle = self.angle + other.angle
        return MoebiusMap.from_matrix(a, b, c, d, angle=angle)

    def __mul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return self.compose(other)

    def inverse(self) -> "MoebiusMap":
        angle = -self.angle if (self.angle is not None and self.is_affine()) else None
        return MoebiusMap.from_matrix(self.d, -self.b, -self.c, self.a, angle=angle)

    def power(self, n: int) -> "MoebiusMap":
        if n == 0:
            return MoebiusMap.identity()
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        if self.is_affine() and self.angle is not None:
            out = MoebiusMap(out.a, out.b, out.c, out.d, out.normalized,
                             self.angle.times(n))
        return out

    def apply(self, p: CP1Point) -> CP1Point:
        if p.is_infinity:
            if abs(self.c) == 0:
                return INF
            return CP1Point(self.a / self.c)
        z = p.value
        den = self.c * z + self.d
        if abs(den) == 0:
            return INF
        return CP1Point((self.a * z + self.b) / den)

    def __call__(self, z: Union[CP1Point, complex, float, int]) -> CP1Point:
        if not isinstance(z, CP1Point):
            z = CP1Point.of(z)
        return self.apply(z)

    # -- structure ----------------------------------------------------------

    def is_affine(self, tol: float = DEFAULT_TOL) -> bool:
        scale = max(abs(self.a), abs(self.b), abs(self.c), abs(self.d))
        return abs(self.c) <= tol * scale

    def affine_parts(self, tol: float = DEFAULT_TOL) -> Tuple[complex, complex]:
        """Return (a, b) with self ~ z -> a z + b; raises if not affine."""
        if not self.is_affine(tol):
            raise NotAffineError(f"map is not affine: {self}")
        return self.a / self.d, self.b / self.d

    def is_identity(self, tol: float = DEFAULT_TOL) -> bool:
        return psl_equal(self, MoebiusMap.identity(), tol)

    def trace_squared(self) -> complex:
        t = self.a + self.d
        return t * t / self.det()

    def __repr__(self) -> str:
        if self.is_affine():
            a, b = self.affine_parts()
            return f"Moebius(z -> ({a:.6g})*z + ({b:.6g}))"
        return (f"Moebius[[{self.a:.6g}, {self.b:.6g}], "
                f"[{self.c:.6g}, {self.d:.6g}]]")


def psl_equal(m1: MoebiusMap, m2: MoebiusMap, tol: float = DEFAULT_TOL) -> bool:
    """Equality in PSL(2, C): entries compare up to one global scalar.

    For normalized inputs the scalar is +-1; in general we cross-multiply,
    which also covers unnormalized exact-mode matrices.
    """
    u = m1.matrix()
    v = m2.matrix()
    scale = max(max(abs(x) for x in u), max(abs(x) for x in v), 1.0)
    # best-conditioned pivot
    k = max(range(4), key=lambda i: abs(u[i]) + abs(v[i]))
    for i in range(4):
        if abs(u[i] * v[k] - v[i] * u[k]) > tol * scale * scale:
            return False
    return True


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

IDENTITY = "identity"
PARABOLIC = "parabolic"
ELLIPTIC = "elliptic"
LOXODROMIC = "loxodromic"


@dataclass(frozen=True)
class ElementClass:
    kind: str
    # elliptic rotation angle in (0, pi], loxodromic multiplier with |.| >= 1
    angle: float = 0.0
    multiplier: complex = 0.0
    # affine refinement
    affine_kind: Optional[str] = None  # "translation" | "dilation-rotation"
    vector: complex = 0.0
    factor: complex = 0.0
    center: Optional[CP1Point] = None


def classify(m: MoebiusMap, tol: float = DEFAULT_TOL) -> ElementClass:
    """Classify by tr^2: 4 -> parabolic/identity, real [0,4) -> elliptic,
    otherwise loxodromic.  Affine maps get their refinement filled in."""
    t2 = m.trace_squared()
    affine_kind = None
    vector = 0.0
    factor = 0.0
    center = None
    if m.is_affine(tol):
        a, b = m.affine_parts(tol)
        if abs(a - 1.0) <= tol:
            affine_kind = "translation"
            vector = b
        else:
            affine_kind = "dilation-rotation"
            factor = a
            center = CP1Point(b / (1.0 - a))
    if m.is_identity(tol):
        return ElementClass(IDENTITY, affine_kind=affine_kind,
                            vector=vector, factor=factor, center=center)
    if abs(t2 - 4.0) <= tol:
        return ElementClass(PARABOLIC, affine_kind=affine_kind,
                            vector=vector, factor=factor, center=center)
    if abs(t2.imag) <= tol and -tol <= t2.real < 4.0:
        # |tr| = 2 cos(alpha/2); report the rotation angle alpha in (0, pi]
        half = math.acos(max(0.0, min(1.0, math.sqrt(max(t2.real, 0.0)) / 2.0)))
        alpha = 2.0 * half
        return ElementClass(ELLIPTIC, angle=alpha, affine_kind=affine_kind,
                            vector=vector, factor=factor, center=center)
    # multiplier lambda solves lambda + 1/lambda = tr^2 - 2
    s = t2 - 2.0
    lam = (s + cmath.sqrt(s * s - 4.0)) / 2.0
    if abs(lam) < 1.0:
        lam = 1.0 / lam
    return ElementClass(LOXODROMIC, multiplier=lam, affine_kind=affine_kind,
                        vector=vector, factor=factor, center=center)


# ---------------------------------------------------------------------------
# Fixed points
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FixedSet:
    """Fixed points of a Moebius map; `everything` flags the identity."""

    points: Tuple[CP1Point, ...]
    everything: bool = False


def fixed_points(m: MoebiusMap, tol: float = DEFAULT_TOL) -> FixedSet:
    if m.is_identity(tol):
        return FixedSet((), everything=True)
    scale = max(abs(x) for x in m.matrix())
    if abs(m.c) <= tol * scale:
        # affine: fixes oo, plus b/(d-a) when not a translation
        if abs(m.d - m.a) <= tol * scale:
            return FixedSet((INF,))
        return FixedSet((CP1Point(m.b / (m.d - m.a)), INF))
    # c z^2 + (d - a) z - b = 0
    disc = cmath.sqrt((m.d - m.a) ** 2 + 4.0 * m.b * m.c)
    z1 = ((m.a - m.d) + disc) / (2.0 * m.c)
    z2 = ((m.a - m.d) - disc) / (2.0 * m.c)
    if abs(z1 - z2) <= tol * (1.0 + abs(z1) + abs(z2)):
        return FixedSet((CP1Point((z1 + z2) / 2.0),))
    return FixedSet((CP1Point(z1), CP1Point(z2)))


def fixed_in_plane(m: MoebiusMap, tol: float = DEFAULT_TOL) -> Optional[complex]:
    """Finite fixed point of an affine map, None for translations.

    Affine A(z) = az + b fixes b/(1-a); a translation fixes nothing in C.
    """
    a, b = m.affine_parts(tol)
    if abs(a - 1.0) <= tol:
        return None
    return b / (1.0 - a)


# ---------------------------------------------------------------------------
# Cross ratio
# ---------------------------------------------------------------------------


def cross_ratio(z1: CP1Point, z2: CP1Point, z3: CP1Point, z4: CP1Point) -> complex:
    """(z1 - z2)(z3 - z4) / ((z2 - z3)(z1 - z4)), with limits at infinity."""
    pts = [z1, z2, z3, z4]
    for i in range(4):
        for j in range(i + 1, 4):
            if (pts[i].is_infinity and pts[j].is_infinity) or (
                    not pts[i].is_infinity and not pts[j].is_infinity
                    and pts[i].value == pts[j].value):
                raise DuplicatePointsError("cross ratio needs distinct points")

    def diff(p: CP1Point, q: CP1Point) -> Optional[complex]:
        # None encodes an infinite factor; they cancel in pairs below.
        if p.is_infinity or q.is_infinity:
            return None
        return p.value - q.value

    num = [diff(z1, z2), diff(z3, z4)]
    den = [diff(z2, z3), diff(z1, z4)]
    # an infinite point hits one numerator and one denominator factor; the
    # pair cancels in the limit
    n_inf = [f is None for f in num]
    d_inf = [f is None for f in den]
    if sum(n_inf) != sum(d_inf):
        # cannot happen for distinct points: each oo hits one num and one den
        raise DuplicatePointsError("degenerate cross-ratio configuration")
    nv = 1.0 + 0.0j
    dv = 1.0 + 0.0j
    for f in num:
        if f is not None:
            nv *= f
    for f in den:
        if f is not None:
            dv *= f
    if dv == 0:
        raise DuplicatePointsError("cross ratio denominator vanished")
    return nv / dv


def commutator(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    return m1 * m2 * m1.inverse() * m2.inverse()


def linear_unitary_part(m: MoebiusMap, tol: float = DEFAULT_TOL) -> Tuple[complex, complex]:
    """For z -> a z + b return (a, a/|a|)."""
    a, _ = m.affine_parts(tol)
    return a, a / abs(a)


def conjugate(m: MoebiusMap, by: MoebiusMap) -> MoebiusMap:
    """Return by * m * by^-1."""
    return by * m * by.inverse()


def moebius_through(p1: CP1Point, p2: CP1Point, p3: CP1Point) -> MoebiusMap:
    """The unique map sending (p1, p2, p3) to (0, 1, oo)."""
    if p1.is_infinity:
        z2, z3 = p2.value, p3.value
        return MoebiusMap.from_matrix(0.0, -(z2 - z3), -1.0, z3)
    if p2.is_infinity:
        z1, z3 = p1.value, p3.value
        return MoebiusMap.from_matrix(1.0, -z1, 1.0, -z3)
    if p3.is_infinity:
        z1, z2 = p1.value, p2.value
        return MoebiusMap.from_matrix(-1.0, z1, 0.0, z1 - z2)
    z1, z2, z3 = p1.value, p2.value, p3.value
    return MoebiusMap.from_matrix(z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1))
