"""Robust geometric predicates for segments, rays and circular arcs.

All yes/no decisions (crossing, incidence, side-of-line) can be taken in
exact rational arithmetic: float inputs are converted to Fractions, circle
centers of arcs through rational points are rational, and the only
irrationalities are square roots, for which signs of A + B*sqrt(D) are
decided exactly.  Float mode uses the same formulas and raises
DegenerateConfiguration when a decision falls inside the tolerance band
instead of guessing.

Geometry descriptors are plain tuples:
    ("seg", a, b)          straight segment from a to b (complex)
    ("ray", base, dir)     infinite ray {base + t*dir, t >= 0}
    ("arc", a, b, m)       circular arc from a to b passing through m
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Tuple

INCIDENCE_BAND = 1e-12


class DegenerateConfiguration(Exception):
    """A float-mode predicate came too close to call."""


class BrokenChain(ValueError):
    pass


FPoint = Tuple[Fraction, Fraction]


def _fr(z: complex) -> FPoint:
    z = complex(z)
    return (Fraction(z.real), Fraction(z.imag))


def _sub(p: FPoint, q: FPoint) -> FPoint:
    return (p[0] - q[0], p[1] - q[1])


def _cross(u: FPoint, v: FPoint) -> Fraction:
    return u[0] * v[1] - u[1] * v[0]


def _dot(u: FPoint, v: FPoint) -> Fraction:
    return u[0] * v[0] + u[1] * v[1]


def orient(a: complex, b: complex, c: complex) -> int:
    """Sign of the signed area of (a, b, c): +1 ccw, -1 cw, 0 collinear."""
    fa, fb, fc = _fr(a), _fr(b), _fr(c)
    s = _cross(_sub(fb, fa), _sub(fc, fa))
    return (s > 0) - (s < 0)


def sign_quad(A: Fraction, B: Fraction, D: Fraction) -> int:
    """Exact sign of A + B*sqrt(D), D >= 0."""
    if D < 0:
        raise ValueError("negative radicand")
    if B == 0 or D == 0:
        return (A > 0) - (A < 0)
    if A == 0:
        return (B > 0) - (B < 0)
    if A > 0 and B > 0:
        return 1
    if A < 0 and B < 0:
        return -1
    # opposite signs: compare A^2 vs B^2 D, sign decided by the larger term
    lhs = A * A
    rhs = B * B * D
    if lhs == rhs:
        return 0
    if lhs > rhs:
        return 1 if A > 0 else -1
    return 1 if B > 0 else -1


# ---------------------------------------------------------------------------
# Linear pieces: unified segments and rays
# ---------------------------------------------------------------------------


class Piece:
    """p0 + t*u for t in [0, tmax] (tmax None means a ray)."""

    __slots__ = ("p0", "u", "tmax")

    def __init__(self, p0: FPoint, u: FPoint, tmax: Optional[Fraction]):
        self.p0 = p0
        self.u = u
        self.tmax = tmax

    @staticmethod
    def of(geom) -> "Piece":
        kind = geom[0]
        if kind == "seg":
            a, b = _fr(geom[1]), _fr(geom[2])
            return Piece(a, _sub(b, a), Fraction(1))
        if kind == "ray":
            return Piece(_fr(geom[1]), _fr(geom[2]), None)
        raise ValueError(f"not a linear piece: {kind}")

    def in_range(self, t: Fraction, open_ends: bool) -> bool:
        if open_ends:
            if t <= 0:
                return False
            return self.tmax is None or t < self.tmax
        if t < 0:
            return False
        return self.tmax is None or t <= self.tmax


def _linear_common_points(e: Piece, f: Piece, open_e: bool, open_f: bool) -> bool:
    """True iff the two pieces share a point interior per the open flags."""
    d = _cross(e.u, f.u)
    w = _sub(f.p0, e.p0)
    if d != 0:
        t = _cross(w, f.u) / d
        s = _cross(w, e.u) / d
        return e.in_range(t, open_e) and f.in_range(s, open_f)
    # parallel
    if _cross(w, e.u) != 0:
        return False
    # collinear: overlap test in the common parameter of e
    uu = _dot(e.u, e.u)
    t0 = _dot(w, e.u) / uu
    if f.tmax is None:
        # f covers t >= t0 or t <= t0 depending on direction sign
        same_dir = _dot(e.u, f.u) > 0
        lo_f, hi_f = (t0, None) if same_dir else (None, t0)
    else:
        t1 = t0 + _dot(f.u, e.u) / uu * f.tmax
        lo_f, hi_f = (t0, t1) if t0 <= t1 else (t1, t0)
    lo_e = Fraction(0)
    hi_e = e.tmax  # None = +inf
    lo = lo_f if lo_f is not None and lo_f > lo_e else lo_e
    if hi_e is None:
        hi = hi_f
    elif hi_f is None:
        hi = hi_e
    else:
        hi = min(hi_e, hi_f)
    if hi is not None:
        if lo > hi:
            return False
        if lo == hi:
            # single common point: interior only if strictly inside both
            return e.in_range(lo, open_e) and f.in_range(_param_on(f, e, lo), open_f)
    # a positive-length overlap always contains interior points of both
    return True


def _param_on(f: Piece, e: Piece, t_e: Fraction) -> Fraction:
    """Parameter on f of the point e.p0 + t_e * e.u (pieces collinear)."""
    p = (e.p0[0] + t_e * e.u[0], e.p0[1] + t_e * e.u[1])
    w = _sub(p, f.p0)
    uu = _dot(f.u, f.u)
    return _dot(w, f.u) / uu


# ---------------------------------------------------------------------------
# Circles and arcs
# ---------------------------------------------------------------------------


def circumcenter(a: FPoint, b: FPoint, m: FPoint) -> Tuple[FPoint, Fraction]:
    """Rational circumcenter and squared radius of three points."""
    ax, ay = a
    bx, by = b
    mx, my = m
    d = 2 * (ax * (by - my) + bx * (my - ay) + mx * (ay - by))
    if d == 0:
        raise DegenerateConfiguration("collinear points define no circle")
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    m2 = mx * mx + my * my
    ox = (a2 * (by - my) + b2 * (my - ay) + m2 * (ay - by)) / d
    oy = (a2 * (mx - bx) + b2 * (ax - mx) + m2 * (bx - ax)) / d
    o = (ox, oy)
    r2 = _dot(_sub(a, o), _sub(a, o))
    return o, r2


def _arc_data(geom):
    a, b, m = _fr(geom[1]), _fr(geom[2]), _fr(geom[3])
    o, r2 = circumcenter(a, b, m)
    return a, b, m, o, r2


def _on_arc_side(a: FPoint, b: FPoint, m: FPoint, x_lin: Tuple[Fraction, Fraction],
                 x_rad: Tuple[Fraction, Fraction], D: Fraction) -> int:
    """Sign of orient(a, b, x) where x = x_lin + x_rad*sqrt(D), exactly.

    A circle chord (a, b) splits the circle; a point is on the arc through m
    iff it lies strictly on m's side of the chord (or equals an endpoint).
    """
    u = _sub(b, a)
    A = u[0] * (x_lin[1] - a[1]) - u[1] * (x_lin[0] - a[0])
    B = u[0] * x_rad[1] - u[1] * x_rad[0]
    return sign_quad(A, B, D)


def _chord_side(a: FPoint, b: FPoint, p: FPoint) -> int:
    s = _cross(_sub(b, a), _sub(p, a))
    return (s > 0) - (s < 0)


def _line_circle_hits_arc_interior(piece: Piece, open_piece: bool, arc_geom) -> bool:
    """Does the linear piece meet the OPEN arc (endpoints excluded)?"""
    a, b, m, o, r2 = _arc_data(arc_geom)
    p, u = piece.p0, piece.u
    # |p + t u - o|^2 = r2
    w = _sub(p, o)
    A = _dot(u, u)
    Bc = 2 * _dot(u, w)
    C = _dot(w, w) - r2
    D = Bc * Bc - 4 * A * C
    if D < 0:
        return False
    side_m = _chord_side(a, b, m)
    for sgn in (1, -1) if D > 0 else (1,):
        # t = (-Bc + sgn*sqrt(D)) / (2A): check range and arc membership
        t_lin = Fraction(-Bc, 1) / (2 * A)
        t_rad = Fraction(sgn, 1) / (2 * A)
        # range of t: t > 0 (or >= 0), t < tmax etc, exact sign tests
        s0 = sign_quad(t_lin, t_rad, D)
        if open_piece and s0 <= 0:
            continue
        if not open_piece and s0 < 0:
            continue
        if piece.tmax is not None:
            s1 = sign_quad(t_lin - piece.tmax, t_rad, D)
            if open_piece and s1 >= 0:
                continue
            if not open_piece and s1 > 0:
                continue
        # x = p + t u, split into linear + radical parts
        x_lin = (p[0] + t_lin * u[0], p[1] + t_lin * u[1])
        x_rad = (t_rad * u[0], t_rad * u[1])
        side = _on_arc_side(a, b, m, x_lin, x_rad, D)
        if side == side_m:
            return True
    return False


def _arcs_cross(g1, g2) -> bool:
    """Open-arc / open-arc intersection via the radical line."""
    a1, b1, m1, o1, r1 = _arc_data(g1)
    a2, b2, m2, o2, r2 = _arc_data(g2)
    if o1 == o2:
        if r1 != r2:
            return False
        # same circle: arcs overlap iff an endpoint-free common sub-arc exists;
        # test midpoints of one against the chord of the other and vice versa
        side2 = _chord_side(a2, b2, m2)
        for x in (m1,):
            if _chord_side(a2, b2, x) == side2 and x not in (a2, b2):
                return True
        side1 = _chord_side(a1, b1, m1)
        for x in (m2,):
            if _chord_side(a1, b1, x) == side1 and x not in (a1, b1):
                return True
        # also endpoints of one strictly inside the other arc both ways
        for x in (a1, b1):
            if _chord_side(a2, b2, x) == side2:
                return True
        for x in (a2, b2):
            if _chord_side(a1, b1, x) == side1:
                return True
        return False
    # radical line in o1-frame: d.y = (|d|^2 + r1 - r2) / 2 with d = o2 - o1
    d = _sub(o2, o1)
    dd = _dot(d, d)
    h = (dd + r1 - r2) / 2
    q0 = (h * d[0] / dd, h * d[1] / dd)
    v = (-d[1], d[0])
    # intersect with circle 1 (|y|^2 = r1 in the o1-frame)
    A = _dot(v, v)
    Bc = 2 * _dot(v, q0)
    C = _dot(q0, q0) - r1
    D = Bc * Bc - 4 * A * C
    if D < 0:
        return False
    for sgn in (1, -1) if D > 0 else (1,):
        s_lin = Fraction(-Bc, 1) / (2 * A)
        s_rad = Fraction(sgn, 1) / (2 * A)
        x_lin = (o1[0] + q0[0] + s_lin * v[0], o1[1] + q0[1] + s_lin * v[1])
        x_rad = (s_rad * v[0], s_rad * v[1])
        s1 = _on_arc_side(a1, b1, m1, x_lin, x_rad, D)
        s2 = _on_arc_side(a2, b2, m2, x_lin, x_rad, D)
        if s1 == _chord_side(a1, b1, m1) and s2 == _chord_side(a2, b2, m2):
            return True
    return False


# ---------------------------------------------------------------------------
# Public predicates
# ---------------------------------------------------------------------------


def _is_linear(geom) -> bool:
    return geom[0] in ("seg", "ray")


def interiors_cross(g1, g2) -> bool:
    """Do the two edges meet at a point interior to at least one of them?

    Shared endpoints are allowed (chains); any other contact counts as a
    crossing.  Exact.
    """
    if _is_linear(g1) and _is_linear(g2):
        e, f = Piece.of(g1), Piece.of(g2)
        # interior-of-either contact: check (open, closed) and (closed, open)
        return (_linear_common_points(e, f, True, False)
                or _linear_common_points(e, f, False, True))
    if _is_linear(g1) and g2[0] == "arc":
        return _linear_arc_conflict(g1, g2)
    if g1[0] == "arc" and _is_linear(g2):
        return _linear_arc_conflict(g2, g1)
    if g1[0] == "arc" and g2[0] == "arc":
        if _arcs_cross(g1, g2):
            return True
        # endpoint of one in the open interior of the other
        for (ga, gb) in ((g1, g2), (g2, g1)):
            for pt in (ga[1], ga[2]):
                if point_on_open_arc(pt, gb):
                    return True
        return False
    raise ValueError("unknown geometry kinds")


def _linear_arc_conflict(lin, arc) -> bool:
    piece = Piece.of(lin)
    if _line_circle_hits_arc_interior(piece, False, arc):
        return True
    # arc endpoints lying in the open linear piece
    for pt in (arc[1], arc[2]):
        if point_on_open_piece(pt, lin):
            return True
    return False


def point_on_open_piece(z: complex, lin) -> bool:
    p = Piece.of(lin)
    x = _fr(z)
    w = _sub(x, p.p0)
    if _cross(w, p.u) != 0:
        return False
    uu = _dot(p.u, p.u)
    t = _dot(w, p.u) / uu
    return p.in_range(t, True)


def point_on_open_arc(z: complex, arc) -> bool:
    a, b, m, o, r2 = _arc_data(arc)
    x = _fr(z)
    if _dot(_sub(x, o), _sub(x, o)) != r2:
        return False
    if x == a or x == b:
        return False
    return _chord_side(a, b, x) == _chord_side(a, b, m)


def endpoints(geom) -> Tuple[complex, Optional[complex]]:
    """Finite start and end (None when the edge runs to infinity)."""
    if geom[0] == "seg":
        return complex(geom[1]), complex(geom[2])
    if geom[0] == "ray":
        return complex(geom[1]), None
    if geom[0] == "arc":
        return complex(geom[1]), complex(geom[2])
    raise ValueError(geom[0])


def chain_embedded(geoms: List, closed: bool = True) -> bool:
    """Pairwise interior-disjointness of a chain of edges.

    Consecutive edges (and the closing pair, if `closed`) may share their
    common endpoint; everything else must be disjoint.
    """
    n = len(geoms)
    for i in range(n):
        for j in range(i + 1, n):
            adjacent = (j == i + 1) or (closed and i == 0 and j == n - 1)
            if interiors_cross(geoms[i], geoms[j]):
                return False
            if not adjacent:
                # no shared endpoints between non-adjacent edges either
                si, ei = endpoints(geoms[i])
                sj, ej = endpoints(geoms[j])
                pts_i = [p for p in (si, ei) if p is not None]
                pts_j = [p for p in (sj, ej) if p is not None]
                for p in pts_i:
                    for q in pts_j:
                        if _fr(p) == _fr(q):
                            return False
    return True


def tangents(geom) -> Tuple[complex, complex]:
    """Unit tangent directions at (start, end), each in traversal direction.

    For a ray the 'end' tangent is its direction (the edge escapes along it).
    """
    if geom[0] == "seg":
        a, b = complex(geom[1]), complex(geom[2])
        u = b - a
        u /= abs(u)
        return u, u
    if geom[0] == "ray":
        d = complex(geom[2])
        d /= abs(d)
        return d, d
    a, b, m = complex(geom[1]), complex(geom[2]), complex(geom[3])
    fo, _ = circumcenter(_fr(a), _fr(b), _fr(m))
    o = complex(float(fo[0]), float(fo[1]))
    ccw = orient(a, m, b) > 0
    rot = 1j if ccw else -1j
    ta = rot * (a - o)
    tb = rot * (b - o)
    return ta / abs(ta), tb / abs(tb)


def arc_turning(geom) -> float:
    """Signed total turning along an arc (0 for straight pieces)."""
    if geom[0] != "arc":
        return 0.0
    a, b, m = complex(geom[1]), complex(geom[2]), complex(geom[3])
    fo, _ = circumcenter(_fr(a), _fr(b), _fr(m))
    o = complex(float(fo[0]), float(fo[1]))
    ccw = orient(a, m, b) > 0
    ang_a = math.atan2((a - o).imag, (a - o).real)
    ang_b = math.atan2((b - o).imag, (b - o).real)
    span = (ang_b - ang_a) % (2 * math.pi)
    if not ccw:
        span = -((ang_a - ang_b) % (2 * math.pi))
    return span
