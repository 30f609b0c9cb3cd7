"""Representations of punctured-surface groups and the realizability gate.

A representation stores images of the standard generators of pi_1(S_{g,k}):
g handle pairs (A_i, B_i) and k peripherals Gamma_j, subject to the relator

    [A_1,B_1] ... [A_g,B_g] Gamma_1 ... Gamma_k = Id   (matrix product, in
    written order, up to the PSL sign).

Degeneracy is decided from the generators' fixed sets: a global fixed point
with parabolic-or-trivial peripherals, or a preserved two-point set fixed
pointwise by every peripheral.  The gate combines this with the exceptional
families (trivial representation on one or two punctures, order-two image on
one puncture) to answer realizability.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .moebius import (DEFAULT_TOL, INF, CP1Point, ElementClass, FixedSet,
                      IDENTITY, LOXODROMIC, MoebiusMap, PARABOLIC, classify
                      as classify_map, commutator, cp1_close, fixed_points,
                      linear_unitary_part, psl_equal)
from .scalars import AngleTag, IRRATIONAL, RATIONAL, UNKNOWN, rationalize_angle


class InvalidSignatureError(ValueError):
    pass


class RelatorError(ValueError):
    pass


@dataclass(frozen=True)
class SurfaceSignature:
    genus: int
    punctures: int

    def __post_init__(self):
        if self.genus < 0 or self.punctures < 0:
            raise InvalidSignatureError("negative genus or puncture count")

    @property
    def euler(self) -> int:
        return 2 - 2 * self.genus - self.punctures

    def check_hyperbolic(self):
        if self.euler >= 0:
            raise InvalidSignatureError(
                f"signature ({self.genus},{self.punctures}) has chi >= 0")
        if self.punctures < 1:
            raise InvalidSignatureError("at least one puncture required")


@dataclass
class Representation:
    signature: SurfaceSignature
    handles: List[Tuple[MoebiusMap, MoebiusMap]]
    peripherals: List[MoebiusMap]

    def __post_init__(self):
        if len(self.handles) != self.signature.genus:
            raise RelatorError("handle count does not match genus")
        if len(self.peripherals) != self.signature.punctures:
            raise RelatorError("peripheral count does not match punctures")

    def generators(self) -> List[MoebiusMap]:
        out = []
        for a, b in self.handles:
            out.extend([a, b])
        out.extend(self.peripherals)
        return out

    def relator_value(self) -> MoebiusMap:
        out = MoebiusMap.identity()
        for a, b in self.handles:
            out = out * commutator(a, b)
        for g in self.peripherals:
            out = out * g
        return out

    def relator_holds(self, tol: float = DEFAULT_TOL) -> bool:
        return self.relator_value().is_identity(tol)

    def is_trivial(self, tol: float = DEFAULT_TOL) -> bool:
        return all(g.is_identity(tol) for g in self.generators())

    def all_affine(self, tol: float = DEFAULT_TOL) -> bool:
        return all(g.is_affine(tol) for g in self.generators())

    def all_translations(self, tol: float = DEFAULT_TOL) -> bool:
        for g in self.generators():
            if not g.is_affine(tol):
                return False
            a, _ = g.affine_parts(tol)
            if abs(a - 1.0) > tol:
                return False
        return True


def peripheral_from_relator(sig: SurfaceSignature,
                            handles: Sequence[Tuple[MoebiusMap, MoebiusMap]],
                            peripherals: Sequence[Optional[MoebiusMap]]) -> Representation:
    """Fill the single missing peripheral so the relator closes."""
    missing = [j for j, g in enumerate(peripherals) if g is None]
    if len(missing) != 1:
        raise RelatorError("exactly one peripheral must be omitted")
    j = missing[0]
    prefix = MoebiusMap.identity()
    for a, b in handles:
        prefix = prefix * commutator(a, b)
    for g in peripherals[:j]:
        prefix = prefix * g
    suffix = MoebiusMap.identity()
    for g in peripherals[j + 1:]:
        suffix = suffix * g
    gamma = prefix.inverse() * suffix.inverse()
    full = list(peripherals)
    full[j] = gamma
    return Representation(sig, list(handles), full)


# ---------------------------------------------------------------------------
# Degeneracy classification
# ---------------------------------------------------------------------------

NON_DEGENERATE = "non-degenerate"
GLOBAL_FIXED_POINT = "global-fixed-point"
FIXED_PAIR = "fixed-pair"


@dataclass
class DegeneracyReport:
    verdict: str
    point: Optional[CP1Point] = None
    pair: Optional[Tuple[CP1Point, CP1Point]] = None
    coaxial: bool = False
    dihedral: bool = False
    apparent: Tuple[int, ...] = ()

    @property
    def degenerate(self) -> bool:
        return self.verdict != NON_DEGENERATE


def _fixes(g: MoebiusMap, p: CP1Point, tol: float) -> bool:
    return cp1_close(g.apply(p), p, tol)


def _preserves_pair(g: MoebiusMap, p: CP1Point, q: CP1Point, tol: float) -> bool:
    gp, gq = g.apply(p), g.apply(q)
    return (cp1_close(gp, p, tol) and cp1_close(gq, q, tol)) or \
        (cp1_close(gp, q, tol) and cp1_close(gq, p, tol))


def _is_involution(g: MoebiusMap, tol: float) -> bool:
    return (g * g).is_identity(tol) and not g.is_identity(tol)


def apparent_singularities(rep: Representation, tol: float = DEFAULT_TOL) -> Tuple[int, ...]:
    return tuple(j for j, g in enumerate(rep.peripherals) if g.is_identity(tol))


def classify_representation(rep: Representation, tol: float = DEFAULT_TOL) -> DegeneracyReport:
    gens = rep.generators()
    nonid = [g for g in gens if not g.is_identity(tol)]
    apparent = apparent_singularities(rep, tol)

    def peripheral_ok_point(p: CP1Point) -> bool:
        for g in rep.peripherals:
            if g.is_identity(tol):
                continue
            if classify_map(g, tol).kind != PARABOLIC or not _fixes(g, p, tol):
                return False
        return True

    # (a) a global fixed point with parabolic-or-trivial peripherals
    if not nonid:
        return DegeneracyReport(GLOBAL_FIXED_POINT, point=INF, apparent=apparent)
    candidates = list(fixed_points(nonid[0], tol).points)
    for g in nonid[1:]:
        candidates = [p for p in candidates if _fixes(g, p, tol)]
        if not candidates:
            break
    for p in candidates:
        if peripheral_ok_point(p):
            return DegeneracyReport(GLOBAL_FIXED_POINT, point=p, apparent=apparent)

    # (b) a preserved two-point set fixed pointwise by every peripheral
    pair_candidates: List[Tuple[CP1Point, CP1Point]] = []
    involutions = [g for g in nonid if _is_involution(g, tol)]
    non_involutions = [g for g in nonid if not _is_involution(g, tol)]
    for g in non_involutions + involutions:
        fp = fixed_points(g, tol).points
        if len(fp) == 2:
            pair_candidates.append((fp[0], fp[1]))
    for i in range(len(involutions)):
        for j in range(i + 1, len(involutions)):
            h = involutions[i] * involutions[j]
            if h.is_identity(tol):
                continue
            fp = fixed_points(h, tol).points
            if len(fp) == 2:
                pair_candidates.append((fp[0], fp[1]))
    if len(non_involutions) == 0 and involutions:
        # single involution up to coincidence: swapped pairs are also preserved
        J = involutions[0]
        if all(psl_equal(g, J, tol) for g in involutions):
            for probe in (0.0, 1.0, 1j, 2.0, 0.5 + 0.5j):
                z = CP1Point.of(probe)
                w = J.apply(z)
                if not cp1_close(w, z, tol) and not w.is_infinity:
                    pair_candidates.append((z, w))
                    break

    def pair_ok(p: CP1Point, q: CP1Point) -> Optional[DegeneracyReport]:
        for g in nonid:
            if not _preserves_pair(g, p, q, tol):
                return None
        for g in rep.peripherals:
            if g.is_identity(tol):
                continue
            if not (_fixes(g, p, tol) and _fixes(g, q, tol)):
                return None
        coaxial = all(_fixes(g, p, tol) and _fixes(g, q, tol) for g in nonid)
        return DegeneracyReport(FIXED_PAIR, pair=(p, q), coaxial=coaxial,
                                dihedral=not coaxial, apparent=apparent)

    for (p, q) in pair_candidates:
        rep_b = pair_ok(p, q)
        if rep_b is not None:
            return rep_b
    return DegeneracyReport(NON_DEGENERATE, apparent=apparent)


# ---------------------------------------------------------------------------
# Translation characters
# ---------------------------------------------------------------------------


@dataclass
class TranslationCharacter:
    signature: SurfaceSignature
    handle_values: List[Tuple[complex, complex]]
    peripheral_values: List[complex]

    def __post_init__(self):
        if len(self.handle_values) != self.signature.genus:
            raise RelatorError("handle count does not match genus")
        if len(self.peripheral_values) != self.signature.punctures:
            raise RelatorError("peripheral count does not match punctures")
        if abs(sum(self.peripheral_values)) > 1e-9 * (
                1 + max((abs(v) for v in self.peripheral_values), default=0.0)):
            raise RelatorError("peripheral translation values must sum to zero")

    def to_representation(self) -> Representation:
        return Representation(
            self.signature,
            [(MoebiusMap.translation(a), MoebiusMap.translation(b))
             for a, b in self.handle_values],
            [MoebiusMap.translation(c) for c in self.peripheral_values])

    @staticmethod
    def from_representation(rep: Representation, tol: float = DEFAULT_TOL) -> "TranslationCharacter":
        if not rep.all_translations(tol):
            raise ValueError("representation is not by translations")
        hv = [(a.affine_parts(tol)[1], b.affine_parts(tol)[1]) for a, b in rep.handles]
        pv = [g.affine_parts(tol)[1] for g in rep.peripherals]
        return TranslationCharacter(rep.signature, hv, pv)


def handle_volume(a: complex, b: complex) -> float:
    """Signed area spanned by the two translation values: Im(conj(a) b)."""
    return (a.conjugate() * b).imag


def algebraic_volume(char: TranslationCharacter) -> float:
    return sum(handle_volume(a, b) for a, b in char.handle_values)


# ---------------------------------------------------------------------------
# Unitary part of affine representations
# ---------------------------------------------------------------------------

DISCRETE = "discrete"
DENSE = "dense"
HEURISTIC = "heuristic"


@dataclass
class UnitaryImageReport:
    mode: str              # DISCRETE | DENSE
    order: int = 0         # cyclic order when DISCRETE
    heuristic: bool = False
    note: str = ""


def unitary_image(rep: Representation, tol: float = DEFAULT_TOL,
                  max_den: int = 10**6) -> UnitaryImageReport:
    """Discreteness of the group generated by arguments of linear parts.

    Exact when every generator carries a declared angle; otherwise a
    continued-fraction rationality test with denominator cap is applied and
    the report is flagged heuristic.
    """
    turns: List[Fraction] = []
    heuristic = False
    notes = []
    for g in rep.generators():
        if not g.is_affine(tol):
            raise ValueError("unitary part needs an affine representation")
        tag = g.angle if g.angle is not None else AngleTag.unknown()
        if tag.kind == RATIONAL:
            turns.append(tag.turns)
            continue
        if tag.kind == IRRATIONAL:
            return UnitaryImageReport(DENSE, note="declared irrational angle")
        a, _u = linear_unitary_part(g, tol)
        guess = rationalize_angle(cmath.phase(a), max_den=max_den)
        heuristic = True
        if guess is None:
            notes.append("argument looks irrational under the rational cap")
            return UnitaryImageReport(DENSE, heuristic=True, note="; ".join(notes))
        turns.append(guess)
    if not turns:
        return UnitaryImageReport(DISCRETE, order=1)
    den = 1
    for t in turns:
        den = den * t.denominator // math.gcd(den, t.denominator)
    # order of the subgroup generated = lcm of denominators
    return UnitaryImageReport(DISCRETE, order=den, heuristic=heuristic,
                              note="; ".join(notes))


# ---------------------------------------------------------------------------
# Unitarizability
# ---------------------------------------------------------------------------


def _herm_basis():
    return [np.array([[1, 0], [0, 0]], dtype=complex),
            np.array([[0, 0], [0, 1]], dtype=complex),
            np.array([[0, 1], [1, 0]], dtype=complex),
            np.array([[0, 1j], [-1j, 0]], dtype=complex)]


def unitarizable(rep: Representation, tol: float = 1e-9,
                 seed: int = 7, tries: int = 400) -> Optional[MoebiusMap]:
    """A conjugator M with M^-1 rho M inside PSU(2), or None.

    Solves the invariant positive-definite Hermitian form as a small linear
    problem over the generators.  Loxodromic or non-trivial parabolic
    generators are rejected immediately.
    """
    gens = [g for g in rep.generators() if not g.is_identity(tol)]
    for g in gens:
        kind = classify_map(g, tol).kind
        if kind in (LOXODROMIC, PARABOLIC):
            return None
    basis = _herm_basis()
    if gens:
        mat = np.zeros((len(gens) * 4, 4))
        r = 0
        for g in gens:
            m = np.array([[g.a, g.b], [g.c, g.d]], dtype=complex)
            m = m / np.sqrt(np.linalg.det(m))
            for j, e in enumerate(basis):
                img = m.conj().T @ e @ m - e
                mat[r + 0, j] = img[0, 0].real
                mat[r + 1, j] = img[1, 1].real
                mat[r + 2, j] = img[0, 1].real
                mat[r + 3, j] = img[0, 1].imag
            r += 4
        _u, s, vt = np.linalg.svd(mat)
        null = [vt[i] for i in range(4) if i >= len(s) or s[i] < 1e-9]
    else:
        null = [np.eye(4)[i] for i in range(4)]
    if not null:
        return None

    def hermitian_of(coeffs):
        H = np.zeros((2, 2), dtype=complex)
        for c, e in zip(coeffs, basis):
            H = H + c * e
        return H

    rng = np.random.default_rng(seed)
    candidates = []
    for v in null:
        candidates.extend([v, -v])
    for _ in range(tries):
        c = rng.normal(size=len(null))
        v = sum(ci * vi for ci, vi in zip(c, null))
        candidates.extend([v, -v])
    for v in candidates:
        H = hermitian_of(v)
        w = np.linalg.eigvalsh(H)
        if w[0] > 1e-9 * max(1.0, abs(w[-1])):
            L = np.linalg.cholesky(H)
            P = L.conj().T
            Pinv = np.linalg.inv(P)
            conj = MoebiusMap.from_matrix(Pinv[0, 0], Pinv[0, 1],
                                          Pinv[1, 0], Pinv[1, 1])
            return conj
    return None


def in_psu2(m: MoebiusMap, tol: float = 1e-9) -> bool:
    a = np.array([[m.a, m.b], [m.c, m.d]], dtype=complex)
    a = a / np.sqrt(np.linalg.det(a))
    return bool(np.allclose(a.conj().T @ a, np.eye(2), atol=tol))


# ---------------------------------------------------------------------------
# Realizability gate
# ---------------------------------------------------------------------------

ROUTE_NON_DEGENERATE = "non-degenerate"
ROUTE_TRIVIAL_COVER = "trivial-cover"
ROUTE_TRANSLATION_CHAIN = "translation-chain"
ROUTE_TRANSLATION_SPHERE = "translation-sphere"
ROUTE_TRANSLATION_GENERAL = "translation-general"
ROUTE_ONCE_PUNCT_TRANSLATION = "once-punctured-translation"
ROUTE_AFFINE_SPHERE = "affine-sphere"
ROUTE_AFFINE_TWO_PUNCTURES = "affine-two-punctures"
ROUTE_AFFINE_GENERAL = "affine-general"
ROUTE_COAXIAL_NONUNITARY = "once-punctured-coaxial-i"
ROUTE_COAXIAL_DENSE = "once-punctured-coaxial-ii"
ROUTE_COAXIAL_FINITE = "once-punctured-coaxial-iii"
ROUTE_NONCOAXIAL = "once-punctured-non-coaxial"
ROUTE_DIHEDRAL_TORUS = "dihedral-once-punctured-torus"
ROUTE_DIHEDRAL_GENERAL = "dihedral-general"

REASON_TRIVIAL = "trivial-exception"
REASON_ORDER_TWO = "order-two-exception"
REASON_NO_APPARENT = "no-apparent-singularity"


@dataclass
class GateResult:
    realizable: bool
    route: str = ""
    reason: str = ""
    construction_in_scope: bool = True
    report: Optional[DegeneracyReport] = None


def image_order_two(rep: Representation, tol: float = DEFAULT_TOL) -> bool:
    nonid = [g for g in rep.generators() if not g.is_identity(tol)]
    if not nonid:
        return False
    J = nonid[0]
    if not (J * J).is_identity(tol):
        return False
    return all(psl_equal(g, J, tol) for g in nonid)


def theorem_a_gate(rep: Representation, tol: float = DEFAULT_TOL) -> GateResult:
    rep.signature.check_hyperbolic()
    if not rep.relator_holds(max(tol, 1e-7)):
        raise RelatorError("relator does not close")
    report = classify_representation(rep, tol)
    g, k = rep.signature.genus, rep.signature.punctures
    if not report.degenerate:
        return GateResult(True, route=ROUTE_NON_DEGENERATE,
                          construction_in_scope=False, report=report)
    if not report.apparent:
        return GateResult(False, reason=REASON_NO_APPARENT, report=report)
    if rep.is_trivial(tol):
        if g > 0 and k <= 2:
            return GateResult(False, reason=REASON_TRIVIAL, report=report)
        return GateResult(True, route=ROUTE_TRIVIAL_COVER, report=report)
    if image_order_two(rep, tol) and g > 0 and k == 1:
        return GateResult(False, reason=REASON_ORDER_TWO, report=report)

    if rep.all_translations(tol):
        if k == 1:
            route = ROUTE_ONCE_PUNCT_TRANSLATION
        elif g == 0:
            route = ROUTE_TRANSLATION_SPHERE
        elif k == 2:
            route = ROUTE_TRANSLATION_CHAIN
        else:
            route = ROUTE_TRANSLATION_GENERAL
        return GateResult(True, route=route, report=report)

    affine_like = (report.verdict == GLOBAL_FIXED_POINT) or report.coaxial
    if affine_like:
        if k >= 2:
            route = (ROUTE_AFFINE_SPHERE if g == 0 else
                     ROUTE_AFFINE_TWO_PUNCTURES if k == 2 else
                     ROUTE_AFFINE_GENERAL)
            return GateResult(True, route=route, report=report)
        # once-punctured affine: coaxial iff a pair is fixed pointwise
        if report.coaxial:
            norm = normalize_affine(rep, tol)
            moduli_one = all(
                abs(abs(gg.affine_parts(tol)[0]) - 1.0) <= tol
                for gg in norm.generators() if not gg.is_identity(tol))
            if not moduli_one:
                return GateResult(True, route=ROUTE_COAXIAL_NONUNITARY, report=report)
            u = unitary_image(norm, tol)
            if u.mode == DISCRETE:
                return GateResult(True, route=ROUTE_COAXIAL_FINITE, report=report)
            return GateResult(True, route=ROUTE_COAXIAL_DENSE, report=report)
        return GateResult(True, route=ROUTE_NONCOAXIAL, report=report)

    # dihedral: preserved pair, some generator swapping
    if k == 1 and g == 1:
        return GateResult(True, route=ROUTE_DIHEDRAL_TORUS, report=report)
    return GateResult(True, route=ROUTE_DIHEDRAL_GENERAL, report=report)


def normalize_affine(rep: Representation, tol: float = DEFAULT_TOL) -> Representation:
    """Conjugate so the global fixed structure sits at {oo} (and 0 if a pair).

    Returns the representation itself when already in normal form.
    """
    report = classify_representation(rep, tol)
    from .moebius import moebius_through

    def aux_points(avoid, n):
        out = []
        for cand in (0.0, 1.0, 1j, 2.0, -1.0, 0.5 + 0.5j, 3.0):
            p = CP1Point.of(cand)
            if all(not cp1_close(p, a, tol) for a in avoid + out):
                out.append(p)
                if len(out) == n:
                    return out
        raise RuntimeError("could not pick auxiliary points")

    if report.verdict == GLOBAL_FIXED_POINT:
        if rep.all_affine(tol):
            return rep
        p = report.point
        x, y = aux_points([p], 2)
        conj = moebius_through(x, y, p)
        return conjugate_representation(rep, conj)
    if report.verdict == FIXED_PAIR:
        p, q = report.pair
        if q.is_infinity and not p.is_infinity and abs(p.value) <= tol:
            return rep
        if p.is_infinity and not q.is_infinity and abs(q.value) <= tol:
            p, q = q, p
            return rep
        (mid,) = aux_points([p, q], 1)
        conj = moebius_through(p, mid, q)
        return conjugate_representation(rep, conj)
    raise ValueError("representation has no invariant point or pair")


def conjugate_representation(rep: Representation, by: MoebiusMap) -> Representation:
    conj = lambda m: by * m * by.inverse()
    return Representation(rep.signature,
                          [(conj(a), conj(b)) for a, b in rep.handles],
                          [conj(g) for g in rep.peripherals])


# ---------------------------------------------------------------------------
# Single-branch-point obstructions for closed-surface liftable images
# ---------------------------------------------------------------------------


@dataclass
class ObstructionReport:
    passed: bool
    failed_clause: str = ""
    boundary_affine: bool = False


def lefils_obstructions(g: int, m: int, n: Optional[int],
                        liftable: bool) -> ObstructionReport:
    """Single branch point of order m on a closed genus-g surface, image
    order n (None for infinite): parity, minimal order, and the covering
    count inequality n(chi + m) >= 2(m+1)."""
    if g < 2:
        raise ValueError("obstruction check applies to genus >= 2")
    if liftable and m % 2 != 0:
        return ObstructionReport(False, failed_clause="parity")
    if m < 2 * g - 2:
        return ObstructionReport(False, failed_clause="min-order")
    if n is not None:
        chi = 2 - 2 * g
        if n * (chi + m) < 2 * (m + 1):
            return ObstructionReport(False, failed_clause="riemann-hurwitz")
    return ObstructionReport(True, boundary_affine=(m == 2 * g - 2))
