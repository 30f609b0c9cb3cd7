"""Random representation generators for the degenerate families.

Each generator produces representations in the normal form its family is
defined by: translations, affine maps fixing infinity, co-axial maps fixing
0 and infinity, dihedral maps preserving {0, oo}.  All draws are seeded.
"""

from __future__ import annotations

import cmath
import math
import random
from fractions import Fraction
from typing import List, Optional, Tuple

from .moebius import MoebiusMap, commutator
from .scalars import AngleTag
from .surface import (Representation, SurfaceSignature, TranslationCharacter,
                      peripheral_from_relator)


def _nonzero_complex(rng: random.Random, scale: float = 1.0) -> complex:
    while True:
        z = complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))
        if abs(z) > 0.1 * scale:
            return z


def random_translation_character(rng: random.Random, g: int, k: int,
                                 trivial_punctures: int = 1) -> TranslationCharacter:
    """Character with non-trivial handles and >= trivial_punctures zeros."""
    sig = SurfaceSignature(g, k)
    handles = [( _nonzero_complex(rng), _nonzero_complex(rng)) for _ in range(g)]
    nt = k - trivial_punctures
    vals = [_nonzero_complex(rng) for _ in range(max(nt - 1, 0))]
    if nt > 0:
        closing = -sum(vals) if vals else _nonzero_complex(rng)
        if nt == 1:
            # a single non-trivial puncture cannot close the sum alone
            vals = [closing, -closing]
            nt = 2
        else:
            vals.append(closing)
    while len(vals) < k:
        vals.append(0.0 + 0.0j)
    vals = vals[:k]
    if abs(sum(vals)) > 1e-12:
        vals[0] -= sum(vals)
    return TranslationCharacter(sig, handles, [complex(v) for v in vals])


def _random_affine(rng: random.Random, rational_angle: Optional[bool] = None,
                   unit_modulus: bool = False) -> MoebiusMap:
    if rational_angle is None:
        rational_angle = rng.random() < 0.5
    if rational_angle:
        q = Fraction(rng.randrange(0, 12), rng.choice([1, 2, 3, 4, 6, 12]))
        tag = AngleTag.rational(q)
        theta = 2 * math.pi * float(q % 1)
    else:
        theta = rng.uniform(0.05, 2 * math.pi - 0.05)
        # nudge away from low-denominator rationals of 2 pi
        theta += math.sqrt(2) * 1e-3
        tag = AngleTag.irrational(theta)
    r = 1.0 if unit_modulus else math.exp(rng.uniform(-1.0, 1.0))
    a = r * cmath.exp(1j * theta)
    b = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
    return MoebiusMap.affine(a, b, angle=tag)


def random_affine_representation(rng: random.Random, g: int, k: int,
                                 trivial_punctures: int = 1) -> Representation:
    """Affine representation, relator-closed, with apparent singularities."""
    assert k >= 2
    sig = SurfaceSignature(g, k)
    handles = [(_random_affine(rng), _random_affine(rng)) for _ in range(g)]
    periph: List[Optional[MoebiusMap]] = [None] * k
    for j in range(1, k - trivial_punctures):
        periph[j] = _random_affine(rng)
    for j in range(max(k - trivial_punctures, 1), k):
        periph[j] = MoebiusMap.identity()
    return peripheral_from_relator(sig, handles, periph)


def random_coaxial_representation(rng: random.Random, g: int,
                                  case: str) -> Representation:
    """Co-axial (diagonal) representation on S_{g,1} with trivial puncture.

    case: "nonunitary" | "dense" | "finite"
    """
    sig = SurfaceSignature(g, 1)
    handles = []
    if case == "nonunitary":
        for _ in range(g):
            a = _random_affine(rng)
            b = _random_affine(rng)
            handles.append((MoebiusMap.affine(a.affine_parts()[0], 0.0, angle=a.angle),
                            MoebiusMap.affine(b.affine_parts()[0], 0.0, angle=b.angle)))
        # guarantee a non-unit modulus somewhere
        a0 = handles[0][0].affine_parts()[0]
        if abs(abs(a0) - 1.0) < 1e-3:
            handles[0] = (MoebiusMap.affine(2.0 * a0, 0.0, angle=handles[0][0].angle),
                          handles[0][1])
    elif case == "dense":
        for _ in range(g):
            ta = rng.uniform(0.1, 6.0) + math.sqrt(2) * 1e-3
            tb = rng.uniform(0.1, 6.0) + math.sqrt(3) * 1e-3
            handles.append((MoebiusMap.affine(cmath.exp(1j * ta), 0.0,
                                              angle=AngleTag.irrational(ta)),
                            MoebiusMap.affine(cmath.exp(1j * tb), 0.0,
                                              angle=AngleTag.irrational(tb))))
    elif case == "finite":
        m = rng.choice([3, 4, 5, 6, 7, 9, 12])
        exps = []
        for _ in range(g):
            exps.append((rng.randrange(m), rng.randrange(m)))
        # force surjectivity onto Z_m
        exps[0] = (1, exps[0][1])
        for (ea, eb) in [exps[0]]:
            pass
        handles = [
            (MoebiusMap.affine(cmath.exp(2j * math.pi * ea / m), 0.0,
                               angle=AngleTag.rational(Fraction(ea, m))),
             MoebiusMap.affine(cmath.exp(2j * math.pi * eb / m), 0.0,
                               angle=AngleTag.rational(Fraction(eb, m))))
            for (ea, eb) in exps]
    else:
        raise ValueError(case)
    return Representation(sig, handles, [MoebiusMap.identity()])


def random_noncoaxial_representation(rng: random.Random, g: int,
                                     flavor: str = "mixed") -> Representation:
    """Affine, not co-axial, trivial puncture on S_{g,1}.

    The commutator product over handles must be trivial, so the last handle
    is chosen to cancel the accumulated commutator translation: its images
    are translations T, S with [T, S] = Id, and the peripheral correction is
    absorbed by making the product of all commutators vanish.
    """
    assert g >= 2
    sig = SurfaceSignature(g, 1)
    handles: List[Tuple[MoebiusMap, MoebiusMap]] = []
    for _ in range(g - 1):
        if flavor == "real":
            a = MoebiusMap.affine(rng.uniform(1.2, 3.0) * rng.choice([1, -1]),
                                  rng.uniform(-1, 1), angle=None)
            b = MoebiusMap.affine(rng.uniform(1.2, 3.0), rng.uniform(-1, 1),
                                  angle=None)
        else:
            a = _random_affine(rng)
            b = _random_affine(rng)
        handles.append((a, b))
    # accumulated commutator so far
    acc = MoebiusMap.identity()
    for a, b in handles:
        acc = acc * commutator(a, b)
    lin, off = acc.affine_parts()
    assert abs(lin - 1.0) < 1e-9, "commutators of affine pairs are translations"
    # the last handle contributes commutator -off: use A(z)=2z+c, B=z+d with
    # [A,B] = z + (2-1) d - 0 = z + d ... pick d = -off via direct formula
    A = MoebiusMap.affine(2.0, 0.0, angle=AngleTag.rational(Fraction(0)))
    B = MoebiusMap.translation(-off)
    assert (acc * commutator(A, B)).is_identity(1e-7)
    handles.append((A, B))
    return Representation(sig, handles, [MoebiusMap.identity()])


def random_dihedral_representation(rng: random.Random, g: int, k: int) -> Representation:
    """Dihedral (not affine) degenerate, peripherals fixing {0, oo} pointwise."""
    assert g >= 1
    sig = SurfaceSignature(g, k)
    handles: List[Tuple[MoebiusMap, MoebiusMap]] = []
    for i in range(g):
        if i == 0 and k == 1:
            # the total commutator must vanish; keep each one trivial
            b = _nonzero_complex(rng)
            handles.append((MoebiusMap.point_swap(-b), MoebiusMap.point_swap(b)))
        elif i == 0:
            handles.append((MoebiusMap.affine(_nonzero_complex(rng), 0.0),
                            MoebiusMap.point_swap(_nonzero_complex(rng))))
        else:
            style = rng.choice(["coax", "dihedral"]) if k >= 2 else \
                rng.choice(["coax", "cancelling"])
            if style == "coax":
                handles.append((MoebiusMap.affine(_nonzero_complex(rng), 0.0),
                                MoebiusMap.affine(_nonzero_complex(rng), 0.0)))
            elif style == "dihedral":
                handles.append((MoebiusMap.point_swap(_nonzero_complex(rng)),
                                MoebiusMap.point_swap(_nonzero_complex(rng))))
            else:
                b = _nonzero_complex(rng)
                handles.append((MoebiusMap.point_swap(-b), MoebiusMap.point_swap(b)))
    if k == 1:
        rep = Representation(sig, handles, [MoebiusMap.identity()])
        assert rep.relator_holds(1e-7)
        return rep
    # peripherals: diagonal, with the relator closing and >= 1 trivial
    periph: List[Optional[MoebiusMap]] = [None] * k
    for j in range(1, k):
        periph[j] = MoebiusMap.identity() if rng.random() < 0.5 else \
            MoebiusMap.affine(_nonzero_complex(rng), 0.0)
    rep = peripheral_from_relator(sig, handles, periph)
    # the closing peripheral must also fix {0, oo} pointwise (diagonal);
    # commutators of pair-preserving maps always do
    m = rep.peripherals[0]
    scale = max(abs(x) for x in m.matrix())
    assert abs(m.b) <= 1e-7 * scale and abs(m.c) <= 1e-7 * scale, \
        "dihedral relator closed by a non-diagonal map"
    if not any(p.is_identity(1e-9) for p in rep.peripherals):
        periph[1] = MoebiusMap.identity()
        rep = peripheral_from_relator(sig, handles, periph)
    return rep


def dihedral_torus_representation(rng: random.Random) -> Representation:
    """S_{1,1} dihedral with trivial puncture: A = diag or swap, [A,B] = Id."""
    sig = SurfaceSignature(1, 1)
    if rng.random() < 0.5:
        # A = -z (a = -1), B = 1/(bz)
        A = MoebiusMap.affine(-1.0, 0.0)
        B = MoebiusMap.point_swap(_nonzero_complex(rng))
    else:
        # both swap: A = 1/(az), B = 1/(bz) with a = -b
        b = _nonzero_complex(rng)
        A = MoebiusMap.point_swap(-b)
        B = MoebiusMap.point_swap(b)
    assert commutator(A, B).is_identity(1e-9)
    return Representation(sig, [(A, B)], [MoebiusMap.identity()])


def random_unitary_representation(rng: random.Random, k: int = 3) -> Representation:
    """Representation into PSU(2) on S_{0,k} (elliptic peripherals)."""
    sig = SurfaceSignature(0, k)
    periph: List[Optional[MoebiusMap]] = [None] * k
    for j in range(1, k):
        th = rng.uniform(0.2, math.pi - 0.2)
        ph = rng.uniform(0, 2 * math.pi)
        c, s = math.cos(th / 2), math.sin(th / 2)
        u = cmath.exp(1j * ph)
        periph[j] = MoebiusMap.from_matrix(c + 1j * s * u.real,
                                           s * u.imag + 1j * 0.0,
                                           -s * u.imag, c - 1j * s * u.real)
    return peripheral_from_relator(sig, [], periph)


def random_moebius(rng: random.Random, scale: float = 1.0) -> MoebiusMap:
    while True:
        a, b, c, d = (complex(rng.uniform(-scale, scale),
                              rng.uniform(-scale, scale)) for _ in range(4))
        if abs(a * d - b * c) > 0.05:
            return MoebiusMap.from_matrix(a, b, c, d)


def random_finite_image_representation(rng: random.Random) -> Representation:
    """Representation with image in a finite cyclic or dihedral subgroup.

    Used to exercise the degeneracy classifier against brute force.
    """
    m = rng.choice([1, 2, 3, 4, 5, 6])
    rot = MoebiusMap.from_matrix(cmath.exp(1j * math.pi / m), 0, 0,
                                 cmath.exp(-1j * math.pi / m))
    swap = MoebiusMap.from_matrix(0, 1, 1, 0)
    dihedral = rng.random() < 0.5
    pool = [rot.power(j) for j in range(m)]
    if dihedral:
        pool += [swap * rot.power(j) for j in range(m)]
    g = rng.choice([0, 1, 2])
    k = rng.choice([3, 4]) if g == 0 else rng.choice([1, 2, 3])
    if 2 - 2 * g - k >= 0:
        k = 3
    sig = SurfaceSignature(g, k)
    conj = random_moebius(rng) if rng.random() < 0.5 else MoebiusMap.identity()

    def pick():
        return conj * rng.choice(pool) * conj.inverse()

    for _ in range(200):
        handles = [(pick(), pick()) for _ in range(g)]
        periph: List[Optional[MoebiusMap]] = [None] + [pick() for _ in range(k - 1)]
        try:
            rep = peripheral_from_relator(sig, handles, periph)
        except Exception:
            continue
        return rep
    raise RuntimeError("failed to build finite-image representation")
