"""Affine, co-axial, pentagon and dihedral constructions.

These extend the translation builders: same assembler, same verification
discipline.  Pairing maps may be genuinely Moebius here (pair-swapping
maps), in which case the image of a straight edge is stored as a circular
arc through the image of a midpoint sample.
"""

from __future__ import annotations

import cmath
import math
from typing import Dict, List, Optional, Sequence, Tuple

from . import geometry as geo
from .builders import (Assembler, BuildError, ExceptionalCaseError,
                       FixedBasePointError, RaySearchFailed, SearchExhausted,
                       _attach_peripheral_markings, _direction_avoiding,
                       build_once_punctured_closed_chain, verify_complex)
from .complexes import (PolygonalComplex, cone_angles, embedded_chain, ends,
                        euler_and_signature, trace_holonomy, validate,
                        vertex_classes)
from .moebius import (CP1Point, INF, MoebiusMap, commutator, psl_equal)
from .moves import (ElementaryMove, MoveLog, apply_log,
                    align_discrete_unitary, good_handles_noncoaxial,
                    isolate_dihedral_handle, normalize_coaxial,
                    order_commutators_convex, MODE_DILATION, MODE_SIGNED)
from .scalars import TWO_PI, wrap_angle
from .surface import (DENSE, DISCRETE, Representation, SurfaceSignature,
                      unitary_image)
from .surgery import glue_preserving_holonomy, graft_handle


def _img_edge(m: MoebiusMap, geom) -> tuple:
    """Image geometry of an edge under a Moebius map (arc when non-affine)."""
    if geom[0] == "seg":
        a, b = CP1Point.of(geom[1]), CP1Point.of(geom[2])
        mid = CP1Point.of((complex(geom[1]) + complex(geom[2])) / 2.0)
        ia, ib, im = m.apply(a), m.apply(b), m.apply(mid)
        if any(p.is_infinity for p in (ia, ib, im)):
            raise BuildError("edge image passes through infinity")
        if m.is_affine():
            return ("seg", ia.value, ib.value)
        if geo.orient(ia.value, im.value, ib.value) == 0:
            return ("seg", ia.value, ib.value)
        return ("arc", ia.value, ib.value, im.value)
    if geom[0] == "ray":
        base = CP1Point.of(geom[1])
        ib = m.apply(base)
        if not m.is_affine():
            raise BuildError("ray image under a non-affine map is not a ray")
        a, _ = m.affine_parts()
        return ("ray", ib.value, a * complex(geom[2]))
    raise BuildError("unsupported edge image")


def _reverse_walk(boundary: Sequence[Tuple[str, int]]) -> List[Tuple[str, int]]:
    return [(eid, -sgn) for eid, sgn in reversed(boundary)]


def _chain_walk_ccw(points: Sequence[complex]) -> bool:
    s = 0.0
    n = len(points)
    for i in range(n):
        a, b = points[i], points[(i + 1) % n]
        s += a.real * b.imag - b.real * a.imag
    return s > 0


# ---------------------------------------------------------------------------
# Affine sphere (two-slit planes glued preserving holonomy)
# ---------------------------------------------------------------------------


def two_slit_disjoint(a_map: MoebiusMap, base: complex,
                      direction: complex) -> bool:
    """Is the ray from `base` disjoint from its image under the map?"""
    d = complex(direction) / abs(complex(direction))
    r1 = ("ray", complex(base), d)
    img = _img_edge(a_map, r1)
    if abs(complex(img[1]) - complex(base)) < 1e-12:
        return False
    if geo.interiors_cross(r1, img):
        return False
    if geo.point_on_open_piece(complex(img[1]), r1) or \
            geo.point_on_open_piece(complex(base), img):
        return False
    return True


def build_two_slit_plane(a_map: MoebiusMap, base: complex,
                         direction: complex,
                         allow_shift: bool = True) -> PolygonalComplex:
    """Plane slit along a ray and its image, cross-identified by the map.

    Realizes peripherals (A, A^{-1}) on a sphere with a 4 pi branch class.
    With allow_shift the base point moves out along the ray until the two
    slits are disjoint (the sub-ray shrinking argument)."""
    if not a_map.is_affine():
        raise BuildError("two-slit plane needs an affine map")
    d = complex(direction) / abs(complex(direction))
    p = complex(base)
    for _ in range(60):
        if two_slit_disjoint(a_map, p, d):
            break
        if not allow_shift:
            raise RaySearchFailed("slits not disjoint at the fixed base")
        p = p + d * max(1.0, abs(p))
    else:
        raise RaySearchFailed("could not separate the ray from its image")
    r1 = ("ray", p, d)
    r2 = _img_edge(a_map, r1)
    asm = Assembler()
    e1_out = asm.edge(r1)
    e1_in = asm.edge(r1)
    e2_out = asm.edge(r2)
    e2_in = asm.edge(r2)
    phi1 = wrap_angle(cmath.phase(d))
    phi2 = wrap_angle(cmath.phase(complex(r2[2])))
    first, second = ((e1_in, e1_out), (e2_in, e2_out)) if phi1 <= phi2 else \
        ((e2_in, e2_out), (e1_in, e1_out))
    asm.face([(first[0], -1), (first[1], 1), (second[0], -1), (second[1], 1)])
    pid_1 = asm.pair(e1_out, e2_in, a_map)
    pid_2 = asm.pair(e2_out, e1_in, a_map.inverse())
    asm.metadata["kind"] = "affine"
    asm.metadata["base_point"] = [p.real, p.imag]
    asm.markings["loop"] = [(pid_1, 1)]
    asm.markings["loopinv"] = [(pid_2, 1)]
    cx = asm.freeze()
    rep = validate(cx)
    if not rep.valid:
        raise BuildError(f"two-slit plane invalid: {rep.issues[:4]}")
    return cx


def _direction_into_end(cx: PolygonalComplex, base: complex,
                        want: MoebiusMap) -> complex:
    """An admissible slit direction from `base` entering an end whose link
    holonomy matches `want` up to rotation and inversion."""
    the_ends = ends(cx)
    good = set()
    for idx, e in enumerate(the_ends):
        for orient in (1, -1):
            w = e.link if orient == 1 else [(p, -s) for p, s in reversed(e.link)]
            for rot in range(max(1, len(w))):
                ww = w[rot:] + w[:rot]
                out = MoebiusMap.identity()
                for pid, sgn in ww:
                    m = cx.pairings[pid].map
                    out = out * (m if sgn == 1 else m.inverse())
                if (out * want.inverse()).is_identity(1e-7):
                    good.add(idx)
    if not good:
        raise RaySearchFailed("no end matches the requested monodromy")
    for k in range(720):
        d = cmath.exp(1j * (0.11 + k * 0.37))
        ray = ("ray", complex(base), d)
        if any(geo.interiors_cross(ray, e.geom) for e in cx.edges.values()):
            continue
        idx = _end_of_direction(cx, wrap_angle(cmath.phase(d)))
        if idx in good:
            return d
    raise RaySearchFailed("no admissible direction reaches the matching end")


def _end_of_direction(cx: PolygonalComplex, phi: float):
    """Index of the end whose far sector at angle phi a radial ray enters."""
    from .complexes import _face_far_pairs
    the_ends = ends(cx)
    germ_end = {}
    for idx, e in enumerate(the_ends):
        for gid in e.germs:
            germ_end[gid] = idx
    for f in cx.faces:
        pairs = _face_far_pairs(cx, f)
        for a, b, width in pairs:
            ga = cx.edges[a].geom
            gb = cx.edges[b].geom
            pa = wrap_angle(cmath.phase(complex(ga[2])))
            wid = width
            rel = wrap_angle(phi - pa)
            if rel < wid - 1e-12 and wid > 1e-12:
                return germ_end.get(a)
    return None


def _mono_matches(cx: PolygonalComplex, link, want: MoebiusMap,
                  tol: float = 1e-7) -> bool:
    for orient in (1, -1):
        w = link if orient == 1 else [(p, -s) for p, s in reversed(link)]
        for rot in range(max(1, len(w))):
            ww = w[rot:] + w[:rot]
            out = MoebiusMap.identity()
            for pid, sgn in ww:
                m = cx.pairings[pid].map
                out = out * (m if sgn == 1 else m.inverse())
            if (out * want.inverse()).is_identity(tol):
                return True
    return False


def _sector_of_direction(cx: PolygonalComplex, phi: float):
    """(far-arc key, width) of the face sector a radial direction enters."""
    from .complexes import _face_far_pairs
    for f in cx.faces:
        for a, b, width in _face_far_pairs(cx, f):
            ga = cx.edges[a].geom
            pa = wrap_angle(cmath.phase(complex(ga[2])))
            rel = wrap_angle(phi - pa)
            if width > 1e-12 and rel < width - 1e-12:
                return (a, b)
    return None


def _directions_by_sector(cx: PolygonalComplex, base: complex) -> List[complex]:
    """One admissible slit direction from `base` into each far sector."""
    seen = {}
    for k in range(1440):
        d = cmath.exp(1j * (0.0137 + k * math.pi / 720.0))
        ray = ("ray", complex(base), d)
        if any(geo.interiors_cross(ray, e.geom) for e in cx.edges.values()):
            continue
        key = _sector_of_direction(cx, wrap_angle(cmath.phase(d)))
        if key is not None and key not in seen:
            seen[key] = d
    if not seen:
        raise RaySearchFailed("no admissible slit direction at the base")
    return list(seen.values())


def _lin_of(m: MoebiusMap):
    if not m.is_affine(1e-7):
        return None
    return m.affine_parts()[0]


def _glue_matching_merge(cx: PolygonalComplex, nxt: PolygonalComplex,
                         base: complex, want: MoebiusMap) -> PolygonalComplex:
    """Glue preserving holonomy, choosing slit target ends so the merged
    pole lands in the conjugacy class of `want` (matched by linear part)."""
    d1s = _directions_by_sector(cx, base)
    d2s = _directions_by_sector(nxt, base)
    lw = _lin_of(want)
    last = None
    for d1 in d1s:
        for d2 in d2s:
            try:
                cand = glue_preserving_holonomy(cx, base, d1, nxt, base, d2)
            except Exception as err:
                last = err
                continue
            for e in ends(cand):
                le = _lin_of(e.monodromy)
                if le is None or lw is None:
                    continue
                if abs(le - lw) <= 1e-7 * (1 + abs(lw)) or \
                        abs(le * lw - 1.0) <= 1e-7:
                    return cand
            last = BuildError("merged pole has the wrong conjugacy class")
    raise last if last else RaySearchFailed("no gluing produced the merge")


def build_affine_sphere(rep: Representation) -> Tuple[PolygonalComplex, MoveLog]:
    """Affine representation of a punctured sphere with a trivial puncture:
    two-slit planes for the non-trivial peripherals, glued preserving
    holonomy at a common base point."""
    sig = rep.signature
    if sig.genus != 0:
        raise BuildError("affine sphere builder needs genus 0")
    if not rep.all_affine():
        raise BuildError("needs an affine representation")
    nontrivial = [(j, g) for j, g in enumerate(rep.peripherals)
                  if not g.is_identity()]
    if not nontrivial:
        from .builders import build_trivial_cover
        _, cx = build_trivial_cover(sig)
        return cx, []
    maps = [g for _, g in nontrivial]
    closing = MoebiusMap.identity()
    for m in maps:
        closing = closing * m
    if not closing.is_identity(1e-7):
        raise BuildError("non-trivial peripherals do not close; relator broken")
    if len(maps) == 1:
        raise BuildError("a single non-trivial peripheral cannot close")
    from .moebius import fixed_in_plane
    last_err = None
    try:
        return _affine_sphere_chain(rep, maps)
    except (BuildError, RaySearchFailed, geo.DegenerateConfiguration) as e:
        last_err = e
    for rot in range(len(maps)):
        try:
            return _assemble_affine_sphere(rep, maps[rot:] + maps[:rot])
        except (BuildError, RaySearchFailed, geo.DegenerateConfiguration) as e:
            last_err = e
    raise last_err


def _affine_sphere_chain(rep: Representation,
                         maps: List[MoebiusMap]) -> Tuple[PolygonalComplex, MoveLog]:
    """Single-plane chain: slits at the orbit points q_{i+1} = A_i(q_i),
    cyclically cross-paired by the peripheral maps themselves.

    Gives one branch class of angle 2 pi n (n non-trivial peripherals) and
    one end per peripheral, each crossing its pairing once.
    """
    n = len(maps)
    closing = MoebiusMap.identity()
    for m in maps:
        closing = closing * m
    if not closing.is_identity(1e-6):
        raise BuildError("peripheral cycle does not close")
    from .moebius import fixed_in_plane
    lins = [m.affine_parts()[0] for m in maps]
    last_err = None
    for k_dir in range(24):
        d0 = _direction_avoiding([1.0] + lins, start=0.37 + 0.203 * k_dir)
        p = 0.45 + 0.27j
        t = 0.0
        for _try in range(44):
            q = p + t * d0
            try:
                return _assemble_sphere_chain(rep, maps, q, d0)
            except (BuildError, RaySearchFailed, ValueError) as err:
                last_err = err
            t = 1.0 if t == 0.0 else 2.0 * t
    raise last_err if last_err else RaySearchFailed("sphere chain failed")


def _assemble_sphere_chain(rep: Representation, maps: List[MoebiusMap],
                           q1: complex, d0: complex) -> Tuple[PolygonalComplex, MoveLog]:
    n = len(maps)
    rays = [("ray", q1, d0)]
    for m in maps[:-1]:
        rays.append(_img_edge(m, rays[-1]))
    for i in range(n):
        for j in range(i + 1, n):
            if geo.interiors_cross(rays[i], rays[j]):
                raise RaySearchFailed("chain slits intersect")
            if abs(complex(rays[i][1]) - complex(rays[j][1])) < 1e-9:
                raise RaySearchFailed("chain slit bases collide")
    asm = Assembler()
    sides = []
    for r in rays:
        lo = asm.edge(r)
        hi = asm.edge(r)
        sides.append((lo, hi))
    # face boundary: slits interleaved in ccw order of their directions,
    # ties by transverse offset with the same in-before-out rule the far
    # machinery uses
    keyed = []
    for i, r in enumerate(rays):
        dd = complex(r[2]) / abs(complex(r[2]))
        phi = wrap_angle(cmath.phase(dd))
        tau = (complex(r[1]) * cmath.exp(-1j * cmath.phase(dd))).imag
        keyed.append((round(phi, 12), round(tau, 9), i))
    keyed.sort()
    walk = []
    for _phi, _tau, i in keyed:
        lo, hi = sides[i]
        walk.extend([(lo, -1), (hi, 1)])
    asm.face(walk)
    pids = []
    for i in range(n):
        j = (i + 1) % n
        pids.append(asm.pair(sides[i][1], sides[j][0], maps[i]))
    asm.metadata["kind"] = "affine" if any(
        abs(m.affine_parts()[0] - 1.0) > 1e-9 for m in maps) else "translation"
    cx = asm.freeze()
    rep_v = validate(cx)
    if not rep_v.valid:
        raise BuildError(f"sphere chain invalid: {rep_v.issues[:4]}")
    the_ends = ends(cx)
    if len(the_ends) != n:
        raise BuildError(f"sphere chain has {len(the_ends)} ends, wanted {n}")
    for e in the_ends:
        if len(e.link) != 1:
            raise BuildError("sphere chain end crosses several pairings")
    classes = vertex_classes(cx)
    if len(classes) != 1:
        raise BuildError(f"sphere chain has {len(classes)} branch classes")
    asm.metadata["deleted_classes"] = [list(next(iter(classes)))]
    k = rep.signature.punctures
    extra_marks = max(0, k - n - 1)
    asm.metadata["marked_points"] = [[0.11 + 0.07 * t, -0.2]
                                     for t in range(extra_marks)]
    cx = asm.freeze()
    cx = _attach_peripheral_markings(asm, cx, rep)
    return verify_complex(cx, rep), []


def _assemble_affine_sphere(rep: Representation,
                            maps: List[MoebiusMap]) -> Tuple[PolygonalComplex, MoveLog]:
    from .moebius import fixed_in_plane
    closing = MoebiusMap.identity()
    for m in maps:
        closing = closing * m
    if not closing.is_identity(1e-6):
        # a rotated ordering of the peripherals need not close; conjugate
        # closure only holds for the original cyclic order
        raise BuildError("rotated peripheral order does not close")
    piece_maps = maps[:-1] if len(maps) > 2 else maps[:1]
    # a common base point and slit direction working for every piece
    forb = []
    for m in piece_maps:
        a, _b = m.affine_parts()
        forb.append(a)
    base = None
    for k_dir in range(48):
        d = _direction_avoiding([1.0] + forb, start=0.31 + 0.131 * k_dir)
        # sub-ray shrinking: move the base out along the ray, doubling steps
        t = 0.0
        cand = 0.35 + 0.15j
        for _try in range(48):
            probe = cand + t * d
            ok = all(fixed_in_plane(m) is None
                     or abs(fixed_in_plane(m) - probe) > 1e-6
                     for m in piece_maps)
            ok = ok and all(two_slit_disjoint(m, probe, d)
                            and two_slit_disjoint(m.inverse(), probe, d)
                            for m in piece_maps)
            if ok:
                base = probe
                break
            t = 1.0 if t == 0.0 else 2.0 * t
        if base is not None:
            break
    if base is None:
        raise RaySearchFailed("no common base point for the sphere pieces")
    def make_piece(m: MoebiusMap, flipped: bool) -> PolygonalComplex:
        # a piece built for the inverse map realizes the same peripheral
        # pair with the roles of its two ends exchanged
        piece = build_two_slit_plane(m.inverse() if flipped else m,
                                     base, d, allow_shift=False)
        if flipped:
            piece.markings["loop"], piece.markings["loopinv"] = \
                piece.markings["loopinv"], piece.markings["loop"]
        return piece

    cx = None
    last = None
    for seed_flip in (False, True):
        try:
            cx = make_piece(piece_maps[0], seed_flip)
            cx.markings["w0pos"] = cx.markings.pop("loop")
            cx.markings["w0neg"] = cx.markings.pop("loopinv")
            cx.markings["merged"] = list(cx.markings["w0neg"])
            acc = piece_maps[0]
            for i in range(1, len(piece_maps)):
                acc2 = acc * piece_maps[i]
                glued = None
                for flipped in (False, True):
                    nxt = make_piece(piece_maps[i], flipped)
                    try:
                        glued = _glue_matching_merge(cx, nxt, base, acc2)
                        break
                    except (BuildError, RaySearchFailed) as err:
                        last = err
                if glued is None:
                    raise last
                cx = glued
                cx.markings[f"w{i}pos"] = cx.markings.pop("R.loop")
                cx.markings[f"w{i}neg"] = cx.markings.pop("R.loopinv")
                cx.markings["merged"] = cx.markings[f"w{i}neg"] \
                    + cx.markings["merged"]
                acc = acc2
            break
        except (BuildError, RaySearchFailed) as err:
            last = err
            cx = None
    if cx is None:
        raise last
    asm = Assembler.thaw(cx)
    classes = vertex_classes(cx)
    if len(classes) != 1:
        raise BuildError(f"affine sphere has {len(classes)} branch classes")

    def trace_word(word):
        out = MoebiusMap.identity()
        for pid, sgn in word:
            mm = cx.pairings[pid].map
            out = out * (mm if sgn == 1 else mm.inverse())
        return out

    words_pos = {t: asm.markings.pop(f"w{t}pos") for t in range(len(piece_maps))}
    words_neg = {t: asm.markings.pop(f"w{t}neg") for t in range(len(piece_maps))}
    merged_word = asm.markings.pop("merged")
    used_pieces = set()
    for j, gmap in enumerate(rep.peripherals):
        if gmap.is_identity():
            asm.markings[f"gamma{j}"] = []
            continue
        assigned = False
        for t, m in enumerate(piece_maps):
            if t in used_pieces:
                continue
            if (m * gmap.inverse()).is_identity(1e-9):
                asm.markings[f"gamma{j}"] = list(words_pos[t])
                used_pieces.add(t)
                assigned = True
                break
        if not assigned:
            for cand in (merged_word,
                         [(p, -s) for p, s in reversed(merged_word)]):
                if (trace_word(cand) * gmap.inverse()).is_identity(1e-7):
                    asm.markings[f"gamma{j}"] = list(cand)
                    assigned = True
                    break
        if not assigned:
            raise BuildError(f"could not assign a marking for puncture {j}")
    asm.metadata["kind"] = "affine"
    asm.metadata["deleted_classes"] = [list(next(iter(classes)))]
    extra_marks = max(0, len(rep.peripherals) - len(maps) - 1)
    asm.metadata["marked_points"] = [[0.11 + 0.07 * t, -0.2]
                                     for t in range(extra_marks)]
    cx = asm.freeze()
    return verify_complex(cx, rep), []


def _branch_vertex(cx: PolygonalComplex) -> complex:
    """A representative location of the (unique) finite vertex class."""
    from .complexes import class_location
    classes = vertex_classes(cx)
    nodes = next(iter(classes.values()))
    return class_location(cx, nodes)


def _free_ray_direction(cx: PolygonalComplex, base: complex) -> complex:
    """A direction from `base` avoiding every edge of the complex."""
    forb = []
    for e in cx.edges.values():
        if e.geom[0] == "seg":
            forb.append(complex(e.geom[2]) - complex(e.geom[1]))
            forb.append(complex(e.geom[1]) - base)
            forb.append(complex(e.geom[2]) - base)
        elif e.geom[0] == "ray":
            forb.append(complex(e.geom[2]))
            forb.append(complex(e.geom[1]) - base)
    start = 0.17
    for k in range(2000):
        d = _direction_avoiding(forb, start=start + 0.019 * k)
        ray = ("ray", base, d)
        if all(not geo.interiors_cross(ray, e.geom) for e in cx.edges.values()):
            return d
    raise RaySearchFailed("no free ray from the branch point")


# ---------------------------------------------------------------------------
# Affine chain with boundary commutator (genus >= 1, two punctures)
# ---------------------------------------------------------------------------


def build_affine_hexagon(rep: Representation) -> PolygonalComplex:
    """One handle with possibly non-commuting images on S_{1,2}: the six-sided
    chain whose two rays are identified by the commutator translation."""
    sig = rep.signature
    if sig.genus != 1 or sig.punctures != 2:
        raise BuildError("hexagon builder needs (g, k) = (1, 2)")
    A, B = rep.handles[0]
    C = commutator(A, B)
    golden = (1 + 5 ** 0.5) / 2
    from .moebius import fixed_in_plane
    base = 0.4 + 0.23j
    for _try in range(1000):
        ok = True
        for m in (A, B, A * B, B * A):
            f = fixed_in_plane(m) if m.is_affine() else None
            if f is not None and abs(f - base) < 1e-6:
                ok = False
        if ok and _hexagon_attempt_ok(A, B, base):
            break
        base = base + 0.13 * cmath.exp(1j * golden * (_try + 1))
    P = CP1Point.of(base)
    p = base
    ap = A.apply(P).value
    bp = B.apply(P).value
    q1 = (A * B).apply(P).value
    q2 = (B * A).apply(P).value
    asm = Assembler()
    e2 = asm.edge(("seg", p, ap))
    e1 = asm.edge(_img_edge(A, ("seg", p, bp)))
    e3 = asm.edge(("seg", p, bp))
    e4 = asm.edge(_img_edge(B, ("seg", p, ap)))
    # rays from q1 and q2, identified by [B, A]
    Cba = commutator(B, A)
    forb = [q1 - ap, ap - p, bp - p, q2 - bp, q1 - p, q2 - p]
    d0 = _direction_avoiding(forb, start=0.23)
    r0_geom = ("ray", q1, d0)
    r5_geom = _img_edge(Cba, r0_geom)
    e0 = asm.edge(r0_geom)
    e5 = asm.edge(r5_geom)
    walk = [(e0, -1), (e1, -1), (e2, -1), (e3, 1), (e4, 1), (e5, 1)]
    if _chain_walk_ccw([q1, ap, p, bp, q2]):
        pass  # exterior of a clockwise-listed loop is already on the left
    else:
        walk = _reverse_walk(walk)
    asm.face(walk)
    pa = asm.pair(e3, e1, A)
    pb = asm.pair(e2, e4, B)
    pc = asm.pair(e0, e5, Cba)
    asm.markings["alpha0"] = [(pa, 1)]
    asm.markings["beta0"] = [(pb, 1)]
    asm.metadata["kind"] = "affine"
    cx = asm.freeze()
    classes = vertex_classes(cx)
    if len(classes) != 1:
        raise BuildError(f"hexagon produced {len(classes)} vertex classes")
    asm.metadata["deleted_classes"] = [list(next(iter(classes)))]
    cx = asm.freeze()
    cx = _attach_peripheral_markings(asm, cx, rep)
    return verify_complex(cx, rep)


def _hexagon_attempt_ok(A: MoebiusMap, B: MoebiusMap, base: complex) -> bool:
    P = CP1Point.of(base)
    pts = [base]
    for m in (A, B, A * B, B * A):
        q = m.apply(P)
        if q.is_infinity:
            return False
        pts.append(q.value)
    # distinct enough vertices
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(pts[i] - pts[j]) < 1e-9 and (i, j) != (3, 4):
                return False
    return True


def build_affine_two_punctures(rep: Representation) -> Tuple[PolygonalComplex, MoveLog]:
    """Non-trivial affine representation on S_{g,2} with a trivial puncture:
    hexagon handles glued preserving holonomy at a shared base point."""
    sig = rep.signature
    g = sig.genus
    if g < 1 or sig.punctures != 2:
        raise BuildError("needs g >= 1, k = 2")
    from .moves import ensure_nontrivial_handles
    rep2, log = ensure_nontrivial_handles(rep)
    if g == 1:
        return build_affine_hexagon(rep2), log
    pieces = []
    for i in range(g):
        sub = Representation(SurfaceSignature(1, 2), [rep2.handles[i]],
                             [MoebiusMap.identity(),
                              commutator(*rep2.handles[i]).inverse()])
        pieces.append(build_affine_hexagon(sub))
    cx = pieces[0]
    for nxt in pieces[1:]:
        b1 = _branch_vertex(cx)
        b2 = _branch_vertex(nxt)
        d1 = _free_ray_direction(cx, b1)
        d2 = _free_ray_direction(nxt, b2)
        cx = glue_preserving_holonomy(cx, b1, d1, nxt, b2, d2)
    asm = Assembler.thaw(cx)
    # rebuild canonical marking names: handle i markings came from piece i
    for i in range(g):
        prefix = "" if i == 0 else "R." * i
        for nm in ("alpha0", "beta0"):
            src = prefix + nm
            if src in asm.markings:
                asm.markings[f"{nm[:-1]}{i}"] = asm.markings.pop(src)
    classes = vertex_classes(asm.freeze())
    asm.metadata["deleted_classes"] = [list(next(iter(classes)))]
    asm.metadata["kind"] = "affine"
    cx = asm.freeze()
    cx = _attach_peripheral_markings(asm, cx, rep2)
    return verify_complex(cx, rep2), log


# ---------------------------------------------------------------------------
# Half-translation builds for order-two image
# ---------------------------------------------------------------------------


def build_z2_torus(w1: complex = 1.0 + 0.3j,
                   w2: complex = 2.0 + 0.45j) -> PolygonalComplex:
    """Half-translation torus: plane slit along a segment and its negative,
    glued by z -> -z; two branch classes of angle 4 pi."""
    J = MoebiusMap.affine(-1.0, 0.0)
    asm = Assembler()
    sp = asm.edge(("seg", w1, w2))
    sm = asm.edge(("seg", w1, w2))
    tp = asm.edge(("seg", -w1, -w2))
    tm = asm.edge(("seg", -w1, -w2))
    # cross-cut between the slits to keep the face a disk
    cp = asm.edge(("seg", w1, -w1))
    cm = asm.edge(("seg", w1, -w1))
    if geo.interiors_cross(("seg", w1, w2), ("seg", -w1, -w2)) or \
            geo.interiors_cross(("seg", w1, -w1), ("seg", w1, w2)) or \
            geo.interiors_cross(("seg", w1, -w1), ("seg", -w1, -w2)):
        raise BuildError("slit configuration degenerate")
    # walk around slit 1, over the cut, around slit 2, back
    asm.face([(sp, 1), (sm, -1), (cp, 1), (tp, 1), (tm, -1), (cm, -1)],
             infinity_interior=True)
    p1 = asm.pair(sp, tm, J)
    p2 = asm.pair(tp, sm, J)
    pc = asm.pair(cp, cm, MoebiusMap.identity())
    asm.metadata["kind"] = "half-translation"
    asm.markings["alpha0"] = [(p1, 1), (p2, 1)]
    asm.markings["beta0"] = [(p1, 1), (pc, 1)]
    cx = asm.freeze()
    rep = validate(cx)
    if not rep.valid:
        raise BuildError(f"z2 torus invalid: {rep.issues[:4]}")
    return cx


def build_z2_once_punctured(g: int) -> PolygonalComplex:
    """Order-two image on the closed genus-g surface with two branch points
    of angle 4 g pi each (single-branch realization after deleting one)."""
    if g < 1:
        raise BuildError("needs genus >= 1")
    w1, w2 = 1.0 + 0.3j, 2.0 + 0.45j
    cx = build_z2_torus(w1, w2)
    for _copy in range(g - 1):
        nxt = build_z2_torus(w1, w2)
        cx = _glue_z2_copies(cx, nxt, w1, w2)
    return cx


def _slit_face_chord(asm: Assembler, fid: str, i_corner: int, j_corner: int,
                     geom) -> Tuple[str, str]:
    """Cut a face along a vertex-to-vertex arc; the face splits in two.

    `i_corner` and `j_corner` index boundary positions whose walked ends are
    the start and end of `geom`.  Returns the two new edge copies
    (one on each face, both stored with geom's own direction).
    """
    f = asm.get_face(fid)
    bnd = list(f.boundary)
    n = len(bnd)
    e_a = asm.edge(geom)
    e_b = asm.edge(geom)

    def arc_slice(frm, to):
        out = []
        t = (frm + 1) % n
        while True:
            out.append(bnd[t])
            if t == to:
                break
            t = (t + 1) % n
        return out

    face1 = arc_slice(j_corner, i_corner) + [(e_a, 1)]
    face2 = arc_slice(i_corner, j_corner) + [(e_b, -1)]
    asm.replace_face(fid, face1, infinity_interior=False)
    asm.face(face2, infinity_interior=f.infinity_interior)
    return e_a, e_b


def _find_corner(asm: Assembler, fid: str, z: complex,
                 tol: float = 1e-9) -> int:
    f = asm.get_face(fid)
    for i, (eid, sgn) in enumerate(f.boundary):
        g = asm.edges[eid].geom
        endp = None
        if g[0] in ("seg", "arc"):
            endp = complex(g[2]) if sgn == 1 else complex(g[1])
        elif g[0] == "ray" and sgn == -1:
            endp = complex(g[1])
        if endp is not None and abs(endp - z) <= tol:
            return i
    raise BuildError(f"no corner of {fid} at {z}")


def _glue_z2_copies(cx1: PolygonalComplex, cx2: PolygonalComplex,
                    w1: complex, w2: complex) -> PolygonalComplex:
    """Slit both copies along the same arc joining the two branch classes
    and cross-identify by the identity (equal developments)."""
    from .surgery import merge_into
    asm = Assembler()
    m1 = merge_into(asm, cx1, "L.")
    m2 = merge_into(asm, cx2, "R.")
    # arc from class {w1,-w1} to class {w2,-w2} avoiding all slits: a
    # circular arc from w1 to w2 bulging upward
    for bulge in (1.5j, 2.5j, 4.0j, -2.0j, 6.0j):
        mid = (w1 + w2) / 2 + bulge
        arc = ("arc", w1, w2, mid)
        if all(not geo.interiors_cross(arc, e.geom) for e in asm.edges.values()):
            break
    else:
        raise RaySearchFailed("no admissible joining arc for the z2 chain")
    sides = []
    for prefix in ("L.", "R."):
        fid = next(f.id for f in asm.faces if f.id.startswith(prefix)
                   and f.infinity_interior)
        i_c = _find_corner(asm, fid, complex(w1))
        j_c = _find_corner(asm, fid, complex(w2))
        sides.append(_slit_face_chord(asm, fid, i_c, j_c, arc))
    ident = MoebiusMap.identity()
    asm.pair(sides[0][0], sides[1][1], ident)
    asm.pair(sides[1][0], sides[0][1], ident)
    # markings: keep copy-1 names, append copy-2's single handle at the end
    n_left = sum(1 for nm in asm.markings if nm.startswith("L.alpha"))
    renames = {f"L.{s}{i}": f"{s}{i}" for s in ("alpha", "beta", "gamma")
               for i in range(n_left + 2)}
    renames["R.alpha0"] = f"alpha{n_left}"
    renames["R.beta0"] = f"beta{n_left}"
    for old, new in renames.items():
        if old in asm.markings:
            asm.markings[new] = asm.markings.pop(old)
    asm.metadata["kind"] = "half-translation"
    return asm.freeze()


# ---------------------------------------------------------------------------
# Once-punctured co-axial builds
# ---------------------------------------------------------------------------


def _assert_chain_disjoint(rep: Representation, base: complex) -> bool:
    """Quadrilateral chain pieces must meet only at the connector points."""
    g = rep.signature.genus
    p = CP1Point.of(base)
    quads = []
    for A, B in rep.handles:
        pts = [p.value, A.apply(p).value, (A * B).apply(p).value,
               B.apply(p).value]
        if any(q is None for q in pts):
            return False
        quads.append(pts)
        p = CP1Point.of(pts[2])
    segs = []
    for qd in quads:
        pp, ap, q, bp = qd
        segs.extend([("seg", pp, ap), ("seg", ap, q), ("seg", pp, bp),
                     ("seg", bp, q)])
    n = len(segs)
    for i in range(n):
        for j in range(i + 1, n):
            same_quad = (i // 4) == (j // 4)
            if geo.interiors_cross(segs[i], segs[j]):
                return False
            if not same_quad:
                si, ei = geo.endpoints(segs[i])
                sj, ej = geo.endpoints(segs[j])
                shared = sum(1 for x in (si, ei) for y in (sj, ej)
                             if abs(x - y) < 1e-12)
                if shared > 1:
                    return False
    return True


def build_coaxial_once_punctured(rep: Representation,
                                 case: str) -> Tuple[PolygonalComplex, MoveLog]:
    """Co-axial (diagonal) representation with one apparent puncture.

    case "nonunitary": dilation normal form, rightward or spiralling chain.
    case "dense":      unitary with dense rotations, small-argument chain.
    case "finite":     unitary of finite order m >= 3: degenerate V-shaped
                       quadrilaterals grafted handle by handle.
    """
    g = rep.signature.genus
    if rep.signature.punctures != 1:
        raise BuildError("once-punctured builder needs k = 1")
    if case == "nonunitary":
        u = unitary_image(rep)
        if u.mode == DISCRETE and u.order >= 1:
            rep2, log1 = align_discrete_unitary(rep, u.order)
            res = normalize_coaxial(rep2, mode=MODE_DILATION)
            # re-align after the dilation moves scrambled exponents
            rep3, log3 = align_discrete_unitary(res.rep, u.order)
            rep_n, log = rep3, log1 + res.log + log3
        else:
            res = normalize_coaxial(rep, eps=min(0.2, math.pi / (2 * g + 2)),
                                    mode=MODE_SIGNED)
            rep_n, log = res.rep, res.log
    elif case == "dense":
        res = normalize_coaxial(rep, eps=min(0.2, math.pi / (2 * g + 2)),
                                mode=MODE_SIGNED)
        rep_n, log = res.rep, res.log
    elif case == "finite":
        u = unitary_image(rep)
        if u.mode != DISCRETE:
            raise BuildError("finite case needs a discrete unitary image")
        rep_n, log = align_discrete_unitary(rep, u.order)
        return _build_coaxial_grafted(rep_n, u.order, log)
    else:
        raise ValueError(case)
    # chain construction with a base point search
    base = 1.0 + 0.0j
    for _try in range(200):
        ok = True
        for A, B in rep_n.handles:
            for m in (A, B):
                from .moebius import fixed_in_plane
                f = fixed_in_plane(m)
                if f is not None and abs(f - base) < 1e-9:
                    ok = False
        if ok and _assert_chain_disjoint(rep_n, base):
            break
        base = base * 1.07 + 0.013j * (_try + 1)
    else:
        raise SearchExhausted("no base point makes the chain embedded")
    cx = build_once_punctured_closed_chain(rep_n, base=base)
    cx.metadata["move_log"] = [m.to_json() for m in log]
    return cx, log


def _build_coaxial_grafted(rep: Representation, m: int,
                           log: MoveLog) -> Tuple[PolygonalComplex, MoveLog]:
    """Finite unitary image: V-shaped degenerate quadrilaterals, each new
    handle grafted into a side of the previous one."""
    g = rep.signature.genus
    # make both generators of each handle map to exp(2 pi i / m):
    # alignment gives (1, 0); one twist gives (1, 1)
    extra = [ElementaryMove("twist_a", i=i, n=1) for i in range(g)]
    rep_n = apply_log(rep, extra)
    log = log + extra
    base = 1.0 + 0.0j
    sub = Representation(SurfaceSignature(1, 1), [rep_n.handles[0]],
                         [MoebiusMap.identity()])
    cx = build_once_punctured_closed_chain(sub, base=base)
    p = base
    for i in range(1, g):
        A_prev, B_prev = rep_n.handles[i - 1]
        p_next = (A_prev * B_prev).apply(CP1Point.of(p)).value
        # cut along the previous alpha-loop side incident to the new base
        loop_pid = cx.markings[f"alpha{i - 1}"][0][0]
        sub_rep = Representation(SurfaceSignature(1, 1), [rep_n.handles[i]],
                                 [MoebiusMap.identity()])
        cx = graft_handle(cx, loop_pid, sub_rep, p_next)
        asm = Assembler.thaw(cx)
        h_alpha = "H.alpha0"
        h_beta = "H.beta0"
        asm.markings[f"alpha{i}"] = asm.markings.pop(h_alpha)
        asm.markings[f"beta{i}"] = asm.markings.pop(h_beta)
        cx = asm.freeze()
        p = p_next
    asm = Assembler.thaw(cx)
    classes = vertex_classes(cx)
    if len(classes) != 1:
        raise BuildError(f"grafted chain has {len(classes)} classes")
    asm.metadata["deleted_classes"] = [list(next(iter(classes)))]
    asm.metadata["kind"] = "projective"
    asm.metadata["move_log"] = [mv.to_json() for mv in log]
    cx = asm.freeze()
    cx = _attach_peripheral_markings(asm, cx, rep_n)
    cx = verify_complex(cx, rep_n)
    total = sum(cone_angles(cx).values())
    if abs(total - TWO_PI * (2 * g + 1)) > 1e-7:
        raise BuildError(f"grafted branch angle {total/math.pi:.4f} pi")
    return cx, log


# ---------------------------------------------------------------------------
# Non-co-axial once-punctured: pentagon handles on a convex commutator chain
# ---------------------------------------------------------------------------


class PentagonSearchParams:
    def __init__(self, p0: complex = 0.3 + 12.0j, t_cap: int = 60,
                 im_cap: int = 40):
        self.p0 = complex(p0)
        self.t_cap = t_cap
        self.im_cap = im_cap


def pentagon_chain(A: MoebiusMap, B: MoebiusMap, p: complex) -> List[tuple]:
    """The five directed sides of the commutator pentagon at base p:
    sigma = p -> [A,B]p, then back through B^-1, A^-1B^-1, BA^-1B^-1."""
    P = CP1Point.of(p)
    C = commutator(A, B)
    cp = C.apply(P).value
    b1 = B.inverse().apply(P).value
    ab = (A.inverse() * B.inverse()).apply(P).value
    bab = (B * A.inverse() * B.inverse()).apply(P).value
    return [("seg", p, cp), ("seg", cp, b1), ("seg", b1, ab),
            ("seg", ab, bab), ("seg", bab, p)]


def pentagon_search(A: MoebiusMap, B: MoebiusMap,
                    params: Optional[PentagonSearchParams] = None
                    ) -> Tuple[complex, List[tuple]]:
    """Find a base point whose commutator pentagon bounds an immersed disk.

    The acceptance criterion is the proof's: the three middle sides are
    embedded, and so is the two-sided closing arc.  The base point moves
    horizontally with doubling steps; on exhaustion the imaginary part is
    doubled, all within caps."""
    if commutator(A, B).is_identity():
        raise FixedBasePointError("commuting pair has no pentagon")
    params = params or PentagonSearchParams()
    p0 = params.p0
    if abs(p0.real) < 1e-9:
        p0 += 0.3
    for _im in range(params.im_cap):
        need = max(10.0, 4.0 * abs(p0 - commutator(A, B).apply(CP1Point.of(p0)).value))
        if p0.imag < need:
            p0 = complex(p0.real, need)
        t = 1.0
        for _t in range(params.t_cap):
            pt = complex((1 + t) * p0.real if p0.real > 0 else (1 - t) * p0.real,
                         p0.imag)
            try:
                chain = pentagon_chain(A, B, pt)
                mid_ok = embedded_chain(chain[1:4], closed=False)
                close_ok = embedded_chain([chain[4], chain[0]], closed=False)
                cross = not any(
                    geo.interiors_cross(chain[i], chain[j])
                    for i in (0, 4) for j in (1, 2, 3)
                    if abs(i - j) != 1 and (i, j) != (4, 3))
                if mid_ok and close_ok:
                    return pt, chain
            except (geo.BrokenChain, geo.DegenerateConfiguration):
                pass
            t *= 2.0
        p0 = complex(p0.real, p0.imag * 2.0)
    raise SearchExhausted("pentagon base point search exhausted")


def build_noncoaxial_once_punctured(rep: Representation
                                    ) -> Tuple[PolygonalComplex, MoveLog]:
    """Affine non-co-axial with one apparent puncture: one-holed tori over
    pentagon disks, glued to the convex polygon of commutator translations."""
    g = rep.signature.genus
    if g < 2:
        raise BuildError("non-coaxial route needs genus >= 2")
    rep1, log = good_handles_noncoaxial(rep)
    # reduced form per handle for the pentagon lemma
    u = unitary_image(rep1)
    if u.mode == DENSE:
        res = normalize_coaxial(rep1, eps=0.05, mode=MODE_SIGNED)
        rep2, log2 = res.rep, res.log
        rep2, log3 = _fix_commutators(rep2)
        log = log + log2 + log3
    else:
        rep2, log2 = align_discrete_unitary(rep1, max(u.order, 1))
        res_ok = all(not commutator(a, b).is_identity()
                     for a, b in rep2.handles)
        if not res_ok:
            rep2, log3 = good_handles_noncoaxial(rep2)
            log2 = log2 + log3
        log = log + log2
    order = order_commutators_convex(rep2)
    if order.degenerate:
        rep2, logd = _decollinearize(rep2)
        log = log + logd
        order = order_commutators_convex(rep2)
    # permute handles into convex order
    perm_moves: MoveLog = []
    current = list(range(g))
    for target_pos in range(g):
        src = current.index(order.permutation[target_pos])
        while src > target_pos:
            perm_moves.append(ElementaryMove("transpose", i=src - 1))
            current[src - 1], current[src] = current[src], current[src - 1]
            src -= 1
    rep3 = apply_log(rep2, perm_moves)
    log = log + perm_moves
    order = order_commutators_convex(rep3)

    # global placement: anchor the convex polygon far out and move it
    # horizontally with doubling steps until every handle's pentagon embeds
    scale = max(abs(v) for v in order.vectors) + 1.0
    re0, im0 = 30.0 * scale, 30.0 * scale
    chains = None
    for _im in range(40):
        t = 1.0
        for _t in range(60):
            anchor = complex(re0 * (1 + t), im0)
            verts = [anchor]
            for v in order.vectors[:-1]:
                verts.append(verts[-1] + v)
            try:
                cand = [pentagon_chain(*rep3.handles[i], verts[i])
                        for i in range(g)]
                ok = all(
                    embedded_chain(ch[1:4], closed=False)
                    and embedded_chain([ch[4], ch[0]], closed=False)
                    for ch in cand)
            except (geo.BrokenChain, geo.DegenerateConfiguration):
                ok = False
            if ok:
                chains = cand
                break
            t *= 2.0
        if chains:
            break
        im0 *= 2.0
    if not chains:
        raise SearchExhausted("pentagon placement search exhausted")

    asm = Assembler()
    r0_walk = []
    for i in range(g):
        side = asm.edge(("seg", verts[i], verts[(i + 1) % g]))
        r0_walk.append((side, 1))
    asm.face(r0_walk)
    for i in range(g):
        A, B = rep3.handles[i]
        ids = [asm.edge(gm) for gm in chains[i]]
        walk = [(e, 1) for e in ids]
        pts = [complex(gm[1]) for gm in chains[i]]
        if _chain_walk_ccw(pts):
            walk = _reverse_walk(walk)
        asm.face(walk, infinity_interior=True)
        pa = asm.pair(ids[3], ids[1], A)
        pb = asm.pair(ids[2], ids[4], B)
        asm.pair(ids[0], r0_walk[i][0], MoebiusMap.identity())
        asm.markings[f"alpha{i}"] = [(pa, 1)]
        asm.markings[f"beta{i}"] = [(pb, 1)]
    cx = asm.freeze()
    report = validate(cx)
    if not report.valid:
        # the sigma-side of each pentagon may need the opposite orientation
        raise BuildError(f"pentagon complex invalid: {report.issues[:6]}")
    classes = vertex_classes(cx)
    if len(classes) != 1:
        raise BuildError(f"pentagon complex has {len(classes)} classes")
    asm.metadata["kind"] = "projective"
    asm.metadata["deleted_classes"] = [list(next(iter(classes)))]
    asm.metadata["move_log"] = [mv.to_json() for mv in log]
    cx = asm.freeze()
    cx = _attach_peripheral_markings(asm, cx, rep3)
    cx = verify_complex(cx, rep3)
    total = sum(cone_angles(cx).values())
    order_b = total / TWO_PI - 1.0
    if abs(order_b - round(order_b)) > 1e-7 or round(order_b) % 2 != 0:
        raise BuildError(f"branch order {order_b:.6f} violates the parity rule")
    return cx, log


def _fix_commutators(rep: Representation) -> Tuple[Representation, MoveLog]:
    """Re-establish non-trivial handle commutators after normalization."""
    log: MoveLog = []
    for _ in range(5):
        if all(not commutator(a, b).is_identity() for a, b in rep.handles):
            return rep, log
        rep, l2 = good_handles_noncoaxial(rep)
        log = log + l2
    raise SearchExhausted("commutators keep degenerating")


def _decollinearize(rep: Representation) -> Tuple[Representation, MoveLog]:
    """Cross moves until the commutator translations are not all parallel."""
    g = rep.signature.genus
    log: MoveLog = []
    for _round in range(8):
        order = order_commutators_convex(rep)
        if not order.degenerate:
            return rep, log
        for i in range(g - 1):
            mv = ElementaryMove("cross", i=i)
            cand = apply_log(rep, [mv])
            try:
                ok = all(not commutator(a, b).is_identity()
                         for a, b in cand.handles)
                if ok and not order_commutators_convex(cand).degenerate:
                    return cand, log + [mv]
            except Exception:
                pass
        mv = ElementaryMove("cross", i=0)
        try:
            cand = apply_log(rep, [mv])
            if all(not commutator(a, b).is_identity() for a, b in cand.handles):
                rep = cand
                log = log + [mv]
                continue
        except Exception:
            pass
        raise SearchExhausted("commutator chain stays collinear")
    raise SearchExhausted("commutator chain stays collinear")
