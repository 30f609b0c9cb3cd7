"""Constructions realizing degenerate representations by polygonal complexes.

Every builder returns a verified PolygonalComplex: validation, traced
holonomy against the prescribed images, and the topology audit run before
the complex is released.  Faces follow the interior-on-the-left convention
of the complexes module throughout.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import geometry as geo
from .complexes import (Edge, Face, Pairing, PolygonalComplex, cone_angles,
                        ends, euler_and_signature, holonomy_residual,
                        trace_holonomy, validate, vertex_classes)
from .moebius import (DEFAULT_TOL, INF, CP1Point, MoebiusMap, commutator,
                      psl_equal)
from .moves import (ElementaryMove, MoveLog, apply_log,
                    align_discrete_unitary, ensure_nontrivial_handles,
                    good_handles_noncoaxial, isolate_dihedral_handle,
                    normalize_coaxial, order_commutators_convex,
                    MODE_DILATION, MODE_SIGNED, MODE_SMALL)
from .scalars import TWO_PI, wrap_angle
from .surface import (GateResult, Representation, SurfaceSignature,
                      TranslationCharacter, classify_representation,
                      handle_volume, theorem_a_gate, unitary_image,
                      DISCRETE, DENSE)

BUILD_TOL = 1e-9


class BuildError(RuntimeError):
    pass


class NotRealizableTranslation(BuildError):
    pass


class ExceptionalCaseError(BuildError):
    pass


class RaySearchFailed(BuildError):
    pass


class SearchExhausted(BuildError):
    pass


class FixedBasePointError(BuildError):
    pass


class ArcNotAdmissible(BuildError):
    pass


class IncompatibleRays(BuildError):
    pass


class MismatchedBasePoints(BuildError):
    pass


# ---------------------------------------------------------------------------
# Assembler
# ---------------------------------------------------------------------------


class Assembler:
    """Mutable staging area for a complex under construction."""

    def __init__(self):
        self.edges: Dict[str, Edge] = {}
        self.faces: List[Face] = []
        self.pairings: Dict[str, Pairing] = {}
        self.markings: Dict[str, List[Tuple[str, int]]] = {}
        self.metadata: dict = {}
        self._n = 0

    @staticmethod
    def thaw(cx: PolygonalComplex) -> "Assembler":
        a = Assembler()
        a.edges = dict(cx.edges)
        a.faces = list(cx.faces)
        a.pairings = dict(cx.pairings)
        a.markings = {k: list(v) for k, v in cx.markings.items()}
        a.metadata = dict(cx.metadata)
        a._n = len(a.edges) + len(a.faces) + len(a.pairings) + 1000
        return a

    def fresh(self, prefix: str) -> str:
        self._n += 1
        return f"{prefix}{self._n}"

    def edge(self, geom, eid: Optional[str] = None) -> str:
        eid = eid or self.fresh("e")
        self.edges[eid] = Edge(eid, geom)
        return eid

    def face(self, boundary: Sequence[Tuple[str, int]],
             infinity_interior: bool = False, fid: Optional[str] = None) -> str:
        fid = fid or self.fresh("f")
        self.faces.append(Face(fid, tuple(boundary), infinity_interior))
        return fid

    def pair(self, ea: str, eb: str, m: MoebiusMap,
             pid: Optional[str] = None) -> str:
        pid = pid or self.fresh("p")
        self.pairings[pid] = Pairing(pid, ea, eb, m)
        return pid

    def replace_face(self, fid: str, boundary: Sequence[Tuple[str, int]],
                     infinity_interior: Optional[bool] = None):
        for i, f in enumerate(self.faces):
            if f.id == fid:
                inf = f.infinity_interior if infinity_interior is None \
                    else infinity_interior
                self.faces[i] = Face(fid, tuple(boundary), inf)
                return
        raise KeyError(fid)

    def get_face(self, fid: str) -> Face:
        for f in self.faces:
            if f.id == fid:
                return f
        raise KeyError(fid)

    def freeze(self) -> PolygonalComplex:
        return PolygonalComplex(dict(self.edges), list(self.faces),
                                dict(self.pairings),
                                {k: list(v) for k, v in self.markings.items()},
                                dict(self.metadata))


def _direction_avoiding(forbidden: Sequence[complex], start: float = 0.05) -> complex:
    """A unit direction whose line is not parallel to any forbidden vector."""
    for k in range(720):
        theta = start + k * (math.pi / 360.0) * (1 + 1e-3)
        d = cmath.exp(1j * theta)
        ok = True
        for v in forbidden:
            if abs(v) < 1e-14:
                continue
            if abs((v / d).imag) <= 1e-9 * abs(v):
                ok = False
                break
        if ok:
            return d
    raise RaySearchFailed("no admissible direction found")


def verify_complex(cx: PolygonalComplex, rep: Representation,
                   tol: float = BUILD_TOL) -> PolygonalComplex:
    """Validation + holonomy trace audit; raises on any failure."""
    report = validate(cx)
    if not report.valid:
        raise BuildError(f"invalid complex: {report.issues[:5]}")
    g = rep.signature.genus
    for i in range(g):
        for name, target in ((f"alpha{i}", rep.handles[i][0]),
                             (f"beta{i}", rep.handles[i][1])):
            r = holonomy_residual(cx, name, target)
            if r > tol:
                raise BuildError(f"marking {name} residual {r:.2e}")
    for j, target in enumerate(rep.peripherals):
        name = f"gamma{j}"
        if name in cx.markings:
            r = holonomy_residual(cx, name, target)
            if r > tol:
                raise BuildError(f"marking {name} residual {r:.2e}")
    return cx


def _attach_peripheral_markings(asm: Assembler, cx: PolygonalComplex,
                                rep: Representation,
                                tol: float = BUILD_TOL) -> PolygonalComplex:
    """Assign per-puncture markings from end links and deleted classes.

    Each end's link word is rotated/inverted until its trace equals some
    still-unassigned peripheral exactly; apparent punctures get the empty
    word.  Greedy but verified, so a failed assignment raises.
    """
    the_ends = ends(cx)
    used = set()
    assignments: Dict[int, List[Tuple[str, int]]] = {}

    def match(j, target) -> bool:
        for e_idx, e in enumerate(the_ends):
            if e_idx in used:
                continue
            word = e.link
            for orient in (1, -1):
                w = word if orient == 1 else [(p, -s) for p, s in reversed(word)]
                for rot in range(max(1, len(w))):
                    ww = w[rot:] + w[:rot]
                    out = MoebiusMap.identity()
                    for pid, sgn in ww:
                        m = cx.pairings[pid].map
                        out = out * (m if sgn == 1 else m.inverse())
                    # residual against the target
                    diff = out * target.inverse()
                    if diff.is_identity(tol):
                        used.add(e_idx)
                        assignments[j] = ww
                        return True
        return False

    n_ends = len(the_ends)
    trivial_slots = [j for j, t in enumerate(rep.peripherals)
                     if t.is_identity(tol)]
    nontrivial = [j for j in range(len(rep.peripherals))
                  if j not in trivial_slots]
    for j in nontrivial:
        if not match(j, rep.peripherals[j]):
            raise BuildError(f"could not match puncture {j} to an end")
    # remaining ends (trivial monodromy) and deleted classes fill trivial slots
    remaining_ends = [i for i in range(n_ends) if i not in used]
    for j in trivial_slots:
        if remaining_ends and match(j, rep.peripherals[j]):
            continue
        assignments[j] = []
    for j, word in assignments.items():
        asm.markings[f"gamma{j}"] = list(word)
    return asm.freeze()


# ---------------------------------------------------------------------------
# Quadrilateral chains (translation and affine commuting pairs)
# ---------------------------------------------------------------------------


@dataclass
class QuadChain:
    """Edges of the quadrilateral chain p_i -> A_i p_i -> A_i B_i p_i etc."""
    e1: List[str]
    e2: List[str]
    e3: List[str]
    e4: List[str]
    vertices: List[complex]      # p_1 ... p_{g+1}


def chain_quadrilateral(a: MoebiusMap, b: MoebiusMap,
                        p: complex) -> List[Tuple[str, complex, complex]]:
    """Directed 4-chain for one commuting pair: returns labelled segments
    e1 = A(p)->AB(p), e2 = p->A(p), e3 = p->B(p), e4 = B(p)->AB(p)."""
    P = CP1Point.of(p)
    for m in (a, b):
        if not m.apply(P).is_infinity and abs(m.apply(P).value - p) < 1e-12:
            raise FixedBasePointError(f"base point {p} is fixed")
    ap = a.apply(P).value
    bp = b.apply(P).value
    abp = (a * b).apply(P).value
    bap = (b * a).apply(P).value
    if abs(abp - bap) > 1e-9 * (1 + abs(abp)):
        raise BuildError("quadrilateral chain needs a commuting pair")
    return [("e1", ap, abp), ("e2", p, ap), ("e3", p, bp), ("e4", bp, abp)]


def _walk_stretches(loop_cw: bool,
                    ids: Tuple[str, str, str, str]) -> Tuple[list, list]:
    """(outbound, inbound) boundary stretches for one quad of the chain.

    The exterior of the quad must lie on the left of the walk, so clockwise
    quadrilateral loops are walked forward and counter-clockwise ones
    reversed.  For translation handles this is exactly the volume dichotomy
    (positive volume <=> clockwise loop)."""
    e1, e2, e3, e4 = ids
    if loop_cw:
        out = [(e3, 1), (e4, 1)]
        inn = [(e1, -1), (e2, -1)]
    else:
        out = [(e2, 1), (e1, 1)]
        inn = [(e4, -1), (e3, -1)]
    return out, inn


def _loop_is_cw(p: complex, ap: complex, abp: complex, bp: complex) -> bool:
    """Orientation of the quadrilateral loop abp -> ap -> p -> bp (shoelace)."""
    pts = [abp, ap, p, bp]
    s = 0.0
    for i in range(4):
        x0, y0 = pts[i].real, pts[i].imag
        x1, y1 = pts[(i + 1) % 4].real, pts[(i + 1) % 4].imag
        s += x0 * y1 - x1 * y0
    return s < 0.0


def _succ(z: complex) -> bool:
    """Positivity in the lexicographic (Re, Im) sense used to orient quads."""
    return z.real > 1e-13 or (abs(z.real) <= 1e-13 and z.imag > 0)


def _orient_values(a: complex, b: complex) -> int:
    """Number of swap moves (0..3) making both handle values succeed 0."""
    vals = [(a, b), (b, -a), (-a, -b), (-b, a)]
    for s, (x, y) in enumerate(vals):
        if _succ(x) and _succ(y):
            return s
    raise BuildError("cannot orient handle values")


def _closed_chain_complex(rep: Representation,
                          base: complex = 0.0) -> Tuple[Assembler, List[complex]]:
    """Core chain shared by the closed (once-punctured) builders.

    One face with infinity in its interior, bounded by the chain of
    quadrilaterals of all handles; pairings A_i: e3->e1 and B_i: e2->e4.
    Handle values must commute pairwise within each handle.
    """
    g = rep.signature.genus
    asm = Assembler()
    boundary_out: List[Tuple[str, int]] = []
    boundary_in: List[Tuple[str, int]] = []
    p = complex(base)
    verts = [p]
    for i in range(g):
        A, B = rep.handles[i]
        segs = chain_quadrilateral(A, B, p)
        ids = {}
        for label, s, t in segs:
            ids[label] = asm.edge(("seg", s, t))
        q = (A * B).apply(CP1Point.of(p)).value
        ap = A.apply(CP1Point.of(p)).value
        bp = B.apply(CP1Point.of(p)).value
        out, inn = _walk_stretches(_loop_is_cw(p, ap, q, bp),
                                   (ids["e1"], ids["e2"], ids["e3"], ids["e4"]))
        boundary_out.extend(out)
        boundary_in = inn + boundary_in
        pid_a = asm.pair(ids["e3"], ids["e1"], A)
        asm.markings[f"alpha{i}"] = [(pid_a, 1)]
        pid_b = asm.pair(ids["e2"], ids["e4"], B)
        asm.markings[f"beta{i}"] = [(pid_b, 1)]
        p = q
        verts.append(p)
    asm.face(boundary_out + boundary_in, infinity_interior=True)
    return asm, verts


def build_once_punctured_closed_chain(rep: Representation,
                                      base: complex = 0.0,
                                      kind: str = "projective") -> PolygonalComplex:
    """Chain complex on the closed surface: one branch class, infinity is an
    interior regular point of the single face.  Deleting the branch class
    gives the once-punctured realization."""
    g = rep.signature.genus
    if g < 1:
        raise BuildError("chain needs positive genus")
    asm, verts = _closed_chain_complex(rep, base)
    cx = asm.freeze()
    classes = vertex_classes(cx)
    if len(classes) != 1:
        raise BuildError(f"expected one vertex class, got {len(classes)}")
    rep_class = next(iter(classes))
    asm.metadata["kind"] = kind
    asm.metadata["deleted_classes"] = [list(rep_class)]
    asm.metadata["filled_infinity"] = True
    cx = asm.freeze()
    cx = _attach_peripheral_markings(asm, cx, rep)
    return verify_complex(cx, rep)


def build_once_punctured_translation(char: TranslationCharacter) -> Tuple[PolygonalComplex, MoveLog]:
    """Non-trivial translation character on one puncture: the genus chain
    with infinity filled as a regular point, branch angle 2 pi (2g+1)."""
    sig = char.signature
    g = sig.genus
    if sig.punctures != 1:
        raise BuildError("expected a single puncture")
    rep0 = char.to_representation()
    if rep0.is_trivial():
        raise ExceptionalCaseError("trivial character on one puncture")
    rep, log = ensure_nontrivial_handles(rep0)
    extra: MoveLog = []
    for i in range(g):
        a = rep.handles[i][0].affine_parts()[1]
        b = rep.handles[i][1].affine_parts()[1]
        for _ in range(_orient_values(a, b)):
            extra.append(ElementaryMove("swap", i=i))
    rep = apply_log(rep, extra)
    log = log + extra
    cx = build_once_punctured_closed_chain(rep)
    cx.metadata["move_log"] = [m.to_json() for m in log]
    ca = cone_angles(cx)
    total = sum(ca.values())
    if abs(total - TWO_PI * (2 * g + 1)) > 1e-7:
        raise BuildError(f"chain branch angle {total/math.pi:.4f} pi")
    return cx, log


def _slit_face_along_ray(asm: Assembler, fid: str, at_edge_end: str,
                         vertex: complex, direction: complex) -> Tuple[str, str]:
    """Cut an infinity-interior face along a ray from a boundary vertex.

    The vertex must be the walked-end of `at_edge_end` on the face.  Returns
    the two new ray edge ids (first walked outward just after `at_edge_end`,
    second walked inward just before the next boundary edge).
    """
    f = asm.get_face(fid)
    if not f.infinity_interior:
        raise ArcNotAdmissible("slit target must have infinity inside")
    bnd = list(f.boundary)
    idx = None
    for i, (eid, sgn) in enumerate(bnd):
        if eid == at_edge_end:
            idx = i
            break
    if idx is None:
        raise KeyError(at_edge_end)
    r_out = asm.edge(("ray", vertex, direction))
    r_in = asm.edge(("ray", vertex, direction))
    new_bnd = bnd[:idx + 1] + [(r_out, 1), (r_in, -1)] + bnd[idx + 1:]
    asm.replace_face(fid, new_bnd, infinity_interior=False)
    return r_out, r_in


def build_translation_chain(char: TranslationCharacter) -> PolygonalComplex:
    """Genus chain for two punctures: pole of order two at infinity, one
    branch class of angle 2 pi (2g+1), both punctures with trivial holonomy."""
    sig = char.signature
    g, k = sig.genus, sig.punctures
    if g < 1 or k != 2:
        raise NotRealizableTranslation("chain form needs g >= 1, k = 2")
    if any(abs(v) > 1e-12 for v in char.peripheral_values):
        raise NotRealizableTranslation("chain punctures must both be trivial")
    rep0 = char.to_representation()
    rep, log = ensure_nontrivial_handles(rep0)
    # orient each handle's values into the right half plane
    extra: MoveLog = []
    handles = list(rep.handles)
    for i in range(g):
        a = handles[i][0].affine_parts()[1]
        b = handles[i][1].affine_parts()[1]
        s = _orient_values(a, b)
        for _ in range(s):
            extra.append(ElementaryMove("swap", i=i))
    rep = apply_log(rep, extra)
    log = log + extra
    asm, verts = _closed_chain_complex(rep)
    # open the planar end: slit from the last chain vertex out to infinity
    fid = asm.faces[-1].id
    f = asm.get_face(fid)
    tip = verts[-1]
    # the walked edge ending at the tip is the last outbound stretch edge
    target_edge = None
    for eid, sgn in f.boundary:
        ge = asm.edges[eid].geom
        endp = ge[2] if sgn == 1 else ge[1]
        if abs(complex(endp) - tip) < 1e-12:
            target_edge = (eid, sgn)
    if target_edge is None:
        raise BuildError("no boundary edge reaches the chain tip")
    forbidden = []
    for eid in asm.edges:
        gseg = asm.edges[eid].geom
        forbidden.append(complex(gseg[2]) - complex(gseg[1]))
    d = _direction_avoiding(forbidden)
    # the slit must avoid every chain edge
    for _try in range(720):
        ray_geom = ("ray", tip, d)
        if all(not geo.interiors_cross(ray_geom, asm.edges[e].geom)
               for e in asm.edges):
            break
        d = _direction_avoiding(forbidden, start=cmath.phase(d) + 0.013)
    else:
        raise RaySearchFailed("slit direction search failed")
    r_out, r_in = _slit_face_along_ray(asm, fid, target_edge[0], tip, d)
    asm.pair(r_out, r_in, MoebiusMap.identity())
    cx = asm.freeze()
    classes = vertex_classes(cx)
    if len(classes) != 1:
        raise BuildError(f"expected one vertex class, got {len(classes)}")
    asm.metadata["kind"] = "translation"
    asm.metadata["deleted_classes"] = [list(next(iter(classes)))]
    asm.metadata["pole_orders"] = {"end0": 2}
    asm.metadata["move_log"] = [m.to_json() for m in log]
    cx = asm.freeze()
    cx = _attach_peripheral_markings(asm, cx, rep)
    cx = verify_complex(cx, rep)
    # audit the stated flat data
    the_ends = ends(cx)
    if len(the_ends) != 1 or abs(the_ends[0].angle - TWO_PI) > 1e-9:
        raise BuildError("chain end is not a planar (order two) pole")
    ca = cone_angles(cx)
    total = sum(ca.values())
    if abs(total - TWO_PI * (2 * g + 1)) > 1e-7:
        raise BuildError(f"branch angle {total/math.pi:.4f} pi, expected "
                         f"{2*(2*g+1)} pi")
    return cx


def build_translation_sphere(values: Sequence[complex]) -> PolygonalComplex:
    """Chain of slit strips realizing nonzero translations around k punctures
    plus one trivial puncture; single branch class of angle 2 pi k."""
    vals = [complex(v) for v in values]
    k = len(vals)
    if k < 2:
        raise NotRealizableTranslation("sphere chain needs >= 2 values")
    if abs(sum(vals)) > 1e-9:
        raise NotRealizableTranslation("translation values must sum to zero")
    if any(abs(v) < 1e-12 for v in vals):
        raise NotRealizableTranslation("sphere chain values must be nonzero")
    d = _direction_avoiding(vals)
    asm = Assembler()
    p = 0.0 + 0.0j
    ps = []
    for v in vals:
        ps.append(p)
        p += v
    strip_edges = []
    for i, v in enumerate(vals):
        tau = (v / d).imag
        mirror = tau < 0
        c = ps[i] - 0.3 * v
        l0p = asm.edge(("ray", c, d))
        l0m = asm.edge(("ray", c, -d))
        l1p = asm.edge(("ray", c + v, d))
        l1m = asm.edge(("ray", c + v, -d))
        r_lo = asm.edge(("ray", ps[i], d))   # side nearer the c-line
        r_hi = asm.edge(("ray", ps[i], d))   # side nearer the c+v-line
        if not mirror:
            boundary = [(l0m, -1), (l0p, 1), (r_lo, -1), (r_hi, 1),
                        (l1p, -1), (l1m, 1)]
        else:
            boundary = [(l0p, -1), (l0m, 1), (l1m, -1), (l1p, 1),
                        (r_hi, -1), (r_lo, 1)]
        asm.face(boundary)
        pid_line_p = asm.pair(l0p, l1p, MoebiusMap.translation(v))
        pid_line_m = asm.pair(l0m, l1m, MoebiusMap.translation(v))
        strip_edges.append({"lo": r_lo, "hi": r_hi, "mirror": mirror,
                            "line_pairs": (pid_line_p, pid_line_m)})
    # cyclic slit pairings: the outward-walked side of slit i matches the
    # inward-walked side of slit i+1 under z + v_i
    slit_pairs = []
    for i in range(k):
        j = (i + 1) % k
        a_out = strip_edges[i]["hi"] if not strip_edges[i]["mirror"] \
            else strip_edges[i]["lo"]
        b_in = strip_edges[j]["lo"] if not strip_edges[j]["mirror"] \
            else strip_edges[j]["hi"]
        slit_pairs.append(asm.pair(a_out, b_in, MoebiusMap.translation(vals[i])))
    asm.metadata["kind"] = "translation"
    cx = asm.freeze()
    return cx


# ---------------------------------------------------------------------------
# Trivial representation: branched cover certificate and explicit complex
# ---------------------------------------------------------------------------


@dataclass
class CoverCertificate:
    degree: int
    sigma_segment: List[int]   # permutation crossing the [0,1]-slit
    sigma_ray: List[int]       # permutation crossing the [1, oo)-slit
    branch_cycles: Dict[str, List[int]]
    genus: int

    def verify(self) -> bool:
        d = self.degree
        s = self.sigma_segment
        r = self.sigma_ray
        if sorted(s) != list(range(d)) or sorted(r) != list(range(d)):
            return False
        around0 = s
        around1 = [r[_inv(s)[i]] for i in range(d)]
        aroundoo = _inv(r)
        # product of the three branch cycles is trivial
        comp = [around0[around1[aroundoo[i]]] for i in range(d)]
        hmm = all(_cycle_len(around0, i) == d for i in range(1))
        full = (_n_cycles(around0) == 1 and _n_cycles(around1) == 1
                and _n_cycles(aroundoo) == 1)
        chi = 2 * d - 3 * (d - 1)
        return full and chi == 2 - 2 * self.genus


def _inv(p: List[int]) -> List[int]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return out


def _n_cycles(p: List[int]) -> int:
    seen = [False] * len(p)
    n = 0
    for i in range(len(p)):
        if not seen[i]:
            n += 1
            j = i
            while not seen[j]:
                seen[j] = True
                j = p[j]
    return n


def _cycle_len(p: List[int], i: int) -> int:
    j = p[i]
    n = 1
    while j != i:
        j = p[j]
        n += 1
    return n


def trivial_cover_certificate(g: int) -> CoverCertificate:
    """Cyclic degree-(2g+1) cover of the sphere fully branched over three
    points, realized by slit permutations sigma and sigma^2."""
    d = 2 * g + 1
    sigma = [(i + 1) % d for i in range(d)]
    sigma2 = [(i + 2) % d for i in range(d)]
    around0 = sigma
    aroundoo = _inv(sigma2)
    around1 = [sigma2[_inv(sigma)[i]] for i in range(d)]
    cert = CoverCertificate(
        degree=d, sigma_segment=sigma, sigma_ray=sigma2,
        branch_cycles={"over0": around0, "over1": around1, "overoo": aroundoo},
        genus=g)
    if not cert.verify():
        raise BuildError("cover certificate failed self-check")
    return cert


def build_trivial_cover(sig: SurfaceSignature, explicit: bool = False):
    """Trivial monodromy: plane with punctures (g = 0) or a cyclic branched
    cover certificate (g > 0), optionally with the explicit sheeted complex.

    Returns (certificate or None, complex or None)."""
    g, k = sig.genus, sig.punctures
    sig.check_hyperbolic()
    if g > 0 and k <= 2:
        raise ExceptionalCaseError("trivial representation needs k >= 3 here")
    if g == 0:
        # the plane, slit along a segment and re-glued: one regular vertex
        # class, infinity interior; the punctures are marked regular points
        asm = Assembler()
        e_up = asm.edge(("seg", 0.0, 1.0))
        e_dn = asm.edge(("seg", 0.0, 1.0))
        asm.face([(e_up, 1), (e_dn, -1)], infinity_interior=True)
        asm.pair(e_up, e_dn, MoebiusMap.identity())
        asm.metadata["kind"] = "translation"
        asm.metadata["marked_points"] = [[0.25 + 0.1 * j, 0.35] for j in range(k)]
        for j in range(k):
            asm.markings[f"gamma{j}"] = []
        rep = Representation(sig, [], [MoebiusMap.identity()] * k)
        return None, verify_complex(asm.freeze(), rep)
    cert = trivial_cover_certificate(g)
    cx = _explicit_trivial_cover_complex(sig, cert) if explicit else None
    return cert, cx


def _explicit_trivial_cover_complex(sig: SurfaceSignature,
                                    cert: CoverCertificate) -> PolygonalComplex:
    """Sheets of the cover as plane faces slit along [0,1] and [1, oo)."""
    g, k = sig.genus, sig.punctures
    d = cert.degree
    asm = Assembler()
    ray_dir = cmath.exp(0.4j)
    sheets = []
    for s in range(d):
        seg_up = asm.edge(("seg", 0.0, 1.0))
        seg_dn = asm.edge(("seg", 0.0, 1.0))
        ray_up = asm.edge(("ray", 1.0, ray_dir))
        ray_dn = asm.edge(("ray", 1.0, ray_dir))
        # walk: under the segment, around 0, over it, around 1 under the ray,
        # then the far side of the ray, closing around infinity... the face
        # here is the doubly slit plane; infinity lies at the ray end
        boundary = [(seg_dn, -1), (seg_up, 1), (ray_up, 1), (ray_dn, -1)]
        asm.face(boundary)
        sheets.append({"seg_up": seg_up, "seg_dn": seg_dn,
                       "ray_up": ray_up, "ray_dn": ray_dn})
    for s in range(d):
        t = cert.sigma_segment[s]
        asm.pair(sheets[s]["seg_up"], sheets[t]["seg_dn"], MoebiusMap.identity())
        t2 = cert.sigma_ray[s]
        asm.pair(sheets[s]["ray_up"], sheets[t2]["ray_dn"], MoebiusMap.identity())
    asm.metadata["kind"] = "translation"
    cx = asm.freeze()
    return cx
