"""Cut-and-paste surgeries on polygonal complexes.

All gluings here are slit surgeries: a face is cut along a ray or an arc
whose two copies become new boundary edges, and copies are re-identified
across (or within) complexes.  Marking words are unaffected: slits only add
identity-or-prescribed pairings that existing words do not cross.
"""

from __future__ import annotations

import cmath
from typing import List, Optional, Sequence, Tuple

from . import geometry as geo
from .complexes import Edge, Face, PolygonalComplex
from .moebius import CP1Point, MoebiusMap


class SurgeryError(RuntimeError):
    pass


class IncompatibleRays(SurgeryError):
    pass


class MismatchedBasePoints(SurgeryError):
    pass


class ArcNotAdmissible(SurgeryError):
    pass


def _import_assembler():
    from .builders import Assembler
    return Assembler


def merge_into(asm, other: PolygonalComplex, prefix: str) -> dict:
    """Copy a complex into an assembler under fresh ids; returns the id map."""
    idmap = {}
    for eid, e in other.edges.items():
        nid = f"{prefix}{eid}"
        idmap[eid] = nid
        asm.edges[nid] = Edge(nid, e.geom)
    for f in other.faces:
        nfid = f"{prefix}{f.id}"
        asm.faces.append(Face(nfid, tuple((idmap[e], s) for e, s in f.boundary),
                              f.infinity_interior))
    for pid, p in other.pairings.items():
        npid = f"{prefix}{pid}"
        idmap[pid] = npid
        asm.pairings[npid] = type(p)(npid, idmap[p.edge_a], idmap[p.edge_b], p.map)
    for name, word in other.markings.items():
        asm.markings[f"{prefix}{name}"] = [(idmap[p], s) for p, s in word]
    return idmap


def corner_candidates(cx_or_asm, z: complex, tol: float = 1e-9,
                      prefix: str = "") -> List[Tuple[str, int]]:
    """All (face id, boundary index) whose walked end sits at z."""
    out = []
    for f in cx_or_asm.faces:
        if prefix and not f.id.startswith(prefix):
            continue
        for i, (eid, sgn) in enumerate(f.boundary):
            g = cx_or_asm.edges[eid].geom
            endp = None
            if g[0] == "seg" or g[0] == "arc":
                endp = complex(g[2]) if sgn == 1 else complex(g[1])
            elif g[0] == "ray" and sgn == -1:
                endp = complex(g[1])
            if endp is not None and abs(endp - z) <= tol:
                out.append((f.id, i))
    if not out:
        raise ArcNotAdmissible(f"no face boundary vertex at {z}")
    return out


def slit_face(asm, fid: str, after_index: int, geom) -> Tuple[str, str]:
    """Cut a face along a ray from the walked end of `after_index`.

    For an infinity-interior face the ideal point is interior, so the cut
    leaves one face (walked out and back).  Otherwise the ray runs into an
    end of the face, an arc between two boundary points of the disk, so the
    face splits in two: the outgoing copy bounds the part ccw-after the slit
    direction, the incoming copy the rest.  Returns (outgoing, incoming).
    """
    f = asm.get_face(fid)
    bnd = list(f.boundary)
    for eid, _s in bnd:
        if geo.interiors_cross(geom, asm.edges[eid].geom):
            raise ArcNotAdmissible("slit crosses the face boundary")
    if f.infinity_interior or geom[0] != "ray":
        e_out = asm.edge(geom)
        e_in = asm.edge(geom)
        new_bnd = bnd[:after_index + 1] + [(e_out, 1), (e_in, -1)] \
            + bnd[after_index + 1:]
        inf_int = f.infinity_interior and geom[0] != "ray"
        asm.replace_face(fid, new_bnd, infinity_interior=inf_int)
        return e_out, e_in
    # locate the far arc of the face the slit direction enters, then split
    import cmath as _cm
    from .complexes import _face_far_pairs
    from .scalars import wrap_angle as _wa
    phi = _wa(_cm.phase(complex(geom[2])))
    frozen = asm.freeze() if hasattr(asm, "freeze") else asm
    target_pair = None
    for a, b, width in _face_far_pairs(frozen, f):
        ga = frozen.edges[a].geom
        pa = _wa(_cm.phase(complex(ga[2])))
        rel = _wa(phi - pa)
        if width > 1e-12 and rel < width - 1e-12:
            target_pair = (a, b)
            break
        if width > 1e-12 and abs(rel) <= 1e-12:
            target_pair = (a, b)
            break
    if target_pair is None:
        raise ArcNotAdmissible("slit direction does not enter a face sector")
    pos = {eid: t for t, (eid, _s) in enumerate(bnd)}
    ja = pos[target_pair[0]]
    jb = pos[target_pair[1]]
    # the out-walked germ must be walk-adjacent before the in-walked one
    if (ja + 1) % len(bnd) != jb:
        raise ArcNotAdmissible("face far structure is not walk-adjacent")
    n = len(bnd)
    e_out = asm.edge(geom)
    e_in = asm.edge(geom)

    def arc_slice(frm, to):
        out = []
        t = frm
        while True:
            out.append(bnd[t])
            if t == to:
                break
            t = (t + 1) % n
        return out

    face1 = [(e_out, 1)] + arc_slice(jb, after_index)
    face2 = arc_slice((after_index + 1) % n, ja) + [(e_in, -1)]
    asm.replace_face(fid, face1, infinity_interior=False)
    asm.face(face2, infinity_interior=False)
    return e_out, e_in


def slit_at_vertex(asm, base: complex, geom, prefix: str = "") -> Tuple[str, str]:
    """Slit some face with a boundary corner at `base`; tries all corners."""
    last_err: Optional[Exception] = None
    for fid, idx in corner_candidates(asm, base, prefix=prefix):
        try:
            return slit_face(asm, fid, idx, geom)
        except ArcNotAdmissible as err:
            last_err = err
    raise last_err if last_err else ArcNotAdmissible("no corner accepted the slit")


def glue_along_rays(cx1: PolygonalComplex, base1: complex, dir1: complex,
                    cx2: PolygonalComplex, base2: complex, dir2: complex,
                    pairing_map: Optional[MoebiusMap] = None) -> PolygonalComplex:
    """Slit both complexes along rays from boundary vertices into their ends
    and identify crosswise.

    The default pairing map is the translation base1 -> base2, which requires
    parallel rays; an explicit affine map may be supplied instead (it must
    carry ray 1 onto ray 2).
    """
    Assembler = _import_assembler()
    d1 = complex(dir1) / abs(complex(dir1))
    d2 = complex(dir2) / abs(complex(dir2))
    if pairing_map is None:
        if abs(d1 - d2) > 1e-12:
            raise IncompatibleRays("translation gluing needs parallel rays")
        pairing_map = MoebiusMap.translation(complex(base2) - complex(base1))
    img_base = pairing_map.apply(CP1Point.of(base1))
    if img_base.is_infinity or abs(img_base.value - complex(base2)) > 1e-9:
        raise IncompatibleRays("pairing map does not carry base 1 to base 2")
    asm = Assembler()
    m1 = merge_into(asm, cx1, "L.")
    m2 = merge_into(asm, cx2, "R.")
    out1, in1 = slit_at_vertex(asm, complex(base1), ("ray", complex(base1), d1),
                               prefix="L.")
    out2, in2 = slit_at_vertex(asm, complex(base2), ("ray", complex(base2), d2),
                               prefix="R.")
    asm.pair(out1, in2, pairing_map)
    asm.pair(out2, in1, pairing_map.inverse())
    md1, md2 = dict(cx1.metadata), dict(cx2.metadata)
    asm.metadata = _merge_metadata(md1, md2, m1, m2)
    for name, word in cx1.markings.items():
        asm.markings[name] = [(m1[p], s) for p, s in word]
    for name, word in cx2.markings.items():
        key = name if name not in asm.markings else f"R.{name}"
        asm.markings[key] = [(m2[p], s) for p, s in word]
    return asm.freeze()


def _merge_metadata(md1: dict, md2: dict, m1: dict, m2: dict) -> dict:
    out = {}
    kinds = {md1.get("kind", "projective"), md2.get("kind", "projective")}
    order = ["translation", "half-translation", "affine", "projective"]
    out["kind"] = order[max(order.index(k) for k in kinds if k in order)]
    for key in ("marked_points",):
        out[key] = list(md1.get(key, [])) + list(md2.get(key, []))
    out["deleted_classes"] = []
    for src, mp in ((md1, m1), (md2, m2)):
        for cls in src.get("deleted_classes", []):
            eid, end = cls
            out["deleted_classes"].append([mp.get(eid, eid), end])
    return out


def glue_preserving_holonomy(cx1: PolygonalComplex, base1: complex, dir1: complex,
                             cx2: PolygonalComplex, base2: complex, dir2: complex,
                             star_dir: Optional[complex] = None) -> PolygonalComplex:
    """Gluing through two intermediate plane copies so both sub-surface
    holonomies are preserved verbatim.

    The two rays must develop from the same point p = base1 = base2; each
    complex is glued to a plane copy slit along its own ray, the planes carry
    a common auxiliary ray from p, and the planes are glued along it.  All
    four joints are identity pairings.
    """
    p = complex(base1)
    if abs(p - complex(base2)) > 1e-9:
        raise MismatchedBasePoints("rays must develop from a common point")
    d1 = complex(dir1) / abs(complex(dir1))
    d2 = complex(dir2) / abs(complex(dir2))
    if star_dir is None:
        cand = [cmath.exp(1j * (cmath.phase(d1) + t)) for t in
                (2.1, 2.7, 3.3, 1.5, 0.9)]
        star_dir = next(s for s in cand
                        if abs(s - d1) > 1e-6 and abs(s - d2) > 1e-6)
    ds = complex(star_dir) / abs(complex(star_dir))
    Assembler = _import_assembler()
    asm = Assembler()
    m1 = merge_into(asm, cx1, "L.")
    m2 = merge_into(asm, cx2, "R.")
    # two plane copies, each cut by its matching ray and the star ray into
    # two sector faces (removing two rays from a common point disconnects)
    plane_sides = []
    for d in (d1, d2):
        rj_out = asm.edge(("ray", p, d))
        rj_in = asm.edge(("ray", p, d))
        rs_out = asm.edge(("ray", p, ds))
        rs_in = asm.edge(("ray", p, ds))
        asm.face([(rj_out, 1), (rs_in, -1)])
        asm.face([(rs_out, 1), (rj_in, -1)])
        plane_sides.append({"j": (rj_out, rj_in), "s": (rs_out, rs_in)})
    out1, in1 = slit_at_vertex(asm, p, ("ray", p, d1), prefix="L.")
    out2, in2 = slit_at_vertex(asm, p, ("ray", p, d2), prefix="R.")
    ident = MoebiusMap.identity()
    asm.pair(out1, plane_sides[0]["j"][1], ident)
    asm.pair(plane_sides[0]["j"][0], in1, ident)
    asm.pair(out2, plane_sides[1]["j"][1], ident)
    asm.pair(plane_sides[1]["j"][0], in2, ident)
    asm.pair(plane_sides[0]["s"][0], plane_sides[1]["s"][1], ident)
    asm.pair(plane_sides[1]["s"][0], plane_sides[0]["s"][1], ident)
    asm.metadata = _merge_metadata(dict(cx1.metadata), dict(cx2.metadata), m1, m2)
    for name, word in cx1.markings.items():
        asm.markings[name] = [(m1[p_], s) for p_, s in word]
    for name, word in cx2.markings.items():
        key = name if name not in asm.markings else f"R.{name}"
        asm.markings[key] = [(m2[p_], s) for p_, s in word]
    return asm.freeze()


def bubble(cx: PolygonalComplex, base: complex, direction: complex) -> PolygonalComplex:
    """Insert a once-wrapping sphere copy along a ray between two punctures.

    The complex is slit along the ray from `base` (a boundary vertex, whose
    class is one puncture) toward an end; a copy of the sphere slit along the
    developed ray is sewn in.  Holonomy and signature are unchanged, the
    developing map wraps once more, and the wrap counter increments.
    """
    Assembler = _import_assembler()
    d = complex(direction) / abs(complex(direction))
    asm = Assembler()
    idmap = merge_into(asm, cx, "")
    geom = ("ray", complex(base), d)
    for e in list(asm.edges.values()):
        if geo.interiors_cross(geom, e.geom):
            raise ArcNotAdmissible("bubbling arc crosses the complex")
    out1, in1 = slit_at_vertex(asm, complex(base), geom)
    # sphere slit along the same ray: one face containing infinity's far side
    s_out = asm.edge(geom)
    s_in = asm.edge(geom)
    asm.face([(s_out, 1), (s_in, -1)])
    ident = MoebiusMap.identity()
    asm.pair(out1, s_in, ident)
    asm.pair(s_out, in1, ident)
    asm.metadata = dict(cx.metadata)
    asm.metadata["wrap_count"] = int(cx.metadata.get("wrap_count", 0)) + 1
    asm.markings = {k: list(v) for k, v in cx.markings.items()}
    return asm.freeze()


def graft_handle(cx: PolygonalComplex, loop_pairing: str,
                 handle_rep, base: complex) -> PolygonalComplex:
    """Cut the surface along the loop carried by an edge pairing and sew in a
    one-holed torus built over its developed arc.

    `loop_pairing` must be a pairing both of whose edges are segments; the
    handle is the quadrilateral complex of `handle_rep` (a commuting or
    chain-compatible pair of maps) based so that one side develops onto the
    cut arc.  The branch class absorbs the handle's vertices ("order grows by
    two"); holonomies of both sides are unchanged.
    """
    from .builders import _closed_chain_complex, Assembler, BuildError
    if loop_pairing not in cx.pairings:
        raise ArcNotAdmissible(f"unknown pairing {loop_pairing}")
    pr = cx.pairings[loop_pairing]
    asm = Assembler.thaw(cx)
    ga = asm.edges[pr.edge_a].geom
    if ga[0] != "seg":
        raise ArcNotAdmissible("grafting needs a segment loop")
    # build the handle chain over its own base; its big face (infinity
    # interior) is slit along the developed arc of the cut loop
    h_asm, h_verts = _closed_chain_complex(handle_rep, base)
    hmap = merge_into(asm, h_asm.freeze(), "H.")
    # locate the big face of the handle complex inside asm
    big_fid = None
    for f in asm.faces:
        if f.id.startswith("H.") and f.infinity_interior:
            big_fid = f.id
    if big_fid is None:
        raise ArcNotAdmissible("handle complex has no interior-infinity face")
    arc = ga
    # slit the handle face along the arc; the arc must start at a vertex of
    # the handle quadrilateral (walked endpoint on the face boundary)
    f = asm.get_face(big_fid)
    idx = None
    for i, (eid, sgn) in enumerate(f.boundary):
        g = asm.edges[eid].geom
        endp = complex(g[2]) if sgn == 1 else complex(g[1])
        if abs(endp - complex(arc[1])) <= 1e-9:
            idx = i
            break
    if idx is None:
        raise ArcNotAdmissible("cut arc does not start at a handle vertex")
    for eid, _s in f.boundary:
        if geo.interiors_cross(arc, asm.edges[eid].geom):
            raise ArcNotAdmissible("cut arc crosses the handle quadrilateral")
    s_out, s_in = slit_face(asm, big_fid, idx, arc)
    # re-route the original loop pairing through the handle slit: the first
    # leg keeps the identity, the second carries the old map, so any word
    # crossing the old pairing traces identically
    del asm.pairings[loop_pairing]
    asm.pair(pr.edge_a, s_in, MoebiusMap.identity(), pid=loop_pairing)
    new_pid = asm.pair(s_out, pr.edge_b, pr.map)
    for name, word in list(asm.markings.items()):
        out_word: List[Tuple[str, int]] = []
        for pid, sgn in word:
            if pid != loop_pairing:
                out_word.append((pid, sgn))
            elif sgn == 1:
                out_word.extend([(loop_pairing, 1), (new_pid, 1)])
            else:
                out_word.extend([(new_pid, -1), (loop_pairing, -1)])
        asm.markings[name] = out_word
    return asm.freeze()
