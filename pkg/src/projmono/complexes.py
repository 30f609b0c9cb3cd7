"""Planar polygonal complexes with Moebius side pairings.

A complex is a finite set of faces in CP^1 bounded by directed edges
(segments, rays, circular arcs), together with pairings that identify the
edges in pairs by Moebius maps.  The quotient is a surface; the complex is
the certificate that a given representation is realized, and everything a
verifier needs (topology, cone angles, traced holonomy) is recomputed from
the raw data here.

Conventions.  Each edge belongs to exactly one face boundary, traversed with
the face on its left.  A pairing (a, b, M) is valid when M carries edge a
onto edge b reversing boundary orientation: M(start of a-as-walked) is the
end of b-as-walked and vice versa.  A marking is a word of signed pairing
crossings; its holonomy is the left-to-right product of M^{+-1}.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import geometry as geo
from .moebius import INF, CP1Point, MoebiusMap, psl_equal
from .scalars import TWO_PI, wrap_angle

POINT_TOL = 1e-9


@dataclass(frozen=True)
class Edge:
    id: str
    geom: tuple  # ("seg", a, b) | ("ray", base, dir) | ("arc", a, b, m)

    def start(self) -> CP1Point:
        return CP1Point.of(self.geom[1])

    def end(self) -> CP1Point:
        if self.geom[0] == "ray":
            return INF
        return CP1Point.of(self.geom[2])

    def sample(self) -> CP1Point:
        k = self.geom[0]
        if k == "seg":
            return CP1Point.of((complex(self.geom[1]) + complex(self.geom[2])) / 2.0)
        if k == "ray":
            return CP1Point.of(complex(self.geom[1]) + complex(self.geom[2]))
        return CP1Point.of(self.geom[3])


@dataclass(frozen=True)
class Face:
    id: str
    boundary: Tuple[Tuple[str, int], ...]  # (edge id, +1 forward / -1 reversed)
    infinity_interior: bool = False


@dataclass(frozen=True)
class Pairing:
    id: str
    edge_a: str
    edge_b: str
    map: MoebiusMap


@dataclass
class PolygonalComplex:
    edges: Dict[str, Edge]
    faces: List[Face]
    pairings: Dict[str, Pairing]
    markings: Dict[str, List[Tuple[str, int]]] = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)

    # ------------------------------------------------------------------
    # traversal helpers
    # ------------------------------------------------------------------

    def occurrence(self, edge_id: str) -> Tuple[Face, int]:
        for f in self.faces:
            for i, (eid, _sgn) in enumerate(f.boundary):
                if eid == edge_id:
                    return f, i
        raise KeyError(f"edge {edge_id} not on any face")

    def walked(self, edge_id: str, sgn: int) -> Tuple[CP1Point, CP1Point]:
        e = self.edges[edge_id]
        return (e.start(), e.end()) if sgn == 1 else (e.end(), e.start())

    def face_vertices(self, face: Face) -> List[CP1Point]:
        out = []
        for eid, sgn in face.boundary:
            out.append(self.walked(eid, sgn)[0])
        return out


def _pts_equal(p: CP1Point, q: CP1Point, tol: float = POINT_TOL) -> bool:
    if p.is_infinity or q.is_infinity:
        return p.is_infinity and q.is_infinity
    return abs(p.value - q.value) <= tol


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    valid: bool
    issues: List[str]

    def __bool__(self) -> bool:
        return self.valid


def _on_geom(z: CP1Point, geom, tol: float) -> bool:
    if z.is_infinity:
        return geom[0] == "ray"
    w = z.value
    if geom[0] == "seg":
        a, b = complex(geom[1]), complex(geom[2])
        u = b - a
        L = abs(u)
        t = ((w - a).real * u.real + (w - a).imag * u.imag) / (L * L)
        t = max(0.0, min(1.0, t))
        return abs(a + t * u - w) <= tol * (1.0 + L)
    if geom[0] == "ray":
        a, d = complex(geom[1]), complex(geom[2])
        d = d / abs(d)
        t = max(0.0, (w - a).real * d.real + (w - a).imag * d.imag)
        return abs(a + t * d - w) <= tol * (1.0 + abs(w))
    a, b, m = complex(geom[1]), complex(geom[2]), complex(geom[3])
    fo, r2 = geo.circumcenter(geo._fr(a), geo._fr(b), geo._fr(m))
    o = complex(float(fo[0]), float(fo[1]))
    r = math.sqrt(float(r2))
    if abs(abs(w - o) - r) > tol * (1.0 + r):
        return False
    # same side of the chord as the through-point (or near an endpoint)
    if abs(w - a) <= tol or abs(w - b) <= tol:
        return True
    return geo.orient(a, b, w) == geo.orient(a, b, m)


def validate(cx: PolygonalComplex, tol: float = POINT_TOL) -> ValidationReport:
    issues: List[str] = []
    # each edge on exactly one face
    seen: Dict[str, int] = {}
    for f in cx.faces:
        for eid, sgn in f.boundary:
            if eid not in cx.edges:
                issues.append(f"face {f.id}: unknown edge {eid}")
                continue
            seen[eid] = seen.get(eid, 0) + 1
            if sgn not in (1, -1):
                issues.append(f"face {f.id}: bad orientation flag on {eid}")
    for eid in cx.edges:
        n = seen.get(eid, 0)
        if n != 1:
            issues.append(f"edge {eid} appears on {n} face boundaries, expected 1")
    # boundary closure
    for f in cx.faces:
        n = len(f.boundary)
        if n == 0:
            issues.append(f"face {f.id} has empty boundary")
            continue
        for i in range(n):
            eid, sgn = f.boundary[i]
            nid, nsgn = f.boundary[(i + 1) % n]
            if eid not in cx.edges or nid not in cx.edges:
                continue
            _, endp = cx.walked(eid, sgn)
            startp, _ = cx.walked(nid, nsgn)
            if not _pts_equal(endp, startp, tol):
                issues.append(f"face {f.id}: boundary gap after {eid}")
        if f.infinity_interior:
            for eid, _ in f.boundary:
                if eid in cx.edges and cx.edges[eid].geom[0] == "ray":
                    issues.append(
                        f"face {f.id}: infinity-interior face has ray edge {eid}")
    # pairings: each non-free edge exactly once
    used: Dict[str, int] = {}
    for p in cx.pairings.values():
        for eid in (p.edge_a, p.edge_b):
            used[eid] = used.get(eid, 0) + 1
    for eid in cx.edges:
        if used.get(eid, 0) != 1:
            issues.append(f"edge {eid} is in {used.get(eid, 0)} pairings, expected 1")
    # pairing exactness: endpoints map crosswise, sample lands on the partner
    for p in cx.pairings.values():
        if p.edge_a not in cx.edges or p.edge_b not in cx.edges:
            issues.append(f"pairing {p.id}: unknown edges")
            continue
        ea, eb = cx.edges[p.edge_a], cx.edges[p.edge_b]
        ga, gb = ea.geom, eb.geom
        if (ga[0] == "ray") != (gb[0] == "ray"):
            issues.append(f"pairing {p.id}: pairs a ray with a finite edge")
            continue
        try:
            _, ia = cx.occurrence(p.edge_a)
            _, ib = cx.occurrence(p.edge_b)
        except KeyError:
            continue
        fa, _ = cx.occurrence(p.edge_a)
        fb, _ = cx.occurrence(p.edge_b)
        sgn_a = fa.boundary[ia][1]
        sgn_b = fb.boundary[ib][1]
        a0, a1 = cx.walked(p.edge_a, sgn_a)
        b0, b1 = cx.walked(p.edge_b, sgn_b)
        if not _pts_equal(p.map.apply(a0), b1, tol):
            issues.append(f"pairing {p.id}: start of {p.edge_a} does not map to"
                          f" end of {p.edge_b}")
        if not _pts_equal(p.map.apply(a1), b0, tol):
            issues.append(f"pairing {p.id}: end of {p.edge_a} does not map to"
                          f" start of {p.edge_b}")
        mid = p.map.apply(ea.sample())
        if mid.is_infinity:
            if gb[0] != "ray":
                issues.append(f"pairing {p.id}: midpoint maps to infinity")
        elif not _on_geom(mid, gb, max(tol, 1e-7)):
            issues.append(f"pairing {p.id}: midpoint sample misses {p.edge_b}")
    # markings reference real pairings
    for name, word in cx.markings.items():
        for pid, sgn in word:
            if pid not in cx.pairings:
                issues.append(f"marking {name}: unknown pairing {pid}")
            if sgn not in (1, -1):
                issues.append(f"marking {name}: bad sign")
    return ValidationReport(not issues, issues)


# ---------------------------------------------------------------------------
# Corner structure, vertex classes, cone angles
# ---------------------------------------------------------------------------


def _corner_nodes(cx: PolygonalComplex):
    """Union-find over (edge, end) nodes; returns (find, node list).

    Node (eid, 0) is the walked-start of the edge, (eid, 1) its walked end.
    Consecutive boundary edges share a corner; pairings glue endpoints
    crosswise.  Only finite-location nodes are returned.
    """
    parent: Dict[Tuple[str, int], Tuple[str, int]] = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    locations: Dict[Tuple[str, int], CP1Point] = {}
    for f in cx.faces:
        n = len(f.boundary)
        for i in range(n):
            eid, sgn = f.boundary[i]
            nid, nsgn = f.boundary[(i + 1) % n]
            p_end = cx.walked(eid, sgn)[1]
            locations[(eid, 1)] = p_end
            locations[(nid, 0)] = cx.walked(nid, nsgn)[0]
            union((eid, 1), (nid, 0))
            locations.setdefault((eid, 0), cx.walked(eid, sgn)[0])
    for p in cx.pairings.values():
        union((p.edge_a, 0), (p.edge_b, 1))
        union((p.edge_a, 1), (p.edge_b, 0))
    return find, locations


def vertex_classes(cx: PolygonalComplex) -> Dict[Tuple[str, int], List[Tuple[str, int]]]:
    """Finite vertex classes as {representative: [nodes]}."""
    find, locations = _corner_nodes(cx)
    classes: Dict[Tuple[str, int], List[Tuple[str, int]]] = {}
    for node, loc in locations.items():
        if loc.is_infinity:
            continue
        classes.setdefault(find(node), []).append(node)
    return classes


def class_location(cx: PolygonalComplex, nodes: Sequence[Tuple[str, int]]) -> complex:
    eid, end = nodes[0]
    f, i = cx.occurrence(eid)
    sgn = f.boundary[i][1]
    pt = cx.walked(eid, sgn)[1 if end == 1 else 0]
    return pt.value


def _walk_tangents(cx: PolygonalComplex, eid: str, sgn: int) -> Tuple[complex, complex]:
    """(tangent at walked start, tangent at walked end), in walk direction."""
    t0, t1 = geo.tangents(cx.edges[eid].geom)
    if sgn == 1:
        return t0, t1
    return -t1, -t0


def cone_angles(cx: PolygonalComplex, tol: float = POINT_TOL) -> Dict[Tuple[str, int], float]:
    """Total interior angle at each finite vertex class, in radians."""
    find, locations = _corner_nodes(cx)
    totals: Dict[Tuple[str, int], float] = {}
    for f in cx.faces:
        n = len(f.boundary)
        for i in range(n):
            eid, sgn = f.boundary[i]
            nid, nsgn = f.boundary[(i + 1) % n]
            corner_pt = cx.walked(eid, sgn)[1]
            if corner_pt.is_infinity:
                continue
            u = _walk_tangents(cx, eid, sgn)[1]      # arrival direction
            v = _walk_tangents(cx, nid, nsgn)[0]     # departure direction
            theta = wrap_angle(cmath.phase(-u) - cmath.phase(v))
            if theta <= tol:
                # straight reversal wraps fully around the corner (slit tip)
                if abs(cmath.phase(-u / v)) <= 1e-7:
                    theta = TWO_PI
                else:
                    theta = wrap_angle(theta)
            rep = find((eid, 1))
            totals[rep] = totals.get(rep, 0.0) + theta
    return totals


# ---------------------------------------------------------------------------
# Ends (ideal points) via the germ structure at infinity
# ---------------------------------------------------------------------------


@dataclass
class End:
    germs: List[str]                 # ray edge ids around the end
    link: List[Tuple[str, int]]      # pairing word around the end
    angle: float                     # total angular width at infinity
    monodromy: MoebiusMap


def _face_far_pairs(cx: PolygonalComplex, face: Face):
    """Pairs of ray edge ids joined by a far arc inside this face, with the
    ccw angular width of each arc."""
    germs = []
    for eid, sgn in face.boundary:
        e = cx.edges[eid]
        if e.geom[0] != "ray":
            continue
        d = complex(e.geom[2])
        d /= abs(d)
        base = complex(e.geom[1])
        phi = wrap_angle(cmath.phase(d))
        tau = (base * cmath.exp(-1j * cmath.phase(d))).imag
        along = (base * cmath.exp(-1j * cmath.phase(d))).real
        outward = (sgn == 1)  # rays are stored base->infinity
        germs.append({"eid": eid, "phi": phi, "tau": tau, "along": along,
                      "out": outward})
    if not germs:
        return []
    if len(germs) % 2 != 0:
        raise ValueError(f"face {face.id}: odd number of ray germs")
    # geometrically coincident germs are the two sides of a slit; crossing
    # the far circle ccw meets the inward-walked side first
    germs.sort(key=lambda g: (round(g["phi"], 12), round(g["tau"], 9),
                              round(g["along"], 9), 1 if g["out"] else 0))
    m = len(germs)
    # crossing a germ ccw toggles inside/outside; the interval just after a
    # germ is inside the face iff that germ is walked outward, the interval
    # just before iff it is walked inward.  Germs must alternate.
    for i in range(m):
        if germs[i]["out"] == germs[(i + 1) % m]["out"]:
            raise ValueError(
                f"face {face.id}: inconsistent far structure at "
                f"{germs[i]['eid']}/{germs[(i + 1) % m]['eid']}")
    pairs = []
    for i in range(m):
        g = germs[i]
        if not g["out"]:
            continue
        h = germs[(i + 1) % m]
        if i + 1 < m:
            width = h["phi"] - g["phi"]
        else:
            width = TWO_PI - (g["phi"] - h["phi"])
        pairs.append((g["eid"], h["eid"], width))
    return pairs


def ends(cx: PolygonalComplex) -> List[End]:
    """Ideal points of the quotient surface, with link words and angles.

    Every ray edge carries one germ at infinity.  Inside each face, germs are
    matched in pairs by the far arcs of the face; across the quotient, the
    pairings match them again.  The alternating cycles of these two matchings
    are exactly the ends of the surface.
    """
    arc_mate: Dict[str, Tuple[str, float]] = {}
    for f in cx.faces:
        for a, b, width in _face_far_pairs(cx, f):
            arc_mate[a] = (b, width)
            arc_mate[b] = (a, width)
    pair_mate: Dict[str, Tuple[str, str, int]] = {}
    for p in cx.pairings.values():
        if cx.edges[p.edge_a].geom[0] == "ray":
            pair_mate[p.edge_a] = (p.edge_b, p.id, +1)
            pair_mate[p.edge_b] = (p.edge_a, p.id, -1)
    for g in arc_mate:
        if g not in pair_mate:
            raise InvalidComplexError(f"unpaired ray edge {g}")
    visited = set()
    out: List[End] = []
    for start in sorted(arc_mate):
        if start in visited:
            continue
        cycle_germs: List[str] = []
        link: List[Tuple[str, int]] = []
        angle = 0.0
        hol = MoebiusMap.identity()
        cur = start
        while cur not in visited:
            visited.add(cur)
            cycle_germs.append(cur)
            mate, width = arc_mate[cur]
            angle += width
            visited.add(mate)
            cycle_germs.append(mate)
            prt, pid, sgn = pair_mate[mate]
            link.append((pid, sgn))
            m = cx.pairings[pid].map
            hol = hol * (m if sgn == 1 else m.inverse())
            cur = prt
        out.append(End(germs=cycle_germs, link=link, angle=angle, monodromy=hol))
    return out


# ---------------------------------------------------------------------------
# Topology summary
# ---------------------------------------------------------------------------


@dataclass
class TopologyReport:
    vertices: int
    edges: int
    faces: int
    n_ends: int
    euler_closed: int
    genus: int
    punctures: int


class InvalidComplexError(ValueError):
    pass


def euler_and_signature(cx: PolygonalComplex) -> TopologyReport:
    """Counts after identification; genus from the closed-up surface."""
    classes = vertex_classes(cx)
    the_ends = ends(cx)
    v_fin = len(classes)
    e = len(cx.pairings)
    f = len(cx.faces)
    chi_closed = v_fin - e + f + len(the_ends)
    if chi_closed % 2 != 0:
        raise InvalidComplexError(f"odd closed Euler characteristic {chi_closed}")
    genus = (2 - chi_closed) // 2
    punctures = len(the_ends) + len(cx.metadata.get("deleted_classes", [])) \
        + len(cx.metadata.get("marked_points", []))
    return TopologyReport(vertices=v_fin, edges=e, faces=f,
                          n_ends=len(the_ends), euler_closed=chi_closed,
                          genus=genus, punctures=punctures)


# ---------------------------------------------------------------------------
# Holonomy
# ---------------------------------------------------------------------------


class UnknownMarkingError(KeyError):
    pass


def trace_holonomy(cx: PolygonalComplex, name: str) -> MoebiusMap:
    """Ordered composition of pairing maps along the named marking."""
    if name not in cx.markings:
        raise UnknownMarkingError(name)
    out = MoebiusMap.identity()
    for pid, sgn in cx.markings[name]:
        m = cx.pairings[pid].map
        out = out * (m if sgn == 1 else m.inverse())
    return out


def holonomy_residual(cx: PolygonalComplex, name: str, target: MoebiusMap) -> float:
    """Max entrywise distance between normalized matrices, up to sign."""
    got = trace_holonomy(cx, name)
    u = got.matrix()
    v = target.matrix()
    du = cmath.sqrt(got.det())
    dv = cmath.sqrt(target.det())
    u = [x / du for x in u]
    v = [x / dv for x in v]
    r1 = max(abs(a - b) for a, b in zip(u, v))
    r2 = max(abs(a + b) for a, b in zip(u, v))
    return min(r1, r2)


# ---------------------------------------------------------------------------
# Chain embedding helper (exposed predicate)
# ---------------------------------------------------------------------------


def embedded_chain(geoms: Sequence[tuple], closed: bool = False) -> bool:
    """True iff consecutive endpoints match and interiors are disjoint."""
    n = len(geoms)
    for i in range(n - 1):
        e0 = geo.endpoints(geoms[i])[1]
        s1 = geo.endpoints(geoms[i + 1])[0]
        if e0 is None or abs(e0 - s1) > 1e-9:
            raise geo.BrokenChain(f"chain gap after edge {i}")
    return geo.chain_embedded(list(geoms), closed=closed)


def region_with_rays(chain: Sequence[tuple], ray_dirs: Sequence[complex],
                     side: str = "left"):
    """Unbounded faces over a chain of segments: one face per segment,
    bounded by the segment and rays at its endpoints.

    Returns (faces, edges) as raw geometry; the caller wires up ids.  The
    rays must not cross their own segment; SideInfeasible otherwise.
    """
    if side not in ("left", "right"):
        raise ValueError(side)
    faces = []
    for i, g in enumerate(chain):
        if g[0] != "seg":
            raise ValueError("chain faces need segment edges")
        a, b = complex(g[1]), complex(g[2])
        d0, d1 = complex(ray_dirs[i]), complex(ray_dirs[i + 1])
        r0 = ("ray", a, d0)
        r1 = ("ray", b, d1)
        for r in (r0, r1):
            if geo.interiors_cross(r, g):
                raise SideInfeasible(f"ray at segment {i} crosses the chain")
        faces.append((r0, g, r1))
    return faces


class SideInfeasible(ValueError):
    pass
