"""Cluster data structure: combinatorics, areas, perimeter, serialization.

A cluster of ``n`` regions is a chart point of dimension ``2v + e = 7n - 7``:
vertex coordinates plus one signed bulge area per edge.  Region boundaries are
never stored; they are derived walks obtained by rotating around vertices in
counterclockwise tangent order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import ClusterFormatError, StructuralError
from .geometry import (
    Arc,
    Point,
    arc_length,
    arc_point,
    arc_properties,
    arc_tangent,
)
from .tolerances import DEFAULT, TolerancePolicy

EXTERIOR = 0


@dataclass(frozen=True)
class EdgeRecord:
    """One oriented arc: tail -> head with region labels on either side."""

    id: int
    tail: int
    head: int
    bulge: float
    left: int
    right: int


# a half-edge is (edge_index, forward); forward=True travels tail -> head
HalfEdge = Tuple[int, bool]


@dataclass(frozen=True)
class Cluster:
    vertices: Tuple[Point, ...]
    edges: Tuple[EdgeRecord, ...]
    region_count: int  # interior regions; exterior is region 0 on top
    region_labels: Tuple[str, ...] = ()

    # -- basic counts ------------------------------------------------------

    @property
    def v(self) -> int:
        return len(self.vertices)

    @property
    def e(self) -> int:
        return len(self.edges)

    @property
    def n(self) -> int:
        return self.region_count

    def diameter(self) -> float:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return math.hypot(max(xs) - min(xs), max(ys) - min(ys)) or 1.0

    # -- chart coordinates -------------------------------------------------

    def chart(self) -> np.ndarray:
        """Coordinates (x_1, y_1, ..., x_v, y_v, b_1, ..., b_e)."""
        out = np.empty(2 * self.v + self.e)
        for i, p in enumerate(self.vertices):
            out[2 * i] = p.x
            out[2 * i + 1] = p.y
        for j, ed in enumerate(self.edges):
            out[2 * self.v + j] = ed.bulge
        return out

    def with_chart(self, x: np.ndarray) -> "Cluster":
        if x.shape != (2 * self.v + self.e,):
            raise ValueError("chart vector has wrong length")
        verts = tuple(Point(x[2 * i], x[2 * i + 1]) for i in range(self.v))
        edges = tuple(
            replace(ed, bulge=float(x[2 * self.v + j]))
            for j, ed in enumerate(self.edges)
        )
        return Cluster(verts, edges, self.region_count, self.region_labels)

    # -- derived geometry --------------------------------------------------

    def arc_of(self, edge_index: int) -> Arc:
        ed = self.edges[edge_index]
        return Arc(self.vertices[ed.tail], self.vertices[ed.head], ed.bulge)

    def half_edge_arc(self, he: HalfEdge) -> Arc:
        arc = self.arc_of(he[0])
        return arc if he[1] else arc.reversed()

    def half_edge_left(self, he: HalfEdge) -> int:
        ed = self.edges[he[0]]
        return ed.left if he[1] else ed.right

    def outgoing_tangent(self, he: HalfEdge) -> complex:
        """Unit tangent leaving the half-edge's start vertex."""
        return arc_tangent(self.half_edge_arc(he), 0.0)

    def start_vertex(self, he: HalfEdge) -> int:
        ed = self.edges[he[0]]
        return ed.tail if he[1] else ed.head

    def end_vertex(self, he: HalfEdge) -> int:
        ed = self.edges[he[0]]
        return ed.head if he[1] else ed.tail

    @cached_property
    def vertex_stars(self) -> Tuple[Tuple[HalfEdge, ...], ...]:
        """Outgoing half-edges per vertex, sorted counterclockwise."""
        stars: List[List[Tuple[float, HalfEdge]]] = [[] for _ in self.vertices]
        for j, ed in enumerate(self.edges):
            arc = self.arc_of(j)
            phi = arc.phi
            stars[ed.tail].append((_angle(arc_tangent(arc, 0.0)), (j, True)))
            stars[ed.head].append((_angle(-arc_tangent(arc, 1.0)), (j, False)))
        return tuple(
            tuple(he for _, he in sorted(star, key=lambda t: t[0]))
            for star in stars
        )

    def next_half_edge(self, he: HalfEdge) -> HalfEdge:
        """Successor in the face walk keeping the same region on the left."""
        w = self.end_vertex(he)
        incoming = arc_tangent(self.half_edge_arc(he), 1.0)
        ref = _angle(-incoming)
        best = None
        reverse = (he[0], not he[1])
        for out in self.vertex_stars[w]:
            delta = (ref - _angle(self.outgoing_tangent(out))) % (2.0 * math.pi)
            if out == reverse:
                delta = 2.0 * math.pi  # fall back to doubling back only if alone
            if best is None or delta < best[0]:
                best = (delta, out)
        if best is None:
            raise StructuralError(f"vertex {w} has no outgoing edges")
        return best[1]

    @cached_property
    def faces(self) -> Tuple[Tuple[HalfEdge, ...], ...]:
        """All closed half-edge walks, each a face of the embedding."""
        seen = set()
        walks: List[Tuple[HalfEdge, ...]] = []
        for j in range(self.e):
            for fwd in (True, False):
                start = (j, fwd)
                if start in seen:
                    continue
                walk = []
                he = start
                for _ in range(4 * self.e + 4):
                    walk.append(he)
                    seen.add(he)
                    he = self.next_half_edge(he)
                    if he == start:
                        break
                else:
                    raise StructuralError("face walk failed to close")
                walks.append(tuple(walk))
        return tuple(walks)

    def face_area(self, walk: Sequence[HalfEdge]) -> float:
        total = 0.0
        for he in walk:
            ed = self.edges[he[0]]
            if he[1]:
                a, b = self.vertices[ed.tail], self.vertices[ed.head]
                total += ed.bulge
            else:
                a, b = self.vertices[ed.head], self.vertices[ed.tail]
                total -= ed.bulge
            total += 0.5 * (a.x * b.y - a.y * b.x)
        return total

    @cached_property
    def region_walks(self) -> Dict[int, Tuple[HalfEdge, ...]]:
        """Boundary walk per region (region on the left), from the labels."""
        walks: Dict[int, Tuple[HalfEdge, ...]] = {}
        for walk in self.faces:
            labels = {self.half_edge_left(he) for he in walk}
            if len(labels) != 1:
                raise StructuralError(
                    f"face walk touches several left labels {sorted(labels)}"
                )
            r = labels.pop()
            if r in walks:
                raise StructuralError(f"region {r} has more than one boundary walk")
            walks[r] = walk
        expected = set(range(self.region_count + 1))
        if set(walks) != expected:
            raise StructuralError(
                f"regions {sorted(expected - set(walks))} have no boundary walk"
            )
        return walks


def _angle(u: complex) -> float:
    return math.atan2(u.imag, u.real)


# ---------------------------------------------------------------------------
# areas, perimeter, Jacobian


def region_areas(cluster: Cluster) -> np.ndarray:
    """Enclosed area of each interior region (index 0 = region 1)."""
    out = np.empty(cluster.n)
    for r in range(1, cluster.n + 1):
        out[r - 1] = cluster.face_area(cluster.region_walks[r])
    return out


def perimeter(cluster: Cluster) -> float:
    return sum(arc_length(cluster.arc_of(j)) for j in range(cluster.e))


def area_jacobian(
    cluster: Cluster, policy: TolerancePolicy = DEFAULT
) -> np.ndarray:
    """d(areas)/d(chart), shape (n, 2v + e).

    Vertex columns by central differences with step ``policy.fd_step(diameter)``;
    bulge columns are the exact +-1/0 incidence entries (areas are linear in
    the bulges).
    """
    h = policy.fd_step(cluster.diameter())
    x0 = cluster.chart()
    J = np.zeros((cluster.n, x0.size))
    for k in range(2 * cluster.v):
        xp = x0.copy()
        xp[k] += h
        xm = x0.copy()
        xm[k] -= h
        J[:, k] = (
            region_areas(cluster.with_chart(xp))
            - region_areas(cluster.with_chart(xm))
        ) / (2.0 * h)
    for j, ed in enumerate(cluster.edges):
        col = 2 * cluster.v + j
        if 1 <= ed.left <= cluster.n:
            J[ed.left - 1, col] = 1.0
        if 1 <= ed.right <= cluster.n:
            J[ed.right - 1, col] = -1.0
    return J


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    checks: Tuple[Tuple[str, bool, str], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed, _ in self.checks)

    def failures(self) -> List[str]:
        return [f"{name}: {detail}" for name, passed, detail in self.checks if not passed]


def validate(cluster: Cluster, check_disjoint: bool = False, samples: int = 16) -> ValidationReport:
    checks: List[Tuple[str, bool, str]] = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    n = cluster.n
    add("region_count", n >= 2, f"n = {n}")
    add(
        "euler_vertices",
        cluster.v == 2 * (n - 1),
        f"v = {cluster.v}, expected {2 * (n - 1)}",
    )
    add(
        "euler_edges",
        cluster.e == 3 * (n - 1),
        f"e = {cluster.e}, expected {3 * (n - 1)}",
    )

    scale = cluster.diameter()
    short = [
        j
        for j in range(cluster.e)
        if abs(
            cluster.vertices[cluster.edges[j].tail].z
            - cluster.vertices[cluster.edges[j].head].z
        )
        <= 1e-9 * scale
    ]
    add("edge_chords", not short, f"degenerate edges {short}")
    bad_labels = [
        j for j, ed in enumerate(cluster.edges) if ed.left == ed.right
    ]
    add("edge_labels", not bad_labels, f"left == right on edges {bad_labels}")

    degrees = [0] * cluster.v
    for ed in cluster.edges:
        degrees[ed.tail] += 1
        degrees[ed.head] += 1
    bad_deg = [i for i, d in enumerate(degrees) if d != 3]
    add("vertex_degree_3", not bad_deg, f"vertices with degree != 3: {bad_deg}")

    # connectivity of the vertex-edge graph
    if cluster.v:
        seen = {0}
        stack = [0]
        adj: Dict[int, List[int]] = {i: [] for i in range(cluster.v)}
        for ed in cluster.edges:
            adj[ed.tail].append(ed.head)
            adj[ed.head].append(ed.tail)
        while stack:
            i = stack.pop()
            for k in adj[i]:
                if k not in seen:
                    seen.add(k)
                    stack.append(k)
        add("connected", len(seen) == cluster.v, f"reached {len(seen)} of {cluster.v}")
    else:
        add("connected", False, "no vertices")

    if not bad_deg and not short:
        try:
            walks = cluster.region_walks
        except StructuralError as err:
            add("boundary_walks", False, str(err))
        else:
            add("boundary_walks", True, f"{len(walks)} walks")
            ext = cluster.face_area(walks[EXTERIOR])
            add("exterior_face", ext < 0.0, f"exterior walk area {ext:.3g}")
            areas = region_areas(cluster)
            add("positive_areas", bool((areas > 0).all()), f"areas {areas}")
    else:
        add("boundary_walks", False, "skipped: bad degrees or edges")

    if check_disjoint:
        bad = _disjointness_scan(cluster, samples)
        add("arc_disjointness", not bad, f"close pairs {bad}")

    return ValidationReport(tuple(checks))


def _disjointness_scan(cluster: Cluster, samples: int) -> List[Tuple[int, int]]:
    pts = []
    for j in range(cluster.e):
        arc = cluster.arc_of(j)
        pts.append(
            np.array(
                [
                    [*arc_point(arc, (k + 0.5) / samples)]
                    for k in range(samples)
                ]
            )
        )
    # sampled interiors of distinct edges must not come closer than the
    # sampling resolution would explain
    bad = []
    for i in range(cluster.e):
        li = arc_length(cluster.arc_of(i))
        for j in range(i + 1, cluster.e):
            lj = arc_length(cluster.arc_of(j))
            d = np.sqrt(
                ((pts[i][:, None, :] - pts[j][None, :, :]) ** 2).sum(-1)
            ).min()
            if d < 0.25 * min(li, lj) / samples:
                bad.append((i, j))
    return bad


# ---------------------------------------------------------------------------
# building a cluster from bare arcs (labels inferred from the embedding)


def build_cluster_from_arcs(
    arcs: Sequence[Arc],
    merge_tol: float = 1e-9,
    labels: Optional[Sequence[str]] = None,
) -> Cluster:
    """Assemble a cluster from arcs, merging endpoints and inferring regions.

    Faces are read off the embedding; the face of most negative signed area
    becomes the exterior (region 0) and the rest are numbered by first
    appearance along the edge list.
    """
    scale = max(
        max(abs(a.tail.z), abs(a.head.z), a.chord_length()) for a in arcs
    )
    verts: List[Point] = []

    def vid(p: Point) -> int:
        for i, q in enumerate(verts):
            if abs(p.z - q.z) <= merge_tol * scale:
                return i
        verts.append(p)
        return len(verts) - 1

    raw_edges = []
    for j, a in enumerate(arcs):
        raw_edges.append(
            EdgeRecord(j, vid(a.tail), vid(a.head), a.bulge, left=-1, right=-1)
        )
    probe = Cluster(tuple(verts), tuple(raw_edges), region_count=0)

    faces = probe.faces
    face_of: Dict[HalfEdge, int] = {}
    for fi, walk in enumerate(faces):
        for he in walk:
            face_of[he] = fi
    areas = [probe.face_area(w) for w in faces]
    exterior_face = min(range(len(faces)), key=lambda fi: areas[fi])

    region_id = {exterior_face: EXTERIOR}
    nxt = 1
    for j in range(len(raw_edges)):
        for he in ((j, True), (j, False)):
            fi = face_of[he]
            if fi not in region_id:
                region_id[fi] = nxt
                nxt += 1
    edges = tuple(
        replace(
            ed,
            left=region_id[face_of[(j, True)]],
            right=region_id[face_of[(j, False)]],
        )
        for j, ed in enumerate(raw_edges)
    )
    return Cluster(
        tuple(verts),
        edges,
        region_count=nxt - 1,
        region_labels=tuple(labels) if labels else (),
    )


# ---------------------------------------------------------------------------
# JSON codec


def to_json_dict(cluster: Cluster) -> dict:
    regions = [{"id": 0, "label": "exterior"}]
    for r in range(1, cluster.n + 1):
        label = (
            cluster.region_labels[r]
            if r < len(cluster.region_labels)
            else f"region {r}"
        )
        regions.append({"id": r, "label": label})
    return {
        "version": 1,
        "vertices": [
            {"id": i, "x": p.x, "y": p.y} for i, p in enumerate(cluster.vertices)
        ],
        "edges": [
            {
                "id": ed.id,
                "tail": ed.tail,
                "head": ed.head,
                "bulge": ed.bulge,
                "left": ed.left,
                "right": ed.right,
            }
            for ed in cluster.edges
        ],
        "regions": regions,
        "exterior": 0,
    }


def _require(obj: dict, field: str, where: str):
    if field not in obj:
        raise ClusterFormatError(f"missing field {field!r} in {where}")
    return obj[field]


def from_json_dict(doc: dict) -> Cluster:
    if not isinstance(doc, dict):
        raise ClusterFormatError("document root must be an object")
    version = _require(doc, "version", "document")
    if version != 1:
        raise ClusterFormatError(f"unsupported version {version!r}")
    vlist = _require(doc, "vertices", "document")
    elist = _require(doc, "edges", "document")
    rlist = _require(doc, "regions", "document")
    exterior = _require(doc, "exterior", "document")
    if exterior != 0:
        raise ClusterFormatError("exterior region id must be 0")

    verts: Dict[int, Point] = {}
    for k, vo in enumerate(vlist):
        i = _require(vo, "id", f"vertices[{k}]")
        verts[i] = Point(
            float(_require(vo, "x", f"vertices[{k}]")),
            float(_require(vo, "y", f"vertices[{k}]")),
        )
    if sorted(verts) != list(range(len(verts))):
        raise ClusterFormatError("vertex ids must be 0..v-1 without gaps")

    region_ids = set()
    label_map: Dict[int, str] = {}
    for k, ro in enumerate(rlist):
        i = _require(ro, "id", f"regions[{k}]")
        region_ids.add(i)
        label_map[i] = str(ro.get("label", f"region {i}"))
    n = len(region_ids) - 1
    if n < 2:
        raise ClusterFormatError("cluster must have at least 2 interior regions")
    if sorted(region_ids) != list(range(n + 1)):
        raise ClusterFormatError("region ids must be 0..n without gaps")

    edges = []
    for k, eo in enumerate(elist):
        where = f"edges[{k}]"
        ed = EdgeRecord(
            id=int(_require(eo, "id", where)),
            tail=int(_require(eo, "tail", where)),
            head=int(_require(eo, "head", where)),
            bulge=float(_require(eo, "bulge", where)),
            left=int(_require(eo, "left", where)),
            right=int(_require(eo, "right", where)),
        )
        for fld in ("tail", "head"):
            if getattr(ed, fld) not in verts:
                raise ClusterFormatError(f"{where}.{fld} is not a vertex id")
        for fld in ("left", "right"):
            if getattr(ed, fld) not in region_ids:
                raise ClusterFormatError(f"{where}.{fld} is not a region id")
        edges.append(ed)

    labels = tuple(label_map[i] for i in range(n + 1))
    return Cluster(
        tuple(verts[i] for i in range(len(verts))),
        tuple(edges),
        region_count=n,
        region_labels=labels,
    )


def _fmt_float(x: float) -> str:
    return f"{x:.17g}"


def dumps(cluster: Cluster) -> str:
    """Serialize with deterministic 17-significant-digit floats."""

    def render(obj) -> str:
        if isinstance(obj, float):
            return _fmt_float(obj)
        if isinstance(obj, bool):
            return "true" if obj else "false"
        if isinstance(obj, int):
            return str(obj)
        if isinstance(obj, str):
            return json.dumps(obj)
        if isinstance(obj, list):
            return "[" + ", ".join(render(v) for v in obj) + "]"
        if isinstance(obj, dict):
            return (
                "{"
                + ", ".join(f"{json.dumps(k)}: {render(v)}" for k, v in obj.items())
                + "}"
            )
        raise TypeError(f"cannot serialize {type(obj)}")

    return render(to_json_dict(cluster)) + "\n"


def loads(text: str) -> Cluster:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as err:
        raise ClusterFormatError(f"invalid JSON: {err}") from err
    return from_json_dict(doc)


# ---------------------------------------------------------------------------
# SVG rendering


def to_svg(
    cluster: Cluster,
    fill_pressures: Optional[np.ndarray] = None,
    stroke_width: Optional[float] = None,
) -> str:
    xs = [p.x for p in cluster.vertices]
    ys = [p.y for p in cluster.vertices]
    for j in range(cluster.e):
        arc = cluster.arc_of(j)
        for t in (0.25, 0.5, 0.75):
            q = arc_point(arc, t)
            xs.append(q.x)
            ys.append(q.y)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    mx = 0.05 * max(x1 - x0, y1 - y0, 1e-9)
    width = (x1 - x0) + 2 * mx
    height = (y1 - y0) + 2 * mx
    sw = stroke_width if stroke_width is not None else 0.005 * max(width, height)

    def arc_path(he: HalfEdge) -> str:
        arc = cluster.half_edge_arc(he)
        phi = arc.phi
        hx, hy = arc.head
        if abs(phi) < 1e-12:
            return f"L {hx:.9g} {hy:.9g}"
        props = arc_properties(arc)
        r = props.carrier.radius
        large = 1 if abs(phi) > math.pi / 2 else 0
        sweep = 1 if phi > 0 else 0
        return f"A {r:.9g} {r:.9g} 0 {large} {sweep} {hx:.9g} {hy:.9g}"

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{x0 - mx:.9g} {-(y1 + mx):.9g} {width:.9g} {height:.9g}">',
        '<g transform="scale(1,-1)">',
    ]
    if fill_pressures is not None:
        pmax = max(float(np.abs(fill_pressures).max()), 1e-12)
        for r in range(1, cluster.n + 1):
            walk = cluster.region_walks[r]
            start = cluster.vertices[cluster.start_vertex(walk[0])]
            d = [f"M {start.x:.9g} {start.y:.9g}"]
            d += [arc_path(he) for he in walk]
            d.append("Z")
            frac = 0.5 * (1.0 + float(fill_pressures[r - 1]) / pmax)
            red = int(255 * frac)
            blue = 255 - red
            parts.append(
                f'<path d="{" ".join(d)}" fill="rgb({red},120,{blue})" '
                f'fill-opacity="0.35" stroke="none"/>'
            )
    for j in range(cluster.e):
        t = cluster.vertices[cluster.edges[j].tail]
        d = f"M {t.x:.9g} {t.y:.9g} " + arc_path((j, True))
        parts.append(
            f'<path d="{d}" fill="none" stroke="black" stroke-width="{sw:.9g}"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
