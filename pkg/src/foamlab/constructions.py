"""Preset clusters: closed forms where elementary, ansatz-plus-solve elsewhere.

Constructor correctness is certified by the equilibrium checker rather than
by rederiving formulas: every non-quasi preset must classify as Equilibrium.
"""

from __future__ import annotations

import cmath
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .cluster import (
    EXTERIOR,
    Cluster,
    EdgeRecord,
    build_cluster_from_arcs,
    region_areas,
)
from .errors import GeometryDomainError, NonConvergence, TopologyBreakdown
from .equilibrium import _check_topology, lm_minimize, residuals, solve
from .geometry import (
    AT_INFINITY,
    Arc,
    MobiusMap,
    Point,
    arc_carrier,
    arc_point,
    arc_through,
    carrier_intersections,
    mobius_apply_arc,
    mobius_apply_point,
    second_intersection,
    segment_area,
)


def mobius_apply_cluster(m: MobiusMap, cluster: Cluster) -> Cluster:
    """Image cluster under a Mobius map whose pole avoids every arc."""
    arcs = [mobius_apply_arc(m, cluster.arc_of(j)) for j in range(cluster.e)]
    verts = tuple(mobius_apply_point(m, p) for p in cluster.vertices)
    edges = tuple(
        ed.__class__(
            id=ed.id,
            tail=ed.tail,
            head=ed.head,
            bulge=arcs[j].bulge,
            left=ed.left,
            right=ed.right,
        )
        for j, ed in enumerate(cluster.edges)
    )
    return Cluster(verts, edges, cluster.region_count, cluster.region_labels)


# ---------------------------------------------------------------------------
# elementary closed forms


def double_bubble(r1: float = 1.0, r2: float = 1.0) -> Cluster:
    """Standard double bubble with outer radii r1 and r2.

    Centers sit at distance d with d^2 = r1^2 + r2^2 - r1 r2 (law of
    cosines for the 120-degree vertex triangle); the middle interface has
    curvature |1/r1 - 1/r2| and is straight for equal radii.
    """
    if not (r1 > 0 and r2 > 0):
        raise GeometryDomainError("radii must be positive")
    d = math.sqrt(r1 * r1 + r2 * r2 - r1 * r2)
    x = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    y = math.sqrt(r1 * r1 - x * x)
    v_top = Point(x, y)
    v_bot = Point(x, -y)
    outer1 = arc_through(v_top, Point(-r1, 0.0), v_bot)
    outer2 = arc_through(v_bot, Point(d + r2, 0.0), v_top)
    if abs(r1 - r2) < 1e-14 * (r1 + r2):
        middle = Arc(v_bot, v_top, 0.0)
    else:
        # swap so the interface always bows toward the larger bubble
        big_first = r1 >= r2
        ra, rb = (r1, r2) if big_first else (r2, r1)
        r0 = ra * rb / (ra - rb)
        xm = x + math.copysign(math.sqrt(max(r0 * r0 - y * y, 0.0)), r1 - r2)
        apex = Point(xm - math.copysign(r0, r1 - r2), 0.0)
        middle = arc_through(v_bot, apex, v_top)
    return build_cluster_from_arcs(
        [outer1, outer2, middle], labels=("exterior", "bubble 1", "bubble 2")
    )


def arc_triangle(
    scale: float = 1.0, center: Point = Point(0.0, 0.0), rotation: float = 0.0
) -> Tuple[Arc, Arc, Arc]:
    """Equilateral three-arc loop with 120-degree interior angles.

    Vertices on a circle of radius ``scale`` about ``center``; each edge
    bulges outward with half-angle pi/6.  This is the harness object used by
    decoration surgery, not a full cluster.
    """
    if not scale > 0:
        raise GeometryDomainError("scale must be positive")
    verts = [
        Point.of(center.z + scale * cmath.exp(1j * (rotation + math.pi / 2 + 2 * math.pi * k / 3)))
        for k in range(3)
    ]
    c = scale * math.sqrt(3.0)
    bulge = segment_area(math.pi / 6, c)
    return tuple(
        Arc(verts[k], verts[(k + 1) % 3], bulge) for k in range(3)
    )


def triple_bubble(
    areas: Optional[Sequence[float]] = None,
    interface_length: float = 1.0,
    mobius: Optional[MobiusMap] = None,
) -> Cluster:
    """Standard triple bubble.

    The symmetric instance is closed form: three straight interfaces of
    length ``interface_length`` radiating from the center at 120 degrees and
    three outer semicircular arcs (half-angle pi/2).  General area vectors
    are reached by the area-constrained solver; a Mobius map may be applied
    afterwards (its pole must avoid the cluster).
    """
    ell = interface_length
    if not ell > 0:
        raise GeometryDomainError("interface_length must be positive")
    center = Point(0.0, 0.0)
    angles = [math.pi / 6, 5 * math.pi / 6, 3 * math.pi / 2]
    outer = [Point.of(ell * cmath.exp(1j * a)) for a in angles]
    arcs: List[Arc] = []
    for k in range(3):
        arcs.append(Arc(center, outer[k], 0.0))
    chord = ell * math.sqrt(3.0)
    bulge = segment_area(math.pi / 2, chord)
    for k in range(3):
        arcs.append(Arc(outer[k], outer[(k + 1) % 3], bulge))
    cluster = build_cluster_from_arcs(
        arcs, labels=("exterior", "bubble 1", "bubble 2", "bubble 3")
    )
    if areas is not None:
        target = np.asarray(areas, dtype=float)
        base = region_areas(cluster)
        # rescale the symmetric seed to the right total before solving
        s = math.sqrt(target.sum() / base.sum())
        cluster = cluster.with_chart(_scaled_chart(cluster, s))
        cluster = solve(cluster, target)
    if mobius is not None:
        cluster = mobius_apply_cluster(mobius, cluster)
    return cluster


def _scaled_chart(cluster: Cluster, s: float) -> np.ndarray:
    x = cluster.chart()
    x[: 2 * cluster.v] *= s
    x[2 * cluster.v :] *= s * s
    return x


# ---------------------------------------------------------------------------
# decoration surgery


def _mobius_tangent(m: MobiusMap, z: complex, t: complex) -> complex:
    """Unit image direction of tangent ``t`` at ``z`` under ``m``."""
    mn = m.normalized()
    deriv = 1.0 / (mn.c * z + mn.d) ** 2
    out = deriv * t
    return out / abs(out)


def _apply_or_id(m: Optional[MobiusMap], z: complex) -> complex:
    return z if m is None else m.apply(z)


def decorate(cluster: Cluster, vertex: int, size: float) -> Cluster:
    """Insert a three-sided bubble at a triple junction.

    The junction's three carriers meet at a second point, which is sent to
    infinity; the incident edges become straight rays at 120 degrees, the
    equilateral arc triangle of circumradius ``size`` (measured in that
    normalized picture, making the parameter Mobius-covariant) is inserted,
    and everything is mapped back.  Edges and vertices away from the
    junction are untouched; the new region gets id n + 1.
    """
    if not 0 <= vertex < cluster.v:
        raise GeometryDomainError(f"no vertex {vertex}")
    if not size > 0:
        raise GeometryDomainError("size must be positive")
    star = cluster.vertex_stars[vertex]
    carriers = [arc_carrier(cluster.half_edge_arc(he)) for he in star]
    p = cluster.vertices[vertex]
    q = second_intersection(carriers, p, tol=1e-6)

    if q is AT_INFINITY:
        m = minv = None
        w = p.z
        dirs = [cluster.outgoing_tangent(he) for he in star]
    else:
        m = MobiusMap.inversion_about(q.z).normalized()
        minv = m.inverse()
        w = m.apply(p.z)
        dirs = [
            _mobius_tangent(m, p.z, cluster.outgoing_tangent(he)) for he in star
        ]

    scale = cluster.diameter()
    tri = [w + size * d for d in dirs]

    # truncate the three incident edges at the triangle vertices
    new_incident: dict = {}
    for k, he in enumerate(star):
        far_vid = cluster.end_vertex(he)
        far = cluster.vertices[far_vid]
        if q is not AT_INFINITY and abs(far.z - q.z) < 1e-9 * scale:
            sample = tri[k] + max(size, 1.0) * dirs[k]
        else:
            f = _apply_or_id(m, far.z)
            if abs(tri[k] - w) >= abs(f - w):
                raise TopologyBreakdown(
                    "decoration size reaches past an adjacent vertex"
                )
            sample = 0.5 * (tri[k] + f)
        new_arc = arc_through(
            Point.of(_apply_or_id(minv, tri[k])),
            Point.of(_apply_or_id(minv, sample)),
            far,
        )
        new_incident[he] = new_arc

    # the inserted bubble: arcs between consecutive rays, bulging away from w
    bubble_arcs = []
    for k in range(3):
        a, b = tri[k], tri[(k + 1) % 3]
        chord = abs(b - a)
        outward = 1.0 if ((b - a).conjugate() * (w - a)).imag > 0 else -1.0
        straight = Arc(
            Point.of(a), Point.of(b), outward * segment_area(math.pi / 6, chord)
        )
        bubble_arcs.append(
            straight if minv is None else mobius_apply_arc(minv, straight)
        )

    # assemble: old vertices minus the junction, plus the three new ones
    old_ids = [i for i in range(cluster.v) if i != vertex]
    remap = {old: new for new, old in enumerate(old_ids)}
    verts = [cluster.vertices[i] for i in old_ids]
    tri_ids = []
    for k in range(3):
        verts.append(bubble_arcs[k].tail)
        tri_ids.append(len(verts) - 1)

    new_region = cluster.n + 1
    edges = []
    star_of_edge = {he[0]: k for k, he in enumerate(star)}
    for j, ed in enumerate(cluster.edges):
        if j in star_of_edge:
            k = star_of_edge[j]
            he = star[k]
            arc = new_incident[he]
            tail_id, head_id = tri_ids[k], remap[cluster.end_vertex(he)]
            left, right = (
                (ed.left, ed.right) if he[1] else (ed.right, ed.left)
            )
            edges.append(
                ed.__class__(ed.id, tail_id, head_id, arc.bulge, left, right)
            )
        else:
            edges.append(
                ed.__class__(
                    ed.id, remap[ed.tail], remap[ed.head], ed.bulge, ed.left, ed.right
                )
            )
    for k in range(3):
        outer_region = cluster.half_edge_left(star[k])
        edges.append(
            cluster.edges[0].__class__(
                id=cluster.e + k,
                tail=tri_ids[k],
                head=tri_ids[(k + 1) % 3],
                bulge=bubble_arcs[k].bulge,
                left=new_region,
                right=outer_region,
            )
        )
    labels = cluster.region_labels or tuple(
        ["exterior"] + [f"region {r}" for r in range(1, cluster.n + 1)]
    )
    return Cluster(
        tuple(verts),
        tuple(edges),
        region_count=new_region,
        region_labels=labels + (f"decoration {new_region}",),
    )


def _point_on_carrier(carrier, z: complex, tol: float) -> bool:
    if carrier.kind == "circle":
        return abs(abs(z - carrier.center.z) - carrier.radius) < tol * carrier.radius
    u = carrier.direction
    return abs(((z - carrier.point.z).conjugate() * u).imag) < tol * max(
        1.0, abs(z - carrier.point.z)
    )


def _in_triangle(w: complex, tri: Sequence[complex]) -> bool:
    signs = []
    for k in range(3):
        a, b = tri[k], tri[(k + 1) % 3]
        signs.append(((b - a).conjugate() * (w - a)).imag > 0)
    return all(signs) or not any(signs)


def scale_three_sided(cluster: Cluster, region: int, factor: float) -> Cluster:
    """Expand or shrink a three-sided bubble without touching the rest.

    Normalizes through the same Mobius picture as :func:`decorate`: the
    outer carriers' second concurrency point goes to infinity, the bubble
    becomes (a Mobius image of) the equilateral insert, is scaled about the
    concurrency image, and mapped back.  ``factor = 0`` deletes the region
    and merges the three junctions into one vertex.
    """
    if factor < 0:
        raise GeometryDomainError("factor must be >= 0")
    if not 1 <= region <= cluster.n:
        raise GeometryDomainError(f"no interior region {region}")
    walk = cluster.region_walks[region]
    if len(walk) != 3:
        raise GeometryDomainError(
            f"region {region} has {len(walk)} sides, expected 3"
        )
    bubble_vids = [cluster.start_vertex(he) for he in walk]
    bubble_eids = {he[0] for he in walk}
    outer_hes = []
    for vid in bubble_vids:
        others = [he for he in cluster.vertex_stars[vid] if he[0] not in bubble_eids]
        if len(others) != 1:
            raise GeometryDomainError("bubble junction is not a triple point")
        outer_hes.append(others[0])
    carriers = [arc_carrier(cluster.half_edge_arc(he)) for he in outer_hes]

    scale = cluster.diameter()
    tol = 1e-6
    # the two common points of the three outer carriers
    pts = carrier_intersections(carriers[0], carriers[1])
    common = [
        pt.z for pt in pts if _point_on_carrier(carriers[2], pt.z, tol)
    ]
    n_lines = sum(1 for c in carriers if c.kind == "line")
    bubble_pos = [cluster.vertices[v].z for v in bubble_vids]
    if n_lines >= 2:
        if len(common) != 1:
            raise GeometryDomainError("outer carriers are not concurrent")
        m = minv = None
        w = common[0]
        tri = bubble_pos
    else:
        if len(common) != 2:
            raise GeometryDomainError(
                "outer carriers do not share two common points"
            )
        for q, p_in in (common, reversed(common)):
            m_try = MobiusMap.inversion_about(q).normalized()
            tri_try = [m_try.apply(z) for z in bubble_pos]
            if _in_triangle(m_try.apply(p_in), tri_try):
                m = m_try
                minv = m.inverse()
                w = m.apply(p_in)
                tri = tri_try
                q_inf = q
                break
        else:
            raise GeometryDomainError(
                "could not identify the concurrency point inside the bubble"
            )

    def back(z: complex) -> complex:
        return z if minv is None else minv.apply(z)

    def shrink(z: complex) -> complex:
        return w + factor * (z - w)

    # rebuilt outer edges (same carriers, truncated at the scaled vertices)
    new_outer = {}
    merged_pos = Point.of(back(w))
    for k, he in enumerate(outer_hes):
        far_vid = cluster.end_vertex(he)
        far = cluster.vertices[far_vid]
        f = None
        if m is not None and abs(far.z - q_inf) < 1e-9 * scale:
            f = None  # far endpoint is the point sent to infinity
        else:
            f = _apply_or_id(m, far.z)
        u = shrink(tri[k])
        if f is not None and abs(u - w) >= abs(f - w):
            raise TopologyBreakdown("scaled bubble reaches past an adjacent vertex")
        if factor == 0.0:
            tail_pt = merged_pos
            sample = 0.5 * (w + f) if f is not None else w + (tri[k] - w)
        else:
            tail_pt = Point.of(back(u))
            sample = 0.5 * (u + f) if f is not None else u + (tri[k] - w)
        new_outer[he] = arc_through(tail_pt, Point.of(back(sample)), far)

    # rebuilt bubble arcs (skipped entirely at factor 0)
    new_bubble = {}
    if factor > 0.0:
        for he in walk:
            arc = cluster.half_edge_arc(he)
            if m is None:
                scaled = Arc(
                    Point.of(shrink(arc.tail.z)),
                    Point.of(shrink(arc.head.z)),
                    factor * factor * arc.bulge,
                )
            else:
                img = mobius_apply_arc(m, arc)
                scaled = Arc(
                    Point.of(shrink(img.tail.z)),
                    Point.of(shrink(img.head.z)),
                    factor * factor * img.bulge,
                )
                scaled = mobius_apply_arc(minv, scaled)
            new_bubble[he] = scaled

    # assemble
    if factor > 0.0:
        verts = list(cluster.vertices)
        for k, vid in enumerate(bubble_vids):
            verts[vid] = Point.of(back(shrink(tri[k])))
        edges = []
        for j, ed in enumerate(cluster.edges):
            if j in bubble_eids:
                he = (j, True)
                arc = new_bubble[he if he in new_bubble else (j, False)]
                if (j, True) not in new_bubble:
                    arc = arc.reversed()
                edges.append(ed.__class__(ed.id, ed.tail, ed.head, arc.bulge, ed.left, ed.right))
            elif any(he[0] == j for he in outer_hes):
                he = next(h for h in outer_hes if h[0] == j)
                arc = new_outer[he]
                bulge = arc.bulge if he[1] else -arc.bulge
                edges.append(ed.__class__(ed.id, ed.tail, ed.head, bulge, ed.left, ed.right))
            else:
                edges.append(ed)
        return Cluster(
            tuple(verts), tuple(edges), cluster.region_count, cluster.region_labels
        )

    # factor == 0: delete the region, merge the three junctions
    keep_vids = [i for i in range(cluster.v) if i not in bubble_vids]
    remap = {old: new for new, old in enumerate(keep_vids)}
    merged_id = len(keep_vids)
    verts = [cluster.vertices[i] for i in keep_vids] + [merged_pos]
    for vid in bubble_vids:
        remap[vid] = merged_id

    def remap_region(r: int) -> int:
        return r - 1 if r > region else r

    edges = []
    next_id = 0
    for j, ed in enumerate(cluster.edges):
        if j in bubble_eids:
            continue
        he = next((h for h in outer_hes if h[0] == j), None)
        if he is not None:
            arc = new_outer[he]
            bulge = arc.bulge if he[1] else -arc.bulge
        else:
            bulge = ed.bulge
        edges.append(
            ed.__class__(
                next_id,
                remap[ed.tail],
                remap[ed.head],
                bulge,
                remap_region(ed.left),
                remap_region(ed.right),
            )
        )
        next_id += 1
    labels = cluster.region_labels
    if labels:
        labels = tuple(l for r, l in enumerate(labels) if r != region)
    return Cluster(
        tuple(verts), tuple(edges), cluster.region_count - 1, labels
    )


def four_bubble(size: float = 0.3, interface_length: float = 1.0) -> Cluster:
    """Standard 4-bubble: the symmetric triple bubble with its central
    junction decorated by a three-sided bubble."""
    base = triple_bubble(interface_length=interface_length)
    center = next(
        i for i, p in enumerate(base.vertices) if abs(p.z) < 1e-9 * base.diameter()
    )
    return decorate(base, center, size * interface_length)


# ---------------------------------------------------------------------------
# lens chains


def two_lens(lens1: float = 0.8, lens2: float = 0.8, separation: float = 2.0) -> Cluster:
    """Bubble with two lens defects in its boundary (3 interior regions).

    Built in an inverted picture first: a straight line carrying two lenses
    (pairs of 60-degree arcs meeting the line at 120 degrees), then mapped by
    z -> 1/(z - i) so the line closes up into a circle through the origin.
    Region 1 is the main bubble, regions 2 and 3 the lenses.
    """
    if lens1 <= 0 or lens2 <= 0 or separation <= 0:
        raise GeometryDomainError("lens sizes and separation must be positive")
    if lens1 / 2 + lens2 / 2 >= separation:
        raise TopologyBreakdown("lenses overlap")
    if max(lens1, lens2) / (2.0 * math.sqrt(3.0)) >= 0.9:
        raise GeometryDomainError("lens too tall for the inversion center")
    s = separation / 2.0
    a1, b1 = Point(-s - lens1 / 2, 0.0), Point(-s + lens1 / 2, 0.0)
    a2, b2 = Point(s - lens2 / 2, 0.0), Point(s + lens2 / 2, 0.0)
    m = MobiusMap.inversion_about(1j)

    def lens_arcs(a: Point, b: Point) -> List[Arc]:
        area = segment_area(math.pi / 3, abs(b.z - a.z))
        return [Arc(a, b, -area), Arc(a, b, area)]  # upper, lower

    straight = [Arc(b1, a2, 0.0)]
    straight += lens_arcs(a1, b1)
    straight += lens_arcs(a2, b2)
    arcs = [mobius_apply_arc(m, arc) for arc in straight]
    # the piece of the line through infinity closes up through m(inf) = 0
    arcs.insert(1, arc_through(
        mobius_apply_point(m, b2), Point(0.0, 0.0), mobius_apply_point(m, a1)
    ))
    labels = ["exterior", "bubble", "lens 1", "lens 2"]
    return build_cluster_from_arcs(arcs, labels=labels)


def _two_lens_ring_edges() -> Tuple[int, int]:
    """Edge ids of the two main-circle arcs in :func:`two_lens` output."""
    return (0, 1)


# ---------------------------------------------------------------------------
# necklace


def necklace(k: int, inner_radius: Optional[float] = None) -> Cluster:
    """Dihedrally symmetric ring of k unit-pressure bubbles around a chamber.

    The 120-degree conditions force the outer arcs' bulge half-angle to
    pi/6 + pi/k and the chamber-facing arcs' to pi/k - pi/6, leaving the
    chamber size as the one free parameter of the symmetric family.  With
    seven or more bubbles the default chamber radius makes the chamber-facing
    arcs unit curvature too, so the chamber pressure is exactly 0.  For k = 5
    or 6 that choice does not exist (at k = 6 the chamber walls are straight
    and its pressure equals 1 for every chamber size); the default then takes
    a mid-range chamber.
    """
    if k < 5:
        raise GeometryDomainError("need at least 5 bubbles")
    phi2 = math.pi / 6 + math.pi / k
    phi1 = math.pi / k - math.pi / 6
    rho2 = math.sin(phi2) / math.sin(math.pi / k)
    if inner_radius is None:
        if k >= 7:
            rho1 = math.sin(-phi1) / math.sin(math.pi / k)
        else:
            rho1 = 0.45 * rho2
    else:
        rho1 = inner_radius
    if not 0 < rho1 < rho2:
        raise GeometryDomainError(
            f"inner radius must lie in (0, {rho2:.6g}) for k = {k}"
        )

    step = 2.0 * math.pi / k
    inner = [Point.of(rho1 * cmath.exp(1j * step * j)) for j in range(k)]
    outer = [Point.of(rho2 * cmath.exp(1j * step * j)) for j in range(k)]
    c1 = 2.0 * rho1 * math.sin(math.pi / k)
    c2 = 2.0 * rho2 * math.sin(math.pi / k)
    bulge1 = segment_area(phi1, c1) if abs(phi1) > 1e-15 else 0.0
    bulge2 = segment_area(phi2, c2)

    chamber = k + 1
    edges: List[EdgeRecord] = []
    for j in range(k):
        nxt = (j + 1) % k
        bubble = j + 1
        prev_bubble = (j - 1) % k + 1
        # radial contact segment, inner -> outer
        edges.append(EdgeRecord(3 * j, j, k + j, 0.0, bubble, prev_bubble))
        # outer arc, counterclockwise, bulging outward
        edges.append(EdgeRecord(3 * j + 1, k + j, k + nxt, bulge2, bubble, EXTERIOR))
        # chamber-facing arc, counterclockwise
        edges.append(EdgeRecord(3 * j + 2, j, nxt, bulge1, chamber, bubble))
    labels = (
        ["exterior"] + [f"bubble {j + 1}" for j in range(k)] + ["chamber"]
    )
    return Cluster(
        tuple(inner + outer), tuple(edges), chamber, tuple(labels)
    )


# ---------------------------------------------------------------------------
# 4-petal flower


def flower(lens_size: float = 0.18, radius: float = 1.0) -> Cluster:
    """4-petal flower: four equal petals around a small 4-sided center.

    Found by the sliding-lens procedure: an equal double bubble with a lens
    of half-chord ``lens_size`` on its straight interface; the lens is slid
    until the axis through the two upper-arc centers is perpendicular to the
    axis through the two lower-arc centers (a 1D root-find).  The axis
    crossing is the flower's center; the lens vertex nearer to it fixes the
    center region's corner distance.  The 120-degree conditions then force
    bulge half-angles of pi/12 on the four center arcs and 5 pi/12 on the
    four petal arcs, which closes the D2-symmetric (in fact D4-symmetric)
    5-cluster in closed form.
    """
    r = radius
    if not 0 < lens_size < 0.5 * r:
        raise GeometryDomainError("lens_size must be in (0, radius/2)")
    s = lens_size
    up_center = complex(0.0, r / 2)  # upper bubble circle center, radius r

    def lens_center(xc: float) -> complex:
        # carrier center of the lens arc bulging up, for the lens slid to xc
        return complex(xc, -s / math.sqrt(3.0))

    def perp_defect(xc: float) -> float:
        # cosine of the angle between the upper axis and its mirror image
        u = lens_center(xc) - up_center
        v = u.conjugate()
        return (u * v.conjugate()).real / (abs(u) * abs(v))

    xc_guess = r / 2 + s / math.sqrt(3.0)
    lo, hi = r / 2 + 1e-12, 2.0 * xc_guess
    if perp_defect(lo) * perp_defect(hi) > 0:
        raise NonConvergence("no perpendicular lens position in bracket", [])
    xc = brentq(perp_defect, lo, hi, xtol=1e-15)

    o = complex(r / 2, 0.0)  # axis crossing = flower center
    a = abs(o.real - (xc - s))  # center-square corner distance
    sep = (math.sqrt(3.0) / 2 - 0.5) * r - a  # separator length
    if sep <= 0:
        raise GeometryDomainError("lens too large: petals would vanish")

    corners = [o + a * 1j ** k for k in range(4)]
    outer = [o + (a + sep) * 1j ** k for k in range(4)]
    sq_bulge = segment_area(math.pi / 12, a * math.sqrt(2.0))
    petal_bulge = segment_area(5 * math.pi / 12, (a + sep) * math.sqrt(2.0))
    arcs = []
    for k in range(4):
        nxt = (k + 1) % 4
        arcs.append(Arc(Point.of(outer[k]), Point.of(outer[nxt]), petal_bulge))
        arcs.append(Arc(Point.of(corners[k]), Point.of(outer[k]), 0.0))
        arcs.append(Arc(Point.of(corners[k]), Point.of(corners[nxt]), sq_bulge))
    labels = ["exterior", "petal 1", "petal 2", "petal 3", "petal 4", "center"]
    built = build_cluster_from_arcs(arcs, labels=None)
    # order region names by size so the small center region comes last
    areas = region_areas(built)
    order = list(np.argsort(-areas))
    relabel = {0: 0}
    for rank, idx in enumerate(order):
        relabel[idx + 1] = rank + 1
    edges = tuple(
        ed.__class__(ed.id, ed.tail, ed.head, ed.bulge,
                     relabel[ed.left], relabel[ed.right])
        for ed in built.edges
    )
    return Cluster(built.vertices, edges, built.region_count, tuple(labels))


# ---------------------------------------------------------------------------
# quasi-equilibrium variants


def _angle_only_solve(
    initial: Cluster,
    extra_rows,
    tol: float = 1e-10,
    max_iter: int = 200,
) -> Cluster:
    """Solve the 120-degree angle block plus caller-supplied pin rows.

    The curvature cocycle is deliberately left out, so the result is in
    general only a quasi-equilibrium.  Minimum-norm steps handle the
    underdetermined stack.
    """
    x0 = initial.chart()
    scale = initial.diameter()

    def fun(x: np.ndarray) -> np.ndarray:
        c = initial.with_chart(x)
        _check_topology(c)
        rep = residuals(c)
        return np.concatenate([rep.angle_block, np.asarray(extra_rows(c), float)])

    def ok(x: np.ndarray, f: np.ndarray) -> bool:
        return bool(np.abs(f).max(initial=0.0) < tol)

    x, _ = lm_minimize(fun, x0, fd_step=1e-6 * scale, max_iter=max_iter, converged=ok)
    return initial.with_chart(x)


def quasi_variant(kind: str, amount: float = 0.15) -> Cluster:
    """Quasi-equilibrium presets: 120-degree angles hold, the cocycle fails.

    ``two_lens_recurved``: the two arcs of the two-lens cluster's main circle
    are re-curved by the relative ``amount`` while the angle conditions are
    re-solved.  ``four_stretched``: the middle straight edge of the standard
    4-bubble is lengthened by the relative ``amount`` with both endpoints
    pinned.  ``amount = 0`` reproduces the equilibrium base cluster.
    """
    if kind == "two_lens_recurved":
        base = two_lens()
        ring = _two_lens_ring_edges()
        from .equilibrium import half_edge_curvature

        targets = {
            j: half_edge_curvature(base, (j, True)) * (1.0 + amount) for j in ring
        }
        # hold one lens arc's curvature fixed so the pins cannot be satisfied
        # by simply rescaling the whole equilibrium cluster
        anchor = next(j for j in range(base.e) if j not in ring)
        targets[anchor] = half_edge_curvature(base, (anchor, True))
        kscale = max(1.0, max(abs(t) for t in targets.values()))
        pin0 = base.vertices[0]
        pin_he = base.vertex_stars[0][0]
        pin_dir = base.outgoing_tangent(pin_he)

        def rows(c: Cluster):
            out = [
                (half_edge_curvature(c, (j, True)) - t) / kscale
                for j, t in targets.items()
            ]
            out += [
                c.vertices[0].x - pin0.x,
                c.vertices[0].y - pin0.y,
                (pin_dir.conjugate() * c.outgoing_tangent(pin_he)).imag,
            ]
            return out

        return _angle_only_solve(base, rows)

    if kind == "four_stretched":
        base = four_bubble()
        scale = base.diameter()
        middle = min(
            (j for j in range(base.e) if abs(base.edges[j].bulge) < 1e-12 * scale**2),
            key=lambda j: -abs(
                base.vertices[base.edges[j].tail].z
                - base.vertices[base.edges[j].head].z
            ),
        )
        ed = base.edges[middle]
        ta, he = base.vertices[ed.tail].z, base.vertices[ed.head].z
        u = (he - ta) / abs(he - ta)
        shift = 0.5 * amount * abs(he - ta)
        ta_new, he_new = ta - shift * u, he + shift * u

        def rows(c: Cluster):
            pa, pb = c.vertices[ed.tail].z, c.vertices[ed.head].z
            return [
                (pa - ta_new).real, (pa - ta_new).imag,
                (pb - he_new).real, (pb - he_new).imag,
            ]

        return _angle_only_solve(base, rows)

    raise GeometryDomainError(f"unknown quasi variant kind {kind!r}")


def random_mobius(cluster: Cluster, rng: np.random.Generator) -> MobiusMap:
    """Random Mobius map whose pole stays clear of the cluster.

    Composes a rotation, a mild scaling, a translation, and (half the time)
    an inversion about a point at least half a diameter away from every
    vertex and arc sample, so that images remain bounded clusters.
    """
    scale = cluster.diameter()
    centroid = sum(p.z for p in cluster.vertices) / cluster.v
    m = MobiusMap.rotation(rng.uniform(0.0, 2.0 * math.pi), about=centroid)
    m = MobiusMap.scaling(math.exp(rng.uniform(-0.5, 0.5))).compose(m)
    m = MobiusMap.translation(complex(*rng.normal(0.0, 0.3 * scale, 2))).compose(m)
    if rng.random() < 0.5:
        for _ in range(100):
            q = centroid + complex(*rng.normal(0.0, 2.0 * scale, 2))
            clear = all(abs(p.z - q) > 0.75 * scale for p in cluster.vertices)
            if clear and all(
                abs(arc_point(cluster.arc_of(j), t).z - q) > 0.5 * scale
                for j in range(cluster.e)
                for t in (0.25, 0.5, 0.75)
            ):
                m = MobiusMap.inversion_about(q).compose(m)
                break
    pole = m.pole()
    if pole is not None and any(
        abs(p.z - pole) < 0.25 * scale for p in cluster.vertices
    ):
        raise GeometryDomainError("generated map has a pole on the cluster")
    return m
