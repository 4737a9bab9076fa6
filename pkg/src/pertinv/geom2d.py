"""Winding numbers, exact planar arrangements, and the winding-weighted
overlap-area invariant of immersed closed polygonal curves.

Coordinates are exact rationals throughout (floats are converted, which
is exact for binary floats), so the arrangement is built with exact
predicates and the areas come out as exact fractions.

The overlap invariant of two curves is the integral of the product of
their winding numbers.  It is evaluated as a sum over the faces of the
overlay arrangement: each face contributes its area times the product
of its winding numbers.  Faces are recorded as oriented boundary
cycles with the face on the left: the outer boundary of a bounded face
has positive signed area, hole boundaries and the unbounded face's
boundaries have negative signed area and the per-face sums still come
out right because a face's cycles share its winding vector.  For
embedded curves (winding 0/1) the invariant is literally the signed
area of the overlap of the enclosed blocks; the winding-weighted form
is the reading that survives immersed curves with higher winding.

Inputs must be generic: crossings are transversal double points in the
interiors of edges.  Anything else (collinear overlap, contact at a
vertex, triple points) is rejected with the offending coordinates.
"""

from fractions import Fraction
from functools import cmp_to_key

from .errors import (
    InputError,
    InternalConsistencyError,
    NonGenericError,
    PointOnCurveError,
)
from .ratlin import frac


def _pt(p):
    return (frac(p[0]), frac(p[1]))


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def _cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


class PolyCurve2:
    """Closed polygonal curve in the plane, orientation from vertex order."""

    def __init__(self, vertices):
        self.vertices = tuple(_pt(v) for v in vertices)
        if len(self.vertices) < 3:
            raise InputError("a closed plane curve needs >= 3 vertices")
        m = len(self.vertices)
        for i in range(m):
            if self.vertices[i] == self.vertices[(i + 1) % m]:
                raise InputError("consecutive vertices coincide at %s"
                                 % (self.vertices[i],))

    def edges(self):
        m = len(self.vertices)
        return [
            (self.vertices[i], self.vertices[(i + 1) % m]) for i in range(m)
        ]

    def reversed(self):
        return PolyCurve2(self.vertices[::-1])

    def shoelace_area(self):
        """Signed area with multiplicity (the integral of the winding)."""
        total = Fraction(0)
        for a, b in self.edges():
            total += _cross(a, b)
        return total / 2

    def __len__(self):
        return len(self.vertices)


def winding_number(curve, p):
    """Exact crossing-count winding number; the point must be off the curve."""
    p = _pt(p)
    w = 0
    for a, b in curve.edges():
        d = _sub(b, a)
        side = _cross(d, _sub(p, a))
        if side == 0 and min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) \
                and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]):
            raise PointOnCurveError("point %s lies on the curve" % (p,))
        if a[1] <= p[1] < b[1] and side > 0:
            w += 1
        elif b[1] <= p[1] < a[1] and side < 0:
            w -= 1
    return w


class Face:
    """One oriented boundary cycle: signed area and winding vector of the
    face on its left."""

    __slots__ = ("area", "winding")

    def __init__(self, area, winding):
        self.area = area
        self.winding = tuple(winding)

    def __repr__(self):
        return "Face(area=%s, winding=%s)" % (self.area, self.winding)


class Arrangement:
    def __init__(self, curves, faces):
        self.curves = tuple(curves)
        self.faces = list(faces)

    def __repr__(self):
        return "Arrangement(%d curves, %d faces)" % (len(self.curves), len(self.faces))


def _classify_pair(a1, b1, a2, b2, adjacent):
    """Intersection of two closed segments; returns (t, u) for a proper
    interior crossing, None when disjoint, raises when non-generic."""
    d1 = _sub(b1, a1)
    d2 = _sub(b2, a2)
    r = _sub(a2, a1)
    denom = _cross(d1, d2)
    if denom == 0:
        if _cross(r, d1) != 0:
            return None  # parallel, different lines
        # collinear: parametrize the second segment along the first
        len2 = _dot(d1, d1)
        t_a2 = _dot(r, d1)
        t_b2 = _dot(_sub(b2, a1), d1)
        lo, hi = min(t_a2, t_b2), max(t_a2, t_b2)
        if hi < 0 or lo > len2:
            return None
        if hi == 0 or lo == len2:
            # single shared point on a common line
            if adjacent:
                return None  # straight continuation through the vertex
            raise NonGenericError("segments touch end to end", a2)
        if adjacent:
            raise NonGenericError("curve backtracks along itself", b1)
        raise NonGenericError("collinear overlapping segments", a2)
    t = _cross(r, d2) / denom
    u = _cross(r, d1) / denom
    if t < 0 or t > 1 or u < 0 or u > 1:
        return None
    if adjacent:
        # consecutive edges of one curve meet exactly at the shared vertex
        if (t, u) in (((Fraction(1), Fraction(0))), (Fraction(0), Fraction(1))):
            return None
    if 0 < t < 1 and 0 < u < 1:
        return (t, u)
    point = (a1[0] + t * d1[0], a1[1] + t * d1[1])
    raise NonGenericError("contact at a vertex", point)


def build_arrangement(curves):
    """Exact overlay of the curves into faces with winding vectors.

    Validates genericity, splits edges at the (rational) crossing
    points, extracts the boundary cycles of the planar subdivision, and
    samples one interior point per cycle to read off all winding
    numbers.  The per-curve area identity
    sum_faces area * w_i = shoelace(curve_i) is verified exactly.
    """
    curves = list(curves)
    if not curves:
        raise InputError("need at least one curve")
    edges = []  # (curve index, edge index, a, b)
    edge_counts = []
    for ci, c in enumerate(curves):
        curve_edges = c.edges()
        edge_counts.append(len(curve_edges))
        for ei, (a, b) in enumerate(curve_edges):
            edges.append((ci, ei, a, b))
    boxes = [
        (min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1]))
        for (_, _, a, b) in edges
    ]

    splits = {i: [] for i in range(len(edges))}  # edge -> [(t, point)]
    point_edges = {}  # crossing point -> set of edge ids
    for i in range(len(edges)):
        ci, ei, a1, b1 = edges[i]
        box_i = boxes[i]
        for j in range(i + 1, len(edges)):
            box_j = boxes[j]
            if (box_i[1] < box_j[0] or box_j[1] < box_i[0]
                    or box_i[3] < box_j[2] or box_j[3] < box_i[2]):
                continue
            cj, ej, a2, b2 = edges[j]
            m = edge_counts[ci]
            adjacent = ci == cj and (abs(ei - ej) == 1 or abs(ei - ej) == m - 1)
            hit = _classify_pair(a1, b1, a2, b2, adjacent)
            if hit is None:
                continue
            t, u = hit
            d1 = _sub(b1, a1)
            point = (a1[0] + t * d1[0], a1[1] + t * d1[1])
            splits[i].append((t, point))
            splits[j].append((u, point))
            point_edges.setdefault(point, set()).update((i, j))
    for point, through in point_edges.items():
        if len(through) > 2:
            raise NonGenericError("more than two edges through one point", point)

    # nodes and sub-edges
    node_ids = {}

    def node(p):
        if p not in node_ids:
            node_ids[p] = len(node_ids)
        return node_ids[p]

    sub_edges = []  # (node_u, node_v, point_u, point_v, curve index)
    for i, (ci, ei, a, b) in enumerate(edges):
        cuts = sorted(set(splits[i]))
        pts = [a] + [p for _, p in cuts] + [b]
        for k in range(len(pts) - 1):
            sub_edges.append((node(pts[k]), node(pts[k + 1]), pts[k], pts[k + 1], ci))

    points_of = {v: k for k, v in node_ids.items()}

    # half-edges: two per sub-edge, twins adjacent
    halves = []  # dicts: origin, target, dir, sub, twin, next
    for si, (u, v, pu, pv, ci) in enumerate(sub_edges):
        d = _sub(pv, pu)
        halves.append({"o": u, "t": v, "d": d, "sub": si})
        halves.append({"o": v, "t": u, "d": (-d[0], -d[1]), "sub": si})
    for h in range(0, len(halves), 2):
        halves[h]["twin"] = h + 1
        halves[h + 1]["twin"] = h

    outgoing = {}
    for idx, h in enumerate(halves):
        outgoing.setdefault(h["o"], []).append(idx)

    def half_plane(d):
        return 0 if (d[1] > 0 or (d[1] == 0 and d[0] > 0)) else 1

    def dir_cmp(ia, ib):
        da, db = halves[ia]["d"], halves[ib]["d"]
        ha, hb = half_plane(da), half_plane(db)
        if ha != hb:
            return ha - hb
        c = _cross(da, db)
        return -1 if c > 0 else (1 if c < 0 else 0)

    for v, out in outgoing.items():
        out.sort(key=cmp_to_key(dir_cmp))
        pos = {idx: k for k, idx in enumerate(out)}
        for idx in out:
            halves[idx]["slot"] = pos[idx]

    for idx, h in enumerate(halves):
        out = outgoing[h["t"]]
        twin = halves[h["twin"]]
        h["next"] = out[(twin["slot"] - 1) % len(out)]

    # face cycles, traversed with the face on the left
    visited = [False] * len(halves)
    faces = []
    for start in range(len(halves)):
        if visited[start]:
            continue
        cycle = []
        idx = start
        while not visited[idx]:
            visited[idx] = True
            cycle.append(idx)
            idx = halves[idx]["next"]
        area = Fraction(0)
        for idx in cycle:
            pu = points_of[halves[idx]["o"]]
            pv = points_of[halves[idx]["t"]]
            area += _cross(pu, pv)
        area /= 2
        sample = _interior_sample(halves, sub_edges, points_of, cycle[0])
        winding = tuple(winding_number(c, sample) for c in curves)
        faces.append(Face(area, winding))

    arr = Arrangement(curves, faces)
    for ci, c in enumerate(curves):
        total = sum((f.area * f.winding[ci] for f in arr.faces), Fraction(0))
        if total != c.shoelace_area():
            raise InternalConsistencyError(
                "face areas do not assemble the winding integral of curve %d" % ci
            )
    return arr


def _interior_sample(halves, sub_edges, points_of, half_idx):
    """A point strictly inside the face left of the given half-edge.

    Casts an exact ray from the edge midpoint along the left normal and
    steps half-way to the first obstruction.
    """
    h = halves[half_idx]
    pu = points_of[h["o"]]
    pv = points_of[h["t"]]
    m = ((pu[0] + pv[0]) / 2, (pu[1] + pv[1]) / 2)
    d = h["d"]
    n = (-d[1], d[0])
    t_min = None
    for si, (u, v, p, q, ci) in enumerate(sub_edges):
        if si == h["sub"]:
            continue
        e = _sub(q, p)
        r = _sub(p, m)
        denom = _cross(n, e)
        if denom == 0:
            if _cross(r, n) != 0:
                continue
            # segment collinear with the ray line; it cannot contain m
            nn = _dot(n, n)
            tp = _dot(r, n) / nn
            tq = _dot(_sub(q, m), n) / nn
            lo, hi = min(tp, tq), max(tp, tq)
            if hi <= 0:
                continue
            cand = lo if lo > 0 else hi
        else:
            t = _cross(r, e) / denom
            s = _cross(r, n) / denom
            if t <= 0 or s < 0 or s > 1:
                continue
            cand = t
        if t_min is None or cand < t_min:
            t_min = cand
    step = t_min / 2 if t_min is not None else Fraction(1)
    return (m[0] + step * n[0], m[1] + step * n[1])


def j_invariant(arr, i, j):
    """Winding-weighted overlap area: sum over faces of
    area * w_i * w_j.  Symmetric; negates when one curve reverses."""
    if not (0 <= i < len(arr.curves) and 0 <= j < len(arr.curves)):
        raise InputError("curve index out of range")
    return sum(
        (f.area * f.winding[i] * f.winding[j] for f in arr.faces), Fraction(0)
    )


def ym_s0(arr, charges):
    """sum_{i,j} Tr(c_i c_j) J(i, j), diagonal included (the diagonal
    is the winding-squared area of one curve, which is well defined)."""
    n = len(arr.curves)
    if len(charges) != n:
        raise InputError("need one charge vector per curve")
    total = Fraction(0)
    for i in range(n):
        for j in range(n):
            total += charges.pair(i, j) * j_invariant(arr, i, j)
    return total


def shear_map(s):
    s = frac(s)
    return lambda p: (frac(p[0]) + s * frac(p[1]), frac(p[1]))


def rotation_map(turns):
    import math

    theta = 2.0 * math.pi * float(turns)
    c, s = math.cos(theta), math.sin(theta)
    return lambda p: (
        c * float(p[0]) - s * float(p[1]),
        s * float(p[0]) + c * float(p[1]),
    )


def nonlinear_shear_map(c):
    """(x, y) -> (x + c y^2, y); unit Jacobian but not affine, so images
    of polygons must be resampled."""
    c = frac(c)
    return lambda p: (frac(p[0]) + c * frac(p[1]) ** 2, frac(p[1]))


def apply_area_preserving(curve, mapping, resample=0):
    """Image of the curve under a point map.

    resample = 0 maps the vertices only (exact for affine maps);
    resample = r >= 1 first subdivides every edge into r equal pieces so
    nonlinear maps are followed by a polygonal approximation.
    """
    if resample < 0:
        raise InputError("resample must be non-negative")
    pts = []
    if resample <= 1:
        pts = list(curve.vertices)
    else:
        for a, b in curve.edges():
            d = _sub(b, a)
            for k in range(resample):
                t = Fraction(k, resample)
                pts.append((a[0] + t * d[0], a[1] + t * d[1]))
    return PolyCurve2([mapping(p) for p in pts])
