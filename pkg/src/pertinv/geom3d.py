"""Gauss linking numbers of polygonal links and the charge-weighted
order-zero invariant.

The exact method accumulates, over all pairs of one edge from each
curve, the signed solid angle subtended by the spherical quadrilateral
spanned by the two segments; the total divided by 4 pi is an integer
for disjoint closed curves and is rounded with a guarded defect.  A
midpoint-rule quadrature of the Gauss double integral is provided as a
floating cross-check; it converges to the same integer but is never
trusted for the exact answer.
"""

import math

import numpy as np

from .errors import CurvesTooCloseError, InputError, RoundingDefectError

MIN_SEPARATION = 1e-9
ROUNDING_TOLERANCE = 1e-6
_DEGENERATE_EPS = 1e-13


class PolyCurve3:
    """Closed polygonal curve in R^3; the closing edge is implicit."""

    def __init__(self, vertices):
        v = np.asarray(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 3:
            raise InputError("a closed space curve needs >= 3 points in R^3")
        gaps = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
        if np.any(gaps < 1e-12):
            raise InputError("degenerate zero-length edge")
        self.vertices = v

    def edges(self):
        """(start, direction) arrays, one row per edge."""
        starts = self.vertices
        vecs = np.roll(self.vertices, -1, axis=0) - self.vertices
        return starts, vecs

    def reversed(self):
        return PolyCurve3(self.vertices[::-1])

    def transformed(self, rotation, translation):
        r = np.asarray(rotation, dtype=float)
        t = np.asarray(translation, dtype=float)
        return PolyCurve3(self.vertices @ r.T + t)

    def __len__(self):
        return len(self.vertices)


def _segment_distance(p1, d1, p2, d2):
    """Minimum distance between segments p1 + t d1, p2 + s d2, t,s in [0,1]."""
    r = p1 - p2
    a = d1 @ d1
    b = d1 @ d2
    c = d2 @ d2
    d = d1 @ r
    e = d2 @ r
    denom = a * c - b * b
    if denom > 1e-14 * max(a * c, 1e-300):
        t = (b * e - c * d) / denom
        s = (a * e - b * d) / denom
    else:  # near-parallel: fix t, optimize s
        t = 0.0
        s = e / c if c > 0 else 0.0
    t = min(max(t, 0.0), 1.0)
    s = min(max(s, 0.0), 1.0)
    # re-clamp each against the other
    for _ in range(2):
        s = min(max((t * b + e) / c, 0.0), 1.0) if c > 0 else 0.0
        t = min(max((s * b - d) / a, 0.0), 1.0) if a > 0 else 0.0
    return float(np.linalg.norm(p1 + t * d1 - (p2 + s * d2)))


def min_distance(c1, c2):
    s1, v1 = c1.edges()
    s2, v2 = c2.edges()
    best = math.inf
    for p, d in zip(s1, v1):
        for q, e in zip(s2, v2):
            best = min(best, _segment_distance(p, d, q, e))
    return best


def _solid_angle(a1, d1, b1, d2):
    """Signed solid angle of the quadrilateral spanned by two segments."""
    a2 = a1 + d1
    b2 = b1 + d2
    r13 = b1 - a1
    r14 = b2 - a1
    r23 = b1 - a2
    r24 = b2 - a2
    scale = max(
        np.linalg.norm(d1) * np.linalg.norm(d2) * np.linalg.norm(r13), 1e-300
    )
    vol = r13 @ np.cross(d1, d2)
    if abs(vol) < _DEGENERATE_EPS * scale:
        return 0.0  # coplanar segments: zero spherical area
    n1 = np.cross(r13, r14)
    n2 = np.cross(r14, r24)
    n3 = np.cross(r24, r23)
    n4 = np.cross(r23, r13)
    for n in (n1, n2, n3, n4):
        norm = np.linalg.norm(n)
        if norm < 1e-300:
            return 0.0
        n /= norm
    omega = (
        math.asin(_clamp(n1 @ n2))
        + math.asin(_clamp(n2 @ n3))
        + math.asin(_clamp(n3 @ n4))
        + math.asin(_clamp(n4 @ n1))
    )
    return omega * _sign(np.cross(d2, d1) @ r13)


def _clamp(x):
    return min(max(x, -1.0), 1.0)


def _sign(x):
    return 1.0 if x > 0 else (-1.0 if x < 0 else 0.0)


def linking_number_exact(c1, c2):
    """Integer linking number by summed solid angles.

    Raises if the curves come closer than the separation floor or if
    the angle sum does not resolve to an integer within tolerance.
    """
    gap = min_distance(c1, c2)
    if gap <= MIN_SEPARATION:
        raise CurvesTooCloseError(
            "curves are %.3g apart; need > %.0e" % (gap, MIN_SEPARATION)
        )
    s1, v1 = c1.edges()
    s2, v2 = c2.edges()
    terms = []
    for p, d in zip(s1, v1):
        for q, e in zip(s2, v2):
            terms.append(_solid_angle(p, d, q, e))
    total = _pairwise_sum(terms) / (4.0 * math.pi)
    nearest = round(total)
    if abs(total - nearest) >= ROUNDING_TOLERANCE:
        raise RoundingDefectError(
            "linking sum %.9f is not integral within %.0e"
            % (total, ROUNDING_TOLERANCE)
        )
    return int(nearest)


def _pairwise_sum(values):
    """Deterministic pairwise reduction, independent of chunking whims."""
    vals = list(values)
    if not vals:
        return 0.0
    while len(vals) > 1:
        vals = [
            vals[i] + vals[i + 1] if i + 1 < len(vals) else vals[i]
            for i in range(0, len(vals), 2)
        ]
    return vals[0]


def linking_number_quadrature(c1, c2, samples_per_edge=64):
    """Midpoint-rule double sum of the Gauss kernel
    (x - y) . (dx x dy) / |x - y|^3, normalized by 4 pi."""
    if samples_per_edge < 1:
        raise InputError("need at least one sample per edge")
    s1, v1 = c1.edges()
    s2, v2 = c2.edges()
    ts = (np.arange(samples_per_edge) + 0.5) / samples_per_edge
    # sample points and differentials along each curve
    x = (s1[:, None, :] + ts[None, :, None] * v1[:, None, :]).reshape(-1, 3)
    dx = np.repeat(v1 / samples_per_edge, samples_per_edge, axis=0)
    y = (s2[:, None, :] + ts[None, :, None] * v2[:, None, :]).reshape(-1, 3)
    dy = np.repeat(v2 / samples_per_edge, samples_per_edge, axis=0)
    diff = x[:, None, :] - y[None, :, :]
    cross = np.cross(dx[:, None, :], dy[None, :, :])
    dist3 = np.linalg.norm(diff, axis=2) ** 3
    kernel = np.einsum("ijk,ijk->ij", diff, cross) / dist3
    return float(kernel.sum() / (4.0 * math.pi))


class ChargeSystem:
    """Charge vectors with a symmetric bilinear form between them."""

    def __init__(self, charges, tr):
        self.charges = [tuple(c) for c in charges]
        self.tr = [list(row) for row in tr]
        m = len(self.tr)
        if any(len(row) != m for row in self.tr):
            raise InputError("bilinear form must be square")
        for i in range(m):
            for j in range(m):
                if self.tr[i][j] != self.tr[j][i]:
                    raise InputError("bilinear form must be symmetric")
        if any(len(c) != m for c in self.charges):
            raise InputError("charge vectors must match the form dimension")

    def __len__(self):
        return len(self.charges)

    def pair(self, i, j):
        ci, cj = self.charges[i], self.charges[j]
        return sum(
            ci[a] * self.tr[a][b] * cj[b]
            for a in range(len(self.tr))
            for b in range(len(self.tr))
        )


def cs_s0(curves, charges):
    """(1/4) sum_{i != j} Tr(c_i c_j) lk(gamma_i, gamma_j).

    The diagonal is excluded: self-linking of an unframed curve has no
    canonical value, so those terms are not summed.
    """
    if len(curves) != len(charges):
        raise InputError("need one charge vector per curve")
    total = 0.0
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            lk = linking_number_exact(curves[i], curves[j])
            total += 2.0 * float(charges.pair(i, j)) * lk
    return total / 4.0
