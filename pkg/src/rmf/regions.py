"""Region grading of clustered and unclustered solutions.

Every solution ends up with a grade and a region label:

========  ==========  =============================================
label     interval    where
========  ==========  =============================================
OnFront   3           on the sampled front, or better than it
Region1   [2, 3]      between the front and its chord (convex) or
                      its end tangents (concave)
Region2   [1, 2]      elsewhere inside the cluster ball
Region3   [0, 1]      outside every ball
========  ==========  =============================================

The raw formula outputs can leave these intervals near the edges of a
ball, so they are clamped; the unclamped value is kept as ``raw``.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

import numpy as np

from rmf.clustering import Cluster, Partition
from rmf.errors import DomainError
from rmf.geometry import (
    CurvatureClass,
    ReferenceSet,
    angles_to,
    as_points,
    as_vector,
    min_distances,
    points_in_polygon,
    polyline_distance,
)

#: Distance to the sampled front below which a solution counts as on it.
TOL_FRONT = 1e-9
#: Tangent-to-chord angle (radians) below which a convex band is degenerate.
TOL_ANGLE = 1e-12


class RegionLabel(str, enum.Enum):
    ON_FRONT = "OnFront"
    REGION1 = "Region1"
    REGION2 = "Region2"
    REGION3 = "Region3"

    @property
    def interval(self) -> tuple[float, float]:
        return INTERVALS[self]


INTERVALS = {
    RegionLabel.ON_FRONT: (3.0, 3.0),
    RegionLabel.REGION1: (2.0, 3.0),
    RegionLabel.REGION2: (1.0, 2.0),
    RegionLabel.REGION3: (0.0, 1.0),
}

# Integer codes used in the vectorised paths; index into this tuple.
LABELS = (RegionLabel.ON_FRONT, RegionLabel.REGION1, RegionLabel.REGION2, RegionLabel.REGION3)
_ON, _R1, _R2, _R3 = range(4)


@dataclass(frozen=True)
class Grade:
    value: float
    region: RegionLabel
    raw: float | None = None
    degenerate: bool = False


@dataclass(eq=False)
class GradedPopulation:
    """Grades for a whole population, in population order.

    ``cluster_index`` is -1 for unclustered solutions. ``raw`` holds the
    formula output before clamping (3 for on-front solutions).
    """

    points: np.ndarray
    values: np.ndarray
    raw: np.ndarray
    region_codes: np.ndarray
    cluster_index: np.ndarray
    degenerate: np.ndarray
    n_clusters: int

    def __len__(self):
        return len(self.values)

    @property
    def regions(self) -> list[RegionLabel]:
        return [LABELS[c] for c in self.region_codes]

    @property
    def entries(self) -> list[tuple[np.ndarray, Grade]]:
        return [
            (self.points[i], Grade(float(self.values[i]), LABELS[self.region_codes[i]],
                                   float(self.raw[i]), bool(self.degenerate[i])))
            for i in range(len(self))
        ]

    def histogram(self) -> dict[str, int]:
        counts = Counter(int(c) for c in self.region_codes)
        return {label.value: counts.get(k, 0) for k, label in enumerate(LABELS)}


@dataclass
class _ClusterTable:
    """Per-cluster data stacked into arrays so grading runs without a cluster loop.

    Local curves and bands are padded to a common length by repeating their
    last vertex, which adds only zero-length segments and edges.
    """

    a: np.ndarray
    b: np.ndarray
    radius: np.ndarray
    concave: np.ndarray
    convex: np.ndarray
    tangent_a: np.ndarray | None
    curves: np.ndarray | None
    bands: np.ndarray | None
    has_band: np.ndarray | None


def _pad(polys):
    width = max(len(p) for p in polys)
    return np.stack([np.vstack([p, np.repeat(p[-1:], width - len(p), axis=0)]) for p in polys])


def _table(clusters: list[Cluster]) -> _ClusterTable:
    a = np.array([c.geometry.anchor_a for c in clusters])
    b = np.array([c.geometry.anchor_b for c in clusters])
    radius = np.array([c.geometry.radius for c in clusters])
    concave = np.array([c.curvature is CurvatureClass.CONCAVE for c in clusters])
    convex = np.array([c.curvature is CurvatureClass.CONVEX for c in clusters])
    if a.shape[1] != 2:
        return _ClusterTable(a, b, radius, concave, convex, None, None, None, None)
    tangent_a = np.array([np.zeros(2) if c.tangent_a is None else c.tangent_a for c in clusters])
    curves = _pad([c.local_curve for c in clusters])
    has_band = np.array([c.band is not None for c in clusters])
    bands = _pad([c.local_curve if c.band is None else c.band for c in clusters])
    return _ClusterTable(a, b, radius, concave, convex, tangent_a, curves, bands, has_band)


def _region_codes(points: np.ndarray, t: _ClusterTable, k: np.ndarray, ref: ReferenceSet | None) -> np.ndarray:
    codes = np.full(len(points), _R2, dtype=int)
    if ref is None or ref.dim != 2 or not len(points):
        return codes
    on = polyline_distance(points, t.curves[k]) <= TOL_FRONT
    on |= ~ref.dominated(points)
    codes[on] = _ON
    check = ~on & t.has_band[k]
    if check.any():
        sel = np.flatnonzero(check)
        codes[sel[points_in_polygon(points[sel], t.bands[k[sel]])]] = _R1
    return codes


def classify_region(p, c: Cluster) -> RegionLabel:
    """Region of a solution ``p`` that lies inside cluster ``c``'s ball.

    The checks run in order: on or below the sampled front gives OnFront;
    inside the curved band of a convex or concave segment gives Region1;
    anything else in the ball is Region2. In 3D every clustered solution
    is Region2.
    """
    p = as_vector(p)
    return LABELS[_region_codes(p[None, :], _table([c]), np.zeros(1, dtype=int), c.reference)[0]]


def _norm(v):
    return np.sqrt(np.einsum("ij,ij->i", v, v))


def _region1_convex_raw(points, a, b, tangent_a):
    """Row-wise convex Region1 formula; anchors and tangents broadcast against ``points``."""
    n = len(points)
    a, b, tangent_a = (np.broadcast_to(v, (n, 2)) for v in (a, b, tangent_a))
    chord = b - a
    d = _norm(chord)
    beta = angles_to(tangent_a, chord)
    degenerate = beta <= TOL_ANGLE
    rel = points - a
    d2 = _norm(rel)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = angles_to(rel, tangent_a) / beta
        d1 = ratio * d
        far = 2.0 + (2.0 * d2 - d1) / d1 * ratio
        near = 3.0 - (2.0 * d2 / d1) * ratio
        # d1 = 0 means D lies along the tangent; use the limit alpha -> 0.
        limit = np.where(d2 == 0, 3.0, 2.0 + 2.0 * d2 / d)
    raw = np.where(d2 > d1 / 2, far, near)
    raw = np.where(d1 == 0, limit, raw)
    raw = np.where(degenerate, 2.0, raw)
    return raw, degenerate


def _region2_raw(points, a, b, radius, concave):
    """Row-wise Region2 formula; ``concave`` selects the inverted branch test."""
    n, dim = points.shape
    a, b = (np.broadcast_to(v, (n, dim)) for v in (a, b))
    chord = b - a
    u = chord / _norm(chord)[:, None]
    rel = points - a
    along = np.einsum("ij,ij->i", rel, u)
    d = _norm(rel - along[:, None] * u)
    # O' is the centre pushed out by d along the chord normal, so the
    # angle A->O' against AB has tangent d / R.
    alpha = np.arctan2(d, along)
    beta = np.arctan2(d, radius)
    d1 = _norm(rel)
    d2 = _norm(points - b)
    off = d / (2.0 * radius)
    side = 2.0 - off - (np.pi / 2 - alpha) / (np.pi - 2.0 * beta)
    with np.errstate(divide="ignore", invalid="ignore"):
        centre = 1.5 - off + np.where(beta > 0, (beta - alpha) / (2.0 * beta), 0.0)
    use_side = np.where(concave, d1 >= d2, d1 < d2)
    return np.where(use_side, side, centre)


def _cluster_region2(points, c: Cluster, curvature: CurvatureClass | None = None):
    g = c.geometry
    curvature = c.curvature if curvature is None else curvature
    return _region2_raw(points, g.anchor_a, g.anchor_b, g.radius, curvature is CurvatureClass.CONCAVE)


def _grade(raw, region: RegionLabel, degenerate=False) -> Grade:
    lo, hi = region.interval
    return Grade(float(np.clip(raw, lo, hi)), region, float(raw), bool(degenerate))


def score_region1_convex(D, c: Cluster) -> Grade:
    """Optimal-region grade of ``D`` on a convex segment.

    The length of the chord-like segment from A through D to the curve is
    approximated by scaling ``|AB|`` with the ratio of the angles that AD
    and AB make with the tangent at A. Solutions close to A or close to the
    far end of that segment score near 3, the middle scores near 2.
    A tangent parallel to the chord gives a degenerate grade of 2.
    """
    D = as_vector(D, dims=(2,))
    raw, degen = _region1_convex_raw(D[None, :], c.geometry.anchor_a, c.geometry.anchor_b, c.tangent_a)
    return _grade(raw[0], RegionLabel.REGION1, degen[0])


def score_region2(E, c: Cluster, curvature: CurvatureClass | None = None) -> Grade:
    """Sub-optimal-region grade of ``E``, clamped to ``[1, 2]``.

    The grade drops with the distance ``d`` of E from the chord AB and,
    along the chord-parallel line through E, with closeness to the point
    O' above the ball centre (convex and linear segments) or with distance
    from it (concave segments). Works in 3D within the plane through A, B
    and E.
    """
    E = as_vector(E)
    raw = _cluster_region2(E[None, :], c, curvature)[0]
    return _grade(raw, RegionLabel.REGION2)


def score_region1_concave(D, c: Cluster) -> Grade:
    """Optimal-region grade on a concave segment: the Region2 score plus one."""
    D = as_vector(D, dims=(2,))
    raw = _cluster_region2(D[None, :], c, CurvatureClass.CONCAVE)[0] + 1.0
    return _grade(raw, RegionLabel.REGION1)


def _region3_values(points: np.ndarray, ref: ReferenceSet) -> np.ndarray:
    if not len(points):
        return np.empty(0)
    dist = min_distances(points, ref.points)
    lo, hi = dist.min(), dist.max()
    if hi == lo:
        return np.full(len(points), 0.5)
    return 1.0 - (dist - lo) / (hi - lo)


def score_region3(unclustered, ref: ReferenceSet) -> list[Grade]:
    """Grades for solutions outside every ball.

    Each solution's distance to its nearest reference point is min-max
    normalised over the list and inverted, so the closest scores 1 and the
    farthest 0. If all distances are equal every grade is 0.5.
    """
    if ref is None or len(ref) == 0:
        raise DomainError("reference set is empty")
    pts = as_points(unclustered)
    vals = _region3_values(pts, ref)
    return [Grade(float(v), RegionLabel.REGION3, float(v)) for v in vals]


def grade_population(part: Partition, ref: ReferenceSet, d_objectives: int | None = None) -> GradedPopulation:
    """Grade every solution of a partition.

    In 2D clustered solutions are routed through :func:`classify_region`
    to the on-front, Region1 or Region2 rules. In 3D there is no Region1
    band and every clustered solution is scored with the Region2 rule.
    Unclustered solutions get Region3 grades.
    """
    pts = part.points
    dim = ref.dim if d_objectives is None else int(d_objectives)
    if dim not in (2, 3):
        raise DomainError(f"objective dimension must be 2 or 3, got {dim}")
    if ref.dim != dim or (len(pts) and pts.shape[1] != dim):
        raise DomainError(f"dimension mismatch: population {pts.shape[1]}D, reference {ref.dim}D, requested {dim}D")

    n = len(pts)
    raw = np.zeros(n)
    codes = np.full(n, _R3, dtype=int)
    degenerate = np.zeros(n, dtype=bool)
    cluster_index = np.full(n, -1, dtype=int)

    cluster_index[:] = part.assignment
    idx = np.flatnonzero(cluster_index >= 0)
    if len(idx):
        t = _table(part.clusters)
        k = cluster_index[idx]
        members = pts[idx]
        sub = _region_codes(members, t, k, ref) if dim == 2 else np.full(len(idx), _R2, dtype=int)
        r = np.full(len(idx), 3.0)
        deg = np.zeros(len(idx), dtype=bool)

        m1 = np.flatnonzero(sub == _R1)
        if len(m1):
            km = k[m1]
            convex = t.convex[km]
            cv, cc = m1[convex], m1[~convex]
            if len(cv):
                kc = k[cv]
                r[cv], deg[cv] = _region1_convex_raw(members[cv], t.a[kc], t.b[kc], t.tangent_a[kc])
            if len(cc):
                kc = k[cc]
                r[cc] = _region2_raw(members[cc], t.a[kc], t.b[kc], t.radius[kc], True) + 1.0
        m2 = np.flatnonzero(sub == _R2)
        if len(m2):
            kc = k[m2]
            r[m2] = _region2_raw(members[m2], t.a[kc], t.b[kc], t.radius[kc], t.concave[kc])

        codes[idx] = sub
        raw[idx] = r
        degenerate[idx] = deg

    u = part.unclustered
    raw[u] = _region3_values(pts[u], ref)

    lo = np.array([INTERVALS[label][0] for label in LABELS])[codes]
    hi = np.array([INTERVALS[label][1] for label in LABELS])[codes]
    values = np.clip(raw, lo, hi)
    return GradedPopulation(pts, values, raw, codes, cluster_index, degenerate, len(part.clusters))
