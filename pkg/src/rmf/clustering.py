"""Reference-pair ball clustering of a solution set.

Each cluster is the ball whose diameter joins two reference points. By
default the 2D front is tiled by the pairs ``(0, 2), (2, 4), ...`` so
neighbouring balls share an anchor; a solution goes to the first ball (in
reference order) that contains it, and whatever lands in no ball is left
unclustered.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from rmf.errors import DegeneratePairError, DomainError
from rmf.geometry import (
    CurvatureClass,
    ReferenceSet,
    as_points,
    as_vector,
    classify_spans,
    line_intersection,
    squared_distances,
)

#: Absolute slack on ball membership so that anchors, which sit exactly on
#: the sphere, are not lost to rounding in the midpoint.
MEMBERSHIP_TOL = 1e-12
#: Solutions processed per block when testing ball membership.
CHUNK = 4096

Pairing = Sequence[tuple[int, int]]


@dataclass(frozen=True)
class ClusterGeometry:
    anchor_a: np.ndarray
    anchor_b: np.ndarray
    center: np.ndarray
    radius: float
    span: range = range(0)


def cluster_geometry(a, b, span: range = range(0)) -> ClusterGeometry:
    """Ball with segment ``ab`` as its diameter."""
    a = as_vector(a)
    b = as_vector(b)
    if a.shape != b.shape:
        raise DomainError(f"anchors differ in dimension: {a.shape[0]} vs {b.shape[0]}")
    if np.array_equal(a, b):
        raise DegeneratePairError(f"cluster anchors coincide at {a.tolist()}")
    return ClusterGeometry(
        anchor_a=a,
        anchor_b=b,
        center=(a + b) / 2,
        radius=float(np.linalg.norm(a - b)) / 2,
        span=span,
    )


@dataclass(eq=False)
class Cluster:
    """One ball of the partition together with the front segment it covers.

    ``members`` holds indices into the population the partition was built
    from. ``band`` is the closed polygon bounding the optimal region of a
    curved 2D segment (None when the segment is linear or 3D).
    """

    geometry: ClusterGeometry
    curvature: CurvatureClass
    local_curve: np.ndarray
    members: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))
    tangent_a: np.ndarray | None = None
    tangent_b: np.ndarray | None = None
    band: np.ndarray | None = None
    reference: ReferenceSet | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(eq=False)
class Partition:
    points: np.ndarray
    clusters: list[Cluster]
    unclustered: np.ndarray
    reference: ReferenceSet = field(repr=False)

    @property
    def assignment(self) -> np.ndarray:
        """Cluster index for every solution, -1 for unclustered ones."""
        out = np.full(len(self.points), -1, dtype=int)
        for k, c in enumerate(self.clusters):
            out[c.members] = k
        return out

    def members_of(self, k: int) -> np.ndarray:
        return self.points[self.clusters[k].members]


def default_pairs(m: int) -> list[tuple[int, int]]:
    """Stride-2 tiling ``(0, 2), (2, 4), ...`` of ``m`` ordered reference points.

    When ``m`` is even the tiling stops one short of the last point, so an
    extra window ``(m - 3, m - 1)`` is appended to keep the tail covered.
    """
    if m < 3:
        raise DomainError(f"default pairing needs at least 3 reference points, got {m}")
    pairs = [(i, i + 2) for i in range(0, m - 2, 2)]
    if pairs[-1][1] != m - 1:
        pairs.append((m - 3, m - 1))
    return pairs


def _segment_band(curve, curvature, t_a, t_b):
    if curvature is CurvatureClass.CONVEX:
        return curve.copy()
    if curvature is CurvatureClass.CONCAVE:
        apex = line_intersection(curve[0], t_a, curve[-1], t_b)
        if apex is None:
            return None
        return np.vstack([curve, apex])
    return None


def _make_clusters(ref: ReferenceSet, pairs: list[tuple[int, int]]) -> list[Cluster]:
    for i, j in pairs:
        if i == j:
            raise DegeneratePairError(f"cluster anchors coincide at reference index {i}")
    pts = ref.points
    if ref.dim != 2:
        a, b = pts[[i for i, _ in pairs]], pts[[j for _, j in pairs]]
        return [
            Cluster(
                geometry=ClusterGeometry(pa, pb, (pa + pb) / 2, float(np.linalg.norm(pa - pb)) / 2),
                curvature=CurvatureClass.LINEAR,
                local_curve=np.vstack([pa, pb]),
                reference=ref,
            )
            for pa, pb in zip(a, b)
        ]
    lo = np.array([min(p) for p in pairs])
    hi = np.array([max(p) for p in pairs])
    a, b = pts[lo], pts[hi]
    centers = (a + b) / 2
    radii = np.sqrt(((a - b) ** 2).sum(axis=1)) / 2
    spans = [range(l, h + 1) for l, h in zip(lo.tolist(), hi.tolist())]
    curved = [k for k, s in enumerate(spans) if len(s) >= 3]
    curvatures = [CurvatureClass.LINEAR] * len(spans)
    for k, cls in zip(curved, classify_spans(ref, [spans[k] for k in curved])):
        curvatures[k] = cls
    tangents = ref.tangents()
    clusters = []
    for k, span in enumerate(spans):
        curve = pts[span.start : span.stop]
        t_a, t_b = tangents[span.start].copy(), tangents[span.stop - 1].copy()
        clusters.append(Cluster(
            geometry=ClusterGeometry(a[k], b[k], centers[k], float(radii[k]), span),
            curvature=curvatures[k],
            local_curve=curve,
            tangent_a=t_a,
            tangent_b=t_b,
            band=_segment_band(curve, curvatures[k], t_a, t_b),
            reference=ref,
        ))
    return clusters


def build_clusters(pop, ref: ReferenceSet, pairing: Pairing | None = None) -> Partition:
    """Partition ``pop`` into reference-pair balls plus an unclustered remainder.

    Args:
        pop: ``(n, d)`` solutions in objective space; may be empty.
        ref: the reference front.
        pairing: explicit ``(i, j)`` index pairs into ``ref``. ``None``
            selects the stride-2 tiling, which needs a 2D front.

    Raises:
        DomainError: too few reference points, a 3D front without an
            explicit pairing, out-of-range pair indices, or a population
            whose dimension differs from the front's.
    """
    pts = as_points(pop)
    if len(pts) and pts.shape[1] != ref.dim:
        raise DomainError(f"population is {pts.shape[1]}D but reference set is {ref.dim}D")
    if len(pts) == 0:
        pts = np.empty((0, ref.dim))

    if pairing is None:
        if ref.dim != 2:
            raise DomainError("3D reference sets need an explicit pairing")
        pairs = default_pairs(len(ref))
    else:
        pairs = [(int(i), int(j)) for i, j in pairing]
        if not pairs:
            raise DomainError("explicit pairing is empty")
        for i, j in pairs:
            if not (0 <= i < len(ref) and 0 <= j < len(ref)):
                raise DomainError(f"pair ({i}, {j}) is out of range for {len(ref)} reference points")

    clusters = _make_clusters(ref, pairs)
    if not len(pts):
        return Partition(pts, clusters, np.empty(0, dtype=int), ref)

    centers = np.array([c.geometry.center for c in clusters])
    limit = (np.array([c.geometry.radius for c in clusters]) + MEMBERSHIP_TOL)[None, :]
    label = np.empty(len(pts), dtype=int)
    for start in range(0, len(pts), CHUNK):
        block = pts[start : start + CHUNK]
        inside = np.sqrt(squared_distances(block, centers)) <= limit
        first = np.argmax(inside, axis=1)
        label[start : start + CHUNK] = np.where(inside[np.arange(len(block)), first], first, -1)
    order = np.argsort(label, kind="stable")
    bounds = np.searchsorted(label[order], np.arange(-1, len(clusters) + 1))
    for k, c in enumerate(clusters):
        c.members = order[bounds[k + 1] : bounds[k + 2]]
    return Partition(pts, clusters, order[bounds[0] : bounds[1]], ref)
