"""Vector, angle and curvature primitives over objective space.

Points are plain ``numpy`` arrays. A single objective vector has shape
``(d,)`` with ``d`` in {2, 3}; a batch of them has shape ``(n, d)``.
Fronts are minimised, so "below" a 2D front means non-dominated.
"""

from __future__ import annotations

import enum
import numpy as np

from rmf.errors import DomainError

#: Relative threshold on the mean second difference that separates a
#: curved segment from a straight one.
CURVATURE_EPS = 1e-6


class CurvatureClass(str, enum.Enum):
    CONVEX = "Convex"
    CONCAVE = "Concave"
    LINEAR = "Linear"


def as_vector(x, dims=(2, 3)) -> np.ndarray:
    """Validate a single objective vector and return it as a float array."""
    v = np.asarray(x, dtype=float)
    if v.ndim != 1:
        raise DomainError(f"objective vector must be one-dimensional, got shape {v.shape}")
    if dims is not None and v.shape[0] not in dims:
        raise DomainError(f"objective vector must have {' or '.join(map(str, dims))} components, got {v.shape[0]}")
    if not np.all(np.isfinite(v)):
        raise DomainError(f"objective vector has non-finite components: {v.tolist()}")
    return v


def as_points(x, dims=(2, 3)) -> np.ndarray:
    """Validate a batch of objective vectors, returning an ``(n, d)`` array.

    An empty input is allowed and comes back with shape ``(0, d)`` when the
    dimension can be inferred, otherwise ``(0, 2)``.
    """
    arr = np.asarray(x, dtype=float)
    if arr.size == 0:
        d = arr.shape[-1] if arr.ndim == 2 and arr.shape[-1] else 2
        return np.empty((0, d))
    if arr.ndim != 2:
        raise DomainError(f"expected an (n, d) array of objective vectors, got shape {arr.shape}")
    if dims is not None and arr.shape[1] not in dims:
        raise DomainError(f"objective vectors must have {' or '.join(map(str, dims))} components, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("objective vectors contain non-finite values")
    return arr


class ReferenceSet:
    """An ordered sample of the true Pareto front.

    Two-dimensional sets are sorted by the first objective and must be
    strictly increasing in it afterwards, which also rules out duplicates.
    Three-dimensional sets keep their input order, since clusters over
    them are defined by an explicit pairing list, and only exact duplicate
    points are rejected.

    The arrays exposed here are read-only.
    """

    def __init__(self, points):
        pts = as_points(points)
        if len(pts) == 0:
            raise DomainError("reference set is empty")
        if pts.shape[1] == 2:
            pts = pts[np.argsort(pts[:, 0], kind="stable")]
            if np.any(np.diff(pts[:, 0]) <= 0):
                raise DomainError("2D reference set must be strictly increasing in f1 (duplicate f1 found)")
        elif len(np.unique(pts, axis=0)) != len(pts):
            raise DomainError("reference set contains duplicate points")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        self._points = pts
        self._frontier = None
        self._tangents = None

    @property
    def points(self) -> np.ndarray:
        return self._points

    @property
    def dim(self) -> int:
        return self._points.shape[1]

    def __len__(self):
        return len(self._points)

    def __getitem__(self, i):
        return self._points[i]

    def __repr__(self):
        return f"ReferenceSet({len(self)} points, dim={self.dim})"

    def tangents(self) -> np.ndarray:
        """Unit tangent at every sample of a 2D front; see :func:`estimate_tangent`."""
        if self.dim != 2:
            raise DomainError("tangent estimation needs a 2D reference set")
        if len(self) < 2:
            raise DomainError("tangent estimation needs at least 2 reference points")
        if self._tangents is None:
            pts = self._points
            idx = np.arange(len(pts))
            t = pts[np.minimum(idx + 1, len(pts) - 1)] - pts[np.maximum(idx - 1, 0)]
            t = t / np.sqrt(t[:, 0] ** 2 + t[:, 1] ** 2)[:, None]
            t[t[:, 0] < 0] *= -1
            t.setflags(write=False)
            self._tangents = t
        return self._tangents

    def dominated(self, points) -> np.ndarray:
        """Boolean mask of which 2D ``points`` are weakly dominated by the polyline.

        A point is dominated when some point of the piecewise-linear front
        through the reference samples is no worse in both objectives. For a
        monotone front this is "on or above the curve".
        """
        if self.dim != 2:
            raise DomainError("dominance against the reference polyline is only defined in 2D")
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        xs, ys = self._points[:, 0], self._points[:, 1]
        if self._frontier is None:
            self._frontier = np.minimum.accumulate(ys)
        x = pts[:, 0]
        if len(xs) == 1:
            return (x >= xs[0]) & (pts[:, 1] >= ys[0])
        # Lowest f2 reachable by a polyline point with f1 <= x.
        seg = np.clip(np.searchsorted(xs, x, side="right") - 1, 0, len(xs) - 2)
        reach = np.minimum(self._frontier[seg], np.interp(x, xs, ys))
        return (x >= xs[0]) & (pts[:, 1] >= reach)


def angle_between(u, v) -> float:
    """Angle in radians, in ``[0, pi]``, between two nonzero direction vectors."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.shape != v.shape or u.ndim != 1:
        raise DomainError(f"direction vectors must share one dimension, got {u.shape} and {v.shape}")
    if not (np.any(u) and np.any(v)):
        raise DomainError("angle is undefined for a zero-length direction")
    return float(np.arctan2(_cross_norm(u, v), np.dot(u, v)))


def _cross_norm(u, v):
    if u.shape[-1] == 2:
        return np.abs(u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0])
    return np.linalg.norm(np.cross(u, v), axis=-1)


def angles_to(vectors: np.ndarray, direction: np.ndarray) -> np.ndarray:
    """Row-wise angle between each of ``vectors`` and a fixed ``direction``.

    Zero-length rows get an angle of 0 instead of raising, which is what the
    scoring formulas need when a solution sits exactly on an anchor.
    """
    vectors = np.atleast_2d(vectors)
    direction = np.broadcast_to(direction, vectors.shape)
    return np.arctan2(_cross_norm(vectors, direction), np.einsum("ij,ij->i", vectors, direction))


def estimate_tangent(ref: ReferenceSet, i: int) -> np.ndarray:
    """Unit tangent of a 2D reference front at sample ``i``.

    Central difference over the neighbours for interior samples and a
    one-sided difference at either end. The result points towards
    increasing f1.
    """
    tangents = ref.tangents()
    n = len(tangents)
    if not -n <= i < n:
        raise DomainError(f"reference index {i} out of range for {n} points")
    return tangents[i].copy()


def classify_curvature(ref: ReferenceSet, span: range) -> CurvatureClass:
    """Classify the front segment covered by ``span`` as convex, concave or linear.

    Uses the mean divided second difference of f2 over f1. Convex here
    means ``f2 = g(f1)`` with ``g'' > 0``, i.e. the front bulges towards the
    origin.
    """
    return classify_spans(ref, [span])[0]


def classify_spans(ref: ReferenceSet, spans) -> list[CurvatureClass]:
    """:func:`classify_curvature` for many spans, batched by span length."""
    if ref.dim != 2:
        raise DomainError("curvature classification needs a 2D reference set")
    n = len(ref)
    out: list[CurvatureClass | None] = [None] * len(spans)
    groups: dict[int, list[int]] = {}
    for k, span in enumerate(spans):
        if span.step != 1 or span.start < 0 or span.stop > n or len(span) < 3:
            raise DomainError(f"curvature span must cover at least 3 reference points, got {span}")
        groups.setdefault(len(span), []).append(k)
    pts = ref.points
    for length, ks in groups.items():
        rows = np.array([spans[k].start for k in ks])[:, None] + np.arange(length)
        x, y = pts[rows, 0], pts[rows, 1]
        slopes = np.diff(y, axis=1) / np.diff(x, axis=1)
        second = 2.0 * np.diff(slopes, axis=1) / (x[:, 2:] - x[:, :-2])
        mean = second.mean(axis=1)
        eps = CURVATURE_EPS * np.ptp(y, axis=1)
        for k, m, e in zip(ks, mean, eps):
            if m > e:
                out[k] = CurvatureClass.CONVEX
            elif m < -e:
                out[k] = CurvatureClass.CONCAVE
            else:
                out[k] = CurvatureClass.LINEAR
    return out


def squared_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``(len(a), len(b))`` matrix of squared Euclidean distances.

    Coordinates are accumulated one axis at a time in index order, so each
    entry carries the same rounding as a scalar loop would.
    """
    acc = np.zeros((len(a), len(b)))
    for k in range(a.shape[1]):
        diff = a[:, None, k] - b[None, :, k]
        acc += diff * diff
    return acc


def min_distances(points: np.ndarray, targets: np.ndarray, chunk: int = 4096) -> np.ndarray:
    """Distance from each of ``points`` to its nearest row of ``targets``."""
    out = np.empty(len(points))
    for start in range(0, len(points), chunk):
        block = points[start : start + chunk]
        out[start : start + chunk] = np.sqrt(squared_distances(block, targets).min(axis=1))
    return out


def polyline_distance(points: np.ndarray, polyline: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest point of an open polyline.

    ``polyline`` is either one ``(L, d)`` polyline shared by all points or an
    ``(n, L, d)`` stack holding a separate polyline per point. Repeated
    vertices are allowed and act as zero-length segments.
    """
    points = np.atleast_2d(points)
    lines = polyline if polyline.ndim == 3 else polyline[None, :, :]
    if lines.shape[1] == 1:
        return np.linalg.norm(points - lines[:, 0, :], axis=1)
    a = lines[:, :-1, :]
    seg = lines[:, 1:, :] - a
    seg_len2 = np.einsum("nsk,nsk->ns", seg, seg)
    rel = points[:, None, :] - a
    t = np.einsum("nsk,nsk->ns", rel, seg) / np.where(seg_len2 > 0, seg_len2, 1.0)
    t = np.clip(t, 0.0, 1.0)
    gap = rel - t[..., None] * seg
    return np.sqrt(np.einsum("nsk,nsk->ns", gap, gap).min(axis=1))


def points_in_polygon(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Even-odd containment test of 2D points against closed polygons.

    ``polygon`` lists the vertices once, the closing edge being implied. It
    is either one ``(V, 2)`` polygon or an ``(n, V, 2)`` stack with one
    polygon per point; repeated vertices are harmless.
    """
    points = np.atleast_2d(points)
    v0 = polygon if polygon.ndim == 3 else polygon[None, :, :]
    v1 = np.roll(v0, -1, axis=1)
    px, py = points[:, 0:1], points[:, 1:2]
    x0, y0, x1, y1 = v0[..., 0], v0[..., 1], v1[..., 0], v1[..., 1]
    crosses = (y0 <= py) != (y1 <= py)
    dy = np.where(y1 != y0, y1 - y0, 1.0)
    x_at = x0 + (py - y0) * (x1 - x0) / dy
    hits = crosses & (px < x_at)
    return (np.count_nonzero(hits, axis=1) % 2) == 1


def line_intersection(p, dp, q, dq) -> np.ndarray | None:
    """Intersection of the 2D lines ``p + s*dp`` and ``q + t*dq``, or None if parallel."""
    det = dp[0] * dq[1] - dp[1] * dq[0]
    scale = np.linalg.norm(dp) * np.linalg.norm(dq)
    if abs(det) <= 1e-12 * scale:
        return None
    w = np.asarray(q) - np.asarray(p)
    s = (w[0] * dq[1] - w[1] * dq[0]) / det
    return np.asarray(p) + s * np.asarray(dp)

