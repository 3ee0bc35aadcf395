"""Convergence, diversity, combined ranking score, local windows and IGD."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from rmf.clustering import Pairing, Partition, build_clusters
from rmf.errors import DomainError
from rmf.geometry import ReferenceSet, squared_distances
from rmf.regions import GradedPopulation, grade_population

#: Ideal mean grade of a cluster; every member on the front scores 3.
IDEAL_CLUSTER_MEAN = 3.0


@dataclass
class WindowStats:
    """Convergence and diversity over the clusters of one observation window.

    ``window`` is the ``(start_f1, end_f1)`` span, or None for the
    catch-all bucket of clusters that fall in no window. ``diversity`` is
    None when the window holds no cluster.
    """

    window: tuple[float, float] | None
    clusters: list[int]
    convergence: float
    diversity: float | None


@dataclass
class EvaluationReport:
    convergence: float
    diversity: float
    cluster_means: list[float]
    region_histogram: dict[str, int]
    local_windows: list[WindowStats] = field(default_factory=list)
    graded: GradedPopulation | None = field(default=None, repr=False)


@dataclass
class AlgorithmScore:
    name: str
    convergence: float
    diversity: float
    s1: float
    s2: float
    score: float


@dataclass
class ComparisonResult:
    """Per-algorithm scores in input order plus the ranking (best first)."""

    entries: list[AlgorithmScore]
    ranking: list[str]
    alpha: float = 0.5
    beta: float = 0.5

    def ranked(self) -> list[AlgorithmScore]:
        by_name = {e.name: e for e in self.entries}
        return [by_name[name] for name in self.ranking]


def convergence(g: GradedPopulation) -> float:
    """Sum of all grades. Larger is better; it grows with population size."""
    return float(math.fsum(g.values))


def cluster_means(g: GradedPopulation, n_clusters: int | None = None) -> list[float]:
    """Mean grade per cluster; a cluster with no members counts as 0."""
    n = g.n_clusters if n_clusters is None else n_clusters
    idx = g.cluster_index
    mask = idx >= 0
    sums = np.bincount(idx[mask], weights=g.values[mask], minlength=n)
    counts = np.bincount(idx[mask], minlength=n)
    means = np.divide(sums, counts, out=np.zeros(n), where=counts > 0)
    return [float(m) for m in means]


def _spread(means: Sequence[float], k: float) -> float:
    if not len(means):
        raise DomainError("diversity needs at least one cluster")
    return float(math.fsum((m - k) ** 2 for m in means) / len(means))


def diversity(g: GradedPopulation, part: Partition, k: float = IDEAL_CLUSTER_MEAN) -> float:
    """Mean squared gap between each cluster's mean grade and ``k``.

    Smaller is better; 0 means every cluster is populated with on-front
    solutions. Empty clusters count with mean 0 so that a missed part of the
    front is penalised.
    """
    if not part.clusters:
        raise DomainError("diversity needs at least one cluster")
    return _spread(cluster_means(g, len(part.clusters)), k)


def _normalise(values: np.ndarray, invert: bool = False) -> np.ndarray:
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.full(len(values), 0.5)
    if invert:
        return (hi - values) / (hi - lo)
    return (values - lo) / (hi - lo)


def combined_score(results: Sequence[tuple[str, float, float]], alpha: float = 0.5,
                   beta: float = 0.5) -> ComparisonResult:
    """Rank algorithms by a weighted sum of normalised convergence and diversity.

    Convergence is min-max normalised so the best gets 1; diversity is
    normalised inverted, since a smaller diversity value is better. When all
    algorithms share a value the normalised value is 0.5. Ties in the final
    score fall back to the higher normalised convergence, then input order.
    """
    if not results:
        raise DomainError("combined score needs at least one result")
    if alpha < 0 or beta < 0:
        raise DomainError(f"weights must be non-negative, got alpha={alpha}, beta={beta}")
    names = [r[0] for r in results]
    conv = np.array([float(r[1]) for r in results])
    div = np.array([float(r[2]) for r in results])
    s1 = _normalise(conv)
    s2 = _normalise(div, invert=True)
    score = alpha * s1 + beta * s2
    entries = [
        AlgorithmScore(name, float(c), float(d), float(a), float(b), float(s))
        for name, c, d, a, b, s in zip(names, conv, div, s1, s2, score)
    ]
    order = sorted(range(len(entries)), key=lambda i: (-score[i], -s1[i], i))
    return ComparisonResult(entries, [names[i] for i in order], float(alpha), float(beta))


def _f1(x) -> float:
    arr = np.asarray(x, dtype=float)
    return float(arr) if arr.ndim == 0 else float(arr[0])


def local_report(g: GradedPopulation, part: Partition, windows) -> list[WindowStats]:
    """Per-window convergence and diversity for a 2D partition.

    A cluster belongs to a window when its centre's f1 lies in the closed
    span ``[start_f1, end_f1]``. ``windows`` holds ``(start, end)`` pairs
    given either as objective vectors or directly as f1 values.
    """
    if not windows:
        raise DomainError("at least one observation window is required")
    if part.reference.dim != 2:
        raise DomainError("observation windows are only defined for 2D fronts")
    spans = []
    for start, end in windows:
        lo, hi = _f1(start), _f1(end)
        if lo > hi:
            raise DomainError(f"window start {lo} lies after its end {hi}")
        spans.append((lo, hi))

    means = cluster_means(g, len(part.clusters))
    centres = [c.geometry.center[0] for c in part.clusters]
    per_cluster = [math.fsum(g.values[g.cluster_index == k]) for k in range(len(part.clusters))]

    def stats(window, ks):
        conv = float(math.fsum(per_cluster[k] for k in ks))
        div = _spread([means[k] for k in ks], IDEAL_CLUSTER_MEAN) if ks else None
        return WindowStats(window, ks, conv, div)

    out = []
    covered = set()
    for lo, hi in spans:
        ks = [k for k, x in enumerate(centres) if lo <= x <= hi]
        covered.update(ks)
        out.append(stats((lo, hi), ks))
    rest = [k for k in range(len(part.clusters)) if k not in covered]
    if rest:
        out.append(stats(None, rest))
    return out


def igd(P, Pstar) -> float:
    """Inverted generational distance of ``P`` with respect to ``Pstar``.

    The mean, over reference points, of the Euclidean distance to the
    nearest solution. Works for objective or decision vectors of any
    dimension. Smaller is better.
    """
    sol = np.asarray(P.points if isinstance(P, ReferenceSet) else P, dtype=float)
    ref = np.asarray(Pstar.points if isinstance(Pstar, ReferenceSet) else Pstar, dtype=float)
    if sol.size == 0 or ref.size == 0:
        raise DomainError("IGD needs a non-empty solution set and reference set")
    sol = np.atleast_2d(sol)
    ref = np.atleast_2d(ref)
    if sol.shape[1] != ref.shape[1]:
        raise DomainError(f"dimension mismatch: solutions {sol.shape[1]}D, reference {ref.shape[1]}D")
    nearest = np.sqrt(squared_distances(ref, sol).min(axis=1))
    return math.fsum(nearest) / len(ref)


def evaluate(pop, ref: ReferenceSet, pairing: Pairing | None = None, windows=None) -> EvaluationReport:
    """Cluster, grade and aggregate one population against a reference front."""
    part = build_clusters(pop, ref, pairing)
    g = grade_population(part, ref, ref.dim)
    report = EvaluationReport(
        convergence=convergence(g),
        diversity=diversity(g, part),
        cluster_means=cluster_means(g, len(part.clusters)),
        region_histogram=g.histogram(),
        graded=g,
    )
    if windows:
        report.local_windows = local_report(g, part, windows)
    return report
