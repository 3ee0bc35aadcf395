"""Equidistant-probe case study.

Six probe solutions are placed on a circle around the first reference
point, with a radius below half the gap to its nearest neighbour. By the
triangle inequality that reference point then stays the nearest one for
every probe, so all probes have the same distance to the reference set
and a distance-to-reference indicator cannot tell them apart. The probes
sweep from just above the front, through the band under the chord, to
above the chord, so the regional grade should fall monotonically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rmf.clustering import default_pairs
from rmf.errors import DomainError
from rmf.fronts import FrontShape, FrontSpec, generate_front
from rmf.geometry import ReferenceSet, angle_between, estimate_tangent, min_distances
from rmf.metrics import EvaluationReport, evaluate
from rmf.regions import RegionLabel

#: Probe radius as a fraction of the gap from the anchor to its nearest
#: neighbour; must stay below 0.5.
RADIUS_FRACTION = 0.4
EQUAL_DISTANCE_TOL = 1e-9


@dataclass
class CaseStudy:
    reference: ReferenceSet
    probes: np.ndarray
    radius: float
    igd_contributions: np.ndarray
    report: EvaluationReport

    @property
    def grades(self) -> np.ndarray:
        return self.report.graded.values

    @property
    def regions(self) -> list[RegionLabel]:
        return self.report.graded.regions


def _rotate(v, theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def equidistant_probes(ref: ReferenceSet, n_band: int = 3, n_above: int = 3,
                       radius_fraction: float = RADIUS_FRACTION) -> tuple[np.ndarray, float]:
    """Probe points around ``ref[0]``, ordered by increasing departure from the front.

    The first ``n_band`` probes fan out from the tangent at the anchor
    towards the chord of the first cluster; the remaining ``n_above``
    continue past the chord while staying inside the cluster ball.
    """
    if ref.dim != 2:
        raise DomainError("the case study needs a 2D reference set")
    if not 0 < radius_fraction < 0.5:
        raise DomainError("radius_fraction must lie in (0, 0.5)")
    i, j = default_pairs(len(ref))[0]
    a, b = ref[i], ref[j]
    gap = float(np.sqrt(((ref.points[1:] - a) ** 2).sum(axis=1)).min())
    r = radius_fraction * gap
    chord = b - a
    d = float(np.linalg.norm(chord))
    t = estimate_tangent(ref, i)
    band = angle_between(t, chord)
    turn = np.sign(t[0] * chord[1] - t[1] * chord[0]) or 1.0

    # Stay on the far-from-A side of the first grading branch so the grade
    # falls steadily across the band.
    reach = min(1.0, 2.0 * r / d)
    steps = [reach * k / (n_band + 1) * band for k in range(1, n_band + 1)]
    u = chord / d
    widest = float(np.arccos(min(1.0, r / d)))
    tilt = [k * widest / (4 * (n_above + 1)) for k in range(1, n_above + 1)]

    probes = [a + r * _rotate(t, turn * s) for s in steps]
    probes += [a + r * _rotate(u, turn * phi) for phi in tilt]
    return np.array(probes), r


def run_case_study(ref: ReferenceSet | None = None) -> CaseStudy:
    if ref is None:
        ref = generate_front(FrontSpec(FrontShape.CONVEX_SQRT, 101, (0.0, 1.0)))
    probes, r = equidistant_probes(ref)
    contributions = min_distances(probes, ref.points)
    report = evaluate(probes, ref)
    return CaseStudy(ref, probes, r, contributions, report)


def check_case_study(study: CaseStudy) -> list[str]:
    """Return the violated expectations, empty when the study holds."""
    problems = []
    c = study.igd_contributions
    if float(c.max() - c.min()) > EQUAL_DISTANCE_TOL:
        problems.append(f"IGD contributions differ by {c.max() - c.min():.3e}")
    g = study.grades
    for k in range(len(g) - 1):
        if not g[k] > g[k + 1]:
            problems.append(f"grade of probe {k + 1} ({g[k]:.6f}) is not above probe {k + 2} ({g[k + 1]:.6f})")
            break
    if not 2.0 <= g[0] <= 3.0:
        problems.append(f"first probe grade {g[0]:.6f} is outside [2, 3]")
    if not 1.0 <= g[-1] <= 2.0:
        problems.append(f"last probe grade {g[-1]:.6f} is outside [1, 2]")
    outside = int((study.report.graded.cluster_index < 0).sum())
    if outside:
        problems.append(f"{outside} probes fell outside every cluster")
    return problems
