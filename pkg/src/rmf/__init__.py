"""Regionalized scoring of multimodal multi-objective solution sets."""

from rmf.clustering import Cluster, ClusterGeometry, Partition, build_clusters, cluster_geometry, default_pairs
from rmf.errors import DegeneratePairError, DomainError, ParseError
from rmf.fronts import FrontShape, FrontSpec, generate_front
from rmf.geometry import CurvatureClass, ReferenceSet, angle_between, classify_curvature, estimate_tangent
from rmf.metrics import (
    ComparisonResult,
    EvaluationReport,
    combined_score,
    convergence,
    diversity,
    evaluate,
    igd,
    local_report,
)
from rmf.regions import (
    Grade,
    GradedPopulation,
    RegionLabel,
    classify_region,
    grade_population,
    score_region1_concave,
    score_region1_convex,
    score_region2,
    score_region3,
)

__all__ = [
    "Cluster",
    "ClusterGeometry",
    "ComparisonResult",
    "CurvatureClass",
    "DegeneratePairError",
    "DomainError",
    "EvaluationReport",
    "FrontShape",
    "FrontSpec",
    "Grade",
    "GradedPopulation",
    "ParseError",
    "Partition",
    "ReferenceSet",
    "RegionLabel",
    "angle_between",
    "build_clusters",
    "classify_curvature",
    "classify_region",
    "cluster_geometry",
    "combined_score",
    "convergence",
    "default_pairs",
    "diversity",
    "estimate_tangent",
    "evaluate",
    "generate_front",
    "grade_population",
    "igd",
    "local_report",
    "score_region1_concave",
    "score_region1_convex",
    "score_region2",
    "score_region3",
]
