"""Synthetic two-objective reference fronts."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from rmf.errors import DomainError
from rmf.geometry import ReferenceSet


class FrontShape(str, enum.Enum):
    CONVEX_SQRT = "ConvexSqrt"  # f2 = 1 - sqrt(f1), the MMF1-style front
    CONCAVE_QUAD = "ConcaveQuad"  # f2 = 1 - f1**2
    LINEAR = "Linear"  # f2 = 1 - f1


_CURVES = {
    FrontShape.CONVEX_SQRT: lambda x: 1.0 - np.sqrt(x),
    FrontShape.CONCAVE_QUAD: lambda x: 1.0 - x**2,
    FrontShape.LINEAR: lambda x: 1.0 - x,
}


@dataclass(frozen=True)
class FrontSpec:
    shape: FrontShape = FrontShape.CONVEX_SQRT
    n_points: int = 101
    f1_range: tuple[float, float] = (0.0, 1.0)


def front_value(shape: FrontShape | str, f1):
    """Exact f2 of the analytic front at ``f1``."""
    return _CURVES[FrontShape(shape)](np.asarray(f1, dtype=float))


def generate_front(spec: FrontSpec) -> ReferenceSet:
    """Sample ``spec.n_points`` equally spaced f1 values, endpoints included."""
    try:
        shape = FrontShape(spec.shape)
    except ValueError:
        raise DomainError(f"unknown front shape {spec.shape!r}") from None
    if spec.n_points < 3:
        raise DomainError(f"a front needs at least 3 points, got {spec.n_points}")
    lo, hi = (float(v) for v in spec.f1_range)
    if not (0.0 <= lo < hi):
        raise DomainError(f"f1 range must satisfy 0 <= lo < hi, got [{lo}, {hi}]")
    f1 = np.linspace(lo, hi, int(spec.n_points))
    return ReferenceSet(np.column_stack([f1, front_value(shape, f1)]))
