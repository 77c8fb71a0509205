"""Hajlasz-Sobolev oscillation and embedding harness (C++ core)."""

from ._core import (
    AnalyticSpace,
    DiscreteSpace,
    StepFunction,
    appendix_plane_sample,
    canonical_gradient,
    cli,
    converse_probe,
    decreasing_rearrangement,
    embedding_report,
    grid_space,
    is_s_gradient,
    minimal_gradient,
    norm,
    oscillation_report,
    random_cloud,
    test_function,
)

__all__ = [
    "AnalyticSpace",
    "DiscreteSpace",
    "StepFunction",
    "appendix_plane_sample",
    "canonical_gradient",
    "cli",
    "converse_probe",
    "decreasing_rearrangement",
    "embedding_report",
    "grid_space",
    "is_s_gradient",
    "minimal_gradient",
    "norm",
    "oscillation_report",
    "random_cloud",
    "test_function",
]
