"""Means, variances, and clustering of orientations under molecular symmetry.

The heavy lifting lives in the compiled extension; this package re-exports
its surface.
"""

from ._core import (
    DegenerateMeanError,
    Group,
    ProblemTooLargeError,
    __version__,
    brute_force_rotations,
    dist_direction,
    dist_rotation,
    generate_benchmark_classes,
    kmeans,
    mean_variance_directions,
    mean_variance_rotations,
    quat_to_matrix,
    quotient_dist_direction,
    quotient_dist_rotation,
)

__all__ = [
    "DegenerateMeanError",
    "Group",
    "ProblemTooLargeError",
    "__version__",
    "brute_force_rotations",
    "dist_direction",
    "dist_rotation",
    "generate_benchmark_classes",
    "kmeans",
    "mean_variance_directions",
    "mean_variance_rotations",
    "quat_to_matrix",
    "quotient_dist_direction",
    "quotient_dist_rotation",
]
