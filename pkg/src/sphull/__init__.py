"""Convex hulls of random points on the unit sphere: exact expectations for
the intrinsic volumes and edge lengths, a deterministic Monte Carlo harness,
and a small CLI (``sphull``).
"""

from .analytic import (
    BALL_IV,
    DomainError,
    Ellipsoid,
    VirtualModel,
    bessel_i,
    bessel_i_scaled,
    deficiency,
    deficiency_ratio_limits,
    ellipsoid_area,
    ellipsoid_volume,
    ellipsoid_width,
    expected_edge_length_poisson,
    expected_edge_length_uniform,
    expected_iv_ellipsoid,
    expected_iv_poisson,
    expected_iv_symmetric,
    expected_iv_uniform,
    expected_min_distance,
    expected_min_spherical,
    incomplete_elliptic_e,
    incomplete_elliptic_f,
    min_distance_moment,
    model_quantities,
    moment_curve,
    predict_from_width,
    virtual_model,
)
from .experiments import (
    ExperimentConfig,
    SummaryStats,
    ZReport,
    chord_cdf_test,
    deficiency_table,
    facet_probability_check,
    min_distance_experiment,
    run,
    shape_size_independence,
)
from .geometry import (
    ConvexPolytope3,
    DegenerateInput,
    GeometryError,
    PolytopeMetrics,
    convex_hull,
    mean_width,
    measure,
    surface_area,
    total_edge_length,
    volume,
)
from .sampling import (
    ProcessSpec,
    RandomStream,
    sample_poisson_sphere,
    sample_symmetric,
    sample_uniform_sphere,
)

__version__ = "1.0.0"

__all__ = [
    "BALL_IV", "ConvexPolytope3", "DegenerateInput", "DomainError",
    "Ellipsoid", "ExperimentConfig", "GeometryError", "PolytopeMetrics",
    "ProcessSpec", "RandomStream", "SummaryStats", "VirtualModel", "ZReport",
    "bessel_i", "bessel_i_scaled", "chord_cdf_test", "convex_hull",
    "deficiency", "deficiency_ratio_limits", "deficiency_table",
    "ellipsoid_area", "ellipsoid_volume", "ellipsoid_width",
    "expected_edge_length_poisson", "expected_edge_length_uniform",
    "expected_iv_ellipsoid", "expected_iv_poisson", "expected_iv_symmetric",
    "expected_iv_uniform", "expected_min_distance", "expected_min_spherical",
    "facet_probability_check", "incomplete_elliptic_e",
    "incomplete_elliptic_f", "mean_width", "measure",
    "min_distance_experiment", "min_distance_moment", "model_quantities",
    "moment_curve", "predict_from_width", "run", "sample_poisson_sphere",
    "sample_symmetric", "sample_uniform_sphere", "shape_size_independence",
    "surface_area", "total_edge_length", "virtual_model", "volume",
]
