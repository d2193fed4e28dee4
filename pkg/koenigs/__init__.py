"""
Speeds of convergence of non-elliptic semigroups of holomorphic self-maps
of the unit disc.

Basic usage:
    from koenigs import OmegaSemigroup, speeds_at

    model = OmegaSemigroup(alpha=2.0, mu=1.0)
    sample = speeds_at(model, 1e6)
    print(sample.v, sample.v_o, sample.v_T)

Domains and harmonic measure:
    from koenigs import HalfParabola, hm_wos, slope_classify

    verdict = slope_classify(HalfParabola(2.0, 1.0), 1 + 2j, 1e6, 40)
    estimate = hm_wos(HalfParabola(2.0, 1.0), 1 + 2j, n=20_000, seed=7)

Configuration comes from KOENIGS_* environment variables, see
``koenigs.config``.
"""

import logging

from koenigs.config import koenigs_config, KoenigsConfig
from koenigs.exceptions import (
    KoenigsError,
    DomainError,
    PoleError,
    BranchError,
    ConvergenceError,
    BracketError,
    PreconditionError,
    InconclusiveError,
)
from koenigs.hyperbolic_core import (
    dist_disc,
    dist_halfplane,
    dist_halfplane_polar,
    cayley,
    cayley_inv,
    mobius_theta,
    Horocycle,
    StolzRegion,
    horocycle_contains,
    stolz_contains,
    project_to_diameter,
)
from koenigs.conformal import (
    OmegaParams,
    PQState,
    phi_alpha,
    phi_alpha_inv,
    psi_alpha,
    psi_alpha_inv,
    pq_solve,
    boundary_correspondence,
    sector_koenigs,
    strip_koenigs,
    newton_invert,
)
from koenigs.domains import (
    StarlikeDomain,
    HalfPlaneRight,
    HalfPlaneLeft,
    VerticalStrip,
    Sector,
    HalfParabola,
    OmegaFamily,
    Polyline,
    Clipped,
    ModelKind,
    ModelType,
    SlopeKind,
    SlopeVerdict,
    contains,
    delta,
    quasi_geodesic_sigma,
    slope_classify,
    split_domain,
    classify_model,
    domain_from_json,
    domain_to_json,
)
from koenigs.semigroups import (
    SemigroupModel,
    OrbitPoint,
    ParabolicAutoPlus,
    ParabolicAutoMinus,
    HyperbolicGroup,
    SectorFamily,
    OmegaSemigroup,
    HalfParabolaSemigroup,
    ReducedModel,
    build_model,
    horocycle_reduce,
    orbit,
    verify_semigroup_law,
    verify_intertwining,
    hyperbolic_step,
)
from koenigs.speeds import (
    SpeedSample,
    speeds_at,
    speed_table,
    pythagoras_check,
    euclid_bounds_check,
    main_bound_gap,
    asymptotic_fit,
    gamma_sigma_check,
    vt_monotonicity_check,
    vo_monotonicity_check,
    stolz_check,
    rate_check,
    total_speed_floor,
    spectral_rate,
)
from koenigs.harmonic_measure import (
    HMEstimate,
    TangentialEstimate,
    hm_halfplane_ray,
    hm_wos,
    vt_via_hm,
)
from koenigs.suites import SuiteOptions, run_suite

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


__all__ = [
    # Configuration
    "koenigs_config",
    "KoenigsConfig",
    # Errors
    "KoenigsError",
    "DomainError",
    "PoleError",
    "BranchError",
    "ConvergenceError",
    "BracketError",
    "PreconditionError",
    "InconclusiveError",
    # Hyperbolic geometry
    "dist_disc",
    "dist_halfplane",
    "dist_halfplane_polar",
    "cayley",
    "cayley_inv",
    "mobius_theta",
    "Horocycle",
    "StolzRegion",
    "horocycle_contains",
    "stolz_contains",
    "project_to_diameter",
    # Conformal maps
    "OmegaParams",
    "PQState",
    "phi_alpha",
    "phi_alpha_inv",
    "psi_alpha",
    "psi_alpha_inv",
    "pq_solve",
    "boundary_correspondence",
    "sector_koenigs",
    "strip_koenigs",
    "newton_invert",
    # Domains
    "StarlikeDomain",
    "HalfPlaneRight",
    "HalfPlaneLeft",
    "VerticalStrip",
    "Sector",
    "HalfParabola",
    "OmegaFamily",
    "Polyline",
    "Clipped",
    "ModelKind",
    "ModelType",
    "SlopeKind",
    "SlopeVerdict",
    "contains",
    "delta",
    "quasi_geodesic_sigma",
    "slope_classify",
    "split_domain",
    "classify_model",
    "domain_from_json",
    "domain_to_json",
    # Semigroups
    "SemigroupModel",
    "OrbitPoint",
    "ParabolicAutoPlus",
    "ParabolicAutoMinus",
    "HyperbolicGroup",
    "SectorFamily",
    "OmegaSemigroup",
    "HalfParabolaSemigroup",
    "ReducedModel",
    "build_model",
    "horocycle_reduce",
    "orbit",
    "verify_semigroup_law",
    "verify_intertwining",
    "hyperbolic_step",
    # Speeds
    "SpeedSample",
    "speeds_at",
    "speed_table",
    "pythagoras_check",
    "euclid_bounds_check",
    "main_bound_gap",
    "asymptotic_fit",
    "gamma_sigma_check",
    "vt_monotonicity_check",
    "vo_monotonicity_check",
    "stolz_check",
    "rate_check",
    "total_speed_floor",
    "spectral_rate",
    # Harmonic measure
    "HMEstimate",
    "TangentialEstimate",
    "hm_halfplane_ray",
    "hm_wos",
    "vt_via_hm",
    # Verification
    "SuiteOptions",
    "run_suite",
]


__version__ = "1.0.0"
