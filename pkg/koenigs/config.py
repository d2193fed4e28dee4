"""
Koenigs package configuration.
Centralized numerical settings for every module, overridable from the environment.
"""

import math
import os
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings


class KoenigsConfig(BaseSettings):
    """Main numerical configuration"""

    # Execution
    THREADS: int = Field(
        default=1,
        ge=1,
        description="Worker cap for walk chunks and per-grid-point sampling (KOENIGS_THREADS)"
    )

    LOG_LEVEL: str = Field(
        default="INFO",
        description="Log level used by the command line entry point"
    )

    # Hyperbolic geometry
    BOUNDARY_TOL: float = Field(
        default=1e-12,
        description="Tolerance for |tau| = 1 on boundary points"
    )

    DISTANCE_ZERO_CUTOFF: float = Field(
        default=1e-16,
        description="Pseudo-hyperbolic radius below which distances are reported as 0"
    )

    # Boundary distance machinery
    GOLDEN_SEEDS: int = Field(
        default=64,
        ge=8,
        description="Coarse grid size before golden-section refinement"
    )

    GOLDEN_TOL: float = Field(
        default=1e-10,
        description="Golden-section parameter tolerance for boundary distances"
    )

    # Newton inversion
    NEWTON_TOL: float = Field(
        default=1e-12,
        description="Relative residual target |f(z) - w| < tol * (1 + |w|)"
    )

    NEWTON_MAX_ITER: int = Field(
        default=100,
        description="Iteration cap for Newton inversion"
    )

    NEWTON_STEP: float = Field(
        default=1e-6,
        description="Central-difference step, scaled by (1 + |z|)"
    )

    # Walk-on-spheres
    WOS_MAX_STEPS: int = Field(
        default=100_000,
        description="Walk cap; walks still running are excluded"
    )

    WOS_ESCAPE_FACTOR: float = Field(
        default=1e6,
        description="Walks beyond factor * (1 + |z0|) are scored by the half-plane kernel"
    )

    WOS_MAX_EXCLUDED_FRACTION: float = Field(
        default=0.01,
        description="Estimates with more excluded walks than this are flagged invalid"
    )

    WOS_CHUNK_SIZE: int = Field(
        default=16_384,
        ge=1,
        description="Walks advanced together in one vectorized chunk"
    )

    # Slope classification
    SLOPE_RATIO_BOUND: float = Field(
        default=10.0,
        description="Non-tangential verdict requires delta ratio in [1/C, C]"
    )

    SLOPE_DRIFT_FLAT: float = Field(
        default=0.05,
        description="Max |d log r / d log t| for a non-tangential verdict"
    )

    SLOPE_DRIFT_DIVERGENT: float = Field(
        default=0.1,
        description="Min |d log r / d log t| for a tangential verdict"
    )

    SLOPE_DIVERGENCE_FLOOR: float = Field(
        default=100.0,
        description="Ratio at t_max needed for a tangential verdict"
    )

    # Grids and checks
    GRID_POINTS_PER_DECADE: int = Field(
        default=50,
        description="Default density of logarithmic t grids"
    )

    GRID_T_CAP: float = Field(
        default=1e8,
        description="Largest t used by default grids"
    )

    INEQUALITY_TOL: float = Field(
        default=1e-9,
        description="Slack added on top of exact inequality constants"
    )

    GAMMA_SIGMA_GRID: int = Field(
        default=200,
        description="Coarse log grid size for the quasi-geodesic infimum"
    )

    GAMMA_SIGMA_TOL: float = Field(
        default=1e-8,
        description="Refinement tolerance for the quasi-geodesic infimum"
    )

    model_config = {
        "env_prefix": "KOENIGS_",  # All env vars start with KOENIGS_
        "env_file": ".env",
        "env_file_encoding": "utf-8",
        "extra": "ignore"
    }

    @property
    def worker_count(self) -> int:
        """Effective worker count, bounded by the machine"""
        return max(1, min(self.THREADS, os.cpu_count() or 1))

    def golden_iterations(self, width: float, tol: Optional[float] = None) -> int:
        """
        Number of golden-section steps that shrink a bracket below tolerance.

        Args:
            width: Largest initial bracket width
            tol: Target width (defaults to GOLDEN_TOL)

        Returns:
            Iteration count, at least 1 and at most 200
        """
        target = tol if tol is not None else self.GOLDEN_TOL
        if width <= target:
            return 1
        ratio = (math.sqrt(5.0) - 1.0) / 2.0
        steps = math.ceil(math.log(target / width) / math.log(ratio))
        return max(1, min(200, steps))


# Singleton instance
koenigs_config = KoenigsConfig()
