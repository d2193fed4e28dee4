"""
Hyperbolic geometry of the unit disc and the right half-plane.

Points are plain complex numbers, validated at the API boundary. Distances
are the hyperbolic distances normalized so that the metric has curvature -4,
i.e. k(z, w) = 1/2 log((1 + r)/(1 - r)) with r the pseudo-hyperbolic distance.

Everything that may be evaluated very close to the boundary (orbits at large
times) also has a log-polar entry point that never forms the point itself.
"""

import cmath
import logging
import math
from dataclasses import dataclass

from koenigs.config import koenigs_config
from koenigs.exceptions import DomainError, PoleError

logger = logging.getLogger(__name__)

LOG2 = math.log(2.0)
LOG4 = math.log(4.0)


def ensure_disc_point(z: complex, name: str = "z") -> complex:
    """Reject points outside the open unit disc"""
    z = complex(z)
    if not (cmath.isfinite(z) and abs(z) < 1.0):
        raise DomainError(f"{name}={z} is not in the unit disc")
    return z


def ensure_half_plane_point(w: complex, name: str = "w") -> complex:
    """Reject points outside the open right half-plane"""
    w = complex(w)
    if not (cmath.isfinite(w) and w.real > 0.0):
        raise DomainError(f"{name}={w} is not in the right half-plane")
    return w


def ensure_boundary_point(tau: complex) -> complex:
    """Reject points off the unit circle (tolerance BOUNDARY_TOL)"""
    tau = complex(tau)
    if not cmath.isfinite(tau) or abs(abs(tau) - 1.0) > koenigs_config.BOUNDARY_TOL:
        raise DomainError(f"tau={tau} is not on the unit circle")
    return tau


def _distance_from_pseudo(r: float, log_one_minus_r_sq: float) -> float:
    """1/2 log((1+r)/(1-r)) with 1 - r^2 supplied separately in log form"""
    if r < koenigs_config.DISTANCE_ZERO_CUTOFF:
        return 0.0
    return math.log1p(r) - 0.5 * log_one_minus_r_sq


def mobius_theta(w: complex, z: complex) -> complex:
    """
    Disc automorphism exchanging w and 0, evaluated at z.

    Args:
        w: Point of the disc sent to 0
        z: Evaluation point

    Returns:
        (w - z) / (1 - conj(w) z)

    Example:
        >>> mobius_theta(0.5, -0.5)
        (0.8+0j)
    """
    w = ensure_disc_point(w, "w")
    z = ensure_disc_point(z, "z")
    return (w - z) / (1.0 - w.conjugate() * z)


def dist_disc(z: complex, w: complex) -> float:
    """
    Hyperbolic distance in the unit disc.

    Example:
        >>> round(dist_disc(0, 0.5), 6)
        0.549306
    """
    z = ensure_disc_point(z, "z")
    w = ensure_disc_point(w, "w")

    denominator = abs(1.0 - w.conjugate() * z)
    r = abs(w - z) / denominator
    if r < koenigs_config.DISTANCE_ZERO_CUTOFF:
        return 0.0

    # 1 - r^2 without cancellation
    one_minus_r_sq = (1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2) / denominator**2
    return _distance_from_pseudo(r, math.log(one_minus_r_sq))


def dist_halfplane(w1: complex, w2: complex) -> float:
    """
    Hyperbolic distance in the right half-plane.

    Example:
        >>> round(dist_halfplane(1, 4), 6)
        0.693147
    """
    w1 = ensure_half_plane_point(w1, "w1")
    w2 = ensure_half_plane_point(w2, "w2")

    denominator = abs(w1 + w2.conjugate())
    rho = abs(w1 - w2) / denominator
    if rho < koenigs_config.DISTANCE_ZERO_CUTOFF:
        return 0.0

    log_one_minus = (
        LOG4 + math.log(w1.real) + math.log(w2.real) - 2.0 * math.log(denominator)
    )
    return _distance_from_pseudo(rho, log_one_minus)


def dist_halfplane_polar(
    log_rho1: float, theta1: float, log_rho2: float, theta2: float
) -> float:
    """
    Half-plane distance between log_rho1 + i theta1 and log_rho2 + i theta2 in log-polar form.

    Both angles must lie in (-pi/2, pi/2). The moduli may be far outside
    the range of double precision.
    """
    if not (abs(theta1) < math.pi / 2 and abs(theta2) < math.pi / 2):
        raise DomainError(f"Angles {theta1}, {theta2} are not in (-pi/2, pi/2)")

    if log_rho1 < log_rho2:
        log_rho1, theta1, log_rho2, theta2 = log_rho2, theta2, log_rho1, theta1

    # Scale the larger point onto the unit circle; the distance is dilation invariant
    log_ratio = log_rho2 - log_rho1
    r = math.exp(log_ratio)
    a = cmath.exp(1j * theta1)
    b = r * cmath.exp(1j * theta2)

    denominator = abs(a + b.conjugate())
    rho = abs(a - b) / denominator
    if rho < koenigs_config.DISTANCE_ZERO_CUTOFF:
        return 0.0

    log_one_minus = (
        LOG4
        + math.log(math.cos(theta1))
        + log_ratio
        + math.log(math.cos(theta2))
        - 2.0 * math.log(denominator)
    )
    return _distance_from_pseudo(rho, log_one_minus)


def tangential_from_angle(theta: float) -> float:
    """
    Distance from rho e^{i theta} to the positive real axis.

    Equals 1/2 log((1 + |sin theta|) / cos theta) and does not depend on rho.
    """
    if not abs(theta) < math.pi / 2:
        raise DomainError(f"theta={theta} is not in (-pi/2, pi/2)")
    return 0.5 * (math.log1p(abs(math.sin(theta))) - math.log(math.cos(theta)))


def cayley(tau: complex, z: complex) -> complex:
    """
    Cayley transform C_tau(z) = (tau + z)/(tau - z) from the disc onto the right half-plane.

    Raises:
        PoleError: If z equals tau
    """
    tau = ensure_boundary_point(tau)
    z = complex(z)
    if z == tau:
        raise PoleError(f"Cayley transform has a pole at z={tau}")
    z = ensure_disc_point(z, "z")
    return (tau + z) / (tau - z)


def cayley_inv(tau: complex, w: complex) -> complex:
    """Inverse Cayley transform tau (w - 1)/(w + 1)"""
    tau = ensure_boundary_point(tau)
    w = ensure_half_plane_point(w)
    return tau * (w - 1.0) / (w + 1.0)


@dataclass(frozen=True)
class Horocycle:
    """
    Horocycle E(tau, R) = {z : |tau - z|^2 < R (1 - |z|^2)}.

    In Euclidean terms the open disc of radius R/(R+1) internally tangent
    to the unit circle at tau.
    """

    tau: complex
    radius: float

    def __post_init__(self) -> None:
        ensure_boundary_point(self.tau)
        if not self.radius > 0:
            raise DomainError(f"Horocycle radius must be positive, got {self.radius}")

    @property
    def euclidean_radius(self) -> float:
        return self.radius / (self.radius + 1.0)

    @property
    def euclidean_center(self) -> complex:
        return complex(self.tau) / (self.radius + 1.0)

    def contains(self, z: complex) -> bool:
        return horocycle_contains(self, z)


@dataclass(frozen=True)
class StolzRegion:
    """Stolz angle S(tau, R) = {z : |tau - z| < R (1 - |z|)}, R > 1"""

    tau: complex
    radius: float

    def __post_init__(self) -> None:
        ensure_boundary_point(self.tau)
        if not self.radius > 1:
            raise DomainError(f"Stolz region needs R > 1, got {self.radius}")

    def contains(self, z: complex) -> bool:
        return stolz_contains(self, z)

    def contains_log(self, log_dist_to_tau: float, log_one_minus_modulus: float) -> bool:
        """Membership from log|tau - z| and log(1 - |z|)"""
        return log_dist_to_tau < math.log(self.radius) + log_one_minus_modulus


def horocycle_contains(h: Horocycle, z: complex) -> bool:
    """
    Membership in a horocycle.

    Example:
        >>> horocycle_contains(Horocycle(1, 1.0), 0.6)
        True
    """
    z = ensure_disc_point(z)
    return abs(h.tau - z) ** 2 < h.radius * (1.0 - abs(z) ** 2)


def stolz_contains(s: StolzRegion, z: complex) -> bool:
    """Membership in a Stolz region"""
    z = ensure_disc_point(z)
    return abs(s.tau - z) < s.radius * (1.0 - abs(z))


def project_to_diameter(tau: complex, z: complex) -> complex:
    """
    Closest point to z on the diameter (-tau, tau).

    Computed as C_tau^{-1}(|C_tau(z)|), the closed form of the
    minimization over the positive real axis of the half-plane.
    """
    w = cayley(tau, z)
    return cayley_inv(tau, abs(w))


def _log_abs_w_plus_one(log_rho: float, theta: float) -> float:
    if log_rho >= 0.0:
        return log_rho + math.log(abs(cmath.exp(1j * theta) + math.exp(-log_rho)))
    return math.log(abs(math.exp(log_rho) * cmath.exp(1j * theta) + 1.0))


def _log_abs_w_minus_one(log_rho: float, theta: float) -> float:
    if log_rho >= 0.0:
        return log_rho + math.log(abs(cmath.exp(1j * theta) - math.exp(-log_rho)))
    return math.log(abs(math.exp(log_rho) * cmath.exp(1j * theta) - 1.0))


def disc_log_quantities(log_rho: float, theta: float) -> tuple[float, float]:
    """
    Euclidean boundary quantities of z = C_1^{-1}(rho e^{i theta}) without forming z.

    Args:
        log_rho: log of the half-plane modulus
        theta: half-plane argument in (-pi/2, pi/2)

    Returns:
        (log|1 - z|, log(1 - |z|))
    """
    if not abs(theta) < math.pi / 2:
        raise DomainError(f"theta={theta} is not in (-pi/2, pi/2)")

    log_plus = _log_abs_w_plus_one(log_rho, theta)
    log_dist_to_tau = LOG2 - log_plus

    log_one_minus_sq = LOG4 + log_rho + math.log(math.cos(theta)) - 2.0 * log_plus
    # |w - 1| may vanish at w = 1
    if log_rho == 0.0 and theta == 0.0:
        modulus = 0.0
    else:
        modulus = math.exp(_log_abs_w_minus_one(log_rho, theta) - log_plus)
    log_one_minus_modulus = log_one_minus_sq - math.log1p(modulus)

    return log_dist_to_tau, log_one_minus_modulus
