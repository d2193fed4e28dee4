"""
Closed-form conformal maps used to build Koenigs functions.

- Phi_alpha(z) = i(-iz)^beta sends the half-strip S_{alpha,mu} onto Omega_{alpha,mu}
- Psi_alpha(z) = -i sin(-pi/2 + pi z/c - i pi/eta) sends the same half-strip onto
  the right half-plane
- sector and strip Koenigs maps of the disc
- a generic Newton inversion for maps without a closed-form inverse
"""

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from koenigs.config import koenigs_config
from koenigs.exceptions import BranchError, ConvergenceError, DomainError, PoleError
from koenigs.hyperbolic_core import cayley, cayley_inv, ensure_disc_point

logger = logging.getLogger(__name__)

ComplexMap = Callable[[complex], complex]


@dataclass(frozen=True)
class OmegaParams:
    """
    Parameters of the half-strip S_{alpha,mu} and its image Omega_{alpha,mu}.

    beta is the Hoelder conjugate of alpha, c the strip width and
    eta = tan(pi/(2 beta)) fixes the bottom side Im z = c/eta.
    """

    alpha: float
    mu: float

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise DomainError(f"alpha must exceed 1, got {self.alpha}")
        if not self.mu > 0:
            raise DomainError(f"mu must be positive, got {self.mu}")

    @property
    def beta(self) -> float:
        return self.alpha / (self.alpha - 1.0)

    @property
    def c(self) -> float:
        return 1.0 / (self.mu ** (1.0 / self.alpha) * self.beta)

    @property
    def eta(self) -> float:
        return math.tan(math.pi / (2.0 * self.beta))

    @property
    def bottom(self) -> float:
        """Height c/eta of the bottom side of the half-strip"""
        return self.c / self.eta

    def in_half_strip(self, z: complex) -> bool:
        return 0.0 < z.real < self.c and z.imag > self.bottom


@dataclass(frozen=True)
class PQState:
    """Solution of (Q - iP)^beta = t + y0 - i x0"""

    P: float
    Q: float
    t: float
    zeta0: complex

    @property
    def point(self) -> complex:
        return complex(self.P, self.Q)


@dataclass(frozen=True)
class SideImage:
    """Numerically observed image of one side of the half-strip under Psi_alpha"""

    side: str
    max_abs_real: float
    im_min: float
    im_max: float


def phi_alpha(params: OmegaParams, z: complex) -> complex:
    """
    Phi_alpha(z) = i(-iz)^beta on the principal branch.

    Raises:
        BranchError: If -iz lies on the negative real axis

    Example:
        >>> phi_alpha(OmegaParams(2.0, 1.0), 0.25 + 1j)
        (0.5+0.9375j)
    """
    u = -1j * complex(z)
    if u == 0:
        return 0j
    if u.imag == 0.0 and u.real < 0.0:
        raise BranchError(f"(-iz)^beta is evaluated on its cut at z={z}")
    return 1j * cmath.exp(params.beta * cmath.log(u))


def phi_alpha_inv(params: OmegaParams, zeta: complex) -> complex:
    """Phi_alpha^{-1}(zeta) = i(-i zeta)^{1/beta}"""
    u = -1j * complex(zeta)
    if u == 0:
        return 0j
    if u.imag == 0.0 and u.real < 0.0:
        raise BranchError(f"(-i zeta)^(1/beta) is evaluated on its cut at zeta={zeta}")
    return 1j * cmath.exp(cmath.log(u) / params.beta)


def phi_alpha_many(params: OmegaParams, z: np.ndarray) -> np.ndarray:
    """Vectorized Phi_alpha for points with Im z > 0 or Re z > 0"""
    u = -1j * np.asarray(z, dtype=np.complex128)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = 1j * np.exp(params.beta * np.log(u))
    return np.where(u == 0, 0j, out)


def _psi_raw(c: float, shift: float, z: complex) -> complex:
    return -1j * cmath.sin(-math.pi / 2 + math.pi * z / c - 1j * shift)


def psi_alpha(params: OmegaParams, z: complex) -> complex:
    """
    Psi_alpha(z) = -i sin(-pi/2 + pi z/c - i pi/eta), half-strip onto the right half-plane.

    Raises:
        DomainError: If z is not a strict interior point of the half-strip

    Example:
        >>> round(psi_alpha(OmegaParams(2.0, 1.0), 0.25 + 1j).real, 6)
        11.548739
    """
    z = complex(z)
    if not params.in_half_strip(z):
        raise DomainError(f"z={z} is not inside the half-strip S_alpha,mu")
    return _psi_raw(params.c, math.pi / params.eta, z)


def psi_alpha_inv(params: OmegaParams, w: complex) -> complex:
    """Closed-form inverse of psi_alpha on the right half-plane"""
    w = complex(w)
    if not w.real > 0:
        raise DomainError(f"w={w} is not in the right half-plane")
    a = cmath.asin(1j * w)
    return (params.c / math.pi) * (a + math.pi / 2 + 1j * math.pi / params.eta)


def pq_solve(params: OmegaParams, zeta0: complex, t: float) -> PQState:
    """
    Closed-form solution of the P/Q system.

    (Q - iP)^beta = t + y0 - i x0 is solved through its modulus and
    argument, so Phi_alpha(P + iQ) = zeta0 + it.

    Example:
        >>> state = pq_solve(OmegaParams(2.0, 1.0), 0.5 + 0.9375j, 0.0)
        >>> round(state.P, 12), round(state.Q, 12)
        (0.25, 1.0)
    """
    zeta0 = complex(zeta0)
    x0, y0 = zeta0.real, zeta0.imag
    if not x0 > 0:
        raise DomainError(f"pq_solve needs Re zeta0 > 0, got {zeta0}")
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")

    height = t + y0
    modulus = math.hypot(height, x0) ** (1.0 / params.beta)
    angle = math.atan2(x0, height) / params.beta

    return PQState(P=modulus * math.sin(angle), Q=modulus * math.cos(angle), t=t, zeta0=zeta0)


def gamma2(params: OmegaParams, s: np.ndarray) -> np.ndarray:
    """Image of the bottom side: Phi_alpha(s + ic/eta), s in [0, c]"""
    s = np.asarray(s, dtype=np.float64)
    return phi_alpha_many(params, s + 1j * params.bottom)


def gamma3(params: OmegaParams, T: np.ndarray) -> np.ndarray:
    """Image of the right side: Phi_alpha(c + iT), T >= c/eta"""
    T = np.asarray(T, dtype=np.float64)
    return phi_alpha_many(params, params.c + 1j * T)


def boundary_correspondence(params: OmegaParams, samples: int = 200) -> list[SideImage]:
    """
    Record where Psi_alpha sends each side of the half-strip.

    The closed formula is evaluated on the sides themselves. The observed
    orientation is: left side onto i[1, inf), bottom onto i[-1, 1] and right
    side onto -i[1, inf).
    """
    shift = math.pi / params.eta
    heights = params.bottom + params.c * np.geomspace(1e-6, 1e2, samples)
    widths = np.linspace(0.0, params.c, samples)

    sides = {
        "left": [0.0 + 1j * y for y in heights],
        "bottom": [x + 1j * params.bottom for x in widths],
        "right": [params.c + 1j * y for y in heights],
    }

    images = []
    for side, points in sides.items():
        values = np.array([_psi_raw(params.c, shift, p) for p in points])
        images.append(
            SideImage(
                side=side,
                max_abs_real=float(np.max(np.abs(values.real))),
                im_min=float(np.min(values.imag)),
                im_max=float(np.max(values.imag)),
            )
        )
        logger.debug(f"Psi side {side}: Im in [{images[-1].im_min:.6g}, {images[-1].im_max:.6g}]")

    return images


def sector_koenigs(theta: float, z: complex) -> complex:
    """
    Koenigs map of the disc onto the sector i{-theta < arg < 0}.

    F(z) = i e^{-i theta/2} C_1(z)^{theta/pi}.

    Example:
        >>> sector_koenigs(math.pi, 0)
        (1+0j)
    """
    _check_angle(theta)
    w = cayley(1, z)
    return 1j * cmath.exp(-0.5j * theta) * cmath.exp((theta / math.pi) * cmath.log(w))


def sector_koenigs_inv(theta: float, zeta: complex) -> complex:
    """Inverse of sector_koenigs"""
    _check_angle(theta)
    u = -1j * cmath.exp(0.5j * theta) * complex(zeta)
    if u == 0 or (u.imag == 0.0 and u.real < 0.0):
        raise BranchError(f"zeta={zeta} is outside the sector")
    w = cmath.exp((math.pi / theta) * cmath.log(u))
    return cayley_inv(1, w)


def _check_angle(theta: float) -> None:
    if not 0.0 < theta <= math.pi:
        raise DomainError(f"Sector opening must lie in (0, pi], got {theta}")


def strip_koenigs(lam: float, z: complex) -> complex:
    """
    Koenigs map of the disc onto the vertical strip 0 < Re < pi/lam.

    h(z) = (1/lam)(-i Log C_1(z) + pi/2).
    """
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    z = ensure_disc_point(z)
    w = cayley(1, z)
    if w == 0:
        raise PoleError(f"Strip map has a pole at z={z}")
    return (-1j * cmath.log(w) + math.pi / 2) / lam


def strip_koenigs_inv(lam: float, h: complex) -> complex:
    """Inverse of strip_koenigs"""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    h = complex(h)
    if not 0.0 < h.real < math.pi / lam:
        raise DomainError(f"h={h} is outside the strip 0 < Re < pi/lambda")
    return cayley_inv(1, cmath.exp(1j * (lam * h - math.pi / 2)))


@dataclass(frozen=True)
class ParabolaStripMap:
    """
    Exact maps for the half-parabola Pi_{2,m}.

    The half-strip {0 < Re z < c', Im z > 0}, c' = 1/(2 sqrt m), is sent onto
    Pi_{2,m} by -iz^2 + i/(4m) and onto the right half-plane by
    -i sin(pi z/c' - pi/2).
    """

    m: float

    def __post_init__(self) -> None:
        if not self.m > 0:
            raise DomainError(f"m must be positive, got {self.m}")

    @property
    def width(self) -> float:
        return 1.0 / (2.0 * math.sqrt(self.m))

    def to_parabola(self, z: complex) -> complex:
        z = complex(z)
        return -1j * z * z + 1j / (4.0 * self.m)

    def from_parabola(self, zeta: complex) -> complex:
        zeta = complex(zeta)
        if not zeta.real > 0:
            raise DomainError(f"zeta={zeta} is not in the half-parabola")
        return cmath.sqrt(1j * zeta + 1.0 / (4.0 * self.m))

    def to_half_plane(self, z: complex) -> complex:
        return _psi_raw(self.width, 0.0, complex(z))

    def from_half_plane(self, w: complex) -> complex:
        w = complex(w)
        if not w.real > 0:
            raise DomainError(f"w={w} is not in the right half-plane")
        return (self.width / math.pi) * (cmath.asin(1j * w) + math.pi / 2)


def parabola_strip_map(m: float) -> ParabolaStripMap:
    """Exact half-strip maps for Pi_{2,m}"""
    return ParabolaStripMap(m)


def _derivative(f: ComplexMap, z: complex, step: float) -> complex:
    h = step * (1.0 + abs(z))
    try:
        return (f(z + h) - f(z - h)) / (2.0 * h)
    except DomainError:
        # one-sided near the edge of the domain
        try:
            return (f(z + h) - f(z)) / h
        except DomainError:
            return (f(z) - f(z - h)) / h


def cauchy_riemann_residual(f: ComplexMap, z: complex, step: Optional[float] = None) -> float:
    """
    Relative Cauchy-Riemann defect |f_y - i f_x| / (1 + |f_x|) by central differences.
    """
    base = koenigs_config.NEWTON_STEP if step is None else step
    h = base * (1.0 + abs(z))
    fx = (f(z + h) - f(z - h)) / (2.0 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2.0 * h)
    return abs(fy - 1j * fx) / (1.0 + abs(fx))


def _newton_iterate(
    f: ComplexMap,
    w: complex,
    start: complex,
    tol: float,
    damping: float,
    best: list[tuple[float, complex]],
) -> complex:
    """
    One damped Newton run from ``start``.

    Stops once |f(z) - w| < tol (1 + |w|). The bound is relative, so tol
    means an absolute residual only for |w| near 0; large targets are
    resolved to the same number of significant digits. ``best`` is updated
    in place with the smallest residual seen.
    """
    cfg = koenigs_config
    target = tol * (1.0 + abs(w))
    z = start
    residual = math.inf

    for iteration in range(cfg.NEWTON_MAX_ITER):
        value = f(z)
        residual = abs(value - w)
        if residual < best[0][0]:
            best[0] = (residual, z)
        if residual < target:
            logger.debug(f"Newton converged in {iteration} iterations, residual {residual:.3e}")
            return z

        slope = _derivative(f, z, cfg.NEWTON_STEP)
        if slope == 0 or not cmath.isfinite(slope):
            raise ConvergenceError("Vanishing derivative in Newton inversion", residual, iteration)

        step = damping * (value - w) / slope
        # backtrack out of the map's domain
        for _ in range(60):
            try:
                f(z - step)
                break
            except DomainError:
                step *= 0.5
        z = z - step

    raise ConvergenceError(
        f"Newton inversion did not converge after {cfg.NEWTON_MAX_ITER} iterations "
        f"(residual {residual:.3e})",
        residual,
        cfg.NEWTON_MAX_ITER,
    )


def newton_invert(
    f: ComplexMap, w: complex, z_seed: complex, tol: Optional[float] = None
) -> complex:
    """
    Solve f(z) = w by Newton's method with a central-difference derivative.

    The residual target is relative: |f(z) - w| < tol (1 + |w|). After a
    failed run one more attempt restarts from the best iterate with a halved
    step.

    Args:
        f: Analytic map (raising DomainError outside its domain)
        w: Target value
        z_seed: Starting point, inside the basin of the solution
        tol: Residual tolerance (defaults to NEWTON_TOL)

    Returns:
        The solution z

    Raises:
        ConvergenceError: If both attempts fail; carries the last residual

    Example:
        >>> round(newton_invert(lambda z: cayley(1, z), 2, 0).real, 12)
        0.333333333333
    """
    target = koenigs_config.NEWTON_TOL if tol is None else tol
    w = complex(w)
    seed = complex(z_seed)
    best: list[tuple[float, complex]] = [(math.inf, seed)]

    for attempt in Retrying(
        stop=stop_after_attempt(2),
        retry=retry_if_exception_type(ConvergenceError),
        reraise=True,
    ):
        with attempt:
            retrying = attempt.retry_state.attempt_number > 1
            if retrying:
                logger.debug(f"Retrying Newton inversion from best iterate {best[0][1]}")
            start = best[0][1] if retrying else seed
            return _newton_iterate(f, w, start, target, 0.5 if retrying else 1.0, best)

    raise ConvergenceError("Newton inversion failed")  # pragma: no cover
