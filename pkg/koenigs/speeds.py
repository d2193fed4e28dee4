"""
Speeds of convergence and the checks built on them.

With psi_t(w0) = rho e^{i theta} the half-plane orbit point and 1 as the
reference point:

    v   = k(1, rho e^{i theta})         total speed
    v_o = k(1, rho) = |log rho| / 2      orthogonal speed
    v_T = k(rho e^{i theta}, rho)        tangential speed

All three are computed from log-polar data and stay exact at t = 1e8.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from koenigs.config import koenigs_config
from koenigs.domains import (
    HalfPlaneRight,
    ModelKind,
    StarlikeDomain,
    VerticalStrip,
    delta_many,
    nesting_shift,
)
from koenigs.exceptions import BracketError, PreconditionError
from koenigs.hyperbolic_core import (
    LOG2,
    StolzRegion,
    dist_halfplane_polar,
    tangential_from_angle,
)
from koenigs.semigroups import OmegaSemigroup, OrbitPoint, SemigroupModel

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SpeedSample:
    """Total, orthogonal and tangential speed at time t"""

    t: float
    v: float
    v_o: float
    v_T: float


def _speeds_from_orbit(point: OrbitPoint) -> SpeedSample:
    return SpeedSample(
        t=point.t,
        v=dist_halfplane_polar(0.0, 0.0, point.log_rho, point.theta),
        v_o=0.5 * abs(point.log_rho),
        v_T=tangential_from_angle(point.theta),
    )


def speeds_at(model: SemigroupModel, t: float) -> SpeedSample:
    """
    Speeds of the model at time t.

    Example:
        >>> from koenigs.semigroups import ParabolicAutoPlus
        >>> sample = speeds_at(ParabolicAutoPlus(), 1.0)
        >>> round(sample.v_o, 6), round(sample.v_T, 6)
        (0.173287, 0.440687)
    """
    return _speeds_from_orbit(model.orbit(float(t)))


def speed_table(model: SemigroupModel, ts: Iterable[float]) -> list[SpeedSample]:
    """Speeds on a grid, evaluated on up to THREADS workers in grid order"""
    grid = [float(t) for t in ts]
    workers = koenigs_config.worker_count
    if workers == 1 or len(grid) < 2:
        return [speeds_at(model, t) for t in grid]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: speeds_at(model, t), grid))


def pythagoras_check(sample: SpeedSample, tol: Optional[float] = None) -> bool:
    """v_o + v_T - log(2)/2 <= v <= v_o + v_T"""
    slack = koenigs_config.INEQUALITY_TOL if tol is None else tol
    total = sample.v_o + sample.v_T
    return total - 0.5 * LOG2 - slack <= sample.v <= total + slack


def tangential_bound_check(sample: SpeedSample, tol: Optional[float] = None) -> bool:
    """v_T <= v_o + 4 log 2"""
    slack = koenigs_config.INEQUALITY_TOL if tol is None else tol
    return sample.v_T <= sample.v_o + 4.0 * LOG2 + slack


def euclid_bounds_check(
    model: SemigroupModel, t: float, tol: Optional[float] = None
) -> tuple[bool, bool, bool]:
    """
    Compare the speeds with their Euclidean counterparts for z = phi_t(z0).

    Returns:
        (total, orthogonal, tangential) flags for

        |v - 1/2 log(1/(1-|z|))| <= 1/2 log 2
        |v_o - 1/2 log(1/|1-z|)| <= 1/2 log 2
        |v_T - 1/2 log(|1-z|/(1-|z|))| <= 3/2 log 2
    """
    slack = koenigs_config.INEQUALITY_TOL if tol is None else tol
    point = model.orbit(float(t))
    sample = _speeds_from_orbit(point)
    log_dist = point.log_dist_to_tau
    log_gap = point.log_one_minus_modulus

    total_ok = abs(sample.v + 0.5 * log_gap) <= 0.5 * LOG2 + slack
    ortho_ok = abs(sample.v_o + 0.5 * log_dist) <= 0.5 * LOG2 + slack
    tang_ok = abs(sample.v_T - 0.5 * (log_dist - log_gap)) <= 1.5 * LOG2 + slack
    return total_ok, ortho_ok, tang_ok


@dataclass(frozen=True)
class GapTrace:
    """Gap v_T(t) - scale * log t on a grid"""

    sup_gap: float
    trace: list[tuple[float, float]]

    @property
    def tail_gap(self) -> float:
        return self.trace[-1][1]

    def running_sup_stable_after(self) -> float:
        """First grid time after which the running sup no longer increases"""
        best = -math.inf
        stable_from = self.trace[0][0]
        for t, gap in self.trace:
            if gap > best:
                best = gap
                stable_from = t
        return stable_from


def _gap_trace(model: SemigroupModel, t_grid: Sequence[float], scale: float) -> GapTrace:
    ts = [float(t) for t in t_grid]
    if not ts:
        raise PreconditionError("Empty t grid")
    if min(ts) < 1.0:
        raise PreconditionError("Gap traces need t >= 1")
    trace = [(s.t, s.v_T - scale * math.log(s.t)) for s in speed_table(model, ts)]
    return GapTrace(sup_gap=max(g for _, g in trace), trace=trace)


def main_bound_gap(model: SemigroupModel, t_grid: Sequence[float]) -> GapTrace:
    """
    sup over the grid of v_T(t) - 1/2 log t for a parabolic model.

    Raises:
        PreconditionError: For hyperbolic models or grids reaching below t = 1
    """
    if not model.model_type.is_parabolic:
        raise PreconditionError(f"{model!r} is not parabolic")
    result = _gap_trace(model, t_grid, 0.5)
    logger.info(f"Main bound gap for {model!r}: sup {result.sup_gap:.6g}, tail {result.tail_gap:.6g}")
    return result


class Abscissa(str, Enum):
    LOG_T = "log-t"
    POWER = "power"


@dataclass(frozen=True)
class AsymptoticFit:
    slope: float
    offset: float
    max_residual: float
    t_window: tuple[float, float]


def asymptotic_fit(
    samples: Sequence[SpeedSample],
    abscissa: Abscissa = Abscissa.LOG_T,
    alpha: Optional[float] = None,
    quantity: str = "v_T",
) -> AsymptoticFit:
    """
    Least-squares line through the tail of a speed series.

    The window is [t_max/100, t_max]. With ``Abscissa.POWER`` the abscissa
    is t^{1 - 1/alpha}.

    Raises:
        PreconditionError: With fewer than 10 samples in the window
    """
    if not samples:
        raise PreconditionError("No samples to fit")
    if quantity not in ("v_T", "v_o", "v"):
        raise PreconditionError(f"Unknown speed {quantity!r}")

    t_max = max(s.t for s in samples)
    window = (t_max / 100.0, t_max)
    tail = [s for s in samples if window[0] <= s.t <= window[1]]
    if len(tail) < 10:
        raise PreconditionError(f"Fit window {window} holds only {len(tail)} samples")

    ts = np.array([s.t for s in tail])
    ys = np.array([getattr(s, quantity) for s in tail])
    if abscissa == Abscissa.LOG_T:
        xs = np.log(ts)
    else:
        if alpha is None or not alpha > 1:
            raise PreconditionError("Power abscissa needs alpha > 1")
        xs = ts ** (1.0 - 1.0 / alpha)

    design = np.column_stack([xs, np.ones_like(xs)])
    (slope, offset), *_ = np.linalg.lstsq(design, ys, rcond=None)
    residual = float(np.max(np.abs(design @ np.array([slope, offset]) - ys)))
    return AsymptoticFit(float(slope), float(offset), residual, window)


# ---------------------------------------------------------------------------
# Quasi-geodesic comparison
# ---------------------------------------------------------------------------


def _polar_in_half_plane(domain: StarlikeDomain, zeta: complex) -> tuple[float, float]:
    """Log-polar image of zeta under a conformal map of the domain onto the half-plane"""
    if isinstance(domain, VerticalStrip):
        lo, hi = domain.re_bounds()
        lam = math.pi / (hi - lo)
        x = zeta.real - lo
        return lam * zeta.imag, math.pi / 2 - lam * x
    lo, _ = domain.re_bounds()
    shifted = zeta - lo
    return math.log(abs(shifted)), math.atan2(shifted.imag, shifted.real)


def _exact_distance(domain: StarlikeDomain, a: complex, b: complex) -> float:
    la, ta = _polar_in_half_plane(domain, a)
    lb, tb = _polar_in_half_plane(domain, b)
    return dist_halfplane_polar(la, ta, lb, tb)


@dataclass(frozen=True)
class DeviationTrace:
    sup_dev: float
    trace: list[tuple[float, float]]


def _sigma_infimum(
    domain: StarlikeDomain, p: complex, t: float, widen: float
) -> float:
    cfg = koenigs_config
    target = p + 1j * t

    def distances(s: np.ndarray) -> np.ndarray:
        plus, minus = delta_many(domain, p, s)
        sigma = 0.5 * (plus - minus) + 1j * (p.imag + s)
        return np.array([_exact_distance(domain, target, z) for z in sigma])

    grid = np.concatenate(
        [[0.0], np.geomspace(1e-3 * (1.0 + t), 1e2 * widen * (1.0 + t), cfg.GAMMA_SIGMA_GRID - 1)]
    )
    values = distances(grid)
    best = int(np.argmin(values))
    if best == grid.size - 1:
        raise BracketError(f"Quasi-geodesic minimum at t={t} sits on the grid edge", float(values[best]))

    result = float(values[best])
    for k in np.argsort(values)[:3]:
        lo = grid[max(k - 1, 0)]
        hi = grid[min(k + 1, grid.size - 1)]
        if hi <= lo:
            continue
        refined = minimize_scalar(
            lambda s: float(distances(np.array([s]))[0]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": cfg.GAMMA_SIGMA_TOL},
        )
        result = min(result, float(refined.fun))
    return result


def gamma_sigma_check(model: SemigroupModel, t_grid: Sequence[float]) -> DeviationTrace:
    """
    sup over t of |v_T(t) - inf_s k_Omega(h(z0) + it, sigma(s))|.

    The Koenigs domain is translated so that the base point has real part 0
    before sigma is formed. Only domains with an exact distance (half-plane
    and vertical strip) are supported.
    """
    domain = model.koenigs_domain
    if not isinstance(domain, (HalfPlaneRight, VerticalStrip)) or domain.mirrored:
        raise PreconditionError("gamma-sigma needs a right half-plane or strip Koenigs domain")

    base = model.koenigs_half(model.base_half)
    shifted = domain.translated(-base.real)
    p = complex(0.0, base.imag)

    trace = []
    for t in (float(t) for t in t_grid):
        for attempt in Retrying(
            stop=stop_after_attempt(2),
            retry=retry_if_exception_type(BracketError),
            reraise=True,
        ):
            with attempt:
                widen = 100.0 ** (attempt.retry_state.attempt_number - 1)
                if widen > 1:
                    logger.debug(f"Widening quasi-geodesic grid at t={t}")
                infimum = 0.0 if t == 0 else _sigma_infimum(shifted, p, t, widen)
        trace.append((t, abs(speeds_at(model, t).v_T - infimum)))

    sup_dev = max(d for _, d in trace) if trace else 0.0
    logger.info(f"Quasi-geodesic deviation for {model!r}: {sup_dev:.6g}")
    return DeviationTrace(sup_dev=sup_dev, trace=trace)


# ---------------------------------------------------------------------------
# Monotonicity, Stolz and rate checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityResult:
    sup_diff: float
    shift: float
    trace: list[tuple[float, float]]


def _nested_shift(small: SemigroupModel, large: SemigroupModel) -> float:
    for model in (small, large):
        if model.model_type.kind != ModelKind.PARABOLIC_POSITIVE_STEP:
            raise PreconditionError(f"{model!r} is not a positive-step parabolic model")
        if not model.koenigs_domain.lies_in_right_halfplane():
            raise PreconditionError(f"Koenigs domain of {model!r} is not in the right half-plane")
    if small is large:
        return 0.0
    return nesting_shift(small.koenigs_domain, large.koenigs_domain)


def _difference(
    small: SemigroupModel, large: SemigroupModel, t_grid: Sequence[float], attr: str, sign: float
) -> MonotonicityResult:
    shift = _nested_shift(small, large)
    ts = [float(t) for t in t_grid]
    a = speed_table(small, ts)
    b = speed_table(large, ts)
    trace = [(x.t, sign * (getattr(x, attr) - getattr(y, attr))) for x, y in zip(a, b)]
    sup_diff = max(d for _, d in trace) if trace else 0.0
    return MonotonicityResult(sup_diff=sup_diff, shift=shift, trace=trace)


def vt_monotonicity_check(
    model_small: SemigroupModel, model_large: SemigroupModel, t_grid: Sequence[float]
) -> MonotonicityResult:
    """
    sup over the grid of v_T(small) - v_T(large) for nested Koenigs domains.

    Raises:
        PreconditionError: If the domains fail the sampled nesting test
    """
    return _difference(model_small, model_large, t_grid, "v_T", 1.0)


def vo_monotonicity_check(
    model_small: SemigroupModel, model_large: SemigroupModel, t_grid: Sequence[float]
) -> MonotonicityResult:
    """sup over the grid of v_o(large) - v_o(small) for nested Koenigs domains"""
    return _difference(model_small, model_large, t_grid, "v_o", -1.0)


@dataclass(frozen=True)
class StolzResult:
    radius: float
    exponent: float
    inside: bool
    worst_margin: float


def stolz_check(
    model: SemigroupModel, t_grid: Sequence[float], exponent: float
) -> StolzResult:
    """
    Check phi_t(z0) in S(1, R t^exponent) with R = exp(2 sup gap + 3 log 2),
    the gap being v_T(t) - (exponent/2) log t.
    """
    ts = [float(t) for t in t_grid]
    gaps = _gap_trace(model, ts, 0.5 * exponent)
    radius = math.exp(2.0 * gaps.sup_gap + 3.0 * LOG2)

    inside = True
    worst = math.inf
    for t in ts:
        point = model.orbit(t)
        log_bound = math.log(radius) + exponent * math.log(t)
        margin = log_bound - (point.log_dist_to_tau - point.log_one_minus_modulus)
        worst = min(worst, margin)
        slack = 1e-9 * (1.0 + abs(log_bound))
        if log_bound > 0.0:
            region = StolzRegion(1, math.exp(log_bound))
            ok = region.contains_log(point.log_dist_to_tau - slack, point.log_one_minus_modulus)
        else:
            ok = margin > -slack
        inside = inside and ok

    logger.info(f"Stolz check for {model!r}: R={radius:.6g}, worst margin {worst:.3g}")
    return StolzResult(radius=radius, exponent=exponent, inside=inside, worst_margin=worst)


@dataclass(frozen=True)
class RateResult:
    lower: float
    upper: float
    rates: list[tuple[float, float]]

    @property
    def passed(self) -> bool:
        return all(self.lower <= r <= self.upper for _, r in self.rates)


def rate_check(model: SemigroupModel, t_grid: Sequence[float], slack: float = 0.1) -> RateResult:
    """
    Two-sided exponential rate of an Omega model:

        log(1/|1 - phi_t(z0)|) / t^{1-1/alpha} in [Lambda- pi, Lambda+ pi],
        Lambda+- = (mu (1 +- slack))^{1/alpha} beta.
    """
    if not isinstance(model, OmegaSemigroup):
        raise PreconditionError("rate_check applies to Omega models")
    p = model.params
    lower = (p.mu * (1.0 - slack)) ** (1.0 / p.alpha) * p.beta * math.pi
    upper = (p.mu * (1.0 + slack)) ** (1.0 / p.alpha) * p.beta * math.pi

    rates = []
    for t in (float(t) for t in t_grid):
        point = model.orbit(t)
        rates.append((t, -point.log_dist_to_tau / t ** (1.0 / p.beta)))
    return RateResult(lower=lower, upper=upper, rates=rates)


def total_speed_floor(model: SemigroupModel, t_grid: Sequence[float]) -> float:
    """inf over the grid of v(t) - 1/4 log t"""
    ts = [float(t) for t in t_grid]
    if not ts or min(ts) < 1.0:
        raise PreconditionError("Floor check needs a non-empty grid with t >= 1")
    return min(s.v - 0.25 * math.log(s.t) for s in speed_table(model, ts))


def spectral_rate(model: SemigroupModel, t: float) -> float:
    """v(t)/t, which tends to lambda/2 for hyperbolic models"""
    if model.model_type.is_parabolic:
        raise PreconditionError(f"{model!r} is not hyperbolic")
    if not t > 0:
        raise PreconditionError("t must be positive")
    return speeds_at(model, t).v / t
