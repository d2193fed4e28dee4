"""
Harmonic measure of boundary sets, exact in the half-plane and by
walk-on-spheres elsewhere.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from koenigs.config import koenigs_config
from koenigs.domains import ModelKind, StarlikeDomain, classify_model
from koenigs.exceptions import DomainError, InconclusiveError, PreconditionError
from koenigs.hyperbolic_core import ensure_half_plane_point
from koenigs.rng import CounterStream

logger = logging.getLogger(__name__)

BoundaryIndicator = Callable[[np.ndarray], np.ndarray]


def hm_halfplane_ray(w: complex) -> float:
    """
    Harmonic measure of the upper imaginary semi-axis at w in the right half-plane.

    Example:
        >>> hm_halfplane_ray(1 + 1j)
        0.75
    """
    w = ensure_half_plane_point(w)
    return 0.5 + math.atan2(w.imag, w.real) / math.pi


def iR_plus_indicator(points: np.ndarray) -> np.ndarray:
    """1.0 on the upper imaginary semi-axis, 0.0 elsewhere"""
    points = np.asarray(points, dtype=np.complex128)
    on_axis = np.abs(points.real) <= 1e-9 * (1.0 + np.abs(points))
    return np.where(on_axis & (points.imag > 0), 1.0, 0.0)


@dataclass(frozen=True)
class HMEstimate:
    """Monte-Carlo harmonic-measure estimate"""

    value: float
    stderr: float
    n_walks: int
    eps_shell: float
    n_excluded: int = 0
    n_escaped: int = 0
    valid: bool = True

    def to_dict(self) -> dict[str, object]:
        return {
            "value": self.value,
            "stderr": self.stderr,
            "n_walks": self.n_walks,
            "eps_shell": self.eps_shell,
            "n_excluded": self.n_excluded,
            "n_escaped": self.n_escaped,
            "valid": self.valid,
        }


@dataclass
class _ChunkTally:
    score: float = 0.0
    scored: int = 0
    excluded: int = 0
    escaped: int = 0


def _bounding_wall(domain: StarlikeDomain) -> Optional[float]:
    """Left wall of a bounding half-plane inside the right half-plane, if any"""
    try:
        lo, _ = domain.re_bounds()
    except InconclusiveError:
        return None
    if not (math.isfinite(lo) and lo >= 0.0):
        return None
    return lo


def _run_chunk(
    domain: StarlikeDomain,
    z0: complex,
    indicator: BoundaryIndicator,
    eps: float,
    stream: CounterStream,
    start: int,
    count: int,
    total: int,
) -> _ChunkTally:
    cfg = koenigs_config
    wall = _bounding_wall(domain)
    escape_radius = cfg.WOS_ESCAPE_FACTOR * (1.0 + abs(z0))

    tally = _ChunkTally()
    index = np.arange(start, start + count, dtype=np.uint64)
    z = np.full(count, z0, dtype=np.complex128)

    for step in range(cfg.WOS_MAX_STEPS):
        if index.size == 0:
            break
        cap = np.inf if wall is None else np.maximum(z.real - wall, eps)
        dist, nearest = domain.boundary_distance(z, cap=cap)

        done = dist < eps
        if np.any(done):
            tally.score += float(np.sum(indicator(nearest[done])))
            tally.scored += int(np.count_nonzero(done))

        keep = ~done
        index, z, dist = index[keep], z[keep], dist[keep]
        if step == 0:
            angle = stream.stratified_angle(index, total)
        else:
            angle = stream.angle(index, step)
        z = z + dist * np.exp(1j * angle)

        far = np.abs(z) > escape_radius
        if np.any(far):
            n_far = int(np.count_nonzero(far))
            tally.escaped += n_far
            if wall is None:
                tally.excluded += n_far
            else:
                shifted = z[far] - wall
                tally.score += float(np.sum(0.5 + np.arctan2(shifted.imag, shifted.real) / np.pi))
                tally.scored += n_far
            index, z = index[~far], z[~far]

    if index.size:
        tally.excluded += int(index.size)
        logger.warning(f"{index.size} walks from {start} hit the {cfg.WOS_MAX_STEPS}-step cap")
    logger.debug(f"Walk chunk {start}..{start + count} done: {tally.scored} scored")
    return tally


def hm_wos(
    domain: StarlikeDomain,
    z0: complex,
    indicator: BoundaryIndicator = iR_plus_indicator,
    eps: float = 1e-4,
    n: int = 10_000,
    seed: int = 0,
) -> HMEstimate:
    """
    Walk-on-spheres estimate of the harmonic measure of a boundary set.

    Each walk jumps to a uniform point on the largest circle around it that
    stays in the domain, stops within eps of the boundary and scores the
    indicator at the nearest boundary point. The first jump of walk i lands
    in arc i of n equal arcs of the first circle; the reported stderr is the
    binomial one, an upper bound for this stratified estimate. Walks draw
    from a substream keyed by (seed, z0) and are split into chunks whose
    tallies are reduced in chunk order, so the estimate depends only on
    (seed, z0, n).

    Args:
        domain: Domain descriptor
        z0: Evaluation point inside the domain
        indicator: Vectorized indicator of the boundary set
        eps: Shell width, in [1e-6, 1e-2]
        n: Number of walks, at least 1000
        seed: Random stream key

    Returns:
        HMEstimate; ``valid`` is False when more than 1% of walks were excluded

    Example:
        >>> from koenigs.domains import HalfPlaneRight
        >>> est = hm_wos(HalfPlaneRight(), 1 + 1j, n=20_000, seed=7)
        >>> abs(est.value - 0.75) < 3 * est.stderr
        True
    """
    cfg = koenigs_config
    z0 = complex(z0)
    if not domain.contains(z0):
        raise DomainError(f"Evaluation point {z0} is not in the domain")
    if not 1e-6 <= eps <= 1e-2:
        raise PreconditionError(f"eps must lie in [1e-6, 1e-2], got {eps}")
    if n < 1000:
        raise PreconditionError(f"At least 1000 walks are needed, got {n}")

    stream = CounterStream.for_point(seed, z0)
    size = cfg.WOS_CHUNK_SIZE
    starts = list(range(0, n, size))

    def run(start: int) -> _ChunkTally:
        return _run_chunk(domain, z0, indicator, eps, stream, start, min(size, n - start), n)

    workers = cfg.worker_count
    if workers == 1 or len(starts) == 1:
        tallies = [run(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            tallies = list(pool.map(run, starts))

    total = _ChunkTally()
    for tally in tallies:
        total.score += tally.score
        total.scored += tally.scored
        total.excluded += tally.excluded
        total.escaped += tally.escaped

    if total.scored == 0:
        value, stderr = math.nan, math.inf
    else:
        value = min(1.0, max(0.0, total.score / total.scored))
        stderr = math.sqrt(value * (1.0 - value) / total.scored)

    valid = total.excluded <= cfg.WOS_MAX_EXCLUDED_FRACTION * n and total.scored > 0
    if not valid:
        logger.warning(f"Harmonic-measure estimate at {z0} flagged: {total.excluded} of {n} walks excluded")

    return HMEstimate(
        value=value,
        stderr=stderr,
        n_walks=total.scored,
        eps_shell=eps,
        n_excluded=total.excluded,
        n_escaped=total.escaped,
        valid=valid,
    )


@dataclass(frozen=True)
class TangentialEstimate:
    """-1/2 log sin(pi omega) with its delta-method error bar"""

    value: float
    stderr: float
    omega: HMEstimate
    flagged: bool


def vt_via_hm(
    domain: StarlikeDomain,
    p: complex,
    t: float,
    eps: float = 1e-4,
    n: int = 10_000,
    seed: int = 0,
) -> TangentialEstimate:
    """
    Tangential speed surrogate from the harmonic measure of the upper imaginary
    semi-axis at p + it.

    The estimate is flagged when omega <= 1/2 or the walk estimate is invalid.
    """
    if not domain.lies_in_right_halfplane():
        raise PreconditionError("Domain must lie in the right half-plane")
    if classify_model(domain).kind != ModelKind.PARABOLIC_POSITIVE_STEP:
        raise PreconditionError("Domain is not of positive-step parabolic type")

    omega = hm_wos(domain, complex(p) + 1j * t, eps=eps, n=n, seed=seed)
    w = omega.value
    flagged = not omega.valid or not w > 0.5

    if 0.0 < w < 1.0:
        angle = math.pi * w
        value = -0.5 * math.log(math.sin(angle))
        stderr = 0.5 * math.pi * abs(math.cos(angle) / math.sin(angle)) * omega.stderr
    else:
        value, stderr = math.inf, math.inf
        flagged = True

    if flagged:
        logger.warning(f"Tangential estimate at t={t} flagged (omega={w:.6g})")
    return TangentialEstimate(value=value, stderr=stderr, omega=omega, flagged=flagged)
