"""
Verification suites run by ``koenigs verify``.

Each suite returns its checks with measured values and thresholds; the
``suite`` decorator registers it and wraps the result in a SuiteReport.
"""

import cmath
import logging
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field

from koenigs.conformal import OmegaParams, phi_alpha, pq_solve
from koenigs.decorators import SUITES, CheckResult, SuiteReport, suite
from koenigs.domains import (
    HalfParabola,
    HalfPlaneRight,
    OmegaFamily,
    SlopeKind,
    VerticalStrip,
    slope_classify,
)
from koenigs.exceptions import PreconditionError
from koenigs.harmonic_measure import hm_halfplane_ray, hm_wos, vt_via_hm
from koenigs.hyperbolic_core import LOG2, cayley, dist_disc, dist_halfplane
from koenigs.rng import CounterStream
from koenigs.semigroups import (
    HalfParabolaSemigroup,
    HyperbolicGroup,
    OmegaSemigroup,
    ParabolicAutoMinus,
    ParabolicAutoPlus,
    SectorFamily,
    SemigroupModel,
    verify_intertwining,
    verify_semigroup_law,
)
from koenigs.speeds import (
    Abscissa,
    asymptotic_fit,
    euclid_bounds_check,
    gamma_sigma_check,
    main_bound_gap,
    pythagoras_check,
    rate_check,
    speed_table,
    stolz_check,
    tangential_bound_check,
    vo_monotonicity_check,
    vt_monotonicity_check,
)
from koenigs.utils import log_grid

logger = logging.getLogger(__name__)

OMEGA_ALPHAS = (1.5, 2.0, 3.0)
OMEGA_MUS = (0.5, 1.0, 2.0)


class SuiteOptions(BaseModel):
    """Knobs shared by all suites; defaults are the acceptance thresholds"""

    seed: int = 7
    walks: int = Field(default=100_000, ge=1000)
    eps: float = Field(default=1e-4, ge=1e-6, le=1e-2)
    tol_metric: float = 1e-12
    tol_semigroup: float = 1e-8
    tol_inequality: float = 1e-9
    tol_tail: float = 0.05
    tol_fit: float = 0.02
    t_grid: Optional[list[float]] = None


def catalog() -> list[SemigroupModel]:
    """Closed-form families used by the inequality suites"""
    return [
        ParabolicAutoPlus(),
        ParabolicAutoMinus(),
        HyperbolicGroup(1.0),
        SectorFamily(math.pi / 2),
        OmegaSemigroup(2.0, 1.0),
        HalfParabolaSemigroup(1.0),
    ]


def _grid(options: SuiteOptions, t_min: float, t_max: float, points: int) -> list[float]:
    if options.t_grid is not None:
        return [t for t in options.t_grid if t_min <= t <= t_max] or list(options.t_grid)
    return [float(t) for t in log_grid(t_min, t_max, points)]


def _bounded(name: str, measured: float, threshold: float, detail: str = "") -> CheckResult:
    return CheckResult(name, bool(measured < threshold), measured, threshold, detail)


def _disc_samples(n: int, seed: int, radius: float = 0.95) -> np.ndarray:
    stream = CounterStream(seed)
    index = np.arange(n, dtype=np.uint64)
    r = radius * np.sqrt(stream.uniform(index, 2))
    return r * np.exp(1j * stream.angle(index, 3))


@suite("metric")
def metric_suite(options: SuiteOptions) -> list[CheckResult]:
    reference = dist_disc(0, 0.5)
    a = _disc_samples(10_000, options.seed)
    b = _disc_samples(10_000, options.seed + 1)
    worst = max(
        abs(dist_disc(z, w) - dist_halfplane(cayley(1, z), cayley(1, w)))
        for z, w in zip(a, b)
    )
    return [
        _bounded("k_disc(0, 0.5)", abs(reference - math.atanh(0.5)), 1e-9, f"value {reference:.9f}"),
        _bounded("cayley transport", worst, options.tol_metric, "10000 pairs"),
    ]


@suite("semigroup")
def semigroup_suite(options: SuiteOptions) -> list[CheckResult]:
    times = np.linspace(0.0, 5.0, 20)
    points = _disc_samples(20, options.seed, radius=0.9)
    checks = []
    for model in catalog():
        law = max(verify_semigroup_law(model, float(s), float(t)) for s in times for t in times)
        tie = max(verify_intertwining(model, complex(z), float(t)) for z in points for t in times)
        checks.append(_bounded(f"{model!r} semigroup law", law, options.tol_semigroup))
        checks.append(_bounded(f"{model!r} intertwining", tie, options.tol_semigroup))
    return checks


def _inequality_rows(options: SuiteOptions) -> list[tuple[SemigroupModel, list[float]]]:
    grid = [0.0] + _grid(options, 1e-2, 1e8, 200)
    return [(model, grid) for model in catalog()]


@suite("pythagoras")
def pythagoras_suite(options: SuiteOptions) -> list[CheckResult]:
    checks = []
    for model, grid in _inequality_rows(options):
        samples = speed_table(model, grid)
        bad = [s.t for s in samples if not pythagoras_check(s, options.tol_inequality)]
        over = [s.t for s in samples if not tangential_bound_check(s, options.tol_inequality)]
        checks.append(
            CheckResult(f"{model!r} pythagoras", not bad, float(len(bad)), 0.0, f"{len(samples)} samples")
        )
        checks.append(CheckResult(f"{model!r} v_T <= v_o + 4 log 2", not over, float(len(over)), 0.0))
    return checks


@suite("euclid")
def euclid_suite(options: SuiteOptions) -> list[CheckResult]:
    checks = []
    labels = ("total", "orthogonal", "tangential")
    for model, grid in _inequality_rows(options):
        failures = [0, 0, 0]
        for t in grid:
            for k, ok in enumerate(euclid_bounds_check(model, t, options.tol_inequality)):
                failures[k] += not ok
        for label, count in zip(labels, failures):
            checks.append(CheckResult(f"{model!r} euclid {label}", count == 0, float(count), 0.0))
    return checks


@suite("main-bound")
def main_bound_suite(options: SuiteOptions) -> list[CheckResult]:
    grid = _grid(options, 1.0, 1e8, 60)
    models: list[SemigroupModel] = [ParabolicAutoPlus(), ParabolicAutoMinus()]
    models += [OmegaSemigroup(a, m) for a in OMEGA_ALPHAS for m in OMEGA_MUS]

    checks = []
    for model in models:
        gaps = main_bound_gap(model, grid)
        stable = gaps.running_sup_stable_after()
        checks.append(
            CheckResult(
                f"{model!r} sup gap",
                math.isfinite(gaps.sup_gap) and stable <= 1e3,
                gaps.sup_gap,
                None,
                f"running sup constant after t={stable:.6g}",
            )
        )
        if isinstance(model, (ParabolicAutoPlus, ParabolicAutoMinus)):
            checks.append(
                _bounded(f"{model!r} tail gap", abs(gaps.tail_gap - 0.5 * LOG2), options.tol_tail)
            )
    return checks


@suite("omega-asymptotics")
def omega_asymptotics_suite(options: SuiteOptions) -> list[CheckResult]:
    grid = _grid(options, 1e6, 1e8, 60)
    checks = []
    for alpha in OMEGA_ALPHAS:
        for mu in OMEGA_MUS:
            model = OmegaSemigroup(alpha, mu)
            samples = speed_table(model, grid)
            if mu == 1.0:
                fit = asymptotic_fit(samples, Abscissa.LOG_T)
                expected = 1.0 / (2.0 * alpha)
                checks.append(
                    _bounded(f"{model!r} v_T slope", abs(fit.slope / expected - 1.0), options.tol_fit)
                )
                if alpha == 2.0:
                    checks.append(
                        _bounded(f"{model!r} v_T offset", abs(fit.offset - 0.5 * math.log(4.0 / math.pi)), 0.05)
                    )
            p = model.params
            last = samples[-1]
            predicted = math.pi / (2.0 * p.c) * last.t ** (1.0 - 1.0 / alpha)
            checks.append(
                _bounded(f"{model!r} v_o ratio", abs(last.v_o / predicted - 1.0), options.tol_fit)
            )
    return checks


@suite("pq")
def pq_suite(options: SuiteOptions) -> list[CheckResult]:
    checks = []
    t_end = 1e8
    for alpha in OMEGA_ALPHAS:
        model = OmegaSemigroup(alpha, 1.0)
        p: OmegaParams = model.params
        x0, y0 = model.zeta0.real, model.zeta0.imag
        modulus_err = angle_err = round_trip = 0.0
        for t in _grid(options, 1.0, t_end, 40):
            state = pq_solve(p, model.zeta0, t)
            target = ((t + y0) ** 2 + x0**2) ** (1.0 / p.beta)
            modulus_err = max(modulus_err, abs(state.P**2 + state.Q**2 - target) / target)
            angle_err = max(
                angle_err,
                abs(math.atan2(state.P, state.Q) - math.atan2(x0, t + y0) / p.beta),
            )
            image = phi_alpha(p, state.point)
            round_trip = max(round_trip, abs(image - (model.zeta0 + 1j * t)) / (1.0 + t))

        final = pq_solve(p, model.zeta0, t_end)
        q_ratio = final.Q / t_end ** (1.0 / p.beta)
        p_ratio = final.P * (p.beta / x0) * t_end ** (1.0 / alpha)
        checks += [
            _bounded(f"alpha={alpha} modulus", modulus_err, 1e-10),
            _bounded(f"alpha={alpha} argument", angle_err, 1e-10),
            _bounded(f"alpha={alpha} round trip", round_trip, 1e-8),
            _bounded(f"alpha={alpha} Q asymptotics", abs(q_ratio - 1.0), 1e-3),
            _bounded(f"alpha={alpha} P asymptotics", abs(p_ratio - 1.0), 1e-3),
        ]
    return checks


@suite("slope")
def slope_suite(options: SuiteOptions) -> list[CheckResult]:
    omega = OmegaSemigroup(2.0, 1.0)
    parabola = HalfParabola(2.0, 1.0)
    omega_domain = OmegaFamily(2.0, 1.0)
    minus = SlopeKind.TANGENTIAL_MINUS_HALF_PI
    plus = SlopeKind.TANGENTIAL_PLUS_HALF_PI
    cases = [
        ("strip", VerticalStrip(0.0, math.pi), complex(math.pi / 2), SlopeKind.NON_TANGENTIAL),
        ("half-parabola", parabola, 1 + 2j, minus),
        ("omega", omega_domain, omega.zeta0, minus),
        ("mirrored half-parabola", parabola.mirror(), -1 + 2j, plus),
        ("mirrored omega", omega_domain.mirror(), -omega.zeta0.conjugate(), plus),
    ]
    checks = []
    for label, domain, p, expected in cases:
        verdict = slope_classify(domain, p, 1e6, 40)
        checks.append(
            CheckResult(label, verdict.kind == expected, verdict.drift, None, verdict.describe())
        )
    return checks


@suite("hm")
def hm_suite(options: SuiteOptions) -> list[CheckResult]:
    estimate = hm_wos(HalfPlaneRight(), 1 + 1j, eps=options.eps, n=options.walks, seed=options.seed)
    deviation = abs(estimate.value - 0.75)

    model = ParabolicAutoPlus()
    worst = 0.0
    for t in [0.0] + _grid(options, 1e-2, 1e6, 60):
        sample = model.orbit(t)
        w = cmath.rect(sample.rho, sample.theta)
        worst = max(worst, abs(math.cos(sample.theta) - math.sin(math.pi * hm_halfplane_ray(w))))

    return [
        CheckResult(
            "omega(1+i) in H",
            estimate.valid and deviation <= 3.0 * estimate.stderr,
            estimate.value,
            0.75,
            f"stderr {estimate.stderr:.3g}",
        ),
        _bounded("stderr", estimate.stderr, 0.002 if options.walks >= 100_000 else 1.0),
        _bounded("sin relation", worst, 1e-12),
    ]


@suite("gamma-sigma")
def gamma_sigma_suite(options: SuiteOptions) -> list[CheckResult]:
    grid = [0.0] + _grid(options, 1.0, 1e4, 30)
    auto = gamma_sigma_check(ParabolicAutoPlus(), grid)
    strip = gamma_sigma_check(HyperbolicGroup(1.0), grid)
    return [
        _bounded("parabolic-auto", auto.sup_dev, 1.5),
        _bounded("hyperbolic", strip.sup_dev, 1.5),
    ]


@suite("vt-mono")
def vt_mono_suite(options: SuiteOptions) -> list[CheckResult]:
    grid = _grid(options, 1.0, 1e6, 40)
    small, large = OmegaSemigroup(2.0, 2.0), OmegaSemigroup(2.0, 0.5)
    pair = vt_monotonicity_check(small, large, grid)
    self_pair = vt_monotonicity_check(small, small, grid)
    return [
        _bounded("nested pair", pair.sup_diff, 1.0, f"shift {pair.shift}"),
        CheckResult("self pair", self_pair.sup_diff == 0.0, self_pair.sup_diff, 0.0),
    ]


@suite("vo-mono")
def vo_mono_suite(options: SuiteOptions) -> list[CheckResult]:
    grid = _grid(options, 1.0, 1e6, 40)
    result = vo_monotonicity_check(OmegaSemigroup(2.0, 2.0), OmegaSemigroup(2.0, 0.5), grid)
    return [_bounded("nested pair", result.sup_diff, 4.0 * LOG2)]


@suite("stolz-rate")
def stolz_rate_suite(options: SuiteOptions) -> list[CheckResult]:
    model = OmegaSemigroup(2.0, 1.0)
    stolz = stolz_check(model, _grid(options, 1.0, 1e6, 40), 0.5)
    rates = rate_check(model, _grid(options, 1e4, 1e8, 20))
    low = min(r for _, r in rates.rates)
    high = max(r for _, r in rates.rates)
    bracket = f"[{rates.lower:.4f}, {rates.upper:.4f}]"
    return [
        CheckResult(
            "stolz containment",
            stolz.inside,
            stolz.worst_margin,
            0.0,
            f"R1={stolz.radius:.6g}",
        ),
        CheckResult(
            "rate bracket",
            rates.passed,
            low,
            rates.lower,
            f"rates in [{low:.4f}, {high:.4f}], bracket {bracket}",
        ),
    ]


@suite("half-parabola")
def half_parabola_suite(options: SuiteOptions) -> list[CheckResult]:
    model = HalfParabolaSemigroup(1.0)
    fit = asymptotic_fit(speed_table(model, _grid(options, 1e6, 1e8, 60)))
    checks = [_bounded("exact v_T slope", abs(fit.slope / 0.25 - 1.0), options.tol_fit)]

    ts = [1e2, 1e3, 1e4]
    estimates = [
        vt_via_hm(HalfParabola(2.0, 1.0), 1 + 2j, t, eps=options.eps, n=options.walks, seed=options.seed)
        for t in ts
    ]
    if any(e.flagged for e in estimates):
        raise PreconditionError("Harmonic-measure estimates were flagged")
    slope = float(np.polyfit(np.log(ts), [e.value for e in estimates], 1)[0])
    checks.append(_bounded("harmonic-measure v_T slope", abs(slope / 0.25 - 1.0), 0.1, f"slope {slope:.4f}"))
    return checks


SUITE_ORDER = (
    "metric",
    "semigroup",
    "pythagoras",
    "euclid",
    "main-bound",
    "omega-asymptotics",
    "pq",
    "slope",
    "hm",
    "gamma-sigma",
    "vt-mono",
    "vo-mono",
    "stolz-rate",
    "half-parabola",
)


def run_suite(name: str, options: Optional[SuiteOptions] = None) -> list[SuiteReport]:
    """
    Run one suite, or every suite for ``"all"``.

    Raises:
        PreconditionError: For an unknown suite name
    """
    options = options or SuiteOptions()
    if name == "all":
        return [SUITES[n](options) for n in SUITE_ORDER]
    if name not in SUITES:
        raise PreconditionError(f"Unknown suite {name!r}; choose from {', '.join(SUITE_ORDER)} or all")
    return [SUITES[name](options)]
