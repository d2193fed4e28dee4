"""
Command-line driver.

    koenigs speeds --family omega --alpha 2 --mu 1 --t-grid log:1:1e8:60
    koenigs verify main-bound
    koenigs slope --domain '{"variant": "HalfParabola", "params": {"alpha": 2, "m": 1}}'
    koenigs hm --seed 7 --walks 100000

Exit codes: 0 success, 1 failed verification, 2 bad configuration (invalid
arguments, model parameters, domain descriptors or points outside the
domain), 3 numerical failure inside a computation.
"""

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import BaseModel, ValidationError, model_validator

from koenigs import __version__
from koenigs.config import koenigs_config
from koenigs.domains import (
    HalfPlaneRight,
    StarlikeDomain,
    domain_from_json,
    slope_classify,
)
from koenigs.exceptions import DomainError, KoenigsError, PreconditionError
from koenigs.harmonic_measure import hm_wos
from koenigs.semigroups import MODEL_FAMILIES, SemigroupModel, build_model
from koenigs.speeds import speed_table
from koenigs.suites import SUITE_ORDER, SuiteOptions, run_suite
from koenigs.utils import atomic_write, format_float, parse_log_grid

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

MONTE_CARLO_SUITES = {"hm", "half-parabola", "all"}
CSV_COLUMNS = ["family", "alpha", "mu", "t", "v_total", "v_ortho", "v_tang", "main_gap"]
TOLERANCE_FIELDS = ("tol_metric", "tol_semigroup", "tol_inequality", "tol_tail", "tol_fit")


class ExperimentConfig(BaseModel):
    """Validated command configuration, echoed into JSON reports"""

    command: str
    family: str = "parabolic-auto"
    alpha: float = 2.0
    mu: float = 1.0
    theta: float = math.pi / 2
    lam: float = 1.0
    t_grid: Optional[str] = None
    seed: Optional[int] = None
    walks: int = 100_000
    eps: float = 1e-4
    out: str = "-"
    suite: Optional[str] = None
    domain: Optional[str] = None
    point: Optional[str] = None
    t_max: float = 1e6
    samples: int = 40
    tolerances: dict[str, float] = {}

    @model_validator(mode="after")
    def check_command(self) -> "ExperimentConfig":
        if self.command == "speeds" and self.family not in MODEL_FAMILIES:
            raise ValueError(f"Unknown family {self.family!r}")
        if self.command == "hm" and self.seed is None:
            raise ValueError("--seed is required for Monte-Carlo commands")
        if self.command == "verify" and self.suite in MONTE_CARLO_SUITES and self.seed is None:
            raise ValueError(f"--seed is required for suite {self.suite}")
        if self.walks < 1000:
            raise ValueError("--walks must be at least 1000")
        return self


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default="-", help="Output path, '-' for stdout (default: -)")
    parser.add_argument(
        "--log-level",
        default=koenigs_config.LOG_LEVEL,
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level (default: KOENIGS_LOG_LEVEL or INFO)",
    )


def _add_monte_carlo(parser: argparse.ArgumentParser, walks: int) -> None:
    parser.add_argument("--seed", type=int, default=None, help="Random stream key")
    parser.add_argument("--walks", type=int, default=walks, help=f"Number of walks (default: {walks})")
    parser.add_argument("--eps", type=float, default=1e-4, help="Walk-on-spheres shell width (default: 1e-4)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="koenigs",
        description="Speeds of convergence of non-elliptic semigroups in the unit disc.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    speeds = commands.add_parser("speeds", help="Speed table of one model as CSV")
    speeds.add_argument("--family", default="parabolic-auto", choices=sorted(MODEL_FAMILIES))
    speeds.add_argument("--alpha", type=float, default=2.0, help="Omega family exponent (default: 2)")
    speeds.add_argument("--mu", type=float, default=1.0, help="Omega family scale, or m for half-parabola (default: 1)")
    speeds.add_argument("--theta", type=float, default=math.pi / 2, help="Sector opening (default: pi/2)")
    speeds.add_argument("--lambda", dest="lam", type=float, default=1.0, help="Spectral value (default: 1)")
    speeds.add_argument("--t-grid", default="log:1:1e8:60", help="Grid as log:t_min:t_max:points")
    _add_output(speeds)

    verify = commands.add_parser("verify", help="Run a verification suite, JSON report")
    verify.add_argument("suite", help=f"One of {', '.join(SUITE_ORDER)}, all")
    verify.add_argument("--t-grid", default=None, help="Override the suite grids")
    _add_monte_carlo(verify, 100_000)
    defaults = SuiteOptions()
    for name in TOLERANCE_FIELDS:
        default = getattr(defaults, name)
        flag = "--" + name.replace("_", "-")
        verify.add_argument(flag, type=float, default=default, help=f"(default: {default:g})")
    _add_output(verify)

    slope = commands.add_parser("slope", help="Slope verdict and delta trace of a domain")
    slope.add_argument("--domain", required=True, help="Domain JSON document or path to one")
    slope.add_argument("--point", required=True, help="Base point, e.g. 1+2j")
    slope.add_argument("--t-max", type=float, default=1e6, help="Largest t (default: 1e6)")
    slope.add_argument("--samples", type=int, default=40, help="Grid size (default: 40)")
    _add_output(slope)

    hm = commands.add_parser("hm", help="Harmonic measure of the upper imaginary semi-axis")
    hm.add_argument("--domain", default=None, help="Domain JSON document or path (default: right half-plane)")
    hm.add_argument("--point", default="1+1j", help="Evaluation point (default: 1+1j)")
    _add_monte_carlo(hm, 10_000)
    _add_output(hm)

    return parser


def _config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values: dict[str, Any] = {k: v for k, v in vars(args).items() if v is not None and k != "log_level"}
    values["tolerances"] = {k: values.pop(k) for k in list(values) if k.startswith("tol_")}
    return ExperimentConfig(**values)


def _load_domain(text: Optional[str]) -> StarlikeDomain:
    if text is None:
        return HalfPlaneRight()
    path = Path(text)
    if not text.lstrip().startswith("{") and path.is_file():
        text = path.read_text(encoding="utf-8")
    try:
        return domain_from_json(text)
    except (ValidationError, ValueError) as e:
        raise PreconditionError(f"Invalid domain descriptor: {e}") from e


def _parse_point(text: str) -> complex:
    cleaned = text.replace(" ", "")
    try:
        if "," in cleaned:
            re, im = cleaned.split(",")
            return complex(float(re), float(im))
        return complex(cleaned)
    except ValueError as e:
        raise PreconditionError(f"Invalid point {text!r}") from e


def _point_in(domain: StarlikeDomain, text: str) -> complex:
    point = _parse_point(text)
    if not domain.contains(point):
        raise PreconditionError(f"Point {point} is not in the domain")
    return point


def _build_model(config: ExperimentConfig) -> SemigroupModel:
    try:
        return build_model(
            config.family, alpha=config.alpha, mu=config.mu, theta=config.theta, lam=config.lam
        )
    except DomainError as e:
        raise PreconditionError(f"Invalid model parameters: {e}") from e


def _emit(out: str, content: str) -> None:
    if out == "-":
        sys.stdout.write(content)
        sys.stdout.flush()
    else:
        atomic_write(out, content)
        logger.info(f"Wrote {out}")


def cmd_speeds(config: ExperimentConfig) -> int:
    """One CSV row per grid point"""
    grid = parse_log_grid(config.t_grid or "log:1:1e8:60")
    model = _build_model(config)
    params = model.to_params()
    alpha = format_float(params["alpha"]) if "alpha" in params else ""
    mu = format_float(params["mu"]) if "mu" in params else ""

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for sample in speed_table(model, grid):
        main_gap = sample.v_T - 0.5 * math.log(sample.t)
        writer.writerow(
            [
                config.family,
                alpha,
                mu,
                format_float(sample.t),
                format_float(sample.v),
                format_float(sample.v_o),
                format_float(sample.v_T),
                format_float(main_gap),
            ]
        )
    _emit(config.out, buffer.getvalue())
    return EXIT_OK


def cmd_verify(config: ExperimentConfig) -> int:
    """JSON report of one suite; exit 0 iff every check passes"""
    suite = config.suite or ""
    if suite != "all" and suite not in SUITE_ORDER:
        raise PreconditionError(f"Unknown suite {suite!r}")

    options = SuiteOptions(
        seed=7 if config.seed is None else config.seed,
        walks=config.walks,
        eps=config.eps,
        t_grid=None if config.t_grid is None else [float(t) for t in parse_log_grid(config.t_grid)],
        **config.tolerances,
    )
    reports = run_suite(suite, options)
    passed = all(r.passed for r in reports)
    document = {
        "tool": "koenigs",
        "version": __version__,
        "config": config.model_dump(),
        "settings": koenigs_config.model_dump(),
        "passed": passed,
        "suites": [r.to_dict() for r in reports],
    }
    _emit(config.out, json.dumps(document, indent=2) + "\n")
    return EXIT_OK if passed else EXIT_FAILED


def cmd_slope(config: ExperimentConfig) -> int:
    """
    Verdict line plus (t, delta+, delta-, ratio) rows to --out.

    The verdict goes to stderr when the rows go to stdout.
    """
    domain = _load_domain(config.domain)
    point = _point_in(domain, config.point or "")
    verdict = slope_classify(domain, point, config.t_max, config.samples)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["t", "delta_plus", "delta_minus", "ratio"])
    for row in verdict.trace:
        writer.writerow(
            [format_float(v) for v in (row.t, row.delta_plus, row.delta_minus, row.ratio)]
        )

    verdict_stream = sys.stderr if config.out == "-" else sys.stdout
    verdict_stream.write(f"verdict: {verdict.describe()}\n")
    _emit(config.out, buffer.getvalue())
    return EXIT_OK


def cmd_hm(config: ExperimentConfig) -> int:
    domain = _load_domain(config.domain)
    point = _point_in(domain, config.point or "1+1j")
    estimate = hm_wos(domain, point, eps=config.eps, n=config.walks, seed=config.seed or 0)
    document = {
        "tool": "koenigs",
        "version": __version__,
        "config": config.model_dump(),
        "estimate": estimate.to_dict(),
    }
    _emit(config.out, json.dumps(document, indent=2) + "\n")
    return EXIT_OK


COMMANDS = {
    "speeds": cmd_speeds,
    "verify": cmd_verify,
    "slope": cmd_slope,
    "hm": cmd_hm,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = _config_from_args(args)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return EXIT_CONFIG

    try:
        return COMMANDS[config.command](config)
    except PreconditionError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_CONFIG
    except KoenigsError as e:
        logger.error(f"Numerical failure: {type(e).__name__}: {e}")
        return EXIT_NUMERIC
