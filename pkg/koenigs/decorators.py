"""
Verification-suite registration.
"""

import functools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional

from koenigs.exceptions import KoenigsError

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    """Outcome of one check inside a suite"""

    name: str
    passed: bool
    measured: Optional[float] = None
    threshold: Optional[float] = None
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": _json_number(self.measured),
            "threshold": _json_number(self.threshold),
            "detail": self.detail,
        }


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _json_number(value: Optional[float]) -> Any:
    if value is None:
        return None
    if math.isfinite(value):
        return value
    return str(value)


SuiteFunc = Callable[[Any], list[CheckResult]]
SuiteRunner = Callable[[Any], SuiteReport]
SUITES: dict[str, SuiteRunner] = {}


def suite(
    name: str, registry: Optional[dict[str, SuiteRunner]] = None
) -> Callable[[SuiteFunc], SuiteRunner]:
    """
    Register a verification suite under a name.

    The decorated function returns its checks; the wrapper turns them into a
    SuiteReport. A KoenigsError raised inside the suite becomes one failed
    check carrying the error message instead of aborting the run.

    Args:
        name: Suite name used on the command line
        registry: Target registry (defaults to SUITES)

    Example:
        >>> @suite("smoke", registry={})
        ... def smoke(options):
        ...     return [CheckResult("always", True)]
        >>> smoke(None).passed
        True
    """
    target = SUITES if registry is None else registry

    def decorator(func: SuiteFunc) -> SuiteRunner:
        @functools.wraps(func)
        def wrapper(options: Any) -> SuiteReport:
            logger.info(f"Running suite {name}")
            try:
                checks = func(options)
            except KoenigsError as e:
                logger.warning(f"Suite {name} aborted: {type(e).__name__}: {e}")
                checks = [CheckResult(name=name, passed=False, detail=f"{type(e).__name__}: {e}")]

            report = SuiteReport(suite=name, checks=checks)
            failed = [c.name for c in checks if not c.passed]
            if failed:
                logger.warning(f"Suite {name}: {len(failed)} failed check(s): {', '.join(failed)}")
            else:
                logger.info(f"Suite {name}: {len(checks)} check(s) passed")
            return report

        target[name] = wrapper
        return wrapper

    return decorator
