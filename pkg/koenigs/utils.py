"""
Common utilities for the koenigs package.
"""

import logging
import math
import os
import tempfile
from pathlib import Path
from typing import Optional, Union

import numpy as np

from koenigs.config import koenigs_config
from koenigs.exceptions import PreconditionError

logger = logging.getLogger(__name__)


def parse_log_grid(text: str) -> np.ndarray:
    """
    Parse a logarithmic grid description of the form ``log:t_min:t_max:points``.

    Args:
        text: Grid description, e.g. ``"log:1:1e6:60"``

    Returns:
        Array of ``points`` values spaced evenly in log t

    Raises:
        PreconditionError: On malformed input, non-positive bounds or an empty grid

    Example:
        >>> parse_log_grid("log:1:100:3")
        array([  1.,  10., 100.])
    """
    parts = text.split(":")
    if len(parts) != 4 or parts[0] != "log":
        raise PreconditionError(f"Grid must look like log:t_min:t_max:points, got {text!r}")

    try:
        t_min = float(parts[1])
        t_max = float(parts[2])
        points = int(float(parts[3]))
    except ValueError as e:
        raise PreconditionError(f"Invalid grid {text!r}: {e}") from e

    return log_grid(t_min, t_max, points)


def log_grid(t_min: float, t_max: float, points: Optional[int] = None) -> np.ndarray:
    """
    Build a logarithmic grid on [t_min, t_max].

    When ``points`` is omitted the density is GRID_POINTS_PER_DECADE.
    """
    if not (math.isfinite(t_min) and math.isfinite(t_max)):
        raise PreconditionError("Grid bounds must be finite")
    if t_min <= 0 or t_max < t_min:
        raise PreconditionError(f"Grid bounds must satisfy 0 < t_min <= t_max, got {t_min}, {t_max}")

    if points is None:
        decades = math.log10(t_max / t_min)
        points = max(2, int(math.ceil(decades * koenigs_config.GRID_POINTS_PER_DECADE)) + 1)

    if points < 1:
        raise PreconditionError("Grid is empty")
    if points == 1:
        return np.array([t_min])

    return np.geomspace(t_min, t_max, points)


def default_grid(t_min: float = 1.0, t_max: Optional[float] = None) -> np.ndarray:
    """Default logarithmic t grid, capped at GRID_T_CAP"""
    upper = koenigs_config.GRID_T_CAP if t_max is None else min(t_max, koenigs_config.GRID_T_CAP)
    return log_grid(t_min, upper)


def format_float(value: float) -> str:
    """Round-trip safe decimal representation (17 significant digits)"""
    return f"{value:.17g}"


def atomic_write(path: Union[str, Path], content: str) -> None:
    """
    Write text to ``path`` so that readers never observe a partial file.

    Content goes to a temporary file in the target directory which is
    then renamed over the destination.
    """
    target = Path(path)
    directory = target.parent if str(target.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(content)
        os.replace(tmp_name, target)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except FileNotFoundError:
            pass
        raise

    logger.debug(f"Wrote {len(content)} characters to {target}")
