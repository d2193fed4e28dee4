"""
Tests for configuration module.
"""

import pytest
from pydantic import ValidationError

from koenigs.config import KoenigsConfig, koenigs_config


def test_config_defaults():
    """Test default configuration values"""
    config = KoenigsConfig()

    assert config.THREADS == 1
    assert config.LOG_LEVEL == "INFO"
    assert config.NEWTON_TOL == 1e-12
    assert config.NEWTON_MAX_ITER == 100
    assert config.WOS_MAX_STEPS == 100_000
    assert config.WOS_ESCAPE_FACTOR == 1e6
    assert config.WOS_MAX_EXCLUDED_FRACTION == 0.01
    assert config.GRID_POINTS_PER_DECADE == 50
    assert config.GRID_T_CAP == 1e8
    assert config.INEQUALITY_TOL == 1e-9
    assert config.SLOPE_RATIO_BOUND == 10.0


def test_env_prefix(monkeypatch):
    """Test KOENIGS_ environment variables override defaults"""
    monkeypatch.setenv("KOENIGS_THREADS", "4")
    monkeypatch.setenv("KOENIGS_NEWTON_TOL", "1e-10")

    config = KoenigsConfig()

    assert config.THREADS == 4
    assert config.NEWTON_TOL == 1e-10


def test_threads_must_be_positive():
    """Test THREADS lower bound"""
    with pytest.raises(ValidationError):
        KoenigsConfig(THREADS=0)


def test_worker_count_is_capped(monkeypatch):
    """Test worker_count never exceeds the CPU count"""
    monkeypatch.setattr("koenigs.config.os.cpu_count", lambda: 2)

    assert KoenigsConfig(THREADS=16).worker_count == 2
    assert KoenigsConfig(THREADS=1).worker_count == 1


def test_golden_iterations():
    """Test golden-section step count"""
    config = KoenigsConfig()

    assert config.golden_iterations(1e-12) == 1
    assert config.golden_iterations(1.0, tol=0.5) == 2
    assert config.golden_iterations(1e100, tol=1e-100) == 200


def test_singleton_is_mutable():
    """Test the module singleton accepts runtime overrides"""
    koenigs_config.WOS_CHUNK_SIZE = 10
    assert koenigs_config.WOS_CHUNK_SIZE == 10
