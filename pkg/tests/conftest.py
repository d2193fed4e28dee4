"""
Pytest configuration and shared fixtures.
"""

import math

import pytest

from koenigs.config import koenigs_config
from koenigs.semigroups import (
    HalfParabolaSemigroup,
    HyperbolicGroup,
    OmegaSemigroup,
    ParabolicAutoMinus,
    ParabolicAutoPlus,
    SectorFamily,
)


@pytest.fixture(autouse=True)
def reset_config():
    """Reset numerical config after each test"""
    original_values = koenigs_config.model_dump()

    yield

    # Restore original values
    for key, value in original_values.items():
        setattr(koenigs_config, key, value)


@pytest.fixture
def small_chunks():
    """Force several walk chunks per estimate"""
    koenigs_config.WOS_CHUNK_SIZE = 1000
    yield koenigs_config


@pytest.fixture
def omega_21():
    """Omega semigroup with alpha=2, mu=1"""
    return OmegaSemigroup(2.0, 1.0)


@pytest.fixture(
    params=[
        ParabolicAutoPlus(),
        ParabolicAutoMinus(),
        HyperbolicGroup(1.0),
        SectorFamily(math.pi / 2),
        OmegaSemigroup(2.0, 1.0),
        HalfParabolaSemigroup(1.0),
    ],
    ids=repr,
)
def any_model(request):
    """Each closed-form family"""
    return request.param
