"""
Tests for harmonic measure.
"""

import cmath
import math

import numpy as np
import pytest

from koenigs.config import koenigs_config
from koenigs.domains import HalfParabola, HalfPlaneLeft, HalfPlaneRight, VerticalStrip
from koenigs.exceptions import DomainError, PreconditionError
from koenigs.harmonic_measure import (
    hm_halfplane_ray,
    hm_wos,
    iR_plus_indicator,
    vt_via_hm,
)
from koenigs.rng import CounterStream


def test_halfplane_ray_exact():
    """Test the closed-form harmonic measure in the half-plane"""
    assert hm_halfplane_ray(1 + 0j) == pytest.approx(0.5)
    assert hm_halfplane_ray(1 + 1j) == pytest.approx(0.75)
    assert hm_halfplane_ray(1 - 1j) == pytest.approx(0.25)


def test_halfplane_ray_rejects_outside():
    """Test points off the half-plane raise DomainError"""
    with pytest.raises(DomainError):
        hm_halfplane_ray(-1 + 1j)


def test_sin_relation():
    """Test sin(pi omega) = cos(theta) on the unit circle"""
    for theta in np.linspace(-1.5, 1.5, 31):
        omega = hm_halfplane_ray(cmath.rect(1.0, theta))
        assert math.sin(math.pi * omega) == pytest.approx(math.cos(theta), abs=1e-12)


def test_indicator():
    """Test the indicator of the upper imaginary semi-axis"""
    values = iR_plus_indicator(np.array([2j, -2j, 1 + 1j, 0j, 1e-12 + 5j]))

    assert values.tolist() == [1.0, 0.0, 0.0, 0.0, 1.0]


def test_wos_half_plane():
    """Test walk-on-spheres against the exact value 3/4 at 1+i"""
    estimate = hm_wos(HalfPlaneRight(), 1 + 1j, n=20_000, seed=7)

    assert estimate.valid
    assert estimate.n_excluded == 0
    assert abs(estimate.value - 0.75) <= 3.0 * estimate.stderr
    assert estimate.stderr < 0.01


def test_wos_is_deterministic():
    """Test the same seed gives the same estimate"""
    first = hm_wos(HalfPlaneRight(), 2 + 1j, n=3000, seed=11)
    second = hm_wos(HalfPlaneRight(), 2 + 1j, n=3000, seed=11)

    assert first == second


def test_wos_independent_of_chunking(small_chunks):
    """Test chunk size and worker count do not change the estimate"""
    chunked = hm_wos(HalfPlaneRight(), 1 + 1j, n=4000, seed=5)

    koenigs_config.THREADS = 4
    threaded = hm_wos(HalfPlaneRight(), 1 + 1j, n=4000, seed=5)

    koenigs_config.WOS_CHUNK_SIZE = 16_384
    koenigs_config.THREADS = 1
    whole = hm_wos(HalfPlaneRight(), 1 + 1j, n=4000, seed=5)

    assert chunked.value == pytest.approx(whole.value, rel=1e-12)
    assert threaded.value == pytest.approx(whole.value, rel=1e-12)
    assert chunked.n_walks == whole.n_walks


def test_wos_preconditions():
    """Test invalid walk parameters are rejected"""
    with pytest.raises(DomainError):
        hm_wos(HalfPlaneRight(), -1 + 1j)
    with pytest.raises(PreconditionError):
        hm_wos(HalfPlaneRight(), 1 + 1j, eps=0.1)
    with pytest.raises(PreconditionError):
        hm_wos(HalfPlaneRight(), 1 + 1j, n=500)


def test_estimate_to_dict():
    """Test the JSON form of an estimate"""
    estimate = hm_wos(HalfPlaneRight(), 1 + 1j, n=1000, seed=1)

    document = estimate.to_dict()

    assert set(document) == {
        "value",
        "stderr",
        "n_walks",
        "eps_shell",
        "n_excluded",
        "n_escaped",
        "valid",
    }
    assert document["eps_shell"] == 1e-4


def test_vt_via_hm_half_plane():
    """Test the tangential surrogate at 1+i in the half-plane"""
    result = vt_via_hm(HalfPlaneRight(), 1, 1.0, n=20_000, seed=3)

    assert not result.flagged
    expected = -0.5 * math.log(math.sin(math.pi * result.omega.value))
    assert result.value == pytest.approx(expected)
    assert abs(result.value - 0.25 * math.log(2.0)) < 4.0 * result.stderr + 1e-3


def test_vt_via_hm_preconditions():
    """Test domains off the right half-plane or of the wrong type are rejected"""
    with pytest.raises(PreconditionError):
        vt_via_hm(HalfPlaneLeft(), -1, 1.0)
    with pytest.raises(PreconditionError):
        vt_via_hm(VerticalStrip(0.0, math.pi), 1, 1.0)


@pytest.mark.slow
def test_wos_half_parabola():
    """Test the estimate high up in the half-parabola favours the axis"""
    estimate = hm_wos(HalfParabola(2.0, 1.0), 1 + 100j, n=5000, seed=1)

    assert estimate.valid
    assert 0.5 < estimate.value < 1.0


@pytest.mark.slow
def test_wos_matches_exact_values():
    """Test walk-on-spheres agrees with the exact half-plane value at 20 points"""
    points = CounterStream(2024).points_in_box(20, (0.5, 3.0), (-2.0, 2.0))

    for z in points:
        estimate = hm_wos(HalfPlaneRight(), complex(z), n=100_000, seed=7)

        assert estimate.valid
        assert abs(estimate.value - hm_halfplane_ray(complex(z))) <= 3.0 * estimate.stderr


@pytest.mark.slow
def test_wos_domain_monotonicity():
    """Test the measure of the axis grows with the domain"""
    point = 0.5 + 4j
    small = hm_wos(HalfParabola(2.0, 2.0), point, n=20_000, seed=7)
    large = hm_wos(HalfParabola(2.0, 0.5), point, n=20_000, seed=7)
    whole = hm_wos(HalfPlaneRight(), point, n=20_000, seed=7)

    for inner, outer in ((small, large), (large, whole)):
        combined = math.hypot(inner.stderr, outer.stderr)
        assert inner.value <= outer.value + 3.0 * combined


@pytest.mark.slow
def test_wos_grows_up_the_half_parabola():
    """Test the measure of the axis increases as the point moves up"""
    low = hm_wos(HalfParabola(2.0, 1.0), 1 + 2j, n=20_000, seed=7)
    high = hm_wos(HalfParabola(2.0, 1.0), 1 + 8j, n=20_000, seed=7)

    assert 0.0 < low.value < high.value < 1.0


@pytest.mark.slow
@pytest.mark.parametrize(
    "domain, point",
    [(HalfPlaneRight(), 1 + 1j), (HalfParabola(2.0, 1.0), 1 + 2j)],
    ids=["half-plane", "half-parabola"],
)
def test_wos_shell_bias(domain, point):
    """Test halving the shell width moves the estimate by less than 2 stderr"""
    coarse = hm_wos(domain, point, eps=1e-3, n=20_000, seed=7)
    fine = hm_wos(domain, point, eps=5e-4, n=20_000, seed=7)

    assert abs(coarse.value - fine.value) < 2.0 * max(coarse.stderr, fine.stderr)


@pytest.mark.slow
def test_vt_via_hm_nested_pair():
    """Test the surrogate on the smaller half-parabola stays within 1 of the larger one"""
    for t in (10.0, 100.0):
        small = vt_via_hm(HalfParabola(2.0, 2.0), 0.5 + 2j, t, n=20_000, seed=7)
        large = vt_via_hm(HalfParabola(2.0, 0.5), 0.5 + 2j, t, n=20_000, seed=7)

        assert small.value >= large.value - 1.0
