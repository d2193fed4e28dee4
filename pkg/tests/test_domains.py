"""
Tests for domain descriptors, boundary distances and slope classification.
"""

import math

import numpy as np
import pytest

from koenigs.conformal import phi_alpha
from koenigs.domains import (
    Clipped,
    HalfParabola,
    HalfPlaneLeft,
    HalfPlaneRight,
    KoenigsImage,
    ModelKind,
    OmegaFamily,
    Polyline,
    Sector,
    SlopeKind,
    VerticalStrip,
    classify_model,
    contains,
    delta,
    domain_from_json,
    domain_to_json,
    nesting_shift,
    parabola_polyline,
    quasi_geodesic_sigma,
    sample_interior,
    slope_classify,
    split_domain,
)
from koenigs.exceptions import DomainError, InconclusiveError, PreconditionError
from koenigs.rng import CounterStream


def test_membership_of_basic_shapes():
    """Test contains on half-planes, strips and sectors"""
    assert contains(HalfPlaneRight(), 1 + 5j)
    assert not contains(HalfPlaneRight(), -1 + 5j)
    assert contains(HalfPlaneLeft(), -0.1j - 0.1)
    assert contains(VerticalStrip(0.0, math.pi), 1.0 - 100j)
    assert not contains(VerticalStrip(0.0, math.pi), 4.0)
    assert contains(Sector(math.pi / 2), 1 + 1j)
    assert not contains(Sector(math.pi / 2), 1 - 1j)


def test_half_parabola_membership():
    """Test the half-parabola lies above its curve and right of the axis"""
    domain = HalfParabola(2.0, 1.0)

    assert contains(domain, 1 + 2j)
    assert not contains(domain, 2 + 3j)
    assert not contains(domain, -0.1 + 10j)


def test_omega_family_contains_image_of_strip():
    """Test the Omega domain contains the image of its half-strip"""
    domain = OmegaFamily(2.0, 1.0)
    params = domain.params

    inside = phi_alpha(params, complex(0.5 * params.c, params.bottom + 1.0))
    assert domain.contains(inside)
    assert not domain.contains(-1 + 1j)


def test_invalid_parameters_raise():
    """Test descriptors reject empty or degenerate shapes"""
    with pytest.raises(DomainError):
        VerticalStrip(1.0, 0.0)
    with pytest.raises(DomainError):
        Sector(0.0)
    with pytest.raises(DomainError):
        HalfParabola(1.0, 1.0)
    with pytest.raises(DomainError):
        HalfParabola(2.0, -1.0)


def test_non_finite_points_are_outside():
    """Test infinities and NaN are never members"""
    domain = HalfPlaneRight()
    assert not domain.contains(complex(math.inf, 0.0))
    assert not domain.contains(complex(math.nan, 1.0))


def test_translation_and_mirror():
    """Test offsets and reflection move the shape and its real-part range"""
    strip = VerticalStrip(0.0, 1.0).translated(2.0)
    assert strip.re_bounds() == (2.0, 3.0)
    assert strip.contains(2.5)

    mirrored = HalfPlaneRight().mirror()
    assert mirrored.contains(-1.0)
    assert not mirrored.contains(1.0)
    assert mirrored.re_bounds() == (-math.inf, 0.0)

    assert HalfParabola(2.0, 1.0).mirror().contains(-1 + 2j)


def test_delta_half_plane():
    """Test delta in the right half-plane"""
    assert delta(HalfPlaneRight(), 1, 3) == (3.0, 1.0)


def test_delta_strip_is_capped():
    """Test delta in a strip saturates at the half-width"""
    plus, minus = delta(VerticalStrip(0.0, math.pi), math.pi / 2, 10.0)

    assert plus == pytest.approx(math.pi / 2)
    assert minus == pytest.approx(math.pi / 2)


def test_delta_at_zero():
    """Test delta vanishes at t=0"""
    assert delta(HalfParabola(2.0, 1.0), 1 + 2j, 0.0) == (0.0, 0.0)


def test_delta_rejects_bad_input():
    """Test delta raises for a base point outside or negative t"""
    with pytest.raises(DomainError):
        delta(HalfPlaneRight(), -1, 1.0)
    with pytest.raises(DomainError):
        delta(HalfPlaneRight(), 1, -1.0)


def test_quasi_geodesic_sigma():
    """Test sigma(t) in a translated half-plane"""
    domain = HalfPlaneRight().translated(-1.0)

    assert quasi_geodesic_sigma(domain, 0, 3.0) == pytest.approx(1 + 3j)
    assert quasi_geodesic_sigma(domain, 0, 0.0) == 0j


def test_boundary_distance_on_parabola():
    """Test nearest boundary point of the half-parabola"""
    domain = HalfParabola(2.0, 1.0)

    dist, points = domain.nearest_boundary(np.array([0.5 + 5j]))

    assert dist[0] == pytest.approx(0.5, abs=1e-9)
    assert points[0] == pytest.approx(5j, abs=1e-9)


def test_slope_classify_strip_is_non_tangential():
    """Test a strip gives a non-tangential verdict"""
    verdict = slope_classify(VerticalStrip(0.0, math.pi), math.pi / 2, 1e4, 40)

    assert verdict.kind == SlopeKind.NON_TANGENTIAL
    assert abs(verdict.drift) < 0.05
    assert len(verdict.trace) == 40
    assert verdict.describe() == "non-tangential"


def test_slope_classify_half_parabola():
    """Test the half-parabola and its mirror give opposite tangential slopes"""
    domain = HalfParabola(2.0, 1.0)

    minus = slope_classify(domain, 1 + 2j, 1e6, 40)
    plus = slope_classify(domain.mirror(), -1 + 2j, 1e6, 40)

    assert minus.kind == SlopeKind.TANGENTIAL_MINUS_HALF_PI
    assert minus.drift == pytest.approx(0.5, abs=0.05)
    assert plus.kind == SlopeKind.TANGENTIAL_PLUS_HALF_PI


def test_slope_classify_preconditions():
    """Test slope_classify rejects short grids"""
    with pytest.raises(PreconditionError):
        slope_classify(HalfPlaneRight(), 1, 50.0, 40)
    with pytest.raises(PreconditionError):
        slope_classify(HalfPlaneRight(), 1, 1e4, 5)


def test_classify_model():
    """Test model types from the real-part range"""
    strip = classify_model(VerticalStrip(0.0, math.pi))
    assert strip.kind == ModelKind.HYPERBOLIC
    assert strip.spectral_value == pytest.approx(1.0)
    assert not strip.is_parabolic

    assert classify_model(HalfPlaneRight()).kind == ModelKind.PARABOLIC_POSITIVE_STEP
    assert classify_model(HalfParabola(2.0, 1.0)).kind == ModelKind.PARABOLIC_POSITIVE_STEP
    assert classify_model(parabola_polyline()).kind == ModelKind.PARABOLIC_ZERO_STEP
    assert str(classify_model(HalfPlaneRight())) == "ParabolicPositiveStep"


def test_json_round_trip():
    """Test descriptors survive a JSON round trip"""
    for domain in (
        HalfParabola(2.0, 1.0).translated(1j),
        VerticalStrip(0.0, 2.0).mirror(),
        Sector(math.pi / 3),
        Polyline((0j, 1 + 1j, 2 + 1j)),
    ):
        assert domain_from_json(domain_to_json(domain)) == domain


def test_json_clipped_round_trip():
    """Test a clipped descriptor keeps its base and slab"""
    clipped = Clipped(HalfPlaneRight(), re_max=2.5)

    restored = domain_from_json(domain_to_json(clipped))

    assert isinstance(restored, Clipped)
    assert restored.base == HalfPlaneRight()
    assert restored.re_min == -math.inf
    assert restored.re_max == 2.5


def test_json_errors():
    """Test unknown variants and missing parameters raise DomainError"""
    with pytest.raises(DomainError):
        domain_from_json('{"variant": "Disc", "params": {}}')
    with pytest.raises(DomainError):
        domain_from_json({"variant": "VerticalStrip", "params": {"a": 0}})


def test_polyline_validation():
    """Test Polyline rejects bad vertices and directions"""
    with pytest.raises(DomainError):
        Polyline(())
    with pytest.raises(DomainError):
        Polyline((1 + 0j, 0j))
    with pytest.raises(DomainError):
        Polyline((0j, 1 + 0j), left_dir=1 + 1j)
    with pytest.raises(DomainError):
        Polyline((0j,))


def test_polyline_graph_and_membership():
    """Test the region above a polygonal graph"""
    poly = Polyline((0j, 1 + 1j))

    assert poly.graph(np.array([0.5]))[0] == pytest.approx(0.5)
    assert poly.contains(0.5 + 1j)
    assert not poly.contains(0.5 + 0.2j)
    assert not poly.contains(-0.5 + 10j)
    assert poly.re_bounds() == (0.0, 1.0)


def test_polyline_canonical_matches_mirror():
    """Test the canonical form of a mirrored polyline has the same points"""
    mirrored = Polyline((0j, 1 + 1j)).mirror()
    canonical = mirrored.canonical()

    assert not canonical.mirrored
    assert canonical.vertices == (-1 + 1j, 0j)
    for z in (-0.5 + 0.7j, -0.5 + 0.3j, 0.5 + 1j):
        assert canonical.contains(z) == mirrored.contains(z)


def test_split_domain_half_plane():
    """Test splitting the half-plane along two cuts"""
    right, left = split_domain(HalfPlaneRight(), 2 + 0j, 0.5)

    assert right.contains(1.6) and not right.contains(1.4)
    assert left.contains(2.4) and not left.contains(2.6)
    assert left.contains(0.5)

    dist, _ = left.nearest_boundary(np.array([2 + 0j]))
    assert dist[0] == pytest.approx(0.5)


def test_split_domain_polyline():
    """Test splitting a polyline keeps polylines"""
    right, left = split_domain(parabola_polyline(), 5j, 0.5)

    assert isinstance(right, Polyline)
    assert isinstance(left, Polyline)
    assert right.contains(1 + 5j) and not right.contains(-1 + 5j)
    assert left.contains(-1 + 5j) and not left.contains(1 + 5j)


def test_split_domain_needs_room():
    """Test split_domain refuses a disc that leaves the domain"""
    with pytest.raises(PreconditionError):
        split_domain(HalfPlaneRight(), 0.1 + 0j, 0.5)
    with pytest.raises(PreconditionError):
        split_domain(HalfPlaneRight(), 2 + 0j, 0.0)


def test_nesting_shift():
    """Test the vertical shift that nests one domain in another"""
    assert nesting_shift(HalfParabola(2.0, 1.0), HalfPlaneRight()) == 0.0

    shift = nesting_shift(HalfPlaneRight(), HalfParabola(2.0, 1.0))
    assert 8.0 < shift <= 32.0

    with pytest.raises(PreconditionError):
        nesting_shift(HalfPlaneRight(), VerticalStrip(0.0, 1.0))


def test_koenigs_image_membership_only():
    """Test a Koenigs image answers membership and nothing else"""
    image = KoenigsImage(inverse=lambda z: z, threshold=1.0)

    assert image.contains(2 + 0j)
    assert not image.contains(0.5 + 0j)
    with pytest.raises(InconclusiveError):
        image.re_bounds()
    with pytest.raises(InconclusiveError):
        classify_model(image)
    with pytest.raises(DomainError):
        image.to_params()


STARLIKE_CASES = [
    (HalfPlaneRight(), 1 + 0j),
    (HalfPlaneLeft(), -1 + 0j),
    (VerticalStrip(0.0, math.pi), complex(math.pi / 2, 0.0)),
    (Sector(math.pi / 2), 1 + 2j),
    (HalfParabola(2.0, 1.0), 1 + 2j),
    (OmegaFamily(2.0, 1.0), 0.5 + 0.9375j),
    (Polyline((0j, 1 + 1j)), 0.5 + 2j),
    (Clipped(HalfPlaneRight(), re_max=2.5), 1 + 0j),
]
STARLIKE_IDS = [type(domain).__name__ for domain, _ in STARLIKE_CASES]
SIGMA_TIMES = [0.0, 1e-2, 0.1, 1.0, 10.0, 100.0, 1e3, 1e4]


@pytest.mark.parametrize("domain,p", STARLIKE_CASES, ids=STARLIKE_IDS)
def test_upward_shifts_stay_inside(domain, p):
    """Test z + it stays in the domain for sampled z and t >= 0"""
    points = sample_interior(domain, 1000)
    shifts = 20.0 * CounterStream(11).uniform(np.arange(points.size), 0)

    assert points.size == 1000
    assert np.all(domain.contains_many(points + 1j * shifts))


@pytest.mark.parametrize("domain,p", STARLIKE_CASES, ids=STARLIKE_IDS)
def test_sigma_stays_inside(domain, p):
    """Test sigma(t) lies in the domain once Re p is moved to 0"""
    moved = domain.translated(-p.real)
    base = 1j * p.imag

    for t in SIGMA_TIMES:
        assert moved.contains(quasi_geodesic_sigma(moved, base, t))


@pytest.mark.parametrize("domain,p", STARLIKE_CASES, ids=STARLIKE_IDS)
def test_delta_is_positive_and_capped(domain, p):
    """Test 0 < delta(t) <= t on both sides"""
    for t in SIGMA_TIMES[1:]:
        plus, minus = delta(domain, p, t)
        assert 0.0 < plus <= t
        assert 0.0 < minus <= t


def test_half_parabola_left_distance_stays_bounded():
    """Test delta- at 1 + 2i never exceeds the distance to the imaginary axis"""
    _, minus = delta(HalfParabola(2.0, 1.0), 1 + 2j, 1e6)

    assert minus <= 1.0 + 1e-9
