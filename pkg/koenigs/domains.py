"""
Koenigs domains: descriptors of domains starlike at infinity.

Every descriptor is an immutable dataclass built from a base shape plus an
optional translation and reflection across the imaginary axis:

    Omega = offset + M(base),   M(u) = -conj(u) when mirrored

Shapes answer membership queries and boundary-distance queries. The boundary
of each shape is a list of pieces (segments, rays and monotone curves); the
distance machinery here serves both the quantities delta+/delta- and the
walk-on-spheres solver.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any, Callable, ClassVar, Optional, Union

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import brentq

from koenigs.config import koenigs_config
from koenigs.conformal import OmegaParams, gamma2, gamma3, phi_alpha
from koenigs.exceptions import DomainError, InconclusiveError, PreconditionError
from koenigs.rng import CounterStream

logger = logging.getLogger(__name__)

INF = math.inf
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

ArrayLike = Union[complex, float, np.ndarray]


# ---------------------------------------------------------------------------
# Model classification
# ---------------------------------------------------------------------------


class ModelKind(str, Enum):
    """Canonical model of a non-elliptic semigroup"""

    HYPERBOLIC = "hyperbolic"
    PARABOLIC_POSITIVE_STEP = "parabolic-positive-step"
    PARABOLIC_ZERO_STEP = "parabolic-zero-step"


@dataclass(frozen=True)
class ModelType:
    kind: ModelKind
    spectral_value: float = 0.0

    @property
    def is_parabolic(self) -> bool:
        return self.kind != ModelKind.HYPERBOLIC

    def __str__(self) -> str:
        if self.kind == ModelKind.HYPERBOLIC:
            return f"Hyperbolic(lambda={self.spectral_value:.12g})"
        if self.kind == ModelKind.PARABOLIC_POSITIVE_STEP:
            return "ParabolicPositiveStep"
        return "ParabolicZeroStep"


# ---------------------------------------------------------------------------
# Boundary pieces
# ---------------------------------------------------------------------------


def _empty_result(shape: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    return np.full(shape, INF), np.full(shape, complex(np.nan, np.nan))


def golden_minimize(
    f: Callable[[np.ndarray], np.ndarray],
    a: np.ndarray,
    b: np.ndarray,
    iterations: int,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Elementwise golden-section search of f on the brackets [a, b].

    Returns:
        (argmin, min) arrays
    """
    a = np.array(a, dtype=np.float64)
    b = np.array(b, dtype=np.float64)
    c = b - GOLDEN * (b - a)
    d = a + GOLDEN * (b - a)
    fc = f(c)
    fd = f(d)

    for _ in range(iterations):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        keep = np.where(left, c, d)
        f_keep = np.where(left, fc, fd)
        trial = np.where(left, b - GOLDEN * (b - a), a + GOLDEN * (b - a))
        f_trial = f(trial)
        c = np.where(left, trial, keep)
        fc = np.where(left, f_trial, f_keep)
        d = np.where(left, keep, trial)
        fd = np.where(left, f_keep, f_trial)

    x = np.where(fc < fd, c, d)
    return x, np.minimum(fc, fd)


@dataclass(frozen=True)
class LinePiece:
    """Segment or ray origin + s*direction, s in [s_lo, s_hi], unit direction"""

    origin: complex
    direction: complex
    s_lo: float = 0.0
    s_hi: float = INF

    @property
    def is_vertical(self) -> bool:
        return abs(self.direction.real) < 1e-15

    def window(self, x_lo: float, x_hi: float) -> Optional[tuple[float, float]]:
        """Parameter interval of the part with x_lo <= Re <= x_hi"""
        if self.is_vertical:
            if x_lo <= self.origin.real <= x_hi:
                return self.s_lo, self.s_hi
            return None

        dx = self.direction.real
        a = (x_lo - self.origin.real) / dx
        b = (x_hi - self.origin.real) / dx
        if dx < 0:
            a, b = b, a
        lo = max(self.s_lo, a)
        hi = min(self.s_hi, b)
        if lo > hi:
            return None
        return lo, hi

    def nearest(
        self, q: np.ndarray, x_lo: float, x_hi: float, cap: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        window = self.window(x_lo, x_hi)
        if window is None:
            return _empty_result(q.shape)

        s = np.real((q - self.origin) * np.conj(self.direction))
        s = np.clip(s, window[0], window[1])
        points = self.origin + s * self.direction
        return np.abs(points - q), points


@dataclass(frozen=True, eq=False)
class CurvePiece:
    """
    Smooth boundary arc with strictly increasing real part.

    ``bounds(q, d)`` must return a parameter bracket containing every
    curve point within distance d of q.
    """

    point: Callable[[np.ndarray], np.ndarray]
    bounds: Callable[[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]
    s_lo: float
    s_hi: float = INF

    def _re(self, s: float) -> float:
        return float(self.point(np.array([s]))[0].real)

    def _solve_re(self, x: float) -> float:
        upper = max(2.0 * abs(self.s_lo), self.s_lo + 1.0)
        if math.isfinite(self.s_hi):
            upper = self.s_hi
        else:
            for _ in range(400):
                if self._re(upper) >= x:
                    break
                upper = self.s_lo + 2.0 * (upper - self.s_lo)
        return float(brentq(lambda s: self._re(s) - x, self.s_lo, upper, xtol=1e-14))

    def window(self, x_lo: float, x_hi: float) -> Optional[tuple[float, float]]:
        re_start = self._re(self.s_lo)
        re_end = self._re(self.s_hi) if math.isfinite(self.s_hi) else INF
        if x_hi < re_start or x_lo > re_end:
            return None

        lo = self.s_lo if x_lo <= re_start else self._solve_re(x_lo)
        hi = self.s_hi if x_hi >= re_end else self._solve_re(x_hi)
        return lo, hi

    def nearest(
        self, q: np.ndarray, x_lo: float, x_hi: float, cap: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        window = self.window(x_lo, x_hi)
        if window is None or q.size == 0:
            return _empty_result(q.shape)
        w_lo, w_hi = window
        cfg = koenigs_config

        start = self.point(np.full(q.shape, w_lo))
        cap_eff = np.minimum(cap, np.abs(start - q))
        lo, hi = self.bounds(q, cap_eff)
        lo = np.clip(lo, w_lo, w_hi)
        hi = np.clip(hi, w_lo, w_hi)
        hi = np.maximum(hi, lo)

        # coarse grid, then golden section between the neighbours of the best seed
        weights = np.linspace(0.0, 1.0, cfg.GOLDEN_SEEDS)
        seeds = lo[:, None] + (hi - lo)[:, None] * weights[None, :]
        coarse = np.abs(self.point(seeds) - q[:, None])
        k = np.argmin(coarse, axis=1)
        rows = np.arange(q.size)
        a = seeds[rows, np.maximum(k - 1, 0)]
        b = seeds[rows, np.minimum(k + 1, cfg.GOLDEN_SEEDS - 1)]

        iterations = cfg.golden_iterations(float(np.max(b - a)) if q.size else 0.0)
        s, fs = golden_minimize(lambda s: np.abs(self.point(s) - q), a, b, iterations)

        coarse_best = coarse[rows, k]
        s = np.where(fs < coarse_best, s, seeds[rows, k])
        points = self.point(s)
        return np.abs(points - q), points


Piece = Union[LinePiece, CurvePiece]


def _nearest_over(
    pieces: list[Piece], q: np.ndarray, x_lo: float, x_hi: float, cap: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    dist, points = _empty_result(q.shape)
    for piece in pieces:
        d, p = piece.nearest(q, x_lo, x_hi, cap)
        better = d < dist
        dist = np.where(better, d, dist)
        points = np.where(better, p, points)
    return dist, points


# ---------------------------------------------------------------------------
# Descriptors
# ---------------------------------------------------------------------------


class DomainDocument(BaseModel):
    """JSON form of a domain descriptor"""

    variant: str
    params: dict[str, Any] = Field(default_factory=dict)
    offset: tuple[float, float] = (0.0, 0.0)
    mirrored: bool = False


@dataclass(frozen=True)
class StarlikeDomain(ABC):
    """
    Base class of all domain descriptors.

    Subclasses describe the base shape in local coordinates; this class
    handles translation, reflection and the vectorized query surface.
    """

    offset: complex = field(default=0j, kw_only=True)
    mirrored: bool = field(default=False, kw_only=True)

    variant: ClassVar[str] = ""

    # -- shape interface --------------------------------------------------

    @abstractmethod
    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        """Membership of local points"""

    @abstractmethod
    def _pieces(self) -> list[Piece]:
        """Boundary pieces in local coordinates"""

    @abstractmethod
    def _local_re_bounds(self) -> tuple[float, float]:
        """Infimum and supremum of Re over the local shape"""

    @abstractmethod
    def to_params(self) -> dict[str, Any]:
        """Variant parameters for the JSON document"""

    # -- coordinates ------------------------------------------------------

    def to_local(self, z: ArrayLike) -> Any:
        u = np.asarray(z, dtype=np.complex128) - self.offset
        return -np.conj(u) if self.mirrored else u

    def to_global(self, u: ArrayLike) -> Any:
        u = np.asarray(u, dtype=np.complex128)
        return self.offset + (-np.conj(u) if self.mirrored else u)

    def _local_window(self, re_min: float, re_max: float) -> tuple[float, float]:
        ox = self.offset.real
        if self.mirrored:
            return ox - re_max, ox - re_min
        return re_min - ox, re_max - ox

    # -- queries ----------------------------------------------------------

    def contains(self, z: complex) -> bool:
        """Membership of a single point"""
        return bool(self.contains_many(np.array([complex(z)]))[0])

    def contains_many(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.complex128)
        finite = np.isfinite(z)
        with np.errstate(all="ignore"):
            inside = self._contains_local(self.to_local(np.where(finite, z, 0j)))
        return np.asarray(inside & finite, dtype=bool)

    def _local_nearest(
        self, u: np.ndarray, x_lo: float, x_hi: float, cap: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        return _nearest_over(self._pieces(), u, x_lo, x_hi, cap)

    def boundary_distance(
        self,
        q: ArrayLike,
        re_min: float = -INF,
        re_max: float = INF,
        cap: ArrayLike = INF,
    ) -> tuple[np.ndarray, np.ndarray]:
        """
        Distance from q to the part of the boundary with re_min <= Re <= re_max.

        Args:
            q: Query point(s)
            re_min: Lower bound of the boundary window
            re_max: Upper bound of the boundary window
            cap: Distances beyond cap may be reported inexactly (but never below cap)

        Returns:
            (distances, nearest boundary points), +inf where the window is empty
        """
        q_arr = np.atleast_1d(np.asarray(q, dtype=np.complex128))
        cap_arr = np.broadcast_to(np.asarray(cap, dtype=np.float64), q_arr.shape)
        x_lo, x_hi = self._local_window(re_min, re_max)
        with np.errstate(all="ignore"):
            dist, points = self._local_nearest(self.to_local(q_arr), x_lo, x_hi, cap_arr)
        return dist, self.to_global(points)

    def nearest_boundary(self, qs: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        """Distance to the whole boundary and the nearest boundary points"""
        return self.boundary_distance(qs)

    def re_bounds(self) -> tuple[float, float]:
        """Infimum and supremum of Re over the domain"""
        lo, hi = self._local_re_bounds()
        ox = self.offset.real
        if self.mirrored:
            return ox - hi, ox - lo
        return ox + lo, ox + hi

    def lies_in_right_halfplane(self) -> bool:
        return self.re_bounds()[0] >= 0.0

    # -- transformations --------------------------------------------------

    def translated(self, shift: complex) -> "StarlikeDomain":
        return replace(self, offset=self.offset + complex(shift))

    def mirror(self) -> "StarlikeDomain":
        """Reflection across the imaginary axis"""
        return replace(self, offset=-complex(self.offset).conjugate(), mirrored=not self.mirrored)

    def to_document(self) -> DomainDocument:
        return DomainDocument(
            variant=self.variant,
            params=self.to_params(),
            offset=(self.offset.real, self.offset.imag),
            mirrored=self.mirrored,
        )


@dataclass(frozen=True)
class HalfPlaneRight(StarlikeDomain):
    """{Re z > 0}"""

    variant: ClassVar[str] = "HalfPlaneRight"

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        return u.real > 0

    def _pieces(self) -> list[Piece]:
        return [LinePiece(0j, 1j, -INF, INF)]

    def _local_re_bounds(self) -> tuple[float, float]:
        return 0.0, INF

    def to_params(self) -> dict[str, Any]:
        return {}


@dataclass(frozen=True)
class HalfPlaneLeft(StarlikeDomain):
    """{Re z < 0}"""

    variant: ClassVar[str] = "HalfPlaneLeft"

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        return u.real < 0

    def _pieces(self) -> list[Piece]:
        return [LinePiece(0j, 1j, -INF, INF)]

    def _local_re_bounds(self) -> tuple[float, float]:
        return -INF, 0.0

    def to_params(self) -> dict[str, Any]:
        return {}


@dataclass(frozen=True)
class VerticalStrip(StarlikeDomain):
    """{a < Re z < b}"""

    a: float
    b: float

    variant: ClassVar[str] = "VerticalStrip"

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise DomainError(f"Strip needs a < b, got a={self.a}, b={self.b}")

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        return (u.real > self.a) & (u.real < self.b)

    def _pieces(self) -> list[Piece]:
        return [
            LinePiece(complex(self.a), 1j, -INF, INF),
            LinePiece(complex(self.b), 1j, -INF, INF),
        ]

    def _local_re_bounds(self) -> tuple[float, float]:
        return self.a, self.b

    def to_params(self) -> dict[str, Any]:
        return {"a": self.a, "b": self.b}


@dataclass(frozen=True)
class Sector(StarlikeDomain):
    """
    Sector i{-theta < arg < 0}, i.e. pi/2 - theta < arg z < pi/2.
    """

    theta: float

    variant: ClassVar[str] = "Sector"

    def __post_init__(self) -> None:
        if not 0.0 < self.theta <= math.pi:
            raise DomainError(f"Sector opening must lie in (0, pi], got {self.theta}")

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        return (u.real > 0) & (np.angle(u) > math.pi / 2 - self.theta)

    def _pieces(self) -> list[Piece]:
        return [
            LinePiece(0j, 1j, 0.0, INF),
            LinePiece(0j, complex(np.exp(1j * (math.pi / 2 - self.theta))), 0.0, INF),
        ]

    def _local_re_bounds(self) -> tuple[float, float]:
        return 0.0, INF

    def to_params(self) -> dict[str, Any]:
        return {"theta": self.theta}


@dataclass(frozen=True)
class HalfParabola(StarlikeDomain):
    """Pi_{alpha,m} = {Re z > 0, Im z > m (Re z)^alpha}"""

    alpha: float
    m: float

    variant: ClassVar[str] = "HalfParabola"

    def __post_init__(self) -> None:
        if not self.alpha > 1:
            raise DomainError(f"alpha must exceed 1, got {self.alpha}")
        if not self.m > 0:
            raise DomainError(f"m must be positive, got {self.m}")

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        x = u.real
        return (x > 0) & (u.imag > self.m * np.maximum(x, 0.0) ** self.alpha)

    def _curve(self, s: np.ndarray) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        return s + 1j * self.m * np.maximum(s, 0.0) ** self.alpha

    def _bounds(self, q: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        def height_inverse(v: np.ndarray) -> np.ndarray:
            return (np.maximum(v, 0.0) / self.m) ** (1.0 / self.alpha)

        x, y = q.real, q.imag
        lo = np.maximum(np.maximum(x - d, 0.0), height_inverse(y - d))
        hi = np.minimum(x + d, height_inverse(y + d))
        return lo, hi

    def _pieces(self) -> list[Piece]:
        return [
            LinePiece(0j, 1j, 0.0, INF),
            CurvePiece(self._curve, self._bounds, 0.0, INF),
        ]

    def _local_re_bounds(self) -> tuple[float, float]:
        return 0.0, INF

    def to_params(self) -> dict[str, Any]:
        return {"alpha": self.alpha, "m": self.m}


@dataclass(frozen=True)
class OmegaFamily(StarlikeDomain):
    """
    Omega_{alpha,mu} = Phi_alpha(S_{alpha,mu}).

    The boundary is the ray i[(c/eta)^beta, inf) followed by the curves
    gamma2 (image of the bottom side) and gamma3 (image of the right side).
    """

    alpha: float
    mu: float

    variant: ClassVar[str] = "OmegaFamily"

    def __post_init__(self) -> None:
        OmegaParams(self.alpha, self.mu)

    @cached_property
    def params(self) -> OmegaParams:
        return OmegaParams(self.alpha, self.mu)

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        p = self.params
        quadrant = (u.real > 0) & (u.imag > 0)
        pre = 1j * np.exp(np.log(-1j * np.where(quadrant, u, 1.0)) / p.beta)
        return quadrant & (pre.real > 0) & (pre.real < p.c) & (pre.imag > p.bottom)

    def _gamma3_bounds(self, q: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        p = self.params
        r = np.abs(q)
        exponent = 2.0 / p.beta
        lo = np.sqrt(np.maximum(0.0, np.maximum(r - d, 0.0) ** exponent - p.c**2))
        hi = np.sqrt(np.maximum(0.0, (r + d) ** exponent - p.c**2))
        return lo, hi

    def _gamma2_bounds(self, q: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        return np.zeros(q.shape), np.full(q.shape, self.params.c)

    def _pieces(self) -> list[Piece]:
        p = self.params
        corner = phi_alpha(p, 1j * p.bottom)
        return [
            LinePiece(corner, 1j, 0.0, INF),
            CurvePiece(lambda s: gamma2(p, s), self._gamma2_bounds, 0.0, p.c),
            CurvePiece(lambda T: gamma3(p, T), self._gamma3_bounds, p.bottom, INF),
        ]

    def _local_re_bounds(self) -> tuple[float, float]:
        return 0.0, INF

    def to_params(self) -> dict[str, Any]:
        return {"alpha": self.alpha, "mu": self.mu}


@dataclass(frozen=True)
class Polyline(StarlikeDomain):
    """
    Region above an x-monotone polygonal graph, open upward.

    The graph runs through ``vertices`` (strictly increasing real parts) and
    continues with a ray from the first vertex in ``left_dir`` and a ray from
    the last vertex in ``right_dir``. Vertical end rays (direction i) make
    the region a subset of a half-plane or strip.
    """

    vertices: tuple[complex, ...]
    left_dir: complex = 1j
    right_dir: complex = 1j

    variant: ClassVar[str] = "Polyline"

    def __post_init__(self) -> None:
        vertices = tuple(complex(v) for v in self.vertices)
        if not vertices:
            raise DomainError("Polyline needs at least one vertex")
        xs = np.array([v.real for v in vertices])
        if np.any(np.diff(xs) <= 0):
            raise DomainError("Polyline vertices must have strictly increasing real parts")

        left = complex(self.left_dir)
        right = complex(self.right_dir)
        if not (left.imag > 0 and left.real <= 1e-15):
            raise DomainError(f"left_dir={left} must point up and to the left")
        if not (right.imag > 0 and right.real >= -1e-15):
            raise DomainError(f"right_dir={right} must point up and to the right")

        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "left_dir", left / abs(left))
        object.__setattr__(self, "right_dir", right / abs(right))

        if len(vertices) == 1 and self.left_vertical and self.right_vertical:
            raise DomainError("Polyline with one vertex and two vertical rays is empty")

    @property
    def left_vertical(self) -> bool:
        return abs(self.left_dir.real) < 1e-15

    @property
    def right_vertical(self) -> bool:
        return abs(self.right_dir.real) < 1e-15

    def graph(self, x: np.ndarray) -> np.ndarray:
        """Height of the boundary above x (+inf outside the x-range)"""
        x = np.asarray(x, dtype=np.float64)
        xs = np.array([v.real for v in self.vertices])
        ys = np.array([v.imag for v in self.vertices])
        first, last = self.vertices[0], self.vertices[-1]

        height = np.interp(x, xs, ys)
        if self.left_vertical:
            left = np.full(x.shape, INF)
        else:
            left = first.imag + (x - first.real) * self.left_dir.imag / self.left_dir.real
        if self.right_vertical:
            right = np.full(x.shape, INF)
        else:
            right = last.imag + (x - last.real) * self.right_dir.imag / self.right_dir.real

        height = np.where(x < xs[0], left, height)
        height = np.where(x > xs[-1], right, height)
        if self.left_vertical:
            height = np.where(x <= xs[0], INF, height)
        if self.right_vertical:
            height = np.where(x >= xs[-1], INF, height)
        return height

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        return u.imag > self.graph(u.real)

    def _pieces(self) -> list[Piece]:
        pieces: list[Piece] = [
            LinePiece(self.vertices[0], self.left_dir, 0.0, INF),
            LinePiece(self.vertices[-1], self.right_dir, 0.0, INF),
        ]
        for start, end in zip(self.vertices[:-1], self.vertices[1:]):
            length = abs(end - start)
            pieces.append(LinePiece(start, (end - start) / length, 0.0, length))
        return pieces

    def _local_re_bounds(self) -> tuple[float, float]:
        lo = self.vertices[0].real if self.left_vertical else -INF
        hi = self.vertices[-1].real if self.right_vertical else INF
        return lo, hi

    def canonical(self) -> "Polyline":
        """Equivalent descriptor without offset or reflection"""
        if not self.mirrored:
            return Polyline(
                tuple(v + self.offset for v in self.vertices), self.left_dir, self.right_dir
            )
        vertices = tuple(self.offset - v.conjugate() for v in reversed(self.vertices))
        return Polyline(vertices, -self.right_dir.conjugate(), -self.left_dir.conjugate())

    def to_params(self) -> dict[str, Any]:
        return {
            "vertices": [[v.real, v.imag] for v in self.vertices],
            "left_dir": [self.left_dir.real, self.left_dir.imag],
            "right_dir": [self.right_dir.real, self.right_dir.imag],
        }


@dataclass(frozen=True)
class Clipped(StarlikeDomain):
    """
    Intersection of a domain with the slab re_min < Re z < re_max.

    The boundary is the part of the base boundary inside the slab plus the
    vertical cut rays rising from the lowest point of the base over each cut.
    """

    base: StarlikeDomain
    re_min: float = -INF
    re_max: float = INF

    variant: ClassVar[str] = "Clipped"

    def __post_init__(self) -> None:
        if not self.re_min < self.re_max:
            raise DomainError(f"Empty slab {self.re_min} < Re < {self.re_max}")

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        return self.base.contains_many(u) & (u.real > self.re_min) & (u.real < self.re_max)

    def _lowest_point(self, a: float) -> Optional[float]:
        """inf{y : a + iy in base}, None when the line misses the base"""
        def inside(y: float) -> bool:
            return self.base.contains(complex(a, y))

        top = 1.0
        while not inside(top):
            top = 2.0 * abs(top)
            if top > 1e12:
                return None

        bottom = top - 1.0
        while inside(bottom):
            bottom = top - 2.0 * (top - bottom)
            if bottom < -1e12:
                return -INF

        for _ in range(200):
            middle = 0.5 * (bottom + top)
            if middle in (bottom, top):
                break
            if inside(middle):
                top = middle
            else:
                bottom = middle
        return top

    @cached_property
    def cut_rays(self) -> tuple[LinePiece, ...]:
        rays = []
        for a in (self.re_min, self.re_max):
            if not math.isfinite(a):
                continue
            y0 = self._lowest_point(a)
            if y0 is None:
                continue
            if y0 == -INF:
                rays.append(LinePiece(complex(a, 0.0), 1j, -INF, INF))
            else:
                rays.append(LinePiece(complex(a, y0), 1j, 0.0, INF))
        return tuple(rays)

    def _pieces(self) -> list[Piece]:
        return list(self.cut_rays)

    def _local_nearest(
        self, u: np.ndarray, x_lo: float, x_hi: float, cap: np.ndarray
    ) -> tuple[np.ndarray, np.ndarray]:
        lo = max(x_lo, self.re_min)
        hi = min(x_hi, self.re_max)
        if lo > hi:
            dist, points = _empty_result(u.shape)
        else:
            dist, points = self.base.boundary_distance(u, lo, hi, cap)
        cut_dist, cut_points = _nearest_over(list(self.cut_rays), u, x_lo, x_hi, cap)
        better = cut_dist < dist
        return np.where(better, cut_dist, dist), np.where(better, cut_points, points)

    def _local_re_bounds(self) -> tuple[float, float]:
        lo, hi = self.base.re_bounds()
        return max(lo, self.re_min), min(hi, self.re_max)

    def to_params(self) -> dict[str, Any]:
        return {
            "base": self.base.to_document().model_dump(),
            "re_min": self.re_min if math.isfinite(self.re_min) else None,
            "re_max": self.re_max if math.isfinite(self.re_max) else None,
        }


@dataclass(frozen=True, eq=False)
class KoenigsImage(StarlikeDomain):
    """
    Image H({Re w > threshold}) of a half-plane under a Koenigs map.

    Supports membership only.
    """

    inverse: Callable[[complex], complex]
    threshold: float
    container: Optional[StarlikeDomain] = None

    variant: ClassVar[str] = "KoenigsImage"

    def _contains_local(self, u: np.ndarray) -> np.ndarray:
        out = np.zeros(u.shape, dtype=bool)
        for index, point in np.ndenumerate(u):
            if self.container is not None and not self.container.contains(point):
                continue
            try:
                out[index] = self.inverse(complex(point)).real > self.threshold
            except (DomainError, ZeroDivisionError, OverflowError):
                out[index] = False
        return out

    def _pieces(self) -> list[Piece]:
        raise DomainError("KoenigsImage has no boundary parametrization")

    def _local_re_bounds(self) -> tuple[float, float]:
        raise InconclusiveError("The real-part range of a Koenigs image is not computed")

    def lies_in_right_halfplane(self) -> bool:
        return self.container is not None and self.container.lies_in_right_halfplane()

    def to_params(self) -> dict[str, Any]:
        raise DomainError("KoenigsImage is not serializable")


DOMAIN_VARIANTS: dict[str, type[StarlikeDomain]] = {
    cls.variant: cls
    for cls in (
        HalfPlaneRight,
        HalfPlaneLeft,
        VerticalStrip,
        Sector,
        HalfParabola,
        OmegaFamily,
        Polyline,
        Clipped,
    )
}


# ---------------------------------------------------------------------------
# JSON documents
# ---------------------------------------------------------------------------


def _pair(value: Any) -> complex:
    return complex(float(value[0]), float(value[1]))


def domain_from_document(document: DomainDocument) -> StarlikeDomain:
    """Build a descriptor from its document"""
    cls = DOMAIN_VARIANTS.get(document.variant)
    if cls is None:
        raise DomainError(f"Unknown domain variant {document.variant!r}")

    params = dict(document.params)
    extra: dict[str, Any] = {
        "offset": complex(*document.offset),
        "mirrored": document.mirrored,
    }
    try:
        if cls is Polyline:
            return Polyline(
                tuple(_pair(v) for v in params["vertices"]),
                _pair(params.get("left_dir", (0.0, 1.0))),
                _pair(params.get("right_dir", (0.0, 1.0))),
                **extra,
            )
        if cls is Clipped:
            re_min = params.get("re_min")
            re_max = params.get("re_max")
            return Clipped(
                domain_from_document(DomainDocument.model_validate(params["base"])),
                -INF if re_min is None else float(re_min),
                INF if re_max is None else float(re_max),
                **extra,
            )
        return cls(**{k: float(v) for k, v in params.items()}, **extra)
    except (KeyError, TypeError) as e:
        raise DomainError(f"Invalid parameters for {document.variant}: {e}") from e


def domain_to_json(domain: StarlikeDomain) -> str:
    return domain.to_document().model_dump_json()


def domain_from_json(text: Union[str, bytes, dict[str, Any]]) -> StarlikeDomain:
    """
    Parse a domain document.

    Example:
        >>> domain_from_json('{"variant": "VerticalStrip", "params": {"a": 0, "b": 3.14}}')
        VerticalStrip(offset=0j, mirrored=False, a=0.0, b=3.14)
    """
    if isinstance(text, dict):
        document = DomainDocument.model_validate(text)
    else:
        document = DomainDocument.model_validate_json(text)
    return domain_from_document(document)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def contains(domain: StarlikeDomain, z: complex) -> bool:
    """
    Membership test.

    Example:
        >>> contains(HalfParabola(2.0, 1.0), 1 + 2j)
        True
    """
    return domain.contains(z)


def delta_many(
    domain: StarlikeDomain, p: complex, ts: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """delta+ and delta- on a whole t grid"""
    p = complex(p)
    if not domain.contains(p):
        raise DomainError(f"Base point {p} is not in the domain")
    ts = np.asarray(ts, dtype=np.float64)
    if np.any(ts < 0):
        raise DomainError("t must be non-negative")

    q = p + 1j * ts
    plus, _ = domain.boundary_distance(q, re_min=p.real, cap=ts)
    minus, _ = domain.boundary_distance(q, re_max=p.real, cap=ts)
    return np.minimum(ts, plus), np.minimum(ts, minus)


def delta(domain: StarlikeDomain, p: complex, t: float) -> tuple[float, float]:
    """
    Distances from p + it to the boundary on each side of Re p, capped at t.

    Example:
        >>> delta(HalfPlaneRight(), 1, 3)
        (3.0, 1.0)
    """
    if t == 0:
        if not domain.contains(p):
            raise DomainError(f"Base point {p} is not in the domain")
        return 0.0, 0.0
    plus, minus = delta_many(domain, p, np.array([float(t)]))
    return float(plus[0]), float(minus[0])


def quasi_geodesic_sigma(domain: StarlikeDomain, p: complex, t: float) -> complex:
    """
    sigma(t) = (delta+ - delta-)/2 + i(Im p + t).

    The formula does not contain Re p; translate the domain so that
    Re p = 0 when a curve through p is wanted.
    """
    plus, minus = delta(domain, p, t)
    sigma = complex(0.5 * (plus - minus), complex(p).imag + t)
    if not domain.contains(sigma):
        logger.warning(f"Quasi-geodesic point {sigma} at t={t} lies outside the domain")
    return sigma


class SlopeKind(str, Enum):
    NON_TANGENTIAL = "non-tangential"
    TANGENTIAL_MINUS_HALF_PI = "tangential-minus-half-pi"
    TANGENTIAL_PLUS_HALF_PI = "tangential-plus-half-pi"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SlopeSample:
    t: float
    delta_plus: float
    delta_minus: float

    @property
    def ratio(self) -> float:
        return self.delta_plus / self.delta_minus


@dataclass(frozen=True)
class SlopeVerdict:
    kind: SlopeKind
    trace: list[SlopeSample]
    drift: float

    def describe(self) -> str:
        if self.kind == SlopeKind.NON_TANGENTIAL:
            return "non-tangential"
        if self.kind == SlopeKind.TANGENTIAL_MINUS_HALF_PI:
            return "tangential, slope -pi/2"
        if self.kind == SlopeKind.TANGENTIAL_PLUS_HALF_PI:
            return "tangential, slope +pi/2"
        return "inconclusive"


def slope_classify(
    domain: StarlikeDomain, p: complex, t_max: float, n_samples: int
) -> SlopeVerdict:
    """
    Decide the slope of convergence from the growth of delta+/delta-.

    The ratio r(t) is sampled on a log grid in [1, t_max]; its drift is the
    least-squares slope of log r against log t on the upper half of the grid.
    """
    cfg = koenigs_config
    if t_max < 1e2:
        raise PreconditionError(f"t_max must be at least 100, got {t_max}")
    if n_samples < 10:
        raise PreconditionError(f"Need at least 10 samples, got {n_samples}")

    ts = np.geomspace(1.0, t_max, n_samples)
    plus, minus = delta_many(domain, p, ts)
    ratio = plus / minus
    trace = [SlopeSample(float(t), float(a), float(b)) for t, a, b in zip(ts, plus, minus)]

    tail = slice(n_samples // 2, None)
    drift = float(np.polyfit(np.log(ts[tail]), np.log(ratio[tail]), 1)[0])
    final = float(ratio[-1])
    bound = cfg.SLOPE_RATIO_BOUND

    if np.all((ratio >= 1.0 / bound) & (ratio <= bound)) and abs(drift) < cfg.SLOPE_DRIFT_FLAT:
        kind = SlopeKind.NON_TANGENTIAL
    elif drift > cfg.SLOPE_DRIFT_DIVERGENT and final > cfg.SLOPE_DIVERGENCE_FLOOR:
        kind = SlopeKind.TANGENTIAL_MINUS_HALF_PI
    elif drift < -cfg.SLOPE_DRIFT_DIVERGENT and final < 1.0 / cfg.SLOPE_DIVERGENCE_FLOOR:
        kind = SlopeKind.TANGENTIAL_PLUS_HALF_PI
    else:
        kind = SlopeKind.INCONCLUSIVE

    logger.info(f"Slope verdict {kind.value}: drift {drift:.4f}, final ratio {final:.4g}")
    return SlopeVerdict(kind=kind, trace=trace, drift=drift)


def _disc_inside(domain: StarlikeDomain, p: complex, radius: float) -> bool:
    angles = np.linspace(0.0, 2.0 * math.pi, 96, endpoint=False)
    rings = np.array([0.25, 0.5, 0.75, 1.0 - 1e-9]) * radius
    points = p + (rings[:, None] * np.exp(1j * angles)[None, :]).ravel()
    return bool(np.all(domain.contains_many(points)))


def _clip_polyline(poly: Polyline, x_cut: float, keep_right: bool) -> Polyline:
    xs = np.array([v.real for v in poly.vertices])
    corner = complex(x_cut, float(poly.graph(np.array([x_cut]))[0]))
    if keep_right:
        if poly.left_vertical and x_cut <= xs[0]:
            return poly
        rest = tuple(v for v in poly.vertices if v.real > x_cut)
        return Polyline((corner,) + rest, 1j, poly.right_dir)

    if poly.right_vertical and x_cut >= xs[-1]:
        return poly
    rest = tuple(v for v in poly.vertices if v.real < x_cut)
    return Polyline(rest + (corner,), poly.left_dir, 1j)


def split_domain(
    domain: StarlikeDomain, p: complex, eps: float
) -> tuple[StarlikeDomain, StarlikeDomain]:
    """
    Split a domain along two vertical cuts around p.

    Returns:
        (Omega ∩ {Re z > Re p - eps}, Omega ∩ {Re z < Re p + eps})

    Raises:
        PreconditionError: If the disc B(p, 2 eps) is not inside the domain
    """
    p = complex(p)
    if not eps > 0:
        raise PreconditionError(f"eps must be positive, got {eps}")
    if not (domain.contains(p) and _disc_inside(domain, p, 2.0 * eps)):
        raise PreconditionError(f"Disc of radius {2 * eps} around {p} is not inside the domain")

    left_cut = p.real - eps
    right_cut = p.real + eps

    if isinstance(domain, Polyline):
        canonical = domain.canonical()
        return (
            _clip_polyline(canonical, left_cut, keep_right=True),
            _clip_polyline(canonical, right_cut, keep_right=False),
        )

    return Clipped(domain, re_min=left_cut), Clipped(domain, re_max=right_cut)


def classify_model(domain: StarlikeDomain) -> ModelType:
    """
    Model type from the union of all downward translates of the domain.

    That union is a vertical strip, a half-plane or the plane, determined by
    the range of Re over the domain.

    Raises:
        InconclusiveError: If the real-part range cannot be computed
    """
    lo, hi = domain.re_bounds()
    if math.isfinite(lo) and math.isfinite(hi):
        return ModelType(ModelKind.HYPERBOLIC, math.pi / (hi - lo))
    if math.isfinite(lo) or math.isfinite(hi):
        return ModelType(ModelKind.PARABOLIC_POSITIVE_STEP)
    return ModelType(ModelKind.PARABOLIC_ZERO_STEP)


def parabola_polyline(m: float = 1.0, x_max: float = 20.0, n: int = 401) -> Polyline:
    """Polygonal approximation of the two-sided parabola {Im z > m (Re z)^2}"""
    if n < 2:
        raise PreconditionError("Need at least two vertices")
    xs = np.linspace(-x_max, x_max, n)
    slope = 2.0 * m * x_max
    return Polyline(
        tuple(complex(x, m * x * x) for x in xs),
        left_dir=complex(-1.0, slope),
        right_dir=complex(1.0, slope),
    )


def sample_interior(
    domain: StarlikeDomain,
    n: int,
    seed: int = 0,
    box: tuple[tuple[float, float], tuple[float, float]] = ((-4.0, 4.0), (-1.0, 12.0)),
) -> np.ndarray:
    """Up to n deterministic points of the domain inside a box (rejection sampling)"""
    stream = CounterStream(seed)
    found: list[np.ndarray] = []
    total = 0
    start = 0
    batch = max(256, 4 * n)
    for _ in range(64):
        candidates = stream.points_in_box(batch, box[0], box[1], start=start)
        start += batch
        inside = candidates[domain.contains_many(candidates)]
        found.append(inside)
        total += inside.size
        if total >= n:
            break
    return np.concatenate(found)[:n] if found else np.array([], dtype=np.complex128)


def nesting_shift(
    small: StarlikeDomain,
    large: StarlikeDomain,
    samples: int = 2000,
    seed: int = 0,
    box: tuple[tuple[float, float], tuple[float, float]] = ((-4.0, 4.0), (-1.0, 12.0)),
) -> float:
    """
    Least vertical shift s on a doubling ladder with small + is inside large.

    Raises:
        PreconditionError: If no shift on the ladder passes the sampled test
    """
    points = sample_interior(small, samples, seed, box)
    if points.size == 0:
        raise PreconditionError("No sample points of the smaller domain in the box")

    ladder = [0.0] + [2.0**k for k in range(-8, 21)]
    for shift in ladder:
        if np.all(large.contains_many(points + 1j * shift)):
            logger.debug(f"Nesting holds with vertical shift {shift}")
            return shift
    raise PreconditionError("Domains are not nested for any sampled vertical shift")
