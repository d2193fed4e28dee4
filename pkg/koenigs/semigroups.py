"""
Concrete non-elliptic semigroups with closed-form orbits.

Every model is described in half-plane coordinates: C_1 conjugates the disc
semigroup phi_t to a semigroup psi_t of the right half-plane with
Denjoy-Wolff point at infinity, and H is a Koenigs map of psi_t, i.e.
H(psi_t(w)) = H(w) + it. Disc quantities are derived views.

Orbits are returned in log-polar form so that they can be followed to
t = 1e8, where |psi_t(1)| exceeds the double-precision range for the
Omega family.
"""

import cmath
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property
from typing import Any, ClassVar, Optional, Union

import numpy as np
from pydantic import BaseModel, Field

from koenigs.conformal import (
    OmegaParams,
    ParabolaStripMap,
    phi_alpha,
    phi_alpha_inv,
    pq_solve,
    psi_alpha,
    psi_alpha_inv,
)
from koenigs.domains import (
    HalfParabola,
    HalfPlaneLeft,
    HalfPlaneRight,
    KoenigsImage,
    ModelType,
    OmegaFamily,
    Sector,
    StarlikeDomain,
    VerticalStrip,
    classify_model,
)
from koenigs.exceptions import DomainError, PreconditionError
from koenigs.hyperbolic_core import (
    cayley,
    cayley_inv,
    disc_log_quantities,
    dist_halfplane_polar,
)
from koenigs.utils import log_grid

logger = logging.getLogger(__name__)


def _log_sinh(x: float) -> float:
    """log sinh x for x > 0 without overflow"""
    if x > 20.0:
        return x - math.log(2.0) + math.log1p(-math.exp(-2.0 * x))
    return math.log(math.sinh(x))


def _sine_polar(p_tilde: float, q_tilde: float) -> tuple[float, float]:
    """
    Log-polar form of -i sin(-P + iQ) for Q > 0.

    The modulus squared is sinh^2 Q + sin^2 P.
    """
    if q_tilde > 20.0:
        log_sinh = _log_sinh(q_tilde)
        log_rho = log_sinh + 0.5 * math.log1p((math.sin(p_tilde) * math.exp(-log_sinh)) ** 2)
    else:
        log_rho = 0.5 * math.log(math.sinh(q_tilde) ** 2 + math.sin(p_tilde) ** 2)
    theta = math.atan2(math.sin(p_tilde), math.cos(p_tilde) * math.tanh(q_tilde))
    return log_rho, theta


@dataclass(frozen=True)
class OrbitPoint:
    """
    Orbit point psi_t(w0) = rho e^{i theta} in log-polar form.
    """

    t: float
    log_rho: float
    theta: float

    @property
    def rho(self) -> float:
        return math.exp(self.log_rho) if self.log_rho < 709.0 else math.inf

    @property
    def w_half(self) -> complex:
        return cmath.rect(self.rho, self.theta)

    @property
    def z_disc(self) -> complex:
        """C_1^{-1}(w) = 1 - 2/(w + 1), formed without overflow"""
        if self.log_rho >= 0.0:
            u = math.exp(-self.log_rho) * cmath.exp(-1j * self.theta)
            return 1.0 - 2.0 * u / (1.0 + u)
        w = self.w_half
        return (w - 1.0) / (w + 1.0)

    @cached_property
    def _disc_logs(self) -> tuple[float, float]:
        return disc_log_quantities(self.log_rho, self.theta)

    @property
    def log_dist_to_tau(self) -> float:
        """log|1 - z|"""
        return self._disc_logs[0]

    @property
    def log_one_minus_modulus(self) -> float:
        """log(1 - |z|)"""
        return self._disc_logs[1]


def polar_of(w: complex) -> tuple[float, float]:
    w = complex(w)
    return math.log(abs(w)), math.atan2(w.imag, w.real)


class ModelDocument(BaseModel):
    """JSON form of a semigroup model"""

    family: str
    params: dict[str, Any] = Field(default_factory=dict)
    base_point: tuple[float, float] = (0.0, 0.0)


class SemigroupModel(ABC):
    """
    A semigroup given by its half-plane Koenigs map H.

    Subclasses implement H, its inverse and the Koenigs domain; those with a
    closed-form orbit override ``orbit``.
    """

    family: ClassVar[str] = ""

    @abstractmethod
    def koenigs_half(self, w: complex) -> complex:
        """Koenigs map in half-plane coordinates"""

    @abstractmethod
    def koenigs_half_inv(self, zeta: complex) -> complex:
        """Inverse Koenigs map, DomainError outside the Koenigs domain"""

    @property
    @abstractmethod
    def koenigs_domain(self) -> StarlikeDomain:
        """Image of the right half-plane under H"""

    @abstractmethod
    def to_params(self) -> dict[str, Any]:
        """Family parameters"""

    @property
    def base_half(self) -> complex:
        return 1.0 + 0j

    @property
    def base_disc(self) -> complex:
        return cayley_inv(1, self.base_half)

    @property
    def model_type(self) -> ModelType:
        return classify_model(self.koenigs_domain)

    def koenigs_forward(self, z: complex) -> complex:
        """Koenigs function h = H o C_1 on the disc"""
        return self.koenigs_half(cayley(1, z))

    def koenigs_inverse(self, zeta: complex) -> complex:
        return cayley_inv(1, self.koenigs_half_inv(zeta))

    def flow_half(self, w: complex, t: float) -> complex:
        """psi_t(w) = H^{-1}(H(w) + it)"""
        if t < 0:
            raise DomainError(f"t must be non-negative, got {t}")
        return self.koenigs_half_inv(self.koenigs_half(w) + 1j * t)

    def flow_disc(self, z: complex, t: float) -> complex:
        """phi_t(z) = C_1^{-1}(psi_t(C_1(z)))"""
        return cayley_inv(1, self.flow_half(cayley(1, z), t))

    def orbit(self, t: float) -> OrbitPoint:
        log_rho, theta = polar_of(self.flow_half(self.base_half, t))
        return OrbitPoint(t, log_rho, theta)

    def to_document(self) -> ModelDocument:
        base = self.base_disc
        return ModelDocument(
            family=self.family, params=self.to_params(), base_point=(base.real, base.imag)
        )

    def __repr__(self) -> str:
        params = ", ".join(f"{k}={v!r}" for k, v in self.to_params().items())
        return f"{type(self).__name__}({params})"


class ParabolicAutoPlus(SemigroupModel):
    """Automorphism group psi_t(w) = w + it"""

    family = "parabolic-auto"

    def koenigs_half(self, w: complex) -> complex:
        return complex(w)

    def koenigs_half_inv(self, zeta: complex) -> complex:
        zeta = complex(zeta)
        if not zeta.real > 0:
            raise DomainError(f"{zeta} is outside the Koenigs domain")
        return zeta

    @property
    def koenigs_domain(self) -> StarlikeDomain:
        return HalfPlaneRight()

    def orbit(self, t: float) -> OrbitPoint:
        return OrbitPoint(t, 0.5 * math.log1p(t * t), math.atan(t))

    def to_params(self) -> dict[str, Any]:
        return {}


class ParabolicAutoMinus(SemigroupModel):
    """Automorphism group psi_t(w) = w - it"""

    family = "parabolic-auto-minus"

    def koenigs_half(self, w: complex) -> complex:
        return -complex(w)

    def koenigs_half_inv(self, zeta: complex) -> complex:
        zeta = complex(zeta)
        if not zeta.real < 0:
            raise DomainError(f"{zeta} is outside the Koenigs domain")
        return -zeta

    @property
    def koenigs_domain(self) -> StarlikeDomain:
        return HalfPlaneLeft()

    def orbit(self, t: float) -> OrbitPoint:
        return OrbitPoint(t, 0.5 * math.log1p(t * t), -math.atan(t))

    def to_params(self) -> dict[str, Any]:
        return {}


class HyperbolicGroup(SemigroupModel):
    """
    Hyperbolic group psi_t(w) = e^{lambda t} w.

    H(w) = (1/lambda)(i Log w + pi/2) onto the strip 0 < Re < pi/lambda.
    """

    family = "hyperbolic"

    def __init__(self, lam: float = 1.0) -> None:
        if not lam > 0:
            raise DomainError(f"lambda must be positive, got {lam}")
        self.lam = float(lam)

    def koenigs_half(self, w: complex) -> complex:
        w = complex(w)
        if not w.real > 0:
            raise DomainError(f"{w} is not in the right half-plane")
        return (1j * cmath.log(w) + math.pi / 2) / self.lam

    def koenigs_half_inv(self, zeta: complex) -> complex:
        zeta = complex(zeta)
        if not 0.0 < zeta.real < math.pi / self.lam:
            raise DomainError(f"{zeta} is outside the Koenigs domain")
        return 1j * cmath.exp(-1j * self.lam * zeta)

    @property
    def koenigs_domain(self) -> StarlikeDomain:
        return VerticalStrip(0.0, math.pi / self.lam)

    def orbit(self, t: float) -> OrbitPoint:
        return OrbitPoint(t, self.lam * t, 0.0)

    def to_params(self) -> dict[str, Any]:
        return {"lambda": self.lam}


class SectorFamily(SemigroupModel):
    """Koenigs domain the sector i{-theta < arg < 0}"""

    family = "sector"

    def __init__(self, theta: float = math.pi / 2) -> None:
        if not 0.0 < theta <= math.pi:
            raise DomainError(f"Sector opening must lie in (0, pi], got {theta}")
        self.theta = float(theta)

    def koenigs_half(self, w: complex) -> complex:
        w = complex(w)
        if not w.real > 0:
            raise DomainError(f"{w} is not in the right half-plane")
        return 1j * cmath.exp(-0.5j * self.theta) * cmath.exp((self.theta / math.pi) * cmath.log(w))

    def _rotated(self, zeta: complex) -> complex:
        return -1j * cmath.exp(0.5j * self.theta) * complex(zeta)

    def koenigs_half_inv(self, zeta: complex) -> complex:
        u = self._rotated(zeta)
        if u == 0 or abs(cmath.phase(u)) >= self.theta / 2:
            raise DomainError(f"{zeta} is outside the Koenigs domain")
        return cmath.exp((math.pi / self.theta) * cmath.log(u))

    @property
    def koenigs_domain(self) -> StarlikeDomain:
        return Sector(self.theta)

    def orbit(self, t: float) -> OrbitPoint:
        u = self._rotated(self.koenigs_half(self.base_half) + 1j * t)
        scale = math.pi / self.theta
        return OrbitPoint(t, scale * math.log(abs(u)), scale * cmath.phase(u))

    def to_params(self) -> dict[str, Any]:
        return {"theta": self.theta}


class OmegaSemigroup(SemigroupModel):
    """
    Semigroup with Koenigs domain Omega_{alpha,mu}.

    H = Phi_alpha o Psi_alpha^{-1}. The orbit starts at Psi_alpha(Phi_alpha^{-1}(zeta0))
    and is evaluated through the closed-form P/Q solution.
    """

    family = "omega"

    def __init__(
        self, alpha: float = 2.0, mu: float = 1.0, zeta0: Optional[complex] = None
    ) -> None:
        self.params = OmegaParams(float(alpha), float(mu))
        p = self.params
        if zeta0 is None:
            zeta0 = phi_alpha(p, complex(p.c / 2, 2.0 * p.bottom))
        self.zeta0 = complex(zeta0)
        if not p.in_half_strip(phi_alpha_inv(p, self.zeta0)):
            raise DomainError(f"zeta0={self.zeta0} is not in Omega")

    @property
    def alpha(self) -> float:
        return self.params.alpha

    @property
    def mu(self) -> float:
        return self.params.mu

    def koenigs_half(self, w: complex) -> complex:
        return phi_alpha(self.params, psi_alpha_inv(self.params, w))

    def koenigs_half_inv(self, zeta: complex) -> complex:
        zeta = complex(zeta)
        if not (zeta.real > 0 and zeta.imag > 0):
            raise DomainError(f"{zeta} is outside the Koenigs domain")
        return psi_alpha(self.params, phi_alpha_inv(self.params, zeta))

    @property
    def koenigs_domain(self) -> StarlikeDomain:
        return OmegaFamily(self.alpha, self.mu)

    @property
    def base_half(self) -> complex:
        return psi_alpha(self.params, phi_alpha_inv(self.params, self.zeta0))

    def orbit(self, t: float) -> OrbitPoint:
        p = self.params
        state = pq_solve(p, self.zeta0, t)
        p_tilde = math.pi / 2 - math.pi * state.P / p.c
        q_tilde = math.pi * state.Q / p.c - math.pi / p.eta
        log_rho, _ = _sine_polar(p_tilde, q_tilde)
        # cos(P~) = sin(pi P/c) keeps the angle accurate as P -> 0
        theta = math.atan2(
            math.cos(math.pi * state.P / p.c),
            math.sin(math.pi * state.P / p.c) * math.tanh(q_tilde),
        )
        return OrbitPoint(t, log_rho, theta)

    def to_params(self) -> dict[str, Any]:
        return {
            "alpha": self.alpha,
            "mu": self.mu,
            "zeta0": [self.zeta0.real, self.zeta0.imag],
        }


class HalfParabolaSemigroup(SemigroupModel):
    """
    Semigroup with Koenigs domain Pi_{2,m}, orbit z(t) = sqrt(i(zeta0 + it) + 1/(4m)).
    """

    family = "half-parabola"

    def __init__(self, m: float = 1.0, zeta0: Optional[complex] = None) -> None:
        self.maps = ParabolaStripMap(float(m))
        if zeta0 is None:
            width = self.maps.width
            zeta0 = self.maps.to_parabola(complex(width / 2, width))
        self.zeta0 = complex(zeta0)
        if not self.koenigs_domain.contains(self.zeta0):
            raise DomainError(f"zeta0={self.zeta0} is not in the half-parabola")

    @property
    def m(self) -> float:
        return self.maps.m

    def _in_strip(self, z: complex) -> bool:
        return 0.0 < z.real < self.maps.width and z.imag > 0.0

    def koenigs_half(self, w: complex) -> complex:
        return self.maps.to_parabola(self.maps.from_half_plane(w))

    def koenigs_half_inv(self, zeta: complex) -> complex:
        z = self.maps.from_parabola(zeta)
        if not self._in_strip(z):
            raise DomainError(f"{zeta} is outside the Koenigs domain")
        return self.maps.to_half_plane(z)

    @property
    def koenigs_domain(self) -> StarlikeDomain:
        return HalfParabola(2.0, self.m)

    @property
    def base_half(self) -> complex:
        return self.koenigs_half_inv(self.zeta0)

    def orbit(self, t: float) -> OrbitPoint:
        z = self.maps.from_parabola(self.zeta0 + 1j * t)
        width = self.maps.width
        log_rho, _ = _sine_polar(math.pi / 2 - math.pi * z.real / width, math.pi * z.imag / width)
        theta = math.atan2(
            math.cos(math.pi * z.real / width),
            math.sin(math.pi * z.real / width) * math.tanh(math.pi * z.imag / width),
        )
        return OrbitPoint(t, log_rho, theta)

    def to_params(self) -> dict[str, Any]:
        return {"m": self.m, "zeta0": [self.zeta0.real, self.zeta0.imag]}


class ReducedModel(SemigroupModel):
    """
    Horocycle reduction psi^_t(w) = -1/2 + H^{-1}(H(w + 1/2) + it).

    Its Koenigs map is w -> H(w + 1/2), so the Koenigs domain is the image of
    {Re w > 1/2} under H.
    """

    family = "reduced"

    def __init__(self, parent: SemigroupModel) -> None:
        self.parent = parent

    def koenigs_half(self, w: complex) -> complex:
        return self.parent.koenigs_half(complex(w) + 0.5)

    def koenigs_half_inv(self, zeta: complex) -> complex:
        w = self.parent.koenigs_half_inv(zeta)
        if not w.real > 0.5:
            raise DomainError(f"{zeta} is outside the reduced Koenigs domain")
        return w - 0.5

    @property
    def koenigs_domain(self) -> StarlikeDomain:
        return KoenigsImage(
            inverse=self.parent.koenigs_half_inv,
            threshold=0.5,
            container=self.parent.koenigs_domain,
        )

    @property
    def model_type(self) -> ModelType:
        return self.parent.model_type

    @property
    def base_half(self) -> complex:
        return self.parent.base_half - 0.5

    def orbit(self, t: float) -> OrbitPoint:
        point = self.parent.orbit(t)
        if point.log_rho >= 0.0:
            u = cmath.exp(1j * point.theta) - 0.5 * math.exp(-point.log_rho)
            return OrbitPoint(t, point.log_rho + math.log(abs(u)), cmath.phase(u))
        log_rho, theta = polar_of(point.w_half - 0.5)
        return OrbitPoint(t, log_rho, theta)

    def to_params(self) -> dict[str, Any]:
        return {"parent": self.parent.to_document().model_dump()}


def horocycle_reduce(model: SemigroupModel) -> ReducedModel:
    """Model of the horocycle reduction of a semigroup"""
    return ReducedModel(model)


MODEL_FAMILIES: dict[str, type[SemigroupModel]] = {
    cls.family: cls
    for cls in (
        ParabolicAutoPlus,
        ParabolicAutoMinus,
        HyperbolicGroup,
        SectorFamily,
        OmegaSemigroup,
        HalfParabolaSemigroup,
    )
}


def build_model(
    family: str,
    alpha: float = 2.0,
    mu: float = 1.0,
    theta: float = math.pi / 2,
    lam: float = 1.0,
    m: Optional[float] = None,
    zeta0: Optional[complex] = None,
) -> SemigroupModel:
    """Construct a model from a family name and its parameters"""
    if family == ParabolicAutoPlus.family:
        return ParabolicAutoPlus()
    if family == ParabolicAutoMinus.family:
        return ParabolicAutoMinus()
    if family == HyperbolicGroup.family:
        return HyperbolicGroup(lam)
    if family == SectorFamily.family:
        return SectorFamily(theta)
    if family == OmegaSemigroup.family:
        return OmegaSemigroup(alpha, mu, zeta0)
    if family == HalfParabolaSemigroup.family:
        return HalfParabolaSemigroup(mu if m is None else m, zeta0)
    raise DomainError(f"Unknown semigroup family {family!r}")


def model_from_document(document: ModelDocument) -> SemigroupModel:
    params = dict(document.params)
    zeta0 = params.get("zeta0")
    return build_model(
        document.family,
        alpha=float(params.get("alpha", 2.0)),
        mu=float(params.get("mu", 1.0)),
        theta=float(params.get("theta", math.pi / 2)),
        lam=float(params.get("lambda", 1.0)),
        m=float(params["m"]) if "m" in params else None,
        zeta0=complex(zeta0[0], zeta0[1]) if zeta0 is not None else None,
    )


def model_to_json(model: SemigroupModel) -> str:
    return model.to_document().model_dump_json()


def model_from_json(text: Union[str, bytes]) -> SemigroupModel:
    return model_from_document(ModelDocument.model_validate_json(text))


def orbit(model: SemigroupModel, t: float) -> OrbitPoint:
    """
    Orbit of the model's base point.

    Example:
        >>> point = orbit(ParabolicAutoPlus(), 1.0)
        >>> round(point.rho, 12), round(point.theta, 12)
        (1.414213562373, 0.785398163397)
    """
    if t < 0:
        raise DomainError(f"t must be non-negative, got {t}")
    return model.orbit(float(t))


def verify_semigroup_law(model: SemigroupModel, s: float, t: float) -> float:
    """|phi_{s+t}(z0) - phi_s(phi_t(z0))| in disc coordinates"""
    if s < 0 or t < 0:
        raise DomainError("s and t must be non-negative")
    w0 = model.base_half
    joint = model.flow_half(w0, s + t)
    composed = model.flow_half(model.flow_half(w0, t), s)
    return abs(cayley_inv(1, joint) - cayley_inv(1, composed))


def verify_intertwining(model: SemigroupModel, z: complex, t: float) -> float:
    """|h(phi_t(z)) - h(z) - it| for the disc Koenigs function h"""
    w = cayley(1, z)
    moved = model.flow_half(w, t)
    return abs(model.koenigs_half(moved) - model.koenigs_half(w) - 1j * t)


@dataclass(frozen=True)
class StepTrace:
    value: float
    trace: list[tuple[float, float]]


def hyperbolic_step(model: SemigroupModel, t_max: float, points: int = 40) -> StepTrace:
    """
    k(psi_t(w0), psi_{t+1}(w0)) at t = t_max, with its trace on a log grid.
    """
    if t_max < 1e2:
        raise PreconditionError(f"t_max must be at least 100, got {t_max}")

    trace = []
    for t in log_grid(1.0, t_max, points):
        a = model.orbit(float(t))
        b = model.orbit(float(t) + 1.0)
        trace.append((float(t), dist_halfplane_polar(a.log_rho, a.theta, b.log_rho, b.theta)))

    logger.debug(f"Hyperbolic step of {model!r} at t={t_max}: {trace[-1][1]:.12g}")
    return StepTrace(value=trace[-1][1], trace=trace)


def orbit_grid(model: SemigroupModel, ts: np.ndarray) -> list[OrbitPoint]:
    return [model.orbit(float(t)) for t in ts]
