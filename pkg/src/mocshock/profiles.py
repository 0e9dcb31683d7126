r"""
Initial radial density profiles and per-layer coefficients.

A layer with Lagrangian label :math:`R_0` encloses the charge (or mass)
:math:`Q(R_0)` for all time while layers do not cross. That fixes the
constant

.. math::

    \gamma(R_0) = \frac{|\kappa|\,Q(R_0)}{4\pi}\ \text{(sphere)},\qquad
    \gamma(R_0) = \frac{|\kappa|\,Q(R_0)}{2\pi}\ \text{(cylinder)},

with :math:`|\kappa| = \delta/\varepsilon_0` (electric) or :math:`1/\nu_0`
(gravity), and the time scale

.. math::

    \lambda(R_0) = \sqrt{2\gamma}/R_0^{3/2}\ \text{(sphere)},\qquad
    \lambda(R_0) = \sqrt{2\gamma}/(2R_0)\ \text{(cylinder)}.

Units are SI unless :meth:`PhysicsParams.nondimensional` is used, which
sets :math:`\delta = \varepsilon_0 = \nu_0 = \hbar = m = 1`.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import special
from scipy.interpolate import PchipInterpolator

from .errors import ConfigError, DomainError, SingularError, UnsupportedError
from .specfun import BranchKind

__all__ = [
    "Interaction",
    "Lognormal",
    "PhysicsParams",
    "Symmetry",
    "Tabulated",
    "Uniform",
    "coupling",
    "cumulative",
    "density0",
    "gamma",
    "lam",
    "lam_prime",
    "lambda_from_gamma",
    "lambda_prime",
]


class Symmetry(enum.Enum):
    SPHERE = "sphere"
    CYLINDER = "cylinder"

    @property
    def dim_exponent(self) -> int:
        """Power ``d`` in the radial measure ``r**d dr``."""
        return 2 if self is Symmetry.SPHERE else 1


class Interaction(enum.Enum):
    ELECTRIC = "electric"
    GRAVITY = "gravity"
    COMBINED = "combined"


@dataclass(frozen=True)
class PhysicsParams:
    """Geometry, interaction type and physical constants of a scenario.

    ``delta`` is the charge-to-mass ratio q/m, ``nu0 = 1/(4 pi G)``.
    """

    symmetry: Symmetry = Symmetry.SPHERE
    interaction: Interaction = Interaction.ELECTRIC
    delta: float = 1.0
    eps0: float = 1.0
    nu0: float = 1.0
    hbar: float = 1.0
    particle_mass: float = 1.0

    def __post_init__(self):
        try:
            object.__setattr__(self, "symmetry", Symmetry(self.symmetry))
            object.__setattr__(self, "interaction", Interaction(self.interaction))
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for name in ("eps0", "nu0", "particle_mass", "hbar"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"PhysicsParams.{name} must be positive")

    @classmethod
    def nondimensional(cls, symmetry=Symmetry.SPHERE, interaction=Interaction.ELECTRIC):
        return cls(symmetry=Symmetry(symmetry), interaction=Interaction(interaction))

    @property
    def kind(self) -> BranchKind:
        if self.interaction is Interaction.COMBINED:
            raise UnsupportedError(
                "combined interaction has no closed-form branch; use the Eulerian validator"
            )
        return BranchKind(f"{self.interaction.value}_{self.symmetry.value}")


def coupling(params: PhysicsParams) -> float:
    """Magnitude of the force coupling: ``delta/eps0`` or ``1/nu0``."""
    if params.interaction is Interaction.ELECTRIC:
        return params.delta / params.eps0
    if params.interaction is Interaction.GRAVITY:
        return 1.0 / params.nu0
    raise UnsupportedError("combined interaction has no closed-form branch")


# ---------------------------------------------------------------------------
# profiles
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Uniform:
    """Constant density ``rho0`` on the ball (or disc) ``r <= r_max``."""

    rho0: float
    r_max: float

    def __post_init__(self):
        if self.rho0 < 0 or not self.r_max > 0:
            raise ConfigError("Uniform profile needs rho0 >= 0 and r_max > 0")

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, self.r_max

    def density0(self, r):
        r = np.asarray(r, dtype=float)
        return np.where((r >= 0) & (r <= self.r_max), self.rho0, 0.0)

    def cumulative(self, r0, symmetry: Symmetry):
        rc = np.minimum(np.asarray(r0, dtype=float), self.r_max)
        if symmetry is Symmetry.SPHERE:
            return (4.0 * math.pi / 3.0) * self.rho0 * rc**3
        return math.pi * self.rho0 * rc**2


@dataclass(frozen=True)
class Lognormal:
    r"""``rho0(r) = total/(2 pi r**2) * rho_n(2 r)`` with ``rho_n`` the lognormal pdf.

    In a sphere the enclosed charge is ``total/2 * (1 + erf((ln 2r - mu)/(sigma sqrt 2)))``.
    In a cylinder, completing the square in ``s = ln 2r`` gives
    ``total * exp(sigma**2/2 - mu) * Phi((ln 2r - mu + sigma**2)/sigma)``
    per unit length.
    """

    mu: float = 0.0
    sigma: float = 1.0
    total: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0 or self.total < 0:
            raise ConfigError("Lognormal profile needs sigma > 0 and total >= 0")

    @property
    def support(self) -> tuple[float, float]:
        return 0.0, math.inf

    def density0(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise DomainError("lognormal density is defined for r > 0 only")
        s = 2.0 * r
        pdf = np.exp(-((np.log(s) - self.mu) ** 2) / (2.0 * self.sigma**2)) / (
            math.sqrt(2.0 * math.pi) * self.sigma * s
        )
        return self.total / (2.0 * math.pi * r * r) * pdf

    def cumulative(self, r0, symmetry: Symmetry):
        r0 = np.asarray(r0, dtype=float)
        with np.errstate(divide="ignore"):
            s = np.log(2.0 * r0)
        if symmetry is Symmetry.SPHERE:
            # erfc keeps full relative precision in the inner tail
            return 0.5 * self.total * special.erfc((self.mu - s) / (self.sigma * math.sqrt(2.0)))
        scale = self.total * math.exp(0.5 * self.sigma**2 - self.mu)
        return scale * special.ndtr((s - self.mu + self.sigma**2) / self.sigma)


@dataclass(frozen=True)
class Tabulated:
    """Density given at sorted nodes, interpolated by a monotone cubic (PCHIP).

    Zero outside ``[r[0], r[-1]]``. PCHIP never overshoots the data, so
    nonnegative nodes give a nonnegative density.
    """

    r: tuple[float, ...]
    rho: tuple[float, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        rho = np.asarray(self.rho, dtype=float)
        if r.ndim != 1 or r.shape != rho.shape or r.size < 2:
            raise ConfigError("Tabulated profile needs matching 1-D r and rho with >= 2 nodes")
        if np.any(np.diff(r) <= 0) or r[0] < 0:
            raise ConfigError("Tabulated nodes must be nonnegative and strictly increasing")
        if np.any(rho < 0):
            raise ConfigError("Tabulated densities must be nonnegative")
        object.__setattr__(self, "r", tuple(r.tolist()))
        object.__setattr__(self, "rho", tuple(rho.tolist()))

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        """Read a CSV with header columns ``r, rho0``."""
        with open(Path(path), newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"r", "rho0"} <= {
                f.strip() for f in reader.fieldnames
            }:
                raise ConfigError(f"{path}: header must contain columns 'r' and 'rho0'")
            rows = [{k.strip(): v for k, v in row.items()} for row in reader]
        return cls(tuple(float(x["r"]) for x in rows), tuple(float(x["rho0"]) for x in rows))

    @property
    def support(self) -> tuple[float, float]:
        return self.r[0], self.r[-1]

    @cached_property
    def _interp(self) -> PchipInterpolator:
        return PchipInterpolator(np.asarray(self.r), np.asarray(self.rho), extrapolate=False)

    def density0(self, r):
        r = np.asarray(r, dtype=float)
        return np.nan_to_num(self._interp(r), nan=0.0)

    def _node_cumulative(self, symmetry: Symmetry) -> np.ndarray:
        # The integrand r**d * cubic has degree <= 5; 4-point Gauss-Legendre is exact.
        key = symmetry
        if key not in self._cache:
            nodes = np.asarray(self.r)
            xg, wg = np.polynomial.legendre.leggauss(4)
            a, b = nodes[:-1, None], nodes[1:, None]
            x = 0.5 * (b - a) * xg + 0.5 * (b + a)
            cell = 0.5 * (b - a)[:, 0] * np.sum(wg * self._integrand(x, symmetry), axis=1)
            self._cache[key] = np.concatenate([[0.0], np.cumsum(cell)])
        return self._cache[key]

    def _integrand(self, x, symmetry):
        d = symmetry.dim_exponent
        pref = 4.0 * math.pi if symmetry is Symmetry.SPHERE else 2.0 * math.pi
        return pref * x**d * self._interp(x)

    def cumulative(self, r0, symmetry: Symmetry):
        r0a = np.asarray(r0, dtype=float)
        nodes = np.asarray(self.r)
        node_cum = self._node_cumulative(symmetry)
        rc = np.clip(r0a, nodes[0], nodes[-1])
        i = np.clip(np.searchsorted(nodes, rc, side="right") - 1, 0, nodes.size - 2)
        a = nodes[i]
        xg, wg = np.polynomial.legendre.leggauss(4)
        h = 0.5 * (rc - a)
        x = h[..., None] * (xg + 1.0) + a[..., None]
        partial = h * np.sum(wg * self._integrand(x, symmetry), axis=-1)
        return node_cum[i] + partial


def density0(profile, r):
    """Initial density ``rho0(r)``."""
    return profile.density0(r)


def cumulative(profile, symmetry: Symmetry, r0):
    """Charge (mass) enclosed by radius ``r0`` at ``t=0``; per unit length for cylinders."""
    return profile.cumulative(r0, symmetry)


# ---------------------------------------------------------------------------
# layer coefficients
# ---------------------------------------------------------------------------
def gamma(profile, params: PhysicsParams, r0):
    """Force constant of the layer ODE ``R'' = +-gamma / R**p``."""
    c = coupling(params)
    q = profile.cumulative(r0, params.symmetry)
    if params.symmetry is Symmetry.SPHERE:
        return c * q / (4.0 * math.pi)
    return c * q / (2.0 * math.pi)


def lambda_from_gamma(gamma_value, r0, symmetry: Symmetry):
    """Inverse time scale of a layer from its force constant."""
    g = np.asarray(gamma_value, dtype=float)
    r0 = np.asarray(r0, dtype=float)
    if symmetry is Symmetry.SPHERE:
        return np.sqrt(2.0 * g) / r0**1.5
    return np.sqrt(2.0 * g) / (2.0 * r0)


def lam(profile, params: PhysicsParams, r0):
    """Layer inverse time scale ``lambda(r0)``."""
    return lambda_from_gamma(gamma(profile, params, r0), r0, params.symmetry)


def lam_prime(profile, params: PhysicsParams, r0):
    """``d lambda / d r0`` in closed form.

    Sphere: ``(1/r)[c rho0/lambda - 3/2 lambda]``; cylinder:
    ``(1/r)[c rho0/(4 lambda) - lambda]`` with ``c`` the coupling magnitude.
    """
    r0 = np.asarray(r0, dtype=float)
    lm = lam(profile, params, r0)
    if np.any(lm == 0):
        raise SingularError("lambda vanishes at the requested label (empty interior)")
    c = coupling(params)
    rho = profile.density0(r0)
    if params.symmetry is Symmetry.SPHERE:
        return (c * rho / lm - 1.5 * lm) / r0
    return (c * rho / (4.0 * lm) - lm) / r0


#: ``lambda`` is a Python keyword, so the layer coefficient is :func:`lam`.
lambda_prime = lam_prime
