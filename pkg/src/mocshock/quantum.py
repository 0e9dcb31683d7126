r"""
Wave-function reconstruction from a laminar probability flow.

For a normalised density :math:`f` transported by a curl-free velocity
:math:`v = -2\alpha\,\partial_r\varphi` with :math:`\alpha = -\hbar/2m`,
the wave function is :math:`\Psi = \sqrt f\,e^{i\varphi}` and the potential
that makes it solve the Schrödinger equation is

.. math::

    U = -\frac{1}{\beta}\Big\{\partial_t\varphi
        + \alpha\Big[\frac{L\sqrt f}{\sqrt f} - (\partial_r\varphi)^2\Big]\Big\},
    \qquad \beta = 1/\hbar,

with :math:`L` the radial Laplacian. The phase is fixed by the gauge
:math:`\varphi(0, t) = 0`, so :math:`U` is determined up to a function of
time only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import profiles as prof
from .characteristics import layer_velocity
from .density import density_along, label_of
from ._fd import derivative as _derivative
from .errors import NormalizationError

__all__ = [
    "QuantumFields",
    "QuantumParams",
    "VACUUM_FLOOR",
    "phase_field",
    "potential_field",
    "radial_laplacian",
    "reconstruct",
    "velocity_field",
    "wave_function",
]

#: Densities below this are vacuum; ``potential_field`` marks them NaN.
VACUUM_FLOOR = 1e-30


@dataclass(frozen=True)
class QuantumParams:
    hbar: float = 1.0
    mass: float = 1.0

    @property
    def alpha(self) -> float:
        return -self.hbar / (2.0 * self.mass)

    @property
    def beta(self) -> float:
        return 1.0 / self.hbar

    @classmethod
    def from_physics(cls, params: prof.PhysicsParams) -> "QuantumParams":
        return cls(params.hbar, params.particle_mass)


@dataclass(frozen=True)
class QuantumFields:
    t: float
    r: np.ndarray
    f: np.ndarray
    v: np.ndarray
    phi: np.ndarray
    psi_re: np.ndarray
    psi_im: np.ndarray
    U: np.ndarray


def radial_laplacian(g, r, symmetry: prof.Symmetry) -> np.ndarray:
    """``g'' + (d/r) g'`` with ``d = 2`` (sphere) or ``1`` (cylinder).

    At ``r = 0`` the regular limit ``(d + 1) g''(0)`` is used.
    """
    g = np.asarray(g, dtype=float)
    r = np.asarray(r, dtype=float)
    d = symmetry.dim_exponent
    g1 = _derivative(g, r, 1)
    g2 = _derivative(g, r, 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        lap = g2 + d * g1 / r
    return np.where(r == 0, (d + 1) * g2, lap)


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------
def velocity_field(profile, params, r_grid, t) -> np.ndarray:
    """Probability-flow velocity at Eulerian radii: the layer velocity of the label found there."""
    labels = label_of(profile, params, r_grid, t)
    labels = np.asarray(labels, dtype=float)
    v = np.zeros_like(labels)
    live = labels > 0
    v[live] = layer_velocity(profile, params, labels[live], t)
    return v


def phase_field(v_grid, r_grid, qparams: QuantumParams) -> np.ndarray:
    """Unwrapped phase ``-(1/2 alpha) int_0^r v dx`` by cumulative trapezoid.

    When the grid does not start at 0, the first segment uses ``v`` linearly
    extrapolated to the origin, so the gauge ``phi(0) = 0`` holds.
    """
    v = np.asarray(v_grid, dtype=float)
    r = np.asarray(r_grid, dtype=float)
    seg = 0.5 * (v[1:] + v[:-1]) * np.diff(r)
    integral = np.concatenate([[0.0], np.cumsum(seg)])
    if r[0] > 0:
        v_origin = v[0] - r[0] * (v[1] - v[0]) / (r[1] - r[0])
        integral += 0.5 * (v_origin + v[0]) * r[0]
    return -integral / (2.0 * qparams.alpha)


def wave_function(f_grid, phi_grid):
    amp = np.sqrt(np.asarray(f_grid, dtype=float))
    phi = np.asarray(phi_grid, dtype=float)
    return amp * np.cos(phi), amp * np.sin(phi)


def potential_field(f_grid, phi_grid, phi_t_grid, r_grid, qparams: QuantumParams, symmetry):
    """Schrödinger potential of a laminar flow; NaN on vacuum nodes (``f < 1e-30``)."""
    f = np.asarray(f_grid, dtype=float)
    r = np.asarray(r_grid, dtype=float)
    amp = np.sqrt(np.maximum(f, 0.0))
    dphi = _derivative(np.asarray(phi_grid, dtype=float), r, 1)
    lap = radial_laplacian(amp, r, symmetry)
    vacuum = f < VACUUM_FLOOR
    with np.errstate(divide="ignore", invalid="ignore"):
        quantum = np.where(vacuum, np.nan, lap / amp)
    a = qparams.alpha
    U = -(np.asarray(phi_t_grid, dtype=float) + a * (quantum - dphi**2)) / qparams.beta
    return np.where(vacuum, np.nan, U)


def _eulerian_density(profile, params, r, t):
    labels = np.asarray(label_of(profile, params, r, t), dtype=float)
    f = np.empty_like(labels)
    live = labels > 0
    f[live] = density_along(profile, params, labels[live], t, form="jacobian")[1]
    if (~live).any():
        # the centre takes the value of a vanishingly small label
        tiny = 1e-12 * (labels.max() if live.any() else 1.0)
        f[~live] = density_along(profile, params, tiny, t, form="jacobian")[1]
    return f


def check_normalized(profile, symmetry, tol=1e-9):
    total = float(profile.cumulative(np.inf, symmetry))
    if abs(total - 1.0) > tol:
        raise NormalizationError(f"profile total is {total!r}; a probability density needs 1")


def reconstruct(profile, params, r_grid, t, *, dt=None, qparams=None) -> QuantumFields:
    """Density, velocity, phase, wave function and potential on an Eulerian grid.

    The phase time derivative is a symmetric difference of two phase fields
    at ``t +- dt``; ``dt`` defaults to ``1e-4/lam`` at the median radius.
    """
    check_normalized(profile, params.symmetry)
    qp = qparams or QuantumParams.from_physics(params)
    r = np.asarray(r_grid, dtype=float)
    if dt is None:
        lm = float(prof.lam(profile, params, float(np.median(r[r > 0]))))
        dt = 1e-4 / lm
    f = _eulerian_density(profile, params, r, t)
    v = velocity_field(profile, params, r, t)
    phi = phase_field(v, r, qp)
    t_lo = max(t - dt, 0.0)
    phi_lo = phase_field(velocity_field(profile, params, r, t_lo), r, qp)
    phi_hi = phase_field(velocity_field(profile, params, r, t + dt), r, qp)
    phi_t = (phi_hi - phi_lo) / (t + dt - t_lo)
    psi_re, psi_im = wave_function(f, phi)
    U = potential_field(f, phi, phi_t, r, qp, params.symmetry)
    return QuantumFields(float(t), r, f, v, phi, psi_re, psi_im, U)
