"""
Layer trajectories, their velocities, the Jacobian of the Lagrangian map and
shock-onset detection.

Each concentric layer with Lagrangian label ``r0`` follows
``R(t) = r0 * P(lam(r0) * t)`` and moves with ``V(t) = r0 * lam * P'(lam t)``.
The Eulerian map ``r0 -> R`` has derivative

    J(r0, t) = P(lam t) + r0 * P'(lam t) * lam'(r0) * t,

and the smooth solution exists while ``J > 0``. The first zero of ``J``
is the first crossing of characteristics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import profiles as prof
from .errors import RangeError, UnsupportedError
from .specfun import BranchKind, eval_p, eval_p_with_derivative, f_sup

__all__ = [
    "INFINITE_VELOCITY",
    "Characteristic",
    "ShockReport",
    "characteristic_bundle",
    "classical_electron_radius",
    "collapse_time",
    "jacobian",
    "layer_radius",
    "layer_velocity",
    "onset_times",
    "shock_onset",
    "v_max_energy",
]

#: Marker returned by :meth:`Characteristic.v_max` for the unbounded
#: electric-cylinder front velocity.
INFINITE_VELOCITY = math.inf

# Scan resolution in t for the first zero of J, per label.
_N_SCAN = 256
# Gravity scans stop this fraction short of a label's own collapse time.
_COLLAPSE_MARGIN = 1e-9


@dataclass(frozen=True)
class Characteristic:
    """Trajectory of one layer released from rest at ``r0``."""

    r0: float
    lam: float
    kind: BranchKind

    def __post_init__(self):
        if not self.r0 > 0 or self.lam < 0:
            raise ValueError("Characteristic needs r0 > 0 and lam >= 0")

    @classmethod
    def from_profile(cls, profile, params: prof.PhysicsParams, r0: float) -> "Characteristic":
        return cls(float(r0), float(prof.lam(profile, params, r0)), params.kind)

    @property
    def collapse_time(self) -> float:
        """Time at which the layer reaches the centre (``inf`` if it never does)."""
        if self.kind.is_electric or self.lam == 0:
            return math.inf
        return f_sup(self.kind) / self.lam

    def radius(self, t):
        return self.r0 * eval_p(self.kind, self.lam * np.asarray(t, dtype=float))

    def velocity(self, t):
        _, dp = eval_p_with_derivative(self.kind, self.lam * np.asarray(t, dtype=float))
        return self.r0 * self.lam * dp

    def v_max(self) -> float:
        """Asymptotic front velocity: ``r0*lam`` (sphere) or :data:`INFINITE_VELOCITY` (cylinder)."""
        if self.kind is BranchKind.ELECTRIC_SPHERE:
            return self.r0 * self.lam
        if self.kind is BranchKind.ELECTRIC_CYLINDER:
            return INFINITE_VELOCITY
        raise UnsupportedError("gravitating layers collapse; there is no asymptotic velocity")

    def radius_from_velocity(self, v):
        """Radius reached when the layer moves at ``v`` (electric sphere only)."""
        if self.kind is not BranchKind.ELECTRIC_SPHERE:
            raise UnsupportedError("radius_from_velocity applies to the electric sphere")
        eta = np.asarray(v, dtype=float) / self.v_max()
        if np.any(eta >= 1.0) or np.any(eta < 0.0):
            raise RangeError("velocity must satisfy 0 <= v < v_max")
        return self.r0 / (1.0 - eta * eta)


def v_max_energy(q, Q, m, r_min, eps0):
    """Terminal speed from converting ``qQ/(4 pi eps0 r_min)`` into kinetic energy."""
    return math.sqrt(q * Q / (2.0 * math.pi * eps0 * m * r_min))


def classical_electron_radius(eps0, e, m_e, c):
    return e * e / (4.0 * math.pi * eps0 * m_e * c * c)


def collapse_time(profile, params: prof.PhysicsParams) -> float:
    """Common collapse time ``(pi/2) sqrt(3 nu0 / (2 rho0))`` of a uniform gravitating ball."""
    if not (
        isinstance(profile, prof.Uniform)
        and params.interaction is prof.Interaction.GRAVITY
        and params.symmetry is prof.Symmetry.SPHERE
    ):
        raise UnsupportedError("collapse_time is defined for a uniform gravitating sphere")
    return 0.5 * math.pi * math.sqrt(3.0 * params.nu0 / (2.0 * profile.rho0))


# ---------------------------------------------------------------------------
# vectorised layer evaluation
# ---------------------------------------------------------------------------
def layer_radius(profile, params, r0, t):
    """Eulerian radius of label(s) ``r0`` at time(s) ``t`` (broadcast)."""
    r0 = np.asarray(r0, dtype=float)
    return r0 * eval_p(params.kind, prof.lam(profile, params, r0) * np.asarray(t, dtype=float))


def layer_velocity(profile, params, r0, t):
    r0 = np.asarray(r0, dtype=float)
    lm = prof.lam(profile, params, r0)
    _, dp = eval_p_with_derivative(params.kind, lm * np.asarray(t, dtype=float))
    return r0 * lm * dp


def jacobian(profile, params, r, t):
    """``dR/dr0`` at label ``r`` and time ``t``; equals 1 at ``t = 0``.

    Evaluated as ``P + r lam' P' t`` with ``r lam'`` expanded in closed form,
    so labels whose enclosed charge underflows to zero (``lam = 0``) take the
    finite limit ``1 +- c rho0 t**2 / 2`` instead of dividing by zero.
    """
    r = np.asarray(r, dtype=float)
    t = np.asarray(t, dtype=float)
    kind = params.kind
    lm = np.asarray(prof.lam(profile, params, r), dtype=float)
    p, dp = eval_p_with_derivative(kind, lm * t)
    c = prof.coupling(params)
    rho = profile.density0(r)
    live = lm > 0
    safe_lm = np.where(live, lm, 1.0)
    if kind.is_sphere:
        r_lam_prime = c * rho / safe_lm - 1.5 * lm
    else:
        r_lam_prime = c * rho / (4.0 * safe_lm) - lm
    sign = 1.0 if kind.is_electric else -1.0
    still = sign * 0.5 * c * rho * t * t
    with np.errstate(invalid="ignore"):
        corr = np.where(live, np.where(t == 0, 0.0, r_lam_prime * dp * t), still)
    return p + corr


def characteristic_bundle(profile, params, r0_grid, times) -> np.ndarray:
    """Rows ``(r0, t, R, V)`` for every label/time pair, label-major."""
    r0 = np.asarray(r0_grid, dtype=float)[:, None]
    t = np.asarray(times, dtype=float)[None, :]
    R = layer_radius(profile, params, r0, t)
    V = layer_velocity(profile, params, r0, t)
    r0b, tb = np.broadcast_arrays(r0, t)
    return np.column_stack([r0b.ravel(), tb.ravel(), R.ravel(), V.ravel()])


# ---------------------------------------------------------------------------
# shock onset
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ShockReport:
    """First crossing of characteristics.

    ``focal`` is true when the earliest event is a layer reaching the
    centre with ``J > 0`` up to that instant (the uniform gravitating ball,
    where all layers arrive together) rather than a genuine crossing.
    """

    t_star: float
    r_star: float
    R_star: float
    kind: BranchKind
    focal: bool = False


def default_t_max(profile, params, r_grid) -> float:
    """``10 / lam`` evaluated at the median label of the grid."""
    lm = prof.lam(profile, params, np.median(np.asarray(r_grid, dtype=float)))
    return 10.0 / float(lm)


def _label_horizon(profile, params, r, t_max):
    """Scan end per label and whether that end is the label's own collapse."""
    kind = params.kind
    lm = np.asarray(prof.lam(profile, params, r), dtype=float)
    if kind.is_electric:
        return np.full(lm.shape, float(t_max)), np.zeros(lm.shape, dtype=bool)
    with np.errstate(divide="ignore"):
        tc = f_sup(kind) / lm
    if kind is BranchKind.GRAVITY_CYLINDER:
        # the inverse is only available up to the capped range
        tc = tc * (1.0 - 1e-12)
    collapses = tc <= t_max
    return np.where(collapses, tc, float(t_max)), collapses


def _first_zero_times(profile, params, r, t_max):
    """Smallest ``t`` with ``J(r, t) = 0`` per label (``inf`` if none), plus focal flags."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    t_end, collapses = _label_horizon(profile, params, r, t_max)
    scale = np.where(collapses, 1.0 - _COLLAPSE_MARGIN, 1.0)
    s = np.linspace(0.0, 1.0, _N_SCAN + 1)[1:]
    tgrid = (t_end * scale)[:, None] * s[None, :]
    J = jacobian(profile, params, r[:, None], tgrid)
    neg = J <= 0.0
    out = np.full(r.shape, math.inf)
    focal = np.zeros(r.shape, dtype=bool)
    for i in range(r.size):
        hits = np.flatnonzero(neg[i])
        if hits.size == 0:
            if collapses[i]:
                out[i] = t_end[i]
                focal[i] = True
            continue
        k = hits[0]
        t_lo = 0.0 if k == 0 else tgrid[i, k - 1]
        t_hi = tgrid[i, k]
        ri = r[i]
        out[i] = optimize.brentq(
            lambda tt: float(jacobian(profile, params, ri, tt)), t_lo, t_hi, xtol=1e-300, rtol=1e-15
        )
    return out, focal


def onset_times(profile, params, r, t_max):
    """Per-label first zero of ``J`` in ``(0, t_max]`` and focal-collapse flags.

    Labels with neither a zero nor a collapse before ``t_max`` get ``inf``.
    """
    return _first_zero_times(profile, params, r, t_max)


def shock_onset(profile, params, r_grid, t_max: float | None = None) -> ShockReport | None:
    """Locate the first characteristic crossing over the labels ``r_grid``.

    Each label gets the first zero in ``t`` of ``J`` (sign-change scan then
    Brent's method), capped at ``t_max`` (default ``10/lam`` at the median
    label). The minimising label is refined by a bounded Brent minimisation
    of the per-label onset time between its grid neighbours. Returns
    ``None`` when ``J`` stays positive up to ``t_max``.

    For gravity, a label whose own collapse happens before ``t_max`` with
    ``J > 0`` throughout contributes its collapse time as a *focal* event.
    Ties (the uniform ball, where every label collapses at once) resolve to
    the smallest label and no refinement is attempted.
    """
    r_grid = np.asarray(r_grid, dtype=float)
    if r_grid.ndim != 1 or r_grid.size < 32 or np.any(np.diff(r_grid) <= 0):
        raise ValueError("r_grid must be a strictly increasing grid of >= 32 labels")
    if t_max is None:
        t_max = default_t_max(profile, params, r_grid)
    times, focal = _first_zero_times(profile, params, r_grid, t_max)
    if not np.isfinite(times).any():
        return None
    t_min = times.min()
    i = int(np.flatnonzero(times <= t_min * (1.0 + 1e-12))[0])
    r_star, t_star = float(r_grid[i]), float(times[i])
    if not focal[i] and 0 < i < r_grid.size - 1:
        def onset(rr):
            return float(_first_zero_times(profile, params, rr, t_max)[0][0])

        res = optimize.minimize_scalar(
            onset,
            bounds=(r_grid[i - 1], r_grid[i + 1]),
            method="bounded",
            options={"xatol": 1e-10 * r_grid[i]},
        )
        if res.fun < t_star:
            r_star, t_star = float(res.x), float(res.fun)
    if focal[i]:
        R_star = 0.0
    else:
        R_star = float(layer_radius(profile, params, r_star, t_star))
    return ShockReport(t_star, r_star, R_star, params.kind, bool(focal[i]))
