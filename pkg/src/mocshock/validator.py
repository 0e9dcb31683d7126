"""
Independent numerical oracles for the closed-form solutions.

* :func:`ode_oracle` integrates a single layer's equation of motion
  ``R'' = +-gamma / R**p`` from rest with an adaptive embedded Runge-Kutta
  method (DOP853).
* :func:`pde_evolve` solves the Eulerian system for the cumulative
  distribution ``F`` and velocity ``v``

      F_t + v F_r = 0,      v_t + v v_r = kappa S(r) F,

  with first-order upwind differences (``S = 1/(4 pi r**2)`` sphere,
  ``1/(2 pi r)`` cylinder, ``F`` the enclosed charge) and can carry
  massless tracers.
* :func:`pairwise_crossing_time` finds the first crossing of a dense bundle
  of layers from their trajectories alone.
* :func:`continuity_residual` checks the continuity equation on two
  snapshots.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import integrate, interpolate, optimize

from . import profiles as prof
from ._fd import derivative
from .errors import CflViolation, StepFailure
from .specfun import eval_p

__all__ = [
    "Check",
    "EulerianState",
    "OdeRun",
    "continuity_residual",
    "energy_drift",
    "kappa",
    "ode_oracle",
    "pairwise_crossing_time",
    "pde_evolve",
    "report_json",
]

REPULSIVE, ATTRACTIVE = "repulsive", "attractive"
# attractive runs stop once the layer is this close to the centre (relative to r0)
COLLAPSE_FRACTION = 1e-6


@dataclass(frozen=True)
class OdeRun:
    r0: float
    gamma: float
    sign: str
    exponent: int
    t: np.ndarray
    R: np.ndarray
    V: np.ndarray
    stop_time: float | None = None


def ode_oracle(r0, gamma, sign, exponent, t_end, tol=1e-12, t_eval=None) -> OdeRun:
    """Integrate ``R'' = s*gamma/R**exponent`` from ``R(0)=r0, R'(0)=0``.

    ``tol`` is the per-step relative tolerance (absolute tolerances are
    scaled by ``r0`` and the layer's velocity scale). Attractive runs stop at
    ``R = 1e-6 r0`` and report that time as ``stop_time``.
    """
    if sign not in (REPULSIVE, ATTRACTIVE):
        raise ValueError(f"sign must be {REPULSIVE!r} or {ATTRACTIVE!r}")
    if exponent not in (1, 2):
        raise ValueError("exponent must be 1 (cylinder) or 2 (sphere)")
    if not 1e-12 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-12, 1e-6]")
    s = 1.0 if sign == REPULSIVE else -1.0
    vscale = math.sqrt(2.0 * gamma / r0 ** (exponent - 1)) if gamma > 0 else 1.0

    def rhs(_t, y):
        return [y[1], s * gamma / y[0] ** exponent]

    events = None
    if s < 0:
        def hit_centre(_t, y):
            return y[0] - COLLAPSE_FRACTION * r0

        hit_centre.terminal = True
        hit_centre.direction = -1
        events = hit_centre

    sol = integrate.solve_ivp(
        rhs,
        (0.0, float(t_end)),
        [float(r0), 0.0],
        method="DOP853",
        rtol=tol,
        atol=[tol * r0, tol * vscale],
        dense_output=True,
        events=events,
    )
    stop = None
    if events is not None and sol.t_events[0].size:
        stop = float(sol.t_events[0][0])
    elif sol.status != 0:
        raise StepFailure(sol.message)
    if t_eval is None:
        ts, Y = sol.t, sol.y
    else:
        ts = np.asarray(t_eval, dtype=float)
        if stop is not None:
            ts = ts[ts <= stop]
        Y = sol.sol(ts)
    return OdeRun(float(r0), float(gamma), sign, exponent, ts, Y[0], Y[1], stop)


def energy_drift(run: OdeRun) -> float:
    """Largest change of ``V**2/2 + potential`` relative to the instantaneous energy scale."""
    s = 1.0 if run.sign == REPULSIVE else -1.0
    if run.exponent == 2:
        pot = s * run.gamma / run.R
    else:
        pot = -s * run.gamma * np.log(run.R / run.r0)
    if run.gamma == 0:
        return float(np.max(np.abs(run.V)))
    kin = 0.5 * run.V**2
    e0 = s * run.gamma / run.r0 if run.exponent == 2 else 0.0
    # the log potential vanishes at rest, so floor the scale at gamma / r0**(p-1)
    scale = np.maximum(kin + np.abs(pot), run.gamma / run.r0 ** (run.exponent - 1))
    return float(np.max(np.abs(kin + pot - e0) / scale))


def kappa(params: prof.PhysicsParams) -> float:
    """Signed coupling of the Eulerian system."""
    if params.interaction is prof.Interaction.ELECTRIC:
        return params.delta / params.eps0
    if params.interaction is prof.Interaction.GRAVITY:
        return -1.0 / params.nu0
    delta0 = params.eps0 / params.nu0
    return (params.delta - delta0) / params.eps0


# ---------------------------------------------------------------------------
# Eulerian solver
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class EulerianState:
    t: float
    r: np.ndarray
    bigF: np.ndarray
    v: np.ndarray
    kappa: float
    symmetry: prof.Symmetry
    tracers: np.ndarray = field(default_factory=lambda: np.empty(0))

    @property
    def S_kind(self) -> str:
        return "1/(4 pi r^2)" if self.symmetry is prof.Symmetry.SPHERE else "1/(2 pi r)"

    @classmethod
    def initial(cls, profile, params, n_cells: int, *, extent: float | None = None, tracers=()):
        """Rest state on ``[0, extent]`` with ``n_cells`` cells.

        ``extent`` defaults to three times the outer edge of the support.
        """
        if extent is None:
            outer = profile.support[1]
            if not math.isfinite(outer):
                raise ValueError("extent is required for profiles of unbounded support")
            extent = 3.0 * outer
        r = np.linspace(0.0, extent, n_cells + 1)
        F0 = np.asarray(profile.cumulative(r, params.symmetry), dtype=float)
        return cls(
            0.0, r, F0, np.zeros_like(r), kappa(params), params.symmetry,
            np.asarray(tracers, dtype=float),
        )


def _upwind_gradient(q, v, dr):
    back = np.empty_like(q)
    back[1:] = (q[1:] - q[:-1]) / dr
    back[0] = 0.0
    fwd = np.empty_like(q)
    fwd[:-1] = (q[1:] - q[:-1]) / dr
    fwd[-1] = 0.0  # outflow: zero-gradient ghost node
    return np.where(v > 0, back, fwd)


def pde_evolve(state: EulerianState, t_out, cfl: float = 0.5, *, v_ref: float | None = None,
               dt: float | None = None):
    """Advance ``state`` with explicit first-order upwind steps.

    ``t_out`` lists output times (ascending). The step is
    ``cfl * dr / max|v|``, capped at ``cfl * dr / v_ref`` so the first steps
    out of rest stay small. ``v_ref`` defaults to ``max sqrt(2 |kappa| S F r)``,
    the speed scale ``lam * r`` of the initial state. A fixed ``dt`` may be
    given instead; it raises :class:`CflViolation` if any step would break
    ``max|v| dt/dr <= 1``.
    """
    if not 0.0 < cfl < 1.0:
        raise CflViolation("cfl must lie in (0, 1)")
    r = state.r
    dr = float(r[1] - r[0])
    if not np.allclose(np.diff(r), dr, rtol=1e-9, atol=0.0):
        raise ValueError("pde_evolve expects a uniform grid")
    with np.errstate(divide="ignore"):
        # F is the enclosed charge, so the 4 pi (2 pi) of Gauss's law sits in S
        if state.symmetry is prof.Symmetry.SPHERE:
            S = 1.0 / (4.0 * math.pi * r**2)
        else:
            S = 1.0 / (2.0 * math.pi * r)
    S[0] = 0.0  # centre pinned: v(0) = 0, F(0) = 0
    if v_ref is None:
        v_ref = float(np.sqrt(np.max(2.0 * abs(state.kappa) * S * np.abs(state.bigF) * r)))
        if not v_ref > 0:
            v_ref = dr  # no forcing: any step leaves the state frozen
    F = state.bigF.copy()
    v = state.v.copy()
    x = state.tracers.copy()
    t = state.t
    out = []
    for t_next in np.sort(np.asarray(t_out, dtype=float)):
        while t < t_next * (1.0 - 1e-14):
            vmax = float(np.max(np.abs(v)))
            if dt is None:
                step = cfl * dr / max(vmax, v_ref)
            else:
                step = dt
                if vmax * step > dr:
                    raise CflViolation(f"max|v| dt/dr = {vmax * step / dr:.3g} > 1 at t={t:.6g}")
            step = min(step, t_next - t)
            if x.size:
                x = x + step * np.interp(x, r, v)
            gF = _upwind_gradient(F, v, dr)
            gv = _upwind_gradient(v, v, dr)
            F, v = F - step * v * gF, v + step * (state.kappa * S * F - v * gv)
            F[0] = 0.0
            v[0] = 0.0
            t += step
        out.append(EulerianState(float(t_next), r, F.copy(), v.copy(), state.kappa, state.symmetry, x.copy()))
        t = float(t_next)
    return out


# ---------------------------------------------------------------------------
# crossings and residuals
# ---------------------------------------------------------------------------
def pairwise_crossing_time(profile, params, labels, t_max, n_times: int = 2000) -> float:
    """Earliest time any two neighbouring layers of the bundle ``labels`` meet.

    Uses only the trajectories ``r0 P(lam t)``: trajectories are sampled on
    a uniform time grid, the first sample interval where a neighbouring pair
    has swapped order is located, and every pair that swapped there is
    refined with Brent's method. Returns ``inf`` if no pair meets by ``t_max``.
    """
    labels = np.asarray(labels, dtype=float)
    kind = params.kind
    lam = np.asarray(prof.lam(profile, params, labels), dtype=float)
    ts = np.linspace(0.0, float(t_max), n_times + 1)
    R = labels[:, None] * eval_p(kind, lam[:, None] * ts[None, :])
    gap = np.diff(R, axis=0)
    swapped = np.flatnonzero((gap <= 0).any(axis=0))
    if swapped.size == 0:
        return math.inf
    k = swapped[0]
    best = math.inf
    for i in np.flatnonzero(gap[:, k] <= 0):
        a, b, la, lb = labels[i], labels[i + 1], lam[i], lam[i + 1]

        def sep(tt):
            return b * eval_p(kind, lb * tt) - a * eval_p(kind, la * tt)

        best = min(best, optimize.brentq(sep, ts[k - 1], ts[k], xtol=1e-300, rtol=1e-15))
    return best


def continuity_residual(s1, s2, symmetry=prof.Symmetry.SPHERE, t_char: float | None = None) -> float:
    """Normalised residual of ``f_t + r**-d (r**d f v)_r = 0`` from two snapshots.

    ``f_t`` is the forward difference at the Eulerian nodes of ``s1``, using
    a cubic spline of ``s2``; the flux divergence ``(f v)' + d f v / r`` is
    taken at ``s1`` with second-order stencils. The maximum over interior
    nodes is divided by ``max f / t_char``; ``t_char`` defaults to
    ``max r / max |v|`` of ``s1``.
    """
    dt = s2.t - s1.t
    if dt <= 0:
        raise ValueError("s2 must be later than s1")
    r, f, v = s1.r, s1.f, s1.v
    f2 = interpolate.CubicSpline(s2.r, s2.f)(r)
    g = f * v
    d = symmetry.dim_exponent
    div = derivative(g, r, 1) + d * g / r
    res = (f2 - f) / dt + div
    inner = np.zeros(r.size, dtype=bool)
    inner[1:-1] = True
    inner &= (r >= s2.r[0]) & (r <= s2.r[-1])
    if t_char is None:
        vmax = float(np.max(np.abs(v)))
        t_char = float(np.max(r)) / vmax if vmax > 0 else dt
    scale = float(np.max(np.abs(f))) / t_char
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(res[inner])) / scale)


# ---------------------------------------------------------------------------
# reporting
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Check:
    name: str
    error: float
    tolerance: float
    passed: bool
    detail: str = ""

    @classmethod
    def bound(cls, name, error, tolerance, detail=""):
        return cls(name, float(error), float(tolerance), bool(error <= tolerance), detail)


def report_json(checks) -> str:
    payload = {
        "passed": all(c.passed for c in checks),
        "checks": [asdict(c) for c in checks],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
