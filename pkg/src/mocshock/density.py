"""
Density evolution along characteristics and Eulerian sampling.

Charge conservation between neighbouring layers gives

    rho(R, t) = rho0(r0) / (P**d * J),      d = 2 (sphere), 1 (cylinder),

where ``P = P(lam(r0) t)`` and ``J`` is the Jacobian of the Lagrangian map.
The cumulative distribution is carried unchanged by every layer, so
``F(R(r0, t), t) = F0(r0)`` and no quadrature of the evolved field is needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import profiles as prof
from .characteristics import jacobian, layer_radius, layer_velocity
from .errors import DomainError, RangeError, ShockError
from .specfun import BranchKind, _safeguarded_newton, eval_f, eval_p, eval_p_with_derivative

__all__ = [
    "FieldSnapshot",
    "density_along",
    "density_uniform",
    "distribution_function",
    "label_of",
    "sample_field",
    "time_from_density_uniform",
]

# Labels with J at or below this are treated as crossed.
SHOCK_FLOOR = 1e-10


@dataclass(frozen=True)
class FieldSnapshot:
    """Eulerian view of the flow at time ``t``, one node per Lagrangian label.

    ``r0`` holds the labels, ``r`` their radii. ``valid`` is false when the
    snapshot was truncated at a crossed label.
    """

    t: float
    r0: np.ndarray
    r: np.ndarray
    f: np.ndarray
    bigF: np.ndarray
    v: np.ndarray
    valid: bool = True


def _printed_denominator(kind, p, t, lm, rho, c):
    """Bracket of the closed-form density, written per branch."""
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is BranchKind.ELECTRIC_SPHERE:
            return p + t * np.sqrt((p - 1.0) / p) * (c * rho / lm - 1.5 * lm)
        if kind is BranchKind.ELECTRIC_CYLINDER:
            return p + 2.0 * t * np.sqrt(np.log(p)) * (c * rho / (4.0 * lm) - lm)
        if kind is BranchKind.GRAVITY_SPHERE:
            return p - t * np.sqrt((1.0 - p) / p) * (c * rho / lm - 1.5 * lm)
        return p - 2.0 * t * np.sqrt(np.log(1.0 / p)) * (c * rho / (4.0 * lm) - lm)


def density_along(profile, params, r0, t, *, form: str = "printed"):
    """Radius and density of the layer labelled ``r0`` at time ``t``.

    ``form="printed"`` evaluates the branch-specific closed form;
    ``form="jacobian"`` evaluates ``rho0 / (P**d J)``. The two agree to
    rounding. Raises :class:`ShockError` where ``J <= 0``.
    """
    r0 = np.asarray(r0, dtype=float)
    t = np.asarray(t, dtype=float)
    kind = params.kind
    lm = prof.lam(profile, params, r0)
    p, _ = eval_p_with_derivative(kind, lm * t)
    rho0 = profile.density0(r0)
    if form == "printed":
        den = np.where(
            t == 0, 1.0, _printed_denominator(kind, p, t, lm, rho0, prof.coupling(params))
        )
    elif form == "jacobian":
        den = jacobian(profile, params, r0, t)
    else:
        raise ValueError(f"unknown form {form!r}")
    if np.any(den <= 0):
        raise ShockError("characteristics have crossed at the requested label/time")
    d = params.symmetry.dim_exponent
    return r0 * p, rho0 / (p**d * den)


def density_uniform(rho0, lam, kind: BranchKind, t):
    """Spatially constant density ``rho0 / P**3(lam t)`` of a uniform ball."""
    if not kind.is_sphere:
        raise DomainError("density_uniform applies to sphere kinds")
    return rho0 / eval_p(kind, lam * np.asarray(t, dtype=float)) ** 3


def time_from_density_uniform(rho_ratio, kind: BranchKind):
    """``lam * t`` at which a uniform ball has ``rho0/rho = rho_ratio``.

    Expansion gives ratios >= 1, collapse ratios in ``(0, 1]``.
    """
    if not kind.is_sphere:
        raise DomainError("time_from_density_uniform applies to sphere kinds")
    return eval_f(kind, np.cbrt(np.asarray(rho_ratio, dtype=float)))


def _outer_label(profile) -> float:
    return profile.support[1]


def label_of(profile, params, r, t):
    """Invert the Lagrangian map: label ``r0`` with ``R(r0, t) = r``.

    Pre-shock the map is strictly increasing in ``r0`` with derivative
    ``J``, so this is the same bracketed Newton iteration used for ``P``.
    Raises :class:`RangeError` beyond the outermost layer of a compactly
    supported profile.
    """
    ra = np.asarray(r, dtype=float)
    flat = ra.ravel()
    t = float(t)
    out = np.zeros_like(flat)
    if t == 0:
        out[:] = flat
        return out.reshape(ra.shape) if ra.ndim else float(out[0])
    r_out = _outer_label(profile)
    if math.isfinite(r_out) and np.any(flat > layer_radius(profile, params, r_out, t) * (1 + 1e-12)):
        raise RangeError("Eulerian radius lies beyond the outermost evolved layer")
    pos = flat > 0
    rp = flat[pos]
    if rp.size:
        if params.kind.is_electric:
            lo, hi = np.full_like(rp, 1e-300), rp.copy()
        else:
            lo = rp.copy()
            hi = _gravity_upper_bracket(profile, params, rp, t)
        if math.isfinite(r_out):
            hi = np.minimum(hi, r_out)
            lo = np.minimum(lo, hi)
        # initial guess: homogeneous stretch of the label
        guess = np.clip(rp / _median_stretch(profile, params, rp, t), lo, hi)
        out[pos] = _safeguarded_newton(
            lambda x: layer_radius(profile, params, x, t),
            lambda x: jacobian(profile, params, x, t),
            rp,
            lo,
            hi,
            guess,
            rtol=1e-14,
        )
    return out.reshape(ra.shape) if ra.ndim else float(out[0])


def _median_stretch(profile, params, r, t):
    rm = float(np.median(r))
    return max(float(layer_radius(profile, params, rm, t)) / rm, 1e-300)


def _gravity_upper_bracket(profile, params, r, t):
    hi = 2.0 * r
    for _ in range(200):
        short = layer_radius(profile, params, hi, t) < r
        if not short.any():
            return hi
        hi = np.where(short, 2.0 * hi, hi)
    raise RangeError("could not bracket the label of an Eulerian radius")


def distribution_function(profile, params, r, t):
    """Cumulative charge inside Eulerian radius ``r`` at time ``t`` (pre-shock)."""
    return profile.cumulative(label_of(profile, params, r, t), params.symmetry)


def sample_field(profile, params, r0_grid, t) -> FieldSnapshot:
    """Density, cumulative and velocity at the positions of the labels ``r0_grid``.

    Labels from the first one with ``J <= 1e-10`` onward are dropped and the
    snapshot is flagged invalid.
    """
    r0 = np.asarray(r0_grid, dtype=float)
    t = float(t)
    J = jacobian(profile, params, r0, t)
    crossed = np.flatnonzero(J <= SHOCK_FLOOR)
    valid = crossed.size == 0
    if not valid:
        r0 = r0[: crossed[0]]
    R, f = density_along(profile, params, r0, t, form="jacobian")
    v = layer_velocity(profile, params, r0, t)
    order = np.argsort(R, kind="stable")
    return FieldSnapshot(
        t=t,
        r0=r0[order],
        r=np.asarray(R)[order],
        f=np.asarray(f)[order],
        bigF=np.asarray(profile.cumulative(r0, params.symmetry))[order],
        v=np.asarray(v)[order],
        valid=valid,
    )
