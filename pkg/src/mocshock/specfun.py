r"""
Branch functions of the layer trajectories and their inverses.

A layer released from rest at radius :math:`R_0` moves along
:math:`R(t) = R_0\,P(\lambda t)`, where :math:`P` inverts one of four
monotone functions :math:`F`:

================  ================================================  ==============
kind              :math:`F(x)`                                      domain
================  ================================================  ==============
electric sphere   :math:`\sqrt{x(x-1)} + \operatorname{arccosh}\sqrt{x}`   :math:`[1, \infty)`
electric cylinder :math:`\int_0^{\sqrt{\ln x}} e^{l^2}\,dl`                :math:`[1, \infty)`
gravity sphere    :math:`\sqrt{x(1-x)} + \arccos\sqrt{x}`                  :math:`[0, 1]`
gravity cylinder  :math:`\tfrac{\sqrt\pi}{2}\operatorname{erf}\sqrt{\ln(1/x)}`  :math:`(0, 1]`
================  ================================================  ==============

Every branch is evaluated in a substitution variable ``u`` in which it is
smooth and its derivative stays bounded away from zero, so the inverse is
a bracketed Newton iteration with bisection fallback that converges
quadratically over the whole range:

* electric sphere, :math:`x = 1 + w^2`:  :math:`F = w\sqrt{1+w^2} + \operatorname{asinh} w`,
  :math:`dF/dw = 2\sqrt{1+w^2}`;
* electric cylinder, :math:`x = e^{z^2}`:  :math:`F = \int_0^z e^{l^2}dl`;
* gravity sphere, :math:`x = 1 - w^2` away from collapse and :math:`u = x^{3/2}` near
  it, where :math:`F \approx \pi/2 - \tfrac23 x^{3/2}`;
* gravity cylinder, :math:`x = e^{-z^2}`:  :math:`F = \tfrac{\sqrt\pi}{2}\operatorname{erf} z`.

All public functions accept scalars or arrays and return the same shape.
"""

from __future__ import annotations

import enum
import math

import numpy as np
from scipy import special

from .errors import ConvergenceError, DomainError, RangeError

__all__ = [
    "BranchKind",
    "erf",
    "erfi_integral",
    "eval_f",
    "eval_f_derivative",
    "eval_p",
    "eval_p_derivative",
    "f_sup",
]

SQRT_PI_2 = 0.5 * math.sqrt(math.pi)
# Largest admissible argument of the gravity-cylinder inverse.
GRAVITY_CYLINDER_CAP = SQRT_PI_2 * (1.0 - 1e-12)
# Gravity sphere switches to the u = x**1.5 variable for x below this.
_GS_SWITCH_X = 0.5
_GS_SWITCH_Y = 0.5 + 0.25 * math.pi
_DOMAIN_SLACK = 1e-15
_EPS = float(np.finfo(float).eps)


class BranchKind(enum.Enum):
    """Which of the four trajectory branches a layer follows."""

    ELECTRIC_SPHERE = "electric_sphere"
    ELECTRIC_CYLINDER = "electric_cylinder"
    GRAVITY_SPHERE = "gravity_sphere"
    GRAVITY_CYLINDER = "gravity_cylinder"

    @property
    def is_electric(self) -> bool:
        return self in (BranchKind.ELECTRIC_SPHERE, BranchKind.ELECTRIC_CYLINDER)

    @property
    def is_sphere(self) -> bool:
        return self in (BranchKind.ELECTRIC_SPHERE, BranchKind.GRAVITY_SPHERE)


def f_sup(kind: BranchKind) -> float:
    """Supremum of ``F`` over its domain (``inf`` for electric kinds)."""
    if kind is BranchKind.GRAVITY_SPHERE:
        return 0.5 * math.pi
    if kind is BranchKind.GRAVITY_CYLINDER:
        return SQRT_PI_2
    return math.inf


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------
def erf(x):
    """Error function ``2/sqrt(pi) * int_0^x exp(-l**2) dl``."""
    return special.erf(x)


def erfi_integral(z):
    """``int_0^z exp(l**2) dl``, evaluated as ``exp(z**2) * dawsn(z)``.

    Written through Dawson's integral so the growth of the integrand is
    carried by a single exponential; overflows to ``inf`` only where the
    result itself exceeds the float range (z > ~26.6).
    """
    z = np.asarray(z, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.exp(z * z) * special.dawsn(z)
        out = np.where(np.isinf(np.exp(z * z)), np.sign(z) * np.inf, out)
    return _like(out, z)


def _like(out, ref):
    out = np.asarray(out, dtype=float)
    return float(out) if np.ndim(ref) == 0 else out


# ---------------------------------------------------------------------------
# F in substitution variables
# ---------------------------------------------------------------------------
def _fs_elec_w(w):
    return w * np.sqrt(1.0 + w * w) + np.arcsinh(w)


def _fs_grav_w(w):
    return w * np.sqrt(1.0 - w * w) + np.arcsin(w)


def _fs_grav_x(x):
    return np.sqrt(x * (1.0 - x)) + np.arctan2(np.sqrt(1.0 - x), np.sqrt(x))


def _check_domain(kind: BranchKind, x: np.ndarray) -> np.ndarray:
    if np.any(np.isnan(x)):
        raise DomainError(f"{kind.value}: NaN argument")
    if kind.is_electric:
        if np.any(x < 1.0 - _DOMAIN_SLACK):
            raise DomainError(f"{kind.value}: F(x) needs x >= 1, got min {x.min()!r}")
        return np.maximum(x, 1.0)
    lo_ok = x >= 0.0 if kind is BranchKind.GRAVITY_SPHERE else x > 0.0
    if np.any(~lo_ok) or np.any(x > 1.0 + _DOMAIN_SLACK):
        raise DomainError(
            f"{kind.value}: F(x) needs x in "
            f"{'[0, 1]' if kind is BranchKind.GRAVITY_SPHERE else '(0, 1]'}"
        )
    return np.minimum(x, 1.0)


def eval_f(kind: BranchKind, x):
    """Evaluate the branch function ``F`` of ``kind`` at ``x``.

    Raises :class:`DomainError` outside the branch domain; arguments within
    1e-15 of a closed endpoint are clamped onto it.
    """
    xa = _check_domain(kind, np.asarray(x, dtype=float))
    if kind is BranchKind.ELECTRIC_SPHERE:
        out = _fs_elec_w(np.sqrt(xa - 1.0))
    elif kind is BranchKind.ELECTRIC_CYLINDER:
        out = erfi_integral(np.sqrt(np.log(xa)))
    elif kind is BranchKind.GRAVITY_SPHERE:
        out = _fs_grav_x(xa)
    else:
        out = SQRT_PI_2 * special.erf(np.sqrt(-np.log(xa)))
    return _like(out, x)


def eval_f_derivative(kind: BranchKind, x):
    """Closed-form ``dF/dx``; infinite at ``x=1`` and, for the gravity sphere, zero at ``x=0``."""
    xa = _check_domain(kind, np.asarray(x, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is BranchKind.ELECTRIC_SPHERE:
            out = xa / np.sqrt(xa * (xa - 1.0))
        elif kind is BranchKind.ELECTRIC_CYLINDER:
            out = 1.0 / (2.0 * np.sqrt(np.log(xa)))
        elif kind is BranchKind.GRAVITY_SPHERE:
            out = -np.sqrt(xa / (1.0 - xa))
        else:
            out = -1.0 / (2.0 * np.sqrt(-np.log(xa)))
    return _like(out, x)


# ---------------------------------------------------------------------------
# inversion
# ---------------------------------------------------------------------------
def _safeguarded_newton(g, dg, y, lo, hi, u, *, increasing=True, rtol=1e-14, maxiter=200):
    """Solve ``g(u) = y`` elementwise on brackets ``[lo, hi]``.

    ``g`` must be monotone on each bracket. Iterates that leave the current
    bracket (or are not finite) are replaced by the bracket midpoint, as are
    Newton steps that fail to halve the step taken two iterations earlier.
    """
    sgn = 1.0 if increasing else -1.0
    lo, hi, u = lo.copy(), hi.copy(), u.copy()
    active = np.ones(u.shape, dtype=bool)
    dx = np.full(u.shape, np.inf)
    dx_old = dx.copy()
    for _ in range(maxiter):
        ua = u[active]
        with np.errstate(all="ignore"):
            res = sgn * (g(ua) - y[active])
            step = res / (sgn * dg(ua))
        la, ha = lo[active], hi[active]
        la = np.where(res < 0.0, ua, la)
        ha = np.where(res > 0.0, ua, ha)
        un = ua - step
        bad = ~np.isfinite(un) | (un < la) | (un > ha)
        # slow progress: Newton is cycling across an inflection
        bad |= np.abs(step) > 0.5 * dx_old[active]
        # ulp-wide bracket: Newton can bounce between the ends, so bisect
        tight = ha - la <= 64.0 * _EPS * np.abs(ha)
        bad |= tight & ((un == la) | (un == ha))
        un = np.where(bad, 0.5 * (la + ha), un)
        un = np.where(res == 0.0, ua, un)
        done = (
            (np.abs(un - ua) <= rtol * np.abs(ua) + 1e-300)
            | (ha - la <= rtol * np.abs(ha))
            # residual already at the rounding level of y
            | (np.abs(res) <= 4.0 * _EPS * np.abs(y[active]))
        )
        lo[active], hi[active], u[active] = la, ha, un
        dx_old[active] = dx[active]
        dx[active] = np.abs(un - ua)
        idx = np.flatnonzero(active)
        active[idx[done]] = False
        if not active.any():
            return u
    raise ConvergenceError(f"inversion did not converge for {active.sum()} value(s)")


def _invert(kind: BranchKind, y: np.ndarray):
    """Return ``(x, aux)`` with ``F(x) = y``; ``aux`` carries the substitution variable."""
    if np.any(np.isnan(y)) or np.any(y < 0.0):
        raise RangeError(f"{kind.value}: P(y) needs y >= 0")
    y = y.astype(float).ravel()
    if kind is BranchKind.ELECTRIC_SPHERE:
        # g(w) >= 2w and g(w) >= w**2 bound the root from above.
        hi = np.minimum(0.5 * y, np.sqrt(y)) * (1 + 1e-12) + 1e-300
        w = _safeguarded_newton(
            _fs_elec_w, lambda w: 2.0 * np.sqrt(1.0 + w * w), y, np.zeros_like(y), hi, hi
        )
        return 1.0 + w * w, w
    if kind is BranchKind.ELECTRIC_CYLINDER:
        hi = np.minimum(y, np.sqrt(np.log1p(2.0 * y) + 1.0)) + 1e-300
        for _ in range(64):
            short = erfi_integral(hi) < y
            if not short.any():
                break
            hi = np.where(short, 1.5 * hi, hi)
        z = _safeguarded_newton(erfi_integral, lambda z: np.exp(z * z), y, np.zeros_like(y), hi, hi)
        with np.errstate(over="ignore"):
            return np.exp(z * z), z
    if kind is BranchKind.GRAVITY_SPHERE:
        if np.any(y > 0.5 * math.pi * (1.0 + _DOMAIN_SLACK)):
            raise RangeError("gravity_sphere: P(y) needs y <= pi/2 (total collapse)")
        y = np.minimum(y, 0.5 * math.pi)
        x = np.empty_like(y)
        far = y < _GS_SWITCH_Y
        if far.any():
            yf = y[far]
            hi = np.full_like(yf, math.sqrt(0.5))
            w = _safeguarded_newton(
                _fs_grav_w,
                lambda w: 2.0 * np.sqrt(1.0 - w * w),
                yf,
                np.zeros_like(yf),
                hi,
                np.minimum(0.5 * yf, hi),
            )
            x[far] = 1.0 - w * w
        near = ~far
        if near.any():
            yn = y[near]
            hi = np.full_like(yn, _GS_SWITCH_X**1.5)
            u0 = np.minimum(1.5 * (0.5 * math.pi - yn), hi)
            u = _safeguarded_newton(
                lambda u: _fs_grav_x(u ** (2.0 / 3.0)),
                lambda u: -(2.0 / 3.0) / np.sqrt(1.0 - u ** (2.0 / 3.0)),
                yn,
                np.zeros_like(yn),
                hi,
                u0,
                increasing=False,
            )
            x[near] = u ** (2.0 / 3.0)
        return x, None
    if np.any(y > GRAVITY_CYLINDER_CAP):
        raise RangeError(
            "gravity_cylinder: P(y) needs y <= sqrt(pi)/2*(1-1e-12) (total collapse)"
        )
    z0 = special.erfinv(y / SQRT_PI_2)
    z = _safeguarded_newton(
        lambda z: SQRT_PI_2 * special.erf(z),
        lambda z: np.exp(-z * z),
        y,
        np.zeros_like(y),
        np.full_like(y, 6.0),
        np.minimum(z0, 6.0),
    )
    return np.exp(-z * z), z


def eval_p(kind: BranchKind, y):
    """Inverse branch function: ``x`` with ``eval_f(kind, x) == y``.

    ``P(0) = 1`` for every kind. Raises :class:`RangeError` for negative
    ``y`` or, on gravity branches, for ``y`` past total collapse.
    """
    ya = np.asarray(y, dtype=float)
    x, _ = _invert(kind, ya)
    return _like(x.reshape(ya.shape), y)


def eval_p_derivative(kind: BranchKind, y):
    """``dP/dy`` from the closed forms ``1/F'(P)``.

    Zero at ``y = 0`` on every branch; ``-inf`` at the gravity-sphere
    collapse point ``y = pi/2``.
    """
    return eval_p_with_derivative(kind, y)[1]


def eval_p_with_derivative(kind: BranchKind, y):
    """``(P(y), P'(y))`` from a single inversion."""
    ya = np.asarray(y, dtype=float)
    x, aux = _invert(kind, ya)
    with np.errstate(divide="ignore", invalid="ignore"):
        if kind is BranchKind.ELECTRIC_SPHERE:
            d = aux / np.sqrt(1.0 + aux * aux)
        elif kind is BranchKind.ELECTRIC_CYLINDER:
            d = 2.0 * aux
        elif kind is BranchKind.GRAVITY_SPHERE:
            d = -np.sqrt((1.0 - x) / x)
        else:
            d = -2.0 * aux
    return _like(x.reshape(ya.shape), y), _like(d.reshape(ya.shape), y)
