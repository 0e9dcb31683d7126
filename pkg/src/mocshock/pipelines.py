"""
Scenario pipelines behind the command-line subcommands.

Each ``run_*`` function takes a :class:`~mocshock.config.ScenarioConfig`
and an output directory, writes its artifacts there and returns the
manifest dictionary it saved as ``manifest.json``.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import characteristics as ch
from . import density as dn
from . import profiles as prof
from . import quantum as qm
from . import validator as va
from ._io import atomic_write_text, write_csv, write_json
from .config import ScenarioConfig
from .errors import ConfigError, UnsupportedError
from .specfun import BranchKind, eval_f, eval_p, f_sup

__all__ = ["run_reconstruct", "run_shock_scan", "run_simulate", "run_validate", "validation_checks"]

# largest fraction of the earliest collapse time that snapshots may reach
_COLLAPSE_GUARD = 0.999
# closed forms vs the ODE oracle; set by the oracle's own per-step tolerance
CERTIFICATION_TOL = 1e-8
ENERGY_TOL = 1e-9
CONSERVATION_TOL = 1e-10
ORDER_BAND = (1.7, 2.3)
PDE_CELLS = 200
CONTINUITY_LABELS = 400
# snapshot separation in units of 1/lam
CONTINUITY_DT = 5e-5


def _closed_form(cfg: ScenarioConfig):
    profile, params = cfg.profile(), cfg.physics()
    try:
        params.kind
    except UnsupportedError as exc:
        raise ConfigError(f"this subcommand needs an electric or gravity scenario: {exc}") from None
    return profile, params


def _labels(cfg):
    lo, hi = cfg.label_range()
    return np.linspace(lo, hi, cfg.get("grids", "n_labels"))


def _earliest_collapse(profile, params, labels) -> float:
    if params.kind.is_electric:
        return math.inf
    lam_max = float(np.max(prof.lam(profile, params, labels)))
    return f_sup(params.kind) / lam_max if lam_max > 0 else math.inf


def _horizon(cfg, profile, params, labels, warnings):
    """End of the time grid: ``t_max``, pulled back before the earliest collapse."""
    t_max = cfg.get("grids", "t_max")
    tc = _earliest_collapse(profile, params, labels)
    if t_max >= _COLLAPSE_GUARD * tc:
        t_end = _COLLAPSE_GUARD * tc
        warnings.append(
            f"t_max={t_max!r} reaches the first layer collapse at t={tc!r}; "
            f"time grid ends at {t_end!r}"
        )
        return t_end, tc
    return t_max, tc


def _shock_dict(report):
    if report is None:
        return None
    return {
        "t_star": report.t_star,
        "r_star": report.r_star,
        "R_star": report.R_star,
        "kind": report.kind.value,
        "focal": report.focal,
    }


def _shock(profile, params, labels, t_end, warnings):
    if labels.size < 32:
        warnings.append("shock scan skipped: needs at least 32 labels")
        return None
    return ch.shock_onset(profile, params, labels, t_max=t_end)


def _base_manifest(cfg, command):
    return {"command": command, "config": cfg.echo(), "warnings": []}


def _collapse_entry(profile, params, tc):
    if isinstance(profile, prof.Uniform) and params.kind is BranchKind.GRAVITY_SPHERE:
        return ch.collapse_time(profile, params)
    return tc if math.isfinite(tc) else None


# ---------------------------------------------------------------------------
def run_simulate(cfg: ScenarioConfig, out_dir) -> dict:
    """Characteristic bundle, Eulerian snapshots and the shock report."""
    out = Path(out_dir)
    profile, params = _closed_form(cfg)
    man = _base_manifest(cfg, "simulate")
    labels = _labels(cfg)
    t_end, tc = _horizon(cfg, profile, params, labels, man["warnings"])
    times = np.linspace(0.0, t_end, cfg.get("grids", "n_times"))
    bundle = ch.characteristic_bundle(profile, params, labels, times)
    write_csv(out / "characteristics.csv", ["r0", "t", "R", "V"], bundle.T)

    report = _shock(profile, params, labels, t_end, man["warnings"])
    man["shock"] = _shock_dict(report)
    man["collapse_time"] = _collapse_entry(profile, params, tc)

    snaps = []
    for k, t in enumerate(np.linspace(0.0, t_end, cfg.get("grids", "n_snapshots"))):
        s = dn.sample_field(profile, params, labels, t)
        name = f"snapshots/snapshot_{k:03d}.csv"
        write_csv(out / name, ["r", "f", "F", "v"], [s.r, s.f, s.bigF, s.v], comment=f"t={float(t)!r}")
        snaps.append({"file": name, "t": float(t), "valid": s.valid, "n": int(s.r.size)})
        if not s.valid:
            man["warnings"].append(f"snapshot at t={float(t)!r} truncated at crossed labels")
    man["snapshots"] = snaps
    man["files"] = ["characteristics.csv"] + [s["file"] for s in snaps]
    write_json(out / "manifest.json", man)
    return man


def run_shock_scan(cfg: ScenarioConfig, out_dir) -> dict:
    """Per-label first crossing times and the refined shock report."""
    out = Path(out_dir)
    profile, params = _closed_form(cfg)
    man = _base_manifest(cfg, "shock-scan")
    labels = _labels(cfg)
    t_end, tc = _horizon(cfg, profile, params, labels, man["warnings"])
    times, focal = ch.onset_times(profile, params, labels, t_end)
    write_csv(out / "shock_scan.csv", ["r0", "t_onset", "focal"], [labels, times, focal.astype(float)])
    man["shock"] = _shock_dict(_shock(profile, params, labels, t_end, man["warnings"]))
    man["collapse_time"] = _collapse_entry(profile, params, tc)
    man["t_max"] = t_end
    man["files"] = ["shock_scan.csv"]
    write_json(out / "manifest.json", man)
    return man


def _eulerian_grid(profile, params, t, n, r_max):
    outer = profile.support[1]
    if math.isfinite(outer):
        edge = float(ch.layer_radius(profile, params, outer, t))
        return np.linspace(0.0, edge, n)
    return np.linspace(0.0, r_max, n)


def run_reconstruct(cfg: ScenarioConfig, out_dir) -> dict:
    """Density, velocity, phase, wave function and potential per snapshot time."""
    out = Path(out_dir)
    profile, params = _closed_form(cfg)
    qm.check_normalized(profile, params.symmetry)
    man = _base_manifest(cfg, "reconstruct")
    man["gauge"] = "phi(0, t) = 0; U is fixed up to an additive function of t"
    labels = _labels(cfg)
    t_end, _ = _horizon(cfg, profile, params, labels, man["warnings"])
    report = _shock(profile, params, labels, t_end, man["warnings"])
    man["shock"] = _shock_dict(report)
    times = np.linspace(0.0, t_end, cfg.get("grids", "n_snapshots"))
    if report is not None:
        keep = times < report.t_star
        if not keep.all():
            man["warnings"].append(
                f"times at or after the first crossing t*={report.t_star!r} dropped; "
                f"last reconstructed time is {float(times[keep][-1])!r}"
            )
        times = times[keep]
    r_span = cfg.get("grids", "r_max") or cfg.label_range()[1]
    files = []
    for k, t in enumerate(times):
        r = _eulerian_grid(profile, params, t, cfg.get("grids", "n_labels"), r_span)
        q = qm.reconstruct(profile, params, r, t)
        name = f"quantum/quantum_{k:03d}.csv"
        write_csv(
            out / name,
            ["r", "f", "v", "phi", "psi_re", "psi_im", "U"],
            [q.r, q.f, q.v, q.phi, q.psi_re, q.psi_im, q.U],
            comment=f"t={float(t)!r}",
        )
        files.append({"file": name, "t": float(t)})
    man["snapshots"] = files
    man["files"] = [f["file"] for f in files]
    write_json(out / "manifest.json", man)
    return man


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------
def _inversion_points(kind):
    if kind.is_electric:
        return 1.0 + np.geomspace(1e-8, 1e4, 200)
    lo = 1e-10 if kind is BranchKind.GRAVITY_SPHERE else 1e-8
    return np.geomspace(lo, 1.0, 200)


def _check_inversion(kind, tol):
    x = _inversion_points(kind)
    err = np.max(np.abs(eval_p(kind, eval_f(kind, x)) - x) / np.maximum(1.0, x))
    return va.Check.bound(f"inversion[{kind.value}]", err, tol)


def _ode_checks(profile, params, labels, ode_tol):
    kind = params.kind
    sign = va.REPULSIVE if kind.is_electric else va.ATTRACTIVE
    exponent = 2 if kind.is_sphere else 1
    worst_rv, worst_e = 0.0, 0.0
    picks = labels[np.linspace(0, labels.size - 1, 10).round().astype(int)]
    for r0 in picks:
        c = ch.Characteristic.from_profile(profile, params, r0)
        if c.lam == 0:
            continue
        t_end = 20.0 / c.lam if kind.is_electric else 0.9 * c.collapse_time
        ts = np.linspace(t_end / 20, t_end, 20)
        g = float(prof.gamma(profile, params, r0))
        run = va.ode_oracle(r0, g, sign, exponent, t_end, tol=ode_tol, t_eval=ts)
        rel_r = np.abs(run.R - c.radius(ts)) / np.abs(c.radius(ts))
        rel_v = np.abs(run.V - c.velocity(ts)) / np.abs(c.velocity(ts))
        worst_rv = max(worst_rv, float(np.max(rel_r)), float(np.max(rel_v)))
        worst_e = max(worst_e, va.energy_drift(va.ode_oracle(r0, g, sign, exponent, t_end, tol=ode_tol)))
    return [
        va.Check.bound("closed-form-vs-ode", worst_rv, CERTIFICATION_TOL, "max relative error of R and V"),
        va.Check.bound("energy-drift", worst_e, ENERGY_TOL),
    ]


def _conservation_check(profile, params, labels, horizon):
    rng = np.random.default_rng(0)
    r0 = rng.uniform(labels[0], labels[-1], 20)
    t = rng.uniform(0.0, horizon, 20)
    worst = 0.0
    for a, b in zip(r0, t):
        R = float(ch.layer_radius(profile, params, a, b))
        F = float(dn.distribution_function(profile, params, R, b))
        F0 = float(profile.cumulative(a, params.symmetry))
        worst = max(worst, abs(F - F0) / F0)
    return va.Check.bound("layer-conservation", worst, CONSERVATION_TOL)


def _shock_checks(profile, params, labels, report, t_max, tol):
    checks = []
    if report is None:
        return checks
    if report.focal:
        if isinstance(profile, prof.Uniform) and params.kind is BranchKind.GRAVITY_SPHERE:
            T0 = ch.collapse_time(profile, params)
            checks.append(va.Check.bound("focal-collapse-time", abs(report.t_star - T0) / T0, 1e-6))
        return checks
    J = abs(float(ch.jacobian(profile, params, report.r_star, report.t_star)))
    checks.append(va.Check.bound("jacobian-at-shock", J, 1e-6))
    if params.kind.is_electric:
        dense = np.linspace(labels[0], labels[-1], 2000)
        t_pair = va.pairwise_crossing_time(profile, params, dense, t_max)
        checks.append(
            va.Check.bound("shock-vs-pairwise", abs(report.t_star - t_pair) / t_pair, tol,
                           f"t*={report.t_star!r}, pairwise={t_pair!r}")
        )
    return checks


def _pde_errors(profile, params, n_cells, t_cmp):
    outer = profile.support[1]
    lab = np.linspace(0.1, 0.8, 8) * outer
    st = va.EulerianState.initial(profile, params, n_cells, tracers=lab)
    (s,) = va.pde_evolve(st, [t_cmp], 0.5)
    edge = float(ch.layer_radius(profile, params, outer, t_cmp))
    core = s.r <= 0.9 * edge
    v_exact = qm.velocity_field(profile, params, s.r[core], t_cmp)
    v_err = float(np.max(np.abs(s.v[core] - v_exact)) / np.max(np.abs(v_exact)))
    F_tr = np.interp(s.tracers, s.r, s.bigF)
    F0 = profile.cumulative(lab, params.symmetry)
    lvl = float(np.max(np.abs(F_tr - F0)) / profile.cumulative(outer, params.symmetry))
    f_lo, f_hi = st.bigF.min(), st.bigF.max()
    range_err = max(0.0, f_lo - s.bigF.min(), s.bigF.max() - f_hi)
    return v_err, lvl, range_err


def _ratio_check(name, coarse, fine):
    ratio = coarse / fine if fine > 0 else math.inf
    lo, hi = ORDER_BAND
    err = 0.0 if lo <= ratio <= hi else min(abs(ratio - lo), abs(ratio - hi))
    return va.Check(name, float(err), 0.0, bool(lo <= ratio <= hi), f"error ratio {ratio:.4g} per halving")


def _pde_checks(profile, params, tol, shock_t):
    """Upwind solver vs closed form on compactly supported profiles."""
    kind = params.kind
    lm = float(prof.lam(profile, params, 0.5 * profile.support[1]))
    t_cmp = (1.0 if kind.is_electric else 0.5) / lm
    if shock_t is not None and shock_t <= t_cmp:
        return []
    e0, _, rng0 = _pde_errors(profile, params, PDE_CELLS, t_cmp)
    # the order is measured on finer grids, past the pre-asymptotic range
    e1, l1, rng1 = _pde_errors(profile, params, 4 * PDE_CELLS, t_cmp)
    e2, l2, rng2 = _pde_errors(profile, params, 8 * PDE_CELLS, t_cmp)
    return [
        va.Check.bound("pde-velocity", e0, tol, f"max|v - v_exact| / max|v_exact| at t={t_cmp!r}"),
        _ratio_check("pde-velocity-order", e1, e2),
        _ratio_check("pde-tracer-level-set-order", l1, l2),
        va.Check.bound("pde-maximum-principle", max(rng0, rng1, rng2), 1e-12),
    ]


def _frozen_check(profile, params):
    st = va.EulerianState.initial(profile, params, 100)
    (s,) = va.pde_evolve(st, [1.0], 0.5)
    err = max(float(np.max(np.abs(s.v))), float(np.max(np.abs(s.bigF - st.bigF))))
    return va.Check.bound("pde-frozen-state", err, 0.0, "kappa = 0 leaves F and v unchanged")


def _continuity_checks(profile, params, tol):
    lm = float(prof.lam(profile, params, 0.5 * profile.support[1]))
    t = (1.0 if params.kind.is_electric else 0.5) / lm
    lo, hi = 0.01 * profile.support[1], profile.support[1]

    def residual(n, dt):
        lab = np.linspace(lo, hi, n)
        s1 = dn.sample_field(profile, params, lab, t)
        s2 = dn.sample_field(profile, params, lab, t + dt / lm)
        return va.continuity_residual(s1, s2, params.symmetry, t_char=1.0 / lm)

    n = CONTINUITY_LABELS
    r1, r2 = residual(n, CONTINUITY_DT), residual(2 * n, 0.5 * CONTINUITY_DT)
    return [
        va.Check.bound("continuity-residual", r1, tol),
        _ratio_check("continuity-order", r1, r2),
    ]


def validation_checks(cfg: ScenarioConfig) -> list:
    profile, params = cfg.profile(), cfg.physics()
    tols = cfg.values["tolerances"]
    checks = []
    if params.interaction is prof.Interaction.COMBINED:
        if va.kappa(params) == 0 and math.isfinite(profile.support[1]):
            checks.append(_frozen_check(profile, params))
        return checks
    kind = params.kind
    labels = _labels(cfg)
    warnings = []
    t_end, tc = _horizon(cfg, profile, params, labels, warnings)
    report = _shock(profile, params, labels, t_end, warnings)
    checks.append(_check_inversion(kind, tols["inversion"]))
    checks.extend(_ode_checks(profile, params, labels, tols["ode"]))
    shock_t = None if report is None or report.focal else report.t_star
    horizon = 0.9 * min(t_end, shock_t or math.inf)
    checks.append(_conservation_check(profile, params, labels, horizon))
    checks.extend(_shock_checks(profile, params, labels, report, t_end, tols["shock"]))
    if math.isfinite(profile.support[1]):
        checks.extend(_pde_checks(profile, params, tols["pde"], shock_t))
    if isinstance(profile, prof.Uniform):
        checks.extend(_continuity_checks(profile, params, tols["continuity"]))
    return checks


def run_validate(cfg: ScenarioConfig, out_dir) -> dict:
    out = Path(out_dir)
    checks = validation_checks(cfg)
    man = _base_manifest(cfg, "validate")
    man["passed"] = all(c.passed for c in checks)
    man["checks"] = [
        {"name": c.name, "error": c.error, "tolerance": c.tolerance, "passed": c.passed, "detail": c.detail}
        for c in checks
    ]
    man["files"] = ["validation.json"]
    atomic_write_text(out / "validation.json", va.report_json(checks))
    write_json(out / "manifest.json", man)
    return man
