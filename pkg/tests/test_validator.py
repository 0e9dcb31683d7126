import dataclasses
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mocshock import characteristics as ch
from mocshock import density as dn
from mocshock import profiles as prof
from mocshock import quantum as qm
from mocshock import validator as va
from mocshock.errors import CflViolation

UNIFORM = prof.Uniform(1.5, 1.0)
ELEC = prof.PhysicsParams.nondimensional()
GRAV = prof.PhysicsParams.nondimensional("sphere", "gravity")
PAIRWISE_T_STAR = 3.46946797


def _pde_errors(params, n_cells, t):
    labels = np.linspace(0.1, 0.8, 8)
    st0 = va.EulerianState.initial(UNIFORM, params, n_cells, tracers=labels)
    (s,) = va.pde_evolve(st0, [t])
    edge = float(ch.layer_radius(UNIFORM, params, 1.0, t))
    core = s.r <= 0.9 * edge
    exact = qm.velocity_field(UNIFORM, params, s.r[core], t)
    v_err = np.max(np.abs(s.v[core] - exact)) / np.max(np.abs(exact))
    level = np.max(np.abs(np.interp(s.tracers, s.r, s.bigF) - UNIFORM.cumulative(labels, params.symmetry)))
    return v_err, level / UNIFORM.cumulative(1.0, params.symmetry)


def test_kappa_signs():
    assert va.kappa(ELEC) == 1.0
    assert va.kappa(prof.PhysicsParams(delta=3.0, eps0=2.0)) == 1.5
    assert va.kappa(GRAV) == -1.0
    assert va.kappa(prof.PhysicsParams(interaction="gravity", nu0=4.0)) == -0.25
    balanced = prof.PhysicsParams(interaction="combined", delta=0.5, eps0=1.0, nu0=2.0)
    assert va.kappa(balanced) == 0.0
    assert va.kappa(prof.PhysicsParams(interaction="combined", delta=2.0)) == pytest.approx(1.0)


def test_ode_without_force_stays_at_rest():
    run = va.ode_oracle(1.3, 0.0, va.REPULSIVE, 2, 5.0, t_eval=np.linspace(0, 5, 6))
    np.testing.assert_array_equal(run.R, 1.3)
    np.testing.assert_array_equal(run.V, 0.0)
    assert va.energy_drift(run) == 0.0


@pytest.mark.parametrize("kwargs", [dict(sign="sideways"), dict(exponent=3), dict(tol=1e-3), dict(tol=1e-14)])
def test_ode_argument_checks(kwargs):
    args = dict(r0=1.0, gamma=1.0, sign=va.REPULSIVE, exponent=2, t_end=1.0) | kwargs
    with pytest.raises(ValueError):
        va.ode_oracle(**args)


@pytest.mark.parametrize("symmetry", ["sphere", "cylinder"])
@pytest.mark.parametrize("interaction", ["electric", "gravity"])
def test_closed_form_agrees_with_ode(symmetry, interaction):
    params = prof.PhysicsParams.nondimensional(symmetry, interaction)
    p = prof.Lognormal()
    r0 = 0.9
    c = ch.Characteristic.from_profile(p, params, r0)
    t_end = 20.0 / c.lam if c.kind.is_electric else 0.9 * c.collapse_time
    ts = np.linspace(t_end / 20, t_end, 20)
    sign = va.REPULSIVE if c.kind.is_electric else va.ATTRACTIVE
    g = float(prof.gamma(p, params, r0))
    run = va.ode_oracle(r0, g, sign, 2 if symmetry == "sphere" else 1, t_end, t_eval=ts)
    np.testing.assert_allclose(run.R, c.radius(ts), rtol=1e-8)
    np.testing.assert_allclose(run.V, c.velocity(ts), rtol=1e-8)
    assert va.energy_drift(va.ode_oracle(r0, g, sign, 2 if symmetry == "sphere" else 1, t_end)) <= 1e-9


@pytest.mark.parametrize("rho0", [0.3, 1.5, 7.0])
def test_uniform_collapse_stop_time(rho0):
    u = prof.Uniform(rho0, 1.0)
    g = float(prof.gamma(u, GRAV, 0.6))
    run = va.ode_oracle(0.6, g, va.ATTRACTIVE, 2, 10.0)
    T0 = 0.5 * math.pi * math.sqrt(3.0 / (2.0 * rho0))
    assert run.stop_time == pytest.approx(T0, rel=1e-5)
    assert run.R[-1] == pytest.approx(1e-6 * 0.6, rel=1e-6)


def test_repulsive_run_has_no_stop_time():
    assert va.ode_oracle(1.0, 1.0, va.REPULSIVE, 1, 3.0).stop_time is None


def test_initial_state_layout():
    st0 = va.EulerianState.initial(UNIFORM, ELEC, 60)
    assert st0.r[-1] == 3.0 and st0.r.size == 61
    assert st0.bigF[0] == 0.0 and st0.bigF[-1] == pytest.approx(UNIFORM.cumulative(1.0, ELEC.symmetry))
    assert st0.S_kind == "1/(4 pi r^2)"
    with pytest.raises(ValueError):
        va.EulerianState.initial(prof.Lognormal(), ELEC, 60)


def test_frozen_state_without_coupling():
    balanced = prof.PhysicsParams(interaction="combined", delta=1.0, eps0=1.0, nu0=1.0)
    st0 = va.EulerianState.initial(UNIFORM, balanced, 80)
    (s,) = va.pde_evolve(st0, [2.0])
    np.testing.assert_array_equal(s.v, 0.0)
    np.testing.assert_array_equal(s.bigF, st0.bigF)


def test_cfl_guards():
    st0 = va.EulerianState.initial(UNIFORM, ELEC, 50)
    for bad in (0.0, 1.0, 1.5):
        with pytest.raises(CflViolation):
            va.pde_evolve(st0, [0.1], cfl=bad)
    with pytest.raises(CflViolation):
        va.pde_evolve(st0, [2.0], dt=0.5)


def test_pde_snapshots_at_requested_times():
    st0 = va.EulerianState.initial(UNIFORM, ELEC, 50)
    out = va.pde_evolve(st0, [0.5, 0.2])
    assert [s.t for s in out] == [0.2, 0.5]


@pytest.mark.parametrize("params", [ELEC, GRAV])
def test_pde_maximum_principle(params):
    st0 = va.EulerianState.initial(UNIFORM, params, 200)
    for s in va.pde_evolve(st0, [0.2, 0.5, 0.8]):
        assert s.bigF.min() >= st0.bigF.min() - 1e-12
        assert s.bigF.max() <= st0.bigF.max() + 1e-12


@pytest.mark.parametrize("params", [ELEC, GRAV, prof.PhysicsParams.nondimensional("cylinder", "electric")])
def test_pde_velocity_within_two_percent(params):
    t = (1.0 if params.kind.is_electric else 0.5) / float(prof.lam(UNIFORM, params, 0.5))
    v_err, _ = _pde_errors(params, 200, t)
    assert v_err <= 0.02


def test_pde_first_order_convergence():
    e1, l1 = _pde_errors(ELEC, 400, 1.0)
    e2, l2 = _pde_errors(ELEC, 800, 1.0)
    assert 1.7 <= e1 / e2 <= 2.3
    assert 1.7 <= l1 / l2 <= 2.3


def test_tracers_follow_closed_form_trajectories():
    labels = np.array([0.2, 0.5, 0.8])
    st0 = va.EulerianState.initial(UNIFORM, ELEC, 800, tracers=labels)
    (s,) = va.pde_evolve(st0, [1.0])
    np.testing.assert_allclose(s.tracers, ch.layer_radius(UNIFORM, ELEC, labels, 1.0), rtol=5e-3)


def test_pairwise_crossing_time():
    labels = np.linspace(0.05, 5.0, 2000)
    t = va.pairwise_crossing_time(prof.Lognormal(), ELEC, labels, 4.0)
    assert t == pytest.approx(PAIRWISE_T_STAR, rel=1e-8)
    assert va.pairwise_crossing_time(prof.Lognormal(), ELEC, labels, 3.0) == math.inf
    assert va.pairwise_crossing_time(UNIFORM, ELEC, np.linspace(0.1, 1, 50), 10.0) == math.inf


def test_continuity_residual_static_and_ordering():
    r0 = np.linspace(0.05, 1.0, 100)
    s1 = dn.sample_field(UNIFORM, ELEC, r0, 0.0)
    with pytest.raises(ValueError):
        va.continuity_residual(s1, s1)
    # at rest nothing moves, so a later copy of the same field has zero residual
    assert va.continuity_residual(s1, dataclasses.replace(s1, t=1.0)) == 0.0


def test_continuity_residual_first_order():
    def residual(n, dt):
        lab = np.linspace(0.01, 1.0, n)
        s1 = dn.sample_field(UNIFORM, ELEC, lab, 1.0)
        s2 = dn.sample_field(UNIFORM, ELEC, lab, 1.0 + dt)
        return va.continuity_residual(s1, s2, t_char=1.0)

    r1, r2 = residual(400, 5e-5), residual(800, 2.5e-5)
    assert r1 <= 1e-3
    assert 1.7 <= r1 / r2 <= 2.3


def test_report_json_shape():
    checks = [va.Check.bound("a", 0.1, 1.0), va.Check.bound("b", 2.0, 1.0, "too big")]
    payload = json.loads(va.report_json(checks))
    assert payload["passed"] is False
    assert [c["name"] for c in payload["checks"]] == ["a", "b"]
    assert payload["checks"][1]["detail"] == "too big"


@settings(max_examples=15, deadline=None)
@given(st.floats(0.1, 0.95), st.floats(0.05, 0.9))
def test_property_gravity_ode_matches_closed_form(r0, frac):
    c = ch.Characteristic.from_profile(UNIFORM, GRAV, r0)
    t = frac * c.collapse_time
    g = float(prof.gamma(UNIFORM, GRAV, r0))
    run = va.ode_oracle(r0, g, va.ATTRACTIVE, 2, t, t_eval=[t])
    assert run.R[0] == pytest.approx(float(c.radius(t)), rel=1e-8)
