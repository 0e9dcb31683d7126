import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from mocshock import profiles as prof
from mocshock.errors import ConfigError, DomainError, SingularError, UnsupportedError
from mocshock.specfun import BranchKind

SPHERE, CYL = prof.Symmetry.SPHERE, prof.Symmetry.CYLINDER


def _quad_cumulative(profile, symmetry, r0, breaks=()):
    d = symmetry.dim_exponent
    pref = 4 * math.pi if symmetry is SPHERE else 2 * math.pi
    edges = [1e-12, *[b for b in breaks if 1e-12 < b < r0], r0]
    return sum(
        integrate.quad(lambda x: pref * x**d * float(profile.density0(x)), a, b,
                       epsabs=0, epsrel=1e-13, limit=200)[0]
        for a, b in zip(edges, edges[1:])
    )


def test_lognormal_density_at_half():
    # s = 2r = 1: the lognormal pdf is 1/sqrt(2 pi), divided by 2 pi r**2
    expected = 1.0 / (2 * math.pi * 0.25) / math.sqrt(2 * math.pi)
    assert prof.Lognormal().density0(0.5) == pytest.approx(expected, rel=1e-15)
    assert expected == pytest.approx(0.2539745, rel=1e-6)


def test_lognormal_density_undefined_at_origin():
    with pytest.raises(DomainError):
        prof.Lognormal().density0(0.0)


@pytest.mark.parametrize("symmetry", [SPHERE, CYL])
@pytest.mark.parametrize("mu,sigma,total", [(0.0, 1.0, 1.0), (0.4, 0.5, 2.5), (-0.3, 1.4, 0.7)])
def test_lognormal_cumulative_matches_quadrature(symmetry, mu, sigma, total):
    p = prof.Lognormal(mu, sigma, total)
    for r0 in (0.1, 0.5, 1.3, 4.0):
        assert p.cumulative(r0, symmetry) == pytest.approx(_quad_cumulative(p, symmetry, r0), rel=1e-10)


def test_lognormal_sphere_total_is_total():
    assert prof.Lognormal(total=1.0).cumulative(np.inf, SPHERE) == pytest.approx(1.0)
    assert prof.Lognormal().cumulative(0.5, SPHERE) == pytest.approx(0.5, rel=1e-15)


def test_uniform_cumulative_and_support():
    u = prof.Uniform(2.0, 1.5)
    assert u.cumulative(1.0, SPHERE) == pytest.approx(4 / 3 * math.pi * 2.0)
    assert u.cumulative(3.0, SPHERE) == pytest.approx(4 / 3 * math.pi * 2.0 * 1.5**3)
    assert u.cumulative(1.0, CYL) == pytest.approx(2 * math.pi)
    assert u.density0(2.0) == 0.0 and u.density0(1.5) == 2.0


def test_tabulated_cumulative_matches_quadrature_and_is_exact_per_cell():
    r = np.linspace(0.0, 2.0, 9)
    tab = prof.Tabulated(r, np.exp(-r**2))
    for sym in (SPHERE, CYL):
        for r0 in (0.3, 1.0, 1.97):
            assert tab.cumulative(r0, sym) == pytest.approx(_quad_cumulative(tab, sym, r0, r), rel=1e-12)
        assert tab.cumulative(5.0, sym) == pytest.approx(tab.cumulative(2.0, sym), rel=1e-15)


def test_tabulated_is_nonnegative_and_zero_outside():
    tab = prof.Tabulated([0.0, 1.0, 2.0, 3.0], [0.0, 5.0, 0.0, 0.0])
    x = np.linspace(-1, 4, 501)
    rho = tab.density0(x)
    assert np.all(rho >= 0)
    assert rho[x > 3].max() == 0.0 and rho[x < 0].max() == 0.0


def test_tabulated_from_csv(tmp_path):
    path = tmp_path / "p.csv"
    path.write_text("r, rho0\n0,1\n0.5,1\n1,0.25\n")
    tab = prof.Tabulated.from_csv(path)
    assert tab.support == (0.0, 1.0)
    assert float(tab.density0(0.5)) == 1.0
    bad = tmp_path / "bad.csv"
    bad.write_text("x,y\n0,1\n")
    with pytest.raises(ConfigError):
        prof.Tabulated.from_csv(bad)


@pytest.mark.parametrize("r,rho", [([1.0, 0.5], [1, 1]), ([0, 1], [1, -1]), ([0], [1])])
def test_tabulated_rejects_bad_tables(r, rho):
    with pytest.raises(ConfigError):
        prof.Tabulated(r, rho)


def test_physics_params_validation_and_kind():
    with pytest.raises(ConfigError):
        prof.PhysicsParams(eps0=0.0)
    p = prof.PhysicsParams.nondimensional("cylinder", "gravity")
    assert p.kind is BranchKind.GRAVITY_CYLINDER
    with pytest.raises(UnsupportedError):
        prof.PhysicsParams(interaction=prof.Interaction.COMBINED).kind


def test_uniform_lambda_closed_forms():
    u = prof.Uniform(1.5, 1.0)
    sph = prof.PhysicsParams.nondimensional()
    cyl = prof.PhysicsParams.nondimensional(CYL)
    r = np.linspace(0.1, 1.0, 7)
    np.testing.assert_allclose(prof.lam(u, sph, r), 1.0, rtol=1e-15)
    np.testing.assert_allclose(prof.lam(u, cyl, r), math.sqrt(1.5) / 2, rtol=1e-15)


def test_gamma_in_si_units():
    eps0 = 8.8541878128e-12
    params = prof.PhysicsParams(delta=1.75882001076e11, eps0=eps0)
    u = prof.Uniform(1e-3, 0.01)
    q = u.cumulative(0.01, SPHERE)
    assert prof.gamma(u, params, 0.01) == pytest.approx(params.delta * q / (4 * math.pi * eps0))


@pytest.mark.parametrize("symmetry", [SPHERE, CYL])
@pytest.mark.parametrize("interaction", ["electric", "gravity"])
def test_lambda_prime_matches_finite_difference(symmetry, interaction):
    params = prof.PhysicsParams.nondimensional(symmetry, interaction)
    p = prof.Lognormal(0.2, 0.7)
    r = np.linspace(0.2, 3.0, 15)
    h = 1e-6 * r
    fd = (prof.lam(p, params, r + h) - prof.lam(p, params, r - h)) / (2 * h)
    np.testing.assert_allclose(prof.lam_prime(p, params, r), fd, rtol=1e-7)
    assert prof.lambda_prime is prof.lam_prime


def test_lambda_prime_singular_for_empty_interior():
    tab = prof.Tabulated([1.0, 2.0], [1.0, 1.0])
    with pytest.raises(SingularError):
        prof.lam_prime(tab, prof.PhysicsParams(), 0.5)


def test_lambda_from_gamma_scaling():
    assert prof.lambda_from_gamma(2.0, 1.0, SPHERE) == pytest.approx(2.0)
    assert prof.lambda_from_gamma(2.0, 1.0, CYL) == pytest.approx(1.0)
    assert prof.lambda_from_gamma(2.0, 4.0, SPHERE) == pytest.approx(2.0 / 8.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, 5.0), st.floats(0.05, 5.0), st.sampled_from([SPHERE, CYL]))
def test_property_cumulative_nondecreasing(a, b, symmetry):
    p = prof.Lognormal(0.1, 0.8, 1.0)
    lo, hi = sorted((a, b))
    assert p.cumulative(lo, symmetry) <= p.cumulative(hi, symmetry)
