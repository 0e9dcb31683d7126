import pytest

from mocshock import profiles as prof
from mocshock.config import PRESETS, ScenarioConfig, load_config
from mocshock.errors import ConfigError


def test_defaults_are_the_uniform_electric_sphere():
    cfg = load_config()
    assert isinstance(cfg.profile(), prof.Uniform)
    assert cfg.physics() == prof.PhysicsParams.nondimensional()
    assert cfg.get("tolerances", "pde") == 0.02


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_load(name):
    cfg = load_config(preset=name)
    assert cfg.physics().kind.value.endswith(cfg.get("scenario", "symmetry"))


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_echo_round_trip_is_a_fixpoint(name):
    cfg = load_config(preset=name, overrides=["grids.n_times=12", "tolerances.shock=1e-5"])
    again = ScenarioConfig.from_mapping(cfg.echo())
    assert again.values == cfg.values
    assert ScenarioConfig.from_mapping(again.echo()).values == again.values


def test_ini_file_and_overrides(tmp_path):
    path = tmp_path / "run.ini"
    path.write_text(
        "[scenario]\ninteraction = gravity\n"
        "[profile]\nkind = lognormal\nmu = 0.1\nsigma = 0.5\n"
        "[grids]\nr_max = 4\nn_labels = 40\n"
    )
    cfg = load_config(path, overrides=["grids.t_max=0.75"])
    p = cfg.profile()
    assert isinstance(p, prof.Lognormal) and p.mu == 0.1 and p.sigma == 0.5
    assert cfg.get("grids", "t_max") == 0.75
    assert cfg.get("grids", "n_labels") == 40
    assert "rho0" not in cfg.values["profile"]


def test_tabulated_path_is_relative_to_the_config(tmp_path):
    (tmp_path / "rho.csv").write_text("r,rho0\n0,1\n1,1\n2,0\n")
    (tmp_path / "run.ini").write_text("[profile]\nkind = tabulated\npath = rho.csv\n")
    cfg = load_config(tmp_path / "run.ini")
    assert cfg.profile().support == (0.0, 2.0)


def test_label_range():
    lo, hi = load_config(preset="lognormal-electric-sphere").label_range()
    assert (lo, hi) == (5.0 / 64, 5.0)
    with pytest.raises(ConfigError):
        load_config(overrides=["profile.kind=lognormal"]).label_range()


@pytest.mark.parametrize(
    "override",
    [
        "grids.n_labels=4",
        "grids.n_times=7",
        "grids.t_max=0",
        "grids.r_max=-1",
        "tolerances.inversion=1e-3",
        "tolerances.ode=1e-14",
        "constants.eps0=2",
        "scenario.symmetry=torus",
        "profile.kind=gaussian",
        "grids.n_labels=many",
        "constants.nondimensional=perhaps",
        "nosection.key=1",
        "grids.unknown=1",
        "missing-dot=1",
        "grids.t_max",
    ],
)
def test_invalid_values_raise_config_error(override):
    with pytest.raises(ConfigError):
        load_config(overrides=[override])


def test_explicit_constants_need_nondimensional_off():
    cfg = load_config(overrides=["constants.nondimensional=false", "constants.eps0=2", "constants.delta=3"])
    assert cfg.physics().eps0 == 2.0 and cfg.physics().delta == 3.0


def test_tight_tolerance_allowed_for_designed_failures():
    assert load_config(overrides=["tolerances.pde=1e-15"]).get("tolerances", "pde") == 1e-15


def test_unknown_preset_and_unreadable_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(preset="nope")
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.ini")
    bad = tmp_path / "bad.ini"
    bad.write_text("no section header\n")
    with pytest.raises(ConfigError):
        load_config(bad)
    missing = tmp_path / "m.ini"
    missing.write_text("[profile]\nkind = tabulated\npath = gone.csv\n")
    with pytest.raises(ConfigError):
        load_config(missing)
