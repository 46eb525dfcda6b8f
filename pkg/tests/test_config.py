import pytest

from epswigner.config import ConfigError, load_config


def test_defaults():
    cfg = load_config(text="")
    assert cfg.experiment == "compare-gauges"
    assert cfg.gauges() == ["A", "phi"] and cfg.solvers() == ["characteristics", "grid"]
    assert cfg.params.alpha == 0.5 and cfg.drive.omega == 2.0
    assert cfg.grid["nq"] == 256 and cfg.tolerances["drude"] == 1e-6


def test_full_file(tmp_path):
    path = tmp_path / "s.toml"
    path.write_text("""
experiment = "transient"
gauge = "A"
solver = "characteristics"
seed = 7

[params]
alpha = 0.25
m = 2.0

[drive]
E0 = 0.0
representation = "ComplexPhasor"

[initial]
sq = 3.0
""")
    cfg = load_config(path)
    assert cfg.seed == 7 and cfg.gauges() == ["A"]
    assert cfg.params.m == 2.0 and cfg.initial.m == 2.0 and cfg.initial.sq == 3.0
    assert cfg.drive.is_phasor


@pytest.mark.parametrize("text, fragment", [
    ("colour = 1", "unknown key 'colour'"),
    ("[params]\nmass = 1", "unknown key 'params.mass'"),
    ("params = 3", "'params' must be a table"),
    ("experiment = 'dance'", "'experiment' must be one of"),
    ("gauge = 'B'", "'gauge'"),
    ("[params]\nm = -1", "[params] mass must be positive"),
    ("[grid]\nnq = 4", "'grid.nq'"),
    ("[grid]\ninterpolation = 'quintic'", "'grid.interpolation'"),
    ("[grid]\nbounds = [1, 0, 0, 1]", "'grid.bounds'"),
    ("[convergence]\nlevels = [32, 64]\nsteps_per_period = [10, 20]", "convergence.levels"),
    ("[tolerances]\ndrude = -1", "'tolerances.drude'"),
    ("[sweep]\ngauge = 'x'", "'sweep.gauge'"),
])
def test_rejections(text, fragment):
    with pytest.raises(ConfigError) as err:
        load_config(text=text)
    assert fragment in str(err.value)


def test_parse_error_reports_location():
    with pytest.raises(ConfigError) as err:
        load_config(text="a = 1\nb = = 2\nc = 3\n")
    assert "line 2" in str(err.value)


@pytest.mark.parametrize("experiment", ["drude-sweep", "compare-gauges"])
def test_zero_drive_rejected(experiment):
    with pytest.raises(ConfigError, match="conductivity"):
        load_config(text=f"experiment = '{experiment}'\n[drive]\nE0 = 0.0")


def test_zero_drive_fine_for_transient():
    assert load_config(text="experiment = 'transient'\n[drive]\nE0 = 0.0").drive.E0 == 0


def test_undamped_requirements():
    with pytest.raises(ConfigError, match="burn_in"):
        load_config(text="[params]\nalpha = 0.0")
    with pytest.raises(ConfigError, match="unbounded"):
        load_config(text="[params]\nalpha = 0.0\n[drive]\nomega = 0.0\n[time]\nburn_in = 5.0")
    with pytest.raises(ConfigError, match="alpha > 0"):
        load_config(text="experiment = 'transient'\n[params]\nalpha = 0.0")
    assert load_config(text="[params]\nalpha = 0.0\n[time]\nburn_in = 5.0").params.alpha == 0


def test_overrides():
    cfg = load_config(text="experiment = 'transient'", overrides={"experiment": "convergence", "seed": 3})
    assert cfg.experiment == "convergence" and cfg.seed == 3
