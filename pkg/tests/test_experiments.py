from pathlib import Path

import numpy as np
import pytest

from epswigner.config import load_config
from epswigner.dynamics import InitialCondition
from epswigner.dynamics.characteristics import flow
from epswigner.experiments import auto_bounds, initial_for_gauge, make_grid, run_experiment
from epswigner.gauges import gauge_momentum_shift
from epswigner.hamiltonian import kanai_transport_field
from epswigner.selftest import select_unitary_sign

SCENARIOS = sorted((Path(__file__).parent.parent / "scenarios").glob("*.toml"))


@pytest.mark.parametrize("path", SCENARIOS, ids=lambda p: p.stem)
def test_shipped_scenarios_load(path):
    load_config(path)


def test_matched_initial_data(params, drive):
    ic = InitialCondition(p0=0.2)
    assert initial_for_gauge(ic, "A", params, drive) is ic
    phi = initial_for_gauge(ic, "phi", params, drive)
    assert phi.p0 == pytest.approx(0.2 + gauge_momentum_shift(drive, params, 0.0))


@pytest.mark.parametrize("gauge", ["A", "phi"])
def test_auto_bounds_contain_support(params, drive, gauge, rng):
    ic = initial_for_gauge(InitialCondition(sq=2.0, sp=1.0), gauge, params, drive)
    field = kanai_transport_field(gauge, params, drive)
    box = auto_bounds(ic, field, params, drive, 12.0)
    q0, q1, p0, p1 = ic.support_box()
    q, p = rng.uniform(q0, q1, 200), rng.uniform(p0, p1, 200)
    for t in rng.uniform(0, 12.0, 10):
        Q, P = flow(q, p, 0.0, t, field, params, drive)
        assert np.all((Q > box[0]) & (Q < box[1]) & (P > box[2]) & (P < box[3]))


def test_under_resolved_grid_rejected(params, drive):
    cfg = load_config(text="")
    with pytest.raises(ValueError, match="does not resolve"):
        make_grid(cfg, "phi", params, drive, InitialCondition(sq=0.5, sp=0.5), 30.0, 32, 32)


def test_unitary_sign(params, drive):
    sign, devs = select_unitary_sign(params, drive)
    assert sign == 1 and devs[1] < 1e-12 < devs[-1]


def test_transient_series_shape():
    cfg = load_config(text='experiment = "transient"\nsolver = "characteristics"\n[drive]\nE0 = 0.0\n'
                           "[characteristics]\nn = 16\n")
    report, series = run_experiment(cfg)
    assert report["passed"]
    s = series["characteristics_A"]
    assert set(s) == {"t", "mean_q", "mean_p", "mean_qdot", "E_of_t"}
    np.testing.assert_allclose(s["mean_qdot"], np.exp(-0.5 * s["t"]), rtol=1e-12)
    assert np.all(s["E_of_t"] == 0)
