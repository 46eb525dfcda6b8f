import csv
import struct

import numpy as np
import pytest

from epswigner.dynamics import InitialCondition, PhaseGrid


def _grid(complex_=False):
    g = PhaseGrid.from_function(InitialCondition(q0=0.2, sq=0.8), -3, 3, -2, 2.5, 12, 10, t=1.25)
    if complex_:
        g = g.with_values(g.values * (1 + 0.5j))
    return g


def test_nodes_are_cell_centres():
    g = _grid()
    assert g.dq == pytest.approx(0.5)
    assert g.q[0] == pytest.approx(-2.75)
    assert g.p[-1] == pytest.approx(2.5 - g.dp / 2)


def test_values_are_read_only():
    g = _grid()
    with pytest.raises(ValueError):
        g.values[0, 0] = 1.0


@pytest.mark.parametrize("complex_", [False, True])
def test_binary_round_trip(tmp_path, complex_):
    g = _grid(complex_)
    g.save(tmp_path / "g.bin")
    h = PhaseGrid.load(tmp_path / "g.bin")
    assert h.bounds == g.bounds and h.t == g.t
    assert np.array_equal(h.values, g.values)
    assert h.values.dtype == g.values.dtype


def test_binary_layout():
    g = _grid()
    blob = g.to_bytes()
    magic, version, nq, np_, is_complex, q0, q1, p0, p1, t = struct.unpack_from("<4sIIII5d", blob)
    assert (magic, version, nq, np_, is_complex) == (b"EPSW", 1, 12, 10, 0)
    assert (q0, q1, p0, p1, t) == (-3, 3, -2, 2.5, 1.25)
    data = np.frombuffer(blob, "<f8", offset=struct.calcsize("<4sIIII5d"))
    # row-major: q index outer, p index inner
    assert np.array_equal(data.reshape(12, 10), g.values)


def test_bad_magic_rejected():
    blob = bytearray(_grid().to_bytes())
    blob[:4] = b"XXXX"
    with pytest.raises(ValueError):
        PhaseGrid.from_bytes(bytes(blob))


def test_csv_round_trip(tmp_path):
    g = _grid()
    g.to_csv(tmp_path / "g.csv")
    with open(tmp_path / "g.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["q", "p", "w"]
    data = np.array(rows[1:], dtype=float)
    Q, P = g.mesh()
    assert np.array_equal(data[:, 0], Q.ravel())
    assert np.array_equal(data[:, 1], P.ravel())
    assert np.array_equal(data[:, 2], g.values.ravel())


def test_complex_csv_columns(tmp_path):
    _grid(True).to_csv(tmp_path / "c.csv")
    with open(tmp_path / "c.csv") as fh:
        assert next(csv.reader(fh)) == ["q", "p", "w_re", "w_im"]


@pytest.mark.parametrize("bounds", [(1, 0, 0, 1), (0, 1, 1, 1)])
def test_invalid_bounds(bounds):
    with pytest.raises(ValueError):
        PhaseGrid(*bounds, np.zeros((8, 8)))


def test_too_few_points():
    with pytest.raises(ValueError):
        PhaseGrid(0, 1, 0, 1, np.zeros((4, 8)))


def test_gaussian_mass_and_moments():
    ic = InitialCondition(q0=0.5, p0=-1.0, sq=0.6, sp=0.4)
    g = PhaseGrid.from_function(ic, *ic.support_box(8), 128, 128)
    Q, P = g.mesh()
    assert g.mass() == pytest.approx(1.0, abs=1e-12)
    assert np.sum(P * g.values) * g.dq * g.dp == pytest.approx(-1.0, abs=1e-12)


def test_delta_line_needs_nonzero_location():
    with pytest.raises(ZeroDivisionError):
        InitialCondition(kind="MollifiedDeltaLine", p0=0.0)
