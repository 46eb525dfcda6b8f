import numpy as np
import pytest

from epswigner.gauges import HarmonicDrive, PhysicalParams, Representation


@pytest.fixture
def params():
    return PhysicalParams(m=1.0, e=1.0, c=1.0, alpha=0.5, hbar=1.0, N=1)


@pytest.fixture
def drive():
    return HarmonicDrive(E0=0.1, omega=2.0)


@pytest.fixture
def phasor_drive():
    return HarmonicDrive(E0=0.1, omega=2.0, representation=Representation.COMPLEX_PHASOR)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
