import numpy as np
import pytest

from models.front import Wavefront
from models.units import RegimeKind, make_unit_system


def flat_front(x, R, p=1.0, t=0.0):
    """Rays on z = 0 moving along +z with momentum p"""
    x = np.asarray(x, dtype=float)
    zeros = np.zeros_like(x)
    return Wavefront(x=x, z=zeros, px=zeros, pz=np.full_like(x, p), R=R, t=t)


@pytest.fixture
def beam_units():
    return make_unit_system(2e-4, RegimeKind.NONRELATIVISTIC)


@pytest.fixture
def optics_units():
    return make_unit_system(2e-4, RegimeKind.OPTICS)


@pytest.fixture
def gaussian_front(beam_units):
    x = np.linspace(-4.0, 4.0, 201)
    x = 0.5 * (x - x[::-1])
    return flat_front(x, np.exp(-x ** 2), p=beam_units.p0)
