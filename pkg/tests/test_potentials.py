import math

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from models.errors import ConfigError, EvanescentError, OutOfDomainError
from models.units import RegimeKind, make_unit_system
from potentials.fields import (
    PotentialField,
    RefractiveIndexField,
    evaluate,
    load_tabulated_csv,
    refractive_index_from_potential,
)


def test_free_space_is_flat():
    V, (gx, gz) = evaluate(PotentialField.free(), 3.0, -2.0)
    assert V == 0.0 and gx == 0.0 and gz == 0.0


def test_harmonic_well():
    V, (gx, gz) = evaluate(PotentialField.harmonic(stiffness=1.0), 2.0, 5.0)
    assert float(V) == pytest.approx(2.0)
    assert float(gx) == pytest.approx(2.0)
    assert float(gz) == 0.0


def test_linear_ramp_has_constant_gradient():
    field = PotentialField.linear_ramp(slope_x=0.3, offset=1.0)
    x = np.linspace(-2, 2, 7)
    V, (gx, gz) = field.evaluate(x, np.zeros_like(x))
    assert_allclose(V, 1.0 + 0.3 * x)
    assert_allclose(gx, 0.3)
    assert_allclose(gz, 0.0)


def test_smoothed_step_rises_over_its_smoothing_length():
    field = PotentialField.step_smoothed(height=2.0, position=1.0, smoothing=0.1)
    V, (_, gz) = field.evaluate(0.0, np.array([-5.0, 1.0, 7.0]))
    assert_allclose(V, [0.0, 1.0, 2.0], atol=1e-12)
    assert gz[1] == pytest.approx(10.0)


def test_smoothed_barrier_of_finite_width():
    field = PotentialField.step_smoothed(height=1.0, position=0.0, width=2.0, smoothing=0.05, axis="x")
    V, _ = field.evaluate(np.array([-1.0, 1.0, 3.0]), 0.0)
    assert_allclose(V, [0.0, 1.0, 0.0], atol=1e-12)


def test_gradient_matches_finite_differences():
    field = PotentialField.step_smoothed(height=1.5, position=0.2, smoothing=0.3)
    z = np.linspace(-1, 1, 9)
    h = 1e-6
    _, (_, gz) = field.evaluate(0.0, z)
    up, _ = field.evaluate(0.0, z + h)
    down, _ = field.evaluate(0.0, z - h)
    assert_allclose(gz, (up - down) / (2 * h), rtol=1e-6)


def test_parameters_are_validated():
    with pytest.raises(ValueError, match="unknown potential kind"):
        PotentialField("gravity")
    with pytest.raises(ValueError):
        PotentialField("harmonic", (("slope_x", 1.0),))
    with pytest.raises(ValueError):
        PotentialField.step_smoothed(height=1.0, position=0.0, smoothing=0.0)
    with pytest.raises(ValueError):
        PotentialField("custom_tabulated")


@pytest.fixture
def tabulated_csv(tmp_path):
    x = np.linspace(-2, 2, 5)
    z = np.linspace(0, 3, 4)
    X, Z = np.meshgrid(x, z, indexing="ij")
    frame = pd.DataFrame({"x": X.ravel(), "z": Z.ravel(), "V": (0.5 * X + 2.0 * Z).ravel()})
    path = tmp_path / "ramp.csv"
    frame.to_csv(path, index=False)
    return path


def test_tabulated_field_interpolates_bilinearly(tabulated_csv):
    field = PotentialField.from_csv(tabulated_csv)
    V, (gx, gz) = field.evaluate(np.array([0.3, -1.7]), np.array([1.25, 2.5]))
    assert_allclose(V, [0.15 + 2.5, -0.85 + 5.0])
    assert_allclose(gx, 0.5)
    assert_allclose(gz, 2.0)


def test_tabulated_field_refuses_to_extrapolate(tabulated_csv):
    with pytest.raises(OutOfDomainError):
        PotentialField.from_csv(tabulated_csv).evaluate(2.5, 1.0)


def test_source_only_field_loads_lazily(tabulated_csv):
    field = PotentialField("custom_tabulated", source=str(tabulated_csv))
    V, _ = field.evaluate(0.0, 0.0)
    assert float(V) == pytest.approx(0.0)


def test_ragged_table_is_a_config_error(tmp_path):
    path = tmp_path / "ragged.csv"
    pd.DataFrame({"x": [0.0, 1.0, 0.0], "z": [0.0, 0.0, 1.0], "V": [1.0, 2.0, 3.0]}).to_csv(
        path, index=False)
    with pytest.raises(ConfigError, match="not rectangular"):
        load_tabulated_csv(path)


def test_wrong_header_is_a_config_error(tmp_path):
    path = tmp_path / "header.csv"
    path.write_text("a,b,c\n0,0,0\n", encoding="utf-8")
    with pytest.raises(ConfigError, match="expected header"):
        load_tabulated_csv(path)


def test_refractive_index_from_potential():
    u = make_unit_system(2e-4, RegimeKind.RELATIVISTIC, rest_mass=0.0)
    assert refractive_index_from_potential(PotentialField.free(), u, 0.0, 0.0) == pytest.approx(1.0)
    half = PotentialField.linear_ramp(offset=u.E / 2)
    assert refractive_index_from_potential(half, u, 1.0, 2.0) == pytest.approx(0.5)
    with pytest.raises(EvanescentError):
        refractive_index_from_potential(PotentialField.linear_ramp(offset=u.E), u, 0.0, 0.0)


def test_index_gradient_follows_potential_gradient():
    u = make_unit_system(2e-4, RegimeKind.OPTICS)
    index = RefractiveIndexField.from_potential(PotentialField.linear_ramp(slope_x=0.01), u)
    n, (nx, nz) = index.evaluate(1.0, 0.0)
    assert n == pytest.approx(1.0 - 0.01 / u.E)
    assert nx == pytest.approx(-0.01 / u.E)
    assert nz == 0.0
    assert RefractiveIndexField.vacuum().evaluate(5.0, 5.0)[0] == 1.0
    assert math.isclose(index.energy, u.E)
