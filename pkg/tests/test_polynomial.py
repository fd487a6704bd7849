import json

import numpy as np
import pytest

from errors import ArgumentError, PolynomialError, ValidationError
from polynomial import (
    GaugePolynomial,
    MultiIndexPair,
    check_charge_identity,
    check_euler_identity,
    check_gauge_invariance,
    check_identities,
    check_wirtinger,
    eval_F,
    eval_g,
    eval_grad_g_spatial_factor,
    get_preset,
    load_polynomial_file,
    manakov,
    spinor,
)


def test_manakov_values(pair):
    z = np.array([1.0, 1j])
    assert eval_g(pair, z) == pytest.approx(4.0)
    np.testing.assert_allclose(eval_F(pair, z), 2.0 * z, atol=1e-14)


def test_manakov_coefficient_bound(pair):
    assert pair.coefficient_bound() == pytest.approx(4.0)


def test_spinor_ferromagnetic_point(spin):
    assert eval_g(spin, np.array([1.0, 0.0, 0.0])) == pytest.approx(1.5)
    # polar state: spin term vanishes
    assert eval_g(spin, np.array([0.0, 1.0, 0.0])) == pytest.approx(1.0)


@pytest.mark.parametrize("g", [manakov(1), manakov(3), spinor(1.0, 0.5), spinor(0.7, -0.3)])
def test_identities_hold(g):
    reports = check_identities(g, trials=300, seed=7)
    assert [r.name for r in reports] == ["gauge_invariance", "charge_identity", "euler_identity", "wirtinger"]
    for report in reports:
        assert report.passed, report


def test_identity_reports_are_seeded(spin):
    a = check_euler_identity(spin, trials=50, seed=3)
    b = check_euler_identity(spin, trials=50, seed=3)
    assert a.max_deviation == b.max_deviation


def test_single_checks(spin):
    assert check_gauge_invariance(spin, 100).passed
    assert check_charge_identity(spin, 100).passed
    assert check_wirtinger(spin, 100).passed


def test_trials_must_be_positive(pair):
    with pytest.raises(ArgumentError):
        check_euler_identity(pair, trials=0)


def test_realness_violation_is_rejected():
    terms = {((1, 1), (2, 0)): 1.0, ((2, 0), (1, 1)): 2.0}
    with pytest.raises(PolynomialError):
        GaugePolynomial(2, terms)


def test_missing_partner_without_symmetrize():
    with pytest.raises(PolynomialError):
        GaugePolynomial(2, {((1, 1), (2, 0)): 1.0}, symmetrize=False)


def test_missing_partner_is_filled():
    g = GaugePolynomial(2, {((1, 1), (2, 0)): 1.0})
    assert g.terms[MultiIndexPair((2, 0), (1, 1))] == 1.0
    assert check_identities(g, trials=100)[0].passed


@pytest.mark.parametrize("alpha,beta", [((1, 0), (2, 0)), ((3, 0), (1, 0)), ((1, 1), (1, 1, 0))])
def test_multi_index_degree(alpha, beta):
    with pytest.raises(PolynomialError):
        MultiIndexPair(alpha, beta)


def test_component_count_mismatch(pair):
    with pytest.raises(ArgumentError):
        pair.evaluate(np.ones(3))


def test_directional_derivative_matches_difference(spin):
    rng = np.random.default_rng(1)
    z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    dz = rng.standard_normal(3) + 1j * rng.standard_normal(3)
    h = 1e-6
    difference = (eval_g(spin, z + h * dz) - eval_g(spin, z - h * dz)) / (2 * h)
    assert eval_grad_g_spatial_factor(spin, z, dz) == pytest.approx(difference, rel=1e-6)


def test_field_evaluation_shape(pair):
    field = np.ones((2, 4, 4, 4), dtype=complex)
    assert pair.evaluate(field).shape == (4, 4, 4)
    assert pair.nonlinearity(field).shape == field.shape


def test_json_table(spin, tmp_path):
    path = tmp_path / "spin.json"
    path.write_text(json.dumps(spin.to_json()))
    assert load_polynomial_file(path) == spin


def test_json_bad_term_pointer():
    data = {"n": 2, "terms": [{"alpha": [1, 1], "beta": [1, 1], "coeff": 1.0}, {"alpha": [1, 1]}]}
    with pytest.raises(PolynomialError) as info:
        GaugePolynomial.from_json(data)
    assert info.value.pointer == "/terms/1"


def test_missing_file():
    with pytest.raises(PolynomialError):
        load_polynomial_file("/nonexistent/table.json")


def test_presets():
    assert get_preset("manakov", n=3) == manakov(3)
    assert get_preset("spinor", a=1.0, b=0.5) == spinor(1.0, 0.5)
    with pytest.raises(ValidationError) as info:
        get_preset("cubic")
    assert info.value.pointer == "/preset"
    with pytest.raises(ValidationError) as info:
        get_preset("spinor", n=2)
    assert info.value.pointer == "/n"


def test_scaled_and_zero():
    g = manakov(2)
    assert eval_g(g.scaled(-2.0), np.array([1.0, 0.0])) == pytest.approx(-2.0)
    assert GaugePolynomial(2).is_zero()


def _spinor_equations(z, a, b):
    """Component form of the spin-1 nonlinearity"""
    z1, z2, z3 = z
    d1, d2, d3 = np.abs(z) ** 2
    return np.array([
        (a + b) * (d1 + d2) * z1 + (a - b) * d3 * z1 + b * z2 ** 2 * np.conj(z3),
        (a + b) * (d1 + d3) * z2 + a * d2 * z2 + 2 * b * z1 * z3 * np.conj(z2),
        (a + b) * (d3 + d2) * z3 + (a - b) * d1 * z3 + b * z2 ** 2 * np.conj(z1),
    ])


@pytest.mark.parametrize("a,b", [(1.0, 0.5), (0.7, -0.3), (2.0, 1.25)])
def test_spinor_matches_component_equations(a, b):
    g = spinor(a, b)
    rng = np.random.default_rng(11)
    for _ in range(50):
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        np.testing.assert_allclose(eval_F(g, z), _spinor_equations(z, a, b), rtol=1e-12, atol=1e-12)


def test_spinor_without_spin_term():
    np.testing.assert_allclose(eval_F(spinor(1.0, 0.0), np.array([1.0, 1.0, 1.0])), [3.0, 3.0, 3.0], atol=1e-14)
    assert eval_g(spinor(1.0, 0.0), np.array([1.0, 1.0, 1.0])) == pytest.approx(9.0)


@pytest.mark.parametrize("g", [manakov(2), spinor(1.0, 0.5), spinor(0.7, -0.3)])
def test_homogeneity(g):
    rng = np.random.default_rng(4)
    for lam in (0.3, -1.7, 2.5):
        z = rng.standard_normal(g.n_components) + 1j * rng.standard_normal(g.n_components)
        assert eval_g(g, lam * z) == pytest.approx(lam ** 4 * eval_g(g, z), rel=1e-12, abs=1e-12)
        np.testing.assert_allclose(eval_F(g, lam * z), lam ** 3 * eval_F(g, z), rtol=1e-12, atol=1e-12)


def test_evaluation_is_real_for_large_fields(spin):
    rng = np.random.default_rng(8)
    field = 1e3 * (rng.standard_normal((3, 6, 6, 6)) + 1j * rng.standard_normal((3, 6, 6, 6)))
    values = spin.evaluate(field)
    assert values.dtype == np.float64
    assert np.all(np.isfinite(values))
