"""Potential families: values, gradients, spectra, loading."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metastable.potentials import (
    TWO_PARTICLE_CRITICAL_COUPLING,
    ChainPotential,
    FunctionPotential,
    PolynomialPotential,
    chain_potential,
    critical_coupling,
    double_well_1d,
    fourier_eigenvalues,
    load_potential,
    rotated_two_particle,
    uniform_minimum_spectrum,
)


def _num_gradient(model, x, h=1e-6):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        out[i] = (model.value(x + e) - model.value(x - e)) / (2 * h)
    return out


def test_double_well_basics(dw):
    assert dw.dim == 1
    assert dw.value(np.array([1.0])) == pytest.approx(-0.25)
    assert dw.value(np.array([0.0])) == 0.0
    assert dw.gradient(np.array([1.0])) == pytest.approx([0.0])
    assert dw.hessian(np.array([0.0]))[0, 0] == pytest.approx(-1.0)
    assert dw.hessian(np.array([1.0]))[0, 0] == pytest.approx(2.0)


def test_chain_value_and_symmetry():
    model = chain_potential(4, 0.7)
    x = np.array([0.3, -0.1, 0.5, 0.2])
    # cyclic shift invariance
    assert model.value(np.roll(x, 1)) == pytest.approx(model.value(x), rel=1e-12)
    # parity invariance
    assert model.value(-x) == pytest.approx(model.value(x), rel=1e-12)
    # uniform configurations feel no coupling
    u = np.full(4, 0.8)
    assert model.value(u) == pytest.approx(4 * (0.8**4 / 4 - 0.8**2 / 2), rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(
    st.integers(min_value=2, max_value=6),
    st.floats(min_value=0.0, max_value=3.0),
    st.integers(min_value=0, max_value=10**6),
)
def test_chain_gradient_matches_finite_differences(N, gamma, salt):
    model = chain_potential(N, gamma)
    rng = np.random.default_rng(salt)
    x = rng.uniform(-1.5, 1.5, size=N)
    assert np.allclose(model.gradient(x), _num_gradient(model, x), atol=1e-5)


def test_polynomial_gradient_and_hessian_consistency():
    model = rotated_two_particle(0.6)
    rng = np.random.default_rng(7)
    for _ in range(5):
        x = rng.uniform(-1, 1, size=2)
        assert np.allclose(model.gradient(x), _num_gradient(model, x), atol=1e-5)
        h = 1e-5
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            col = (model.gradient(x + e) - model.gradient(x - e)) / (2 * h)
            assert np.allclose(model.hessian(x)[:, i], col, atol=1e-4)


def test_value_many_matches_value():
    model = chain_potential(3, 0.5)
    pts = np.random.default_rng(0).uniform(-1, 1, size=(40, 3))
    vals = model.value_many(pts)
    assert np.allclose(vals, [model.value(p) for p in pts], rtol=1e-12)
    grads = model.gradient_many(pts)
    assert np.allclose(grads, [model.gradient(p) for p in pts], rtol=1e-10, atol=1e-12)


def test_rotated_two_particle_matches_rotated_chain():
    # the quartic polynomial is the N=2 chain expressed in sum/difference modes
    gamma = 0.8
    chain = chain_potential(2, gamma)
    rot = rotated_two_particle(gamma)
    rng = np.random.default_rng(3)
    for _ in range(10):
        y = rng.uniform(-1.2, 1.2, size=2)
        x = np.array([y[0] + y[1], y[0] - y[1]]) / math.sqrt(2.0)
        assert rot.value(y) == pytest.approx(chain.value(x), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("N", range(2, 11))
def test_fourier_eigenvalues_match_dense_hessian(N):
    gamma = 0.9
    model = chain_potential(N, gamma)
    dense = np.linalg.eigvalsh(model.hessian(np.zeros(N)))
    analytic = sorted(v for _, v in fourier_eigenvalues(N, gamma))
    assert np.allclose(dense, analytic, atol=1e-10)


@pytest.mark.parametrize("N", range(2, 11))
def test_uniform_minimum_spectrum_matches_dense_hessian(N):
    gamma = 0.45
    model = chain_potential(N, gamma)
    dense = np.linalg.eigvalsh(model.hessian(np.ones(N)))
    analytic = sorted(v for _, v in uniform_minimum_spectrum(N, gamma))
    assert np.allclose(dense, analytic, atol=1e-10)


@pytest.mark.parametrize("N", range(3, 11))
def test_critical_coupling_zeroes_the_soft_mode(N):
    gstar = critical_coupling(N)
    eta = dict(fourier_eigenvalues(N, gstar))
    assert abs(eta[1]) < 1e-12


def test_two_particle_threshold_is_a_constant_not_a_coupling():
    assert TWO_PARTICLE_CRITICAL_COUPLING == 0.5
    with pytest.raises(ValueError):
        critical_coupling(2)


def test_function_potential_wraps_callables():
    model = FunctionPotential(lambda x: float(x[0] ** 2 + 2 * x[1] ** 2), dim=2)
    x = np.array([0.5, -0.25])
    assert model.value(x) == pytest.approx(0.375)
    # gradient and hessian fall back to finite differences
    assert np.allclose(model.gradient(x), [1.0, -1.0], atol=1e-6)
    assert np.allclose(model.hessian(x), np.diag([2.0, 4.0]), atol=1e-4)


def test_load_potential_builtins_and_files(tmp_path):
    assert load_potential("double_well").dim == 1
    chain = load_potential("chain", {"N": 3, "gamma": 0.5})
    assert isinstance(chain, ChainPotential) and chain.dim == 3
    rot = load_potential("rotated2", {"gamma": 0.5})
    assert rot.dim == 2

    doc = {
        "dimension": 2,
        "terms": [
            {"exponents": [2, 0], "coeff": -0.5},
            {"exponents": [4, 0], "coeff": 0.25},
            {"exponents": [0, 2], "coeff": 1.0},
        ],
    }
    path = tmp_path / "pot.json"
    path.write_text(json.dumps(doc))
    model = load_potential(str(path))
    assert isinstance(model, PolynomialPotential)
    assert model.value(np.array([1.0, 0.0])) == pytest.approx(-0.25)

    named = tmp_path / "named.json"
    named.write_text(json.dumps({"name": "chain", "params": {"N": 2, "gamma": 0.75}}))
    assert load_potential(str(named)).dim == 2


def test_load_potential_rejects_bad_input():
    with pytest.raises(ValueError):
        load_potential("no_such_family")
    with pytest.raises(ValueError):
        load_potential("chain", {"N": 2})  # missing gamma
    with pytest.raises(ValueError):
        load_potential("chain", {"N": 2, "gamma": 0.5, "bogus": 1})


def test_chain_rejects_bad_parameters():
    with pytest.raises(ValueError):
        chain_potential(1, 0.5)
    with pytest.raises(ValueError):
        chain_potential(3, -0.1)
