"""Tensor layer: orbit storage, arithmetic, evaluation, serialization."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from valuation_lab.tensors import (
    SymTensor,
    contract,
    kappa,
    metric_tensor,
    omega,
    orbit_size,
    sorted_indices,
    sym_power,
    sym_product,
)


def test_ball_and_sphere_constants():
    assert kappa(0) == 1.0
    assert kappa(1) == pytest.approx(2.0, abs=1e-15)
    assert kappa(2) == pytest.approx(math.pi, abs=1e-15)
    assert kappa(3) == pytest.approx(4.0 * math.pi / 3.0, abs=1e-14)
    assert kappa(4) == pytest.approx(math.pi ** 2 / 2.0, abs=1e-14)
    assert omega(1) == pytest.approx(2.0, abs=1e-15)
    assert omega(2) == pytest.approx(2.0 * math.pi, abs=1e-14)
    assert omega(3) == pytest.approx(4.0 * math.pi, abs=1e-14)
    with pytest.raises(ValueError):
        kappa(-1)
    with pytest.raises(ValueError):
        omega(0)


def test_orbit_enumeration():
    idx = list(sorted_indices(2, 3))
    assert idx == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    assert orbit_size((0, 0, 1)) == 3   # 3!/2!
    assert orbit_size((0, 1, 2)) == 6
    assert orbit_size((1, 1, 1)) == 1
    # total orbit sizes cover the full dense tensor
    assert sum(orbit_size(i) for i in sorted_indices(3, 3)) == 27


def test_constructor_validation():
    with pytest.raises(ValueError):
        SymTensor(5, 3, {})            # rank cap
    with pytest.raises(ValueError):
        SymTensor(1, 6, {})            # dim cap
    with pytest.raises(ValueError):
        SymTensor(2, 3, {(1, 0): 1.0})  # unsorted index
    with pytest.raises(ValueError):
        SymTensor(2, 3, {(0, 3): 1.0})  # out of range
    with pytest.raises(ValueError):
        SymTensor(2, 3, {(0,): 1.0})    # wrong length
    with pytest.raises(ValueError):
        SymTensor(0, 3, {(): math.nan})
    # zero coefficients are dropped so equality is canonical
    assert SymTensor(1, 2, {(0,): 0.0}) == SymTensor.zeros(1, 2)


def test_vector_matrix_round_trip():
    v = np.array([1.5, -2.0, 0.25])
    assert np.array_equal(SymTensor.from_vector(v).vector(), v)
    m = np.array([[2.0, 1.0], [1.0, 3.0]])
    t = SymTensor.from_matrix(m)
    assert np.array_equal(t.matrix(), m)
    assert t.coefficient(1, 0) == 1.0   # accessor sorts the index
    with pytest.raises(ValueError):
        SymTensor.from_matrix([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(ValueError):
        SymTensor.from_vector(v).matrix()


def test_dense_round_trip_rank3():
    rng = np.random.default_rng(5)
    x = rng.standard_normal(3)
    t = sym_power(x, 3)
    dense = t.to_dense()
    assert dense.shape == (3, 3, 3)
    expected = np.einsum("i,j,k->ijk", x, x, x)
    assert np.allclose(dense, expected, atol=1e-15)
    assert SymTensor.from_dense(dense).allclose(t, rtol=0, atol=1e-15)


def test_evaluation_matches_quadratic_form():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((4, 4))
    a = a + a.T
    t = SymTensor.from_matrix(a)
    u = rng.standard_normal(4)
    w = rng.standard_normal(4)
    assert t(u, u) == pytest.approx(u @ a @ u, rel=1e-12)
    assert t(u, w) == pytest.approx(u @ a @ w, rel=1e-12)
    with pytest.raises(ValueError):
        t(u)


def test_arithmetic_and_allclose():
    a = SymTensor.from_vector([1.0, 2.0])
    b = SymTensor.from_vector([0.5, -1.0])
    assert np.array_equal((a + b).vector(), [1.5, 1.0])
    assert np.array_equal((a - b).vector(), [0.5, 3.0])
    assert np.array_equal((2.0 * a).vector(), [2.0, 4.0])
    assert np.array_equal((a / 4.0).vector(), [0.25, 0.5])
    assert a.allclose(a + b * 1e-14)
    assert not a.allclose(b)
    with pytest.raises(ValueError):
        a + SymTensor.from_vector([1.0, 2.0, 3.0])


def test_metric_tensor_is_inner_product():
    q = metric_tensor(3)
    u = np.array([1.0, 2.0, -1.0])
    assert q(u, u) == pytest.approx(u @ u, rel=1e-15)
    assert np.array_equal(q.matrix(), np.eye(3))


def test_contract_slot():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(3)
    v = rng.standard_normal(3)
    # contracting x^3 with v gives <x, v> x^2
    got = contract(sym_power(x, 3), v)
    want = sym_power(x, 2) * float(x @ v)
    assert got.allclose(want, rtol=1e-12)
    assert contract(metric_tensor(3), v).vector() == pytest.approx(v.tolist())
    with pytest.raises(ValueError):
        contract(SymTensor.from_scalar(1.0, 3), v)


def test_json_round_trip_and_one_based_indices():
    t = SymTensor(2, 3, {(0, 0): 2.0, (0, 2): -1.5})
    data = t.to_json_dict()
    assert data["rank"] == 2 and data["dim"] == 3
    assert [[1, 1], 2.0] in data["coeffs"]
    assert [[1, 3], -1.5] in data["coeffs"]
    assert SymTensor.from_json_dict(data) == t
    with pytest.raises(ValueError):
        SymTensor.from_json_dict(
            {"rank": 1, "dim": 2, "coeffs": [[[1], 1.0], [[1], 2.0]]})


@st.composite
def unit_rank_pair(draw):
    dim = draw(st.integers(min_value=2, max_value=4))
    p = draw(st.integers(min_value=0, max_value=3))
    q = draw(st.integers(min_value=0, max_value=4 - p))
    seed = draw(st.integers(min_value=0, max_value=2 ** 31 - 1))
    x = np.random.default_rng(seed).uniform(-2.0, 2.0, size=dim)
    return x, p, q


@given(unit_rank_pair())
@settings(max_examples=60, deadline=None)
def test_sym_product_exponent_law(case):
    x, p, q = case
    got = sym_product(sym_power(x, p), sym_power(x, q))
    assert got.allclose(sym_power(x, p + q), rtol=1e-10, atol=1e-12)


@given(st.integers(min_value=0, max_value=2 ** 31 - 1))
@settings(max_examples=40, deadline=None)
def test_sym_product_symmetrizes_outer_product(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal(3)
    b = rng.standard_normal(3)
    dense = sym_product(SymTensor.from_vector(a),
                        SymTensor.from_vector(b)).to_dense()
    outer = 0.5 * (np.outer(a, b) + np.outer(b, a))
    assert np.allclose(dense, outer, atol=1e-14)


def test_sym_product_rank_cap():
    x = np.ones(2)
    with pytest.raises(ValueError):
        sym_product(sym_power(x, 3), sym_power(x, 2))
