import math

import numpy as np
import pytest

from tempered_wave.kernels import riesz_weights
from tempered_wave.operators import apply, assemble_riesz, definiteness_check
from tempered_wave.problems import exact_riesz_of_manufactured


def piecewise_matrix(alpha, M):
    # entry-by-entry piecewise definition of A_alpha
    w = riesz_weights(alpha, M + 2).weights
    A = np.zeros((M - 1, M - 1))
    for i in range(1, M):
        for j in range(1, M):
            if j < i - 1:
                A[i - 1, j - 1] = w[i - j + 1]
            elif j == i - 1 or j == i + 1:
                A[i - 1, j - 1] = w[0] + w[2]
            elif j == i:
                A[i - 1, j - 1] = 2 * w[1]
            else:
                A[i - 1, j - 1] = w[j - i + 1]
    return A


def test_alpha2_is_second_difference():
    h = 0.25
    op = assemble_riesz(2.0, 4, h)
    expected = (np.diag([-2.0] * 3) + np.diag([1.0] * 2, 1) + np.diag([1.0] * 2, -1)) / h**2
    np.testing.assert_allclose(op.dense(), expected, rtol=1e-15)
    np.testing.assert_array_equal(op.matrix.dense(), 2 * expected * h**2)


@pytest.mark.parametrize("alpha", [1.2, 1.5, 1.8])
def test_offdiagonal(alpha):
    op = assemble_riesz(alpha, 8, 1 / 8)
    assert op.matrix.first_row[1] == pytest.approx(7 - 2 ** (5 - alpha) + 3 ** (3 - alpha), rel=1e-14)


def test_symmetric():
    A = assemble_riesz(1.5, 8, 1 / 8).matrix.dense()
    np.testing.assert_array_equal(A, A.T)


@pytest.mark.parametrize("alpha", [1.1, 1.5, 2.0])
@pytest.mark.parametrize("M", [3, 4, 9, 64])
def test_toeplitz_matches_piecewise_definition(alpha, M):
    op = assemble_riesz(alpha, M, 1 / M)
    np.testing.assert_array_equal(op.matrix.dense(), piecewise_matrix(alpha, M))
    for i in range(M - 1):
        for j in range(M - 1):
            assert op.matrix.entry(i, j) == op.matrix.first_row[abs(i - j)]


def test_prefactor_positive():
    for alpha in np.linspace(1.05, 2.0, 12):
        assert assemble_riesz(alpha, 10, 0.1).prefactor > 0


def test_apply_zero():
    op = assemble_riesz(1.5, 16, 1 / 16)
    np.testing.assert_array_equal(apply(op, np.zeros(15)), 0.0)


def test_apply_dimension_mismatch():
    op = assemble_riesz(1.5, 16, 1 / 16)
    with pytest.raises(ValueError):
        apply(op, np.zeros(16))


def test_alpha2_sine_eigenfunction():
    errs = []
    for M in (16, 32, 64):
        x = np.arange(1, M) / M
        u = np.sin(np.pi * x)
        errs.append(np.max(np.abs(apply(assemble_riesz(2.0, M, 1 / M), u) + np.pi**2 * u)))
    ratios = np.array(errs[:-1]) / errs[1:]
    np.testing.assert_allclose(ratios, 4.0, rtol=0.02)


def test_alpha2_matches_three_point_laplacian():
    M = 50
    h = 1 / M
    u = np.random.default_rng(3).standard_normal(M - 1)
    padded = np.concatenate([[0.0], u, [0.0]])
    classic = (padded[2:] - 2 * padded[1:-1] + padded[:-2]) / h**2
    np.testing.assert_allclose(apply(assemble_riesz(2.0, M, h), u), classic, rtol=1e-12, atol=1e-12 * np.max(np.abs(classic)))


@pytest.mark.parametrize("alpha", [1.1, 1.5, 1.9, 2.0])
def test_quadratic_form_negative(alpha):
    M = 40
    op = assemble_riesz(alpha, M, 1 / M)
    rng = np.random.default_rng(0)
    for _ in range(100):
        u = rng.standard_normal(M - 1)
        assert np.dot(apply(op, u), u) < 0


def test_definiteness_alpha2_spectrum():
    M = 16
    h = 1 / M
    rep = definiteness_check(assemble_riesz(2.0, M, h), trials=50)
    assert rep.negative_definite
    assert rep.max_eigenvalue == pytest.approx(-(2 / h**2) * (1 - math.cos(math.pi * h)), rel=1e-12)
    assert rep.max_quadratic_form <= rep.max_eigenvalue * (1 - 1e-12)


@pytest.mark.parametrize("alpha", [1.01, 1.5, 1.99])
def test_definiteness_fractional(alpha):
    rep = definiteness_check(assemble_riesz(alpha, 32, 1 / 32), trials=100)
    assert rep.negative_definite
    assert rep.max_quadratic_form < 0 and rep.max_eigenvalue < 0


def _operator_error(alpha, M, band=None):
    h = 1 / M
    x = np.arange(1, M) * h
    d = np.abs(apply(assemble_riesz(alpha, M, h), x**2 * (1 - x) ** 2) - exact_riesz_of_manufactured(x, alpha))
    if band is not None:
        d = d[(x >= band[0]) & (x <= band[1])]
    return np.max(d)


@pytest.mark.parametrize("alpha", [1.1, 1.3, 1.5, 1.7, 1.9])
def test_spatial_order_interior(alpha):
    errs = [_operator_error(alpha, M, band=(0.25, 0.75)) for M in (64, 128, 256)]
    orders = np.log2(np.array(errs[:-1]) / errs[1:])
    assert np.all((orders >= 1.8) & (orders <= 2.2)), orders


@pytest.mark.parametrize("alpha", [1.3, 1.5, 1.7])
def test_spatial_order_boundary_layer(alpha):
    # zero extension of x**2 past the boundary is only C^1, which caps the
    # pointwise order at the nodes next to x = 0 and x = 1 near 2 - alpha
    errs = [_operator_error(alpha, M) for M in (64, 128, 256)]
    orders = np.log2(np.array(errs[:-1]) / errs[1:])
    np.testing.assert_allclose(orders, 2 - alpha, atol=0.1)
