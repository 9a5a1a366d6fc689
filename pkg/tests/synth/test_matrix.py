import numpy as np
import pytest

from pysafeset.data import ConsistencyEllipsoid
from pysafeset.poly import MatrixPolynomial, Polynomial, parse_column, parse_matrix, parse_polynomial
from pysafeset.synth import build_H, model_based_condition, closed_loop_regressor


def _parts():
    Z = parse_column(['x1', 'x2', 'x1^2'], 2)
    W = parse_matrix([['1'], ['x1']], 2)
    K = MatrixPolynomial.column([parse_polynomial('-x1 - x2', 2)])
    h = parse_polynomial('x1^2 + x2^2 - 1', 2)
    l = parse_polynomial('0.5', 2)
    return Z, W, K, h, l


def test_regressor():
    Z, W, K, _, _ = _parts()
    F = closed_loop_regressor(Z, W, K)
    assert F.shape == (5, 1)
    assert F[4, 0] == parse_polynomial('-x1^2 - x1*x2', 2)

    with pytest.raises(ValueError):
        closed_loop_regressor(Z, W, MatrixPolynomial.column([Polynomial(2), Polynomial(2)]))


def test_H():
    Z, W, K, h, l = _parts()
    rng = np.random.default_rng(0)
    zeta = rng.normal(size=(5, 2))
    ell = ConsistencyEllipsoid(zeta, 0.1 * np.eye(5), np.eye(2))
    eta = Polynomial.constant(2, 2.)
    H = build_H(h, K, l, eta, 0.01, ell, Z, W)

    # size 1 + N + n and symmetric
    assert H.shape == (8, 8)
    assert H.is_symmetric()

    # top left is the condition for the center
    A, B = zeta[:3].T, zeta[3:].T
    expected = model_based_condition(h, K, l, 0.01, A, B, Z, W)
    assert (H[0, 0] - expected).max_abs_coefficient() <= 1e-9
    assert H[5, 5] == -4.
    assert H[1, 2] == 0.


def test_H_dimensions():
    Z, W, K, h, l = _parts()
    ell = ConsistencyEllipsoid(np.zeros((4, 2)), np.eye(4), np.eye(2))
    with pytest.raises(ValueError):
        build_H(h, K, l, Polynomial.constant(2, 1.), 0.01, ell, Z, W)
