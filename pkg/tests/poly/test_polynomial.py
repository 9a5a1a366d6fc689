import numpy as np
import pytest

from pysafeset.poly import Polynomial, MatrixPolynomial, monomial_basis, parse_polynomial


def test_arithmetic():
    x, y = Polynomial.variables_of(2)
    p = (x + y) ** 2

    # canonical order, x1^2 x1x2 x2^2
    assert p.monomials() == [(2, 0), (1, 1), (0, 2)]
    assert p.coefficient((1, 1)) == 2.
    assert p - p == 0.
    assert (p * 2.) / 2. == p
    assert p.degree == 2

    with pytest.raises(ValueError):
        p ** 0.5


def test_evaluate():
    p = parse_polynomial('1 + 2*x1*x2 - x2^3', 2)
    assert p([2., 3.]) == pytest.approx(1. + 12. - 27.)

    # vectorized must agree
    points = np.array([[2., 3.], [0., 0.], [-1., 0.5]])
    values = p.evaluate_many(points)
    assert values == pytest.approx([p(x) for x in points])

    with pytest.raises(ValueError):
        p([1.])


def test_derivative():
    p = parse_polynomial('x1^3*x2 + x2^2', 2)
    assert p.derivative(0) == parse_polynomial('3*x1^2*x2', 2)
    assert p.derivative(1) == parse_polynomial('x1^3 + 2*x2', 2)

    grad = p.gradient()
    assert grad.shape == (1, 2)


def test_truncate():
    p = parse_polynomial('1 + 1e-7*x1 + x1^2', 1)
    assert p.truncate(1e-5) == parse_polynomial('1 + x1^2', 1)

    # original is unchanged
    assert len(p.terms) == 3


def test_text():
    p = parse_polynomial('0.1 + 2.5*x1*x3 - x2^4', 3)
    assert Polynomial.from_text(p.to_text(), 3) == p
    assert Polynomial(3).to_text() == '0.0'


def test_basis():
    basis = monomial_basis(2, 2)
    assert basis == [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]

    # binomial count
    assert len(monomial_basis(3, 4)) == 35

    with pytest.raises(ValueError):
        monomial_basis(0, 2)


def test_matrix():
    x, y = Polynomial.variables_of(2)
    M = MatrixPolynomial([[x, y], [y, 1.]])
    assert M.is_symmetric()
    assert M.T == M

    # product with a constant matrix
    N = np.array([[1., 0.], [0., 2.]]) @ M
    assert N[1, 0] == y * 2.
    assert N.evaluate([1., 2.]) == pytest.approx(np.array([[1., 2.], [4., 2.]]))

    # blocks
    B = MatrixPolynomial.block([[M, None], [None, MatrixPolynomial.identity(2, 1)]])
    assert B.shape == (3, 3)
    assert B[2, 2] == 1.
    assert B[0, 2] == 0.
