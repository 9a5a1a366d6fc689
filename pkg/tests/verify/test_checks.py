import numpy as np
import pytest

from pysafeset.data import PolySystem
from pysafeset.poly import MatrixPolynomial, Polynomial, parse_column, parse_matrix, parse_polynomial
from pysafeset.synth import SafeSpec
from pysafeset.verify import check_boundary, check_containments, project_to_level, grid_points

BOX = np.array([[-2., 2.]])


def _decay() -> PolySystem:
    return PolySystem([[-1.]], [[1.]], parse_column(['x1'], 1), parse_matrix([['1']], 1))


def _zero() -> MatrixPolynomial:
    return MatrixPolynomial.column([Polynomial(1)])


def test_projection():
    h = parse_polynomial('x1^2 + x2^2 - 1', 2)
    x = project_to_level(h, np.array([[2., 0.], [0.3, 0.4], [-1., -1.]]))
    assert np.linalg.norm(x, axis=1) == pytest.approx(np.ones(3))


def test_grid():
    points = grid_points(np.array([[0., 1.], [0., 2.]]), 3)
    assert points.shape == (9, 2)
    assert points[-1] == pytest.approx([1., 2.])


def test_boundary():
    # x' = -x on h = x^2 - 1 gives 2x * (-x) = -2
    check = check_boundary(parse_polynomial('x1^2 - 1', 1), _zero(), _decay(), 0.01, BOX, n_samples=256)
    assert check.found
    assert check.worst == pytest.approx(-2., abs=1e-3)
    assert check.passed
    assert check.to_dict()['source'] == 'ground-truth'

    # flipped sign
    check = check_boundary(parse_polynomial('1 - x1^2', 1), _zero(), _decay(), 0.01, BOX, n_samples=256)
    assert check.worst == pytest.approx(2., abs=1e-3)
    assert not check.passed


def test_boundary_not_found():
    check = check_boundary(parse_polynomial('x1^2 + 1', 1), _zero(), _decay(), 0.01, BOX, n_samples=64)
    assert not check.found
    assert not check.passed

    with pytest.raises(ValueError):
        check_boundary(Polynomial.constant(1, -1.), _zero(), _decay(), 0.01, BOX)


def test_containments():
    spec = SafeSpec([parse_polynomial('x1^2 - 9', 1)], parse_polynomial('x1^2', 1), [0.])

    # h = lambda - theta is exactly L_theta
    check = check_containments(parse_polynomial('x1^2 - 4', 1), spec, 4.)
    assert check.violations == 0
    assert check.passed

    # set reaching beyond S
    check = check_containments(parse_polynomial('x1^2 - 16', 1), spec, 4.)
    assert check.level_violations == 0
    assert check.safety_violations > 0
    assert not check.passed

    # L_theta larger than the set
    check = check_containments(parse_polynomial('x1^2 - 1', 1), spec, 4.)
    assert check.level_violations > 0
