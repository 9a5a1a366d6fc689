import numpy as np
import pytest

from pysafeset.data import ConsistencyEllipsoid, PolySystem
from pysafeset.poly import MatrixPolynomial, parse_column, parse_matrix, parse_polynomial
from pysafeset.verify import member_from_Y, sample_ellipsoid_members, ParameterFamily


def _ellipsoid() -> ConsistencyEllipsoid:
    rng = np.random.default_rng(0)
    R = rng.normal(size=(3, 3))
    return ConsistencyEllipsoid(rng.normal(size=(3, 1)), R @ R.T + np.eye(3), np.array([[0.5]]))


def test_center():
    ell = _ellipsoid()
    assert member_from_Y(ell, np.zeros((3, 1))) == pytest.approx(ell.zeta)


def test_samples():
    ell = _ellipsoid()
    members = sample_ellipsoid_members(ell, 1000, seed=1)
    assert members.shape == (1000, 3, 1)
    assert all(ell.contains(z, tol=1e-8) for z in members)

    # reproducible
    assert sample_ellipsoid_members(ell, 5, seed=1) == pytest.approx(members[:5])

    with pytest.raises(ValueError):
        sample_ellipsoid_members(ell, 0)


def test_family():
    Z = parse_column(['x1', 'x1^3'], 1)
    W = parse_matrix([['1']], 1)
    system = PolySystem([[1., -0.1]], [[1.]], Z, W)
    family = ParameterFamily.from_system(system)
    assert len(family) == 1
    assert family.name == 'ground-truth'

    # closed loop with K = -2 x1 equals the system with that input
    K = MatrixPolynomial.column([parse_polynomial('-2*x1', 1)])
    points = np.array([[-1.], [0.5], [2.]])
    f = family.closed_loop(K, points)
    assert f.shape == (1, 3, 1)
    assert f[0] == pytest.approx(system.rhs(points, -2. * points))

    # back to a system
    assert family.system(0).zeta == pytest.approx(system.zeta)
