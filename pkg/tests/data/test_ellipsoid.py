import numpy as np
import pytest

from pysafeset.data import (DataSet, ConsistencyEllipsoid, overapprox, overapprox_energy, least_squares,
                            rank_gate)
from pysafeset.exceptions import RankDeficientError
from pysafeset.poly import parse_column, parse_matrix


def _dataset(seed: int, omega: float, T: int = 25, noise: bool = True) -> (DataSet, np.ndarray):
    rng = np.random.default_rng(seed)
    Z, W = parse_column(['x1', 'x2', 'x1*x2'], 2), parse_matrix([['1', '0'], ['0', '1']], 2)
    zeta = rng.normal(size=(5, 2))
    x = rng.uniform(-2., 2., (T, 2))
    u = rng.uniform(-1., 1., (T, 2))
    phi = np.hstack([Z.evaluate_many(x)[:, :, 0], u])
    d = np.zeros((T, 2))
    if noise:
        d = rng.normal(size=(T, 2))
        d *= np.sqrt(omega) * rng.uniform(0., 1., (T, 1)) / np.linalg.norm(d, axis=1)[:, None]
    return DataSet(x, u, phi @ zeta + d, Z, W, omega=omega), zeta


def test_ellipsoid_checks():
    with pytest.raises(ValueError):
        ConsistencyEllipsoid(np.zeros((2, 1)), np.eye(3), np.eye(1))
    with pytest.raises(ValueError):
        ConsistencyEllipsoid(np.zeros((1, 1)), np.zeros((1, 1)), np.eye(1))

    ell = ConsistencyEllipsoid(np.zeros((1, 1)), np.eye(1), np.eye(1))
    assert ell.contains(np.array([[0.99]]))
    assert not ell.contains(np.array([[1.01]]))
    assert ConsistencyEllipsoid.from_dict(ell.to_dict()).zeta == pytest.approx(ell.zeta)


@pytest.mark.parametrize('seed', [0, 1, 2])
def test_noiseless_recovery(seed):
    ds, zeta = _dataset(seed, 1e-12, noise=False)
    ell = overapprox(ds)
    assert np.linalg.norm(ell.zeta - least_squares(ds)) <= 1e-5
    assert np.linalg.norm(ell.zeta - zeta) <= 1e-5
    assert ell.contains(zeta, tol=1e-6)


def test_scalar_recovery():
    # x' = -x + 2u from three samples
    x, u = np.array([[0.5], [-1.2], [2.]]), np.array([[1.], [0.3], [-0.7]])
    ds = DataSet(x, u, -x + 2. * u, parse_column(['x1'], 1), parse_matrix([['1']], 1), omega=1e-12)
    ell = overapprox(ds)
    assert ell.zeta == pytest.approx(np.array([[-1.], [2.]]), abs=1e-5)
    assert ell.contains(np.array([[-1.], [2.]]))


@pytest.mark.parametrize('seed', [3, 4])
def test_noisy_contains_truth(seed):
    ds, zeta = _dataset(seed, 1e-2, T=40)
    ell = overapprox(ds)
    assert ell.contains(zeta)


def test_energy():
    ds, zeta = _dataset(5, 1e-2, T=40)
    ell = overapprox_energy(ds)
    assert ell.provenance == 'energy'
    assert ell.contains(zeta)
    assert ell.zeta == pytest.approx(least_squares(ds))


def test_rank_deficient():
    ds, _ = _dataset(6, 1e-4, T=4)
    ok, rank = rank_gate(ds)
    assert not ok and rank == 4
    with pytest.raises(RankDeficientError):
        overapprox(ds)
    with pytest.raises(RankDeficientError):
        overapprox_energy(ds)
