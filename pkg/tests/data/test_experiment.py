import numpy as np
import pytest

from pysafeset.data import PolySystem, SinusoidSignal, ConstantSignal, simulate_experiment, sample_ball
from pysafeset.poly import parse_column, parse_matrix


def _toy() -> PolySystem:
    return PolySystem([[1., -0.1]], [[1.]], parse_column(['x1', 'x1^3'], 1), parse_matrix([['1']], 1))


def test_signal():
    signal = SinusoidSignal(2, amplitude=[1., 2.], offset=[0.5, -0.5], seed=1)
    u = signal(3.)
    assert u.shape == (2,)
    assert abs(u[0] - 0.5) <= 1. and abs(u[1] + 0.5) <= 2.

    # same seed, same signal
    assert SinusoidSignal(2, amplitude=[1., 2.], offset=[0.5, -0.5], seed=1)(3.) == pytest.approx(u)
    assert ConstantSignal(1, 2.)(10.) == pytest.approx([2.])


def test_ball():
    rng = np.random.default_rng(0)
    for _ in range(100):
        assert np.linalg.norm(sample_ball(rng, 3, 0.1)) <= 0.1


def test_experiment():
    sys = _toy()
    signal = {'class': 'pysafeset.data.SinusoidSignal', 'amplitude': 1.}
    ds = simulate_experiment(sys, signal, [0.], 0.05, 100, omega=1e-6, seed=3)
    assert ds.T == 100
    assert ds.t[1] == pytest.approx(0.05)

    # recorded derivative is the true one plus a bounded disturbance
    d = ds.xdot - sys.rhs(ds.x, ds.u)
    assert np.all(np.sum(d ** 2, axis=1) <= 1e-6 * (1. + 1e-9))

    # reproducible
    other = simulate_experiment(sys, signal, [0.], 0.05, 100, omega=1e-6, seed=3)
    assert np.array_equal(ds.x, other.x)


def test_experiment_errors():
    sys = _toy()
    with pytest.raises(ValueError):
        simulate_experiment(sys, ConstantSignal(1), [0.], 0., 10)
    with pytest.raises(ValueError):
        simulate_experiment(sys, ConstantSignal(2), [0.], 0.1, 10)
