import numpy as np
import pytest

from pysafeset.exceptions import StateBlowUpError
from pysafeset.utils.integrate import integrate


def test_decay():
    x = integrate(lambda t, x: -x, 0., np.array([1., 2.]), 1., 100)
    assert x == pytest.approx(np.exp(-1.) * np.array([1., 2.]), rel=1e-8)


def test_batch():
    # explicit time dependence
    x = integrate(lambda t, x: np.ones_like(x) * t, 0., np.zeros((3, 1)), 2., 10)
    assert x.shape == (3, 1)
    assert x == pytest.approx(np.full((3, 1), 2.))


def test_blow_up():
    with pytest.raises(StateBlowUpError):
        integrate(lambda t, x: x ** 3, 0., np.array([2.]), 1., 100)

    # or continued as NaN
    x = integrate(lambda t, x: x ** 3, 0., np.array([[2.], [0.]]), 1., 100, raise_on_blow_up=False)
    assert np.isnan(x[0, 0])
    assert x[1, 0] == 0.


def test_steps():
    with pytest.raises(ValueError):
        integrate(lambda t, x: x, 0., np.array([1.]), 1., 0)
