import numpy as np
import pytest

from pysafeset.pipeline import platoon_config
from pysafeset.poly import parse_polynomial
from pysafeset.synth import SafeSpec, DegreeProfile


def _platoon() -> SafeSpec:
    return SafeSpec.from_dict(platoon_config()['safe_set'], 3)


def test_platoon_safe_set():
    spec = _platoon()
    assert spec.q == 6
    assert spec.sigmas[0]([8.5, 8.5, 8.]) == pytest.approx(-1.3)
    assert spec.max_sigma(np.array([[8.5, 8.5, 8.]]))[0] < 0.
    assert spec.bounding_box() == pytest.approx(np.array([[0., 22.2], [0., 22.2], [5., 10.]]))


def test_toy_box():
    spec = SafeSpec([parse_polynomial('x1^2 - 9', 1)], parse_polynomial('x1^2', 1), [0.])
    assert spec.bounding_box() == pytest.approx(np.array([[-3., 3.]]))

    # samples inside box
    points = spec.sample(64, seed=1)
    assert points.shape == (64, 1)
    assert np.all(np.abs(points) <= 3.)


def test_unbounded():
    spec = SafeSpec([parse_polynomial('x1 - x2', 2)], parse_polynomial('x1^2 + x2^2', 2), [0., 0.])
    with pytest.raises(ValueError):
        spec.bounding_box()

    # explicit box
    spec = SafeSpec([parse_polynomial('x1 - x2', 2)], parse_polynomial('x1^2 + x2^2', 2), [0., 0.],
                    box=[[-1., 1.], [-1., 1.]])
    assert spec.bounding_box()[1, 1] == 1.


def test_lambda_checks():
    with pytest.raises(ValueError):
        SafeSpec([parse_polynomial('x1^2 - 9', 1)], parse_polynomial('x1^2 + 1', 1), [0.])
    with pytest.raises(ValueError):
        SafeSpec([parse_polynomial('x1^2 - 9', 1)], parse_polynomial('x1', 1), [0.])
    with pytest.raises(ValueError):
        SafeSpec([], parse_polynomial('x1^2', 1), [0.])


def test_config():
    spec = _platoon()
    other = SafeSpec.from_dict(spec.to_dict(), 3)
    x = np.array([[1., 2., 7.]])
    assert other.lam.evaluate_many(x) == pytest.approx(spec.lam.evaluate_many(x))


def test_init_h():
    spec = _platoon()
    assert spec.init_h([8.5, 8.5, 8.]) == pytest.approx(-0.05)
    other = SafeSpec.from_dict(spec.to_dict(), 3)
    x = np.array([[9., 8., 8.2]])
    assert other.init_h.evaluate_many(x) == pytest.approx(spec.init_h.evaluate_many(x))

    # boundary of L_theta0 lies in {init_h < 0}
    u = np.random.default_rng(2).normal(size=(500, 3))
    u /= np.linalg.norm(u, axis=1)[:, None]
    x = spec.center + u * np.sqrt(spec.theta0 / np.array([0.02, 0.05, 1.]))
    assert spec.lam.evaluate_many(x) == pytest.approx(spec.theta0)
    assert np.all(spec.init_h.evaluate_many(x) < 0.)

    # must be negative at the center
    with pytest.raises(ValueError):
        SafeSpec([parse_polynomial('x1^2 - 9', 1)], parse_polynomial('x1^2', 1), [0.],
                 init_h=parse_polynomial('1 - x1^2', 1))


def test_profile():
    profile = DegreeProfile.from_dict({'deg_h': 6, 'eps': 0.1})
    assert profile.deg_h == 6
    assert DegreeProfile.from_dict(profile.to_dict()).eps == 0.1

    with pytest.raises(ValueError):
        DegreeProfile(eps=0.)
    with pytest.raises(ValueError):
        DegreeProfile(deg_h=2.5)
    with pytest.raises(TypeError):
        DegreeProfile.from_dict({'unknown': 1})
