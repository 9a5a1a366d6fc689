import json

import numpy as np
import pytest

from pysafeset.data import ConsistencyEllipsoid, PolySystem, simulate_experiment, overapprox
from pysafeset.exceptions import InfeasibleError
from pysafeset.pipeline import toy_config
from pysafeset.poly import parse_column, parse_matrix, parse_polynomial
from pysafeset.sos import check_certificates
from pysafeset.synth import (SafeSpec, DegreeProfile, SynthesisResult, DataDrivenCondition, EnlargeStep, alternate,
                             default_initial_h, step_enlarge, synthesize_model_based)
from pysafeset.verify import verify_result


def _toy():
    cfg = toy_config()
    system = PolySystem(cfg['system']['A'], cfg['system']['B'], parse_column(cfg['monomials']['Z'], 1),
                        parse_matrix(cfg['monomials']['W'], 1))
    return system, SafeSpec.from_dict(cfg['safe_set'], 1), DegreeProfile.from_dict(cfg['profile'])


def test_initial_h():
    _, spec, profile = _toy()
    h = default_initial_h(spec, profile)
    assert h.coefficient((0,)) == pytest.approx(-1.)
    assert h([0.1]) == pytest.approx(0.)

    # pin of the wrong sign would flip the set
    with pytest.raises(ValueError):
        default_initial_h(spec, DegreeProfile(h_pin=1.))


def test_infeasible_start():
    system, _, profile = _toy()

    # L_theta0 = [-4, 4] is not inside S = [-3, 3]
    spec = SafeSpec([parse_polynomial('x1^2 - 9', 1)], parse_polynomial('x1^2', 1), [0.], theta0=16.)
    with pytest.raises(InfeasibleError) as e:
        synthesize_model_based(system, spec, profile)
    assert 'advice' in e.value.diagnostic


def test_model_based_toy():
    system, spec, profile = _toy()
    result = synthesize_model_based(system, spec, profile)
    assert result.provenance == 'model'
    assert 1 <= len(result.iterations) <= profile.max_iter
    assert result.theta >= spec.theta0 - 1e-6
    assert all(c.valid for c in result.certificates)

    # theta never shrinks
    thetas = [it['theta'] for it in result.iterations]
    assert all(b >= a - 1e-6 for a, b in zip(thetas, thetas[1:]))

    # serializable and readable
    data = json.loads(json.dumps(result.to_dict()))
    other = SynthesisResult.from_dict(data, result.certificates_dict())
    assert other.theta == result.theta
    assert other.h == result.h
    assert len(other.certificates) == len(result.certificates)
    assert 'K1(x)' in result.summary()


@pytest.mark.slow
def test_data_driven_toy():
    system, spec, profile = _toy()
    ds = simulate_experiment(system, {'class': 'pysafeset.data.SinusoidSignal', 'amplitude': 1.}, [0.], 0.05, 200,
                             omega=1e-6, seed=0)
    ell = overapprox(ds)
    result = alternate(spec, profile, DataDrivenCondition(ell, ds.Z, ds.W))
    assert len(result.iterations) <= 10
    thetas = [it['theta'] for it in result.iterations]
    assert all(b >= a - 1e-6 for a, b in zip(thetas, thetas[1:]))

    # invariant set inside [-3, 3] and containing L_theta
    x = np.linspace(-3.5, 3.5, 701)[:, None]
    inside = result.h.evaluate_many(x) <= 0.
    assert np.all(np.abs(x[inside]) <= 3. + 1e-6)

    report = verify_result(result, spec, system=system, ellipsoid=ell, Z=ds.Z, W=ds.W, eps=profile.eps,
                           n_trajectories=100, horizon=100., dt=0.01)
    assert report.passed


def test_single_iteration():
    system, spec, profile = _toy()
    profile.tol_theta = float('inf')
    result = synthesize_model_based(system, spec, profile)
    assert len(result.iterations) == 1


def test_data_driven_certified():
    # small ellipsoid around the true parameters
    system, spec, profile = _toy()
    ell = ConsistencyEllipsoid(np.array([[1.], [-0.1], [1.]]), 1e-3 * np.eye(3), np.eye(1))
    profile.max_iter = 3
    result = alternate(spec, profile, DataDrivenCondition(ell, system.Z, system.W))
    assert 1 <= len(result.iterations) <= 3
    assert result.provenance == 'instantaneous'
    assert result.theta >= spec.theta0 - 1e-6
    thetas = [it['theta'] for it in result.iterations]
    assert all(b >= a - 1e-6 for a, b in zip(thetas, thetas[1:]))
    assert all(c.valid for c in result.certificates)
    check_certificates(result.certificates)


def _shrink_on_call(monkeypatch, call: int) -> list:
    thetas = []

    def shrinking(ctrl, spec, profile, condition, solver=None):
        enl = step_enlarge(ctrl, spec, profile, condition, solver)
        thetas.append(enl.theta)
        if len(thetas) == call:
            return EnlargeStep(enl.h, enl.eta, spec.theta0 / 2., enl.solution)
        return enl

    monkeypatch.setattr('pysafeset.synth.alternation.step_enlarge', shrinking)
    return thetas


def test_theta_decrease_keeps_previous(monkeypatch):
    system, spec, profile = _toy()
    profile.tol_theta = -float('inf')
    profile.max_iter = 3
    thetas = _shrink_on_call(monkeypatch, 2)
    result = synthesize_model_based(system, spec, profile)
    assert len(thetas) == 2
    assert len(result.iterations) == 1
    assert result.theta == thetas[0]


def test_theta_decrease_first(monkeypatch):
    system, spec, profile = _toy()
    _shrink_on_call(monkeypatch, 1)
    with pytest.raises(InfeasibleError) as e:
        synthesize_model_based(system, spec, profile)
    assert 'advice' in e.value.diagnostic


def test_initial_h_shape():
    _, spec, profile = _toy()
    spec = SafeSpec(spec.sigmas, spec.lam, spec.center, spec.theta0, init_h=parse_polynomial('x1^4 + x1^2 - 0.5', 1))
    h = default_initial_h(spec, profile)
    assert h.coefficient((0,)) == pytest.approx(profile.h_pin)
    assert h.coefficient((4,)) == pytest.approx(2.)
