import logging
import os

from .config import PipelineConfig
from .stages import run_all, cmd_baseline, read_result
from ..utils.files import read_json, write_json

log = logging.getLogger(__name__)

# two cars, friction per unit mass and safety distances
PLATOON = {'gamma1': 0.005, 'beta1': 0.1, 'alpha1': 0.02, 'gamma2': 0.005, 'beta2': 0.2, 'alpha2': 0.04,
           'tau_h': 0.2, 'd0': 5., 'd1': 10., 'v_max': 22.2, 'v_bar': 8.5, 'd_bar': 8.}


def platoon_config(T: int = 1000, disturbance: float = 1e-3) -> dict:
    """Two cars in a platoon, states are the velocities of front and rear car and their distance.

    The static friction gamma_k is compensated by a known feed-forward term, so the remaining dynamics are
    linear in the parameters with regressors Z = [x1, x2, x3, x1^2, x2^2] and W = I.

    Args:
        T: Number of samples.
        disturbance: Bound on |d|.
    """
    p = PLATOON
    v, d = p['v_bar'], p['d_bar']
    return {
        'system': {
            'A': [[-p['beta1'], 0., 0., -p['alpha1'], 0.],
                  [0., -p['beta2'], 0., 0., -p['alpha2']],
                  [1., -1., 0., 0., 0.]],
            'B': [[1., 0.], [0., 1.], [0., 0.]]
        },
        'monomials': {
            'Z': ['x1', 'x2', 'x3', 'x1^2', 'x2^2'],
            'W': [['1', '0'], ['0', '1']]
        },
        'experiment': {
            'T': T,
            'tau_s': 0.1,
            'x0': [v, v, d],
            # offsets keep x_bar at rest
            'input': {'class': 'pysafeset.data.SinusoidSignal', 'amplitude': 0.5,
                      'offset': [p['beta1'] * v + p['alpha1'] * v ** 2, p['beta2'] * v + p['alpha2'] * v ** 2]}
        },
        'noise': {'model': 'instantaneous', 'omega': disturbance ** 2},
        'safe_set': {
            'sigmas': ['%g + %g*x2 - x3' % (p['d0'], p['tau_h']), 'x3 - %g' % p['d1'], '-x1', 'x1 - %g' % p['v_max'],
                       '-x2', 'x2 - %g' % p['v_max']],
            'lambda': '0.02*(x1 - %g)^2 + 0.05*(x2 - %g)^2 + (x3 - %g)^2' % (v, v, d),
            'center': [v, v, d],
            'theta0': 0.01,
            # couples the gap with the velocity difference, so that dh never points along x3 alone
            'init_h': '0.05*(x1 - %g)^2 + 0.05*(x2 - %g)^2 + (x3 - %g + 0.1*(x1 - x2))^2 - 0.05' % (v, v, d)
        },
        'profile': {'deg_h': 4, 'deg_eta': 2, 'deg_s': 2, 'deg_varsigma': 2, 'deg_l': 2, 'deg_K': 2, 'eps': 0.01,
                    'h_pin': 90., 'tol_theta': 1e-3},
        'seeds': {'experiment': 0, 'verification': 0}
    }


def toy_config(T: int = 200, disturbance: float = 1e-3) -> dict:
    """Scalar system x' = x - 0.1 x^3 + u kept inside |x| <= 3."""
    return {
        'system': {'A': [[1., -0.1]], 'B': [[1.]]},
        'monomials': {'Z': ['x1', 'x1^3'], 'W': [['1']]},
        'experiment': {'T': T, 'tau_s': 0.05, 'x0': [0.],
                       'input': {'class': 'pysafeset.data.SinusoidSignal', 'amplitude': 1.}},
        'noise': {'model': 'instantaneous', 'omega': disturbance ** 2},
        'safe_set': {'sigmas': ['x1^2 - 9'], 'lambda': 'x1^2', 'center': [0.], 'theta0': 0.01},
        'profile': {'deg_h': 4, 'deg_eta': 2, 'deg_s': 2, 'deg_varsigma': 2, 'deg_l': 2, 'deg_K': 3, 'eps': 0.01,
                    'h_pin': -1., 'tol_theta': 1e-3, 'max_iter': 10},
        'seeds': {'experiment': 0, 'verification': 0}
    }


def cmd_demo_platoon(out: str, solver_tol: float = None, max_iter: int = None, config: PipelineConfig = None) -> bool:
    """Runs the data-driven chain and the model-based baseline on the platoon and writes comparison.json.

    Returns:
        Whether both results passed verification.
    """
    if config is None:
        config = PipelineConfig(platoon_config())
    config = config.validate().with_overrides(solver_tol, max_iter)

    # both syntheses
    data_passed = run_all(config, out)
    model_passed = cmd_baseline(config, out)

    # compare
    data, model = read_result(out), read_result(out, 'model_')
    comparison = {
        'data_driven': {'theta': data.theta, 'iterations': len(data.iterations), 'passed': data_passed,
                        'containment': read_json(os.path.join(out, 'report.json'))['containment']},
        'model_based': {'theta': model.theta, 'iterations': len(model.iterations), 'passed': model_passed,
                        'containment': read_json(os.path.join(out, 'model_report.json'))['containment']},
        'theta_gap': model.theta - data.theta
    }
    write_json(os.path.join(out, 'comparison.json'), comparison)
    log.info('Data-driven theta=%.6g, model-based theta=%.6g.', data.theta, model.theta)
    return data_passed and model_passed


__all__ = ['PLATOON', 'platoon_config', 'toy_config', 'cmd_demo_platoon']
