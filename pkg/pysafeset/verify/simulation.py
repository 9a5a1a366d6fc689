import logging
from typing import Sequence, Tuple

import numpy as np
import pandas as pd

from .checks import sobol_points, h_scale, project_to_level
from ..data.system import PolySystem
from ..poly import Polynomial, MatrixPolynomial
from ..utils.integrate import integrate

log = logging.getLogger(__name__)


class ClosedLoopRun:
    """Trajectories of the closed loop, states of shape (steps + 1, count, n) with h along them."""

    def __init__(self, t: np.ndarray, X: np.ndarray, H: np.ndarray, tol: float):
        self.t = t
        self.X = X
        self.H = H
        self.tol = tol

    @property
    def count(self) -> int:
        return self.X.shape[1]

    @property
    def blown_up(self) -> np.ndarray:
        """Mask of trajectories that diverged."""
        return np.any(~np.isfinite(self.X), axis=(0, 2))

    @property
    def entered(self) -> np.ndarray:
        """Mask of trajectories that reached {h <= 0}."""
        with np.errstate(invalid='ignore'):
            return np.any(self.H <= 0., axis=0)

    @property
    def escapes(self) -> np.ndarray:
        """Mask of trajectories that left {h <= 0} again after entering it, diverging counts as leaving."""
        with np.errstate(invalid='ignore'):
            inside = np.logical_or.accumulate(self.H <= 0., axis=0)
            outside = (self.H > self.tol) | ~np.isfinite(self.H)
        return np.any(inside & outside, axis=0)

    def to_table(self) -> pd.DataFrame:
        """Long table with columns traj_id, t, x1..xn, h."""
        steps, count, n = self.X.shape
        table = pd.DataFrame({'traj_id': np.repeat(np.arange(count), steps),
                              't': np.tile(self.t, count)})
        for i in range(n):
            table['x%d' % (i + 1)] = self.X[:, :, i].T.ravel()
        table['h'] = self.H.T.ravel()
        return table

    def to_dict(self) -> dict:
        return {'count': self.count, 'entered': int(np.sum(self.entered)), 'escapes': int(np.sum(self.escapes)),
                'blown_up': int(np.sum(self.blown_up)), 'tol': self.tol}


def simulate_closed_loop(system: PolySystem, K: MatrixPolynomial, x0: np.ndarray, horizon: float, dt: float,
                         h: Polynomial = None, tol: float = 0., sample_every: int = 1) -> ClosedLoopRun:
    """Simulates x' = f(x, K(x)) from all initial states at once with RK4.

    Diverging trajectories are continued as NaN instead of stopping the others.

    Args:
        system: Dynamics.
        K: Controller.
        x0: Initial states of shape (count, n).
        horizon: Simulated time.
        dt: Step size, at most a hundredth of the horizon.
        h: Set to track, zero along the trajectories if not given.
        tol: Value of h above which a trajectory counts as outside.
        sample_every: Keep every k-th step only.

    Raises:
        ValueError: If dt is too large.
    """
    if dt <= 0 or dt > 1e-2 * horizon:
        raise ValueError('Step size must be positive and at most a hundredth of the horizon.')
    x = np.atleast_2d(np.asarray(x0, dtype=float))
    steps = int(np.ceil(horizon / dt))

    def rhs(_, states):
        return system.rhs(states, K.evaluate_many(states)[:, :, 0])

    # integrate, NaN rows stay NaN
    t, X = [0.], [x.copy()]
    for k in range(steps):
        good = np.all(np.isfinite(x), axis=1)
        new = np.full_like(x, np.nan)
        if np.any(good):
            new[good] = integrate(rhs, k * dt, x[good], (k + 1) * dt, 1, raise_on_blow_up=False)
        x = new
        if (k + 1) % sample_every == 0 or k == steps - 1:
            t.append((k + 1) * dt)
            X.append(x.copy())
    X = np.array(X)

    # h along trajectories
    if h is None:
        H = np.zeros(X.shape[:2])
    else:
        flat = X.reshape((-1, X.shape[2]))
        values = np.full(len(flat), np.nan)
        good = np.all(np.isfinite(flat), axis=1)
        values[good] = h.evaluate_many(flat[good])
        H = values.reshape(X.shape[:2])
    run = ClosedLoopRun(np.array(t), X, H, tol)
    log.info('Simulated %d trajectories over %g: %d escape(s), %d blow-up(s).', run.count, horizon,
             int(np.sum(run.escapes)), int(np.sum(run.blown_up)))
    return run


def sample_initial_states(h: Polynomial, box: np.ndarray, count: int, seed: int = 0,
                          levels: Tuple[float, float] = (0., 0.05)) -> np.ndarray:
    """Initial states just outside {h <= 0}, with h between levels[0] and levels[1] times max |h| on the box.

    Raises:
        ValueError: If not enough states could be found.
    """
    box = np.asarray(box, dtype=float)
    scale = h_scale(h, box, seed=seed)
    rng = np.random.default_rng(seed)
    found = []
    for attempt in range(8):
        points = sobol_points(box, 4 * count, seed + attempt)
        target = rng.uniform(levels[0], levels[1], size=len(points)) * scale
        x = project_to_level(h, points, target)
        with np.errstate(invalid='ignore'):
            ok = np.all(np.isfinite(x), axis=1)
            ok &= np.all((x >= box[:, 0]) & (x <= box[:, 1]), axis=1)
            values = h.evaluate_many(np.nan_to_num(x))
            ok &= (values > 0.) & (np.abs(values - target) <= 1e-6 * scale)
        found.extend(x[ok])
        if len(found) >= count:
            return np.array(found[:count])
    raise ValueError('Found only %d of %d initial states near the boundary of h.' % (len(found), count))


def level_grid(h: Polynomial, lam: Polynomial, sigmas: Sequence[Polynomial], box: np.ndarray,
               resolution: int = 50) -> pd.DataFrame:
    """h, lambda and max sigma_j on a regular grid, columns x1..xn, h, lambda, max_sigma."""
    axes = [np.linspace(lo, hi, resolution) for lo, hi in np.asarray(box, dtype=float)]
    points = np.stack([a.ravel() for a in np.meshgrid(*axes, indexing='ij')], axis=1)
    table = pd.DataFrame(points, columns=['x%d' % (i + 1) for i in range(points.shape[1])])
    table['h'] = h.evaluate_many(points)
    table['lambda'] = lam.evaluate_many(points)
    table['max_sigma'] = np.max(np.array([s.evaluate_many(points) for s in sigmas]), axis=0)
    return table


__all__ = ['ClosedLoopRun', 'simulate_closed_loop', 'sample_initial_states', 'level_grid']
