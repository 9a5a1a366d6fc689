import logging
from typing import Sequence, Union

import numpy as np

from .dataset import DataSet
from .signals import InputSignal
from .system import PolySystem
from ..object import get_object
from ..utils.integrate import integrate

log = logging.getLogger(__name__)


def sample_ball(rng: np.random.Generator, n: int, radius: float) -> np.ndarray:
    """Uniform sample from the closed ball of given radius in R^n."""
    if radius <= 0.:
        return np.zeros(n)
    direction = rng.standard_normal(n)
    direction /= np.linalg.norm(direction)
    return radius * rng.uniform() ** (1. / n) * direction


def simulate_experiment(system: PolySystem, signal: Union[InputSignal, dict], x0: Sequence[float], tau_s: float,
                        T: int, omega: float = 0., seed: int = 0, substeps: int = 20) -> DataSet:
    """Runs an experiment x' = A Z(x) + B W(x) u + d and records T samples.

    The disturbance d^j is drawn uniformly from the ball |d|^2 <= omega and held constant over
    [j tau_s, (j+1) tau_s). At each sample time the exact right hand side including d^j is recorded
    as derivative.

    Args:
        system: Ground truth system.
        signal: Input signal or its config.
        x0: Initial state.
        tau_s: Sampling time.
        T: Number of samples.
        omega: Disturbance bound.
        seed: Seed for the disturbance.
        substeps: RK4 steps per sampling interval, at least 20.

    Returns:
        Recorded data set.

    Raises:
        ValueError: If arguments are invalid.
        StateBlowUpError: If the state diverges.
    """

    # check
    if tau_s <= 0:
        raise ValueError('Sampling time must be positive.')
    if T < 1:
        raise ValueError('Need at least one sample.')
    if omega < 0:
        raise ValueError('Disturbance bound must not be negative.')
    substeps = max(int(substeps), 20)
    if isinstance(signal, dict):
        signal = dict(signal)
        signal.setdefault('m', system.m)
    signal = get_object(signal, InputSignal)
    if signal.m != system.m:
        raise ValueError('Input signal has %d channels, system needs %d.' % (signal.m, system.m))
    x = np.asarray(x0, dtype=float)
    if x.shape != (system.n,):
        raise ValueError('Initial state must have dimension %d.' % system.n)
    log.info('Simulating experiment with T=%d, tau_s=%g, omega=%g, seed=%d...', T, tau_s, omega, seed)

    # run it
    rng = np.random.default_rng(seed)
    radius = np.sqrt(omega)
    xs, us, dxs = np.empty((T, system.n)), np.empty((T, system.m)), np.empty((T, system.n))
    for j in range(T):
        t = j * tau_s
        d = sample_ball(rng, system.n, radius)

        # record sample
        u = signal(t)
        xs[j], us[j] = x, u
        dxs[j] = system.rhs(x, u) + d

        # integrate to next sample
        if j < T - 1:
            x = integrate(lambda s, y: system.rhs(y, signal(s)) + d, t, x, t + tau_s, substeps)

    return DataSet(xs, us, dxs, system.Z, system.W, tau_s=tau_s, omega=omega)


__all__ = ['simulate_experiment', 'sample_ball']
