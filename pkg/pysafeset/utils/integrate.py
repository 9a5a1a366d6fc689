import logging
from typing import Callable

import numpy as np

from ..exceptions import StateBlowUpError

log = logging.getLogger(__name__)

# states with a larger norm count as diverged
BLOW_UP = 1e9


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, x: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step. x may hold a single state or a batch of shape (N, n)."""
    k1 = f(t, x)
    k2 = f(t + h / 2., x + h / 2. * k1)
    k3 = f(t + h / 2., x + h / 2. * k2)
    k4 = f(t + h, x + h * k3)
    return x + h / 6. * (k1 + 2. * k2 + 2. * k3 + k4)


def integrate(f: Callable[[float, np.ndarray], np.ndarray], t0: float, x0: np.ndarray, t1: float,
              steps: int, raise_on_blow_up: bool = True) -> np.ndarray:
    """Integrates x' = f(t, x) from t0 to t1 with a fixed number of RK4 steps.

    Args:
        f: Right hand side.
        t0: Start time.
        x0: Initial state(s).
        t1: End time.
        steps: Number of steps.
        raise_on_blow_up: Raise StateBlowUpError if a state diverges, otherwise the diverged states are
            returned as NaN.

    Returns:
        State(s) at t1.

    Raises:
        StateBlowUpError: If the norm of a state exceeds BLOW_UP.
    """
    if steps < 1:
        raise ValueError('Need at least one integration step.')
    h = (t1 - t0) / steps
    x = np.array(x0, dtype=float)
    for k in range(steps):
        t = t0 + k * h
        with np.errstate(over='ignore', invalid='ignore'):
            x = rk4_step(f, t, x, h)

        # diverged?
        norm = np.linalg.norm(np.atleast_2d(x), axis=1)
        bad = ~np.isfinite(norm) | (norm > BLOW_UP)
        if np.any(bad):
            if raise_on_blow_up:
                raise StateBlowUpError(t + h)
            x = np.where(bad[:, None], np.nan, np.atleast_2d(x)).reshape(x.shape)
    return x


__all__ = ['rk4_step', 'integrate', 'BLOW_UP']
