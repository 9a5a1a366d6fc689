import numpy as np


class InputSignal:
    """Input applied during an experiment, u(t) with m channels."""

    def __init__(self, m: int = 1, *args, **kwargs):
        if m < 1:
            raise ValueError('Need at least one input channel.')
        self.m = m

    def __call__(self, t: float) -> np.ndarray:
        """Input at time t.

        Args:
            t: Time in seconds.

        Returns:
            Array of shape (m,).
        """
        raise NotImplementedError


__all__ = ['InputSignal']
