import logging
from typing import List, Union

import numpy as np

from .base import InputSignal

log = logging.getLogger(__name__)


def _per_channel(value: Union[float, List[float]], m: int, name: str) -> np.ndarray:
    value = np.atleast_1d(np.asarray(value, dtype=float))
    if len(value) == 1:
        return np.repeat(value, m)
    if len(value) != m:
        raise ValueError('Need one %s or one per channel, got %d for %d channels.' % (name, len(value), m))
    return value


class SinusoidSignal(InputSignal):
    """Sum of sinusoids with random frequencies and phases plus a constant offset, per channel.

    Channel i gives u_i(t) = offset_i + amplitude_i / n_sines * sum_k sin(2 pi f_ik t + phi_ik).
    """

    def __init__(self, m: int = 1, amplitude: Union[float, List[float]] = 1., offset: Union[float, List[float]] = 0.,
                 n_sines: int = 5, f_min: float = 0.01, f_max: float = 1., seed: int = 0, *args, **kwargs):
        """Creates a new signal.

        Args:
            m: Number of channels.
            amplitude: Amplitude, either one for all channels or one per channel.
            offset: Constant offset, either one for all channels or one per channel.
            n_sines: Number of sinusoids per channel.
            f_min: Minimum frequency in Hz.
            f_max: Maximum frequency in Hz.
            seed: Seed for frequencies and phases.
        """
        InputSignal.__init__(self, m, *args, **kwargs)
        if n_sines < 1:
            raise ValueError('Need at least one sinusoid.')
        if f_min <= 0 or f_max < f_min:
            raise ValueError('Need 0 < f_min <= f_max.')
        self._amplitude = _per_channel(amplitude, m, 'amplitude')
        self._offset = _per_channel(offset, m, 'offset')
        self._n_sines = n_sines

        # draw frequencies and phases
        rng = np.random.default_rng(seed)
        self._freq = rng.uniform(f_min, f_max, size=(m, n_sines))
        self._phase = rng.uniform(0., 2. * np.pi, size=(m, n_sines))

    def __call__(self, t: float) -> np.ndarray:
        waves = np.sin(2. * np.pi * self._freq * t + self._phase).sum(axis=1)
        return self._offset + self._amplitude / self._n_sines * waves


class ConstantSignal(InputSignal):
    """Constant input, e.g. zero for autonomous experiments."""

    def __init__(self, m: int = 1, value: Union[float, List[float]] = 0., *args, **kwargs):
        InputSignal.__init__(self, m, *args, **kwargs)
        self._value = _per_channel(value, m, 'value')

    def __call__(self, t: float) -> np.ndarray:
        return self._value.copy()


__all__ = ['SinusoidSignal', 'ConstantSignal']
