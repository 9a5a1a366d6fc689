import logging
import os
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from .system import regressor_text
from ..poly import MatrixPolynomial, parse_column, parse_matrix
from ..utils.files import write_csv, write_json, read_json

log = logging.getLogger(__name__)


class DataSet:
    """Samples (x^j, u^j, x'^j) of an experiment together with the regressors Z and W and the noise bound.

    The regressors z^j = Z(x^j) and v^j = W(x^j) u^j are always computed from the stored states and
    inputs, never stored separately.
    """

    def __init__(self, x: np.ndarray, u: np.ndarray, xdot: np.ndarray, Z: MatrixPolynomial,
                 W: Optional[MatrixPolynomial], tau_s: float = 1., omega: float = 0., t: np.ndarray = None):
        """Creates a new data set.

        Args:
            x: States of shape (T, n).
            u: Inputs of shape (T, m).
            xdot: Measured derivatives of shape (T, n).
            Z: Regressor column of N_A polynomials.
            W: Input matrix polynomial of shape (N_B, m), None for autonomous data without inputs.
            tau_s: Sampling time.
            omega: Disturbance bound, |d|^2 <= omega.
            t: Sample times, defaults to j * tau_s.

        Raises:
            ValueError: If shapes do not match or there are no samples.
        """
        self.x = np.atleast_2d(np.asarray(x, dtype=float))
        m = 0 if W is None else W.cols
        self.u = np.asarray(u, dtype=float).reshape((self.x.shape[0], m))
        self.xdot = np.atleast_2d(np.asarray(xdot, dtype=float))
        self.Z = Z
        self.W = W
        self.tau_s = float(tau_s)
        self.omega = float(omega)

        # check
        T, n = self.x.shape
        if T < 1:
            raise ValueError('Data set needs at least one sample.')
        if n != Z.n or Z.cols != 1:
            raise ValueError('Z must be a column of polynomials in %d variables.' % n)
        if self.xdot.shape != (T, n):
            raise ValueError('Shapes of x %s and xdot %s do not match.' % (self.x.shape, self.xdot.shape))
        if self.omega < 0:
            raise ValueError('Disturbance bound must not be negative.')
        self.t = np.arange(T) * self.tau_s if t is None else np.asarray(t, dtype=float)

        # regressors
        self.z = Z.evaluate_many(self.x)[:, :, 0]
        if W is None:
            self.v = np.zeros((T, 0))
        else:
            self.v = np.einsum('kij,kj->ki', W.evaluate_many(self.x), self.u)

    @property
    def T(self) -> int:
        """Number of samples."""
        return self.x.shape[0]

    @property
    def n(self) -> int:
        return self.x.shape[1]

    @property
    def m(self) -> int:
        return self.u.shape[1]

    @property
    def N(self) -> int:
        """Number of regressors N_A + N_B."""
        return self.Z.rows + self.v.shape[1]

    @property
    def Z0(self) -> np.ndarray:
        """Regressors z^j as columns, shape (N_A, T)."""
        return self.z.T

    @property
    def V0(self) -> np.ndarray:
        """Regressors v^j as columns, shape (N_B, T)."""
        return self.v.T

    @property
    def X1(self) -> np.ndarray:
        """Derivatives x'^j as columns, shape (n, T)."""
        return self.xdot.T

    @property
    def Phi(self) -> np.ndarray:
        """Stacked data matrix [Z0; V0] of shape (N, T)."""
        return np.vstack([self.Z0, self.V0])

    def columns(self) -> Tuple[list, list, list]:
        """CSV column names for states, inputs and derivatives."""
        return (['x%d' % (i + 1) for i in range(self.n)], ['u%d' % (i + 1) for i in range(self.m)],
                ['xdot%d' % (i + 1) for i in range(self.n)])

    def save(self, filename: str):
        """Writes the samples to a CSV file and the metadata to a JSON sidecar with the same base name."""
        xc, uc, dc = self.columns()
        table = pd.DataFrame({'j': np.arange(self.T), 't': self.t})
        for names, values in ((xc, self.x), (uc, self.u), (dc, self.xdot)):
            for k, name in enumerate(names):
                table[name] = values[:, k]
        write_csv(filename, table)

        # sidecar
        Z, W = regressor_text(self.Z, self.W)
        write_json(sidecar_name(filename), {'n': self.n, 'm': self.m, 'tau_s': self.tau_s, 'omega': self.omega,
                                            'Z': Z, 'W': W})

    @staticmethod
    def load(filename: str) -> 'DataSet':
        """Reads a data set written by save().

        Raises:
            ValueError: If columns are missing.
        """
        log.info('Reading data set from %s...', filename)
        meta = read_json(sidecar_name(filename))
        n, m = int(meta['n']), int(meta['m'])
        table = pd.read_csv(filename, index_col=False, float_precision='round_trip')

        # check columns
        xc = ['x%d' % (i + 1) for i in range(n)]
        uc = ['u%d' % (i + 1) for i in range(m)]
        dc = ['xdot%d' % (i + 1) for i in range(n)]
        missing = [c for c in ['j', 't'] + xc + uc + dc if c not in table.columns]
        if missing:
            raise ValueError('Data set %s misses the columns %s.' % (filename, ', '.join(missing)))

        table = table.sort_values('j')
        return DataSet(table[xc].to_numpy(), table[uc].to_numpy(), table[dc].to_numpy(),
                       parse_column(meta['Z'], n), parse_matrix(meta['W'], n) if meta['W'] else None,
                       tau_s=meta['tau_s'], omega=meta['omega'], t=table['t'].to_numpy())

    def __repr__(self):
        return 'DataSet(T=%d, n=%d, m=%d, N=%d, omega=%g)' % (self.T, self.n, self.m, self.N, self.omega)


def sidecar_name(filename: str) -> str:
    """Name of the JSON sidecar for a CSV file."""
    return os.path.splitext(filename)[0] + '.json'


__all__ = ['DataSet', 'sidecar_name']
