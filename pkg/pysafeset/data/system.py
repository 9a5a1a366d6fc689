import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..poly import MatrixPolynomial, parse_column, parse_matrix, polynomial_expression

log = logging.getLogger(__name__)


class PolySystem:
    """Input-affine polynomial system x' = A Z(x) + B W(x) u.

    This is the ground truth of an experiment. It is used for generating data, for the model-based
    baseline and for verification, but never by the data-driven synthesis.
    """

    def __init__(self, A, B, Z: MatrixPolynomial, W: MatrixPolynomial):
        """Creates a new system.

        Args:
            A: Matrix of shape (n, N_A).
            B: Matrix of shape (n, N_B).
            Z: Regressor column of N_A polynomials in n variables.
            W: Input matrix polynomial of shape (N_B, m).

        Raises:
            ValueError: If dimensions are inconsistent.
        """
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.B = np.atleast_2d(np.asarray(B, dtype=float))
        self.Z = Z
        self.W = W

        # check dimensions
        if Z.cols != 1:
            raise ValueError('Z must be a column.')
        if Z.n != W.n:
            raise ValueError('Z and W must use the same variables.')
        if self.A.shape != (Z.n, Z.rows):
            raise ValueError('A has shape %s, expected %s.' % (self.A.shape, (Z.n, Z.rows)))
        if self.B.shape != (Z.n, W.rows):
            raise ValueError('B has shape %s, expected %s.' % (self.B.shape, (Z.n, W.rows)))

    @property
    def n(self) -> int:
        """State dimension."""
        return self.Z.n

    @property
    def m(self) -> int:
        """Input dimension."""
        return self.W.cols

    @property
    def N_A(self) -> int:
        return self.Z.rows

    @property
    def N_B(self) -> int:
        return self.W.rows

    @property
    def zeta(self) -> np.ndarray:
        """True parameters [A B]^T of shape (N_A + N_B, n)."""
        return np.vstack([self.A.T, self.B.T])

    def regressors(self, x: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Regressors z = Z(x) and v = W(x) u for a batch of states and inputs of shape (N, n) and (N, m)."""
        x = np.atleast_2d(x)
        u = np.atleast_2d(u)
        z = self.Z.evaluate_many(x)[:, :, 0]
        v = np.einsum('kij,kj->ki', self.W.evaluate_many(x), u)
        return z, v

    def rhs(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        """Right hand side for a single state or a batch of states."""
        single = np.ndim(x) == 1
        z, v = self.regressors(x, u)
        dx = z @ self.A.T + v @ self.B.T
        return dx[0] if single else dx

    def to_dict(self) -> dict:
        Z, W = regressor_text(self.Z, self.W)
        return {'A': self.A.tolist(), 'B': self.B.tolist(), 'Z': Z, 'W': W}

    @staticmethod
    def from_dict(cfg: dict) -> 'PolySystem':
        """Creates a system from config with keys A, B, Z (list of strings) and W (list of lists)."""
        A = np.atleast_2d(np.asarray(cfg['A'], dtype=float))
        n = A.shape[0]
        return PolySystem(A, cfg['B'], parse_column(cfg['Z'], n), parse_matrix(cfg['W'], n))


def regressor_text(Z: MatrixPolynomial, W: Optional[MatrixPolynomial]) \
        -> Tuple[Sequence[str], Sequence[Sequence[str]]]:
    """Z and W in config form, W may be None for autonomous systems."""
    if W is None:
        return [polynomial_expression(Z[i, 0]) for i in range(Z.rows)], []
    return ([polynomial_expression(Z[i, 0]) for i in range(Z.rows)],
            [[polynomial_expression(W[i, j]) for j in range(W.cols)] for i in range(W.rows)])


__all__ = ['PolySystem', 'regressor_text']
