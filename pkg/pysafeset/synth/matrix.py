import logging

import numpy as np

from ..data.ellipsoid import ConsistencyEllipsoid
from ..poly import Polynomial, MatrixPolynomial

log = logging.getLogger(__name__)


def closed_loop_regressor(Z: MatrixPolynomial, W: MatrixPolynomial, K: MatrixPolynomial) -> MatrixPolynomial:
    """F = [Z; W K], so that the closed loop is x' = [A B] F."""
    if W.cols != K.rows or K.cols != 1:
        raise ValueError('Controller has shape %s, expected (%d, 1).' % (K.shape, W.cols))
    return MatrixPolynomial.block([[Z], [W @ K]])


def build_H(h: Polynomial, K: MatrixPolynomial, l: Polynomial, eta: Polynomial, eps: float,
            ell: ConsistencyEllipsoid, Z: MatrixPolynomial, W: MatrixPolynomial) -> MatrixPolynomial:
    """Matrix condition for robust invariance of {h <= 0} for all parameters in the ellipsoid.

    With F = [Z; W K] and dh the gradient of h:

        H = [[l h + eps + dh zeta^T F,  (eta P F)^T,  dh Q^1/2],
             [eta P F,                  -2 eta I,     0       ],
             [Q^1/2 dh^T,               0,            -2 eta I]]

    H <= 0 everywhere implies dh (A Z + B W K) <= -eps on the boundary of {h <= 0} for every [A B]^T in the
    ellipsoid. Coefficients of h, K, l and eta may be affine in decision variables, as long as no product of
    two unknowns occurs.

    Returns:
        Symmetric matrix polynomial of size 1 + N + n.

    Raises:
        ValueError: If dimensions of ellipsoid, Z and W do not match.
    """
    n = h.n
    N = Z.rows + W.rows
    if ell.N != N or ell.n != n:
        raise ValueError('Ellipsoid has shape (%d, %d), but Z, W and h need (%d, %d).' % (ell.N, ell.n, N, n))

    # pieces
    F = closed_loop_regressor(Z, W, K)
    dh = h.gradient()
    a11 = l * h + eps + (dh @ ell.zeta.T @ F)[0, 0]
    a21 = (ell.P @ F) * eta
    a31 = ell.Q_sqrt @ dh.T
    a22 = MatrixPolynomial.identity(n, N) * (eta * -2.)
    a33 = MatrixPolynomial.identity(n, n) * (eta * -2.)

    # assemble
    return MatrixPolynomial.block([
        [MatrixPolynomial([[a11]]), a21.T, a31.T],
        [a21, a22, None],
        [a31, None, a33]
    ])


def model_based_condition(h: Polynomial, K: MatrixPolynomial, l: Polynomial, eps: float, A: np.ndarray,
                          B: np.ndarray, Z: MatrixPolynomial, W: MatrixPolynomial) -> Polynomial:
    """l h + eps + dh (A Z + B W K), non-positive everywhere for a known system."""
    F = closed_loop_regressor(Z, W, K)
    AB = np.hstack([np.atleast_2d(A), np.atleast_2d(B)])
    return l * h + eps + (h.gradient() @ AB @ F)[0, 0]


__all__ = ['build_H', 'model_based_condition', 'closed_loop_regressor']
