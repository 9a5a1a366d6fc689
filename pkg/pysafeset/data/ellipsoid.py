import logging
from typing import Tuple, Union

import numpy as np

from .dataset import DataSet
from ..exceptions import InfeasibleError, NumericalError, RankDeficientError
from ..sdp import SdpSolver, solve_logdet

log = logging.getLogger(__name__)

# smallest eigenvalue of P accepted as positive definite
MIN_EIG = 1e-9


def psd_sqrt(M: np.ndarray) -> np.ndarray:
    """Symmetric square root of a symmetric matrix, negative eigenvalues clamped to zero."""
    w, V = np.linalg.eigh((M + M.T) / 2.)
    return (V * np.sqrt(np.clip(w, 0., None))) @ V.T


def inv_sqrt(M: np.ndarray) -> np.ndarray:
    """Symmetric inverse square root of a positive definite matrix."""
    w, V = np.linalg.eigh((M + M.T) / 2.)
    if w[0] <= 0.:
        raise ValueError('Matrix is not positive definite.')
    return (V / np.sqrt(w)) @ V.T


class ConsistencyEllipsoid:
    """Matrix ellipsoid {zeta: (zeta - zeta_bar)^T P^-2 (zeta - zeta_bar) <= Q} of parameters [A B]^T.

    Every parameter matrix consistent with the data and the disturbance bound lies inside.
    """

    def __init__(self, zeta: np.ndarray, P: np.ndarray, Q: np.ndarray, provenance: str = 'instantaneous'):
        """Creates a new ellipsoid.

        Args:
            zeta: Center zeta_bar of shape (N, n).
            P: Symmetric positive definite matrix of shape (N, N).
            Q: Symmetric positive semidefinite matrix of shape (n, n).
            provenance: Disturbance model, either 'instantaneous' or 'energy'.

        Raises:
            ValueError: If shapes are wrong or P, Q are not definite.
        """
        self.zeta = np.atleast_2d(np.asarray(zeta, dtype=float))
        self.P = np.atleast_2d(np.asarray(P, dtype=float))
        self.Q = np.atleast_2d(np.asarray(Q, dtype=float))
        self.provenance = provenance

        # check
        N, n = self.zeta.shape
        if self.P.shape != (N, N) or self.Q.shape != (n, n):
            raise ValueError('Shapes of zeta %s, P %s and Q %s do not match.' % (self.zeta.shape, self.P.shape,
                                                                               self.Q.shape))
        if provenance not in ('instantaneous', 'energy'):
            raise ValueError('Unknown provenance "%s".' % provenance)
        if np.linalg.eigvalsh((self.P + self.P.T) / 2.)[0] <= MIN_EIG:
            raise ValueError('P must be positive definite.')
        if np.linalg.eigvalsh((self.Q + self.Q.T) / 2.)[0] < -1e-9:
            raise ValueError('Q must be positive semidefinite.')

    @property
    def N(self) -> int:
        """Number of regressors."""
        return self.zeta.shape[0]

    @property
    def n(self) -> int:
        """State dimension."""
        return self.zeta.shape[1]

    @property
    def Q_sqrt(self) -> np.ndarray:
        return psd_sqrt(self.Q)

    @property
    def P_inv_sq(self) -> np.ndarray:
        """P^-2."""
        Pinv = np.linalg.inv(self.P)
        return Pinv @ Pinv

    def excess(self, zeta: np.ndarray) -> float:
        """Largest eigenvalue of (zeta - zeta_bar)^T P^-2 (zeta - zeta_bar) - Q, non-positive for members."""
        D = np.asarray(zeta, dtype=float) - self.zeta
        M = D.T @ self.P_inv_sq @ D - self.Q
        return float(np.linalg.eigvalsh((M + M.T) / 2.)[-1])

    def contains(self, zeta: np.ndarray, tol: float = 1e-6) -> bool:
        """Whether parameters [A B]^T of shape (N, n) lie inside, up to tol."""
        return self.excess(zeta) <= tol

    def to_dict(self) -> dict:
        return {
            'zeta_bar': self.zeta.tolist(),
            'P_bar': self.P.tolist(),
            'Q_bar': self.Q.tolist(),
            'provenance': self.provenance
        }

    @staticmethod
    def from_dict(data: dict) -> 'ConsistencyEllipsoid':
        return ConsistencyEllipsoid(data['zeta_bar'], data['P_bar'], data['Q_bar'], data['provenance'])

    def __repr__(self):
        return 'ConsistencyEllipsoid(N=%d, n=%d, %s)' % (self.N, self.n, self.provenance)


def consistency_params(ds: DataSet) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Parameters of the per-sample consistency sets.

    With phi_j = [z^j; v^j]: c_j = -omega I + x'^j x'^j^T, b_j = -phi_j x'^j^T and a_j = phi_j phi_j^T.

    Returns:
        Arrays c, b, a of shapes (T, n, n), (T, N, n) and (T, N, N).
    """
    phi = np.hstack([ds.z, ds.v])
    c = -ds.omega * np.eye(ds.n)[None, :, :] + np.einsum('ji,jk->jik', ds.xdot, ds.xdot)
    b = -np.einsum('ji,jk->jik', phi, ds.xdot)
    a = np.einsum('ji,jk->jik', phi, phi)
    return c, b, a


def energy_params(ds: DataSet) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """A_e = Phi Phi^T, B_e = -Phi X1^T and C_e = -T omega I + X1 X1^T."""
    Phi, X1 = ds.Phi, ds.X1
    return Phi @ Phi.T, -Phi @ X1.T, -ds.T * ds.omega * np.eye(ds.n) + X1 @ X1.T


def data_rank(ds: DataSet) -> int:
    """Numerical row rank of [Z0; V0], singular values below sigma_max * 1e-10 count as zero."""
    s = np.linalg.svd(ds.Phi, compute_uv=False)
    if len(s) == 0 or s[0] == 0.:
        return 0
    return int(np.sum(s > s[0] * 1e-10))


def rank_gate(ds: DataSet) -> Tuple[bool, int]:
    """Checks whether [Z0; V0] has full row rank.

    Returns:
        Whether the rank is full and the rank found.
    """
    rank = data_rank(ds)
    ok = rank == ds.N
    if not ok:
        log.warning('Data matrix has rank %d, but %d is required.', rank, ds.N)
    return ok, rank


def least_squares(ds: DataSet) -> np.ndarray:
    """Least-squares estimate of [A B]^T from the data, shape (N, n)."""
    return np.linalg.lstsq(ds.Phi.T, ds.X1.T, rcond=None)[0]


def overapprox_instantaneous(params: Tuple[np.ndarray, np.ndarray, np.ndarray],
                             solver: Union[SdpSolver, dict] = None, tol: float = 1e-7) -> ConsistencyEllipsoid:
    """Smallest matrix ellipsoid containing all parameters consistent with an instantaneous bound.

    Args:
        params: Output of consistency_params.
        solver: SDP solver.
        tol: Tolerance for the containment witness, the largest eigenvalue of the LMI in normalized
            coordinates relative to 1 + its largest entry.

    Returns:
        Ellipsoid with zeta_bar = -A^-1 B, P_bar = A^-1/2 and Q_bar = I.

    Raises:
        InfeasibleError: If the program is infeasible, i.e. data is not rich enough.
        NumericalError: If the solver fails or the witness does not hold.
    """
    c, b, a = (np.asarray(p, dtype=float) for p in params)
    log.info('Fitting ellipsoid to %d instantaneous consistency sets...', len(c))
    A, B, tau, solution = solve_logdet(c, b, a, solver=solver)

    # check witness
    worst = solution.residuals['containment']
    if worst > tol:
        raise NumericalError('Containment witness violated by %g.' % worst, residuals={'containment': worst})

    # ellipsoid
    zeta = -np.linalg.solve(A, B)
    ell = ConsistencyEllipsoid(zeta, inv_sqrt(A), np.eye(c.shape[1]), 'instantaneous')
    log.info('Found ellipsoid with log det A=%.4g and max tau=%.3g.', np.linalg.slogdet(A)[1], np.max(tau))
    return ell


def overapprox_energy(ds: DataSet, tol: float = 1e-9) -> ConsistencyEllipsoid:
    """Closed-form ellipsoid of all parameters consistent with the energy bound sum_j |d^j|^2 <= T omega.

    Q_bar = B_e^T A_e^-1 B_e - C_e is computed as T omega I - R R^T with the least-squares residual R,
    which is the same matrix with less cancellation.

    Raises:
        RankDeficientError: If [Z0; V0] does not have full row rank.
        InfeasibleError: If the data violates the energy bound.
    """
    ok, rank = rank_gate(ds)
    if not ok:
        raise RankDeficientError(rank, ds.N)
    log.info('Computing ellipsoid for energy bound from %d samples...', ds.T)

    # center and shape
    A_e, B_e, _ = energy_params(ds)
    zeta = -np.linalg.solve(A_e, B_e)
    R = ds.X1 - zeta.T @ ds.Phi
    Q = ds.T * ds.omega * np.eye(ds.n) - R @ R.T
    Q = (Q + Q.T) / 2.

    # check Q
    min_eig = float(np.linalg.eigvalsh(Q)[0])
    if min_eig < -tol:
        raise InfeasibleError('Data is inconsistent with the energy bound (min eigenvalue of Q is %g), '
                              'increase omega.' % min_eig, diagnostic={'q_min_eig': min_eig})
    return ConsistencyEllipsoid(zeta, inv_sqrt(A_e), Q, 'energy')


def overapprox(ds: DataSet, model: str = 'instantaneous', solver: Union[SdpSolver, dict] = None) \
        -> ConsistencyEllipsoid:
    """Over-approximation for the given disturbance model, 'instantaneous' or 'energy'.

    Raises:
        RankDeficientError: If the data matrix does not have full row rank.
    """
    if model == 'energy':
        return overapprox_energy(ds)
    if model != 'instantaneous':
        raise ValueError('Unknown disturbance model "%s".' % model)
    ok, rank = rank_gate(ds)
    if not ok:
        raise RankDeficientError(rank, ds.N)
    ell = overapprox_instantaneous(consistency_params(ds), solver=solver)
    log.info('Distance of ellipsoid center to least-squares estimate: %.3g.',
             np.linalg.norm(ell.zeta - least_squares(ds)))
    return ell


__all__ = ['ConsistencyEllipsoid', 'consistency_params', 'energy_params', 'data_rank', 'rank_gate',
           'least_squares', 'overapprox_instantaneous', 'overapprox_energy', 'overapprox',
           'psd_sqrt', 'inv_sqrt']
