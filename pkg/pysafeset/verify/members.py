import logging
from typing import List, Union

import numpy as np

from ..data.ellipsoid import ConsistencyEllipsoid
from ..data.system import PolySystem
from ..poly import MatrixPolynomial

log = logging.getLogger(__name__)


def member_from_Y(ell: ConsistencyEllipsoid, Y: np.ndarray) -> np.ndarray:
    """zeta_bar + P Y Q^1/2, a member of the ellipsoid whenever Y^T Y <= I."""
    return ell.zeta + ell.P @ np.asarray(Y, dtype=float) @ ell.Q_sqrt


def sample_ellipsoid_members(ell: ConsistencyEllipsoid, count: int, seed: int = 0) -> np.ndarray:
    """Random members [A B]^T of the ellipsoid.

    Y is drawn as U diag(s) V^T from the SVD of a Gaussian matrix with singular values s replaced by
    uniform values in [0, 1], so that Y^T Y <= I holds by construction.

    Returns:
        Array of shape (count, N, n).
    """
    if count < 1:
        raise ValueError('Need at least one member.')
    rng = np.random.default_rng(seed)
    members = np.empty((count, ell.N, ell.n))
    for k in range(count):
        U, S, Vt = np.linalg.svd(rng.standard_normal((ell.N, ell.n)), full_matrices=False)
        s = rng.uniform(0., 1., size=len(S))
        members[k] = member_from_Y(ell, (U * s) @ Vt)
    return members


class ParameterFamily:
    """Set of parameter matrices [A B]^T for the same regressors Z and W."""

    def __init__(self, Z: MatrixPolynomial, W: MatrixPolynomial, zetas: Union[np.ndarray, List[np.ndarray]],
                 name: str = None):
        self.Z = Z
        self.W = W
        self.zetas = np.asarray(zetas, dtype=float).reshape((-1, Z.rows + W.rows, Z.n))
        self.name = name

    @staticmethod
    def from_system(system: PolySystem) -> 'ParameterFamily':
        return ParameterFamily(system.Z, system.W, [system.zeta], name='ground-truth')

    @staticmethod
    def from_ellipsoid(ell: ConsistencyEllipsoid, Z: MatrixPolynomial, W: MatrixPolynomial, count: int = 50,
                       seed: int = 0) -> 'ParameterFamily':
        return ParameterFamily(Z, W, sample_ellipsoid_members(ell, count, seed), name='ellipsoid')

    def __len__(self):
        return len(self.zetas)

    def regressor(self, K: MatrixPolynomial, points: np.ndarray) -> np.ndarray:
        """Closed-loop regressor [Z(x); W(x) K(x)] at points of shape (P, n), giving shape (P, N)."""
        z = self.Z.evaluate_many(points)[:, :, 0]
        wk = np.einsum('pij,pj->pi', self.W.evaluate_many(points), K.evaluate_many(points)[:, :, 0])
        return np.hstack([z, wk])

    def closed_loop(self, K: MatrixPolynomial, points: np.ndarray) -> np.ndarray:
        """Closed-loop vector fields of all members at all points, shape (members, P, n)."""
        return np.einsum('pi,kij->kpj', self.regressor(K, points), self.zetas)

    def system(self, k: int = 0) -> PolySystem:
        """Member k as system."""
        N_A = self.Z.rows
        return PolySystem(self.zetas[k][:N_A].T, self.zetas[k][N_A:].T, self.Z, self.W)


__all__ = ['member_from_Y', 'sample_ellipsoid_members', 'ParameterFamily']
