import logging
from typing import List, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .problem import SdpProblem
from .solution import SdpSolution, SdpStatus
from ..exceptions import InfeasibleError, NumericalError

log = logging.getLogger(__name__)


def logdet_epigraph(problem: SdpProblem) -> Tuple[SdpProblem, int]:
    """Replaces the log-det objective of a pure LMI problem by a linear one.

    For the LMI block A of size s, a lower triangular L is introduced with [[A, L], [L^T, diag(L)]] >= 0,
    which gives det(A)^(1/s) >= geometric mean of diag(L). The geometric mean is bounded from below by t
    through a tower of 2x2 blocks [[x, w], [w, y]] >= 0, i.e. w <= sqrt(x y), with the leaves padded by t
    to the next power of two. Maximizing t maximizes log det A.

    Returns:
        New problem and index of t.

    Raises:
        ValueError: If there is no log-det block, Gram blocks remain, or a linear objective is set, too.
    """
    if problem.logdet is None:
        raise ValueError('Problem has no log-det objective.')
    if problem.grams:
        raise ValueError('Gram blocks must be lowered first.')
    if problem.cost:
        raise ValueError('Log-det combined with a linear objective is not supported in epigraph form.')

    # copy problem without log-det
    new = SdpProblem()
    new.add_variables(problem.n_vars)
    for lmi in problem.lmis:
        new.add_lmi(lmi.F0, lmi.terms, lmi.name)
    for row, rhs in problem.equalities:
        new.add_equality(row, rhs)
    A = problem.lmis[problem.logdet[1]]
    s = A.size

    # lower triangular factor
    L = {}
    for a in range(s):
        for b in range(a + 1):
            L[a, b] = new.add_variables(1)[0]

    # [[A, L], [L^T, diag(L)]] >= 0
    F0 = np.zeros((2 * s, 2 * s))
    F0[:s, :s] = A.F0
    terms = {}
    for var, F in A.terms.items():
        F = F.tocoo()
        terms[var] = sp.coo_matrix((F.data, (F.row, F.col)), shape=(2 * s, 2 * s))
    for (a, b), var in L.items():
        rows, cols = [a, s + b], [s + b, a]
        if a == b:
            rows.append(s + a)
            cols.append(s + a)
        terms[var] = sp.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(2 * s, 2 * s))
    new.add_lmi(F0, terms, 'logdet-factor')

    # geometric mean tower
    t = new.add_variables(1)[0]
    depth = int(np.ceil(np.log2(s))) if s > 1 else 0
    level = [L[a, a] for a in range(s)] + [t] * (2 ** depth - s)
    while len(level) > 1:
        next_level = []
        for x, y in zip(level[::2], level[1::2]):
            w = new.add_variables(1)[0]
            block = {}
            block[x] = block.get(x, np.zeros((2, 2))) + np.array([[1., 0.], [0., 0.]])
            block[y] = block.get(y, np.zeros((2, 2))) + np.array([[0., 0.], [0., 1.]])
            block[w] = np.array([[0., 1.], [1., 0.]])
            new.add_lmi(np.zeros((2, 2)), block, 'geomean')
            next_level.append(w)
        level = next_level

    # t <= root
    new.add_nonnegative({level[0]: 1., t: -1.}, name='geomean-root')
    new.set_objective({t: 1.})
    log.debug('Log-det epigraph of block size %d uses tower depth %d.', s, depth)
    return new, t




def containment_matrix(A: np.ndarray, B: np.ndarray, tau: np.ndarray, c, b, a) -> np.ndarray:
    """Left hand side of the containment LMI, negative semidefinite for a valid over-approximation."""
    c, b, a = (np.asarray(p, dtype=float) for p in (c, b, a))
    n, N = c.shape[1], a.shape[1]
    Sc, Sb, Sa = np.einsum('j,jik->ik', tau, c), np.einsum('j,jik->ik', tau, b), np.einsum('j,jik->ik', tau, a)
    M = np.zeros((n + 2 * N, n + 2 * N))
    M[:n, :n] = -np.eye(n) - Sc
    M[n:n + N, :n] = B - Sb
    M[:n, n:n + N] = (B - Sb).T
    M[n:n + N, n:n + N] = A - Sa
    M[n + N:, :n] = B
    M[:n, n + N:] = B.T
    M[n + N:, n + N:] = -A
    return M


class LogdetScaling:
    """Change of parameters zeta = zeta0 + diag(s) delta that brings the log-det program to unit scale.

    The consistency sets are slabs of width about sqrt(omega) around the least-squares estimate zeta0, so for
    small omega the optimal A grows like 1/omega. In delta the slabs have unit width and every regressor row
    has unit mean square. The per-sample forms transform as q(zeta) = kappa q~(delta) and the ellipsoid form
    is invariant, so A, B and tau map back exactly.
    """

    def __init__(self, zeta0: np.ndarray, s: np.ndarray, kappa: float):
        """Creates a new scaling.

        Args:
            zeta0: Shift of shape (N, n).
            s: Diagonal of the row scaling, shape (N,).
            kappa: Scale of the data parameters.
        """
        self.zeta0 = np.asarray(zeta0, dtype=float)
        self.s = np.asarray(s, dtype=float)
        self.kappa = float(kappa)

    @staticmethod
    def from_params(c, b, a) -> 'LogdetScaling':
        """Scaling from the data parameters, centered at the least-squares estimate."""
        c, b, a = (np.asarray(p, dtype=float) for p in (c, b, a))
        N = a.shape[1]

        # least squares, sum_j a_j zeta0 = -sum_j b_j
        zeta0 = np.linalg.lstsq(a.sum(axis=0), -b.sum(axis=0), rcond=None)[0]

        # scale of the shifted c_j, i.e. of omega I - r_j r_j^T with least-squares residuals r_j
        c0 = LogdetScaling(zeta0, np.ones(N), 1.)._shifted_c(c, b, a)
        kappa = float(np.max(np.linalg.norm(c0, ord=2, axis=(1, 2))))
        if not np.isfinite(kappa) or kappa <= 0.:
            kappa = 1.

        # rms of regressor rows
        mean_sq = np.mean(np.diagonal(a, axis1=1, axis2=2), axis=0)
        d = np.ones(N)
        d[mean_sq > 0.] = 1. / np.sqrt(mean_sq[mean_sq > 0.])
        return LogdetScaling(zeta0, np.sqrt(kappa) * d, kappa)

    def _shifted_c(self, c, b, a) -> np.ndarray:
        """c_j + zeta0^T b_j + b_j^T zeta0 + zeta0^T a_j zeta0."""
        zb = np.einsum('pi,jpk->jik', self.zeta0, b)
        return c + zb + np.transpose(zb, (0, 2, 1)) + np.einsum('pi,jpq,qk->jik', self.zeta0, a, self.zeta0)

    def apply(self, c, b, a) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Data parameters in delta."""
        c, b, a = (np.asarray(p, dtype=float) for p in (c, b, a))
        s = self.s
        c2 = self._shifted_c(c, b, a) / self.kappa
        b2 = (b + np.einsum('jpq,qk->jpk', a, self.zeta0)) * s[None, :, None] / self.kappa
        a2 = a * s[None, :, None] * s[None, None, :] / self.kappa
        return c2, b2, a2

    def restore(self, A: np.ndarray, B: np.ndarray, tau: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """A, B and tau of a solution in delta mapped back to zeta."""
        A0 = A / np.outer(self.s, self.s)
        B0 = B / self.s[:, None] - A0 @ self.zeta0
        return A0, B0, np.asarray(tau, dtype=float) / self.kappa


def solve_logdet(c: Sequence[np.ndarray], b: Sequence[np.ndarray], a: Sequence[np.ndarray], solver=None,
                 min_eig: float = 1e-9, scale: bool = True) -> Tuple[np.ndarray, np.ndarray, np.ndarray, SdpSolution]:
    """Fits the smallest matrix ellipsoid containing the intersection of per-sample consistency sets.

    Solves: minimize -log det A subject to

        [[-I - sum tau_j c_j,  B^T - sum tau_j b_j^T,  B^T],
         [ B - sum tau_j b_j,  A - sum tau_j a_j,      0  ],
         [ B,                  0,                     -A  ]] <= 0,

    A > 0 and tau_j >= 0. With scale set, the program is solved in the coordinates of LogdetScaling and the
    result is mapped back. The largest eigenvalue of the LMI in the solved coordinates, relative to
    1 + its largest entry, is stored as residual 'containment' of the returned solution.

    Args:
        c: Matrices c_j of shape (n, n).
        b: Matrices b_j of shape (N, n).
        a: Matrices a_j of shape (N, N).
        solver: SDP solver backend, defaults to CvxpySolver.
        min_eig: Smallest accepted eigenvalue of A.
        scale: Whether to solve in normalized coordinates.

    Returns:
        A, B, tau and the raw solution.

    Raises:
        InfeasibleError: If the program is infeasible, usually the data is not rich enough.
        NumericalError: If the solver fails or A is not positive definite.
    """
    from .solver import get_solver

    # check dimensions
    T = len(c)
    if T < 1 or len(b) != T or len(a) != T:
        raise ValueError('Need the same positive number of c_j, b_j and a_j.')
    n = np.atleast_2d(c[0]).shape[0]
    N = np.atleast_2d(a[0]).shape[0]
    for j in range(T):
        if np.shape(c[j]) != (n, n) or np.shape(b[j]) != (N, n) or np.shape(a[j]) != (N, N):
            raise ValueError('Inconsistent dimensions of data parameters for sample %d.' % j)
    size = n + 2 * N
    c, b, a = (np.asarray(p, dtype=float) for p in (c, b, a))

    # normalize
    scaling = LogdetScaling.from_params(c, b, a) if scale else None
    if scaling is not None:
        c, b, a = scaling.apply(c, b, a)
        log.debug('Solving log-det program with data scale %g.', scaling.kappa)

    # variables
    prob = SdpProblem()
    A_idx = prob.add_gram(N, name='A')
    B_idx = np.array(prob.add_variables(N * n)).reshape((N, n))
    tau = prob.add_variables(T)
    for j, var in enumerate(tau):
        prob.add_nonnegative({var: 1.}, name='tau%d' % j)

    # negated LMI, constant part
    F0 = np.zeros((size, size))
    F0[:n, :n] = np.eye(n)
    terms = {}

    # tau_j
    for j, var in enumerate(tau):
        F = np.zeros((size, size))
        F[:n, :n] = c[j]
        F[n:n + N, :n] = b[j]
        F[:n, n:n + N] = np.transpose(b[j])
        F[n:n + N, n:n + N] = a[j]
        terms[var] = sp.coo_matrix(F)

    # B
    for p in range(N):
        for q in range(n):
            rows = [n + p, q, n + N + p, q]
            cols = [q, n + p, q, n + N + p]
            terms[int(B_idx[p, q])] = sp.coo_matrix((-np.ones(4), (rows, cols)), shape=(size, size))

    # A
    for i in range(N):
        for k in range(i, N):
            if i == k:
                rows, cols, vals = [n + i, n + N + i], [n + i, n + N + i], [-1., 1.]
            else:
                rows = [n + i, n + k, n + N + i, n + N + k]
                cols = [n + k, n + i, n + N + k, n + N + i]
                vals = [-1., -1., 1., 1.]
            terms[int(A_idx[i, k])] = sp.coo_matrix((vals, (rows, cols)), shape=(size, size))
    prob.add_lmi(F0, terms, name='containment')

    # objective
    prob.set_logdet('gram', 0)
    log.debug('Log-det program: T=%d, n=%d, N=%d, LMI size %d.', T, n, N, size)

    # solve
    solution = get_solver(solver).solve(prob)
    if solution.status == SdpStatus.INFEASIBLE:
        raise InfeasibleError('Ellipsoid over-approximation is infeasible, the data matrix probably does not have '
                              'full row rank or omega is too small. Collect more data.',
                              diagnostic={'status': solution.status.value})
    if solution.status != SdpStatus.OPTIMAL:
        raise NumericalError('Ellipsoid over-approximation failed with status %s: %s'
                             % (solution.status.value, solution.message),
                             residuals=solution.residuals, iterations=solution.iterations)

    # extract and check witness
    A = solution.grams[0]
    B = solution.values(B_idx.flatten()).reshape((N, n))
    tau_val = solution.values(tau)
    M = containment_matrix(A, B, tau_val, c, b, a)
    solution.residuals['containment'] = max(0., float(np.linalg.eigvalsh(M)[-1])) / (1. + np.max(np.abs(M)))

    # map back
    if scaling is not None:
        A, B, tau_val = scaling.restore(A, B, tau_val)

    # check A
    eig = np.linalg.eigvalsh((A + A.T) / 2.)
    if eig[0] <= min_eig:
        raise NumericalError('Ellipsoid matrix A is not positive definite (min eigenvalue %g).' % eig[0],
                             residuals=solution.residuals, iterations=solution.iterations)
    return A, B, tau_val, solution


__all__ = ['solve_logdet', 'logdet_epigraph', 'containment_matrix', 'LogdetScaling']
