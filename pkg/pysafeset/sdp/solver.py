import logging
import os
import subprocess
import tempfile
from typing import Dict, List, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp

from .problem import SdpProblem
from .solution import SdpSolution, SdpStatus
from ..object import get_object

log = logging.getLogger(__name__)

# tolerances handed to a backend are tighter than the ones checked afterwards
BACKEND_TOL_FACTOR = 1e-2


def relative_gap(pairs: List[Tuple[np.ndarray, np.ndarray]], objective: float = 0.) -> float:
    """Complementarity |sum <Z, X>| of dual/primal pairs relative to 1 + |objective| + sum |Z| |X|.

    Zero at an exact optimum and at most one for any pair of PSD matrices.
    """
    gap, scale = 0., 0.
    for Z, X in pairs:
        Z, X = np.asarray(Z, dtype=float), np.asarray(X, dtype=float)
        gap += float(np.sum(Z * X))
        scale += float(np.linalg.norm(Z) * np.linalg.norm(X))
    return abs(gap) / (1. + abs(objective) + scale)


class SdpSolver:
    """Base class for SDP backends.

    Derived classes implement _solve(). The base class runs the presolve, recovers eliminated variables and
    checks the returned solution against the configured tolerances, so that an "optimal" status always
    means a verified solution.
    """

    def __init__(self, feastol: float = 1e-7, gaptol: float = 1e-6, max_iter: int = 200, presolve: bool = True,
                 *args, **kwargs):
        """Creates a new solver.

        Args:
            feastol: Feasibility tolerance.
            gaptol: Relative duality gap tolerance.
            max_iter: Maximum number of iterations, None for the default of the backend.
            presolve: Whether to substitute out variables occurring in a single equality.
        """
        self.feastol = feastol
        self.gaptol = gaptol
        self.max_iter = max_iter
        self.presolve = presolve

    @property
    def backend_feastol(self) -> float:
        return min(self.feastol * BACKEND_TOL_FACTOR, 1e-8)

    @property
    def backend_gaptol(self) -> float:
        return min(self.gaptol * BACKEND_TOL_FACTOR, 1e-8)

    @property
    def name(self) -> str:
        return self.__class__.__name__

    def solve(self, problem: SdpProblem) -> SdpSolution:
        """Solves the given problem.

        Args:
            problem: Problem to solve.

        Returns:
            Solution, never raises for infeasible or failed solves but reports it in its status.
        """
        log.debug('Solving SDP with %s: %s.', self.name, problem.describe())

        # presolve
        eliminations = []
        reduced = problem
        if self.presolve and problem.equalities:
            reduced, eliminations = problem.presolve()

        # solve
        status, y, duals, iterations, message = self._solve(reduced)
        if status != SdpStatus.OPTIMAL:
            log.info('SDP solve with %s finished with status %s.', self.name, status.value)
            return SdpSolution(status, iterations=iterations, solver=self.name, message=message)

        # recover and check
        y = SdpProblem.recover(y, eliminations)
        return self._check(problem, y, duals, iterations)

    def _solve(self, problem: SdpProblem) -> Tuple[SdpStatus, Optional[np.ndarray], Optional[float], int, str]:
        """Actually solves a problem.

        Returns:
            Status, values of all variables, relative complementarity gap (or None), iterations and a message.
        """
        raise NotImplementedError

    def _check(self, problem: SdpProblem, y: np.ndarray, gap: Optional[float], iterations: int) -> SdpSolution:
        """Checks a solution and projects Gram blocks onto the PSD cone."""
        residuals = {}
        failures = []

        # equalities
        if problem.equalities:
            E, b = problem.equality_matrix()
            res = float(np.max(np.abs(E @ y - b)))
            residuals['equality'] = res
            if res > self.feastol * (1. + np.max(np.abs(b))):
                failures.append('equality residual %g' % res)

        # gram blocks
        grams = []
        worst_psd = 0.
        for k, gram in enumerate(problem.grams):
            G = y[gram.index]
            G = (G + G.T) / 2.
            w, V = np.linalg.eigh(G)
            viol = max(0., -w[0])
            worst_psd = max(worst_psd, viol / (1. + max(0., w[-1])))
            if viol > self.feastol * (1. + max(0., w[-1])):
                failures.append('Gram block %d has eigenvalue %g' % (k, w[0]))
            elif viol > 0:
                G = (V * np.maximum(w, 0.)) @ V.T
            grams.append(G)

        # lmi blocks
        lmis = []
        for k, lmi in enumerate(problem.lmis):
            S = lmi.evaluate(y)
            w = np.linalg.eigvalsh((S + S.T) / 2.)
            viol = max(0., -w[0])
            worst_psd = max(worst_psd, viol / (1. + max(0., w[-1])))
            if viol > self.feastol * (1. + max(0., w[-1])):
                failures.append('LMI block %d%s has eigenvalue %g' % (k, '' if lmi.name is None else
                                                                       ' (%s)' % lmi.name, w[0]))
            lmis.append(S)
        residuals['psd'] = worst_psd

        # objective
        objective = float(problem.cost_vector() @ y)
        if problem.logdet is not None:
            kind, block = problem.logdet
            M = grams[block] if kind == 'gram' else lmis[block]
            sign, value = np.linalg.slogdet(M)
            objective += value if sign > 0 else -np.inf

        # gap
        if gap is not None:
            residuals['gap'] = gap
            if problem.logdet is None and gap > self.gaptol:
                failures.append('relative duality gap %g' % gap)

        # finished
        if failures:
            log.warning('Solution from %s rejected: %s.', self.name, ', '.join(failures))
            return SdpSolution(SdpStatus.NUMERICAL_FAILURE, y=y, residuals=residuals, iterations=iterations,
                               solver=self.name, message='; '.join(failures))
        log.debug('Solution accepted, objective=%g, residuals=%s.', objective, residuals)
        return SdpSolution(SdpStatus.OPTIMAL, y=y, grams=grams, lmis=lmis, objective=objective,
                           residuals=residuals, iterations=iterations, solver=self.name)


class CvxpySolver(SdpSolver):
    """Solves problems through cvxpy with an interior point (or first order) backend."""

    def __init__(self, solver: str = 'CLARABEL', options: Dict = None, *args, **kwargs):
        """Creates a new cvxpy based solver.

        Args:
            solver: Name of cvxpy solver, e.g. CLARABEL, SCS, CVXOPT or MOSEK.
            options: Extra options passed to the solver, override the mapped tolerances.
        """
        SdpSolver.__init__(self, *args, **kwargs)
        self.solver = solver.upper()
        self.options = {} if options is None else options

    @property
    def name(self) -> str:
        return 'cvxpy/%s' % self.solver

    def _solver_options(self) -> dict:
        """Maps tolerances to solver specific options."""
        if self.solver == 'CLARABEL':
            opts = {'tol_feas': self.backend_feastol, 'tol_gap_abs': self.backend_gaptol,
                    'tol_gap_rel': self.backend_gaptol}
            iter_key = 'max_iter'
        elif self.solver == 'SCS':
            opts = {'eps_abs': self.backend_feastol, 'eps_rel': self.backend_gaptol}
            iter_key = 'max_iters'
        elif self.solver == 'CVXOPT':
            opts = {'feastol': self.backend_feastol, 'abstol': self.backend_gaptol, 'reltol': self.backend_gaptol}
            iter_key = 'max_iters'
        else:
            opts, iter_key = {}, None
        if self.max_iter is not None and iter_key is not None:
            opts[iter_key] = self.max_iter
        opts.update(self.options)
        return opts

    def _solve(self, problem: SdpProblem):
        import cvxpy as cp
        n = problem.n_vars

        # free scalars
        free = problem.free_variables
        constraints = []
        parts = []
        if free:
            y = cp.Variable(len(free))
            P = sp.csc_matrix((np.ones(len(free)), (free, np.arange(len(free)))), shape=(n, len(free)))
            parts.append(P @ y)

        # gram blocks, mapping upper triangle of vec(G) to the global vector
        grams, gram_cons = [], []
        for gram in problem.grams:
            s = gram.size
            G = cp.Variable((s, s), symmetric=True)
            a, b = np.triu_indices(s)
            P = sp.csc_matrix((np.ones(len(a)), (gram.index[a, b], a + b * s)), shape=(n, s * s))
            parts.append(P @ cp.reshape(G, (s * s,), order='F'))
            gram_cons.append(G >> 0)
            grams.append(G)
        constraints.extend(gram_cons)
        if not parts:
            raise ValueError('Problem has no variables.')
        v = parts[0]
        for part in parts[1:]:
            v = v + part

        # equalities
        if problem.equalities:
            E, b = problem.equality_matrix()
            constraints.append(E @ v == b)

        # lmi blocks, 1x1 blocks batched into a single linear inequality
        scalar_rows, scalar_const = [], []
        lmi_cons = []
        for lmi in problem.lmis:
            s = lmi.size
            M = lmi.matrix(n)
            if s == 1:
                scalar_rows.append(M)
                scalar_const.append(lmi.F0[0, 0])
                continue
            S = cp.Variable((s, s), symmetric=True)
            constraints.append(cp.reshape(M @ v + lmi.F0.flatten(order='F'), (s, s), order='F') == S)
            con = S >> 0
            constraints.append(con)
            lmi_cons.append((con, S))
        scalar_con = None
        if scalar_rows:
            scalar_con = sp.vstack(scalar_rows).tocsr() @ v + np.array(scalar_const) >= 0
            constraints.append(scalar_con)

        # objective
        c = problem.cost_vector()
        objective = c @ v if np.any(c != 0.) else cp.Constant(0.)
        if problem.logdet is not None:
            kind, block = problem.logdet
            if kind == 'gram':
                objective = objective + cp.log_det(grams[block])
            else:
                lmi_blocks = [S for _, S in lmi_cons]
                # index among non-scalar LMIs
                pos = sum(1 for l in problem.lmis[:block] if l.size > 1)
                objective = objective + cp.log_det(lmi_blocks[pos])

        # solve
        prob = cp.Problem(cp.Maximize(objective), constraints)
        try:
            prob.solve(solver=self.solver, **self._solver_options())
        except cp.error.SolverError as e:
            return SdpStatus.NUMERICAL_FAILURE, None, None, None, str(e)
        iterations = prob.solver_stats.num_iters if prob.solver_stats is not None else None

        # status
        if prob.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
            return SdpStatus.INFEASIBLE, None, None, iterations, prob.status
        if prob.status in (cp.UNBOUNDED, cp.UNBOUNDED_INACCURATE):
            return SdpStatus.UNBOUNDED, None, None, iterations, prob.status
        if prob.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or v.value is None:
            return SdpStatus.NUMERICAL_FAILURE, None, None, iterations, str(prob.status)
        if prob.status == cp.OPTIMAL_INACCURATE:
            log.warning('Solver %s returned an inaccurate solution, checking residuals.', self.solver)

        # complementarity gap
        try:
            pairs = [(con.dual_value, S.value) for con, S in lmi_cons + list(zip(gram_cons, grams))]
            if scalar_con is not None:
                slack = sp.vstack(scalar_rows).tocsr() @ v.value + np.array(scalar_const)
                pairs.append((scalar_con.dual_value, slack))
            gap = relative_gap(pairs, prob.value)
        except (TypeError, ValueError):
            gap = None

        return SdpStatus.OPTIMAL, np.asarray(v.value, dtype=float).flatten(), gap, iterations, str(prob.status)


class SdpaSolver(SdpSolver):
    """Solves problems with an external solver that reads SDPA sparse files, e.g. CSDP."""

    def __init__(self, binary: str = None, keep_files: str = None, *args, **kwargs):
        """Creates a new SDPA based solver.

        Args:
            binary: Path of solver binary, defaults to environment variable PYSAFESET_SDPA_SOLVER.
            keep_files: If given, directory to keep problem and solution files in.
        """
        SdpSolver.__init__(self, *args, **kwargs)
        self.binary = binary if binary is not None else os.environ.get('PYSAFESET_SDPA_SOLVER')
        self.keep_files = keep_files
        if self.binary is None:
            raise ValueError('No SDPA solver binary given, set PYSAFESET_SDPA_SOLVER.')

    @property
    def name(self) -> str:
        return 'sdpa/%s' % os.path.basename(self.binary)

    def _solve(self, problem: SdpProblem):
        from .sdpa import write_sdpa, read_csdp_solution, eliminate_equalities, block_layout
        from .logdet import logdet_epigraph
        from ..exceptions import InfeasibleError

        # lower to pure LMI form
        lmi = problem.to_lmi()
        if lmi.logdet is not None:
            lmi, _ = logdet_epigraph(lmi)
        try:
            reduced, y0, N = eliminate_equalities(lmi, tol=self.feastol)
        except InfeasibleError as e:
            return SdpStatus.INFEASIBLE, None, None, 0, str(e)

        # write and run
        text = write_sdpa(reduced)
        struct, _ = block_layout(reduced)
        with tempfile.TemporaryDirectory() as tmp:
            directory = self.keep_files if self.keep_files is not None else tmp
            in_file = os.path.join(directory, 'problem.dat-s')
            out_file = os.path.join(directory, 'problem.sol')
            with open(in_file, 'w') as f:
                f.write(text)
            log.debug('Running %s on %s...', self.binary, in_file)
            proc = subprocess.run([self.binary, in_file, out_file], stdout=subprocess.PIPE, stderr=subprocess.STDOUT,
                                  universal_newlines=True)

            # status from exit code
            if proc.returncode == 1:
                return SdpStatus.UNBOUNDED, None, None, None, 'primal infeasible in SDPA dual form'
            if proc.returncode == 2:
                return SdpStatus.INFEASIBLE, None, None, None, 'dual infeasible in SDPA dual form'
            if proc.returncode not in (0, 3) or not os.path.exists(out_file):
                return SdpStatus.NUMERICAL_FAILURE, None, None, None, 'solver exit code %d' % proc.returncode
            if proc.returncode == 3:
                log.warning('External solver reported partial success, checking residuals.')

            # read solution
            with open(out_file, 'r') as f:
                x, slack, dual = read_csdp_solution(f.read(), reduced.n_vars, struct)

        # map back, dropping auxiliary variables
        y = (y0 + N @ x)[:problem.n_vars]
        gap = relative_gap(list(zip(dual, slack)))
        return SdpStatus.OPTIMAL, y, gap, None, 'exit code %d' % proc.returncode


def get_solver(solver: Union[SdpSolver, dict, None] = None) -> SdpSolver:
    """Returns a solver from config, the given solver itself, or the default CvxpySolver."""
    if solver is None:
        return CvxpySolver()
    return get_object(solver, SdpSolver)


def solve(problem: SdpProblem, solver: Union[SdpSolver, dict, None] = None) -> SdpSolution:
    """Solves a problem with the given (or default) solver."""
    return get_solver(solver).solve(problem)


__all__ = ['SdpSolver', 'CvxpySolver', 'SdpaSolver', 'get_solver', 'solve', 'relative_gap']
