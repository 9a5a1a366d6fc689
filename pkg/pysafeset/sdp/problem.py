import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp

log = logging.getLogger(__name__)


class GramBlock:
    """A symmetric matrix variable constrained to be positive semidefinite.

    Each upper-triangular entry is a scalar variable of the problem; index[a, b] == index[b, a] gives its
    global index.
    """

    def __init__(self, index: np.ndarray, name: str = None):
        self.index = index
        self.name = name

    @property
    def size(self) -> int:
        return self.index.shape[0]


class LmiBlock:
    """A linear matrix inequality F0 + sum_i y_i F_i >= 0 with symmetric data.

    Term matrices are stored sparse, since lowered Gram blocks have only one or two entries per variable.
    """

    def __init__(self, F0: np.ndarray, terms: Dict[int, sp.spmatrix], name: str = None):
        self.F0 = F0
        self.terms = terms
        self.name = name

    @property
    def size(self) -> int:
        return self.F0.shape[0]

    def matrix(self, n_vars: int) -> sp.csc_matrix:
        """Terms as sparse matrix of shape (size^2, n_vars), column i holding vec(F_i) in column-major order."""
        s = self.size
        rows, cols, vals = [], [], []
        for var, F in self.terms.items():
            F = F.tocoo()
            rows.append(F.row + F.col * s)
            cols.append(np.full(F.nnz, var))
            vals.append(F.data)
        if not rows:
            return sp.csc_matrix((s * s, n_vars))
        return sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                             shape=(s * s, n_vars))

    def evaluate(self, y: np.ndarray) -> np.ndarray:
        """Value of the matrix expression for the given variables."""
        value = np.array(self.F0, dtype=float)
        for var, F in self.terms.items():
            if y[var] != 0.:
                value += y[var] * F.toarray()
        return value


class SdpProblem:
    """A semidefinite program in a backend-neutral form.

    The problem consists of scalar decision variables y, Gram blocks (symmetric matrix variables whose
    entries are scalar variables, constrained PSD), LMI blocks F0 + sum_i y_i F_i >= 0, linear equalities
    and the objective "maximize c^T y", optionally plus the log-determinant of one Gram or LMI block.
    """

    def __init__(self):
        self._n_vars = 0
        self._free = []
        self._grams = []            # type: List[GramBlock]
        self._lmis = []             # type: List[LmiBlock]
        self._eq_rows = []          # type: List[Tuple[Dict[int, float], float]]
        self._cost = {}             # type: Dict[int, float]
        self._logdet = None         # type: Optional[Tuple[str, int]]

    @property
    def n_vars(self) -> int:
        return self._n_vars

    @property
    def free_variables(self) -> List[int]:
        """Indices of all scalars that are not Gram entries."""
        return list(self._free)

    @property
    def grams(self) -> List[GramBlock]:
        return self._grams

    @property
    def lmis(self) -> List[LmiBlock]:
        return self._lmis

    @property
    def equalities(self) -> List[Tuple[Dict[int, float], float]]:
        return self._eq_rows

    @property
    def cost(self) -> Dict[int, float]:
        return self._cost

    @property
    def logdet(self) -> Optional[Tuple[str, int]]:
        """Block whose log-determinant is added to the objective, as ('gram', k) or ('lmi', k)."""
        return self._logdet

    def add_variables(self, count: int) -> List[int]:
        """Adds free scalar variables and returns their indices."""
        indices = list(range(self._n_vars, self._n_vars + count))
        self._n_vars += count
        self._free.extend(indices)
        return indices

    def add_gram(self, size: int, name: str = None) -> np.ndarray:
        """Adds a Gram block of the given size.

        Returns:
            Symmetric integer matrix of global variable indices.
        """
        if size < 1:
            raise ValueError('Block sizes must be positive.')
        index = np.zeros((size, size), dtype=int)
        for a in range(size):
            for b in range(a, size):
                index[a, b] = index[b, a] = self._n_vars
                self._n_vars += 1
        self._grams.append(GramBlock(index, name))
        return index

    def add_lmi(self, F0: np.ndarray, terms: Dict[int, Union[np.ndarray, sp.spmatrix]], name: str = None) -> int:
        """Adds the constraint F0 + sum_i y_i F_i >= 0.

        Args:
            F0: Constant symmetric matrix.
            terms: Map of variable index to symmetric coefficient matrix.
            name: Optional name for logging.

        Returns:
            Index of new LMI block.

        Raises:
            ValueError: If a matrix is not symmetric or sizes do not match.
        """
        F0 = np.atleast_2d(np.asarray(F0, dtype=float))
        s = F0.shape[0]
        if F0.shape != (s, s) or not np.allclose(F0, F0.T, atol=1e-12, rtol=0):
            raise ValueError('F0 must be a symmetric square matrix.')

        sparse_terms = {}
        for var, F in terms.items():
            if var < 0 or var >= self._n_vars:
                raise ValueError('Unknown variable %d.' % var)
            F = sp.coo_matrix(F, dtype=float)
            if F.shape != (s, s):
                raise ValueError('Term for variable %d has shape %s, expected %s.' % (var, F.shape, (s, s)))
            if F.nnz > 0 and abs(F - F.T).max() > 1e-12:
                raise ValueError('Term for variable %d is not symmetric.' % var)
            F.eliminate_zeros()
            if F.nnz > 0:
                sparse_terms[int(var)] = F
        self._lmis.append(LmiBlock(F0, sparse_terms, name))
        return len(self._lmis) - 1

    def add_nonnegative(self, terms: Dict[int, float], constant: float = 0., name: str = None) -> int:
        """Adds constant + sum_i c_i y_i >= 0 as a 1x1 LMI block."""
        return self.add_lmi(np.array([[constant]]), {v: np.array([[c]]) for v, c in terms.items()}, name)

    def add_equality(self, coeffs: Dict[int, float], rhs: float):
        """Adds sum_i coeffs_i y_i == rhs."""
        row = {int(v): float(c) for v, c in coeffs.items() if c != 0.}
        if not row:
            if abs(rhs) > 0.:
                raise ValueError('Inconsistent constant equality 0 == %g.' % rhs)
            return
        self._eq_rows.append((row, float(rhs)))

    def set_objective(self, cost: Dict[int, float]):
        """Sets the linear objective to maximize."""
        self._cost = {int(v): float(c) for v, c in cost.items() if c != 0.}

    def add_objective(self, cost: Dict[int, float]):
        """Adds to the linear objective."""
        for v, c in cost.items():
            self._cost[int(v)] = self._cost.get(int(v), 0.) + float(c)

    def set_logdet(self, kind: str, block: int):
        """Adds log det of the given block to the objective.

        Args:
            kind: Either 'gram' or 'lmi'.
            block: Index of block.
        """
        if kind not in ('gram', 'lmi'):
            raise ValueError('Block kind must be "gram" or "lmi".')
        blocks = self._grams if kind == 'gram' else self._lmis
        if block < 0 or block >= len(blocks):
            raise ValueError('Unknown %s block %d.' % (kind, block))
        self._logdet = (kind, block)

    def copy(self) -> 'SdpProblem':
        """Copy that can be extended without changing this problem, block data is shared."""
        other = SdpProblem()
        other._n_vars = self._n_vars
        other._free = list(self._free)
        other._grams = list(self._grams)
        other._lmis = list(self._lmis)
        other._eq_rows = list(self._eq_rows)
        other._cost = dict(self._cost)
        other._logdet = self._logdet
        return other

    def equality_matrix(self) -> Tuple[sp.csr_matrix, np.ndarray]:
        """Equality rows as sparse matrix E and right hand side b."""
        rows, cols, vals = [], [], []
        for r, (row, _) in enumerate(self._eq_rows):
            for v, c in row.items():
                rows.append(r)
                cols.append(v)
                vals.append(c)
        E = sp.csr_matrix((vals, (rows, cols)), shape=(len(self._eq_rows), self._n_vars))
        return E, np.array([rhs for _, rhs in self._eq_rows])

    def cost_vector(self) -> np.ndarray:
        c = np.zeros(self._n_vars)
        for v, val in self._cost.items():
            c[v] = val
        return c

    def to_lmi(self) -> 'SdpProblem':
        """Lowers all Gram blocks to LMI blocks.

        Every Gram entry becomes a free scalar and the block becomes the LMI sum_ab y_ab (E_ab + E_ba) >= 0,
        with E_aa for diagonal entries. Variable indices are unchanged.
        """
        lowered = SdpProblem()
        lowered._n_vars = self._n_vars
        lowered._free = list(range(self._n_vars))
        lowered._lmis = list(self._lmis)
        lowered._eq_rows = list(self._eq_rows)
        lowered._cost = dict(self._cost)

        # lower gram blocks
        gram_to_lmi = {}
        for k, gram in enumerate(self._grams):
            s = gram.size
            terms = {}
            for a in range(s):
                for b in range(a, s):
                    if a == b:
                        F = sp.coo_matrix(([1.], ([a], [a])), shape=(s, s))
                    else:
                        F = sp.coo_matrix(([1., 1.], ([a, b], [b, a])), shape=(s, s))
                    terms[int(gram.index[a, b])] = F
            lowered._lmis.append(LmiBlock(np.zeros((s, s)), terms, gram.name))
            gram_to_lmi[k] = len(lowered._lmis) - 1

        # log det
        if self._logdet is not None:
            kind, block = self._logdet
            lowered._logdet = ('lmi', gram_to_lmi[block] if kind == 'gram' else block)
        log.debug('Lowered %d Gram blocks to LMI form.', len(self._grams))
        return lowered

    def presolve(self) -> Tuple['SdpProblem', List[Tuple[int, Dict[int, float], float]]]:
        """Removes equality rows that can be solved for a single free variable.

        A free scalar with zero cost that occurs in exactly one equality row and in no LMI block is
        substituted out together with its row.

        Returns:
            Reduced problem and list of eliminations (variable, row, rhs) in elimination order.
        """

        # variables in LMIs or cost are never eliminated
        blocked = set(self._cost.keys())
        for lmi in self._lmis:
            blocked.update(lmi.terms.keys())
        free = set(self._free) - blocked

        # count occurrences in equality rows
        occurrences = {}
        for r, (row, _) in enumerate(self._eq_rows):
            for v in row:
                if v in free:
                    occurrences.setdefault(v, []).append(r)

        # eliminate
        removed = set()
        eliminations = []
        for v in sorted(occurrences):
            rows = [r for r in occurrences[v] if r not in removed]
            if len(occurrences[v]) == 1 and len(rows) == 1:
                r = rows[0]
                row, rhs = self._eq_rows[r]
                removed.add(r)
                eliminations.append((v, row, rhs))

        # build reduced problem
        reduced = SdpProblem()
        reduced._n_vars = self._n_vars
        reduced._free = list(self._free)
        reduced._grams = self._grams
        reduced._lmis = self._lmis
        reduced._eq_rows = [row for r, row in enumerate(self._eq_rows) if r not in removed]
        reduced._cost = self._cost
        reduced._logdet = self._logdet
        if eliminations:
            log.debug('Presolve eliminated %d of %d equality rows.', len(eliminations), len(self._eq_rows))
        return reduced, eliminations

    @staticmethod
    def recover(y: np.ndarray, eliminations: List[Tuple[int, Dict[int, float], float]]) -> np.ndarray:
        """Recomputes eliminated variables from their rows, in reverse elimination order."""
        y = np.array(y, dtype=float)
        for v, row, rhs in reversed(eliminations):
            rest = sum(c * y[u] for u, c in row.items() if u != v)
            y[v] = (rhs - rest) / row[v]
        return y

    def describe(self) -> str:
        """Short summary of problem sizes."""
        return '%d scalars, %d Gram blocks (max size %d), %d LMI blocks, %d equalities' % (
            self._n_vars, len(self._grams), max((g.size for g in self._grams), default=0), len(self._lmis),
            len(self._eq_rows))


__all__ = ['SdpProblem', 'GramBlock', 'LmiBlock']
