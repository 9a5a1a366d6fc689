import logging
import re
from typing import List, Tuple

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .problem import SdpProblem
from ..exceptions import InfeasibleError

log = logging.getLogger(__name__)


def block_layout(problem: SdpProblem) -> Tuple[List[int], List[Tuple[int, int]]]:
    """Block structure of the SDPA file.

    Runs of at least two consecutive 1x1 LMI blocks are merged into one diagonal block of negative size.

    Returns:
        SDPA block structure and, for every LMI block, its (1-based) SDPA block number and diagonal offset.
    """
    struct, placement = [], []
    sizes = [lmi.size for lmi in problem.lmis]
    k = 0
    while k < len(sizes):
        # find run of 1x1 blocks
        run = 0
        while k + run < len(sizes) and sizes[k + run] == 1:
            run += 1

        if run >= 2:
            # diagonal block
            struct.append(-run)
            placement.extend((len(struct), offset) for offset in range(run))
            k += run
        else:
            struct.append(sizes[k])
            placement.append((len(struct), 0))
            k += 1
    return struct, placement


def write_sdpa(problem: SdpProblem) -> str:
    """Writes a pure LMI problem in SDPA sparse format.

    The problem "maximize c^T y s.t. F0 + sum_i y_i F_i >= 0" is written as the SDPA primal
    "minimize -c^T x s.t. sum_i x_i F_i - (-F0) >= 0". Entries are written for i <= j only, sorted by
    (matno, blkno, i, j), with floats in repr precision, so that the output is deterministic.

    Raises:
        ValueError: If the problem still has Gram blocks, equalities or a log-det objective.
    """
    if problem.grams or problem.equalities or problem.logdet is not None:
        raise ValueError('Only pure LMI problems without equalities can be exported, lower and eliminate first.')

    # header
    struct, placement = block_layout(problem)
    c = problem.cost_vector()
    lines = [
        str(problem.n_vars),
        str(len(struct)),
        ' '.join(str(s) for s in struct),
        ' '.join(repr(float(-v) + 0.) for v in c)
    ]

    # collect entries
    entries = []
    for lmi, (blkno, offset) in zip(problem.lmis, placement):
        # constant, negated
        F0 = -lmi.F0
        rows, cols = np.nonzero(np.triu(F0))
        for i, j in zip(rows, cols):
            entries.append((0, blkno, offset + i + 1, offset + j + 1, float(F0[i, j])))

        # terms
        for var, F in lmi.terms.items():
            F = sp.triu(F).tocoo()
            F.sum_duplicates()
            for i, j, v in zip(F.row, F.col, F.data):
                if v != 0.:
                    entries.append((var + 1, blkno, offset + i + 1, offset + j + 1, float(v)))

    # sort and write
    for matno, blkno, i, j, v in sorted(entries):
        lines.append('%d %d %d %d %r' % (matno, blkno, i, j, v))
    return '\n'.join(lines) + '\n'


def read_sdpa(text: str) -> SdpProblem:
    """Reads a problem in SDPA sparse format.

    Comment lines (starting with " or *) are skipped, braces, parentheses and commas are treated as
    whitespace. Diagonal blocks (negative size) are split into 1x1 LMI blocks.

    Raises:
        ValueError: If the text is malformed.
    """

    # tokenize
    lines = [l for l in text.splitlines() if l.strip() and not l.lstrip().startswith(('"', '*'))]
    tokens = re.sub(r'[{}(),]', ' ', '\n'.join(lines)).split()
    try:
        m = int(tokens[0])
        n_blocks = int(tokens[1])
        struct = [int(t) for t in tokens[2:2 + n_blocks]]
        pos = 2 + n_blocks
        c = np.array([float(t) for t in tokens[pos:pos + m]])
        pos += m
        rest = tokens[pos:]
    except (IndexError, ValueError) as e:
        raise ValueError('Malformed SDPA header.') from e
    if len(c) != m or len(rest) % 5 != 0:
        raise ValueError('Malformed SDPA file.')

    # map sdpa blocks to lmi blocks
    blocks = []
    for blkno, size in enumerate(struct, 1):
        if size < 0:
            blocks.extend((blkno, offset, 1) for offset in range(-size))
        else:
            blocks.append((blkno, 0, size))
    lookup = {(blkno, offset): k for k, (blkno, offset, _) in enumerate(blocks)}

    # collect entries
    constants = [np.zeros((size, size)) for _, _, size in blocks]
    terms = [{} for _ in blocks]
    for e in range(0, len(rest), 5):
        matno, blkno, i, j = (int(t) for t in rest[e:e + 4])
        v = float(rest[e + 4])
        if struct[blkno - 1] < 0:
            if i != j:
                raise ValueError('Off-diagonal entry in diagonal block %d.' % blkno)
            k, i, j = lookup[blkno, i - 1], 0, 0
        else:
            k, i, j = lookup[blkno, 0], i - 1, j - 1

        if matno == 0:
            constants[k][i, j] = constants[k][j, i] = -v
        else:
            F = terms[k].setdefault(matno - 1, {})
            F[i, j] = F[j, i] = v

    # build problem
    problem = SdpProblem()
    problem.add_variables(m)
    problem.set_objective({i: -c[i] for i in range(m)})
    for k, (_, _, size) in enumerate(blocks):
        mats = {}
        for var, entries in terms[k].items():
            ij = list(entries.keys())
            mats[var] = sp.coo_matrix(([entries[x] for x in ij], ([x[0] for x in ij], [x[1] for x in ij])),
                                      shape=(size, size))
        problem.add_lmi(constants[k], mats)
    return problem


def read_csdp_solution(text: str, m: int, struct: List[int]) -> Tuple[np.ndarray, List[np.ndarray], List[np.ndarray]]:
    """Reads a solution file written by CSDP.

    The first line holds the SDPA variables x, the following lines "matno blkno i j value" the slack
    matrices (matno 1) and the dual matrices (matno 2).

    Returns:
        x, slack blocks and dual blocks in SDPA block structure (diagonal blocks as full matrices).
    """
    tokens = text.split()
    x = np.array([float(t) for t in tokens[:m]])
    mats = {1: [np.zeros((abs(s), abs(s))) for s in struct], 2: [np.zeros((abs(s), abs(s))) for s in struct]}
    rest = tokens[m:]
    for e in range(0, len(rest) - 4, 5):
        matno, blkno, i, j = (int(t) for t in rest[e:e + 4])
        v = float(rest[e + 4])
        mats[matno][blkno - 1][i - 1, j - 1] = mats[matno][blkno - 1][j - 1, i - 1] = v
    return x, mats[1], mats[2]


def eliminate_equalities(problem: SdpProblem, tol: float = 1e-9) -> Tuple[SdpProblem, np.ndarray, np.ndarray]:
    """Removes linear equalities from a pure LMI problem.

    All solutions of E y = b are written as y = y0 + N w with a particular solution y0 (least squares) and
    an orthonormal basis N of the null space of E. The reduced problem is stated in w.

    Args:
        problem: LMI problem without Gram blocks.
        tol: Relative tolerance for the consistency of E y = b.

    Returns:
        Reduced problem, y0 and N.

    Raises:
        InfeasibleError: If the equalities are inconsistent.
    """
    if problem.grams:
        raise ValueError('Gram blocks must be lowered before eliminating equalities.')
    n = problem.n_vars

    # nothing to do?
    if not problem.equalities:
        y0, N = np.zeros(n), np.eye(n)
    else:
        E, b = problem.equality_matrix()
        E = E.toarray()
        y0 = np.linalg.lstsq(E, b, rcond=None)[0]
        res = np.max(np.abs(E @ y0 - b))
        if res > tol * (1. + np.max(np.abs(b))):
            raise InfeasibleError('Equality constraints are inconsistent (residual %g).' % res,
                                  diagnostic={'equality_residual': float(res)})
        N = scipy.linalg.null_space(E)
    log.debug('Eliminated %d equalities, %d of %d variables remain.', len(problem.equalities), N.shape[1], n)

    # build reduced problem
    reduced = SdpProblem()
    reduced.add_variables(N.shape[1])
    c = problem.cost_vector()
    reduced.set_objective({k: v for k, v in enumerate(N.T @ c)})
    for lmi in problem.lmis:
        s = lmi.size
        M = lmi.matrix(n)
        F0 = lmi.F0 + (M @ y0).reshape((s, s), order='F')
        MN = np.asarray(M @ N)
        terms = {k: MN[:, k].reshape((s, s), order='F') for k in range(N.shape[1]) if np.any(MN[:, k] != 0.)}
        # clean up rounding asymmetries
        terms = {k: (F + F.T) / 2. for k, F in terms.items()}
        reduced.add_lmi((F0 + F0.T) / 2., terms, lmi.name)
    if problem.logdet is not None:
        reduced.set_logdet(*problem.logdet)
    return reduced, y0, N


__all__ = ['block_layout', 'write_sdpa', 'read_sdpa', 'read_csdp_solution', 'eliminate_equalities']
