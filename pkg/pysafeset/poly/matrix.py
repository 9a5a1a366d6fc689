import logging
import numbers
from typing import List, Sequence, Tuple, Union

import numpy as np

from .polynomial import Polynomial

log = logging.getLogger(__name__)


class MatrixPolynomial:
    """Dense matrix whose entries are polynomials in the same n variables."""

    __array_ufunc__ = None

    def __init__(self, entries: Sequence[Sequence[Union[Polynomial, float]]], n: int = None):
        """Creates a new matrix polynomial.

        Args:
            entries: Rows of entries, each a Polynomial or a constant.
            n: Number of variables, required if no entry is a Polynomial.

        Raises:
            ValueError: If rows are ragged, empty, or variable counts differ.
        """

        # get n from entries, if not given
        if n is None:
            for row in entries:
                for e in row:
                    if isinstance(e, Polynomial):
                        n = e.n
                        break
                if n is not None:
                    break
            if n is None:
                raise ValueError('Number of variables must be given for constant matrices.')
        self._n = n

        # check shape
        if len(entries) == 0 or len(entries[0]) == 0:
            raise ValueError('Matrix polynomials must not be empty.')
        cols = len(entries[0])
        if any(len(row) != cols for row in entries):
            raise ValueError('All rows must have the same length.')

        # convert entries
        self._entries = []
        for row in entries:
            new_row = []
            for e in row:
                if isinstance(e, Polynomial):
                    if e.n != n:
                        raise ValueError('Variable count mismatch: %d != %d.' % (n, e.n))
                    new_row.append(e)
                else:
                    new_row.append(Polynomial.constant(n, e))
            self._entries.append(new_row)

    @staticmethod
    def zeros(n: int, rows: int, cols: int) -> 'MatrixPolynomial':
        return MatrixPolynomial([[0.] * cols for _ in range(rows)], n=n)

    @staticmethod
    def identity(n: int, size: int) -> 'MatrixPolynomial':
        return MatrixPolynomial.from_array(n, np.eye(size))

    @staticmethod
    def from_array(n: int, array) -> 'MatrixPolynomial':
        """Constant matrix polynomial from a 2D array."""
        array = np.atleast_2d(np.asarray(array, dtype=float))
        return MatrixPolynomial([[float(v) for v in row] for row in array], n=n)

    @staticmethod
    def column(entries: Sequence[Union[Polynomial, float]], n: int = None) -> 'MatrixPolynomial':
        """Column vector from a list of entries."""
        return MatrixPolynomial([[e] for e in entries], n=n)

    @staticmethod
    def block(blocks: Sequence[Sequence['MatrixPolynomial']]) -> 'MatrixPolynomial':
        """Assembles a matrix from a grid of blocks.

        Blocks may be None, which is replaced by zeros of the size given by the other blocks in the same
        block row and block column.

        Raises:
            ValueError: If sizes are inconsistent or cannot be inferred.
        """

        # get row heights and column widths
        heights = [None] * len(blocks)
        widths = [None] * len(blocks[0])
        n = None
        for i, brow in enumerate(blocks):
            if len(brow) != len(widths):
                raise ValueError('All block rows must have the same number of blocks.')
            for j, b in enumerate(brow):
                if b is None:
                    continue
                n = b.n
                for sizes, idx, size in ((heights, i, b.rows), (widths, j, b.cols)):
                    if sizes[idx] is not None and sizes[idx] != size:
                        raise ValueError('Inconsistent block sizes in block (%d, %d).' % (i, j))
                    sizes[idx] = size
        if n is None or None in heights or None in widths:
            raise ValueError('Could not infer all block sizes.')

        # build entries
        entries = []
        for i, brow in enumerate(blocks):
            for r in range(heights[i]):
                row = []
                for j, b in enumerate(brow):
                    if b is None:
                        row.extend([Polynomial(n)] * widths[j])
                    else:
                        row.extend(b[r, c] for c in range(widths[j]))
                entries.append(row)
        return MatrixPolynomial(entries, n=n)

    @property
    def n(self) -> int:
        return self._n

    @property
    def rows(self) -> int:
        return len(self._entries)

    @property
    def cols(self) -> int:
        return len(self._entries[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> List[List[Polynomial]]:
        """Copy of the entry grid."""
        return [list(row) for row in self._entries]

    @property
    def degree(self) -> int:
        return max(e.degree for row in self._entries for e in row)

    def __getitem__(self, idx: Tuple[int, int]) -> Polynomial:
        i, j = idx
        return self._entries[i][j]

    def flat(self) -> List[Polynomial]:
        """Entries in row-major order."""
        return [e for row in self._entries for e in row]

    @property
    def T(self) -> 'MatrixPolynomial':
        return MatrixPolynomial([[self._entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
                                n=self._n)

    def transpose(self) -> 'MatrixPolynomial':
        return self.T

    def _check_shape(self, other: 'MatrixPolynomial'):
        if other.shape != self.shape:
            raise ValueError('Shape mismatch: %s != %s.' % (self.shape, other.shape))
        if other.n != self._n:
            raise ValueError('Variable count mismatch: %d != %d.' % (self._n, other.n))

    def __add__(self, other: 'MatrixPolynomial') -> 'MatrixPolynomial':
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        self._check_shape(other)
        return MatrixPolynomial([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self._entries, other._entries)],
                                n=self._n)

    def __neg__(self) -> 'MatrixPolynomial':
        return MatrixPolynomial([[-a for a in row] for row in self._entries], n=self._n)

    def __sub__(self, other: 'MatrixPolynomial') -> 'MatrixPolynomial':
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> 'MatrixPolynomial':
        # elementwise scaling by a scalar, polynomial or affine expression
        if isinstance(other, (Polynomial, numbers.Real)) or hasattr(other, 'is_zero'):
            return MatrixPolynomial([[a * other for a in row] for row in self._entries], n=self._n)
        return NotImplemented

    def __rmul__(self, other) -> 'MatrixPolynomial':
        if isinstance(other, (Polynomial, numbers.Real)) or hasattr(other, 'is_zero'):
            return MatrixPolynomial([[other * a for a in row] for row in self._entries], n=self._n)
        return NotImplemented

    def __matmul__(self, other) -> 'MatrixPolynomial':
        # constant arrays are allowed on either side
        if isinstance(other, np.ndarray):
            other = MatrixPolynomial.from_array(self._n, other)
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError('Shape mismatch for product: %s @ %s.' % (self.shape, other.shape))

        entries = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = Polynomial(self._n)
                for k in range(self.cols):
                    a, b = self._entries[i][k], other._entries[k][j]
                    if not a.is_zero() and not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            entries.append(row)
        return MatrixPolynomial(entries, n=self._n)

    def __rmatmul__(self, other) -> 'MatrixPolynomial':
        if isinstance(other, np.ndarray):
            return MatrixPolynomial.from_array(self._n, other) @ self
        return NotImplemented

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixPolynomial):
            return NotImplemented
        return self.shape == other.shape and self._n == other.n and self._entries == other._entries

    __hash__ = None

    def is_symmetric(self, tol: float = 0.) -> bool:
        """Whether entry (i,j) equals entry (j,i) coefficient-wise, up to tol for real coefficients."""
        if self.rows != self.cols:
            return False
        for i in range(self.rows):
            for j in range(i + 1, self.cols):
                diff = self._entries[i][j] - self._entries[j][i]
                if tol > 0 and all(isinstance(c, numbers.Real) for c in diff.terms.values()):
                    if diff.max_abs_coefficient() > tol:
                        return False
                elif not diff.is_zero():
                    return False
        return True

    def symmetrize(self) -> 'MatrixPolynomial':
        """Returns (M + M^T) / 2."""
        return (self + self.T) * 0.5

    def map_entries(self, func) -> 'MatrixPolynomial':
        return MatrixPolynomial([[func(e) for e in row] for row in self._entries], n=self._n)

    def map_coefficients(self, func) -> 'MatrixPolynomial':
        return self.map_entries(lambda e: e.map_coefficients(func))

    def evaluate(self, x: Sequence[float]) -> np.ndarray:
        """Evaluates all entries at a point, giving a real array of shape (rows, cols)."""
        return np.array([[float(e.evaluate(x)) for e in row] for row in self._entries])

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluates all entries at many points, giving an array of shape (N, rows, cols)."""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        values = np.empty((points.shape[0], self.rows, self.cols))
        for i, row in enumerate(self._entries):
            for j, e in enumerate(row):
                values[:, i, j] = e.evaluate_many(points)
        return values

    def to_text(self) -> List[List[str]]:
        """Entries serialized as text, row-major."""
        return [[e.to_text() for e in row] for row in self._entries]

    @staticmethod
    def from_text(text: Sequence[Sequence[str]], n: int) -> 'MatrixPolynomial':
        return MatrixPolynomial([[Polynomial.from_text(t, n) for t in row] for row in text], n=n)

    def __repr__(self):
        return 'MatrixPolynomial(%dx%d, n=%d)' % (self.rows, self.cols, self._n)


__all__ = ['MatrixPolynomial']
