import logging
import numbers
from types import MappingProxyType
from typing import Dict, List, Mapping, Sequence, Union

import numpy as np

from .monomial import Monomial, monomial_key, monomial_product, monomial_to_text, monomial_from_text, \
    monomial_degree

log = logging.getLogger(__name__)

# coefficients with an absolute value up to this are dropped after arithmetic
DROP_TOL = 1e-12


def is_negligible(coeff) -> bool:
    """Whether a coefficient counts as zero.

    Real numbers are compared against DROP_TOL, all other coefficient types (e.g. affine expressions in
    decision variables) must provide an is_zero() method.
    """
    if isinstance(coeff, numbers.Real):
        return abs(coeff) <= DROP_TOL
    return coeff.is_zero()


def _clean(coeff):
    # store plain python floats
    return float(coeff) if isinstance(coeff, numbers.Real) else coeff


class Polynomial:
    """Sparse multivariate polynomial in n variables x1..xn.

    Terms are kept in canonical graded-lex order and zero coefficients are never stored. Instances are
    immutable, all arithmetic returns new objects. Coefficients are floats or any object supporting ring
    operations with floats and an is_zero() test.
    """

    # make numpy defer to our operators
    __array_ufunc__ = None
    __slots__ = ('_n', '_terms')

    def __init__(self, n: int, terms: Mapping[Monomial, object] = None):
        """Creates a new polynomial.

        Args:
            n: Number of variables.
            terms: Map of monomial (exponent tuple) to coefficient.

        Raises:
            ValueError: If a monomial does not have n non-negative exponents.
        """
        if n < 1:
            raise ValueError('Number of variables must be positive.')
        self._n = n

        # check and clean terms
        cleaned = {}
        for monomial, coeff in ({} if terms is None else terms).items():
            monomial = tuple(int(e) for e in monomial)
            if len(monomial) != n or any(e < 0 for e in monomial):
                raise ValueError('Invalid monomial %s for %d variables.' % (monomial, n))
            if not is_negligible(coeff):
                cleaned[monomial] = _clean(coeff)

        # store in canonical order
        self._terms = dict(sorted(cleaned.items(), key=lambda kv: monomial_key(kv[0])))

    @staticmethod
    def constant(n: int, value) -> 'Polynomial':
        """Constant polynomial."""
        return Polynomial(n, {(0,) * n: value})

    @staticmethod
    def variable(n: int, index: int) -> 'Polynomial':
        """Polynomial x_{index+1}, i.e. index is 0-based."""
        if index < 0 or index >= n:
            raise ValueError('Variable index %d out of range for n=%d.' % (index, n))
        exponents = [0] * n
        exponents[index] = 1
        return Polynomial(n, {tuple(exponents): 1.})

    @staticmethod
    def variables_of(n: int) -> List['Polynomial']:
        """List of all variables x1..xn as polynomials."""
        return [Polynomial.variable(n, i) for i in range(n)]

    @property
    def n(self) -> int:
        """Number of variables."""
        return self._n

    @property
    def terms(self) -> Mapping[Monomial, object]:
        """Read-only view on the terms in canonical order."""
        return MappingProxyType(self._terms)

    @property
    def degree(self) -> int:
        """Total degree, 0 for the zero polynomial."""
        return max((monomial_degree(m) for m in self._terms), default=0)

    def monomials(self) -> List[Monomial]:
        """Monomials with non-zero coefficient in canonical order."""
        return list(self._terms.keys())

    def coefficient(self, monomial: Monomial):
        """Coefficient of the given monomial, 0 if not present."""
        return self._terms.get(tuple(monomial), 0.)

    def is_zero(self) -> bool:
        return len(self._terms) == 0

    def is_constant(self) -> bool:
        return all(monomial_degree(m) == 0 for m in self._terms)

    def variables(self) -> List[int]:
        """0-based indices of all variables that occur in at least one term."""
        return [i for i in range(self._n) if any(m[i] > 0 for m in self._terms)]

    def max_abs_coefficient(self) -> float:
        """Largest absolute coefficient, only for real coefficients."""
        return max((abs(c) for c in self._terms.values()), default=0.)

    def _coerce(self, other) -> 'Polynomial':
        """Converts other into a polynomial with the same variable count."""
        if isinstance(other, Polynomial):
            if other.n != self._n:
                raise ValueError('Variable count mismatch: %d != %d.' % (self._n, other.n))
            return other
        if isinstance(other, numbers.Real) or hasattr(other, 'is_zero'):
            return Polynomial.constant(self._n, other)
        raise TypeError('Cannot combine polynomial with %s.' % type(other).__name__)

    def __add__(self, other) -> 'Polynomial':
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Polynomial(self._n, terms)

    def __radd__(self, other) -> 'Polynomial':
        return self.__add__(other)

    def __neg__(self) -> 'Polynomial':
        return Polynomial(self._n, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> 'Polynomial':
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'Polynomial':
        return (-self) + other

    def __mul__(self, other) -> 'Polynomial':
        # scalar factor?
        if not isinstance(other, Polynomial):
            if isinstance(other, numbers.Real) or hasattr(other, 'is_zero'):
                return Polynomial(self._n, {m: c * other for m, c in self._terms.items()})
            return NotImplemented

        # full product
        other = self._coerce(other)
        terms = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = monomial_product(m1, m2)
                terms[m] = terms[m] + c1 * c2 if m in terms else c1 * c2
        return Polynomial(self._n, terms)

    def __rmul__(self, other) -> 'Polynomial':
        if isinstance(other, numbers.Real) or hasattr(other, 'is_zero'):
            return Polynomial(self._n, {m: other * c for m, c in self._terms.items()})
        return NotImplemented

    def __truediv__(self, other) -> 'Polynomial':
        if not isinstance(other, numbers.Real):
            return NotImplemented
        return self * (1. / other)

    def __pow__(self, power) -> 'Polynomial':
        # only non-negative integers, floats like 2.0 come from the expression parser
        if isinstance(power, numbers.Real) and float(power).is_integer() and power >= 0:
            result = Polynomial.constant(self._n, 1.)
            for _ in range(int(power)):
                result = result * self
            return result
        raise ValueError('Polynomials can only be raised to non-negative integer powers.')

    def __eq__(self, other) -> bool:
        if isinstance(other, numbers.Real):
            other = Polynomial.constant(self._n, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._n == other.n and self._terms == other._terms

    __hash__ = None

    def derivative(self, index: int) -> 'Polynomial':
        """Partial derivative with respect to x_{index+1}."""
        terms = {}
        for m, c in self._terms.items():
            if m[index] > 0:
                dm = list(m)
                dm[index] -= 1
                terms[tuple(dm)] = m[index] * c
        return Polynomial(self._n, terms)

    def gradient(self) -> 'MatrixPolynomial':
        """Gradient as 1 x n matrix polynomial, entry j is dp/dx_j."""
        from .matrix import MatrixPolynomial
        return MatrixPolynomial([[self.derivative(j) for j in range(self._n)]], n=self._n)

    def evaluate(self, x: Sequence[float]):
        """Evaluates the polynomial at a point.

        Terms are summed in canonical order, so the result is deterministic.

        Raises:
            ValueError: If len(x) != n.
        """
        if len(x) != self._n:
            raise ValueError('Expected point of dimension %d, got %d.' % (self._n, len(x)))
        value = 0.
        for m, c in self._terms.items():
            mono = 1.
            for xi, e in zip(x, m):
                if e > 0:
                    mono *= float(xi) ** e
            value = value + c * mono
        return value

    def __call__(self, x: Sequence[float]):
        return self.evaluate(x)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        """Evaluates a polynomial with real coefficients at many points.

        Args:
            points: Array of shape (N, n).

        Returns:
            Array of shape (N,).
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self._n:
            raise ValueError('Expected points of dimension %d, got %d.' % (self._n, points.shape[1]))
        values = np.zeros(points.shape[0])
        for m, c in self._terms.items():
            values += c * np.prod(points ** np.array(m), axis=1)
        return values

    def map_coefficients(self, func) -> 'Polynomial':
        """Applies func to every coefficient, e.g. to substitute values for decision variables."""
        return Polynomial(self._n, {m: func(c) for m, c in self._terms.items()})

    def truncate(self, tol: float) -> 'Polynomial':
        """Removes all real coefficients with absolute value below tol."""
        return Polynomial(self._n, {m: c for m, c in self._terms.items() if abs(c) >= tol})

    def to_text(self) -> str:
        """Serializes to 'c * x1^a x2^b + ...' in canonical order, coefficients in repr precision."""
        if not self._terms:
            return '0.0'
        parts = []
        for m, c in self._terms.items():
            mono = monomial_to_text(m)
            parts.append(repr(c) if not mono else '%r * %s' % (c, mono))
        return ' + '.join(parts)

    @staticmethod
    def from_text(text: str, n: int) -> 'Polynomial':
        """Parses the output of to_text."""
        terms = {}
        for part in text.split(' + '):
            coeff, _, mono = part.partition(' * ')
            m = monomial_from_text(mono, n)
            terms[m] = terms.get(m, 0.) + float(coeff)
        return Polynomial(n, terms)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return 'Polynomial(n=%d, "%s")' % (self._n, self.to_text())


def poly_max_abs_difference(p: Polynomial, q: Polynomial) -> float:
    """Largest absolute coefficient of p - q."""
    return (p - q).max_abs_coefficient()


__all__ = ['Polynomial', 'DROP_TOL', 'is_negligible', 'poly_max_abs_difference']
