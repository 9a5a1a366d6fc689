import numbers
from typing import Dict, Mapping, Sequence

import numpy as np

from ..poly.polynomial import DROP_TOL


class Affine:
    """Affine expression const + sum_i c_i y_i in the scalar variables y of an SDP.

    Used as polynomial coefficient, so that templates with unknown coefficients can go through the normal
    polynomial arithmetic. Products are only defined if at least one factor is constant.
    """

    __array_ufunc__ = None
    __slots__ = ('_const', '_coeffs')

    def __init__(self, const: float = 0., coeffs: Mapping[int, float] = None):
        self._const = float(const)
        self._coeffs = {} if coeffs is None else {int(v): float(c) for v, c in coeffs.items()
                                                  if abs(c) > DROP_TOL}

    @staticmethod
    def variable(index: int, coeff: float = 1.) -> 'Affine':
        return Affine(0., {index: coeff})

    @property
    def const(self) -> float:
        return self._const

    @property
    def coeffs(self) -> Dict[int, float]:
        return dict(self._coeffs)

    def is_zero(self) -> bool:
        return abs(self._const) <= DROP_TOL and not self._coeffs

    def is_constant(self) -> bool:
        return not self._coeffs

    def variables(self):
        return sorted(self._coeffs.keys())

    def evaluate(self, y: Sequence[float]) -> float:
        """Value for the given variable vector."""
        return self._const + sum(c * float(y[v]) for v, c in self._coeffs.items())

    def __add__(self, other) -> 'Affine':
        if isinstance(other, numbers.Real):
            return Affine(self._const + other, self._coeffs)
        if not isinstance(other, Affine):
            return NotImplemented
        coeffs = dict(self._coeffs)
        for v, c in other._coeffs.items():
            coeffs[v] = coeffs.get(v, 0.) + c
        return Affine(self._const + other._const, coeffs)

    def __radd__(self, other) -> 'Affine':
        return self.__add__(other)

    def __neg__(self) -> 'Affine':
        return Affine(-self._const, {v: -c for v, c in self._coeffs.items()})

    def __sub__(self, other) -> 'Affine':
        if not isinstance(other, (Affine, numbers.Real)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> 'Affine':
        return (-self) + other

    def __mul__(self, other) -> 'Affine':
        if isinstance(other, numbers.Real):
            return Affine(self._const * other, {v: c * other for v, c in self._coeffs.items()})
        if not isinstance(other, Affine):
            return NotImplemented
        if other.is_constant():
            return self * other._const
        if self.is_constant():
            return other * self._const
        raise ValueError('Product of two non-constant affine expressions is not affine.')

    def __rmul__(self, other) -> 'Affine':
        return self.__mul__(other)

    def __truediv__(self, other) -> 'Affine':
        if not isinstance(other, numbers.Real):
            return NotImplemented
        return self * (1. / other)

    def __eq__(self, other) -> bool:
        if isinstance(other, numbers.Real):
            return self.is_constant() and self._const == other
        if not isinstance(other, Affine):
            return NotImplemented
        return self._const == other._const and self._coeffs == other._coeffs

    __hash__ = None

    def __repr__(self):
        terms = ['%r' % self._const] + ['%r*y%d' % (c, v) for v, c in sorted(self._coeffs.items())]
        return 'Affine(%s)' % ' + '.join(terms)


def substitute(coeff, y: np.ndarray) -> float:
    """Value of a polynomial coefficient, which is either real or affine in y."""
    if isinstance(coeff, Affine):
        return coeff.evaluate(y)
    return float(coeff)


__all__ = ['Affine', 'substitute']
