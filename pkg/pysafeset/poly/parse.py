import logging
import operator
import re
from typing import List, Sequence

import numpy as np
from py_expression_eval import Parser

from .monomial import Monomial
from .polynomial import Polynomial
from .matrix import MatrixPolynomial

log = logging.getLogger(__name__)

# allowed variable names
VARIABLE = re.compile(r'^x([1-9][0-9]*)$')


def _parser() -> Parser:
    """Expression parser whose powers work on polynomials."""
    parser = Parser()
    parser.ops2['^'] = operator.pow
    parser.ops2['**'] = operator.pow
    return parser


def parse_polynomial(expression: str, n: int) -> Polynomial:
    """Parses a polynomial expression in the variables x1..xn, e.g. "5 + 0.2*x2 - x3" or "x1^2*x2".

    Args:
        expression: Expression to parse. Numbers are allowed as well.
        n: Number of variables.

    Returns:
        Parsed polynomial.

    Raises:
        ValueError: If the expression cannot be parsed or uses unknown variables.
    """

    # parse it
    try:
        expr = _parser().parse(str(expression))
    except Exception as e:
        raise ValueError('Could not parse polynomial "%s": %s' % (expression, e))

    # check variables
    values = {}
    for name in expr.variables():
        match = VARIABLE.match(name)
        if match is None or int(match.group(1)) > n:
            raise ValueError('Unknown variable "%s" in "%s", expected x1..x%d.' % (name, expression, n))
        values[name] = Polynomial.variable(n, int(match.group(1)) - 1)

    # evaluate over polynomials
    try:
        result = expr.evaluate(values)
    except Exception as e:
        raise ValueError('Could not evaluate polynomial "%s": %s' % (expression, e))
    if not isinstance(result, Polynomial):
        result = Polynomial.constant(n, float(result))
    return result


def parse_monomial(expression: str, n: int) -> Monomial:
    """Parses a single monomial like "x1^2*x2", "1" being the constant monomial.

    Raises:
        ValueError: If the expression is not a single monomial with coefficient one.
    """
    p = parse_polynomial(expression, n)
    if len(p.terms) != 1 or list(p.terms.values())[0] != 1.:
        raise ValueError('"%s" is not a monomial.' % expression)
    return p.monomials()[0]


def parse_column(expressions: Sequence[str], n: int) -> MatrixPolynomial:
    """Column vector of polynomials, e.g. the regressor Z."""
    return MatrixPolynomial.column([parse_polynomial(e, n) for e in expressions], n=n)


def parse_matrix(expressions: Sequence[Sequence[str]], n: int) -> MatrixPolynomial:
    """Matrix of polynomials given row-wise, e.g. the input matrix W."""
    return MatrixPolynomial([[parse_polynomial(e, n) for e in row] for row in expressions], n=n)


def monomial_text(monomial: Monomial) -> str:
    """Config form of a monomial, e.g. "x1^2*x3", the constant monomial being "1"."""
    parts = []
    for i, e in enumerate(monomial):
        if e == 1:
            parts.append('x%d' % (i + 1))
        elif e > 1:
            parts.append('x%d^%d' % (i + 1, e))
    return '*'.join(parts) if parts else '1'


def polynomial_expression(p: Polynomial) -> str:
    """Expression form of a polynomial that parse_polynomial reads back."""
    if p.is_zero():
        return '0'
    if len(p.terms) == 1 and list(p.terms.values())[0] == 1.:
        return monomial_text(p.monomials()[0])
    # positional notation, the expression parser does not read exponents
    return ' + '.join('(%s)*%s' % (_number(c), monomial_text(m)) if any(m) else '(%s)' % _number(c)
                      for m, c in p.terms.items())


def _number(value: float) -> str:
    return np.format_float_positional(float(value), unique=True, trim='-')


def polynomial_terms(p: Polynomial) -> List[list]:
    """Term list [[monomial, coefficient], ...] in canonical order, e.g. [["x1^2", 1.5], ["1", -2.0]]."""
    return [[monomial_text(m), float(c)] for m, c in p.terms.items()]


def polynomial_from_terms(terms: Sequence[Sequence], n: int) -> Polynomial:
    """Inverse of polynomial_terms."""
    result = {}
    for mono, coeff in terms:
        m = parse_monomial(mono, n)
        result[m] = result.get(m, 0.) + float(coeff)
    return Polynomial(n, result)


__all__ = ['parse_polynomial', 'parse_monomial', 'parse_column', 'parse_matrix', 'monomial_text',
           'polynomial_expression', 'polynomial_terms', 'polynomial_from_terms']
