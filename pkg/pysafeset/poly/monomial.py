from itertools import combinations_with_replacement
from typing import Iterable, List, Sequence, Tuple

# a monomial is stored as its tuple of exponents, one per state variable
Monomial = Tuple[int, ...]


def monomial_degree(monomial: Monomial) -> int:
    """Total degree of a monomial."""
    return sum(monomial)


def monomial_key(monomial: Monomial) -> tuple:
    """Sort key for the canonical graded-lex order.

    Monomials are ordered by total degree first. Within one degree, a larger exponent of x1 comes first,
    then x2 and so on, i.e. for n=2 and degree 2 the order is x1^2, x1 x2, x2^2.
    """
    return (sum(monomial),) + tuple(-e for e in monomial)


def sort_monomials(monomials: Iterable[Monomial]) -> List[Monomial]:
    """Returns the given monomials in canonical order."""
    return sorted(monomials, key=monomial_key)


def monomial_product(a: Monomial, b: Monomial) -> Monomial:
    """Product of two monomials."""
    return tuple(x + y for x, y in zip(a, b))


def monomial_basis(n: int, d_max: int, variables: Sequence[int] = None, d_min: int = 0) -> List[Monomial]:
    """All monomials with d_min <= degree <= d_max in canonical order.

    Args:
        n: Number of state variables.
        d_max: Maximum total degree.
        variables: If given, only these (0-based) variables may occur.
        d_min: Minimum total degree.

    Returns:
        List of monomials, C(n + d_max, n) of them for the full basis.

    Raises:
        ValueError: If n < 1 or d_max < 0.
    """

    # check
    if n < 1:
        raise ValueError('Number of variables must be positive.')
    if d_max < 0:
        raise ValueError('Maximum degree must not be negative.')

    # variables to use
    variables = list(range(n)) if variables is None else sorted(set(variables))

    # collect all multisets of variables
    basis = []
    for degree in range(max(d_min, 0), d_max + 1):
        for combo in combinations_with_replacement(variables, degree):
            exponents = [0] * n
            for v in combo:
                exponents[v] += 1
            basis.append(tuple(exponents))

    # sort it
    return sort_monomials(basis)


def monomial_to_text(monomial: Monomial) -> str:
    """Text form of a monomial, e.g. 'x1^2 x3'. The constant monomial gives an empty string."""
    parts = []
    for i, e in enumerate(monomial):
        if e == 1:
            parts.append('x%d' % (i + 1))
        elif e > 1:
            parts.append('x%d^%d' % (i + 1, e))
    return ' '.join(parts)


def monomial_from_text(text: str, n: int) -> Monomial:
    """Parses the output of monomial_to_text.

    Raises:
        ValueError: If a variable index is out of range.
    """
    exponents = [0] * n
    for part in text.split():
        name, _, power = part.partition('^')
        if not name.startswith('x'):
            raise ValueError('Invalid variable "%s".' % name)
        idx = int(name[1:]) - 1
        if idx < 0 or idx >= n:
            raise ValueError('Variable %s out of range for n=%d.' % (name, n))
        exponents[idx] += int(power) if power else 1
    return tuple(exponents)


__all__ = ['Monomial', 'monomial_degree', 'monomial_key', 'sort_monomials', 'monomial_product', 'monomial_basis',
           'monomial_to_text', 'monomial_from_text']
