import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .affine import Affine, substitute
from ..poly import Monomial, Polynomial, MatrixPolynomial, monomial_basis, monomial_product, monomial_to_text, \
    monomial_degree, sort_monomials
from ..sdp import SdpProblem, SdpSolution, SdpStatus, SdpSolver, get_solver
from ..exceptions import InfeasibleError

log = logging.getLogger(__name__)

# coefficients treated as non-zero when checking whether a basis spans a target
SPAN_TOL = 1e-12


def _split(coeff) -> Tuple[float, Dict[int, float]]:
    """Constant and variable part of a polynomial coefficient."""
    if isinstance(coeff, Affine):
        return coeff.const, coeff.coeffs
    return float(coeff), {}


def default_basis(target: MatrixPolynomial) -> List[Monomial]:
    """All monomials up to half the target degree (rounded up) in the variables that occur in the target."""
    variables = sorted(set(v for e in target.flat() for v in e.variables()))
    return monomial_basis(target.n, int(math.ceil(target.degree / 2.)), variables=variables)


def compile_matrix_sos(sdp: SdpProblem, H: MatrixPolynomial, basis: Sequence[Monomial] = None,
                       slack: int = None, name: str = None) -> Tuple[np.ndarray, List[Monomial]]:
    """Adds the constraint that H is an SOS matrix polynomial.

    A Gram block G of size r*|z| is created and H(x) == (I_r kron z(x))^T G (I_r kron z(x)) is enforced by
    coefficient matching for every entry (i <= j) and monomial, in canonical monomial order.

    Args:
        sdp: Problem to add Gram block and equalities to.
        H: Symmetric matrix polynomial, coefficients real or affine in the SDP scalars.
        basis: Gram basis z, defaults to default_basis(H).
        slack: If given, index of a scalar t and the block is relaxed to G + t I >= 0.
        name: Name of the Gram block.

    Returns:
        Index matrix of the Gram block and the basis used.

    Raises:
        ValueError: If H is not symmetric or the basis does not span a monomial with constant non-zero
            coefficient.
    """
    if not H.is_symmetric():
        raise ValueError('Matrix SOS target must be symmetric.')
    basis = default_basis(H) if basis is None else [tuple(m) for m in basis]
    r, q = H.rows, len(basis)

    # products of basis monomials, ordered pairs
    products = {}
    for a, za in enumerate(basis):
        for b, zb in enumerate(basis):
            products.setdefault(monomial_product(za, zb), []).append((a, b))

    # gram block
    idx = sdp.add_gram(r * q, name=name)

    # match coefficients
    missing = []
    for i in range(r):
        for j in range(i, r):
            target = H[i, j]
            monomials = set(products.keys()) | set(target.monomials())
            for alpha in sort_monomials(monomials):
                const, coeffs = _split(target.coefficient(alpha))
                row = {}

                # gram part
                for a, b in products.get(alpha, []):
                    var = int(idx[i * q + a, j * q + b])
                    row[var] = row.get(var, 0.) + 1.
                    if slack is not None and i == j and a == b:
                        row[slack] = row.get(slack, 0.) - 1.

                # target part
                for v, c in coeffs.items():
                    row[v] = row.get(v, 0.) - c

                # not spanned?
                if alpha not in products:
                    if not coeffs:
                        if abs(const) > SPAN_TOL:
                            missing.append(monomial_to_text(alpha) or '1')
                        continue
                sdp.add_equality(row, const)

    if missing:
        raise ValueError('Gram basis does not span the monomials: %s.' % ', '.join(sorted(set(missing))))
    return idx, basis


def compile_scalar_sos(sdp: SdpProblem, p: Polynomial, basis: Sequence[Monomial] = None,
                       slack: int = None, name: str = None) -> Tuple[np.ndarray, List[Monomial]]:
    """Adds the constraint p == z^T G z with G >= 0, see compile_matrix_sos."""
    return compile_matrix_sos(sdp, MatrixPolynomial([[p]]), basis, slack, name)


class PolyTemplate:
    """Polynomial with unknown coefficients, each a scalar of the SDP."""

    def __init__(self, n: int, monomials: List[Monomial], indices: Dict[Monomial, int],
                 fixed: Dict[Monomial, float] = None, name: str = None, even: bool = False):
        """Creates a template, usually through SosProgram.new_polynomial.

        Args:
            n: Number of variables.
            monomials: Monomials with free coefficients.
            indices: SDP scalar for each free coefficient.
            fixed: Monomials with given coefficients.
            name: Name for logging.
            even: Whether only even degree monomials are used.
        """
        self.n = n
        self.monomials = list(monomials)
        self.indices = dict(indices)
        self.fixed = {} if fixed is None else dict(fixed)
        self.name = name
        self.even = even

        # polynomial with affine coefficients
        terms = {m: Affine.variable(v) for m, v in self.indices.items()}
        terms.update({m: Affine(c) for m, c in self.fixed.items()})
        self.polynomial = Polynomial(n, terms)

    @property
    def degree(self) -> int:
        return max((monomial_degree(m) for m in list(self.monomials) + list(self.fixed.keys())), default=0)

    @property
    def variables(self) -> List[int]:
        return sorted(self.indices.values())

    def value(self, y: np.ndarray) -> Polynomial:
        """Real polynomial for the given SDP scalars."""
        return self.polynomial.map_coefficients(lambda c: substitute(c, y))


class SosConstraint:
    """A constraint of an SosProgram.

    Kinds are 'sos' (scalar), 'matrix-sos', 'equality' and 'sos-template' (polynomial that is SOS by
    construction).
    """

    def __init__(self, kind: str, target: Union[Polynomial, MatrixPolynomial], name: str, family: str = None,
                 basis: Sequence[Monomial] = None):
        self.kind = kind
        self.target = target
        self.name = name
        self.family = name if family is None else family
        self.basis = None if basis is None else [tuple(m) for m in basis]

        # filled on compilation
        self.gram = None    # type: Optional[int]

    @property
    def size(self) -> int:
        """Size r of the matrix, 1 for scalar constraints."""
        return self.target.rows if isinstance(self.target, MatrixPolynomial) else 1

    def matrix_target(self) -> MatrixPolynomial:
        return self.target if isinstance(self.target, MatrixPolynomial) else MatrixPolynomial([[self.target]])


class SosSolution:
    """Solution of an SosProgram."""

    def __init__(self, program: 'SosProgram', sdp: SdpSolution, diagnostic: dict = None):
        self.program = program
        self.sdp = sdp
        self.diagnostic = diagnostic

    @property
    def status(self) -> SdpStatus:
        return self.sdp.status

    @property
    def is_optimal(self) -> bool:
        return self.sdp.is_optimal

    @property
    def objective(self) -> Optional[float]:
        return self.sdp.objective

    def value(self, expr):
        """Substitutes the solved scalars into an Affine, Polynomial, MatrixPolynomial or PolyTemplate."""
        y = self.sdp.y
        if isinstance(expr, PolyTemplate):
            return expr.value(y)
        if isinstance(expr, Polynomial):
            return expr.map_coefficients(lambda c: substitute(c, y))
        if isinstance(expr, MatrixPolynomial):
            return expr.map_coefficients(lambda c: substitute(c, y))
        return substitute(expr, y)

    def gram(self, constraint: SosConstraint) -> np.ndarray:
        return self.sdp.grams[constraint.gram]

    def certificates(self, tol: float = 1e-6):
        from .certificate import extract_certificates
        return extract_certificates(self, tol=tol)


class SosProgram:
    """Declarative SOS program over polynomials in n variables, compiled to an SdpProblem on solve."""

    def __init__(self, n: int, name: str = None):
        """Creates a new program.

        Args:
            n: Number of state variables.
            name: Name for logging.
        """
        self.n = n
        self.name = name
        self._base = SdpProblem()
        self._constraints = []      # type: List[SosConstraint]
        self._objective = {}
        self._trace_weight = 0.

    @property
    def constraints(self) -> List[SosConstraint]:
        return self._constraints

    def _unique(self, name: str) -> str:
        # append counter to repeated names
        names = set(c.name for c in self._constraints)
        if name not in names:
            return name
        k = 2
        while '%s#%d' % (name, k) in names:
            k += 1
        return '%s#%d' % (name, k)

    def new_variable(self, name: str = None) -> Affine:
        """New free scalar."""
        return Affine.variable(self._base.add_variables(1)[0])

    def new_polynomial(self, degree: int, min_degree: int = 0, monomials: Sequence[Monomial] = None,
                       fixed: Dict[Monomial, float] = None, even: bool = False, name: str = None) -> PolyTemplate:
        """New polynomial with free coefficients.

        Args:
            degree: Maximum total degree.
            min_degree: Minimum total degree.
            monomials: Explicit monomials, overrides degree bounds.
            fixed: Monomials with given coefficient, e.g. a pinned constant term.
            even: Use only monomials of even total degree.
            name: Name for logging.

        Returns:
            New template.
        """
        if degree < 0:
            raise ValueError('Degree must not be negative.')
        fixed = {} if fixed is None else {tuple(m): float(c) for m, c in fixed.items()}
        if monomials is None:
            monomials = monomial_basis(self.n, degree, d_min=min_degree)
        monomials = [tuple(m) for m in monomials if tuple(m) not in fixed]
        if even:
            monomials = [m for m in monomials if monomial_degree(m) % 2 == 0]
        indices = dict(zip(monomials, self._base.add_variables(len(monomials))))
        return PolyTemplate(self.n, monomials, indices, fixed, name, even)

    def new_matrix_polynomial(self, rows: int, cols: int, degree: int, name: str = None,
                              **kwargs) -> Tuple[MatrixPolynomial, List[PolyTemplate]]:
        """New matrix of polynomials with free coefficients, entries created with new_polynomial."""
        templates = [self.new_polynomial(degree, name='%s[%d,%d]' % (name, i, j), **kwargs)
                     for i in range(rows) for j in range(cols)]
        M = MatrixPolynomial([[templates[i * cols + j].polynomial for j in range(cols)] for i in range(rows)],
                             n=self.n)
        return M, templates

    def new_sos_polynomial(self, degree: int, basis: Sequence[Monomial] = None, name: str = None) -> PolyTemplate:
        """New polynomial that is SOS by construction, z^T G z with a Gram block G >= 0.

        Args:
            degree: Degree, the basis has all monomials up to degree // 2.
            basis: Explicit basis.
            name: Name for certificates.
        """
        basis = monomial_basis(self.n, degree // 2) if basis is None else [tuple(m) for m in basis]
        idx = self._base.add_gram(len(basis), name=name)

        # build z^T G z directly
        terms = {}
        for a, za in enumerate(basis):
            for b, zb in enumerate(basis):
                m = monomial_product(za, zb)
                terms[m] = terms.get(m, Affine()) + Affine.variable(int(idx[a, b]))
        template = PolyTemplate(self.n, [], {}, name=name)
        template.polynomial = Polynomial(self.n, terms)
        template.gram_index = idx

        # remember for certificates
        constraint = SosConstraint('sos-template', template.polynomial, self._unique(name or 'sos'), basis=basis)
        constraint.gram = len(self._base.grams) - 1
        self._constraints.append(constraint)
        return template

    def add_sos(self, p: Polynomial, basis: Sequence[Monomial] = None, name: str = None,
                family: str = None) -> SosConstraint:
        """Requires p to be SOS."""
        if p.n != self.n:
            raise ValueError('Variable count mismatch: %d != %d.' % (self.n, p.n))
        constraint = SosConstraint('sos', p, self._unique(name or 'sos'), family, basis)
        self._constraints.append(constraint)
        return constraint

    def add_matrix_sos(self, H: MatrixPolynomial, basis: Sequence[Monomial] = None, name: str = None,
                       family: str = None) -> SosConstraint:
        """Requires the symmetric matrix polynomial H to be SOS."""
        if H.n != self.n:
            raise ValueError('Variable count mismatch: %d != %d.' % (self.n, H.n))
        if not H.is_symmetric():
            raise ValueError('Matrix SOS target must be symmetric.')
        constraint = SosConstraint('matrix-sos', H, self._unique(name or 'matrix-sos'), family, basis)
        self._constraints.append(constraint)
        return constraint

    def add_equality(self, p: Polynomial, name: str = None) -> SosConstraint:
        """Requires p to vanish identically."""
        constraint = SosConstraint('equality', p, self._unique(name or 'equality'))
        self._constraints.append(constraint)
        for m, c in p.terms.items():
            const, coeffs = _split(c)
            if not coeffs:
                raise InfeasibleError('Equality %s has constant non-zero coefficient %g.' % (constraint.name, const))
            self._base.add_equality(coeffs, -const)
        return constraint

    def add_nonnegative(self, expr: Affine, name: str = None):
        """Requires the scalar expression to be non-negative."""
        const, coeffs = _split(expr)
        self._base.add_nonnegative(coeffs, const, name=name)

    def add_fixed(self, expr: Affine, value: float):
        """Requires the scalar expression to have the given value."""
        const, coeffs = _split(expr)
        self._base.add_equality(coeffs, value - const)

    def maximize(self, expr: Affine):
        """Sets the objective to maximize, a constant part is ignored."""
        self._objective = _split(expr)[1]

    def minimize_gram_trace(self, weight: float = 1.):
        """Adds weight * (sum of traces of all Gram blocks) as a penalty, 0 disables it."""
        self._trace_weight = weight

    def compile(self, diagnose: bool = False) -> Tuple[SdpProblem, Dict[str, int]]:
        """Builds the SDP.

        Args:
            diagnose: Relax the Gram blocks of each constraint family by a slack and minimize the slacks.

        Returns:
            Problem and, if diagnosing, the slack variable of each family.
        """
        sdp = self._base.copy()

        # slacks
        slacks = {}
        if diagnose:
            for c in self._constraints:
                if c.kind in ('sos', 'matrix-sos') and c.family not in slacks:
                    slacks[c.family] = sdp.add_variables(1)[0]
                    sdp.add_nonnegative({slacks[c.family]: 1.}, name='slack-%s' % c.family)

        # sos constraints
        for c in self._constraints:
            if c.kind in ('sos', 'matrix-sos'):
                _, basis = compile_matrix_sos(sdp, c.matrix_target(), c.basis, slacks.get(c.family), c.name)
                c.basis = basis
                c.gram = len(sdp.grams) - 1

        # objective
        if diagnose:
            sdp.set_objective({t: -1. for t in slacks.values()})
        else:
            sdp.set_objective(self._objective)
            if self._trace_weight > 0:
                trace = {}
                for gram in sdp.grams:
                    for a in range(gram.size):
                        trace[int(gram.index[a, a])] = -self._trace_weight
                sdp.add_objective(trace)
        return sdp, slacks

    def solve(self, solver: Union[SdpSolver, dict] = None, diagnose: bool = False) -> SosSolution:
        """Compiles and solves the program.

        Args:
            solver: SDP solver to use.
            diagnose: If the program is not solved to optimality, identify the constraint families that
                need a slack.

        Returns:
            Solution, with diagnostic attached if requested and the solve failed.
        """
        solver = get_solver(solver)
        sdp, _ = self.compile()
        log.debug('Program %s: %s.', self.name, sdp.describe())
        solution = SosSolution(self, solver.solve(sdp))
        if not solution.is_optimal and diagnose:
            solution.diagnostic = self.diagnose(solver)
        return solution

    def diagnose(self, solver: Union[SdpSolver, dict] = None, tol: float = 1e-6) -> dict:
        """Finds the constraint families that cannot be satisfied without slack.

        Returns:
            Dict with the slack per family and the list of failing families.
        """
        solver = get_solver(solver)
        sdp, slacks = self.compile(diagnose=True)
        result = solver.solve(sdp)
        if not result.is_optimal:
            return {'status': result.status.value, 'failing': sorted(slacks.keys()), 'slacks': {}}
        values = {family: float(result.y[t]) for family, t in sorted(slacks.items())}
        failing = [family for family, v in values.items() if v > tol]
        log.info('Constraint families needing slack: %s.', ', '.join(failing) if failing else 'none')
        return {'status': result.status.value, 'failing': failing, 'slacks': values}


__all__ = ['SosProgram', 'SosSolution', 'SosConstraint', 'PolyTemplate', 'compile_scalar_sos', 'compile_matrix_sos',
           'default_basis']
