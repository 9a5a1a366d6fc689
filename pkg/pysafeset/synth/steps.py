import logging
from typing import List, Optional, Union

import numpy as np

from .conditions import InvarianceCondition
from .spec import SafeSpec, DegreeProfile
from ..exceptions import InfeasibleError, NumericalError, UnboundedError
from ..poly import Polynomial, MatrixPolynomial
from ..sdp import SdpSolver, SdpStatus
from ..sos import Affine, SosProgram, SosSolution, SosConstraint

log = logging.getLogger(__name__)


class ControllerStep:
    """Solved controller side of an iteration: multiplier l, controller K and the SOS multipliers."""

    def __init__(self, l: Polynomial, K: MatrixPolynomial, s: List[Polynomial], varsigma: Polynomial,
                 mu: Optional[Polynomial], solution: SosSolution, r: Optional[Polynomial] = None):
        self.l = l
        self.K = K
        self.s = s
        self.varsigma = varsigma
        self.mu = mu
        self.r = r
        self.solution = solution


class EnlargeStep:
    """Solved set side of an iteration: h, eta and the size theta of L_theta."""

    def __init__(self, h: Polynomial, eta: Polynomial, theta: float, solution: SosSolution):
        self.h = h
        self.eta = eta
        self.theta = theta
        self.solution = solution


def add_level_set_constraint(program: SosProgram, h: Polynomial, varsigma: Polynomial, lam: Polynomial,
                             theta: Union[float, Affine]) -> SosConstraint:
    """varsigma (lambda - theta) - h is SOS, so that L_theta lies inside {h <= 0}."""
    return program.add_sos(varsigma * (lam - theta) - h, name='level-set', family='level-set')


def add_safety_constraints(program: SosProgram, h: Polynomial, s: List[Polynomial],
                           sigmas: List[Polynomial]) -> List[SosConstraint]:
    """s_j h - sigma_j is SOS for all j, so that {h <= 0} lies inside S."""
    return [program.add_sos(s_j * h - sigma, name='safety-%d' % (j + 1), family='safety')
            for j, (s_j, sigma) in enumerate(zip(s, sigmas))]


def input_bound_constraint(program: SosProgram, K: MatrixPolynomial, u_max: float, h: Polynomial = None,
                           r: Polynomial = None) -> SosConstraint:
    """[[u_max^2, K^T], [K, I]] + r h I is an SOS matrix, i.e. |K(x)| <= u_max wherever h(x) <= 0.

    Without h the bound holds everywhere, which leaves only constant controllers.

    Args:
        program: Program to add the constraint to.
        K: Controller of shape (m, 1).
        u_max: Bound on the norm of K(x) itself, it enters the corner of the matrix squared.
        h: Region {h <= 0} the bound is needed on.
        r: SOS multiplier of h, required with h.

    Raises:
        ValueError: If u_max is not positive or h is given without r.
    """
    if u_max <= 0:
        raise ValueError('Input bound must be positive.')
    if (h is None) != (r is None):
        raise ValueError('Region and multiplier must be given together.')
    n, m = K.n, K.rows
    M = MatrixPolynomial.block([
        [MatrixPolynomial.from_array(n, [[u_max ** 2]]), K.T],
        [K, MatrixPolynomial.identity(n, m)]
    ])
    if h is not None:
        M = M + MatrixPolynomial.identity(n, m + 1) * (r * h)
    return program.add_matrix_sos(M, name='input-bound', family='input-bound')


def robustness_margin_constraint(program: SosProgram, h: Polynomial, eps: float, omega: float,
                                 mu: Polynomial) -> SosConstraint:
    """-([[-eps^2/omega, dh], [dh^T, -I]] + mu h I) is an SOS matrix.

    On the boundary h = 0 this gives |dh|^2 <= eps^2 / omega, so the margin eps dominates any disturbance
    with |d|^2 <= omega.

    Raises:
        ValueError: If omega is not positive.
    """
    if omega <= 0:
        raise ValueError('Disturbance bound must be positive.')
    n = h.n
    dh = h.gradient()
    M = MatrixPolynomial.block([
        [MatrixPolynomial.from_array(n, [[-eps ** 2 / omega]]), dh],
        [dh.T, MatrixPolynomial.identity(n, n) * -1.]
    ])
    M = M + MatrixPolynomial.identity(n, n + 1) * (mu * h)
    return program.add_matrix_sos(-M, name='robustness', family='robustness')


def _check_solution(solution: SosSolution, step: str):
    """Raises the matching error for a failed solve."""
    if solution.is_optimal:
        return
    diagnostic = {} if solution.diagnostic is None else dict(solution.diagnostic)
    diagnostic['step'] = step
    if solution.status == SdpStatus.INFEASIBLE:
        raise InfeasibleError('The %s step is infeasible, failing constraint families: %s.'
                              % (step, ', '.join(diagnostic.get('failing', [])) or 'unknown'), diagnostic=diagnostic)
    if solution.status == SdpStatus.UNBOUNDED:
        raise UnboundedError('The %s step is unbounded, is the safe set bounded?' % step)
    raise NumericalError('The %s step failed: %s' % (step, solution.sdp.message),
                         residuals=solution.sdp.residuals, iterations=solution.sdp.iterations)


def step_controller(h: Polynomial, eta: Polynomial, theta: float, spec: SafeSpec, profile: DegreeProfile,
                    condition: InvarianceCondition, solver: Union[SdpSolver, dict] = None) -> ControllerStep:
    """Finds l, K, s_j, varsigma (and mu, r) for fixed h, eta and theta.

    Args:
        h: Current h.
        eta: Current eta.
        theta: Current size of L_theta.
        spec: Safe set specification.
        profile: Degrees and settings.
        condition: Invariance condition.
        solver: SDP solver.

    Returns:
        Solved controller side.

    Raises:
        InfeasibleError: If no controller exists, with the failing constraint families as diagnostic.
        NumericalError: If the solver fails.
    """
    program = SosProgram(spec.n, name='controller')

    # unknowns
    l = program.new_polynomial(profile.deg_l, name='l')
    K, _ = program.new_matrix_polynomial(condition.m, 1, profile.deg_K, name='K')
    s = [program.new_sos_polynomial(profile.deg_s, name='s%d' % (j + 1)) for j in range(spec.q)]
    varsigma = program.new_sos_polynomial(profile.deg_varsigma, name='varsigma')

    # constraints
    condition.add_to(program, h, K, l.polynomial, eta, profile.eps)
    add_level_set_constraint(program, h, varsigma.polynomial, spec.lam, theta)
    add_safety_constraints(program, h, [t.polynomial for t in s], spec.sigmas)
    mu = r = None
    if profile.robust_omega is not None:
        mu = program.new_polynomial(profile.deg_mu, name='mu')
        robustness_margin_constraint(program, h, profile.eps, profile.robust_omega, mu.polynomial)
    if profile.input_bound is not None:
        r = program.new_sos_polynomial(profile.deg_input, name='r')
        input_bound_constraint(program, K, profile.input_bound, h, r.polynomial)
    program.minimize_gram_trace(profile.trace_weight)

    # solve
    solution = program.solve(solver, diagnose=True)
    _check_solution(solution, 'controller')
    return ControllerStep(solution.value(l), solution.value(K), [solution.value(t) for t in s],
                          solution.value(varsigma), None if mu is None else solution.value(mu), solution,
                          None if r is None else solution.value(r))


def step_enlarge(ctrl: ControllerStep, spec: SafeSpec, profile: DegreeProfile, condition: InvarianceCondition,
                 solver: Union[SdpSolver, dict] = None, check_points: int = 1024) -> EnlargeStep:
    """Maximizes theta over eta, h for fixed l, K, s_j, varsigma (and mu, r).

    The constant coefficient of h is fixed to profile.h_pin. Unless profile.strict_eta is set, eta is only
    required to be SOS and eta >= eta_bar is checked afterwards on sample points.

    Args:
        ctrl: Solved controller side.
        spec: Safe set specification.
        profile: Degrees and settings.
        condition: Invariance condition.
        solver: SDP solver.
        check_points: Number of sample points for checking eta.

    Returns:
        Solved set side.

    Raises:
        InfeasibleError: If infeasible or eta fails its check.
        UnboundedError: If theta is unbounded.
        NumericalError: If the solver fails.
    """
    program = SosProgram(spec.n, name='enlarge')

    # unknowns
    h = program.new_polynomial(profile.deg_h, fixed={(0,) * spec.n: profile.h_pin}, name='h')
    eta = program.new_polynomial(profile.deg_eta, name='eta')
    theta = program.new_variable('theta')
    program.add_nonnegative(theta, name='theta')

    # constraints
    program.add_sos(eta.polynomial - (profile.eta_bar if profile.strict_eta else 0.), name='eta', family='eta')
    condition.add_to(program, h.polynomial, ctrl.K, ctrl.l, eta.polynomial, profile.eps)
    add_level_set_constraint(program, h.polynomial, ctrl.varsigma, spec.lam, theta)
    add_safety_constraints(program, h.polynomial, ctrl.s, spec.sigmas)
    if ctrl.mu is not None:
        robustness_margin_constraint(program, h.polynomial, profile.eps, profile.robust_omega, ctrl.mu)
    if ctrl.r is not None:
        input_bound_constraint(program, ctrl.K, profile.input_bound, h.polynomial, ctrl.r)
    program.maximize(theta)

    # solve
    solution = program.solve(solver, diagnose=True)
    _check_solution(solution, 'enlarge')
    result = EnlargeStep(solution.value(h), solution.value(eta), solution.value(theta), solution)

    # check eta
    if not profile.strict_eta:
        eta_min = float(np.min(result.eta.evaluate_many(spec.sample(check_points, margin=0.1))))
        if eta_min < profile.eta_bar:
            log.warning('eta has minimum %g below %g at sample points.', eta_min, profile.eta_bar)
            raise InfeasibleError('eta is not bounded away from zero (min %g).' % eta_min,
                                  diagnostic={'step': 'enlarge', 'eta_min': eta_min})
    return result


__all__ = ['ControllerStep', 'EnlargeStep', 'step_controller', 'step_enlarge', 'input_bound_constraint',
           'robustness_margin_constraint', 'add_level_set_constraint', 'add_safety_constraints']
