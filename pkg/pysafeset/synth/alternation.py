import logging
from typing import List, Optional, Union

from .conditions import InvarianceCondition
from .spec import SafeSpec, DegreeProfile
from .steps import ControllerStep, EnlargeStep, step_controller, step_enlarge
from ..exceptions import CertificateError, InfeasibleError, NumericalError
from ..poly import Polynomial, MatrixPolynomial, polynomial_terms, polynomial_from_terms
from ..sdp import SdpSolver
from ..sos import GramCertificate, check_certificates

log = logging.getLogger(__name__)

# largest accepted decrease of theta between iterations
MONOTONE_TOL = 1e-6


class SynthesisResult:
    """Controller K and invariant set {h <= 0} with L_theta inside it and it inside the safe set."""

    def __init__(self, h: Polynomial, K: MatrixPolynomial, theta: float, eta: Polynomial = None,
                 l: Polynomial = None, s: List[Polynomial] = None, varsigma: Polynomial = None,
                 mu: Polynomial = None, iterations: List[dict] = None, certificates: List[GramCertificate] = None,
                 provenance: str = None, ellipsoid: dict = None):
        self.h = h
        self.K = K
        self.theta = theta
        self.eta = eta
        self.l = l
        self.s = [] if s is None else s
        self.varsigma = varsigma
        self.mu = mu
        self.iterations = [] if iterations is None else iterations
        self.certificates = [] if certificates is None else certificates
        self.provenance = provenance
        self.ellipsoid = ellipsoid

    @property
    def n(self) -> int:
        return self.h.n

    def summary(self, prune: float = 1e-5) -> str:
        """Human readable summary, coefficients with absolute value below prune are not shown."""
        lines = ['theta = %.6g after %d iteration(s), %s' % (self.theta, len(self.iterations), self.provenance),
                 'h(x) = %s' % self.h.truncate(prune)]
        for i in range(self.K.rows):
            lines.append('K%d(x) = %s' % (i + 1, self.K[i, 0].truncate(prune)))
        bad = [c.constraint_id for c in self.certificates if not c.valid]
        lines.append('%d certificate(s), %s' % (len(self.certificates),
                                                 'all valid' if not bad else 'invalid: ' + ', '.join(bad)))
        return '\n'.join(lines)

    def to_dict(self) -> dict:
        """Result in JSON form, the full Gram matrices are left to certificates_dict()."""
        def terms(p):
            return None if p is None else polynomial_terms(p)
        return {
            'n': self.n,
            'theta': self.theta,
            'h': terms(self.h),
            'K': [terms(self.K[i, 0]) for i in range(self.K.rows)],
            'eta': terms(self.eta),
            'l': terms(self.l),
            's': [terms(p) for p in self.s],
            'varsigma': terms(self.varsigma),
            'mu': terms(self.mu),
            'iterations': self.iterations,
            'certificates': [{'id': c.constraint_id, 'family': c.family, 'residual': c.residual,
                              'min_eig': c.min_eig, 'valid': c.valid, 'valid_absolute': c.valid_absolute}
                             for c in self.certificates],
            'provenance': self.provenance,
            'ellipsoid': self.ellipsoid
        }

    def certificates_dict(self) -> List[dict]:
        return [c.to_dict() for c in self.certificates]

    @staticmethod
    def from_dict(data: dict, certificates: List[dict] = None) -> 'SynthesisResult':
        """Reads a result written by to_dict, optionally with the certificates from certificates_dict."""
        n = int(data['n'])

        def poly(terms):
            return None if terms is None else polynomial_from_terms(terms, n)

        K = MatrixPolynomial.column([poly(t) for t in data['K']], n=n)
        certs = [GramCertificate.from_dict(c) for c in certificates] if certificates else []
        return SynthesisResult(poly(data['h']), K, float(data['theta']), eta=poly(data.get('eta')),
                               l=poly(data.get('l')), s=[poly(t) for t in data.get('s', [])],
                               varsigma=poly(data.get('varsigma')), mu=poly(data.get('mu')),
                               iterations=data.get('iterations'), certificates=certs,
                               provenance=data.get('provenance'), ellipsoid=data.get('ellipsoid'))

    def __repr__(self):
        return 'SynthesisResult(theta=%g, iterations=%d)' % (self.theta, len(self.iterations))


def default_initial_h(spec: SafeSpec, profile: DegreeProfile) -> Polynomial:
    """c g, with g = spec.init_h or lambda - theta0 and c > 0 chosen so that the constant coefficient equals
    profile.h_pin.

    Raises:
        ValueError: If the pin has the wrong sign, i.e. c would not be positive.
    """
    g = spec.lam - spec.theta0 if spec.init_h is None else spec.init_h
    const = g.coefficient((0,) * spec.n)
    if const == 0. or profile.h_pin / const <= 0.:
        raise ValueError('Constant coefficient of the initial h is %g, h_pin must be non-zero and have the same '
                         'sign, but is %g.' % (const, profile.h_pin))
    return g * (profile.h_pin / const)


def _certify(ctrl: ControllerStep, enl: EnlargeStep) -> List[GramCertificate]:
    """Certificates of an iterate, multipliers from the controller step and all constraints of the enlarge step."""
    certs = [c for c in ctrl.solution.certificates() if c.kind == 'sos-template']
    certs.extend(enl.solution.certificates())
    check_certificates(certs)
    return certs


def alternate(spec: SafeSpec, profile: DegreeProfile, condition: InvarianceCondition, init_h: Polynomial = None,
              solver: Union[SdpSolver, dict] = None) -> SynthesisResult:
    """Alternates between the controller and the enlarge step until theta stops growing.

    A failed later iteration or one that shrinks theta ends the loop, the previous iterate is returned.

    Args:
        spec: Safe set specification.
        profile: Degrees and settings.
        condition: Invariance condition, data-driven or model-based.
        init_h: Initial h, defaults to default_initial_h.
        solver: SDP solver.

    Returns:
        Last certified iterate.

    Raises:
        InfeasibleError: If the first iteration fails.
    """
    h = default_initial_h(spec, profile) if init_h is None else init_h
    eta = Polynomial.constant(spec.n, 1.)
    theta = spec.theta0
    iterations = []
    best = None     # type: Optional[tuple]
    log.info('Starting alternation with theta0=%g, eps=%g, %s condition...', theta, profile.eps,
             condition.provenance)

    for it in range(1, profile.max_iter + 1):
        try:
            ctrl = step_controller(h, eta, theta, spec, profile, condition, solver)
            enl = step_enlarge(ctrl, spec, profile, condition, solver)
            certs = _certify(ctrl, enl)

            # theta must not shrink
            delta = enl.theta - theta
            if delta < -MONOTONE_TOL:
                raise NumericalError('theta decreased from %g to %g.' % (theta, enl.theta),
                                     residuals={'delta': delta})

        except (InfeasibleError, NumericalError, CertificateError) as e:
            if best is None:
                diagnostic = dict(getattr(e, 'diagnostic', {}))
                diagnostic['advice'] = 'Try a smaller theta0, larger degrees or more data.'
                raise InfeasibleError('First iteration failed: %s' % e, diagnostic=diagnostic, cause=e)
            log.warning('Iteration %d failed, keeping last certified iterate: %s', it, e)
            break

        # log it
        iterations.append({'iteration': it, 'theta': enl.theta, 'delta': delta,
                           'controller': ctrl.solution.sdp.stats(), 'enlarge': enl.solution.sdp.stats()})
        log.info('Iteration %d: theta=%.6g, delta=%.3g.', it, enl.theta, delta)

        # next
        best = (ctrl, enl, certs)
        h, eta, theta = enl.h, enl.eta, enl.theta
        if delta < profile.tol_theta:
            break

    # build result
    ctrl, enl, certs = best
    log.info('Finished after %d iteration(s) with theta=%.6g.', len(iterations), enl.theta)
    return SynthesisResult(enl.h, ctrl.K, enl.theta, eta=enl.eta, l=ctrl.l, s=ctrl.s, varsigma=ctrl.varsigma,
                           mu=ctrl.mu, iterations=iterations, certificates=certs, provenance=condition.provenance,
                           ellipsoid=condition.to_dict())


__all__ = ['SynthesisResult', 'alternate', 'default_initial_h']
