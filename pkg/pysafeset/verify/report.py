import logging
from typing import Dict, Optional

import numpy as np

from .checks import BoundaryCheck, ContainmentCheck, check_boundary, check_containments, h_scale
from .members import ParameterFamily
from .simulation import ClosedLoopRun, simulate_closed_loop, sample_initial_states, level_grid
from ..data.ellipsoid import ConsistencyEllipsoid
from ..data.system import PolySystem
from ..poly import MatrixPolynomial
from ..synth.alternation import SynthesisResult
from ..synth.spec import SafeSpec
from ..utils.files import write_csv

log = logging.getLogger(__name__)


class VerificationReport:
    """Outcome of all independent checks of a synthesis result."""

    def __init__(self, certificates: Dict[str, dict], boundary: Dict[str, BoundaryCheck],
                 containment: ContainmentCheck, trajectories: Optional[ClosedLoopRun] = None,
                 settings: dict = None):
        self.certificates = certificates
        self.boundary = boundary
        self.containment = containment
        self.trajectories = trajectories
        self.settings = {} if settings is None else settings

    @property
    def residual_max(self) -> float:
        return max((c['residual'] for c in self.certificates.values()), default=0.)

    @property
    def certificates_valid(self) -> bool:
        return all(c['valid'] for c in self.certificates.values())

    @property
    def passed(self) -> bool:
        if not self.certificates_valid or not self.containment.passed:
            return False
        if not all(b.passed for b in self.boundary.values()):
            return False
        return self.trajectories is None or not np.any(self.trajectories.escapes)

    def to_dict(self) -> dict:
        return {
            'passed': self.passed,
            'certificates': {'count': len(self.certificates), 'valid': self.certificates_valid,
                             'residual_max': self.residual_max,
                             'invalid': sorted(k for k, c in self.certificates.items() if not c['valid'])},
            'boundary': {k: b.to_dict() for k, b in self.boundary.items()},
            'containment': self.containment.to_dict(),
            'trajectories': None if self.trajectories is None else self.trajectories.to_dict(),
            'settings': self.settings
        }


def verify_result(result: SynthesisResult, spec: SafeSpec, system: PolySystem = None,
                  ellipsoid: ConsistencyEllipsoid = None, Z: MatrixPolynomial = None, W: MatrixPolynomial = None,
                  eps: float = 0., n_boundary: int = 10000, n_members: int = 50, n_containment: int = 10000,
                  n_trajectories: int = 100, horizon: float = 100., dt: float = 0.01, seed: int = 0,
                  lie_tol: float = 1e-4, containment_tol: float = 1e-6, escape_tol: float = 1e-6) \
        -> VerificationReport:
    """Checks a synthesis result independently of the solver.

    The Gram certificates stored in the result are checked again, the boundary condition is sampled for the
    ground truth and for random members of the ellipsoid, the set containments are sampled, and closed-loop
    trajectories are started just outside {h <= 0}. Without a ground truth system, trajectories use the
    center of the ellipsoid.

    Args:
        result: Result to check.
        spec: Safe set specification.
        system: Ground truth, if known.
        ellipsoid: Ellipsoid the result was synthesized for.
        Z: Regressor of the ellipsoid, taken from the system if not given.
        W: Input regressor of the ellipsoid, taken from the system if not given.
        eps: Margin required on the boundary, usually the one used for synthesis.
        n_boundary: Number of samples for the boundary check.
        n_members: Number of ellipsoid members.
        n_containment: Number of Sobol samples for the containment check.
        n_trajectories: Number of trajectories, 0 disables the simulation.
        horizon: Simulated time.
        dt: Step size.
        seed: Seed for all random draws.
        lie_tol: Tolerance on the boundary margin.
        containment_tol: Relative tolerance for containments.
        escape_tol: Relative tolerance of h for escapes.

    Returns:
        Report.

    Raises:
        ValueError: If neither system nor ellipsoid is given.
    """
    if system is None and ellipsoid is None:
        raise ValueError('Need a system or an ellipsoid to verify against.')
    if Z is None or W is None:
        if system is None:
            raise ValueError('Need Z and W to verify against an ellipsoid.')
        Z, W = system.Z, system.W
    box = spec.bounding_box()

    # certificates
    certificates = {c.constraint_id: {'residual': float(c.residual), 'valid': c.valid,
                                      'valid_absolute': c.valid_absolute}
                    for c in result.certificates}
    log.info('Checked %d certificate(s), max residual %.3g.', len(certificates),
             max((c['residual'] for c in certificates.values()), default=0.))

    # boundary
    boundary = {}
    if system is not None:
        boundary['ground-truth'] = check_boundary(result.h, result.K, system, eps, box, n_boundary, seed,
                                                  tol=lie_tol)
    if ellipsoid is not None:
        family = ParameterFamily.from_ellipsoid(ellipsoid, Z, W, n_members, seed)
        boundary['ellipsoid'] = check_boundary(result.h, result.K, family, eps, box, n_boundary, seed,
                                               tol=lie_tol)

    # containments
    containment = check_containments(result.h, spec, result.theta, n_samples=n_containment, seed=seed,
                                     tol=containment_tol)

    # trajectories
    run = None
    if n_trajectories > 0:
        dynamics = system
        if dynamics is None:
            log.info('No ground truth given, simulating the center of the ellipsoid.')
            dynamics = ParameterFamily(Z, W, [ellipsoid.zeta]).system()
        x0 = sample_initial_states(result.h, box, n_trajectories, seed)
        run = simulate_closed_loop(dynamics, result.K, x0, horizon, dt, result.h,
                                   tol=escape_tol * h_scale(result.h, box, seed=seed),
                                   sample_every=max(1, int(round(0.1 / dt))))

    settings = {'n_boundary': n_boundary, 'n_members': n_members, 'n_containment': n_containment,
                'n_trajectories': n_trajectories, 'horizon': horizon, 'dt': dt, 'seed': seed, 'eps': eps,
                'lie_tol': lie_tol, 'containment_tol': containment_tol, 'escape_tol': escape_tol}
    report = VerificationReport(certificates, boundary, containment, run, settings)
    if report.passed:
        log.info('Verification passed.')
    else:
        log.warning('Verification failed.')
    return report


def write_trajectories(filename: str, run: ClosedLoopRun):
    """Writes trajectories as CSV with columns traj_id, t, x1..xn, h."""
    write_csv(filename, run.to_table())


def write_level_grid(filename: str, result: SynthesisResult, spec: SafeSpec, resolution: int = None):
    """Writes h, lambda and max sigma_j on a grid over the bounding box of S."""
    if resolution is None:
        resolution = 200 if spec.n <= 2 else 30
    write_csv(filename, level_grid(result.h, spec.lam, spec.sigmas, spec.bounding_box(), resolution))


__all__ = ['VerificationReport', 'verify_result', 'write_trajectories', 'write_level_grid']
