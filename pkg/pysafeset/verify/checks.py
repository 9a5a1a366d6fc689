import logging
from typing import Tuple, Union

import numpy as np
from scipy.stats import qmc

from .members import ParameterFamily
from ..data.system import PolySystem
from ..poly import Polynomial, MatrixPolynomial
from ..synth.spec import SafeSpec

log = logging.getLogger(__name__)


def sobol_points(box: np.ndarray, count: int, seed: int = 0, margin: float = 0.) -> np.ndarray:
    """Scrambled Sobol points in a box of shape (n, 2), optionally enlarged by a relative margin."""
    box = np.asarray(box, dtype=float)
    width = box[:, 1] - box[:, 0]
    lo, hi = box[:, 0] - margin * width, box[:, 1] + margin * width
    hi = np.where(hi > lo, hi, lo + 1e-9)
    sobol = qmc.Sobol(d=len(box), scramble=True, seed=seed)
    return qmc.scale(sobol.random(count), lo, hi)


def grid_points(box: np.ndarray, resolution: int) -> np.ndarray:
    """Regular grid with resolution points per axis."""
    axes = [np.linspace(lo, hi, resolution) for lo, hi in np.asarray(box, dtype=float)]
    return np.stack([a.ravel() for a in np.meshgrid(*axes, indexing='ij')], axis=1)


def h_scale(h: Polynomial, box: np.ndarray, count: int = 4096, seed: int = 0) -> float:
    """max |h| over the box, used to make tolerances independent of the arbitrary magnitude of h."""
    return float(max(np.max(np.abs(h.evaluate_many(sobol_points(box, count, seed)))), 1e-12))


def project_to_level(h: Polynomial, points: np.ndarray, level: Union[float, np.ndarray] = 0., steps: int = 30) \
        -> np.ndarray:
    """Newton projection of points onto {h = level} along the gradient."""
    grad = h.gradient()
    x = np.array(points, dtype=float)
    for _ in range(steps):
        g = grad.evaluate_many(x)[:, 0, :]
        norm2 = np.sum(g ** 2, axis=1)
        r = h.evaluate_many(x) - level
        with np.errstate(divide='ignore', invalid='ignore'):
            step = np.where(norm2 > 0, r / norm2, 0.)
        x = x - step[:, None] * g
    return x


def boundary_points(h: Polynomial, box: np.ndarray, count: int, seed: int = 0, band: float = 1e-3) \
        -> Tuple[np.ndarray, float]:
    """Points on {h = 0} inside the box, from projected Sobol samples.

    Returns:
        Points with |h| <= band * scale and the scale.
    """
    scale = h_scale(h, box, seed=seed)
    x = project_to_level(h, sobol_points(box, count, seed))
    with np.errstate(invalid='ignore'):
        keep = np.all(np.isfinite(x), axis=1) & (np.abs(h.evaluate_many(np.nan_to_num(x))) <= band * scale)
        width = box[:, 1] - box[:, 0]
        keep &= np.all((x >= box[:, 0] - 0.1 * width) & (x <= box[:, 1] + 0.1 * width), axis=1)
    return x[keep], scale


class BoundaryCheck:
    """Worst Lie derivative of h along the closed loop on the boundary of {h <= 0}."""

    def __init__(self, source: str, worst: float, points: int, members: int, eps: float, tol: float):
        self.source = source
        self.worst = worst
        self.points = points
        self.members = members
        self.eps = eps
        self.tol = tol

    @property
    def found(self) -> bool:
        """Whether any boundary point was found."""
        return self.points > 0

    @property
    def passed(self) -> bool:
        return self.found and self.worst <= -self.eps + self.tol

    def to_dict(self) -> dict:
        return {'source': self.source, 'worst': self.worst, 'points': self.points, 'members': self.members,
                'eps': self.eps, 'tol': self.tol, 'found': self.found, 'passed': self.passed}


def check_boundary(h: Polynomial, K: MatrixPolynomial, dynamics: Union[PolySystem, ParameterFamily], eps: float,
                   box: np.ndarray, n_samples: int = 10000, seed: int = 0, band: float = 1e-3,
                   tol: float = 1e-4) -> BoundaryCheck:
    """Evaluates dh f_cl at sampled boundary points for every member of the dynamics.

    Args:
        h: Invariant set {h <= 0}.
        K: Controller.
        dynamics: Ground truth system or family of parameter matrices.
        eps: Required margin.
        box: Box to sample in.
        n_samples: Number of Sobol points before projection.
        seed: Seed for the scramble.
        band: Points with |h| <= band * scale count as boundary points.
        tol: Tolerance on -eps.

    Returns:
        Check result, which fails if no boundary point was found.
    """
    if h.is_constant():
        raise ValueError('h must not be constant.')
    family = ParameterFamily.from_system(dynamics) if isinstance(dynamics, PolySystem) else dynamics
    points, scale = boundary_points(h, np.asarray(box, dtype=float), n_samples, seed, band)
    if len(points) == 0:
        log.warning('No boundary of h found in the box, h might be sign-constant there.')
        return BoundaryCheck(family.name, float('nan'), 0, len(family), eps, tol)

    # lie derivatives
    dh = h.gradient().evaluate_many(points)[:, 0, :]
    f = family.closed_loop(K, points)
    lie = np.einsum('pj,kpj->kp', dh, f)
    worst = float(np.max(lie))
    log.info('Worst Lie derivative for %s at %d boundary points and %d member(s): %.4g.', family.name,
             len(points), len(family), worst)
    return BoundaryCheck(family.name, worst, len(points), len(family), eps, tol)


class ContainmentCheck:
    """Violations of L_theta inside {h <= 0} and of {h <= 0} inside S at sample points."""

    def __init__(self, points: int, level_violations: int, safety_violations: int, scale: float, tol: float):
        self.points = points
        self.level_violations = level_violations
        self.safety_violations = safety_violations
        self.scale = scale
        self.tol = tol

    @property
    def violations(self) -> int:
        return self.level_violations + self.safety_violations

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_dict(self) -> dict:
        return {'points': self.points, 'level_violations': self.level_violations,
                'safety_violations': self.safety_violations, 'scale': self.scale, 'tol': self.tol,
                'passed': self.passed}


def check_containments(h: Polynomial, spec: SafeSpec, theta: float, resolution: int = None, n_samples: int = 10000,
                       seed: int = 0, tol: float = 1e-6, margin: float = 0.1) -> ContainmentCheck:
    """Counts sample points where lambda <= theta but h > 0, or h <= 0 but some sigma_j > 0.

    Points are a regular grid plus Sobol samples in the bounding box of S, enlarged by margin.

    Args:
        h: Invariant set {h <= 0}.
        spec: Safe set specification.
        theta: Size of L_theta.
        resolution: Grid points per axis, defaults to about 10^4 grid points in total.
        n_samples: Number of Sobol points.
        seed: Seed for the scramble.
        tol: Tolerance relative to the scale of h and of the sigma_j.
        margin: Relative enlargement of the box.
    """
    box = spec.bounding_box()
    width = box[:, 1] - box[:, 0]
    big = np.column_stack([box[:, 0] - margin * width, box[:, 1] + margin * width])
    if resolution is None:
        resolution = max(2, int(np.ceil(1e4 ** (1. / spec.n))))
    points = np.vstack([grid_points(big, resolution), sobol_points(big, n_samples, seed)])

    # values
    hv = h.evaluate_many(points)
    lv = spec.lam.evaluate_many(points)
    sv = spec.max_sigma(points)
    scale = h_scale(h, box, seed=seed)
    sigma_scale = 1. + float(np.max(np.abs(sv)))

    # count
    level = int(np.sum((lv <= theta) & (hv > tol * scale)))
    safety = int(np.sum((hv <= 0.) & (sv > tol * sigma_scale)))
    log.info('Containment check at %d points: %d level set and %d safety violations.', len(points), level, safety)
    return ContainmentCheck(len(points), level, safety, scale, tol)


__all__ = ['sobol_points', 'grid_points', 'h_scale', 'project_to_level', 'boundary_points', 'BoundaryCheck',
           'check_boundary', 'ContainmentCheck', 'check_containments']
