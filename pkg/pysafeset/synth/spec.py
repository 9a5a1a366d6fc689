import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from ..poly import Polynomial, parse_polynomial, polynomial_expression

log = logging.getLogger(__name__)


class SafeSpec:
    """Safe set S = {x: sigma_j(x) <= 0 for all j} and the variable-size set L_theta = {x: lambda(x) <= theta}.

    lambda must be non-negative and vanish at the center, so that L_theta grows with theta around it.
    """

    def __init__(self, sigmas: Sequence[Polynomial], lam: Polynomial, center: Sequence[float],
                 theta0: float = 0.01, box: Sequence[Tuple[float, float]] = None, init_h: Polynomial = None):
        """Creates a new safe set specification.

        Args:
            sigmas: Polynomials sigma_1..sigma_q.
            lam: Non-negative polynomial lambda.
            center: Point x_bar with lambda(x_bar) = 0.
            theta0: Initial size of L_theta.
            box: Bounding box of S as list of (min, max) per variable, derived from sigma_j if not given.
            init_h: Shape of the initial h, up to a positive factor, instead of lambda - theta0.

        Raises:
            ValueError: If there is no sigma, variable counts differ, lambda is not zero at the center or
                negative at a sample point, or init_h is not negative at the center.
        """
        if len(sigmas) < 1:
            raise ValueError('Need at least one polynomial for the safe set.')
        self.n = lam.n
        if any(s.n != self.n for s in sigmas):
            raise ValueError('All polynomials must use the same %d variables.' % self.n)
        self.sigmas = list(sigmas)
        self.lam = lam
        self.center = np.asarray(center, dtype=float)
        self.theta0 = float(theta0)
        if self.center.shape != (self.n,):
            raise ValueError('Center must have dimension %d.' % self.n)
        if theta0 <= 0:
            raise ValueError('Initial theta must be positive.')

        # check lambda
        scale = 1. + lam.max_abs_coefficient()
        if abs(lam(self.center)) > 1e-9 * scale:
            raise ValueError('lambda must vanish at the center, but is %g.' % lam(self.center))
        self._box = None if box is None else np.asarray(box, dtype=float).reshape((self.n, 2))
        points = self.sample(256, seed=0)
        if np.min(lam.evaluate_many(points)) < -1e-9 * scale:
            raise ValueError('lambda is negative at sample points.')

        # initial h
        if init_h is not None:
            if init_h.n != self.n:
                raise ValueError('init_h must use %d variables.' % self.n)
            if init_h(self.center) >= 0.:
                raise ValueError('init_h must be negative at the center, but is %g.' % init_h(self.center))
        self.init_h = init_h

    @property
    def q(self) -> int:
        """Number of safe set polynomials."""
        return len(self.sigmas)

    def max_sigma(self, points: np.ndarray) -> np.ndarray:
        """max_j sigma_j at points of shape (N, n), non-positive inside S."""
        return np.max(np.array([s.evaluate_many(points) for s in self.sigmas]), axis=0)

    def bounding_box(self) -> np.ndarray:
        """Bounding box of S, shape (n, 2).

        If not given explicitly, bounds come from all sigma_j that depend on a single variable and are
        then tightened through the linear sigma_j by interval propagation.

        Raises:
            ValueError: If some variable remains unbounded.
        """
        if self._box is not None:
            return self._box.copy()
        box = np.array([[-np.inf, np.inf]] * self.n)

        # univariate sigmas
        for s in self.sigmas:
            variables = s.variables()
            if len(variables) == 1:
                lo, hi = _univariate_bounds(s, variables[0])
                k = variables[0]
                box[k] = [max(box[k, 0], lo), min(box[k, 1], hi)]

        # linear sigmas, a few rounds of propagation
        linear = [s for s in self.sigmas if s.degree == 1 and len(s.variables()) > 1]
        for _ in range(self.n):
            for s in linear:
                _tighten_linear(s, box)

        if not np.all(np.isfinite(box)):
            raise ValueError('Could not derive a bounding box of the safe set, please give one.')
        if np.any(box[:, 0] > box[:, 1]):
            raise ValueError('Safe set is empty.')
        return box

    def sample(self, count: int, seed: int = 0, margin: float = 0.) -> np.ndarray:
        """Scrambled Sobol points in the bounding box, or around the center if no box can be derived.

        Args:
            count: Number of points.
            seed: Seed for the scramble.
            margin: Relative enlargement of the box.
        """
        try:
            box = self.bounding_box()
        except ValueError:
            box = np.column_stack([self.center - 10., self.center + 10.])
        width = box[:, 1] - box[:, 0]
        lo, hi = box[:, 0] - margin * width, box[:, 1] + margin * width
        hi = np.where(hi > lo, hi, lo + 1e-9)
        sobol = qmc.Sobol(d=self.n, scramble=True, seed=seed)
        return qmc.scale(sobol.random(count), lo, hi)

    def to_dict(self) -> dict:
        return {
            'sigmas': [polynomial_expression(s) for s in self.sigmas],
            'lambda': polynomial_expression(self.lam),
            'center': self.center.tolist(),
            'theta0': self.theta0,
            'box': None if self._box is None else self._box.tolist(),
            'init_h': None if self.init_h is None else polynomial_expression(self.init_h)
        }

    @staticmethod
    def from_dict(cfg: dict, n: int) -> 'SafeSpec':
        """Creates a spec from config with polynomials as strings in x1..xn."""
        init_h = parse_polynomial(cfg['init_h'], n) if cfg.get('init_h') else None
        return SafeSpec([parse_polynomial(s, n) for s in cfg['sigmas']], parse_polynomial(cfg['lambda'], n),
                        cfg['center'], cfg.get('theta0', 0.01), cfg.get('box'), init_h)


def _univariate_bounds(s: Polynomial, k: int) -> Tuple[float, float]:
    """Hull of {x_k: s(x_k) <= 0} for a polynomial in x_k only."""
    coeffs = np.zeros(s.degree + 1)
    for m, c in s.terms.items():
        coeffs[s.degree - m[k]] = c
    roots = np.roots(coeffs)
    real = np.sort(roots[np.abs(roots.imag) <= 1e-9 * (1. + np.abs(roots.real))].real)
    if len(real) == 0:
        return -np.inf, np.inf

    # bounded on a side, if s is positive towards infinity there
    lead = coeffs[0]
    pos_inf = lead > 0
    neg_inf = lead > 0 if s.degree % 2 == 0 else lead < 0
    return (real[0] if neg_inf else -np.inf), (real[-1] if pos_inf else np.inf)


def _tighten_linear(s: Polynomial, box: np.ndarray):
    """Tightens box by c0 + sum_i c_i x_i <= 0 through interval arithmetic."""
    n = s.n
    c0 = s.coefficient((0,) * n)
    c = np.array([s.coefficient(tuple(1 if i == k else 0 for i in range(n))) for k in range(n)])
    for k in np.nonzero(c)[0]:
        # lower bound of the sum of the other terms
        rest = c0
        for i in range(n):
            if i != k and c[i] != 0:
                rest += min(c[i] * box[i, 0], c[i] * box[i, 1])
        if not np.isfinite(rest):
            continue
        bound = -rest / c[k]
        if c[k] > 0:
            box[k, 1] = min(box[k, 1], bound)
        else:
            box[k, 0] = max(box[k, 0], bound)


class DegreeProfile:
    """Degrees and numerical settings of the alternating synthesis."""

    def __init__(self, deg_h: int = 4, deg_eta: int = 2, deg_s: int = 2, deg_varsigma: int = 2, deg_l: int = 2,
                 deg_K: int = 2, eps: float = 0.01, eta_bar: float = 1e-6, h_pin: float = 90., tol_theta: float = 1e-3,
                 max_iter: int = 20, strict_eta: bool = False, robust_omega: Optional[float] = None, deg_mu: int = 2,
                 input_bound: Optional[float] = None, deg_input: int = 2, trace_weight: float = 1e-6):
        """Creates a new profile.

        Args:
            deg_h: Degree of h.
            deg_eta: Degree of eta.
            deg_s: Degree of the SOS multipliers s_j.
            deg_varsigma: Degree of the SOS multiplier varsigma.
            deg_l: Degree of the multiplier l.
            deg_K: Degree of the controller K.
            eps: Robustness margin epsilon.
            eta_bar: Lower bound for eta.
            h_pin: Fixed constant coefficient of h.
            tol_theta: Stop when theta grows by less.
            max_iter: Maximum number of outer iterations.
            strict_eta: Require eta - eta_bar to be SOS instead of checking eta >= eta_bar afterwards.
            robust_omega: If given, add the robustness condition for disturbances with |d|^2 <= robust_omega.
            deg_mu: Degree of the multiplier of the robustness condition.
            input_bound: If given, require |K(x)| <= input_bound on {h <= 0}.
            deg_input: Degree of the multiplier of the input bound.
            trace_weight: Weight of the Gram trace regularizer in the controller step, 0 disables it.

        Raises:
            ValueError: If a value is out of range.
        """
        degrees = {'deg_h': deg_h, 'deg_eta': deg_eta, 'deg_s': deg_s, 'deg_varsigma': deg_varsigma,
                   'deg_l': deg_l, 'deg_K': deg_K, 'deg_mu': deg_mu, 'deg_input': deg_input}
        for name, value in degrees.items():
            if int(value) != value or value < 0:
                raise ValueError('%s must be a non-negative integer.' % name)
        if eps <= 0:
            raise ValueError('eps must be positive.')
        if eta_bar <= 0:
            raise ValueError('eta_bar must be positive.')
        if max_iter < 1:
            raise ValueError('max_iter must be positive.')
        if robust_omega is not None and robust_omega <= 0:
            raise ValueError('robust_omega must be positive.')
        if input_bound is not None and input_bound <= 0:
            raise ValueError('input_bound must be positive.')

        self.deg_h = int(deg_h)
        self.deg_eta = int(deg_eta)
        self.deg_s = int(deg_s)
        self.deg_varsigma = int(deg_varsigma)
        self.deg_l = int(deg_l)
        self.deg_K = int(deg_K)
        self.deg_mu = int(deg_mu)
        self.deg_input = int(deg_input)
        self.eps = float(eps)
        self.eta_bar = float(eta_bar)
        self.h_pin = float(h_pin)
        self.tol_theta = float(tol_theta)
        self.max_iter = int(max_iter)
        self.strict_eta = bool(strict_eta)
        self.robust_omega = None if robust_omega is None else float(robust_omega)
        self.input_bound = None if input_bound is None else float(input_bound)
        self.trace_weight = float(trace_weight)

    def to_dict(self) -> dict:
        return dict(self.__dict__)

    @staticmethod
    def from_dict(cfg: dict) -> 'DegreeProfile':
        return DegreeProfile(**cfg)

    def __repr__(self):
        return 'DegreeProfile(h=%d, eta=%d, s=%d, varsigma=%d, l=%d, K=%d, eps=%g)' % (
            self.deg_h, self.deg_eta, self.deg_s, self.deg_varsigma, self.deg_l, self.deg_K, self.eps)


__all__ = ['SafeSpec', 'DegreeProfile']
