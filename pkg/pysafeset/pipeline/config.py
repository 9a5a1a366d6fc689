import copy
import logging
import os
from typing import Any, Dict, List, Optional

import numpy as np

from ..data.system import PolySystem
from ..exceptions import ConfigError
from ..poly import MatrixPolynomial, parse_column, parse_matrix
from ..sdp import SdpSolver, get_solver
from ..synth.spec import SafeSpec, DegreeProfile
from ..utils.config import load_config

log = logging.getLogger(__name__)

# known top level sections
SECTIONS = ['system', 'dataset', 'monomials', 'experiment', 'noise', 'safe_set', 'profile', 'solver', 'seeds',
            'verify', 'output']

# defaults for the verification stage
VERIFY_DEFAULTS = {'n_boundary': 10000, 'n_members': 50, 'n_containment': 10000, 'n_trajectories': 100,
                   'horizon': 100., 'dt': 0.01, 'lie_tol': 1e-4, 'containment_tol': 1e-6, 'escape_tol': 1e-6}


class PipelineConfig:
    """Configuration of the whole pipeline, from experiment to verification.

    Either a ground truth `system` is given, from which the experiment is simulated, or a recorded `dataset`.
    The synthesis only ever sees the view returned by without_system().
    """

    def __init__(self, cfg: Dict[str, Any], base_dir: str = '.'):
        """Creates a new config from a dict.

        Args:
            cfg: Config dict.
            base_dir: Directory relative file names are resolved against.
        """
        self.cfg = copy.deepcopy(cfg)
        self.base_dir = base_dir

    @staticmethod
    def from_file(filename: str) -> 'PipelineConfig':
        log.info('Loading configuration from %s...', filename)
        return PipelineConfig(load_config(filename), os.path.dirname(os.path.abspath(filename)))

    def validate(self) -> 'PipelineConfig':
        """Checks all sections.

        Returns:
            The config itself.

        Raises:
            ConfigError: Listing every violated field.
        """
        errors = []     # type: List[str]
        cfg = self.cfg

        # sections
        unknown = sorted(set(cfg.keys()) - set(SECTIONS))
        if unknown:
            errors.append('unknown section(s): %s' % ', '.join(unknown))
        if ('system' in cfg) == ('dataset' in cfg):
            errors.append('system/dataset: exactly one of "system" and "dataset" must be given')

        # dimension from safe set
        n = None
        safe = cfg.get('safe_set')
        if not isinstance(safe, dict):
            errors.append('safe_set: missing')
        else:
            for key in ['sigmas', 'lambda', 'center']:
                if key not in safe:
                    errors.append('safe_set.%s: missing' % key)
            if isinstance(safe.get('center'), list) and len(safe['center']) > 0:
                n = len(safe['center'])
            elif 'center' in safe:
                errors.append('safe_set.center: must be a non-empty list')

        # monomials
        Z = W = None
        mono = cfg.get('monomials')
        if not isinstance(mono, dict) or 'Z' not in mono:
            errors.append('monomials.Z: missing')
        elif n is not None:
            try:
                Z = parse_column(mono['Z'], n)
            except (ValueError, TypeError) as e:
                errors.append('monomials.Z: %s' % e)
            try:
                W = parse_matrix(mono.get('W', []), n) if mono.get('W') else None
            except (ValueError, TypeError) as e:
                errors.append('monomials.W: %s' % e)
            if W is None and 'W' not in mono:
                errors.append('monomials.W: missing')

        # safe set and profile
        if n is not None and isinstance(safe, dict) and all(k in safe for k in ['sigmas', 'lambda']):
            try:
                SafeSpec.from_dict(safe, n)
            except (ValueError, TypeError, KeyError) as e:
                errors.append('safe_set: %s' % e)
        try:
            DegreeProfile.from_dict(cfg.get('profile', {}))
        except (ValueError, TypeError) as e:
            errors.append('profile: %s' % e)

        # system
        if 'system' in cfg and Z is not None and W is not None:
            sys_cfg = cfg['system']
            try:
                A = np.atleast_2d(np.asarray(sys_cfg['A'], dtype=float))
                B = np.atleast_2d(np.asarray(sys_cfg['B'], dtype=float))
                if A.shape != (n, Z.rows):
                    errors.append('system.A: shape %s, expected (%d, %d)' % (A.shape, n, Z.rows))
                if B.shape != (n, W.rows):
                    errors.append('system.B: shape %s, expected (%d, %d)' % (B.shape, n, W.rows))
            except (KeyError, TypeError, ValueError) as e:
                errors.append('system: %s' % e)

        # dataset
        if 'dataset' in cfg and not isinstance(cfg['dataset'], str):
            errors.append('dataset: must be a file name')

        # experiment
        exp = cfg.get('experiment', {})
        if 'system' in cfg:
            if not isinstance(exp.get('T'), int) or exp['T'] < 1:
                errors.append('experiment.T: must be a positive integer')
            if not isinstance(exp.get('tau_s', 0.1), (int, float)) or exp.get('tau_s', 0.1) <= 0:
                errors.append('experiment.tau_s: must be positive')
            if n is not None and 'x0' in exp and len(exp['x0']) != n:
                errors.append('experiment.x0: must have %d entries' % n)
            if not isinstance(exp.get('input'), dict) or 'class' not in exp.get('input', {}):
                errors.append('experiment.input: missing or without "class"')

        # noise
        noise = cfg.get('noise', {})
        if noise.get('model', 'instantaneous') not in ['instantaneous', 'energy']:
            errors.append('noise.model: must be "instantaneous" or "energy"')
        if not isinstance(noise.get('omega', 0.), (int, float)) or noise.get('omega', 0.) < 0:
            errors.append('noise.omega: must be non-negative')

        # solver, seeds, verify
        solver = cfg.get('solver')
        if solver is not None and (not isinstance(solver, dict) or 'class' not in solver):
            errors.append('solver: must be a dict with "class"')
        for key, value in cfg.get('seeds', {}).items():
            if key not in ['experiment', 'verification'] or not isinstance(value, int):
                errors.append('seeds.%s: unknown seed or not an integer' % key)
        for key in cfg.get('verify', {}):
            if key not in VERIFY_DEFAULTS:
                errors.append('verify.%s: unknown setting' % key)

        if errors:
            raise ConfigError(errors)
        return self

    @property
    def n(self) -> int:
        return len(self.cfg['safe_set']['center'])

    @property
    def has_system(self) -> bool:
        return 'system' in self.cfg

    def Z(self) -> MatrixPolynomial:
        return parse_column(self.cfg['monomials']['Z'], self.n)

    def W(self) -> Optional[MatrixPolynomial]:
        W = self.cfg['monomials'].get('W')
        return parse_matrix(W, self.n) if W else None

    def system(self) -> PolySystem:
        """Ground truth system.

        Raises:
            ConfigError: If the config has no system section.
        """
        if 'system' not in self.cfg:
            raise ConfigError(['system: required for this stage'])
        return PolySystem(self.cfg['system']['A'], self.cfg['system']['B'], self.Z(), self.W())

    def dataset_path(self, out: str) -> str:
        """Recorded data set, or the one written by the simulate stage."""
        if 'dataset' in self.cfg:
            return os.path.join(self.base_dir, self.cfg['dataset'])
        return os.path.join(out, 'dataset.csv')

    @property
    def experiment(self) -> dict:
        return dict(self.cfg.get('experiment', {}))

    @property
    def noise_model(self) -> str:
        return self.cfg.get('noise', {}).get('model', 'instantaneous')

    @property
    def omega(self) -> float:
        return float(self.cfg.get('noise', {}).get('omega', 0.))

    def spec(self) -> SafeSpec:
        return SafeSpec.from_dict(self.cfg['safe_set'], self.n)

    def profile(self) -> DegreeProfile:
        return DegreeProfile.from_dict(self.cfg.get('profile', {}))

    def solver(self) -> SdpSolver:
        return get_solver(copy.deepcopy(self.cfg.get('solver')))

    def seed(self, name: str) -> int:
        return int(self.cfg.get('seeds', {}).get(name, 0))

    @property
    def verify(self) -> dict:
        settings = dict(VERIFY_DEFAULTS)
        settings.update(self.cfg.get('verify', {}))
        return settings

    def output(self, out: str = None) -> str:
        """Output directory, from command line or config."""
        return out if out is not None else self.cfg.get('output', 'out')

    def with_overrides(self, solver_tol: float = None, max_iter: int = None) -> 'PipelineConfig':
        """Copy with command line overrides of the solver tolerance and the iteration cap."""
        other = PipelineConfig(self.cfg, self.base_dir)
        if solver_tol is not None:
            other.cfg['solver'] = dict(other.cfg.get('solver') or {'class': 'pysafeset.sdp.CvxpySolver'})
            other.cfg['solver']['feastol'] = solver_tol
        if max_iter is not None:
            other.cfg.setdefault('profile', {})['max_iter'] = max_iter
        return other

    def without_system(self) -> 'PipelineConfig':
        """Copy without the ground truth."""
        cfg = {k: v for k, v in self.cfg.items() if k != 'system'}
        return PipelineConfig(cfg, self.base_dir)


__all__ = ['PipelineConfig', 'VERIFY_DEFAULTS']
