import logging
import os

from .config import PipelineConfig
from ..data.dataset import DataSet
from ..data.ellipsoid import ConsistencyEllipsoid, overapprox
from ..data.experiment import simulate_experiment
from ..data.system import regressor_text
from ..poly import parse_column, parse_matrix
from ..synth.alternation import SynthesisResult, alternate
from ..synth.baseline import synthesize_model_based
from ..synth.conditions import DataDrivenCondition
from ..utils.files import read_json, write_json
from ..verify.report import VerificationReport, verify_result, write_trajectories, write_level_grid

log = logging.getLogger(__name__)


def cmd_simulate(config: PipelineConfig, out: str) -> bool:
    """Runs the experiment on the ground truth and writes dataset.csv and dataset.json."""
    log.info('Running experiment...')
    system = config.system()
    exp = config.experiment
    signal = dict(exp['input'])
    signal.setdefault('seed', config.seed('experiment'))
    ds = simulate_experiment(system, signal, exp.get('x0', config.spec().center), exp.get('tau_s', 0.1), exp['T'],
                             omega=config.omega, seed=config.seed('experiment'), substeps=exp.get('substeps', 20))
    ds.save(os.path.join(out, 'dataset.csv'))
    return True


def cmd_overapprox(config: PipelineConfig, out: str) -> bool:
    """Over-approximates the parameters consistent with the data and writes ellipsoid.json."""
    filename = config.dataset_path(out)
    log.info('Over-approximating parameters consistent with %s...', filename)
    ds = DataSet.load(filename)
    if 'dataset' in config.cfg and config.omega > 0.:
        ds.omega = config.omega
    ell = overapprox(ds, config.noise_model, config.solver())

    # write with regressors
    Z, W = regressor_text(ds.Z, ds.W)
    data = ell.to_dict()
    data.update({'Z': Z, 'W': W, 'n': ds.n, 'T': ds.T, 'omega': ds.omega})
    write_json(os.path.join(out, 'ellipsoid.json'), data)
    return True


def read_ellipsoid(out: str):
    """Ellipsoid and its regressors Z and W as written by cmd_overapprox."""
    data = read_json(os.path.join(out, 'ellipsoid.json'))
    n = int(data['n'])
    return ConsistencyEllipsoid.from_dict(data), parse_column(data['Z'], n), parse_matrix(data['W'], n)


def cmd_synth(config: PipelineConfig, out: str) -> bool:
    """Synthesizes controller and invariant set for the ellipsoid, writes result.json and certificates.json."""
    config = config.without_system()
    ell, Z, W = read_ellipsoid(out)
    log.info('Synthesizing from %s...', ell)
    result = alternate(config.spec(), config.profile(), DataDrivenCondition(ell, Z, W), solver=config.solver())
    write_result(out, result)
    log.info('Synthesized:\n%s', result.summary())
    return True


def write_result(out: str, result: SynthesisResult, prefix: str = ''):
    write_json(os.path.join(out, prefix + 'result.json'), result.to_dict())
    write_json(os.path.join(out, prefix + 'certificates.json'), result.certificates_dict())


def read_result(out: str, prefix: str = '') -> SynthesisResult:
    return SynthesisResult.from_dict(read_json(os.path.join(out, prefix + 'result.json')),
                                     read_json(os.path.join(out, prefix + 'certificates.json')))


def cmd_verify(config: PipelineConfig, out: str, prefix: str = '') -> bool:
    """Verifies the synthesized result, writes report.json, trajectories.csv and levelset.csv.

    Returns:
        Whether all checks passed.
    """
    result = read_result(out, prefix)
    ell, Z, W = read_ellipsoid(out)
    spec = config.spec()
    system = config.system() if config.has_system else None
    report = verify_result(result, spec, system=system, ellipsoid=ell, Z=Z, W=W, eps=config.profile().eps,
                           seed=config.seed('verification'), **config.verify)
    write_report(out, report, result, spec, prefix)
    return report.passed


def write_report(out: str, report: VerificationReport, result: SynthesisResult, spec, prefix: str = ''):
    write_json(os.path.join(out, prefix + 'report.json'), report.to_dict())
    if report.trajectories is not None:
        write_trajectories(os.path.join(out, prefix + 'trajectories.csv'), report.trajectories)
    write_level_grid(os.path.join(out, prefix + 'levelset.csv'), result, spec)


def cmd_baseline(config: PipelineConfig, out: str) -> bool:
    """Synthesizes with perfect model knowledge and verifies against the ground truth, files get a model_ prefix.

    Returns:
        Whether all checks passed.
    """
    system = config.system()
    spec = config.spec()
    profile = config.profile()
    log.info('Synthesizing model-based baseline...')
    result = synthesize_model_based(system, spec, profile, solver=config.solver())
    write_result(out, result, 'model_')
    report = verify_result(result, spec, system=system, eps=profile.eps, seed=config.seed('verification'),
                           **config.verify)
    write_report(out, report, result, spec, 'model_')
    return report.passed


def run_all(config: PipelineConfig, out: str) -> bool:
    """simulate (if there is a system), overapprox, synth and verify in a row."""
    if config.has_system:
        cmd_simulate(config, out)
    cmd_overapprox(config, out)
    cmd_synth(config, out)
    return cmd_verify(config, out)


__all__ = ['cmd_simulate', 'cmd_overapprox', 'cmd_synth', 'cmd_verify', 'cmd_baseline', 'run_all',
           'read_ellipsoid', 'read_result', 'write_result']
