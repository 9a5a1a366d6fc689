import os

import pytest
import yaml

from pysafeset.application import EXIT_OK, EXIT_ERROR, EXIT_FAILED
from pysafeset.cli.pysafeset import init_cli, parse_cli, main
from pysafeset.pipeline import toy_config


def _write_config(tmpdir, cfg: dict) -> str:
    filename = os.path.join(tmpdir, 'config.yaml')
    with open(filename, 'w') as f:
        yaml.safe_dump(cfg, f)
    return filename


def test_parse():
    args = parse_cli(init_cli(), ['synth', '--config', 'toy.yaml', '--solver-tol', '1e-9', '--max-iter', '3'])
    assert args['command'] == 'synth'
    assert os.path.isabs(args['config'])
    assert args['solver_tol'] == 1e-9
    assert args['max_iter'] == 3
    assert args['log_level'] == 'info'

    # unknown command
    with pytest.raises(SystemExit):
        parse_cli(init_cli(), ['fly'])


def test_missing_config(tmpdir):
    assert main(['synth']) == EXIT_ERROR
    assert main(['synth', '--config', os.path.join(tmpdir, 'missing.yaml')]) == EXIT_ERROR


def test_invalid_config(tmpdir):
    cfg = toy_config()
    del cfg['system']
    assert main(['simulate', '--config', _write_config(tmpdir, cfg)]) == EXIT_ERROR


def test_infeasible(tmpdir):
    # L_theta0 reaches beyond S
    cfg = toy_config()
    cfg['safe_set']['theta0'] = 16.
    cfg['output'] = os.path.join(tmpdir, 'out')
    filename = _write_config(tmpdir, cfg)
    assert main(['simulate', '--config', filename]) == EXIT_OK
    assert main(['overapprox', '--config', filename]) == EXIT_OK
    assert main(['synth', '--config', filename]) == EXIT_FAILED
    assert not os.path.exists(os.path.join(tmpdir, 'out', 'result.json'))


@pytest.mark.slow
def test_toy(tmpdir):
    cfg = toy_config()
    cfg['verify'] = {'n_trajectories': 20, 'horizon': 20.}
    filename = _write_config(tmpdir, cfg)
    out = os.path.join(tmpdir, 'out')
    for command in ['simulate', 'overapprox', 'synth', 'verify']:
        assert main([command, '--config', filename, '--out', out, '--max-iter', '5']) == EXIT_OK

    # iteration cap from the command line
    with open(os.path.join(out, 'result.json')) as f:
        assert len(yaml.safe_load(f)['iterations']) <= 5
