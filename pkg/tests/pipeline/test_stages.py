import os
import shutil

import pytest

from pysafeset.data import DataSet
from pysafeset.pipeline import (PipelineConfig, toy_config, platoon_config, cmd_simulate, cmd_overapprox,
                                read_ellipsoid, read_result, run_all, cmd_demo_platoon)
from pysafeset.utils.files import read_json


def _fast_toy() -> dict:
    cfg = toy_config()
    cfg['verify'] = {'n_trajectories': 20, 'horizon': 20., 'n_boundary': 2000, 'n_containment': 2000}
    return cfg


def test_experiment_and_ellipsoid(tmpdir):
    config = PipelineConfig(toy_config()).validate()
    cmd_simulate(config, str(tmpdir))
    ds = DataSet.load(os.path.join(tmpdir, 'dataset.csv'))
    assert ds.T == 200

    # ellipsoid contains the truth
    cmd_overapprox(config, str(tmpdir))
    ell, Z, W = read_ellipsoid(str(tmpdir))
    assert ell.contains(config.system().zeta)
    assert Z.rows == 2 and W.shape == (1, 1)
    assert read_json(os.path.join(tmpdir, 'ellipsoid.json'))['T'] == 200


def test_recorded_dataset(tmpdir):
    # record
    config = PipelineConfig(toy_config()).validate()
    cmd_simulate(config, str(tmpdir))

    # same ellipsoid from a config without system
    cfg = toy_config()
    del cfg['system']
    cfg['dataset'] = 'dataset.csv'
    recorded = PipelineConfig(cfg, str(tmpdir)).validate()
    out = os.path.join(tmpdir, 'recorded')
    os.makedirs(out)
    cmd_overapprox(recorded, out)
    cmd_overapprox(config, str(tmpdir))
    a, _, _ = read_ellipsoid(out)
    b, _, _ = read_ellipsoid(str(tmpdir))
    assert a.zeta == pytest.approx(b.zeta)


@pytest.mark.slow
def test_toy_chain(tmpdir):
    config = PipelineConfig(_fast_toy()).validate()
    first = os.path.join(tmpdir, 'first')
    assert run_all(config, first)
    for name in ['dataset.csv', 'dataset.json', 'ellipsoid.json', 'result.json', 'certificates.json', 'report.json',
                 'trajectories.csv', 'levelset.csv']:
        assert os.path.exists(os.path.join(first, name))

    # contents
    result = read_result(first)
    report = read_json(os.path.join(first, 'report.json'))
    assert result.theta >= 0.01
    assert report['passed']
    assert report['containment']['passed']

    # identical on rerun
    second = os.path.join(tmpdir, 'second')
    run_all(config, second)
    for name in ['dataset.csv', 'ellipsoid.json', 'result.json', 'certificates.json']:
        with open(os.path.join(first, name), 'rb') as a, open(os.path.join(second, name), 'rb') as b:
            assert a.read() == b.read(), name
    shutil.rmtree(second)


@pytest.mark.slow
def test_platoon(tmpdir):
    cfg = platoon_config()
    cfg['verify'] = {'n_trajectories': 20, 'horizon': 20.}
    assert cmd_demo_platoon(str(tmpdir), config=PipelineConfig(cfg))

    # both sets grew
    comparison = read_json(os.path.join(tmpdir, 'comparison.json'))
    assert comparison['data_driven']['theta'] > 0.01
    assert comparison['model_based']['theta'] > 0.01
    assert comparison['theta_gap'] == pytest.approx(
        comparison['model_based']['theta'] - comparison['data_driven']['theta'])
