import pytest

from pysafeset.exceptions import ConfigError
from pysafeset.pipeline import PipelineConfig, platoon_config, toy_config


def test_demos_valid():
    for cfg in [platoon_config(), toy_config()]:
        config = PipelineConfig(cfg).validate()
        assert config.has_system

    config = PipelineConfig(platoon_config())
    assert config.n == 3
    assert config.Z().rows == 5
    assert config.system().zeta.shape == (7, 3)
    assert config.omega == pytest.approx(1e-6)


def test_system_or_dataset():
    cfg = toy_config()
    del cfg['system']
    with pytest.raises(ConfigError) as e:
        PipelineConfig(cfg).validate()
    assert any(err.startswith('system/dataset') for err in e.value.errors)

    # both
    cfg = toy_config()
    cfg['dataset'] = 'data.csv'
    with pytest.raises(ConfigError):
        PipelineConfig(cfg).validate()


def test_all_errors():
    cfg = toy_config()
    cfg['monomials']['Z'] = ['x1', 'x3']
    cfg['profile']['eps'] = -1.
    cfg['noise']['model'] = 'bursty'
    cfg['unknown'] = 1
    with pytest.raises(ConfigError) as e:
        PipelineConfig(cfg).validate()
    fields = [err.split(':')[0] for err in e.value.errors]
    for field in ['monomials.Z', 'profile', 'noise.model', 'unknown section(s)']:
        assert field in fields


def test_shapes():
    cfg = toy_config()
    cfg['system']['A'] = [[1., -0.1, 0.]]
    with pytest.raises(ConfigError) as e:
        PipelineConfig(cfg).validate()
    assert e.value.errors[0].startswith('system.A')


def test_dataset(tmpdir):
    cfg = toy_config()
    del cfg['system']
    cfg['dataset'] = 'recorded.csv'
    config = PipelineConfig(cfg, str(tmpdir)).validate()
    assert config.dataset_path('out').startswith(str(tmpdir))

    # stages needing the ground truth
    with pytest.raises(ConfigError):
        config.system()


def test_overrides():
    config = PipelineConfig(toy_config())
    other = config.with_overrides(solver_tol=1e-9, max_iter=3)
    assert other.profile().max_iter == 3
    assert other.cfg['solver']['feastol'] == 1e-9
    assert 'solver' not in config.cfg
    assert config.profile().max_iter == 10

    # synthesis never sees the system
    assert not config.without_system().has_system
    assert config.has_system


def test_defaults():
    config = PipelineConfig(toy_config())
    assert config.verify['n_trajectories'] == 100
    assert config.output() == 'out'
    assert config.output('elsewhere') == 'elsewhere'
    assert config.seed('verification') == 0
