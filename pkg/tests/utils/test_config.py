import os

import pytest

from pysafeset.utils.config import load_config


def test_include(tmpdir):
    # write configs
    with open(os.path.join(tmpdir, 'safe.yaml'), 'w') as f:
        f.write("safe_set:\n  sigmas: ['x1^2 - 9']\n  lambda: 'x1^2'\n  center: [0.]\n")
    with open(os.path.join(tmpdir, 'main.yaml'), 'w') as f:
        f.write('{include safe.yaml}\nprofile:\n  eps: 0.1\n')

    # load it
    cfg = load_config(os.path.join(tmpdir, 'main.yaml'))
    assert cfg['safe_set']['lambda'] == 'x1^2'
    assert cfg['safe_set']['center'] == [0.]
    assert cfg['profile']['eps'] == 0.1


def test_empty(tmpdir):
    filename = os.path.join(tmpdir, 'empty.yaml')
    open(filename, 'w').close()
    assert load_config(filename) == {}

    # no mapping
    with open(filename, 'w') as f:
        f.write('- 1\n- 2\n')
    with pytest.raises(ValueError):
        load_config(filename)
