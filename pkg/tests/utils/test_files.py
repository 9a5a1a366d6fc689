import os

import pandas as pd
import pytest

from pysafeset.utils.files import write_json, read_json, write_csv


def test_json(tmpdir):
    filename = os.path.join(tmpdir, 'sub', 'test.json')
    write_json(filename, {'b': 1, 'a': [1.5, None]})
    assert read_json(filename) == {'a': [1.5, None], 'b': 1}
    assert not os.path.exists(filename + '.tmp')

    # same data, same file
    with open(filename) as f:
        first = f.read()
    write_json(filename, {'a': [1.5, None], 'b': 1})
    with open(filename) as f:
        assert f.read() == first
    assert first.index('"a"') < first.index('"b"')


def test_csv(tmpdir):
    filename = os.path.join(tmpdir, 'test.csv')
    write_csv(filename, pd.DataFrame({'x1': [0.1, 1. / 3.], 'h': [-1., 2.]}))
    table = pd.read_csv(filename)
    assert list(table.columns) == ['x1', 'h']
    assert table['x1'].iloc[1] == pytest.approx(1. / 3., rel=1e-15)
