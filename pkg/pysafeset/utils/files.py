import io
import json
import logging
import os
from typing import Any

import pandas as pd

log = logging.getLogger(__name__)


def write_atomic(filename: str, content: str):
    """Writes text to a temporary file next to the target and renames it.

    Args:
        filename: Name of file to write.
        content: Text to write.
    """
    path = os.path.dirname(os.path.abspath(filename))
    os.makedirs(path, exist_ok=True)
    tmp = filename + '.tmp'
    with open(tmp, 'w') as f:
        f.write(content)
    os.replace(tmp, filename)


def write_json(filename: str, data: Any):
    """Writes JSON with sorted keys, so that identical data gives identical files."""
    log.info('Writing %s...', filename)
    write_atomic(filename, json.dumps(data, sort_keys=True, indent=2) + '\n')


def read_json(filename: str) -> Any:
    with open(filename, 'r') as f:
        return json.load(f)


def write_csv(filename: str, table: pd.DataFrame):
    """Writes a table as CSV, floats with 17 significant digits."""
    log.info('Writing %s...', filename)
    with io.StringIO() as sio:
        table.to_csv(sio, index=False, float_format='%.17g')
        write_atomic(filename, sio.getvalue())


__all__ = ['write_atomic', 'write_json', 'read_json', 'write_csv']
