import os
import re
from io import StringIO

import yaml


def pre_process_yaml(config: str) -> str:
    """Reads a config file and replaces all {include other.yaml} statements by the content of that file.

    Included files are resolved relative to the including file.
    """

    # read config
    with open(config, 'r') as f:
        content = f.read()

    # get path of config
    path = os.path.dirname(os.path.abspath(config))

    # find all include statements
    matches = re.findall(r'(\{include (.*)\})', content)
    for match, filename in matches:
        content = content.replace(match, pre_process_yaml(os.path.join(path, filename)))

    # return new yaml
    return content


def load_config(config: str) -> dict:
    """Loads a YAML (or JSON) config file after include processing.

    Raises:
        ValueError: If the file does not contain a mapping.
    """
    with StringIO(pre_process_yaml(config)) as f:
        cfg = yaml.safe_load(f)
    if cfg is None:
        return {}
    if not isinstance(cfg, dict):
        raise ValueError('Config file %s does not contain a mapping.' % config)
    return cfg


__all__ = ['pre_process_yaml', 'load_config']
