# -*- coding: utf-8 -*-
"""Named solver protocols: YAML files with per-solver parameter overrides."""
from copy import deepcopy
from pathlib import Path

import ruamel.yaml as yaml  # does not convert OFF to False
from voluptuous import Schema, Optional

from graph_mfe.parameters_schemas import SECTION_SCHEMAS
from graph_mfe.utils import dict_merge

__all__ = ('PROTOCOL_DIR', 'PROTOCOL_SCHEMA', 'load_solver_protocol', 'get_parameters', 'list_protocols')

PROTOCOL_DIR = Path(__file__).resolve().parent
DEFAULT_PROTOCOL = 'standard'

PROTOCOL_SCHEMA = Schema({
    'protocol_description': str,
    Optional('dirac'): SECTION_SCHEMAS['dirac'],
    Optional('vortex'): SECTION_SCHEMAS['vortex'],
    Optional('lambda_c'): SECTION_SCHEMAS['lambda_c'],
    Optional('torus'): SECTION_SCHEMAS['torus'],
},
                         required=True)


def _safe_load(stream):
    return yaml.YAML(typ='safe', pure=True).load(stream)


def load_solver_protocol(*, tag=None, path=None):
    """Load a solver protocol from a yaml file (with validation).

    Validation fills in the defaults of every section present in the file.
    """
    if path is not None:
        with open(path, 'r') as stream:
            protocol_dict = _safe_load(stream)
    elif tag is not None:
        yaml_file = PROTOCOL_DIR / (tag + '.yaml')
        if not yaml_file.is_file():
            raise ValueError(f"Unknown protocol '{tag}': available are {', '.join(list_protocols())}")
        with open(yaml_file, 'r') as stream:
            protocol_dict = _safe_load(stream)
    else:
        raise ValueError('Provide either path or tag.')

    return PROTOCOL_SCHEMA(protocol_dict)


def list_protocols():
    """Return the tags of the protocols shipped with the package."""
    return sorted(protocol_yaml.stem for protocol_yaml in PROTOCOL_DIR.glob('*.yaml'))


def get_parameters(section, protocol=None, overrides=None):
    """Parameters for one solver: schema defaults, then the protocol section, then the overrides.

    :param section: one of 'dirac', 'vortex', 'lambda_c', 'torus'
    :param protocol: protocol dict (as returned by load_solver_protocol), a tag, or None for no protocol
    :param overrides: dict of explicit values (None values are ignored)
    :returns: validated parameter dict
    """
    schema = SECTION_SCHEMAS[section]
    if isinstance(protocol, str):
        protocol = load_solver_protocol(tag=protocol)
    parameters = deepcopy(protocol.get(section, {})) if protocol else {}
    if overrides:
        dict_merge(parameters, {key: value for key, value in overrides.items() if value is not None})
    return schema(parameters)
