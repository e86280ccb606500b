# -*- coding: utf-8 -*-
"""Other utilities"""
import collections.abc
import logging
import os
import tempfile
from pathlib import Path

from voluptuous import MultipleInvalid, Invalid

from graph_mfe import LOG_LEVEL_REPORT


def dict_merge(dct, merge_dct):
    """Recursive dict merge, updating ``dct`` in place.

    Like ``dict.update()``, but nested dicts are merged key by key instead of replaced, so a protocol
    section can be overridden one option at a time.

    :param dct: dict onto which the merge is executed
    :param merge_dct: dict merged into dct
    :return: None
    """
    for key, value in merge_dct.items():
        if key in dct and isinstance(dct[key], dict) and isinstance(value, collections.abc.Mapping):
            dict_merge(dct[key], value)
        else:
            dct[key] = value


def is_valid(data, schema):
    """Return True, if data is valid according to schema"""
    try:
        schema(data)
        return True
    except (Invalid, MultipleInvalid):
        return False


def validate_parameters(parameters, schema):
    """Validate a parameter dictionary against a schema.

    :returns: the error message, or None if the parameters are valid
    """
    try:
        schema(parameters)
    except (Invalid, MultipleInvalid) as exc:
        return str(exc)

    return None


class ReportMixin:  # pylint: disable=too-few-public-methods
    """Process-style reporting: ``self.report(msg)`` logs ``[ClassName|step]: msg`` at the REPORT level."""

    _logger = logging.getLogger('graph_mfe')
    _step = 'setup'

    def report(self, message, *args):
        """Log a progress message for the current step."""
        self._logger.log(LOG_LEVEL_REPORT, f'[{self.__class__.__name__}|{self._step}]: ' + message, *args)


def write_atomically(path, text):
    """Write ``text`` to ``path`` through a temporary file in the same directory and a rename."""
    path = Path(path)
    handle, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f'.{path.name}.')
    try:
        with os.fdopen(handle, 'w', encoding='utf-8') as stream:
            stream.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
