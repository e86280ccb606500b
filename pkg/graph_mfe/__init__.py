# -*- coding: utf-8 -*-
"""Mean field equations on connected finite weighted graphs."""
import logging

__version__ = '1.0.0'

LOG_LEVEL_REPORT = 23
logging.addLevelName(LOG_LEVEL_REPORT, 'REPORT')

GRAPH_MFE_LOGGER = logging.getLogger('graph_mfe')
GRAPH_MFE_LOGGER.addHandler(logging.NullHandler())
