# -*- coding: utf-8 -*-
"""Voluptuous schema for graph JSON files"""
from voluptuous import Schema, Optional, Any, All, Range, Length

__all__ = ('GRAPH_SCHEMA',)

NUMBER = Any(int, float)
POSITIVE = All(NUMBER, Range(min=0, min_included=False))
VERTEX_ID = Any(str, int)

VERTEX_SCHEMA = Schema({
    'id': VERTEX_ID,
    Optional('mu', default=1.0): POSITIVE,
}, required=True)

EDGE_SCHEMA = Schema({
    'u': VERTEX_ID,
    'v': VERTEX_ID,
    Optional('w', default=1.0): POSITIVE,
}, required=True)

GRAPH_SCHEMA = Schema(
    {
        'vertices': All([VERTEX_SCHEMA], Length(min=1)),
        Optional('edges', default=list): [EDGE_SCHEMA],
        Optional('description'): str,
    },
    required=True,
)
