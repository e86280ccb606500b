# -*- coding: utf-8 -*-
"""Reading and writing graphs as JSON.

Format: ``{"vertices": [{"id": "a", "mu": 1.0}, ...], "edges": [{"u": "a", "v": "b", "w": 1.0}, ...]}``
with ``mu`` and ``w`` defaulting to 1.0.
"""
import json

from voluptuous import Invalid, MultipleInvalid

from graph_mfe.exceptions import GraphValidationError
from graph_mfe.utils import write_atomically
from .graph_schema import GRAPH_SCHEMA
from .weighted_graph import WeightedGraph

__all__ = ('graph_from_dict', 'graph_to_dict', 'load_graph', 'write_graph')


def graph_from_dict(graph_dict):
    """Validate a graph description and construct the graph.

    :raises GraphValidationError: malformed description, disconnected graph, nonpositive mu or w
    """
    try:
        graph_dict = GRAPH_SCHEMA(graph_dict)
    except (Invalid, MultipleInvalid) as exc:
        raise GraphValidationError(f'Malformed graph description: {exc}') from exc

    vertices = [str(vertex['id']) for vertex in graph_dict['vertices']]
    measure = {str(vertex['id']): vertex['mu'] for vertex in graph_dict['vertices']}
    edges = [(edge['u'], edge['v'], edge['w']) for edge in graph_dict['edges']]
    return WeightedGraph(vertices, edges, measure)


def graph_to_dict(graph):
    return {
        'vertices': [{'id': vertex, 'mu': float(mu)} for vertex, mu in zip(graph.vertices, graph.measure)],
        'edges': [{'u': x, 'v': y, 'w': w} for x, y, w in graph.edges],
    }


def load_graph(path):
    """Load a graph JSON file.

    :raises GraphValidationError: unreadable JSON or invalid graph
    """
    try:
        with open(path, 'r', encoding='utf-8') as stream:
            graph_dict = json.load(stream)
    except json.JSONDecodeError as exc:
        raise GraphValidationError(f'{path} is not valid JSON: {exc}') from exc
    return graph_from_dict(graph_dict)


def write_graph(graph, path):
    write_atomically(path, json.dumps(graph_to_dict(graph), indent=1) + '\n')
