# -*- coding: utf-8 -*-
"""Solution files: a solved field with the data needed to re-check it.

Floats are written with Python's shortest round-trip representation, so reading a file back gives the
exact binary values and the stored residual can be reproduced bit for bit.
"""
import json
from dataclasses import dataclass, field

import numpy as np
from voluptuous import Schema, Any, Optional, Invalid, MultipleInvalid

from graph_mfe.exceptions import FieldBindingError, GraphValidationError
from graph_mfe.graphs import VertexField, laplacian_values
from graph_mfe.solvers import DiracProblem, VortexProblem, dirac_residual, vortex_residual
from graph_mfe.solvers.elliptic import green_rhs
from graph_mfe.torus import TorusSpec, build_torus_graph
from graph_mfe.utils import write_atomically

__all__ = ('FORMAT_VERSION', 'EQUATIONS', 'SolutionFile', 'compute_residual', 'verify_solution')

FORMAT_VERSION = 1
EQUATIONS = ('dirac', 'vortex', 'green')
VERIFY_TOL = 1e-12

SOLUTION_SCHEMA = Schema(
    {
        'format_version': FORMAT_VERSION,
        'graph_hash': str,
        'equation': Any(*EQUATIONS),
        'parameters': dict,
        'values': {
            str: Any(int, float)
        },
        Optional('report', default=dict): dict,
    },
    required=True,
)


@dataclass
class SolutionFile:
    graph_hash: str
    equation: str
    parameters: dict
    values: dict
    report: dict = field(default_factory=dict)
    format_version: int = FORMAT_VERSION

    @classmethod
    def from_field(cls, equation, parameters, solution, report=None):
        return cls(graph_hash=solution.graph_id,
                   equation=equation,
                   parameters=parameters,
                   values=solution.as_dict(),
                   report=dict(report or {}))

    def to_dict(self):
        return {
            'format_version': self.format_version,
            'graph_hash': self.graph_hash,
            'equation': self.equation,
            'parameters': self.parameters,
            'values': self.values,
            'report': self.report,
        }

    @classmethod
    def from_dict(cls, solution_dict):
        try:
            solution_dict = SOLUTION_SCHEMA(solution_dict)
        except (Invalid, MultipleInvalid) as exc:
            raise GraphValidationError(f'Malformed solution file: {exc}') from exc
        return cls(**solution_dict)

    def dumps(self):
        return json.dumps(self.to_dict(), indent=1) + '\n'

    def write(self, path):
        write_atomically(path, self.dumps())

    @classmethod
    def read(cls, path):
        try:
            with open(path, 'r', encoding='utf-8') as stream:
                return cls.from_dict(json.load(stream))
        except json.JSONDecodeError as exc:
            raise GraphValidationError(f'{path} is not valid JSON: {exc}') from exc

    def field_on(self, graph):
        """The stored values as a field on ``graph``, which must be the graph the solution was computed on."""
        if graph.fingerprint != self.graph_hash:
            raise FieldBindingError('The solution was computed on a different graph.')
        return VertexField.from_mapping(graph, self.values)

    def torus_graph(self):
        """Rebuild the torus graph of a Green's function solution."""
        return build_torus_graph(TorusSpec.from_dict(self.parameters['torus'])).graph


def compute_residual(solution, graph=None):
    """Sup norm of the defect of the stored field in its equation.

    Green's function solutions rebuild their torus; the other equations need the graph.
    """
    if solution.equation == 'green':
        graph = graph or solution.torus_graph()
        values = solution.field_on(graph).values
        return float(np.max(np.abs(laplacian_values(graph, values) - green_rhs(graph, solution.parameters['pole']))))

    if graph is None:
        raise FieldBindingError(f"A graph is needed to check a '{solution.equation}' solution.")
    field_u = solution.field_on(graph)
    parameters = solution.parameters
    if solution.equation == 'dirac':
        residual = dirac_residual(DiracProblem(graph, parameters['rho'], parameters['pole']), field_u)
    else:
        residual = vortex_residual(VortexProblem(graph, parameters['lambda'], tuple(parameters['vortices'])), field_u)
    return float(np.max(np.abs(residual.values)))


def verify_solution(solution, graph=None, tol=VERIFY_TOL):
    """Recompute the residual and compare it with the stored one.

    :returns: ``(matches, stored, recomputed)``
    """
    recomputed = compute_residual(solution, graph)
    stored = solution.report.get('residual_sup')
    matches = stored is not None and abs(float(stored) - recomputed) <= tol
    return matches, stored, recomputed
