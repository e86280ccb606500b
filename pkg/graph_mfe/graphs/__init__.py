# -*- coding: utf-8 -*-
"""Weighted graphs, vertex fields and the operators acting on them."""
from .weighted_graph import WeightedGraph
from .fields import VertexField, DiracSource
from .operators import (laplacian_apply, laplacian_values, dirichlet_energy, integrate, inner, dirac_field,
                        sup_norm_and_mean, bound_values)
from .graph_io import graph_from_dict, graph_to_dict, load_graph, write_graph
from .generators import random_connected_graph, single_vertex_graph, complete_graph
