# -*- coding: utf-8 -*-
"""The ``graph-mfe`` command line.

Exit codes follow ``graph_mfe.exceptions.EXIT_CODES``: a diverged vortex solve (exit 1) is a result
about the problem, the codes from 2 on are failures of the run.
"""
import contextlib
import csv
import functools
import io
import json
import logging
import os
import sys

import click
from voluptuous import Invalid

from graph_mfe import GRAPH_MFE_LOGGER, LOG_LEVEL_REPORT, __version__
from graph_mfe.exceptions import (EXIT_CODES, AmbiguousCriticalSet, BudgetExhausted, ExpOverflow,
                                  MaxIterationsExceeded, SolveFailed)
from graph_mfe.graphs import load_graph, random_connected_graph, write_graph
from graph_mfe.protocols import get_parameters, list_protocols, load_solver_protocol
from graph_mfe.solution_file import SolutionFile, compute_residual, verify_solution, VERIFY_TOL
from graph_mfe.solvers import DiracProblem, VortexProblem, estimate_lambda_c, solve_dirac_mfe, solve_vortex_mfe
from graph_mfe.torus import (PRESETS, TorusSpec, build_torus_graph, critical_slope, find_critical_points,
                             slope_convergence, torus_green)
from graph_mfe.utils import write_atomically

LOGGER = logging.getLogger(__name__)

CSV_COLUMNS = ('i', 'j', 'refined_x', 'refined_y', 'class', 'G_value')


def _configure_logging(quiet, verbose):
    """Send package logs to the current stderr: REPORT by default, WARNING with --quiet, DEBUG with --verbose."""
    for handler in list(GRAPH_MFE_LOGGER.handlers):
        if getattr(handler, 'graph_mfe_cli', False):
            GRAPH_MFE_LOGGER.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.graph_mfe_cli = True
    handler.setFormatter(logging.Formatter('%(levelname)s: %(message)s'))
    GRAPH_MFE_LOGGER.addHandler(handler)
    if quiet:
        GRAPH_MFE_LOGGER.setLevel(logging.WARNING)
    elif verbose:
        GRAPH_MFE_LOGGER.setLevel(logging.DEBUG)
    else:
        GRAPH_MFE_LOGGER.setLevel(LOG_LEVEL_REPORT)


def _exit(label, message=None):
    if message:
        LOGGER.error('%s: %s', EXIT_CODES[label].message, message)
    click.get_current_context().exit(EXIT_CODES[label].status)


@contextlib.contextmanager
def _input_errors():
    """Map bad files, bad parameters and invalid problems to ERROR_INVALID_INPUT."""
    try:
        yield
    except (ValueError, Invalid, OSError) as exc:
        _exit('ERROR_INVALID_INPUT', str(exc))


def _emit(payload, quiet):
    if not quiet:
        click.echo(json.dumps(payload, indent=1))


def _protocol(protocol):
    if protocol is None:
        return None
    if os.path.isfile(protocol):
        return load_solver_protocol(path=protocol)
    return load_solver_protocol(tag=protocol)


def logging_options(command):

    @click.option('-q', '--quiet', is_flag=True, help='Only print warnings and errors.')
    @click.option('-v', '--verbose', is_flag=True, help='Print per-iteration debug output.')
    @functools.wraps(command)
    def wrapper(*args, quiet, verbose, **kwargs):
        _configure_logging(quiet, verbose)
        return command(*args, quiet=quiet, **kwargs)

    return wrapper


def solver_options(command):
    """--tol, --max-iters, --out and --protocol, shared by the solver commands."""
    options = [
        click.option('--tol', type=float, default=None, help='Residual tolerance (protocol value if omitted).'),
        click.option('--max-iters', type=int, default=None, help='Iteration budget (protocol value if omitted).'),
        click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None,
                     help='Write the result to this file.'),
        click.option('--protocol', default='standard', show_default=True,
                     help=f"Protocol tag ({', '.join(list_protocols())}) or path to a protocol YAML file."),
    ]
    for option in reversed(options):
        command = option(command)
    return command


GRAPH_OPTION = click.option('--graph', 'graph_path', required=True, type=click.Path(dir_okay=False),
                            help='Graph JSON file.')
VORTEX_OPTION = click.option('--vortex', 'vortices', required=True, multiple=True,
                             help='Vortex vertex id; repeat for several (or repeated) vortices.')


@click.group()
@click.version_option(__version__)
def cli():
    """Mean field equations on connected finite weighted graphs."""


@cli.command('solve-dirac')
@GRAPH_OPTION
@click.option('--rho', type=float, required=True, help='Mass of the Dirac source, > 0.')
@click.option('--pole', required=True, help='Vertex id carrying the source.')
@click.option('--trace', is_flag=True, help='Keep the per-iteration trace in the report.')
@solver_options
@logging_options
def solve_dirac(graph_path, rho, pole, trace, tol, max_iters, out, protocol, quiet):
    """Solve Delta u + e^u = rho delta_pole."""
    with _input_errors():
        graph = load_graph(graph_path)
        overrides = {'tol': tol, 'max_iters': max_iters, 'verbose': True if trace else None}
        parameters = get_parameters('dirac', _protocol(protocol), overrides)
        problem = DiracProblem(graph, rho, pole)

    try:
        with _input_errors():
            field_u, report = solve_dirac_mfe(problem, parameters)
    except MaxIterationsExceeded as exc:
        _emit(exc.report.as_dict() if exc.report else {}, quiet)
        _exit('ERROR_MAX_ITERATIONS', str(exc))
    except (SolveFailed, ExpOverflow) as exc:
        _exit('ERROR_SOLVE_FAILED', str(exc))

    solution = SolutionFile.from_field('dirac', problem.parameters_dict(), field_u, report.as_dict())
    solution.report['residual_sup'] = compute_residual(solution, graph)
    with _input_errors():
        if out:
            solution.write(out)
    _emit(solution.report if out else solution.to_dict(), quiet)


@cli.command('solve-vortex')
@GRAPH_OPTION
@click.option('--lambda', 'lam', type=float, required=True, help='Coupling lambda, > 0.')
@VORTEX_OPTION
@click.option('--K', 'screening', type=float, default=None, help='Screening constant, >= 2 lambda.')
@click.option('--divergence-floor', type=float, default=None, help='Divergence is declared below -floor.')
@solver_options
@logging_options
def solve_vortex(graph_path, lam, vortices, screening, divergence_floor, tol, max_iters, out, protocol, quiet):
    """Solve Delta u = lambda e^u (e^u - 1) + 4 pi sum delta_p by monotone iteration.

    Exit code 1 means the iteration diverged, which is evidence that lambda < lambda_c.
    """
    with _input_errors():
        graph = load_graph(graph_path)
        overrides = {
            'tol': tol,
            'max_iters': max_iters,
            'K': screening,
            'divergence_floor': divergence_floor,
            'record_fields': False,
        }
        parameters = get_parameters('vortex', _protocol(protocol), overrides)
        problem = VortexProblem(graph, lam, vortices)

    try:
        with _input_errors():
            field_u, trace, report = solve_vortex_mfe(problem, parameters)
    except (SolveFailed, ExpOverflow) as exc:
        _exit('ERROR_SOLVE_FAILED', str(exc))

    if field_u is None:
        _emit({'report': report.as_dict(), 'trace': trace.summary()}, quiet)
        label = 'DIVERGED' if report.status == 'diverged' else 'ERROR_MAX_ITERATIONS'
        _exit(label, report.criterion)

    solution = SolutionFile.from_field('vortex', problem.parameters_dict(), field_u,
                                       dict(report.as_dict(), trace=trace.summary()))
    solution.report['residual_sup'] = compute_residual(solution, graph)
    with _input_errors():
        if out:
            solution.write(out)
    _emit(solution.report if out else solution.to_dict(), quiet)


@cli.command('lambda-c')
@GRAPH_OPTION
@VORTEX_OPTION
@click.option('--width', type=float, default=None, help='Absolute target width of the bracket.')
@click.option('--upper-guess', type=float, default=None, help='First upper value of lambda.')
@solver_options
@logging_options
def lambda_c(graph_path, vortices, width, upper_guess, tol, max_iters, out, protocol, quiet):
    """Bracket the critical coupling lambda_c."""
    with _input_errors():
        graph = load_graph(graph_path)
        overrides = {'tol': tol, 'max_iters': max_iters, 'width': width, 'upper_guess': upper_guess}
        parameters = get_parameters('lambda_c', _protocol(protocol), overrides)

    try:
        with _input_errors():
            bracket = estimate_lambda_c(graph, vortices, parameters)
    except BudgetExhausted as exc:
        _emit({'evidence': exc.evidence}, quiet)
        _exit('ERROR_BUDGET_EXHAUSTED', str(exc))
    except (SolveFailed, ExpOverflow) as exc:
        _exit('ERROR_SOLVE_FAILED', str(exc))

    payload = dict(bracket.as_dict(), graph_hash=graph.fingerprint, vortices=list(vortices))
    with _input_errors():
        if out:
            write_atomically(out, json.dumps(payload, indent=1) + '\n')
    _emit(payload, quiet)


def _parse_periods(_ctx, _param, value):
    if value is None:
        return None
    try:
        periods = [int(entry) for entry in value.split(',')]
    except ValueError as exc:
        raise click.BadParameter('expected four integers a,b,c,d') from exc
    if len(periods) != 4:
        raise click.BadParameter('expected four integers a,b,c,d')
    return periods


def _parse_sweep(_ctx, _param, value):
    if value is None:
        return None
    try:
        return [int(entry) for entry in value.split(',')]
    except ValueError as exc:
        raise click.BadParameter('expected a comma separated list of integers') from exc


def _critical_points_csv(critical_points, summary):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for point in critical_points.points:
        writer.writerow(point.as_row())
    for key, value in summary.items():
        buffer.write(f'# {key} = {value}\n')
    return buffer.getvalue()


@cli.command('torus-green')
@click.option('--n', 'refinement', type=int, default=None, help='Grid points per unit length.')
@click.option('--preset', type=click.Choice(sorted(PRESETS)), default='tau-half-plus-i', show_default=True)
@click.option('--periods', callback=_parse_periods, default=None,
              help='Integer period vectors a,b,c,d of the lattice; overrides --preset.')
@click.option('--sweep', callback=_parse_sweep, default=None,
              help='Comma separated refinements: print the slope of the preset for each.')
@click.option('--tol', type=float, default=None, help='Tolerance for vanishing central differences.')
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None,
              help='Write the critical point CSV here instead of standard output.')
@click.option('--solution', type=click.Path(dir_okay=False, writable=True), default=None,
              help="Also write the Green's function as a solution file.")
@click.option('--protocol', default='standard', show_default=True, help='Protocol tag or YAML path.')
@logging_options
def torus_green_command(refinement, preset, periods, sweep, tol, out, solution, protocol, quiet):
    """Green's function of a discrete torus, its critical points and their slope."""
    with _input_errors():
        parameters = get_parameters('torus', _protocol(protocol), {'tol': tol})
        if sweep:
            rows = slope_convergence(sweep, parameters)
            buffer = io.StringIO()
            writer = csv.DictWriter(buffer, fieldnames=['n', 'slope', 'deviation', 'num_critical_points'],
                                    lineterminator='\n')
            writer.writeheader()
            writer.writerows(rows)
            _write_or_echo(out, buffer.getvalue(), quiet)
            return
        if periods is not None:
            spec = TorusSpec.from_periods(*periods, n=refinement)
        elif refinement is None:
            raise click.UsageError('Give --n for the preset, or --periods.')
        else:
            spec = PRESETS[preset](refinement)
        torus = build_torus_graph(spec)

    green = torus_green(spec)
    green_solution = SolutionFile.from_field('green', {'torus': spec.to_dict(), 'pole': torus.origin}, green)
    residual = compute_residual(green_solution, torus.graph)
    critical_points = find_critical_points(spec, green, parameters)
    try:
        slope = critical_slope(critical_points, spec, parameters)
    except AmbiguousCriticalSet as exc:
        LOGGER.warning('%s', exc)
        slope = None

    summary = {
        'periods': ';'.join(f'{x},{y}' for x, y in spec.periods),
        'n': spec.n,
        'num_vertices': spec.num_vertices,
        'num_critical_points': len(critical_points),
        'slope': slope,
        'slope_target': parameters['slope_target'],
        'residual': residual,
    }
    green_solution.report = {'residual_sup': residual, 'num_critical_points': len(critical_points), 'slope': slope}
    with _input_errors():
        if solution:
            green_solution.write(solution)
        _write_or_echo(out, _critical_points_csv(critical_points, summary), quiet)
    if out and not quiet:
        for key, value in summary.items():
            click.echo(f'# {key} = {value}')


def _write_or_echo(out, text, quiet):
    if out:
        write_atomically(out, text)
    elif not quiet:
        click.echo(text, nl=False)


@cli.command('verify')
@click.argument('solution_path', type=click.Path(dir_okay=False))
@click.option('--graph', 'graph_path', type=click.Path(dir_okay=False), default=None,
              help='Graph JSON file (not needed for Green function solutions).')
@click.option('--tol', type=float, default=VERIFY_TOL, show_default=True,
              help='Allowed difference between stored and recomputed residual.')
@logging_options
def verify(solution_path, graph_path, tol, quiet):
    """Recompute the residual of a solution file and compare it with the stored value."""
    with _input_errors():
        solution = SolutionFile.read(solution_path)
        graph = load_graph(graph_path) if graph_path else None
        matches, stored, recomputed = verify_solution(solution, graph, tol)
    _emit({'equation': solution.equation, 'stored': stored, 'recomputed': recomputed, 'matches': matches}, quiet)
    if not matches:
        _exit('ERROR_VERIFY_MISMATCH', f'stored residual {stored} vs recomputed {recomputed!r}')


@cli.command('random-graph')
@click.option('--n', 'num_vertices', type=click.IntRange(min=1), required=True, help='Number of vertices.')
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--extra-edge-prob', type=click.FloatRange(0.0, 1.0), default=0.2, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, writable=True), required=True)
@logging_options
def random_graph(num_vertices, seed, extra_edge_prob, out, quiet):
    """Write a random connected graph with weights and measures uniform on [0.5, 2]."""
    graph = random_connected_graph(num_vertices, seed=seed, extra_edge_prob=extra_edge_prob)
    with _input_errors():
        write_graph(graph, out)
    _emit({'num_vertices': graph.num_vertices, 'num_edges': graph.num_edges, 'fingerprint': graph.fingerprint}, quiet)


@cli.command('protocols')
def protocols():
    """List the shipped solver protocols."""
    for tag in list_protocols():
        description = ' '.join(load_solver_protocol(tag=tag)['protocol_description'].split())
        click.echo(f'{tag}: {description}')
