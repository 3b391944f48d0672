"""
graphifs command line.

Exit codes: 0 success, 1 internal error, 2 invalid input, 3 the computation
finished but certification or classification was not achieved.
"""
import functools
import logging
import os

import click
import django
import toml
from django.conf import settings
from django.core.exceptions import ImproperlyConfigured
from django.test.utils import override_settings

from graphifs.fractal import documents
from graphifs.fractal.classifier import classify_attractor
from graphifs.fractal.dimension import solve_dimension
from graphifs.fractal.exceptions import IfsError, IfsInputError
from graphifs.fractal.gaps import (
    compare_gap_sets,
    enumerate_coset_union,
    one_vertex_gap_expression,
    two_vertex_gap_expression,
)
from graphifs.fractal.ifs_graph import (
    TwoVertexFamily,
    as_family,
    check_cssc,
    compute_hulls,
    format_rational,
    parse_rational,
)
from graphifs.fractal.intervals import default_gap_cutoff, density, gap_lengths, measure_of_interval
from graphifs.fractal.measure import certify
from graphifs.fractal.render import RenderSpec, render_svg


logger = logging.getLogger(__name__)

EXIT_INTERNAL_ERROR = 1
EXIT_INVALID_INPUT = 2
EXIT_NOT_ACHIEVED = 3

CONFIG_ENVIRONMENT_VARIABLE = 'GRAPHIFS_CONFIG'


class InvalidInput(click.ClickException):
    exit_code = EXIT_INVALID_INPUT


class InternalError(click.ClickException):
    exit_code = EXIT_INTERNAL_ERROR


def handle_errors(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (click.ClickException, click.exceptions.Exit):
            raise
        except (IfsInputError, ImproperlyConfigured) as e:
            raise InvalidInput(f'{type(e).__name__}: {e}') from e
        except Exception as e:
            logger.exception(e)
            raise InternalError(f'{type(e).__name__}: {e}') from e
    return wrapper


def read_overrides(path):
    """ UPPERCASE setting names and values from a TOML file; keys must name known settings """
    if not path:
        return {}
    try:
        loaded = toml.load(path)
    except (OSError, toml.TomlDecodeError) as e:
        raise ImproperlyConfigured(f'Cannot read configuration file {path}: {e}') from e
    overrides = {}
    for key, value in loaded.items():
        name = key.upper()
        if not hasattr(settings, name):
            raise ImproperlyConfigured(f'Unknown setting {key!r} in {path}')
        logger.debug('setting %s overridden from %s', name, path)
        overrides[name] = value
    return overrides


def decimal(value):
    return '%.10g' % value


class RationalType(click.ParamType):
    name = 'p/q'

    def convert(self, value, param, ctx):
        try:
            return parse_rational(value)
        except IfsError as e:
            self.fail(str(e), param, ctx)


RATIONAL = RationalType()

ifs_argument = click.argument(
    'document', type=click.Path(exists=True, dir_okay=False)
)
vertex_option = click.option('--vertex', default=0, show_default=True, type=int)


def emit(ctx, lines, document):
    if ctx.obj['format'] == 'machine':
        click.echo(documents.dumps(document), nl=False)
    else:
        for line in lines:
            click.echo(line)


@click.group()
@click.option('--config', type=click.Path(exists=True, dir_okay=False),
              help='TOML file overriding settings.')
@click.option('-v', '--verbose', is_flag=True, help='Log debug output to stderr.')
@click.option('--format', 'output_format', type=click.Choice(['text', 'machine']),
              default='text', show_default=True)
@click.pass_context
@handle_errors
def cli(ctx, config, verbose, output_format):
    django.setup()
    overrides = read_overrides(config or os.environ.get(CONFIG_ENVIRONMENT_VARIABLE))
    if overrides:
        ctx.with_resource(override_settings(**overrides))
    if verbose:
        logging.getLogger('graphifs').setLevel(logging.DEBUG)
    ctx.ensure_object(dict)
    ctx.obj['format'] = output_format


def load(path):
    return documents.read_document(path)


@cli.command()
@ifs_argument
@click.pass_context
@handle_errors
def validate(ctx, document):
    """ Structure, hulls and the convex strong separation condition """
    ifs = load(document).ifs
    hull = compute_hulls(ifs)
    cssc = check_cssc(ifs)
    lines = [f'{ifs}: strongly connected, every vertex has out-degree >= 2']
    lines += [f'hull {vertex}: {hull[vertex]}' for vertex in ifs.vertices]
    if not hull.exact:
        lines.append(f'hull endpoints approximate after {hull.iterations} iterations')
    if cssc:
        lines.append('CSSC: holds')
    else:
        lines.append(f'CSSC: fails at vertex {cssc.vertex}, edges {" and ".join(cssc.witness)}')
    emit(ctx, lines, {
        'vertices': ifs.vertex_count,
        'edges': len(ifs.edges),
        'hulls': {vertex: [hull[vertex].lo, hull[vertex].hi] for vertex in ifs.vertices},
        'hulls_exact': hull.exact,
        'cssc': cssc.as_document(),
    })


@cli.command()
@ifs_argument
@click.option('--tol', type=float, default=None, help='Residual tolerance on rho(A(s)) - 1.')
@click.pass_context
@handle_errors
def dimension(ctx, document, tol):
    """ Hausdorff dimension and Perron eigenvector """
    result = solve_dimension(load(document).ifs, tol)
    lines = [f's = {decimal(result.s)}']
    lines += [f'h_{vertex} = {decimal(value)}' for vertex, value in enumerate(result.h)]
    lines.append(f'rho residual = {result.rho_residual:.3g}')
    lines.append(f'eigen residual = {result.eigen_residual:.3g}')
    emit(ctx, lines, result.as_document())


@cli.command()
@ifs_argument
@click.option('--tol', type=float, default=None)
@click.pass_context
@handle_errors
def measure(ctx, document, tol):
    """ Certify the exact Hausdorff measures of a two-vertex family """
    report = certify(as_family(load(document).ifs), tol=tol)
    conditions = report.conditions
    lines = [
        f's = {decimal(report.dimension.s)}',
        f'condition 1 (equal hull lengths): {conditions.cond1_holds}',
        f'condition 2 h_v/h_u = {decimal(conditions.cond2_value)}: {conditions.cond2_status.value}',
        f'condition 3 quotient = {decimal(conditions.cond3_value)}: {conditions.cond3_status.value}',
        f'status: {report.status.value}',
    ]
    if report.measures:
        lines.append(f'H^s(F_u) = {decimal(report.measures[0])}')
        lines.append(f'H^s(F_v) = {decimal(report.measures[1])}')
    emit(ctx, lines, report.as_document())
    if not report.certified:
        ctx.exit(EXIT_NOT_ACHIEVED)


def _gap_expression(ifs, vertex):
    if ifs.is_one_vertex:
        return one_vertex_gap_expression(ifs)
    try:
        family = TwoVertexFamily.from_ifs(ifs)
    except IfsInputError:
        return None
    if vertex == 1:
        family = family.swapped()
    return two_vertex_gap_expression(family, equal_bd=family.equal_bd)


@cli.command()
@ifs_argument
@click.option('--depth', type=int, default=None, help='Interval level (default GAP_DEPTH).')
@click.option('--cutoff', type=RATIONAL, default=None, help='Cross-check gaps at or above p/q.')
@vertex_option
@click.pass_context
@handle_errors
def gaps(ctx, document, depth, cutoff, vertex):
    """ Gap lengths at a level, checked against their coset expression """
    ifs = load(document).ifs
    depth = settings.GAP_DEPTH if depth is None else depth
    multiset = gap_lengths(ifs, vertex, depth)
    cutoff = default_gap_cutoff(ifs, depth) if cutoff is None else cutoff
    lines = [
        f'{format_rational(length)} x{count}' if count > 1 else format_rational(length)
        for length, count in reversed(multiset.counts)
    ]
    result = {
        'vertex': vertex,
        'depth': depth,
        'gaps': {format_rational(length): count for length, count in multiset.counts},
        'cutoff': cutoff,
    }
    expression = _gap_expression(ifs, vertex)
    if expression is not None:
        comparison = compare_gap_sets(
            enumerate_coset_union(expression, cutoff), multiset.above(cutoff)
        )
        result['expression'] = str(expression)
        result['cross_check'] = {'equal': comparison.equal, 'witness': comparison.witness}
        lines.append(f'expression: {expression}')
        lines.append(
            f'cross-check above {format_rational(cutoff)}: '
            + ('equal' if comparison else f'differs at {format_rational(comparison.witness)}')
        )
    emit(ctx, lines, result)


@cli.command('density')
@ifs_argument
@vertex_option
@click.option('--interval', nargs=2, type=RATIONAL, required=True, metavar='LO HI')
@click.option('--depth', type=int, default=None, help='Interval level (default DENSITY_DEPTH).')
@click.pass_context
@handle_errors
def density_command(ctx, document, vertex, interval, depth):
    """ Bounds on the measure and density of an interval """
    ifs = load(document).ifs
    depth = settings.DENSITY_DEPTH if depth is None else depth
    result = solve_dimension(ifs)
    measure_bounds = measure_of_interval(ifs, result.s, result.h, vertex, interval, depth)
    density_bounds = density(ifs, result.s, result.h, vertex, interval, depth)
    lo, hi = interval
    lines = [
        f'interval [{format_rational(lo)}, {format_rational(hi)}] at vertex {vertex}, depth {depth}',
        f'measure in [{decimal(measure_bounds[0])}, {decimal(measure_bounds[1])}]',
        f'density in [{decimal(density_bounds[0])}, {decimal(density_bounds[1])}]',
    ]
    emit(ctx, lines, {
        'vertex': vertex,
        'depth': depth,
        'interval': [lo, hi],
        's': result.s,
        'measure': list(measure_bounds),
        'density': list(density_bounds),
    })


@cli.command()
@ifs_argument
@vertex_option
@click.pass_context
@handle_errors
def classify(ctx, document, vertex):
    """ Decide whether an attractor can come from a one-vertex IFS """
    certificate = classify_attractor(load(document).ifs, vertex)
    lines = [f'verdict: {certificate.verdict.value}']
    if certificate.criterion is not None:
        lines.append(f'criterion: {certificate.criterion.value}')
        lines.append(f'citation: {certificate.criterion.citation}')
    lines.append(f'reason: {certificate.reason}')
    if certificate.dimension is not None:
        lines.append(f's = {decimal(certificate.dimension.s)}')
    if certificate.conditions is not None:
        lines.append(f'h_v/h_u = {decimal(certificate.conditions.cond2_value)}')
        lines.append(f'quotient = {decimal(certificate.conditions.cond3_value)}')
    if certificate.structure:
        lines.append('cycles: ' + ', '.join(str(c) for c in certificate.structure.cycles))
    emit(ctx, lines, certificate.as_document())
    if not certificate.excludes_one_vertex:
        ctx.exit(EXIT_NOT_ACHIEVED)


@cli.command()
@ifs_argument
@click.option('--levels', type=int, default=4, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default='-',
              show_default=True)
@click.option('--width', type=int, default=None)
@handle_errors
def render(document, levels, out, width):
    """ SVG of the level intervals at every vertex """
    options = {'levels': levels}
    if width is not None:
        options['width'] = width
    svg = render_svg(load(document).ifs, RenderSpec(**options))
    if out == '-':
        click.echo(svg, nl=False)
        return
    with open(out, 'w', encoding='utf-8', newline='\n') as stream:
        stream.write(svg)
    logger.info('wrote %s', out)


@cli.command()
@ifs_argument
@handle_errors
def export(document):
    """ The graph form of any IFS document """
    click.echo(documents.dump_ifs(load(document).ifs), nl=False)


def main():
    cli(prog_name='graphifs')
