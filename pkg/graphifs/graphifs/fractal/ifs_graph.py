"""
Directed-graph iterated function systems on the real line.

Every parameter is an exact rational (``fractions.Fraction``). An edge ``e``
runs from ``source`` (its initial vertex) to ``target`` (its terminal vertex)
and its similarity maps the hull at the target into the hull at the source.
A path ``e1 e2 ... ek`` composes when the target of each edge is the source of
the next, and its map is ``S_e1 o S_e2 o ... o S_ek``.
"""
import functools
import logging
import re
from fractions import Fraction
from numbers import Integral

import attr
import networkx as nx
import numpy as np
from django.conf import settings
from django.core.signals import setting_changed
from django.dispatch import receiver

from .exceptions import (
    CsscViolated,
    DegenerateHull,
    DocumentError,
    DuplicateEdgeId,
    EmptyEdgeList,
    InvalidDepth,
    InvalidInterval,
    NonPositiveParameter,
    NonRationalParameter,
    NotCanonicalFamily,
    NotStronglyConnected,
    OutDegreeTooSmall,
    PathNotComposable,
    RatioOutOfRange,
    ReflectionNotSupported,
    SumNotOne,
    UnknownVertex,
)


logger = logging.getLogger(__name__)

ROOT_VERTEX = 0
FAMILY_EDGE_IDS = ('e1', 'e2', 'e3', 'e4')
CACHE_SIZE = 128

_RATIONAL_RE = re.compile(r'^[+-]?\d+(/\d+)?$')
_ID_PART_RE = re.compile(r'\d+|\D+')


def parse_rational(value):
    """ Exact rational from an int, a Fraction or a "p/q" string; floats are refused """
    if isinstance(value, bool):
        raise NonRationalParameter(f'{value!r} is not a rational number')
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        text = value.replace(' ', '')
        if not _RATIONAL_RE.match(text):
            raise NonRationalParameter(f'{value!r} is not a "p/q" rational string')
        try:
            return Fraction(text)
        except ZeroDivisionError:
            raise NonRationalParameter(f'{value!r} has a zero denominator') from None
    raise NonRationalParameter(
        f'{value!r} ({type(value).__name__}) is not an exact rational'
    )


def format_rational(value):
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def edge_sort_key(edge_id):
    """ Natural ordering of edge ids: ``e2`` sorts before ``e10`` """
    return tuple(
        (0, int(part), '') if part.isdigit() else (1, 0, part)
        for part in _ID_PART_RE.findall(str(edge_id))
    )


@attr.frozen
class ClosedInterval:
    lo: Fraction = attr.field(converter=parse_rational)
    hi: Fraction = attr.field(converter=parse_rational)

    @hi.validator
    def _check_order(self, attribute, value):
        if value < self.lo:
            raise InvalidInterval(f'[{self.lo}, {value}] has its endpoints reversed')

    def __str__(self):
        return f'[{format_rational(self.lo)}, {format_rational(self.hi)}]'

    @property
    def length(self):
        return self.hi - self.lo

    def contains(self, other):
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other):
        return max(self.lo, other.lo) <= min(self.hi, other.hi)

    def overlaps(self, other):
        """ True when the interiors meet """
        return max(self.lo, other.lo) < min(self.hi, other.hi)

    def intersection(self, other):
        if not self.intersects(other):
            return None
        return ClosedInterval(max(self.lo, other.lo), min(self.hi, other.hi))


@attr.frozen
class Similarity:
    """ x -> ratio * x + translation, with 0 < ratio < 1 """

    ratio: Fraction = attr.field(converter=parse_rational)
    translation: Fraction = attr.field(default=Fraction(0), converter=parse_rational)

    @ratio.validator
    def _check_ratio(self, attribute, value):
        if value < 0:
            raise ReflectionNotSupported(
                f'ratio {value} reverses orientation; reflections are not supported'
            )
        if not 0 < value < 1:
            raise RatioOutOfRange(f'ratio {value} is not in (0, 1)')

    def __call__(self, x):
        return self.ratio * x + self.translation

    def compose(self, other):
        """ The map ``self o other`` """
        return Similarity(
            self.ratio * other.ratio,
            self.ratio * other.translation + self.translation,
        )

    def fixed_point(self):
        return self.translation / (1 - self.ratio)

    def image(self, interval):
        return ClosedInterval(self(interval.lo), self(interval.hi))


@attr.frozen
class Edge:
    id: str = attr.field(converter=str)
    source: int
    target: int
    map: Similarity

    @property
    def ratio(self):
        return self.map.ratio

    @property
    def sort_key(self):
        return edge_sort_key(self.id)


def _sorted_edges(edges):
    return tuple(sorted(edges, key=lambda edge: edge.sort_key))


@attr.frozen(slots=False)
class DirectedGraphIfs:
    vertex_count: int
    edges: tuple = attr.field(converter=_sorted_edges)

    def __attrs_post_init__(self):
        if not isinstance(self.vertex_count, Integral) or self.vertex_count < 1:
            raise UnknownVertex(f'vertex count must be a positive integer, got {self.vertex_count!r}')
        if not self.edges:
            raise EmptyEdgeList('an IFS needs at least one edge')
        seen = set()
        for edge in self.edges:
            if edge.id in seen:
                raise DuplicateEdgeId(f'edge id {edge.id!r} is used twice')
            seen.add(edge.id)
            for vertex in (edge.source, edge.target):
                if not isinstance(vertex, Integral) or not 0 <= vertex < self.vertex_count:
                    raise UnknownVertex(f'edge {edge.id} refers to unknown vertex {vertex!r}')
        if not nx.is_strongly_connected(self.graph):
            raise NotStronglyConnected('the directed graph is not strongly connected')
        for vertex in self.vertices:
            degree = len(self.out_edges(vertex))
            if degree < 2:
                raise OutDegreeTooSmall(
                    f'vertex {vertex} has {degree} outgoing edge(s), at least 2 are required'
                )

    def __str__(self):
        return f'{self.vertex_count}-vertex IFS with {len(self.edges)} edges'

    @functools.cached_property
    def graph(self):
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        for edge in self.edges:
            graph.add_edge(edge.source, edge.target, key=edge.id, edge=edge)
        return graph

    @functools.cached_property
    def _out_edges(self):
        grouped = {vertex: [] for vertex in range(self.vertex_count)}
        for edge in self.edges:
            grouped[edge.source].append(edge)
        return {vertex: tuple(edges) for vertex, edges in grouped.items()}

    @property
    def vertices(self):
        return range(self.vertex_count)

    @property
    def is_one_vertex(self):
        return self.vertex_count == 1

    @property
    def max_ratio(self):
        return max(edge.ratio for edge in self.edges)

    def check_vertex(self, vertex):
        if isinstance(vertex, bool) or not isinstance(vertex, Integral) \
                or not 0 <= vertex < self.vertex_count:
            raise UnknownVertex(f'{vertex!r} is not a vertex of {self}')
        return int(vertex)

    def out_edges(self, vertex):
        return self._out_edges[vertex]

    def edges_between(self, source, target):
        return tuple(edge for edge in self.out_edges(source) if edge.target == target)

    def edge(self, edge_id):
        for edge in self.edges:
            if edge.id == edge_id:
                return edge
        raise KeyError(edge_id)


def edge_from_record(record):
    """ Edge from a mapping with keys id, from, to, ratio and optional translation """
    try:
        edge_id, source, target, ratio = (
            record['id'], record['from'], record['to'], record['ratio']
        )
    except (KeyError, TypeError) as exc:
        raise DocumentError(f'edge record {record!r} is missing field {exc}') from None
    for vertex in (source, target):
        if isinstance(vertex, bool) or not isinstance(vertex, Integral):
            raise DocumentError(f'edge {edge_id}: vertex {vertex!r} is not an integer')
    translation = record.get('translation', 0)
    return Edge(
        id=edge_id,
        source=int(source),
        target=int(target),
        map=Similarity(parse_rational(ratio), parse_rational(translation)),
    )


def build_ifs(edges, vertex_count=None):
    """
    Validated DirectedGraphIfs from Edge instances or edge records.

    When ``vertex_count`` is omitted it is one more than the largest vertex
    any edge mentions.
    """
    edges = [edge if isinstance(edge, Edge) else edge_from_record(edge) for edge in edges]
    if not edges:
        raise EmptyEdgeList('an IFS needs at least one edge')
    if vertex_count is None:
        vertex_count = 1 + max(max(edge.source, edge.target) for edge in edges)
    ifs = DirectedGraphIfs(vertex_count=vertex_count, edges=edges)
    logger.debug('built %s', ifs)
    return ifs


def _positive(instance, attribute, value):
    if value <= 0:
        raise NonPositiveParameter(f'{attribute.name} = {value} must be strictly positive')


@attr.frozen
class TwoVertexFamily:
    """
    The two-vertex layout: at u a loop ``e1`` of length ``a``, a gap ``g_u``
    and an edge ``e2`` to v of length ``b``; at v a loop ``e3`` of length
    ``c``, a gap ``g_v`` and an edge ``e4`` back to u of length ``d``.
    """

    a: Fraction = attr.field(converter=parse_rational, validator=_positive)
    g_u: Fraction = attr.field(converter=parse_rational, validator=_positive)
    b: Fraction = attr.field(converter=parse_rational, validator=_positive)
    c: Fraction = attr.field(converter=parse_rational, validator=_positive)
    g_v: Fraction = attr.field(converter=parse_rational, validator=_positive)
    d: Fraction = attr.field(converter=parse_rational, validator=_positive)
    origin_u: Fraction = attr.field(default=Fraction(0), converter=parse_rational)
    origin_v: Fraction = attr.field(default=Fraction(0), converter=parse_rational)

    @classmethod
    def canonical(cls, a, g_u, b, c, g_v, d):
        family = cls(a, g_u, b, c, g_v, d)
        if family.length_u != 1:
            raise SumNotOne(f'a + g_u + b = {family.length_u}, expected 1')
        if family.length_v != 1:
            raise SumNotOne(f'c + g_v + d = {family.length_v}, expected 1')
        return family

    @classmethod
    def from_ifs(cls, ifs):
        if ifs.vertex_count != 2 or len(ifs.edges) != 4:
            raise NotCanonicalFamily(f'{ifs} is not a two-vertex, four-edge system')
        try:
            (e1,), (e2,) = ifs.edges_between(0, 0), ifs.edges_between(0, 1)
            (e3,), (e4,) = ifs.edges_between(1, 1), ifs.edges_between(1, 0)
        except ValueError:
            raise NotCanonicalFamily(
                'expected one loop and one crossing edge at each vertex'
            ) from None
        hull = compute_hulls(ifs)
        if not hull.exact:
            raise NotCanonicalFamily('hull endpoints could not be resolved exactly')
        hull_u, hull_v = hull[0], hull[1]
        loop_u, cross_u = e1.map.image(hull_u), e2.map.image(hull_v)
        loop_v, cross_v = e3.map.image(hull_v), e4.map.image(hull_u)
        laid_out = (
            loop_u.lo == hull_u.lo and cross_u.hi == hull_u.hi and loop_u.hi < cross_u.lo
            and loop_v.lo == hull_v.lo and cross_v.hi == hull_v.hi and loop_v.hi < cross_v.lo
        )
        if not laid_out:
            raise NotCanonicalFamily(
                'loops must sit at the left of each hull and crossing edges at the right'
            )
        return cls(
            a=loop_u.length,
            g_u=cross_u.lo - loop_u.hi,
            b=cross_u.length,
            c=loop_v.length,
            g_v=cross_v.lo - loop_v.hi,
            d=cross_v.length,
            origin_u=hull_u.lo,
            origin_v=hull_v.lo,
        )

    @property
    def length_u(self):
        return self.a + self.g_u + self.b

    @property
    def length_v(self):
        return self.c + self.g_v + self.d

    @property
    def is_unit_interval(self):
        return (
            self.length_u == 1 and self.length_v == 1
            and self.origin_u == 0 and self.origin_v == 0
        )

    @property
    def ratios(self):
        """ Edge ratios r_e1, r_e2, r_e3, r_e4 """
        return (
            self.a / self.length_u,
            self.b / self.length_v,
            self.c / self.length_v,
            self.d / self.length_u,
        )

    @property
    def equal_bd(self):
        _, r2, _, r4 = self.ratios
        return r2 == r4

    @property
    def gaps(self):
        return self.g_u, self.g_v

    def swapped(self):
        return TwoVertexFamily(
            self.c, self.g_v, self.d, self.a, self.g_u, self.b,
            origin_u=self.origin_v, origin_v=self.origin_u,
        )

    def to_ifs(self):
        r1, r2, r3, r4 = self.ratios
        au, av = self.origin_u, self.origin_v
        maps = (
            (0, 0, Similarity(r1, au - r1 * au)),
            (0, 1, Similarity(r2, au + self.a + self.g_u - r2 * av)),
            (1, 1, Similarity(r3, av - r3 * av)),
            (1, 0, Similarity(r4, av + self.c + self.g_v - r4 * au)),
        )
        edges = [
            Edge(id=edge_id, source=source, target=target, map=similarity)
            for edge_id, (source, target, similarity) in zip(FAMILY_EDGE_IDS, maps)
        ]
        return DirectedGraphIfs(vertex_count=2, edges=edges)

    def as_document(self):
        return {
            name: format_rational(getattr(self, name))
            for name in ('a', 'g_u', 'b', 'c', 'g_v', 'd')
        }


def two_vertex_ifs(a, g_u, b, c, g_v, d, origin_u=0, origin_v=0):
    return TwoVertexFamily(a, g_u, b, c, g_v, d, origin_u, origin_v).to_ifs()


def canonical_two_vertex(a, g_u, b, c, g_v, d):
    """ Unit-interval family: S_e1(x) = ax, S_e2(x) = bx + a + g_u, S_e3(x) = cx, S_e4(x) = dx + c + g_v """
    return TwoVertexFamily.canonical(a, g_u, b, c, g_v, d).to_ifs()


@attr.frozen(slots=False)
class PathLabel:
    edges: tuple = attr.field(converter=tuple)

    @edges.validator
    def _check_composable(self, attribute, value):
        if not value:
            raise PathNotComposable('a path needs at least one edge')
        for first, second in zip(value, value[1:]):
            if first.target != second.source:
                raise PathNotComposable(
                    f'edge {first.id} ends at {first.target} but {second.id} '
                    f'starts at {second.source}'
                )

    def __str__(self):
        return ''.join(self.edge_ids)

    def __len__(self):
        return len(self.edges)

    def __add__(self, other):
        return PathLabel(self.edges + other.edges)

    @property
    def edge_ids(self):
        return tuple(edge.id for edge in self.edges)

    @property
    def initial(self):
        return self.edges[0].source

    @property
    def terminal(self):
        return self.edges[-1].target

    @property
    def vertex_list(self):
        return (self.initial,) + tuple(edge.target for edge in self.edges)

    @functools.cached_property
    def ratio(self):
        return functools.reduce(lambda acc, edge: acc * edge.ratio, self.edges, Fraction(1))

    @functools.cached_property
    def map(self):
        return functools.reduce(Similarity.compose, (edge.map for edge in self.edges))


def _walk(ifs, vertex, length):
    if length == 0:
        yield ()
        return
    for edge in ifs.out_edges(vertex):
        for rest in _walk(ifs, edge.target, length - 1):
            yield (edge,) + rest


def enumerate_paths(ifs, from_vertex, k):
    """ All paths of length ``k`` leaving ``from_vertex``, in lexicographic edge-id order """
    if isinstance(k, bool) or not isinstance(k, Integral) or k < 1:
        raise InvalidDepth(f'path length must be a positive integer, got {k!r}')
    vertex = ifs.check_vertex(from_vertex)
    return [PathLabel(edges) for edges in _walk(ifs, vertex, k)]


@attr.frozen
class Hull:
    intervals: tuple
    exact: bool = True
    iterations: int = 0

    def __getitem__(self, vertex):
        return self.intervals[vertex]

    def __iter__(self):
        return iter(self.intervals)

    def length(self, vertex):
        return self.intervals[vertex].length


def _solve_policy(ifs, policy):
    """
    Exact endpoints forced by choosing ``policy[u]`` at every vertex u.

    Following the chosen edges from any vertex ends in a cycle; the endpoint
    of the cycle's first vertex is the fixed point of the composite cycle map
    and every other endpoint follows by applying the chosen maps backwards.
    """
    values = {}
    for start in ifs.vertices:
        trail = []
        vertex = start
        while vertex not in values and vertex not in trail:
            trail.append(vertex)
            vertex = policy[vertex].target
        if vertex not in values:
            cut = trail.index(vertex)
            cycle = trail[cut:]
            composite = functools.reduce(
                Similarity.compose, (policy[w].map for w in cycle)
            )
            values[cycle[0]] = composite.fixed_point()
            for w in reversed(cycle[1:]):
                values[w] = policy[w].map(values[policy[w].target])
            trail = trail[:cut]
        for w in reversed(trail):
            values[w] = policy[w].map(values[policy[w].target])
    return [values[vertex] for vertex in ifs.vertices]


def _satisfies_endpoint_equations(ifs, lows, highs):
    for vertex in ifs.vertices:
        edges = ifs.out_edges(vertex)
        if lows[vertex] != min(edge.map(lows[edge.target]) for edge in edges):
            return False
        if highs[vertex] != max(edge.map(highs[edge.target]) for edge in edges):
            return False
    return True


def _check_not_degenerate(ifs, lows, highs, tolerance):
    for vertex in ifs.vertices:
        if highs[vertex] - lows[vertex] <= tolerance:
            raise DegenerateHull(
                f'the attractor at vertex {vertex} of {ifs} is the single point '
                f'{float(lows[vertex]):.10g}; hulls need positive length'
            )


def _endpoint_step(ratios, translations, sources, targets, lows, highs, vertex_count):
    new_lows = np.full(vertex_count, np.inf)
    new_highs = np.full(vertex_count, -np.inf)
    np.minimum.at(new_lows, sources, ratios * lows[targets] + translations)
    np.maximum.at(new_highs, sources, ratios * highs[targets] + translations)
    return new_lows, new_highs


@functools.lru_cache(maxsize=CACHE_SIZE)
def compute_hulls(ifs):
    """
    Smallest closed intervals containing the attractors.

    The endpoint map is iterated in floating point from the box spanned by the
    single-edge fixed points; at every step the edges attaining the minima and
    maxima are solved exactly and accepted once they satisfy the endpoint
    equations in rationals.
    """
    fixed_points = [edge.map.fixed_point() for edge in ifs.edges]
    n = ifs.vertex_count
    ratios = np.array([float(edge.ratio) for edge in ifs.edges])
    translations = np.array([float(edge.map.translation) for edge in ifs.edges])
    sources = np.array([edge.source for edge in ifs.edges])
    targets = np.array([edge.target for edge in ifs.edges])
    lows = np.full(n, float(min(fixed_points)))
    highs = np.full(n, float(max(fixed_points)))

    def choose(vertex, endpoints, pick):
        return pick(
            ifs.out_edges(vertex),
            key=lambda edge: (float(edge.ratio) * endpoints[edge.target]
                              + float(edge.map.translation)),
        )

    iteration = 0
    for iteration in range(1, settings.HULL_MAX_ITERATIONS + 1):
        low_policy = {vertex: choose(vertex, lows, min) for vertex in ifs.vertices}
        high_policy = {vertex: choose(vertex, highs, max) for vertex in ifs.vertices}
        exact_lows = _solve_policy(ifs, low_policy)
        exact_highs = _solve_policy(ifs, high_policy)
        if _satisfies_endpoint_equations(ifs, exact_lows, exact_highs):
            _check_not_degenerate(ifs, exact_lows, exact_highs, 0)
            logger.debug('exact hull for %s after %d iteration(s)', ifs, iteration)
            return Hull(
                intervals=tuple(
                    ClosedInterval(lo, hi) for lo, hi in zip(exact_lows, exact_highs)
                ),
                exact=True,
                iterations=iteration,
            )
        new_lows, new_highs = _endpoint_step(
            ratios, translations, sources, targets, lows, highs, n
        )
        change = max(np.abs(new_lows - lows).max(), np.abs(new_highs - highs).max())
        lows, highs = new_lows, new_highs
        if change <= settings.HULL_TOLERANCE:
            break

    _check_not_degenerate(ifs, lows, highs, settings.HULL_TOLERANCE)
    logger.warning(
        'hull endpoints of %s not resolved exactly after %d iteration(s)', ifs, iteration
    )
    return Hull(
        intervals=tuple(
            ClosedInterval(
                Fraction(float(lo)).limit_denominator(10 ** 12),
                Fraction(float(hi)).limit_denominator(10 ** 12),
            )
            for lo, hi in zip(lows, highs)
        ),
        exact=False,
        iterations=iteration,
    )


@attr.frozen
class CsscReport:
    holds: bool
    vertex: int = None
    witness: tuple = None

    def __bool__(self):
        return self.holds

    def as_document(self):
        document = {'holds': self.holds}
        if not self.holds:
            document['vertex'] = self.vertex
            document['witness'] = list(self.witness)
        return document


def level_one_images(ifs, vertex, hull=None):
    """ (image, edge) pairs for the out-edges of ``vertex``, sorted by left endpoint """
    hull = hull or compute_hulls(ifs)
    return sorted(
        ((edge.map.image(hull[edge.target]), edge) for edge in ifs.out_edges(vertex)),
        key=lambda pair: (pair[0].lo, pair[0].hi, pair[1].sort_key),
    )


@functools.lru_cache(maxsize=CACHE_SIZE)
def check_cssc(ifs):
    """ Sibling images of hulls must be pairwise disjoint as closed intervals """
    for vertex in ifs.vertices:
        images = level_one_images(ifs, vertex)
        for (left, left_edge), (right, right_edge) in zip(images, images[1:]):
            if not left.hi < right.lo:
                return CsscReport(
                    holds=False, vertex=vertex, witness=(left_edge.id, right_edge.id)
                )
    return CsscReport(holds=True)


@receiver(setting_changed)
def _clear_hull_caches(setting, **kwargs):
    if setting.startswith('HULL_'):
        compute_hulls.cache_clear()
        check_cssc.cache_clear()


def require_cssc(ifs):
    report = check_cssc(ifs)
    if not report:
        raise CsscViolated(
            f'images of edges {report.witness[0]} and {report.witness[1]} '
            f'at vertex {report.vertex} intersect'
        )
    return report


def as_family(value):
    if isinstance(value, TwoVertexFamily):
        return value
    if isinstance(value, DirectedGraphIfs):
        return TwoVertexFamily.from_ifs(value)
    raise NotCanonicalFamily(f'{value!r} is not a two-vertex family')
