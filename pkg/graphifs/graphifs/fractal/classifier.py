"""
Decide when an attractor of a graph-directed system cannot be the attractor
of any standard (one-vertex) IFS.

Two strengths of verdict are kept apart: an unconditional exclusion, which
needs the exact measure conditions and independent parameters, and an
exclusion relative to one-vertex systems satisfying the convex strong
separation condition, which needs only separation, independence and the
cycle structure found here.
"""
import enum
import functools
import itertools
import logging

import attr
import networkx as nx

from graphifs.pipeline.models import AbstractStepProgressPipeline, Severity
from .dimension import solve_dimension
from .exceptions import NotCanonicalFamily, SameEndpoints
from .gaps import is_multiplicatively_independent
from .ifs_graph import CACHE_SIZE, PathLabel, TwoVertexFamily, check_cssc, require_cssc
from .intervals import level_one_gaps
from .measure import check_conditions


logger = logging.getLogger(__name__)


@attr.frozen(slots=False)
class SimpleCycle:
    path: PathLabel

    def __str__(self):
        return str(self.path)

    def __len__(self):
        return len(self.path)

    @property
    def edge_ids(self):
        return self.path.edge_ids

    @functools.cached_property
    def vertices(self):
        return frozenset(self.path.vertex_list)

    @property
    def ratio(self):
        return self.path.ratio

    @property
    def sort_key(self):
        return len(self.path), tuple(edge.sort_key for edge in self.path.edges)


def _rotated(nodes):
    start = nodes.index(min(nodes))
    return nodes[start:] + nodes[:start]


@functools.lru_cache(maxsize=CACHE_SIZE)
def _simple_cycles(ifs):
    cycles = set()
    for nodes in nx.simple_cycles(nx.DiGraph(ifs.graph)):
        nodes = _rotated(list(nodes))
        hops = zip(nodes, nodes[1:] + nodes[:1])
        for edges in itertools.product(*(ifs.edges_between(a, b) for a, b in hops)):
            cycles.add(SimpleCycle(PathLabel(edges)))
    return tuple(sorted(cycles, key=lambda cycle: cycle.sort_key))


def simple_cycles(ifs):
    """ Every simple cycle once, starting at its smallest vertex """
    return list(_simple_cycles(ifs))


def simple_paths(ifs, from_vertex, to_vertex):
    source, target = ifs.check_vertex(from_vertex), ifs.check_vertex(to_vertex)
    if source == target:
        raise SameEndpoints(f'simple paths need distinct endpoints, got {source} twice')
    paths = [
        PathLabel(ifs.graph.edges[hop]['edge'] for hop in hops)
        for hops in nx.all_simple_edge_paths(ifs.graph, source, target)
    ]
    return sorted(paths, key=lambda path: (len(path), tuple(e.sort_key for e in path.edges)))


@attr.frozen
class Chain:
    vertex: int
    cycles: tuple

    def __len__(self):
        return len(self.cycles)

    def __contains__(self, cycle):
        return cycle in self.cycles

    def __str__(self):
        return ' '.join(f'({cycle})' for cycle in self.cycles)


def _extend(chain, cycles, vertex, max_length):
    yield chain
    if len(chain) == max_length:
        return
    last = chain[-1]
    for cycle in cycles:
        if cycle in chain or vertex in cycle.vertices:
            continue
        if not cycle.vertices & last.vertices:
            continue
        if any(cycle.vertices & earlier.vertices for earlier in chain[:-1]):
            continue
        yield from _extend(chain + (cycle,), cycles, vertex, max_length)


def chains_attached(ifs, vertex, max_length):
    """
    Sequences of distinct simple cycles where the first passes through
    ``vertex``, the rest avoid it, and each cycle shares a vertex with its
    neighbours in the sequence and with no other cycle.
    """
    vertex = ifs.check_vertex(vertex)
    if max_length < 1:
        raise ValueError(f'chain length bound must be positive, got {max_length}')
    cycles = _simple_cycles(ifs)
    chains = [
        Chain(vertex, found)
        for first in cycles if vertex in first.vertices
        for found in _extend((first,), cycles, vertex, max_length)
    ]
    return sorted(
        chains,
        key=lambda chain: (len(chain), tuple(cycle.sort_key for cycle in chain.cycles)),
    )


@attr.frozen
class StructureReport:
    found: bool
    cycles: tuple = None

    def __bool__(self):
        return self.found

    def as_document(self):
        document = {'found': self.found}
        if self.found:
            document['cycles'] = [str(cycle) for cycle in self.cycles]
        return document


def check_chain_structure(ifs, vertex):
    """
    Look for distinct simple cycles ``c1, c2, c3`` with ``c1`` through the
    vertex, ``(c2, c3)`` a chain attached to the vertex, and no chain attached
    to the vertex containing both ``c1`` and ``c3``.
    """
    vertex = ifs.check_vertex(vertex)
    cycles = _simple_cycles(ifs)
    chains = chains_attached(ifs, vertex, len(cycles))
    pairs = [chain.cycles for chain in chains if len(chain) == 2]
    for first in cycles:
        if vertex not in first.vertices:
            continue
        for second, third in pairs:
            if first in (second, third):
                continue
            if any(first in chain and third in chain for chain in chains):
                continue
            logger.debug('structure at vertex %d: %s, %s, %s', vertex, first, second, third)
            return StructureReport(True, (first, second, third))
    return StructureReport(False)


def independence_set(ifs, vertex):
    """
    Labelled values whose independence the chain criterion needs: level-one
    gaps at every vertex, simple cycle ratios and simple path ratios leaving
    ``vertex``.
    """
    vertex = ifs.check_vertex(vertex)
    require_cssc(ifs)
    labelled = []
    for w in ifs.vertices:
        gaps = level_one_gaps(ifs, w)
        for index, gap in enumerate(gaps, start=1):
            label = f'g_{w}' if len(gaps) == 1 else f'g_{w}.{index}'
            labelled.append((label, gap))
    labelled.extend((f'r_{cycle}', cycle.ratio) for cycle in _simple_cycles(ifs))
    for w in ifs.vertices:
        if w != vertex:
            labelled.extend((f'r_{path}', path.ratio) for path in simple_paths(ifs, vertex, w))
    return tuple(labelled)


class Verdict(enum.Enum):
    NOT_ONE_VERTEX_ATTRACTOR = 'not_one_vertex_attractor'
    NOT_ONE_VERTEX_ATTRACTOR_UNDER_CSSC = 'not_one_vertex_attractor_under_cssc'
    INCONCLUSIVE = 'inconclusive'
    NOT_APPLICABLE = 'not_applicable'


class Criterion(enum.Enum):
    UNCONDITIONAL = 'exact measures with independent parameters'
    UNCONDITIONAL_EQUAL_RATIOS = 'exact measures with independent parameters, b = d'
    CSSC_RELATIVE = 'gap cosets with independent parameters'
    CSSC_RELATIVE_EQUAL_RATIOS = 'gap cosets with independent parameters, b = d'
    CSSC_RELATIVE_CHAIN = 'cycle and chain structure with independent gaps and ratios'

    @property
    def citation(self):
        return CITATIONS[self]


CITATIONS = {
    Criterion.UNCONDITIONAL: 'Theorem 2GthmU',
    Criterion.UNCONDITIONAL_EQUAL_RATIOS: 'Theorem 2GthmV',
    Criterion.CSSC_RELATIVE: 'Corollary corCb',
    Criterion.CSSC_RELATIVE_EQUAL_RATIOS: 'Corollary corC',
    Criterion.CSSC_RELATIVE_CHAIN: 'Theorem thmA',
}


UNCONDITIONAL_CRITERIA = (Criterion.UNCONDITIONAL, Criterion.UNCONDITIONAL_EQUAL_RATIOS)


@attr.frozen
class Certificate:
    vertex: int
    verdict: Verdict
    criterion: Criterion = None
    reason: str = ''
    dimension: object = None
    conditions: object = None
    independence: object = None
    structure: StructureReport = None
    cssc: object = None
    diagnostics: tuple = attr.field(default=(), eq=False)

    def __attrs_post_init__(self):
        independent = self.independence is not None and self.independence.independent
        if self.verdict is Verdict.NOT_ONE_VERTEX_ATTRACTOR:
            if not (self.criterion in UNCONDITIONAL_CRITERIA and independent
                    and self.conditions is not None and self.conditions.all_hold):
                raise ValueError('unconditional verdict without its hypotheses')
        if self.verdict is Verdict.NOT_ONE_VERTEX_ATTRACTOR_UNDER_CSSC:
            if not (independent and self.cssc):
                raise ValueError('separation-relative verdict without its hypotheses')
            if self.criterion is Criterion.CSSC_RELATIVE_CHAIN and not self.structure:
                raise ValueError('chain criterion without the cycle structure')

    @property
    def excludes_one_vertex(self):
        return self.verdict in (
            Verdict.NOT_ONE_VERTEX_ATTRACTOR, Verdict.NOT_ONE_VERTEX_ATTRACTOR_UNDER_CSSC
        )

    def as_document(self):
        document = {
            'vertex': self.vertex,
            'verdict': self.verdict.value,
            'reason': self.reason,
            'diagnostics': [d.as_document() for d in self.diagnostics],
        }
        if self.criterion is not None:
            document['criterion'] = self.criterion.value
            document['citation'] = self.criterion.citation
        if self.dimension is not None:
            document['dimension'] = self.dimension.as_document()
        if self.conditions is not None:
            document['conditions'] = self.conditions.as_document()
        if self.independence is not None:
            document['independence'] = self.independence.as_document()
        if self.structure is not None:
            document['structure'] = self.structure.as_document()
        if self.cssc is not None:
            document['cssc'] = self.cssc.as_document()
        return document


class ClassificationStage(enum.Enum):
    STRUCTURE = 'structure'
    MEASURE = 'measure'
    INDEPENDENCE = 'independence'


class ClassificationPipeline(AbstractStepProgressPipeline):

    name = 'classification'

    def __init__(self, ifs, vertex=0, notifiers=None):
        super().__init__(notifiers=notifiers)
        self.ifs = ifs
        self.vertex = ifs.check_vertex(vertex)
        self.family = None
        self.cssc = None
        self.dimension = None
        self.conditions = None
        self.independence = None
        self.structure = None
        self.verdict = Verdict.INCONCLUSIVE
        self.criterion = None
        self.reason = ''
        self.add_progress_total_units(4)

    def __str__(self):
        return f'{self.name} of vertex {self.vertex} in {self.ifs}'

    def act(self):
        with self.stage_context(ClassificationStage.STRUCTURE):
            with self.step_context('vertices') as data:
                data.update(vertex_count=self.ifs.vertex_count)
            if self.ifs.is_one_vertex:
                self._conclude(Verdict.NOT_APPLICABLE, 'the system already has one vertex')
                return
            with self.step_context('cssc') as data:
                self.cssc = check_cssc(self.ifs)
                data.update(self.cssc.as_document())
            self.family = self._unit_family()

        if self.family is not None:
            self._classify_family()
        else:
            self._classify_graph()

    def _unit_family(self):
        try:
            family = TwoVertexFamily.from_ifs(self.ifs)
        except NotCanonicalFamily as e:
            logger.debug('%s: %s', self, e)
            return None
        if not family.is_unit_interval:
            return None
        return family.swapped() if self.vertex == 1 else family

    def _classify_family(self):
        family = self.family
        with self.stage_context(ClassificationStage.MEASURE):
            with self.step_context('conditions') as data:
                self.dimension = solve_dimension(family.to_ifs())
                self.conditions = check_conditions(family, self.dimension.s, self.dimension.h)
                data.update(s=self.dimension.s, **self.conditions.as_document())
            if not self.conditions.all_hold:
                self.record(Severity.WARNING, message='measure conditions not satisfied')

        with self.stage_context(ClassificationStage.INDEPENDENCE):
            with self.step_context('parameters') as data:
                names = ('a', 'b', 'c', 'g_u', 'g_v') if family.equal_bd \
                    else ('a', 'b', 'c', 'd', 'g_u', 'g_v')
                self.independence = is_multiplicatively_independent(
                    (getattr(family, name) for name in names), labels=names
                )
                data.update(self.independence.as_document())

        independent = self.independence.independent
        if self.conditions.all_hold and independent:
            criterion = Criterion.UNCONDITIONAL_EQUAL_RATIOS if family.equal_bd \
                else Criterion.UNCONDITIONAL
            self._conclude(Verdict.NOT_ONE_VERTEX_ATTRACTOR, 'all hypotheses hold', criterion)
        elif independent and self.cssc:
            criterion = Criterion.CSSC_RELATIVE_EQUAL_RATIOS if family.equal_bd \
                else Criterion.CSSC_RELATIVE
            self._conclude(
                Verdict.NOT_ONE_VERTEX_ATTRACTOR_UNDER_CSSC,
                'measure conditions fail; gap cosets still separate the attractor',
                criterion,
            )
        elif not independent:
            self._conclude(
                Verdict.INCONCLUSIVE,
                f'parameters are multiplicatively dependent, witness {self.independence.witness}',
            )
        else:
            self._conclude(Verdict.INCONCLUSIVE, 'separation condition fails')

    def _classify_graph(self):
        if not self.cssc:
            self._conclude(Verdict.INCONCLUSIVE, 'separation condition fails')
            return
        with self.stage_context(ClassificationStage.STRUCTURE):
            with self.step_context('chains') as data:
                self.structure = check_chain_structure(self.ifs, self.vertex)
                data.update(self.structure.as_document())

        with self.stage_context(ClassificationStage.INDEPENDENCE):
            with self.step_context('gaps_and_ratios') as data:
                labels, values = zip(*independence_set(self.ifs, self.vertex))
                self.independence = is_multiplicatively_independent(values, labels=labels)
                data.update(self.independence.as_document())

        if self.structure and self.independence:
            self._conclude(
                Verdict.NOT_ONE_VERTEX_ATTRACTOR_UNDER_CSSC,
                'cycle structure found and gaps and ratios are independent',
                Criterion.CSSC_RELATIVE_CHAIN,
            )
        elif not self.structure:
            self._conclude(Verdict.INCONCLUSIVE, 'no suitable cycle and chain structure')
        else:
            self._conclude(
                Verdict.INCONCLUSIVE,
                f'gaps and ratios are dependent, witness {self.independence.witness}',
            )

    def _conclude(self, verdict, reason, criterion=None):
        self.verdict, self.reason, self.criterion = verdict, reason, criterion
        severity = Severity.INFO if verdict is not Verdict.INCONCLUSIVE else Severity.WARNING
        self.record(severity, message=reason, verdict=verdict.value)

    def certificate(self):
        return Certificate(
            vertex=self.vertex,
            verdict=self.verdict,
            criterion=self.criterion,
            reason=self.reason,
            dimension=self.dimension,
            conditions=self.conditions,
            independence=self.independence,
            structure=self.structure,
            cssc=self.cssc,
            diagnostics=tuple(self.diagnostics),
        )


def classify_attractor(ifs, vertex=0):
    pipeline = ClassificationPipeline(ifs, vertex).run()
    if pipeline.exception is not None:
        raise pipeline.exception
    certificate = pipeline.certificate()
    logger.info('%s: %s', pipeline, certificate.verdict.value)
    return certificate
