from fractions import Fraction

from django.test import SimpleTestCase

from graphifs.fractal import exceptions
from graphifs.fractal.classifier import (
    Certificate,
    ClassificationPipeline,
    Criterion,
    Verdict,
    chains_attached,
    check_chain_structure,
    classify_attractor,
    independence_set,
    simple_cycles,
    simple_paths,
)
from graphifs.fractal.tests import factories
from graphifs.pipeline.models import PipelineStatus


F = Fraction


def names(items):
    return [str(item) for item in items]


class TestCycles(SimpleTestCase):

    def test_two_vertex_family(self):
        cycles = simple_cycles(factories.example_c().to_ifs())
        self.assertEqual(names(cycles), ['e1', 'e3', 'e2e4'])
        self.assertEqual(cycles[2].vertices, frozenset({0, 1}))
        self.assertEqual(cycles[2].ratio, F(1, 9))

    def test_one_vertex(self):
        self.assertEqual(names(simple_cycles(factories.cantor())), ['s1', 's2'])

    def test_ring(self):
        self.assertEqual(names(simple_cycles(factories.ring())), ['l0', 'l1', 'l2', 's0s1s2'])

    def test_parallel_edges_give_separate_cycles(self):
        factories.reseed()
        for ifs in factories.RingIfsFactory.build_batch(10):
            expected = 2 if ifs.is_one_vertex else ifs.vertex_count + 1
            self.assertEqual(len(simple_cycles(ifs)), expected)


class TestSimplePaths(SimpleTestCase):

    def test_two_routes(self):
        self.assertEqual(names(simple_paths(factories.branching(), 0, 2)), ['b', 'ac'])

    def test_family(self):
        ifs = factories.example_c().to_ifs()
        self.assertEqual(names(simple_paths(ifs, 0, 1)), ['e2'])
        self.assertEqual(names(simple_paths(ifs, 1, 0)), ['e4'])

    def test_same_endpoints(self):
        with self.assertRaises(exceptions.SameEndpoints):
            simple_paths(factories.branching(), 1, 1)


class TestChains(SimpleTestCase):

    def setUp(self):
        self.ifs = factories.example_c().to_ifs()

    def test_single_cycle_chains(self):
        self.assertEqual(names(chains_attached(self.ifs, 0, 1)), ['(e1)', '(e2e4)'])

    def test_two_cycle_chains(self):
        chains = chains_attached(self.ifs, 0, 2)
        self.assertEqual(names(chains), ['(e1)', '(e2e4)', '(e2e4) (e3)'])

    def test_chain_shape(self):
        factories.reseed()
        for ifs in [factories.ring(), factories.branching()] + factories.RingIfsFactory.build_batch(10):
            for vertex in ifs.vertices:
                for chain in chains_attached(ifs, vertex, 4):
                    cycles = chain.cycles
                    self.assertIn(vertex, cycles[0].vertices)
                    self.assertEqual(len(set(cycles)), len(cycles))
                    for index, cycle in enumerate(cycles):
                        if index:
                            self.assertNotIn(vertex, cycle.vertices)
                            self.assertTrue(cycle.vertices & cycles[index - 1].vertices)
                        for other in cycles[:max(index - 1, 0)]:
                            self.assertFalse(cycle.vertices & other.vertices)

    def test_invalid_bound(self):
        with self.assertRaises(ValueError):
            chains_attached(self.ifs, 0, 0)


class TestStructure(SimpleTestCase):

    def test_family_at_u(self):
        report = check_chain_structure(factories.example_c().to_ifs(), 0)
        self.assertTrue(report)
        self.assertEqual(names(report.cycles), ['e1', 'e2e4', 'e3'])

    def test_family_at_v(self):
        report = check_chain_structure(factories.example_c().to_ifs(), 1)
        self.assertEqual(names(report.cycles), ['e3', 'e2e4', 'e1'])

    def test_ring(self):
        report = check_chain_structure(factories.ring(), 0)
        self.assertEqual(names(report.cycles), ['l0', 's0s1s2', 'l1'])

    def test_one_vertex_has_no_structure(self):
        self.assertFalse(check_chain_structure(factories.cantor(), 0))


class TestIndependenceSet(SimpleTestCase):

    def test_family(self):
        labelled = dict(independence_set(factories.example_c().to_ifs(), 0))
        self.assertEqual(labelled, {
            'g_0': F(5, 12),
            'g_1': F(11, 21),
            'r_e1': F(1, 4),
            'r_e3': F(1, 7),
            'r_e2e4': F(1, 9),
            'r_e2': F(1, 3),
        })

    def test_ring(self):
        labelled = dict(independence_set(factories.ring(), 0))
        self.assertEqual(labelled['g_0'], F(23, 35))
        self.assertEqual(labelled['r_s0s1s2'], F(1, 7 * 13 * 29))
        self.assertEqual(labelled['r_s0s1'], F(1, 91))


class TestClassify(SimpleTestCase):

    def test_equal_crossing_family(self):
        certificate = classify_attractor(factories.example_c().to_ifs())
        self.assertEqual(certificate.verdict, Verdict.NOT_ONE_VERTEX_ATTRACTOR)
        self.assertEqual(certificate.criterion, Criterion.UNCONDITIONAL_EQUAL_RATIOS)
        self.assertEqual(certificate.criterion.citation, 'Theorem 2GthmV')
        self.assertEqual(certificate.independence.labels, ('a', 'b', 'c', 'g_u', 'g_v'))
        self.assertTrue(certificate.excludes_one_vertex)

    def test_general_family(self):
        certificate = classify_attractor(factories.example_a().to_ifs())
        self.assertEqual(certificate.verdict, Verdict.NOT_ONE_VERTEX_ATTRACTOR)
        self.assertEqual(certificate.criterion, Criterion.UNCONDITIONAL)
        self.assertEqual(certificate.criterion.citation, 'Theorem 2GthmU')

    def test_dependent_family(self):
        certificate = classify_attractor(factories.example_b().to_ifs())
        self.assertEqual(certificate.verdict, Verdict.INCONCLUSIVE)
        self.assertEqual(certificate.independence.witness, (0, 1, 0, 1, 0, -1))
        self.assertFalse(certificate.excludes_one_vertex)

    def test_repeated_parameter(self):
        certificate = classify_attractor(factories.example_c_dependent().to_ifs())
        self.assertEqual(certificate.verdict, Verdict.INCONCLUSIVE)
        self.assertEqual(certificate.independence.witness, (1, 0, -1, 0, 0))
        # c = a forces g_v = g_u as well; the first repeated pair is a, c
        self.assertEqual(certificate.independence.labels, ('a', 'b', 'c', 'g_u', 'g_v'))

    def test_second_vertex_uses_swapped_family(self):
        certificate = classify_attractor(factories.example_c().to_ifs(), 1)
        self.assertEqual(certificate.verdict, Verdict.NOT_ONE_VERTEX_ATTRACTOR_UNDER_CSSC)
        self.assertEqual(certificate.criterion, Criterion.CSSC_RELATIVE_EQUAL_RATIOS)
        self.assertEqual(certificate.criterion.citation, 'Corollary corC')
        self.assertFalse(certificate.conditions.cond2_holds)

    def test_one_vertex_system(self):
        certificate = classify_attractor(factories.cantor())
        self.assertEqual(certificate.verdict, Verdict.NOT_APPLICABLE)
        self.assertFalse(certificate.excludes_one_vertex)

    def test_three_vertex_ring(self):
        certificate = classify_attractor(factories.ring())
        self.assertEqual(certificate.verdict, Verdict.NOT_ONE_VERTEX_ATTRACTOR_UNDER_CSSC)
        self.assertEqual(certificate.criterion, Criterion.CSSC_RELATIVE_CHAIN)
        self.assertEqual(certificate.criterion.citation, 'Theorem thmA')
        self.assertEqual(names(certificate.structure.cycles), ['l0', 's0s1s2', 'l1'])

    def test_document(self):
        document = classify_attractor(factories.example_c().to_ifs()).as_document()
        self.assertEqual(document['verdict'], 'not_one_vertex_attractor')
        self.assertEqual(document['citation'], 'Theorem 2GthmV')
        self.assertTrue(document['cssc']['holds'])
        self.assertIn('diagnostics', document)

    def test_unknown_vertex(self):
        with self.assertRaises(exceptions.UnknownVertex):
            classify_attractor(factories.cantor(), 3)

    def test_pipeline_status(self):
        pipeline = ClassificationPipeline(factories.example_b().to_ifs()).run()
        self.assertEqual(pipeline.status, PipelineStatus.SUCCESS_WITH_WARNING)
        pipeline = ClassificationPipeline(factories.example_c().to_ifs()).run()
        self.assertEqual(pipeline.status, PipelineStatus.SUCCESS)


class TestCertificate(SimpleTestCase):

    def test_unconditional_verdict_needs_hypotheses(self):
        with self.assertRaises(ValueError):
            Certificate(vertex=0, verdict=Verdict.NOT_ONE_VERTEX_ATTRACTOR)

    def test_relative_verdict_needs_hypotheses(self):
        with self.assertRaises(ValueError):
            Certificate(
                vertex=0,
                verdict=Verdict.NOT_ONE_VERTEX_ATTRACTOR_UNDER_CSSC,
                criterion=Criterion.CSSC_RELATIVE_CHAIN,
            )

    def test_inconclusive_needs_nothing(self):
        certificate = Certificate(vertex=0, verdict=Verdict.INCONCLUSIVE)
        self.assertFalse(certificate.excludes_one_vertex)

    def test_every_criterion_is_cited(self):
        self.assertEqual(
            sorted(criterion.citation for criterion in Criterion),
            ['Corollary corC', 'Corollary corCb', 'Theorem 2GthmU', 'Theorem 2GthmV', 'Theorem thmA'],
        )
