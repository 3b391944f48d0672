import collections
import functools
import itertools
import operator
from fractions import Fraction

import factory.random
from django.test import SimpleTestCase

from graphifs.fractal import exceptions
from graphifs.fractal.gaps import (
    Coset,
    CosetUnion,
    IndependenceResult,
    compare_gap_sets,
    enumerate_coset_union,
    factor_rational,
    is_multiplicatively_independent,
    one_vertex_gap_expression,
    two_vertex_gap_expression,
)
from graphifs.fractal.intervals import default_gap_cutoff, gap_lengths
from graphifs.fractal.tests import factories


F = Fraction


class TestFactorRational(SimpleTestCase):

    def test_exponents(self):
        vector = factor_rational('12/35')
        self.assertEqual(vector.as_dict(), {2: 2, 3: 1, 5: -1, 7: -1})
        self.assertEqual(vector[11], 0)
        self.assertEqual(len(factor_rational(1)), 0)

    def test_value_is_recovered(self):
        factories.reseed()
        rng = factory.random.randgen
        for _ in range(1000):
            q = F(rng.randint(1, 10 ** 6), rng.randint(1, 10 ** 6))
            self.assertEqual(factor_rational(q).value(), q)

    def test_non_positive(self):
        for value in (0, '-1/2'):
            with self.assertRaises(exceptions.NonPositive):
                factor_rational(value)

    def test_prime_factor_too_large(self):
        with self.assertRaises(exceptions.PrimeFactorTooLarge):
            factor_rational(F(1, 1000003))


class TestIndependence(SimpleTestCase):

    def test_distinct_primes(self):
        self.assertTrue(is_multiplicatively_independent([2, 3, F(5, 7)]))

    def test_independent_result_has_no_witness(self):
        result = is_multiplicatively_independent(['5/12', '11/21', '1/4', '1/3', '1/7'])
        self.assertTrue(result)
        self.assertIsNone(result.witness)
        self.assertIsNone(IndependenceResult(('x', 'y'), (F(2), F(3)), True).witness)

    def test_witness_must_reconstruct_one(self):
        with self.assertRaises(ValueError):
            IndependenceResult(('x', 'y'), (F(2), F(3)), False, (1, 1))

    def test_powers_are_dependent(self):
        result = is_multiplicatively_independent([2, 4])
        self.assertFalse(result)
        self.assertEqual(result.witness, (2, -1))

    def test_repeated_value(self):
        result = is_multiplicatively_independent(['1/4', '5/12', '1/4'])
        self.assertEqual(result.witness, (1, 0, -1))

    def test_contains_one(self):
        with self.assertRaises(exceptions.ContainsOne):
            is_multiplicatively_independent([F(1, 2), 1])

    def test_witness_reconstructs_one(self):
        values = [F(7, 23), F(23, 73), F(7, 73), F(11, 23)]
        result = is_multiplicatively_independent(values)
        self.assertFalse(result)
        product = functools.reduce(
            operator.mul, (v ** m for v, m in zip(values, result.witness)), F(1)
        )
        self.assertEqual(product, 1)
        self.assertEqual(result.witness[3], 0)

    def test_order_does_not_matter(self):
        values = [F(1, 4), F(1, 3), F(1, 7), F(5, 12), F(11, 21), F(2, 9)]
        expected = is_multiplicatively_independent(values).independent
        for permutation in itertools.islice(itertools.permutations(values), 50):
            self.assertEqual(is_multiplicatively_independent(permutation).independent, expected)

    def test_subsets_of_independent_sets(self):
        values = [F(1, 4), F(1, 3), F(1, 7), F(5, 12), F(11, 21)]
        self.assertTrue(is_multiplicatively_independent(values))
        for size in range(1, len(values)):
            for subset in itertools.combinations(values, size):
                self.assertTrue(is_multiplicatively_independent(subset))

    def test_labels(self):
        result = is_multiplicatively_independent([2, 4], labels=('x', 'y'))
        self.assertEqual(result.as_document()['witness'], {'x': 2, 'y': -1})


class TestGapExpressions(SimpleTestCase):

    def test_equal_crossing_expression(self):
        expression = two_vertex_gap_expression(factories.example_c(), equal_bd=True)
        self.assertEqual(
            str(expression),
            '5/12<1, 1/4> U 5/108<1, 1/9, 1/7, 1/4> U 11/63<1, 1/9, 1/7, 1/4>',
        )

    def test_general_expression(self):
        expression = two_vertex_gap_expression(factories.example_a())
        cross = expression.cosets[1]
        self.assertIn(F(49, 1679), cross.generators)
        self.assertEqual(cross.scale, F(5, 23) * F(49, 1679))

    def test_crossing_ratios_must_agree(self):
        with self.assertRaises(exceptions.BdMismatch):
            two_vertex_gap_expression(factories.example_a(), equal_bd=True)

    def test_one_vertex_expression(self):
        self.assertEqual(str(one_vertex_gap_expression(factories.cantor())), '1/3<1, 1/3>')
        three = factories.one_vertex(('1/5', 0), ('1/5', '2/5'), ('1/5', '4/5'))
        self.assertEqual(
            str(one_vertex_gap_expression(three)), '1/5<1, 1/5> U 1/5<1, 1/5>'
        )

    def test_one_vertex_expression_needs_one_vertex(self):
        with self.assertRaises(exceptions.NotOneVertex):
            one_vertex_gap_expression(factories.example_c().to_ifs())


class TestEnumeration(SimpleTestCase):

    def test_geometric_coset(self):
        counts = enumerate_coset_union(CosetUnion([Coset(F(1, 2), [F(1, 2)])]), F(1, 8))
        self.assertEqual(counts, collections.Counter({F(1, 2): 1, F(1, 4): 1, F(1, 8): 1}))

    def test_two_generators(self):
        counts = enumerate_coset_union(CosetUnion([Coset(1, [F(1, 2), F(1, 3)])]), F(1, 6))
        self.assertEqual(set(counts), {1, F(1, 2), F(1, 3), F(1, 4), F(1, 6)})
        self.assertTrue(all(count == 1 for count in counts.values()))

    def test_generator_not_contracting(self):
        with self.assertRaises(exceptions.GeneratorNotContracting):
            enumerate_coset_union(CosetUnion([Coset(F(1, 2), [2])]), F(1, 8))

    def test_cutoff_above_scale(self):
        union = CosetUnion([Coset(F(1, 2), [F(1, 2)])])
        self.assertEqual(enumerate_coset_union(union, F(3, 4)), collections.Counter())

    def test_compare(self):
        self.assertTrue(compare_gap_sets([F(1, 2), F(1, 3)], [F(1, 3), F(1, 2)]))
        comparison = compare_gap_sets([F(1, 2)], [F(1, 3)])
        self.assertFalse(comparison)
        self.assertEqual(comparison.witness, F(1, 3))
        self.assertTrue(compare_gap_sets([F(1, 2)] * 2, [F(1, 2)]))
        self.assertFalse(compare_gap_sets([F(1, 2)] * 2, [F(1, 2)], mode='multiset'))


class TestExpressionsMatchIntervals(SimpleTestCase):

    def assertMatches(self, expression, gaps, cutoff):
        comparison = compare_gap_sets(enumerate_coset_union(expression, cutoff), gaps.above(cutoff))
        self.assertTrue(comparison, f'gap sets differ at {comparison.witness}')

    def test_equal_crossing_family(self):
        family = factories.example_c()
        ifs = family.to_ifs()
        self.assertMatches(
            two_vertex_gap_expression(family, equal_bd=True), gap_lengths(ifs, 0, 8), F(1, 200)
        )
        self.assertMatches(
            two_vertex_gap_expression(family.swapped(), equal_bd=True),
            gap_lengths(ifs, 1, 8),
            F(1, 200),
        )

    def test_cantor(self):
        ifs = factories.cantor()
        self.assertMatches(
            one_vertex_gap_expression(ifs), gap_lengths(ifs, 0, 8), default_gap_cutoff(ifs, 8)
        )

    def test_random_families(self):
        factories.reseed()
        for family in factories.TwoVertexFamilyFactory.build_batch(100):
            ifs = family.to_ifs()
            self.assertMatches(
                two_vertex_gap_expression(family), gap_lengths(ifs, 0, 6), default_gap_cutoff(ifs, 6)
            )
