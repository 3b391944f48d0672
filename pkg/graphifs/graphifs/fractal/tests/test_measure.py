import factory.random
import numpy as np
from django.conf import settings
from django.test import SimpleTestCase

from graphifs.fractal import exceptions
from graphifs.fractal.dimension import solve_dimension
from graphifs.fractal.ifs_graph import TwoVertexFamily
from graphifs.fractal.measure import (
    CertificationPipeline,
    CertificationStatus,
    ConditionStatus,
    certify,
    check_conditions,
    condition_three_value,
    density_function,
    exact_measures,
    y_max_ratio,
    y_max_ratio_from_quotient,
)
from graphifs.fractal.tests import factories
from graphifs.pipeline.models import PipelineStatus, Severity


def conditions_of(family):
    result = solve_dimension(family.to_ifs())
    return result, check_conditions(family, result.s, result.h)


class TestConditions(SimpleTestCase):

    def test_barely_certified_family(self):
        _, conditions = conditions_of(factories.example_a())
        self.assertTrue(conditions.cond1_holds)
        self.assertEqual(conditions.cond2_status, ConditionStatus.HOLDS)
        self.assertAlmostEqual(conditions.cond3_value, 1.003400992, delta=1e-8)
        self.assertTrue(conditions.all_hold)

    def test_measure_ratio_fails(self):
        _, conditions = conditions_of(factories.example_b())
        self.assertAlmostEqual(conditions.cond2_value, 1.152194154, delta=1e-8)
        self.assertEqual(conditions.cond2_status, ConditionStatus.FAILS)
        self.assertIn(2, conditions.failed_conditions)
        self.assertFalse(conditions.all_hold)

    def test_equal_crossing_family(self):
        result, conditions = conditions_of(factories.example_c())
        self.assertAlmostEqual(conditions.cond2_value, 0.8978943038, delta=1e-8)
        self.assertAlmostEqual(conditions.cond3_value, 2.082389923, delta=1e-8)
        self.assertAlmostEqual(
            condition_three_value(factories.example_c(), result.s), 2.082389923, delta=1e-8
        )
        self.assertTrue(conditions.all_hold)

    def test_symmetric_family_is_a_boundary_case(self):
        family = TwoVertexFamily.canonical('1/4', '5/12', '1/3', '1/4', '5/12', '1/3')
        _, conditions = conditions_of(family)
        self.assertEqual(conditions.cond2_status, ConditionStatus.BOUNDARY)
        self.assertIn(2, conditions.boundary_conditions)
        self.assertFalse(conditions.all_hold)


class TestExactMeasures(SimpleTestCase):

    def test_measures_of_certified_family(self):
        result = solve_dimension(factories.example_c().to_ifs())
        measure_u, measure_v = exact_measures(factories.example_c(), result.s)
        self.assertAlmostEqual(measure_u, 1.0, delta=1e-12)
        self.assertAlmostEqual(measure_v, 0.8978943038, delta=1e-8)

    def test_measures_match_eigenvector(self):
        for family in (factories.example_a(), factories.example_c()):
            result = solve_dimension(family.to_ifs())
            measures = exact_measures(family, result.s)
            np.testing.assert_allclose(measures, result.h, atol=1e-9)

    def test_not_certified(self):
        result = solve_dimension(factories.example_b().to_ifs())
        with self.assertRaises(exceptions.NotCertified):
            exact_measures(factories.example_b(), result.s)


class TestDensityFunction(SimpleTestCase):

    def test_corner_values_are_one(self):
        for family in (factories.example_a(), factories.example_c()):
            result = solve_dimension(family.to_ifs())
            s, h = result.s, result.h
            self.assertAlmostEqual(
                density_function(family, s, h, 0, family.a, family.b), 1.0, delta=1e-9
            )
            self.assertAlmostEqual(
                density_function(family, s, h, 1, family.c, family.d), 1.0, delta=1e-9
            )

    def test_below_one_away_from_corner(self):
        size = settings.DENSITY_GRID_SIZE
        for family in (factories.example_a(), factories.example_c()):
            result = solve_dimension(family.to_ifs())
            s, h = result.s, result.h
            boxes = ((0, family.a, family.b), (1, family.c, family.d))
            for vertex, width, height in boxes:
                xs = np.linspace(0, float(width), size)
                ys = np.linspace(0, float(height), size)
                for i, x in enumerate(xs):
                    for j, y in enumerate(ys):
                        if i == size - 1 and j == size - 1:
                            continue
                        self.assertLess(density_function(family, s, h, vertex, x, y), 1.0)

    def test_peak_position(self):
        family = factories.example_c()
        result = solve_dimension(family.to_ifs())
        self.assertAlmostEqual(y_max_ratio(family, result.s), 4.53, delta=0.01)

        b = float(family.b)
        ys = np.linspace(b / 100, 10 * b, 20000)
        values = [density_function(family, result.s, result.h, 0, family.a, y) for y in ys]
        peak = ys[int(np.argmax(values))] / b
        self.assertAlmostEqual(peak, y_max_ratio(family, result.s), delta=0.01)

    def test_unit_quotient_peaks_at_b(self):
        self.assertEqual(y_max_ratio_from_quotient(1.0, 0.6), 1.0)

    def test_dimension_at_one(self):
        with self.assertRaises(exceptions.DimensionAtOne):
            y_max_ratio_from_quotient(2.0, 1.0)

    def test_concave_increment_inequality(self):
        factories.reseed()
        rng = factory.random.randgen
        for _ in range(1000):
            p = rng.uniform(0.05, 0.95)
            x, y, z = (rng.uniform(0.01, 1) for _ in range(3))
            self.assertLess((x + y + z) ** p, (x + y) ** p + (y + z) ** p - y ** p)


class TestCertify(SimpleTestCase):

    def test_certified(self):
        report = certify(factories.example_c())
        self.assertEqual(report.status, CertificationStatus.CERTIFIED)
        self.assertTrue(report.certified)
        self.assertAlmostEqual(report.measures[0], 1.0, delta=1e-12)
        self.assertAlmostEqual(report.measures[1], 0.8978943038, delta=1e-8)
        self.assertIsNone(report.failed_condition)

    def test_failed_condition(self):
        report = certify(factories.example_b())
        self.assertEqual(report.status, CertificationStatus.FAILED_CONDITION)
        self.assertEqual(report.failed_condition, 2)
        self.assertIsNone(report.measures)
        warnings = [d for d in report.diagnostics if d.severity == Severity.WARNING]
        self.assertEqual([d.step for d in warnings], ['measure_ratio'])

    def test_graph_form_is_accepted(self):
        report = certify(factories.example_a().to_ifs())
        self.assertTrue(report.certified)

    def test_not_a_family(self):
        with self.assertRaises(exceptions.NotCanonicalFamily):
            certify(factories.cantor())

    def test_pipeline_steps_are_recorded(self):
        report = certify(factories.example_c())
        steps = {d.step for d in report.diagnostics if d.step}
        self.assertEqual(steps, {'solve', 'hull_lengths', 'measure_ratio', 'quotient', 'measures'})
        self.assertEqual(report.as_document()['status'], 'certified')

    def test_pipeline_status(self):
        pipeline = CertificationPipeline(factories.example_b()).run()
        self.assertEqual(pipeline.status, PipelineStatus.SUCCESS_WITH_WARNING)
        self.assertEqual(pipeline.percent_progress, 100)
