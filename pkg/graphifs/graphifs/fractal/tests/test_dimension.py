import math

import numpy as np
from django.test import SimpleTestCase

from graphifs.fractal import exceptions
from graphifs.fractal.dimension import (
    build_matrix,
    eigen_residual,
    perron_vector,
    solve_dimension,
    spectral_radius,
)
from graphifs.fractal.ifs_graph import TwoVertexFamily, enumerate_paths
from graphifs.fractal.tests import factories


class TestMatrix(SimpleTestCase):

    def test_entries_sum_edge_ratios(self):
        matrix = build_matrix(factories.example_c().to_ifs(), 1)
        np.testing.assert_allclose(matrix, [[1 / 4, 1 / 3], [1 / 3, 1 / 7]])

    def test_radius_at_zero_counts_edges(self):
        self.assertAlmostEqual(spectral_radius(build_matrix(factories.example_a().to_ifs(), 0)), 2)
        self.assertAlmostEqual(spectral_radius(build_matrix(factories.cantor(), 0)), 2)
        factories.reseed()
        for ifs in factories.RingIfsFactory.build_batch(20):
            self.assertGreaterEqual(spectral_radius(build_matrix(ifs, 0)), 2 - 1e-9)

    def test_closed_form_agrees_with_eigenvalues(self):
        factories.reseed()
        for family in factories.TwoVertexFamilyFactory.build_batch(50):
            matrix = build_matrix(family.to_ifs(), 0.6)
            expected = max(abs(np.linalg.eigvals(matrix)))
            self.assertAlmostEqual(spectral_radius(matrix), expected, delta=1e-12)

    def test_power_iteration_agrees_with_eigenvalues(self):
        matrix = build_matrix(factories.ring(), 0.7)
        expected = max(abs(np.linalg.eigvals(matrix)))
        self.assertAlmostEqual(spectral_radius(matrix), expected, delta=1e-10)

    def test_radius_decreases_strictly(self):
        factories.reseed()
        grid = np.linspace(0, 2, 50)
        for ifs in factories.RingIfsFactory.build_batch(100):
            radii = [spectral_radius(build_matrix(ifs, t)) for t in grid]
            for previous, current in zip(radii, radii[1:]):
                self.assertLess(current, previous)


class TestSolveDimension(SimpleTestCase):

    def test_cantor(self):
        result = solve_dimension(factories.cantor())
        self.assertAlmostEqual(result.s, math.log(2) / math.log(3), delta=1e-12)
        self.assertAlmostEqual(result.h[0], 1.0, delta=1e-12)
        self.assertLessEqual(result.rho_residual, 1e-12)

    def test_hull_length_scales_root_entry(self):
        result = solve_dimension(factories.one_vertex(('1/2', 0), ('1/2', 1)))
        self.assertAlmostEqual(result.s, 1.0, delta=1e-12)
        self.assertAlmostEqual(result.h[0], 2.0, delta=1e-9)

    def test_family_dimensions(self):
        expected = (
            (factories.example_a(), 0.4934118279),
            (factories.example_b(), 0.7990855723),
            (factories.example_c(), 0.5147069928),
        )
        for family, s in expected:
            with self.subTest(family=family):
                self.assertAlmostEqual(solve_dimension(family.to_ifs()).s, s, delta=1e-8)

    def test_measure_ratios(self):
        result = solve_dimension(factories.example_a().to_ifs())
        self.assertAlmostEqual(result.h_ratio(), 0.5486642748, delta=1e-8)
        result = solve_dimension(factories.example_b().to_ifs())
        self.assertAlmostEqual(result.h_ratio(), 1.152194154, delta=1e-8)
        result = solve_dimension(factories.example_c().to_ifs())
        self.assertAlmostEqual(result.h_ratio(), 0.8978943038, delta=1e-8)

    def test_symmetric_family_has_equal_entries(self):
        family = TwoVertexFamily.canonical('1/4', '5/12', '1/3', '1/4', '5/12', '1/3')
        result = solve_dimension(family.to_ifs())
        self.assertAlmostEqual(result.h[0], result.h[1], delta=1e-12)

    def test_eigenvector_is_consistent(self):
        factories.reseed()
        for family in factories.TwoVertexFamilyFactory.build_batch(100):
            result = solve_dimension(family.to_ifs())
            self.assertTrue(all(value > 0 for value in result.h))
            self.assertLessEqual(result.eigen_residual, 1e-9)
            s = result.s
            closed_form = (1 - float(family.a) ** s) / float(family.b) ** s
            self.assertAlmostEqual(result.h[1] / result.h[0], closed_form, delta=1e-9)

    def test_three_vertex_eigenvector(self):
        ifs = factories.ring()
        result = solve_dimension(ifs)
        self.assertTrue(0 < result.s < 1)
        self.assertAlmostEqual(result.h[0], 1.0, delta=1e-12)
        self.assertLessEqual(eigen_residual(ifs, result.s, result.h), 1e-9)

    def test_path_sums_reproduce_measures(self):
        for ifs in (factories.example_c().to_ifs(), factories.ring()):
            result = solve_dimension(ifs)
            for vertex in ifs.vertices:
                for k in range(1, 9):
                    total = sum(
                        float(path.ratio) ** result.s * result.h[path.terminal]
                        for path in enumerate_paths(ifs, vertex, k)
                    )
                    self.assertAlmostEqual(total / result.h[vertex], 1.0, delta=1e-8)

    def test_tolerance_too_small(self):
        with self.assertRaises(exceptions.InvalidTolerance):
            solve_dimension(factories.cantor(), tol=1e-15)

    def test_bracket_failure(self):
        ifs = factories.one_vertex(*(('99/100', '1/100') for _ in range(4)))
        with self.assertRaises(exceptions.BracketFailure):
            solve_dimension(ifs)

    def test_vector_away_from_dimension(self):
        with self.assertRaises(exceptions.NotAtEigenvalueOne):
            perron_vector(factories.example_c().to_ifs(), 0.1)
