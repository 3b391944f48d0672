import os
import shutil
import tempfile

import yaml
from click.testing import CliRunner
from django.conf import settings
from django.test import SimpleTestCase

from graphifs.cli import EXIT_INVALID_INPUT, EXIT_NOT_ACHIEVED, cli


class TestCli(SimpleTestCase):

    def setUp(self):
        self.runner = CliRunner(mix_stderr=False)
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def document(self, name):
        return os.path.join(settings.DOCUMENTS_DIR, name)

    def write(self, name, text):
        path = os.path.join(self.directory, name)
        with open(path, 'w', encoding='utf-8') as stream:
            stream.write(text)
        return path

    def invoke(self, *args):
        return self.runner.invoke(cli, list(args))

    def test_validate(self):
        result = self.invoke('validate', self.document('example_c.ifs'))
        self.assertEqual(result.exit_code, 0, result.stderr)
        self.assertIn('hull 0: [0, 1]', result.output)
        self.assertIn('CSSC: holds', result.output)

    def test_validate_reports_intersections(self):
        result = self.invoke('validate', self.document('overlapping.ifs'))
        self.assertEqual(result.exit_code, 0)
        self.assertIn('CSSC: fails at vertex 0, edges s1 and s2', result.output)

    def test_dimension(self):
        result = self.invoke('dimension', self.document('cantor.ifs'))
        self.assertEqual(result.exit_code, 0, result.stderr)
        self.assertIn('s = 0.6309297536', result.output)

    def test_dimension_machine_format(self):
        result = self.invoke('--format', 'machine', 'dimension', self.document('example_c.ifs'))
        data = yaml.safe_load(result.output)
        self.assertAlmostEqual(data['s'], 0.5147069928, delta=1e-9)
        self.assertEqual(len(data['h']), 2)

    def test_measure_certified(self):
        result = self.invoke('measure', self.document('example_c.ifs'))
        self.assertEqual(result.exit_code, 0, result.stderr)
        self.assertIn('status: certified', result.output)

    def test_measure_not_certified(self):
        result = self.invoke('measure', self.document('example_b.ifs'))
        self.assertEqual(result.exit_code, EXIT_NOT_ACHIEVED)
        self.assertIn('status: failed_condition', result.output)

    def test_gaps(self):
        result = self.invoke('gaps', self.document('example_c.ifs'), '--depth', '2')
        self.assertEqual(result.exit_code, 0, result.stderr)
        lines = result.output.splitlines()
        self.assertEqual(lines[:3], ['5/12', '11/63', '5/48'])
        self.assertIn('cross-check above 11/63: equal', result.output)

    def test_gaps_default_depth_from_config(self):
        config = self.write('graphifs.toml', 'gap_depth = 2\n')
        result = self.invoke(
            '--config', config, '--format', 'machine', 'gaps', self.document('example_c.ifs')
        )
        self.assertEqual(result.exit_code, 0, result.stderr)
        data = yaml.safe_load(result.output)
        self.assertEqual(data['depth'], 2)
        self.assertEqual(data['gaps'], {'5/12': 1, '11/63': 1, '5/48': 1})
        self.assertTrue(data['cross_check']['equal'])
        self.assertEqual(settings.GAP_DEPTH, 6)

    def test_config_from_environment(self):
        config = self.write('graphifs.toml', 'gap_depth = 3\n')
        result = self.runner.invoke(
            cli, ['--format', 'machine', 'gaps', self.document('cantor.ifs')],
            env={'GRAPHIFS_CONFIG': config},
        )
        self.assertEqual(result.exit_code, 0, result.stderr)
        self.assertEqual(yaml.safe_load(result.output)['depth'], 3)

    def test_unknown_setting(self):
        config = self.write('graphifs.toml', 'no_such_setting = 1\n')
        result = self.invoke('--config', config, 'validate', self.document('cantor.ifs'))
        self.assertEqual(result.exit_code, EXIT_INVALID_INPUT)

    def test_density(self):
        result = self.invoke(
            '--format', 'machine', 'density', self.document('example_c.ifs'),
            '--interval', '0', '1/4', '--depth', '6',
        )
        self.assertEqual(result.exit_code, 0, result.stderr)
        data = yaml.safe_load(result.output)
        self.assertAlmostEqual(data['density'][0], 1.0, delta=1e-9)
        self.assertAlmostEqual(data['density'][1], 1.0, delta=1e-9)

    def test_density_outside_hull(self):
        result = self.invoke(
            'density', self.document('example_c.ifs'), '--interval', '0', '2'
        )
        self.assertEqual(result.exit_code, EXIT_INVALID_INPUT)
        self.assertIn('IntervalOutsideHull', result.stderr)

    def test_classify(self):
        result = self.invoke('classify', self.document('example_c.ifs'))
        self.assertEqual(result.exit_code, 0, result.stderr)
        self.assertIn('verdict: not_one_vertex_attractor', result.output)
        self.assertIn('citation: Theorem 2GthmV', result.output)

    def test_classify_ring(self):
        result = self.invoke('--format', 'machine', 'classify', self.document('ring.ifs'))
        self.assertEqual(result.exit_code, 0, result.stderr)
        data = yaml.safe_load(result.output)
        self.assertEqual(data['verdict'], 'not_one_vertex_attractor_under_cssc')
        self.assertEqual(data['citation'], 'Theorem thmA')
        self.assertEqual(data['structure']['cycles'], ['l0', 's0s1s2', 'l1'])

    def test_classify_inconclusive(self):
        result = self.invoke('classify', self.document('example_b.ifs'))
        self.assertEqual(result.exit_code, EXIT_NOT_ACHIEVED)
        result = self.invoke('classify', self.document('cantor.ifs'))
        self.assertEqual(result.exit_code, EXIT_NOT_ACHIEVED)
        self.assertIn('verdict: not_applicable', result.output)

    def test_invalid_document(self):
        path = self.write('bad.ifs', 'family: {a: 1/4, g_u: 1/4, b: 1/4, c: 1/7, g_v: 11/21, d: 1/3}')
        result = self.invoke('dimension', path)
        self.assertEqual(result.exit_code, EXIT_INVALID_INPUT)
        self.assertIn('SumNotOne', result.stderr)

    def test_render(self):
        out = os.path.join(self.directory, 'c.svg')
        result = self.invoke('render', self.document('example_c.ifs'), '--levels', '3', '--out', out)
        self.assertEqual(result.exit_code, 0, result.stderr)
        with open(out, encoding='utf-8') as stream:
            self.assertTrue(stream.read().startswith('<?xml'))

    def test_render_too_deep(self):
        result = self.invoke('render', self.document('example_c.ifs'), '--levels', '13')
        self.assertEqual(result.exit_code, EXIT_INVALID_INPUT)

    def test_export(self):
        result = self.invoke('export', self.document('example_c.ifs'))
        self.assertEqual(result.exit_code, 0, result.stderr)
        data = yaml.safe_load(result.output)
        self.assertEqual(data['vertices'], 2)
        self.assertEqual([edge['id'] for edge in data['edges']], ['e1', 'e2', 'e3', 'e4'])
