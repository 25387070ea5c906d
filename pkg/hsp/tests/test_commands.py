import csv
import io
import json
import os
import tempfile
from fractions import Fraction

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings

from hsp import constants
from hsp.management.commands import solve


def run(name, *args):
    out = io.StringIO()
    call_command(name, *args, stdout=out, stderr=io.StringIO())
    return out.getvalue()


class SolveCommandTests(SimpleTestCase):

    def test_json_report(self):
        data = json.loads(run('solve', '--n', '2', '--p', '3',
                              '--trials', '3'))
        self.assertEqual(data['summary']['trials'], 3)
        self.assertEqual(data['summary']['success_rate'], 1.0)
        self.assertAlmostEqual(data['summary']['predicted_rounds'],
                               27 * 27 / (16 * 14))
        self.assertEqual(len(data['reports']), 3)
        for report in data['reports']:
            self.assertTrue(report['success'])
            self.assertNotIn('wall_time', report)
            self.assertEqual(len(report['flag']['members']), 1)

    def test_timing(self):
        data = json.loads(run('solve', '--n', '2', '--timing'))
        self.assertIn('wall_time', data['reports'][0])

    def test_same_seed_same_output(self):
        args = ('--n', '3', '--p', '2', '--trials', '4', '--seed', '5')
        self.assertEqual(run('solve', *args), run('solve', *args))
        self.assertEqual(run('solve', *args),
                         run('solve', *args, '--workers', '3'))

    def test_csv(self):
        content = run('solve', '--n', '2', '--p', '2', '--r', '2',
                      '--trials', '2', '--format', 'csv')
        rows = list(csv.DictReader(io.StringIO(content)))
        self.assertEqual(tuple(rows[0]), constants.SOLVE_CSV_COLUMNS)
        self.assertEqual(len(rows), 2)
        self.assertEqual({row['success'] for row in rows}, {'1'})
        self.assertEqual({row['r'] for row in rows}, {'2'})

    def test_degree_one(self):
        data = json.loads(run('solve', '--n', '1'))
        report = data['reports'][0]
        self.assertEqual(report['rounds_total'], 0)
        self.assertEqual(report['flag']['members'], [])
        self.assertEqual(data['summary']['predicted_rounds'], 0.0)

    def test_special_linear(self):
        data = json.loads(run('solve', '--n', '2', '--p', '5',
                              '--mode', 'sl', '--trials', '2'))
        self.assertEqual(data['summary']['mode'], constants.MODE_SL)
        self.assertEqual(data['summary']['success_rate'], 1.0)

    def test_budget_failure(self):
        with self.assertRaises(CommandError) as context:
            run('solve', '--n', '3', '--p', '2', '--trials', '10',
                '--max-rounds', '1')
        self.assertEqual(context.exception.returncode,
                         constants.EXIT_FAILURE)

    def test_bad_field(self):
        for args in (('--p', '4'), ('--p', '3', '--seed', '-1')):
            with self.assertRaises(CommandError) as context:
                run('solve', *args)
            self.assertEqual(context.exception.returncode,
                             constants.EXIT_USAGE)

    def test_bare_out_name_goes_to_output_dir(self):
        with tempfile.TemporaryDirectory() as directory:
            with override_settings(HSP_OUTPUT_DIR=directory):
                self.assertEqual(run('solve', '--out', 'a.json'), '')
                run('solve', '--out', 'b.json')
            with open(os.path.join(directory, 'a.json')) as a, \
                    open(os.path.join(directory, 'b.json')) as b:
                content = a.read()
                self.assertEqual(content, b.read())
            self.assertEqual(json.loads(content)['summary']['trials'], 1)

    def test_usage_errors_exit_with_one(self):
        command = solve.Command()
        command._called_from_command_line = True
        parser = command.create_parser('manage.py', 'solve')
        with self.assertRaises(SystemExit) as context:
            parser.parse_args(['--trials', '0'])
        self.assertEqual(context.exception.code, constants.EXIT_USAGE)


class ExactDistCommandTests(SimpleTestCase):

    def rows(self, *args):
        return list(csv.DictReader(io.StringIO(run('exact_dist', *args))))

    def test_degree_one(self):
        rows = self.rows('--n', '1', '--p', '2')
        body = [row for row in rows if row['Y'] in ('0', '1')]
        self.assertEqual(len(body), 2)
        for row in body:
            self.assertEqual(Fraction(int(row['prob_num']),
                                      int(row['prob_den'])), Fraction(1, 2))

    def test_masses(self):
        rows = self.rows('--n', '2', '--p', '3')
        footer = {row['Y']: Fraction(int(row['prob_num']),
                                     int(row['prob_den']))
                  for row in rows[-3:]}
        self.assertEqual(footer, {'perp': Fraction(4, 9),
                                  'perp_rank': Fraction(8, 27),
                                  'kernel': Fraction(14, 27)})
        body = rows[:-3]
        self.assertEqual(len(body), 81)
        self.assertEqual(sum(Fraction(int(row['prob_num']),
                                      int(row['prob_den']))
                             for row in body), 1)
        self.assertEqual(len(body[0]['Y'].split()), 4)

    def test_cap(self):
        with self.assertRaises(CommandError) as context:
            run('exact_dist', '--n', '4', '--p', '5')
        self.assertEqual(context.exception.returncode, constants.EXIT_USAGE)


class SweepCommandTests(SimpleTestCase):

    def test_csv(self):
        content = run('sweep', '--n', '2', '--q', '2', '3', '--trials', '20')
        rows = list(csv.DictReader(io.StringIO(content)))
        self.assertEqual(tuple(rows[0]), constants.SWEEP_CSV_COLUMNS)
        self.assertEqual([row['q'] for row in rows], ['2', '3'])
        for row in rows:
            self.assertEqual(float(row['success_rate']), 1.0)
            self.assertGreater(float(row['ratio']), 0)

    def test_ratio_near_one(self):
        content = run('sweep', '--n', '2', '3', '--q', '2', '3', '4', '5',
                      '--trials', '200')
        rows = list(csv.DictReader(io.StringIO(content)))
        self.assertEqual(len(rows), 8)
        for row in rows:
            self.assertEqual(float(row['success_rate']), 1.0)
            self.assertGreaterEqual(float(row['ratio']), 0.8, row)
            self.assertLessEqual(float(row['ratio']), 1.25, row)

    def test_json_modes(self):
        data = json.loads(run('sweep', '--n', '2', '--q', '5',
                              '--mode', 'gl', 'sl', '--trials', '10',
                              '--format', 'json'))
        self.assertEqual([row['mode'] for row in data], ['gl', 'sl'])
        self.assertGreater(data[1]['predicted_rounds'],
                           data[0]['predicted_rounds'])

    def test_bad_order(self):
        with self.assertRaises(CommandError) as context:
            run('sweep', '--q', '6', '--trials', '1')
        self.assertEqual(context.exception.returncode, constants.EXIT_USAGE)


class SelftestCommandTests(SimpleTestCase):

    def test_subset(self):
        content = run('selftest', '--check', 'field_axioms',
                      'success_masses', 'kernel_theorem')
        lines = content.strip().splitlines()
        self.assertEqual(len(lines), 3)
        for line in lines:
            self.assertIn('pass', line)
