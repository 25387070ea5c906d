"""
Generates random hidden Borel subgroup instances and solves them.
"""

import csv
import io
import logging

from django.core.management.base import CommandError

from hsp import constants, exceptions, serializers, solver

from ._base import HspCommand

logger = logging.getLogger(__name__)


class Command(HspCommand):
    help = 'Solve random hidden Borel subgroup instances.'

    def add_arguments(self, parser):
        self.add_field_arguments(parser)
        parser.add_argument('--mode', default=constants.MODE_GL,
                            choices=constants.MODES)
        self.add_solver_arguments(parser)
        self.add_output_arguments(parser, constants.FORMAT_JSON)

    def handle(self, *args, **options):
        field = self.get_field(options['p'], options['r'])
        n, mode = options['n'], options['mode']
        logger.info('Solving %d instances (%s) of degree %d over F_%d',
                    options['trials'], constants.DISPLAY_NAME[mode], n, field.q)
        try:
            config = solver.SolverConfig(options['max_rounds'], None,
                                         options['backend'], mode)
        except exceptions.HspError as exc:
            raise CommandError(exc.detail, returncode=constants.EXIT_USAGE)
        seeds = self.instance_seeds(options['seed'], options['trials'])
        try:
            reports = self.run_instances(field, n, mode, seeds, config,
                                         options['workers'])
        except exceptions.CapExceeded as exc:
            raise CommandError(exc.detail, returncode=constants.EXIT_USAGE)

        determinant_group = (field.nth_powers(n)
                             if mode == constants.MODE_SL else None)
        summary = serializers.summarize(
            reports, field, n, mode,
            solver.predicted_rounds(field, n, determinant_group))
        if options['format'] == constants.FORMAT_CSV:
            content = self.render_csv(reports)
        else:
            content = serializers.render({
                'summary': serializers.SummarySerializer(summary).data,
                'reports': serializers.SolveReportSerializer(
                    reports, many=True,
                    context={'timing': options['timing']}).data,
            })
        self.write_output(content, options['out'])

        failures = [report for report in reports if not report.success]
        if failures:
            raise CommandError(
                '{} of {} instances failed: {}'.format(
                    len(failures), len(reports), failures[0].error),
                returncode=constants.EXIT_FAILURE)

    def render_csv(self, reports):
        stream = io.StringIO()
        writer = csv.DictWriter(stream, fieldnames=constants.SOLVE_CSV_COLUMNS,
                                lineterminator='\n')
        writer.writeheader()
        for report in reports:
            writer.writerow({
                'n': report.n,
                'p': report.p,
                'r': report.r,
                'mode': report.mode,
                'seed': report.seed,
                'rounds_total': report.rounds_total,
                'queries': report.queries,
                'prep_failures': report.prep_failures,
                'success': int(report.success),
            })
        return stream.getvalue()
