"""
Measures mean top-level guess rounds over a grid of degrees, field orders
and modes, next to the predicted value.
"""

import csv
import io
import logging

from django.conf import settings
from django.core.management.base import CommandError

from hsp import constants, exceptions, gf, serializers, solver

from ._base import HspCommand, positive_int

logger = logging.getLogger(__name__)


class Command(HspCommand):
    help = 'Sweep solve statistics over an (n, q, mode) grid.'

    def add_arguments(self, parser):
        parser.add_argument('--n', type=positive_int, nargs='+', default=[2, 3])
        parser.add_argument('--q', type=positive_int, nargs='+',
                            default=[2, 3, 4, 5])
        parser.add_argument('--mode', nargs='+', default=[constants.MODE_GL],
                            choices=constants.MODES)
        parser.add_argument('--seed', type=int,
                            default=settings.HSP_DEFAULT_SEED)
        self.add_solver_arguments(parser)
        self.add_output_arguments(parser, constants.FORMAT_CSV)
        parser.set_defaults(trials=200)

    def handle(self, *args, **options):
        fields = []
        for q in options['q']:
            try:
                fields.append(gf.field_from_order(q))
            except exceptions.HspError as exc:
                raise CommandError(exc.detail,
                                   returncode=constants.EXIT_USAGE)

        cells = [(n, field, mode) for n in options['n'] for field in fields
                 for mode in options['mode']]
        seeds = self.instance_seeds(options['seed'], len(cells))
        rows = []
        for (n, field, mode), cell_seed in zip(cells, seeds):
            logger.info('Sweeping %s, degree %d over F_%d',
                        constants.DISPLAY_NAME[mode], n, field.q)
            config = solver.SolverConfig(options['max_rounds'], None,
                                         options['backend'], mode)
            reports = self.run_instances(
                field, n, mode, self.instance_seeds(cell_seed,
                                                    options['trials']),
                config, options['workers'])
            rows.append(self.row(reports, field, n, mode))

        if options['format'] == constants.FORMAT_JSON:
            content = serializers.render(rows)
        else:
            stream = io.StringIO()
            writer = csv.DictWriter(stream,
                                    fieldnames=constants.SWEEP_CSV_COLUMNS,
                                    lineterminator='\n')
            writer.writeheader()
            writer.writerows(rows)
            content = stream.getvalue()
        self.write_output(content, options['out'])

        if any(row['success_rate'] < 1 for row in rows):
            raise CommandError('Some sweep instances failed.',
                               returncode=constants.EXIT_FAILURE)

    def row(self, reports, field, n, mode):
        determinant_group = (field.nth_powers(n)
                             if mode == constants.MODE_SL else None)
        predicted = solver.predicted_rounds(field, n, determinant_group)
        summary = serializers.summarize(reports, field, n, mode, predicted)
        measured = summary['mean_top_level_rounds']
        return {
            'n': n,
            'p': field.p,
            'r': field.r,
            'q': field.q,
            'mode': mode,
            'trials': summary['trials'],
            'mean_rounds': round(measured, 6),
            'predicted_rounds': round(predicted, 6),
            'ratio': round(measured / predicted, 6) if predicted else 1.0,
            'mean_queries': round(summary['mean_queries'], 6),
            'success_rate': summary['success_rate'],
        }
