"""
Dumps the exact outcome law of Fourier sampling one random Borel coset
state, with footer rows for the perp and success-event masses.
"""

import csv
import io
import logging
from fractions import Fraction

import numpy as np
from django.core.management.base import CommandError

from hsp import constants, exceptions, linalg, quantum

from ._base import HspCommand

logger = logging.getLogger(__name__)


class Command(HspCommand):
    help = 'Write the exact Fourier-sampling distribution as CSV.'

    def add_arguments(self, parser):
        self.add_field_arguments(parser)
        parser.add_argument('--out', default=None,
                            help='File to write; stdout when omitted.')

    def handle(self, *args, **options):
        field = self.get_field(options['p'], options['r'])
        n = options['n']
        rng = np.random.default_rng(self.instance_seeds(options['seed'], 1)[0])
        X = linalg.random_invertible(field, n, rng)
        B = linalg.random_invertible(field, n, rng)
        logger.info('Exact distribution of degree %d over F_%d', n, field.q)
        try:
            distribution = quantum.exact_distribution(field, X, B)
            outcomes = linalg.all_matrices(field, n)
        except exceptions.CapExceeded as exc:
            raise CommandError(exc.detail, returncode=constants.EXIT_USAGE)

        stream = io.StringIO()
        writer = csv.DictWriter(stream,
                                fieldnames=constants.EXACT_DIST_CSV_COLUMNS,
                                lineterminator='\n')
        writer.writeheader()
        total = Fraction(0)
        for Y in outcomes:
            numerator, denominator = distribution.exact_probability(Y)
            total += Fraction(numerator, denominator)
            writer.writerow({
                'Y': ' '.join(str(x) for x in linalg.encode(Y)),
                'prob_num': numerator,
                'prob_den': denominator,
            })
        if total != 1:
            raise CommandError('Outcome probabilities sum to {}.'.format(total),
                               returncode=constants.EXIT_FAILURE)
        footer = (('perp', distribution.perp_mass()),
                  ('perp_rank', distribution.perp_rank_mass()),
                  ('kernel', distribution.kernel_mass()))
        for name, mass in footer:
            writer.writerow({'Y': name, 'prob_num': mass.numerator,
                             'prob_den': mass.denominator})
        self.write_output(stream.getvalue(), options['out'])
