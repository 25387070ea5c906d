"""
This module contains what the hsp management commands share: common
arguments, exit-code handling, seeding and output.
"""

import concurrent.futures
import logging
import os

import numpy as np
from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from hsp import constants, exceptions, gf, solver

logger = logging.getLogger(__name__)


def positive_int(value):
    number = int(value)
    if number < 1:
        raise ValueError(value)
    return number


class HspCommand(BaseCommand):
    """
    Base command. Usage errors exit with 1 instead of argparse's 2, which is
    reserved for failed invariants and solves.
    """

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super(HspCommand, self).create_parser(prog_name, subcommand,
                                                       **kwargs)
        exit_parser = parser.exit

        def exit(status=0, message=None):
            if status == 2:
                status = constants.EXIT_USAGE
            exit_parser(status, message)

        parser.exit = exit
        return parser

    def add_field_arguments(self, parser):
        parser.add_argument('--p', type=int, default=3,
                            help='Characteristic of the field.')
        parser.add_argument('--r', type=positive_int, default=1,
                            help='Degree of the field over F_p.')
        parser.add_argument('--n', type=positive_int, default=2,
                            help='Matrix dimension.')
        parser.add_argument('--seed', type=int,
                            default=settings.HSP_DEFAULT_SEED,
                            help='Master seed for all randomness.')

    def add_output_arguments(self, parser, default_format):
        parser.add_argument('--out', default=None,
                            help='File to write; stdout when omitted.')
        parser.add_argument('--format', default=default_format,
                            choices=constants.FORMATS)

    def add_solver_arguments(self, parser):
        parser.add_argument('--trials', type=positive_int, default=1)
        parser.add_argument('--max-rounds', type=positive_int, default=None,
                            help='Round budget per recursion level.')
        parser.add_argument('--backend', default=constants.BACKEND_EXACT,
                            choices=constants.BACKENDS)
        parser.add_argument('--workers', type=positive_int,
                            default=settings.HSP_WORKERS,
                            help='Threads running independent instances.')
        parser.add_argument('--timing', action='store_true',
                            help='Include wall times in reports.')

    def get_field(self, p, r):
        try:
            return gf.get_field(p, r)
        except exceptions.HspError as exc:
            raise CommandError(exc.detail, returncode=constants.EXIT_USAGE)

    def instance_seeds(self, seed, trials):
        """
        Per-instance seeds drawn from the master seed.
        """
        if seed < 0:
            raise CommandError('The seed must be non-negative.',
                               returncode=constants.EXIT_USAGE)
        states = np.random.SeedSequence(seed).generate_state(trials, np.uint64)
        return [int(s) for s in states]

    def run_instances(self, field, n, mode, seeds, config, workers):
        """
        Solves one instance per seed; reports come back in seed order.
        """
        def run(seed):
            return solver.run_instance(field, n, mode, seed, config)

        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run, seeds))

    def write_output(self, content, out=None):
        """
        Writes to stdout, or to `out`. Bare file names go to HSP_OUTPUT_DIR.
        """
        if isinstance(content, bytes):
            content = content.decode('utf-8')
        if out is None:
            self.stdout.write(content, ending='')
            return
        if not os.path.dirname(out):
            os.makedirs(settings.HSP_OUTPUT_DIR, exist_ok=True)
            out = os.path.join(settings.HSP_OUTPUT_DIR, out)
        with open(out, 'w', newline='') as stream:
            stream.write(content)
        logger.info('Wrote %s', out)
