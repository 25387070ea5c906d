"""
Runs the registry of invariant checks and prints a pass/fail table.
"""

import logging

from django.core.management.base import CommandError

from hsp import constants, selftest

from ._base import HspCommand

logger = logging.getLogger(__name__)


class Command(HspCommand):
    help = 'Run the invariant checks.'

    def add_arguments(self, parser):
        parser.add_argument('--check', nargs='*', default=None,
                            choices=list(selftest.CHECKS),
                            help='Run only these checks.')

    def handle(self, *args, **options):
        results = selftest.run_checks(options['check'])
        width = max(len(result.name) for result in results)
        for result in results:
            status = (self.style.SUCCESS('pass') if result.passed
                      else self.style.ERROR('FAIL'))
            line = '{}  {}'.format(result.name.ljust(width), status)
            if result.detail:
                line += '  ' + result.detail
            self.stdout.write(line)
        failed = [result.name for result in results if not result.passed]
        if failed:
            raise CommandError('Failed checks: ' + ', '.join(failed),
                               returncode=constants.EXIT_FAILURE)
        logger.info('All %d checks passed', len(results))
