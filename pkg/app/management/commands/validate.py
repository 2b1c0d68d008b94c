import json
import os

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from app.exceptions import SimulationError
from app.management.commands._common import EXIT_FAILURE, fail
from app.models import RunManifest
from app.validation.suites import SUITES, run_suites
from core import __version__


class Command(BaseCommand):
    help = f'Run validation suites ({", ".join(SUITES)}) and print a pass/fail table.'

    def add_arguments(self, parser):
        parser.add_argument('--suite', default='all', help='Suite name, comma separated names or "all".')
        parser.add_argument('--quick', action='store_true', help='Use reduced sample sizes.')
        parser.add_argument('--seed', type=int, default=0)
        parser.add_argument('--out', help='Directory receiving validation.json.')

    def handle(self, *args, **options):
        try:
            results = run_suites(options['suite'], quick=options['quick'], seed=options['seed'])
        except SimulationError as err:
            fail(err)
        except ValueError as err:
            raise CommandError(str(err), returncode=EXIT_FAILURE) from err

        for result in results:
            self.stdout.write(f'{result.name:<16} {"PASS" if result.passed else "FAIL"}')

        table = [result.to_dict() for result in results]
        self.stdout.write(json.dumps(table, indent=2, default=float))

        directory = options['out'] or settings.SIMULATION['OUTPUT_DIR']
        os.makedirs(directory, exist_ok=True)
        with open(os.path.join(directory, 'validation.json'), 'w') as handle:
            json.dump(table, handle, indent=2, default=float)

        passed = all(result.passed for result in results)
        RunManifest.objects.create(
            command=RunManifest.COMMAND_VALIDATE,
            model_name=options['suite'],
            config={'quick': options['quick'], 'suites': [result.name for result in results]},
            seed=options['seed'],
            version=__version__,
            output_dir=directory,
            is_success=passed,
        )

        if not passed:
            raise CommandError('Some validation suites failed.', returncode=EXIT_FAILURE)
