import json

from django.core.management.base import BaseCommand

from app.exceptions import SimulationError
from app.io.writers import REFERENCE_CSV, REFERENCE_PATH_CSV, write_states, write_trajectory
from app.management.commands._common import add_spec_arguments, fail, resolve_options, save_manifest, timed
from app.models import RunManifest
from app.parareal.engine import CARRY_EXACT, CARRY_FILTERED, PararealEngine


class Command(BaseCommand):
    help = 'Compute the serial fine reference solution and write its trajectory.'

    def add_arguments(self, parser):
        add_spec_arguments(parser)
        parser.add_argument(
            '--carry', choices=(CARRY_FILTERED, CARRY_EXACT), default=CARRY_FILTERED,
            help='In homogenized mode, report the filtered chain or the filtered values along the serial path.',
        )

    def handle(self, *args, **options):
        spec = resolve_options(options)

        if options['dry_run']:
            self.stdout.write(json.dumps({**spec.echo(), 'carry': options['carry']}, indent=2))
            return

        net, config = spec.network, spec.config
        timings = {}

        try:
            with timed(timings, 'reference'):
                reference = PararealEngine(net, config).reference(
                    spec.initial_state, carry=options['carry'], record=True,
                )
        except (SimulationError, ValueError) as err:
            fail(err)

        directory = spec.output_dir
        with timed(timings, 'output'):
            outputs = [
                write_states(directory, REFERENCE_CSV, config.times(), reference.states, net.species_names),
                write_trajectory(directory, REFERENCE_PATH_CSV, reference.trajectories, net.species_names),
            ]

        save_manifest(
            RunManifest.COMMAND_REFERENCE, spec, timings, outputs,
            extra={'carry': options['carry'], 'events': sum(reference.event_counts)},
        )

        self.stdout.write(f'Reference with {sum(reference.event_counts)} events written to {directory}.')
