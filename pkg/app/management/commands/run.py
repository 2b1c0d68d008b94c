import json

from django.core.management.base import BaseCommand, CommandError

from app.exceptions import SimulationError
from app.io.writers import (
    REFERENCE_CSV, REFERENCE_PATH_CSV, iteration_csv, write_convergence, write_iterates, write_states,
    write_trajectory,
)
from app.management.commands._common import (
    EXIT_NOT_CONVERGED, add_spec_arguments, fail, resolve_options, save_manifest, timed,
)
from app.models import RunManifest
from app.parareal.config import STOP_MAX_ITERATIONS
from app.parareal.engine import PararealEngine
from app.parareal.executors import make_executor


class Command(BaseCommand):
    help = 'Run parareal on a model and write the convergence history, trajectories and manifest.'

    def add_arguments(self, parser):
        add_spec_arguments(parser)

    def handle(self, *args, **options):
        spec = resolve_options(options)

        if options['dry_run']:
            self.stdout.write(json.dumps(spec.echo(), indent=2))
            return

        net, x0, config = spec.network, spec.initial_state, spec.config
        timings = {}

        try:
            engine = PararealEngine(net, config, make_executor(spec.executor, spec.threads))

            with timed(timings, 'reference'):
                reference = engine.reference(x0, record=spec.write_paths)

            with timed(timings, 'parareal'):
                result = engine.run(x0, reference)
        except (SimulationError, ValueError) as err:
            fail(err)

        report, grid = result.report, result.grid
        times = config.times()
        species = net.species_names
        directory = spec.output_dir

        with timed(timings, 'output'):
            outputs = [
                write_convergence(directory, report.rows()),
                write_states(directory, REFERENCE_CSV, times, reference.states, species),
            ]

            if spec.write_paths:
                outputs.append(write_trajectory(directory, REFERENCE_PATH_CSV, reference.trajectories, species))

            for k in sorted({*spec.trajectory_iterations, report.iterations_run}):
                if k <= report.iterations_run:
                    outputs.append(write_states(directory, iteration_csv(k), times, grid.iterates[k], species))

            if spec.write_iterates:
                outputs.append(write_iterates(directory, times, grid.iterates, species))

        converged = report.stop_reason != STOP_MAX_ITERATIONS
        save_manifest(
            RunManifest.COMMAND_RUN, spec, timings, outputs,
            stop_reason=report.stop_reason,
            is_success=converged,
            extra={'iterations_run': report.iterations_run},
        )

        self.stdout.write(
            f'Stopped after {report.iterations_run} iterations ({report.stop_reason}); outputs in {directory}.'
        )

        if not converged:
            raise CommandError('Residual tolerance was not met within the iteration limit.',
                               returncode=EXIT_NOT_CONVERGED)
