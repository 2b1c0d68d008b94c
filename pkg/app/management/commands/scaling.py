import json
import sys

from dataclasses import replace
from django.core.management.base import BaseCommand

from app.exceptions import SimulationError
from app.io.writers import write_omega_scaling, write_scaling
from app.kinetics.builtins import RDME_CHAIN, build_isomerization, build_rdme_chain, initial_state, isomerization_state
from app.management.commands._common import add_spec_arguments, fail, resolve_options, save_manifest, timed
from app.models import RunManifest
from app.parareal.engine import PararealEngine
from app.parareal.executors import make_executor
from app.validation.diagnostics import omega_scaling_study


DEFAULT_SWEEP_ITERATIONS = 5
DEFAULT_OMEGAS = (1e2, 1e3, 1e4)


def _numbers(value, cast):
    return [cast(item) for item in value.split(',') if item.strip()] if value else None


class Command(BaseCommand):
    help = 'Sweep the reaction-diffusion chain over system sizes and fit the Omega^(1/2) noise scaling.'

    def add_arguments(self, parser):
        add_spec_arguments(parser)
        parser.add_argument('--sizes', help='Comma separated molecule counts per cell of the chain sweep.')
        parser.add_argument('--omegas', help='Comma separated system sizes of the scaling study.')
        parser.add_argument('--replicas', type=int, help='Replicas per system size of the scaling study.')

    def handle(self, *args, **options):
        if not options.get('spec') and not options.get('model'):
            options['model'] = RDME_CHAIN
        if options.get('iters') is None:
            options['iters'] = DEFAULT_SWEEP_ITERATIONS

        spec = resolve_options(options)

        scaling = {
            'omegas': list(DEFAULT_OMEGAS), 'replicas': 200, 'time': 1.0, 'sizes': [25, 100, 400],
            **(spec.scaling or {}),
        }
        scaling['sizes'] = _numbers(options.get('sizes'), int) or scaling['sizes']
        scaling['omegas'] = _numbers(options.get('omegas'), float) or scaling['omegas']
        scaling['replicas'] = options.get('replicas') or scaling['replicas']

        if options['dry_run']:
            self.stdout.write(json.dumps({**spec.echo(), 'scaling': scaling}, indent=2))
            return

        # A fixed number of iterations for every size.
        config = replace(spec.config, residual_tolerance=sys.float_info.min)
        params = dict(spec.document.get('model', {}).get('params', {})) if spec.model_name == RDME_CHAIN else {}
        params.pop('n_omega', None)

        timings, rows, outputs = {}, [], []
        study = None
        try:
            with timed(timings, 'sweep'):
                for size in scaling['sizes']:
                    self.stdout.write(f'Running the chain with {size} molecules per cell...')
                    net = build_rdme_chain(n_omega=size, **params)
                    engine = PararealEngine(net, config, make_executor(spec.executor, spec.threads))
                    report = engine.run(initial_state(RDME_CHAIN, n_omega=size, **params)).report
                    rows.extend((size, k, residual) for k, residual in enumerate(report.residuals, start=1))

            if len(scaling['omegas']) >= 3:
                with timed(timings, 'omega_scaling'):
                    study = omega_scaling_study(
                        lambda omega: (build_isomerization(omega), isomerization_state(omega)),
                        scaling['time'], scaling['omegas'], scaling['replicas'], seed=config.seed,
                    )
            else:
                self.stdout.write('Fewer than 3 system sizes given, skipping the Omega scaling study.')
        except (SimulationError, ValueError, TypeError) as err:
            fail(err)

        outputs.append(write_scaling(spec.output_dir, rows))
        if study is not None:
            outputs.append(write_omega_scaling(spec.output_dir, study.omegas, study.rms, study.slope))
            self.stdout.write(f'Fitted slope {study.slope} (applicable: {study.applicable}).')

        save_manifest(
            RunManifest.COMMAND_SCALING, spec, timings, outputs,
            extra={'scaling': scaling, 'slope': study.slope if study is not None else None},
        )
