import time

from contextlib import contextmanager
from django.core.management.base import CommandError
from typing import Any, Dict, List, NoReturn, Optional

from app.exceptions import SpecificationError
from app.io.specs import ResolvedSpec, apply_overrides, load_spec_file, resolve_spec
from app.io.writers import write_manifest
from app.models import RunManifest
from core import __version__


EXIT_FAILURE = 1
EXIT_NOT_CONVERGED = 2


def add_spec_arguments(parser):
    parser.add_argument('--spec', help='Path of a JSON model/run specification.')
    parser.add_argument('--model', help='Builtin model name; replaces the model block of --spec.')
    parser.add_argument('--T', help='Final time.')
    parser.add_argument('--N', help='Number of intervals.')
    parser.add_argument('--iters', help='Maximum number of parareal iterations.')
    parser.add_argument('--tol', help='Residual tolerance.')
    parser.add_argument('--seed', help='Seed of the noise streams.')
    parser.add_argument('--coarse', help='Coarse propagator: be, lbe or adaptive.')
    parser.add_argument('--coarse-rtol', dest='coarse_rtol', help='Relative tolerance of the adaptive coarse solver.')
    parser.add_argument('--coarse-atol', dest='coarse_atol', help='Absolute tolerance of the adaptive coarse solver.')
    parser.add_argument('--homogenize', help='Averaging window as a fraction of the interval, or "off".')
    parser.add_argument('--executor', help='Fine evaluation executor: serial, threads or celery.')
    parser.add_argument('--threads', help='Worker threads of the threads executor.')
    parser.add_argument('--out', help='Output directory.')
    parser.add_argument(
        '--dry-run', dest='dry_run', action='store_true', help='Validate and print the resolved config.'
    )


def resolve_options(options: Dict[str, Any]) -> ResolvedSpec:
    """
    Load the spec named by `--spec` (if any), apply the CLI overrides and validate the result.
    """
    if not options.get('spec') and not options.get('model'):
        raise CommandError('Either --spec or --model is required.', returncode=EXIT_FAILURE)

    try:
        document = load_spec_file(options['spec']) if options.get('spec') else {}
        return resolve_spec(apply_overrides(document, options))
    except SpecificationError as err:
        raise CommandError(f'Invalid specification: {err}', returncode=EXIT_FAILURE) from err


def fail(err: Exception) -> NoReturn:
    raise CommandError(str(err), returncode=EXIT_FAILURE) from err


@contextmanager
def timed(timings: Dict[str, float], phase: str):
    started = time.perf_counter()
    try:
        yield
    finally:
        timings[phase] = time.perf_counter() - started


def save_manifest(
    command: str,
    spec: ResolvedSpec,
    timings: Dict[str, float],
    outputs: List[str],
    stop_reason: str = '',
    is_success: bool = True,
    extra: Optional[Dict[str, Any]] = None,
) -> str:
    """
    Write `manifest.json` into the output directory and log the run in the database.
    """
    config = spec.echo()
    manifest = {
        'command': command,
        'model': spec.model_name,
        'config': config,
        'seed': spec.config.seed,
        'version': __version__,
        'timings': timings,
        'stop_reason': stop_reason,
        'outputs': outputs,
        **(extra or {}),
    }
    path = write_manifest(spec.output_dir, manifest)

    RunManifest.objects.create(
        command=command,
        model_name=spec.model_name,
        config=config,
        seed=spec.config.seed,
        version=__version__,
        timings=timings,
        stop_reason=stop_reason,
        output_dir=spec.output_dir,
        is_success=is_success,
    )

    return path
