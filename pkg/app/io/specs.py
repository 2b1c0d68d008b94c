import json

from copy import deepcopy
from dataclasses import dataclass, field
from django.conf import settings
from typing import Any, Dict, List, Optional

from app.exceptions import SpecificationError
from app.io.serializers import NetworkSerializer, SpecSerializer, validated
from app.kinetics.builtins import (
    DIMER_ISO, RDME_CHAIN, TOGGLE, build_birth_death, build_isomerization, build_paper_model,
    initial_state, isomerization_state,
)
from app.kinetics.networks import ReactionNetwork
from app.parareal.config import PararealConfig


BIRTH_DEATH = 'birth_death'
ISOMERIZATION = 'isomerization'

BUILTIN_MODELS = (TOGGLE, DIMER_ISO, RDME_CHAIN, BIRTH_DEATH, ISOMERIZATION)

# Run settings of the three experiments; explicit spec values and CLI flags take precedence.
BUILTIN_RUNS = {
    TOGGLE: {'final_time': 5e6, 'intervals': 50},
    DIMER_ISO: {'final_time': 10.0, 'intervals': 50, 'homogenize': 0.5, 'coarse': 'lbe'},
    RDME_CHAIN: {'final_time': 1.0, 'intervals': 50, 'homogenize': 0.25},
}

# CLI option name -> path inside the spec document.
OVERRIDES = {
    'model': ('model', 'builtin'),
    'T': ('run', 'final_time'),
    'N': ('run', 'intervals'),
    'iters': ('run', 'max_iterations'),
    'tol': ('run', 'residual_tolerance'),
    'seed': ('run', 'seed'),
    'coarse': ('run', 'coarse'),
    'coarse_rtol': ('run', 'coarse_rtol'),
    'coarse_atol': ('run', 'coarse_atol'),
    'homogenize': ('run', 'homogenize'),
    'executor': ('run', 'executor'),
    'threads': ('run', 'threads'),
    'out': ('outputs', 'directory'),
}


@dataclass
class ResolvedSpec:
    model_name: str
    network: ReactionNetwork
    initial_state: List[float]
    config: PararealConfig
    output_dir: str
    executor: Optional[str] = None
    threads: Optional[int] = None
    trajectory_iterations: List[int] = field(default_factory=list)
    write_iterates: bool = False
    write_paths: bool = False
    scaling: Optional[Dict[str, Any]] = None
    document: Dict[str, Any] = field(default_factory=dict)

    def echo(self) -> Dict[str, Any]:
        """
        Resolved configuration as written to the manifest and printed by `--dry-run`.
        """
        return {
            'model': self.model_name,
            'species': list(self.network.species_names),
            'initial_state': list(self.initial_state),
            'run': self.config.to_options(),
            'executor': self.executor or settings.SIMULATION['EXECUTOR'],
            'output_dir': self.output_dir,
            'trajectories': list(self.trajectory_iterations),
            'iterates': self.write_iterates,
            'paths': self.write_paths,
            'scaling': self.scaling,
        }


def load_spec_file(path: str) -> Dict[str, Any]:
    try:
        with open(path) as handle:
            document = json.load(handle)
    except OSError as err:
        raise SpecificationError(f'Cannot read spec file {path}: {err}') from err
    except json.JSONDecodeError as err:
        raise SpecificationError(f'Spec file {path} is not valid JSON: {err}') from err

    if not isinstance(document, dict):
        raise SpecificationError('spec: Expected a JSON object at the top level.')

    return document


def apply_overrides(document: Dict[str, Any], options: Dict[str, Any]) -> Dict[str, Any]:
    """
    Return a copy of the spec document with the given CLI options written into it.

    `--model` replaces the whole model block.
    """
    document = deepcopy(document)

    for option, (section, name) in OVERRIDES.items():
        value = options.get(option)
        if value is None:
            continue

        if option == 'model':
            document['model'] = {'builtin': value}
            continue

        if option == 'homogenize' and value == 'off':
            value = None

        block = document.setdefault(section, {})
        if isinstance(block, dict):
            block[name] = value

    return document


def build_builtin(name: str, params: Dict[str, Any]) -> ReactionNetwork:
    if name == BIRTH_DEATH:
        return build_birth_death(**params)

    if name == ISOMERIZATION:
        return build_isomerization(**params)

    return build_paper_model(name, **params)


def builtin_state(name: str, params: Dict[str, Any]) -> List[float]:
    if name == BIRTH_DEATH:
        return [0.0]

    if name == ISOMERIZATION:
        return list(isomerization_state(params.get('omega', 1.0)))

    return initial_state(name, **params)


def resolve_spec(document: Dict[str, Any]) -> ResolvedSpec:
    """
    Validate a spec document and build everything a command needs from it.
    """
    data = validated(SpecSerializer(data=document))
    model = data['model']

    if 'builtin' in model:
        name = model['builtin']
        if name not in BUILTIN_MODELS:
            raise SpecificationError(f'model.builtin: Model {name} is not supported.')

        params = dict(model['params'])
        try:
            network = build_builtin(name, params)
            state = list(model.get('initial_state') or builtin_state(name, params))
        except (TypeError, ValueError) as err:
            raise SpecificationError(f'model.params: {err}') from err
        run = {**BUILTIN_RUNS.get(name, {}), **data['run']}
    else:
        network = NetworkSerializer().create(model['network'])
        name = network.name or 'inline'
        state = list(model['initial_state'])
        run = dict(data['run'])

    if len(state) != network.D:
        raise SpecificationError(f'model.initial_state: Expected {network.D} entries, got {len(state)}.')

    for required in ('final_time', 'intervals'):
        if required not in run:
            raise SpecificationError(f'run.{required}: This field is required.')

    executor = run.pop('executor', None)
    threads = run.pop('threads', None)

    try:
        config = PararealConfig.from_options(run)
    except ValueError as err:
        raise SpecificationError(f'run: {err}') from err

    outputs = data['outputs']

    return ResolvedSpec(
        model_name=name,
        network=network,
        initial_state=state,
        config=config,
        output_dir=outputs.get('directory') or settings.SIMULATION['OUTPUT_DIR'],
        executor=executor,
        threads=threads,
        trajectory_iterations=list(outputs.get('trajectories', [])),
        write_iterates=bool(outputs.get('iterates', False)),
        write_paths=bool(outputs.get('paths', False)),
        scaling=dict(data['scaling']) if 'scaling' in data else None,
        document=document,
    )
