"""
Named validation suites run by the `validate` command.

Each suite returns a `SuiteResult`; `quick` shrinks sample sizes so that the whole quick
selection runs in well under a minute.
"""

import math
import numpy as np

from celery.utils.log import get_task_logger
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Sequence

from app.coarse.rre import rre_jacobian, rre_rhs
from app.coarse.steppers import BackwardEuler, NewtonConfig, coarse_step
from app.fine.nrm import nrm_propagate
from app.fine.propagators import FineMode
from app.fine.thinning import BoundingBox, thinning_propagate
from app.kinetics.builtins import (
    PAPER_MODELS, TOGGLE, build_birth_death, build_isomerization, build_paper_model, build_pure_birth,
    initial_state, isomerization_state,
)
from app.noise.streams import IntervalNoise
from app.parareal.config import PararealConfig
from app.parareal.engine import PararealEngine
from app.validation.cme import TruncatedStateSpace, cme_evolve, cme_generator, point_mass
from app.validation.diagnostics import jump_bound_check, omega_scaling_study
from app.validation.statistics import distribution_distance, poisson_distance, sample_histogram, two_sample_chi2


logger = get_task_logger(__name__)


@dataclass
class SuiteResult:
    name: str
    passed: bool
    details: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'name': self.name, 'passed': self.passed, 'details': self.details}


def _endpoint_samples(propagate, samples: int) -> List:
    return [propagate(i).final_state for i in range(samples)]


def oracle_suite(quick: bool = False, seed: int = 0) -> SuiteResult:
    """
    Birth-death endpoint law at t = 10 against the truncated master equation and Poisson(5).
    """
    samples = 10000 if quick else 100000
    net = build_birth_death(birth=5.0, death=1.0)
    space = TruncatedStateSpace((0,), (40,))

    exact = cme_evolve(cme_generator(net, space), point_mass(space, (0,)), 10.0)
    endpoints = _endpoint_samples(
        lambda i: nrm_propagate(net, (0.0,), 10.0, IntervalNoise(seed, i), record=False), samples,
    )
    counts, outside = sample_histogram(space, endpoints)

    tv = distribution_distance(counts, exact, 'tv', outside)
    stationary = poisson_distance(exact.probabilities, 5.0)
    tv_limit = 0.03 if quick else 0.02

    return SuiteResult('oracle', tv < tv_limit and stationary < 1e-3, {
        'samples': samples,
        'tv_distance': tv,
        'tv_limit': tv_limit,
        'poisson_distance': stationary,
    })


def thinning_suite(quick: bool = False, seed: int = 0) -> SuiteResult:
    """
    Next reaction method and thinning endpoints of birth-death at t = 1 follow the same law.
    """
    samples = 3000 if quick else 10000
    net = build_birth_death(birth=5.0, death=1.0)
    box = BoundingBox((0,), (40,))

    nrm = _endpoint_samples(
        lambda i: nrm_propagate(net, (0.0,), 1.0, IntervalNoise(seed, i), record=False), samples,
    )
    thinning = _endpoint_samples(
        lambda i: thinning_propagate(net, (0.0,), 1.0, box, IntervalNoise(seed + 1, i), record=False), samples,
    )
    pvalue = two_sample_chi2(nrm, thinning)

    return SuiteResult('thinning', pvalue > 0.01, {'samples': samples, 'chi2_pvalue': pvalue})


def jump_bound_suite(quick: bool = False, seed: int = 0) -> SuiteResult:
    """
    Tight pure-birth case (two-sided) and birth-death on `[0, 40]` (one-sided).
    """
    replicas = 2000 if quick else 10000

    birth = build_pure_birth(5.0)
    tight = jump_bound_check(birth, (0.0,), 1.0, replicas, 5.0, BoundingBox((0,), (200,)), seed=seed, two_sided=True)

    birth_death = build_birth_death(birth=5.0, death=1.0)
    loose = jump_bound_check(birth_death, (5.0,), 1.0, replicas, 45.0, BoundingBox((0,), (40,)), seed=seed)

    return SuiteResult('jump_bound', tight.passed and loose.passed, {
        'replicas': replicas,
        'pure_birth': asdict(tight),
        'birth_death': asdict(loose),
    })


def omega_scaling_suite(quick: bool = False, seed: int = 0) -> SuiteResult:
    """
    RMS distance to the reaction-rate solution grows like Omega^(1/2).
    """
    omegas = [100.0, 400.0, 1600.0] if quick else [100.0, 1000.0, 10000.0]
    replicas = 60 if quick else 200

    def family(omega):
        return build_isomerization(omega), isomerization_state(omega)

    report = omega_scaling_study(family, 1.0, omegas, replicas, seed=seed)
    passed = report.applicable and 0.35 <= report.slope <= 0.65

    return SuiteResult('omega_scaling', passed, {
        'omegas': list(report.omegas),
        'rms': list(report.rms),
        'slope': report.slope,
        'slope_stderr': report.slope_stderr,
    })


def _jacobian_error(net, x: np.ndarray) -> float:
    """
    `‖J - FD‖ / (1 + ‖J‖)` with central differences of step `1e-6 (1 + |x_j|)`.
    """
    analytic = rre_jacobian(net, x)
    numeric = np.zeros_like(analytic)
    for j in range(net.D):
        h = 1e-6 * (1.0 + abs(x[j]))
        plus, minus = x.copy(), x.copy()
        plus[j] += h
        minus[j] -= h
        numeric[:, j] = (rre_rhs(net, plus) - rre_rhs(net, minus)) / (2 * h)

    return float(np.linalg.norm(analytic - numeric) / (1.0 + np.linalg.norm(analytic)))


def backward_euler_ratios(steps: Sequence[float] = (0.1, 0.05, 0.025)) -> List[float]:
    """
    Error ratios of backward Euler on linear decay over `[0, 1]` for successive step sizes.

    The decay starts at 100 copies so that the clamp at one copy never engages; the relative
    errors are those of `dx/dt = -x` from 1.
    """
    decay = build_birth_death(birth=0.0, death=1.0)
    newton = NewtonConfig()

    def error(dt: float) -> float:
        x = np.array([100.0])
        for _ in range(int(round(1.0 / dt))):
            x = coarse_step(decay, x, dt, BackwardEuler(), newton)
        return abs(float(x[0]) / 100.0 - math.exp(-1.0))

    errors = [error(dt) for dt in steps]
    return [coarse / fine for coarse, fine in zip(errors, errors[1:])]


def kernels_suite(quick: bool = False, seed: int = 0) -> SuiteResult:
    """
    Analytic Jacobians against central differences and the first order of backward Euler.
    """
    points = 20 if quick else 100
    generator = np.random.default_rng(seed)

    worst = {}
    for name in PAPER_MODELS:
        net = build_paper_model(name)
        worst[name] = max(
            _jacobian_error(net, generator.uniform(3.0, 100.0, size=net.D)) for _ in range(points)
        )

    ratios = backward_euler_ratios()
    passed = all(value <= 1e-5 for value in worst.values()) and all(1.8 <= ratio <= 2.2 for ratio in ratios)

    return SuiteResult('kernels', passed, {'jacobian_error': worst, 'backward_euler_ratios': ratios})


def prefix_suite(quick: bool = False, seed: int = 0) -> SuiteResult:
    """
    Parareal rows reproduce the serial fine solution bit for bit on their first `k` points.
    """
    intervals = 6 if quick else 10
    net = build_paper_model(TOGGLE)
    x0 = initial_state(TOGGLE)

    violations = 0
    for mode in (FineMode(), FineMode(0.5)):
        config = PararealConfig(final_time=2e4, intervals=intervals, max_iterations=intervals,
                                residual_tolerance=1e-300, fine_mode=mode, seed=seed)
        engine = PararealEngine(net, config)
        reference = engine.reference(x0)
        result = engine.run(x0, reference)
        for k, row in enumerate(result.grid.iterates):
            violations += sum(1 for n in range(k + 1) if not np.array_equal(row[n], reference.states[n]))

    return SuiteResult('prefix', violations == 0, {'intervals': intervals, 'violations': violations})


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    'oracle': oracle_suite,
    'thinning': thinning_suite,
    'jump_bound': jump_bound_suite,
    'omega_scaling': omega_scaling_suite,
    'kernels': kernels_suite,
    'prefix': prefix_suite,
}


def select_suites(selector: str) -> List[str]:
    """
    Resolve `all` or a comma separated list of suite names.
    """
    if selector == 'all':
        return list(SUITES)

    names = [name.strip() for name in selector.split(',') if name.strip()]
    unknown = [name for name in names if name not in SUITES]
    if unknown or not names:
        raise ValueError(f'Unknown validation suite: {", ".join(unknown) or selector}.')

    return names


def run_suites(selector: str = 'all', quick: bool = False, seed: int = 0) -> List[SuiteResult]:
    results = []
    for name in select_suites(selector):
        logger.info(f'Running validation suite {name}...')
        results.append(SUITES[name](quick=quick, seed=seed))

    return results
