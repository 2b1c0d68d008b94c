"""
Monte Carlo diagnostics of the fine and coarse propagators and of parareal runs.
"""

import math
import numpy as np
import pandas as pd

from celery.utils.log import get_task_logger
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from scipy.stats import linregress
from typing import Callable, List, Optional, Sequence, Tuple

from app.coarse.steppers import AdaptiveImplicit, NewtonConfig, coarse_step
from app.exceptions import BoxViolationError
from app.fine.nrm import nrm_propagate
from app.fine.thinning import BoundingBox
from app.kinetics.networks import ReactionNetwork
from app.noise.streams import IntervalNoise
from app.parareal.config import PararealConfig
from app.parareal.engine import ConvergenceReport, reference_solve
from app.parareal.norms import error_norm


logger = get_task_logger(__name__)

# Below this RMS a scaling study has no noise to fit.
ZERO_NOISE = 1e-12


def replicate(function: Callable[[int], object], replicas: int, threads: int = 1) -> List:
    """
    Evaluate `function(i)` for `i = 0..replicas-1`, in order.
    """
    if threads <= 1:
        return [function(i) for i in range(replicas)]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(function, range(replicas)))


@dataclass(frozen=True)
class JumpBoundReport:
    estimate: float
    standard_error: float
    bound: float
    passed: bool


def jump_bound_check(
    net: ReactionNetwork,
    x0: Sequence[float],
    t: float,
    replicas: int,
    W: float,
    box: BoundingBox,
    norm_N: Optional[float] = None,
    seed: int = 0,
    two_sided: bool = False,
    threads: int = 1,
) -> JumpBoundReport:
    """
    Estimate `E |X_J(t)|^2` for the compensated jump term
    `X_J(t) = X_t - X_0 + ∫ Σ_r N_r w_r(X_s) ds` and compare it with `|N|^2 W t`, where `|N|`
    defaults to the Frobenius norm.

    The check passes when the estimate is below the bound plus three standard errors, or, with
    `two_sided`, when it lies within three standard errors of the bound.
    """
    if replicas < 2:
        raise ValueError('At least two replicas are required.')

    stoichiometry = net.stoichiometry.astype(float)
    norm_N = norm_N if norm_N is not None else float(np.linalg.norm(stoichiometry))
    start = np.asarray(x0, dtype=float)

    def drift(state):
        return stoichiometry @ net.propensities(state)

    def squared_jump(replica: int) -> float:
        traj = nrm_propagate(net, x0, t, IntervalNoise(seed, replica), record=True)
        for state in (traj.initial_state, *traj.states):
            if not box.contains(state):
                raise BoxViolationError(
                    f'Replica {replica} reached {list(state)} outside the box {box.lower}..{box.upper}; '
                    'W does not bound the intensity along the path.'
                )

        jump = np.asarray(traj.final_state) - start + np.asarray(traj.integral(drift))
        return float(jump @ jump)

    values = np.asarray(replicate(squared_jump, replicas, threads))
    estimate = float(values.mean())
    standard_error = float(values.std(ddof=1) / math.sqrt(replicas))
    bound = norm_N ** 2 * W * t

    if two_sided:
        passed = abs(estimate - bound) <= 3 * standard_error
    else:
        passed = estimate <= bound + 3 * standard_error

    logger.info(f'Jump bound: estimate {estimate:.4g} ± {standard_error:.2g}, bound {bound:.4g}...')

    return JumpBoundReport(estimate, standard_error, bound, passed)


@dataclass(frozen=True)
class ScalingReport:
    omegas: Tuple[float, ...]
    rms: Tuple[float, ...]
    slope: Optional[float]
    intercept: Optional[float]
    slope_stderr: Optional[float]
    applicable: bool


def omega_scaling_study(
    family: Callable[[float], Tuple[ReactionNetwork, Sequence[float]]],
    t: float,
    omegas: Sequence[float],
    replicas: int,
    seed: int = 0,
    rel_tol: float = 1e-10,
    abs_tol: float = 1e-10,
    threads: int = 1,
) -> ScalingReport:
    """
    Fit the log-log slope of the RMS distance between the exact process and the reaction-rate
    solution against the system size. `family(omega)` returns the network and its start state.
    """
    if len(omegas) < 3:
        raise ValueError(f'The scaling study needs at least 3 system sizes, got {len(omegas)}.')

    method = AdaptiveImplicit(rel_tol, abs_tol)
    rms = []
    for omega in omegas:
        net, x0 = family(omega)
        deterministic = coarse_step(net, x0, t, method, NewtonConfig())

        def squared_distance(replica: int) -> float:
            traj = nrm_propagate(net, x0, t, IntervalNoise(seed, replica), record=False)
            difference = np.asarray(traj.final_state) - deterministic
            return float(difference @ difference)

        distances = replicate(squared_distance, replicas, threads)
        rms.append(math.sqrt(float(np.mean(distances))))

        logger.info(f'Omega {omega:g}: RMS distance {rms[-1]:.4g}...')

    if max(rms) <= ZERO_NOISE:
        logger.info('No fluctuations around the deterministic solution, the scaling fit is not applicable...')
        return ScalingReport(tuple(omegas), tuple(rms), None, None, None, False)

    fit = linregress(np.log(omegas), np.log(rms))

    return ScalingReport(tuple(omegas), tuple(rms), float(fit.slope), float(fit.intercept), float(fit.stderr), True)


def convergence_curve_diagnostic(report: ConvergenceReport) -> pd.DataFrame:
    """
    Table of `(iteration, residual, ratio)` with `ratio = e_k / e_{k-1}`.
    """
    residuals = report.residuals[:report.iterations_run]
    ratios = [math.nan] + [
        current / previous if previous > 0 else math.nan
        for previous, current in zip(residuals, residuals[1:])
    ]

    return pd.DataFrame({
        'iteration': list(range(1, len(residuals) + 1)),
        'residual': residuals,
        'ratio': ratios,
    })


def perturbation_noise_floor(
    net: ReactionNetwork,
    x0: Sequence[float],
    config: PararealConfig,
    fraction: float = 0.01,
) -> float:
    """
    Relative error between the reference and the references of the network with every rate
    scaled by `1 ± fraction`, on the same noise.
    """
    if not 0 < fraction < 1:
        raise ValueError(f'Perturbation fraction must lie in (0, 1), got {fraction}.')

    baseline = reference_solve(net, x0, config).states

    return max(
        error_norm(reference_solve(net.scaled(factor), x0, config).states, baseline)
        for factor in (1.0 - fraction, 1.0 + fraction)
    )


def switch_times(times: Sequence[float], states: Sequence[Sequence[float]], band: float = 0.0) -> List[float]:
    """
    Times at which the dominant species of a two-species switch changes.

    A species becomes dominant once it exceeds the other by more than `band`; the recorded time
    is the first sample where the new dominance is observed.
    """
    switches = []
    dominant = None
    for time, state in zip(times, states):
        difference = state[0] - state[1]
        if difference > band:
            current = 0
        elif difference < -band:
            current = 1
        else:
            continue

        if dominant is not None and current != dominant:
            switches.append(float(time))
        dominant = current

    return switches
