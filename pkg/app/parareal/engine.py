"""
Parareal iteration for stochastic reaction networks.

Row 0 of the grid is the coarse sweep; row k is
`v[k][n] = F(v[k-1][n-1]) + (C(v[k][n-1]) - C(v[k-1][n-1]))`. Fine evaluations of a row are
independent and go to the executor in one batch; the coarse correction sweep is sequential.
"""

import numpy as np

from celery.utils.log import get_task_logger
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from app.coarse.steppers import coarse_step
from app.exceptions import CoarseFailureError, InvalidStateError
from app.fine.propagators import FineResult
from app.fine.trajectory import Trajectory
from app.kinetics.networks import ReactionNetwork
from app.parareal.config import PararealConfig, STOP_MAX_ITERATIONS, STOP_PREFIX_EXACT, STOP_TOLERANCE
from app.parareal.executors import SerialExecutor
from app.parareal.jobs import FineJob, run_job
from app.parareal.norms import error_norm, residual_norm


logger = get_task_logger(__name__)

CARRY_FILTERED = 'filtered'
CARRY_EXACT = 'exact'


@dataclass
class Reference:
    """
    Serial fine solution: `states[n]` is the reported `u_n`; `end_states[n]` is the integer
    state of the serial path at `t_n`. Both coincide in exact mode.
    """
    states: np.ndarray
    end_states: np.ndarray
    event_counts: List[int]
    carry: str = CARRY_FILTERED
    trajectories: Optional[List[Trajectory]] = None


@dataclass
class PararealGrid:
    iterates: List[np.ndarray] = field(default_factory=list)
    residual_history: List[float] = field(default_factory=list)
    error_history: Optional[List[float]] = None

    @property
    def last(self) -> np.ndarray:
        return self.iterates[-1]


@dataclass
class ConvergenceReport:
    """
    `residuals[k - 1]` is the residual between rows `k - 1` and `k`; `errors[k]` compares
    row `k` with the reference.
    """
    iterations_run: int
    residuals: List[float]
    errors: Optional[List[float]]
    stop_reason: str

    def rows(self) -> List[Tuple[int, Optional[float], Optional[float]]]:
        """
        `(iteration, residual, error)` for iterations `0..iterations_run`.
        """
        return [
            (
                k,
                self.residuals[k - 1] if k > 0 else None,
                self.errors[k] if self.errors is not None else None,
            )
            for k in range(self.iterations_run + 1)
        ]


@dataclass
class PararealResult:
    grid: PararealGrid
    report: ConvergenceReport


def _require_integer_state(x0: Sequence[float]) -> np.ndarray:
    x = np.asarray(x0, dtype=float)

    if not np.all(np.isfinite(x)) or np.any(x != np.round(x)) or np.any(x < 0):
        raise InvalidStateError(f'Initial state {x.tolist()} must be a nonnegative integer vector.')

    return x


class PararealEngine:
    """
    Holds the fine and coarse caches of one network/config pair so that the reference and
    the parareal run share fine evaluations.
    """

    def __init__(self, net: ReactionNetwork, config: PararealConfig, executor=None):
        self.net = net
        self.config = config
        self.executor = executor or SerialExecutor()
        self._fine_cache: Dict[Tuple[int, bytes], FineResult] = {}
        self._coarse_cache: Dict[bytes, np.ndarray] = {}

    def _job(self, interval: int, start: np.ndarray) -> FineJob:
        return FineJob(
            interval=interval,
            start=tuple(float(v) for v in start),
            start_time=self.config.start_time(interval),
            dt=self.config.dt,
            seed=self.config.seed,
            mode=self.config.fine_mode,
            event_cap=self.config.event_cap,
        )

    def fine_batch(self, starts: Sequence[Tuple[int, np.ndarray]]) -> List[FineResult]:
        """
        Fine evaluations for `(interval, start)` pairs, dispatching only the uncached ones.
        """
        keys = [(n, np.asarray(x, dtype=float).tobytes()) for n, x in starts]
        missing = [(n, x) for (n, x), key in zip(starts, keys) if key not in self._fine_cache]

        if missing:
            logger.debug(f'Dispatching {len(missing)} fine evaluations...')
            results = self.executor.map(self.net, [self._job(n, x) for n, x in missing])
            for (n, x), result in zip(missing, results):
                self._fine_cache[(n, np.asarray(x, dtype=float).tobytes())] = result

        return [self._fine_cache[key] for key in keys]

    def coarse(self, x: np.ndarray, k: int, n: int) -> np.ndarray:
        key = x.tobytes()
        if key not in self._coarse_cache:
            try:
                self._coarse_cache[key] = coarse_step(
                    self.net, x, self.config.dt, self.config.coarse, self.config.newton
                )
            except CoarseFailureError as err:
                raise type(err)(f'Coarse solve failed at cell (k={k}, n={n}): {err}') from err

        return self._coarse_cache[key]

    def _chain(self, x0: np.ndarray, carry: str, record: bool) -> Tuple[List[FineResult], List[Trajectory]]:
        results, trajectories = [], []
        start = x0
        for n in range(1, self.config.intervals + 1):
            if record:
                result = run_job(self.net, self._job(n, start), record=True)
                self._fine_cache.setdefault((n, start.tobytes()), result)
                trajectories.append(result.trajectory)
            else:
                result = self.fine_batch([(n, start)])[0]

            results.append(result)
            start = np.asarray(result.value if carry == CARRY_FILTERED else result.end_state, dtype=float)

        return results, trajectories

    def reference(self, x0: Sequence[float], carry: str = CARRY_FILTERED, record: bool = False) -> Reference:
        """
        Serial fine chaining `u_n = F(u_{n-1})` with interval keyed noise.

        The serial path itself always continues from the unfiltered end states, so it stays
        integer valued. In homogenized mode with the filtered carry the reported values come
        from a second chain through the filtered values, the one parareal reproduces.
        """
        if carry not in (CARRY_FILTERED, CARRY_EXACT):
            raise ValueError(f'Carry {carry} is not supported.')

        x = _require_integer_state(x0)

        logger.info(f'Computing serial reference over {self.config.intervals} intervals...')

        path, trajectories = self._chain(x, CARRY_EXACT, record)
        reported = path
        if carry == CARRY_FILTERED and self.config.fine_mode.homogenized:
            logger.info('Computing filtered reference chain...')
            reported, _ = self._chain(x, CARRY_FILTERED, False)

        return Reference(
            states=np.vstack([x] + [np.asarray(result.value, dtype=float) for result in reported]),
            end_states=np.vstack([x] + [np.asarray(result.end_state, dtype=float) for result in path]),
            event_counts=[result.event_count for result in path],
            carry=carry,
            trajectories=trajectories if record else None,
        )

    def run(self, x0: Sequence[float], reference: Optional[Reference] = None) -> PararealResult:
        """
        Iterate until the residual drops below tolerance, `max_iterations` is reached or
        `k = N`, where the iterate equals the serial fine solution.
        """
        N, K = self.config.intervals, self.config.max_iterations
        x0 = np.asarray(x0, dtype=float)
        u = reference.states if reference is not None else None

        logger.info('Running coarse sweep...')

        row = [x0]
        coarse_row: List[Optional[np.ndarray]] = [None]
        for n in range(1, N + 1):
            predicted = self.coarse(row[n - 1], 0, n)
            coarse_row.append(predicted)
            row.append(predicted)

        grid = PararealGrid(iterates=[np.vstack(row)], error_history=[] if u is not None else None)
        if u is not None:
            grid.error_history.append(error_norm(grid.last, u))

        stop_reason = STOP_MAX_ITERATIONS
        k = 0
        while k < min(K, N):
            k += 1
            previous = grid.last

            logger.info(f'Running parareal iteration {k}...')

            fine = self.fine_batch([(n, previous[n - 1]) for n in range(1, N + 1)])

            row = [x0]
            next_coarse_row: List[Optional[np.ndarray]] = [None]
            for n in range(1, N + 1):
                predicted = self.coarse(row[n - 1], k, n)
                row.append(np.asarray(fine[n - 1].value, dtype=float) + (predicted - coarse_row[n]))
                next_coarse_row.append(predicted)

            coarse_row = next_coarse_row
            grid.iterates.append(np.vstack(row))

            residual = residual_norm(previous, grid.last)
            grid.residual_history.append(residual)
            if u is not None:
                grid.error_history.append(error_norm(grid.last, u))

            logger.info(f'Iteration {k} residual {residual:.3e}...')

            if residual <= self.config.residual_tolerance:
                stop_reason = STOP_TOLERANCE
                break

            if k == N:
                stop_reason = STOP_PREFIX_EXACT
                break

        report = ConvergenceReport(
            iterations_run=k,
            residuals=list(grid.residual_history),
            errors=list(grid.error_history) if grid.error_history is not None else None,
            stop_reason=stop_reason,
        )

        logger.info(f'Parareal stopped after {k} iterations ({stop_reason})...')

        return PararealResult(grid=grid, report=report)


def reference_solve(
    net: ReactionNetwork,
    x0: Sequence[float],
    config: PararealConfig,
    carry: str = CARRY_FILTERED,
    record: bool = False,
) -> Reference:
    return PararealEngine(net, config).reference(x0, carry=carry, record=record)


def parareal_run(
    net: ReactionNetwork,
    x0: Sequence[float],
    config: PararealConfig,
    reference: Optional[Reference] = None,
    executor=None,
) -> PararealResult:
    return PararealEngine(net, config, executor).run(x0, reference)
