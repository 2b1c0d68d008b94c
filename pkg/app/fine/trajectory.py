import pandas as pd

from dataclasses import dataclass, field
from typing import Callable, Iterator, List, MutableSequence, Optional, Sequence, Tuple


State = Tuple[float, ...]


def accumulate_window(
    acc: MutableSequence[float],
    state: Sequence[float],
    segment_start: float,
    segment_end: float,
    window_start: float,
):
    """
    Add `state * |[segment_start, segment_end) ∩ [window_start, ...)|` to `acc`.

    Shared by the online accumulators of the solvers and by `homogenize`, so both give the
    same bits for the same path.
    """
    if segment_end <= window_start:
        return

    overlap = segment_end - (segment_start if segment_start > window_start else window_start)
    for i, value in enumerate(state):
        acc[i] += value * overlap


@dataclass
class Trajectory:
    """
    Piecewise constant, right-continuous path over `[start_time, start_time + duration]`.

    Event times are stored as offsets from `start_time`. When the path was not recorded only
    the end state, the counters and the optional window mean are available.
    """
    start_time: float
    duration: float
    initial_state: State
    final_state: State
    offsets: List[float] = field(default_factory=list)
    states: List[State] = field(default_factory=list)
    recorded: bool = True
    event_count: int = 0
    window: Optional[float] = None
    window_mean: Optional[State] = None
    channel_fires: Tuple[int, ...] = ()
    channel_draws: Tuple[int, ...] = ()
    clocks: Tuple[Tuple[float, float], ...] = ()

    @property
    def end_time(self) -> float:
        return self.start_time + self.duration

    @property
    def event_times(self) -> List[float]:
        return [self.start_time + offset for offset in self.offsets]

    @property
    def breakpoints(self) -> List[Tuple[float, State]]:
        return list(zip(self.event_times, self.states))

    def segments(self) -> Iterator[Tuple[float, float, State]]:
        """
        Yield `(local_start, local_end, state)` for every constant piece of the path.
        """
        self._require_recorded()

        start, state = 0.0, self.initial_state
        for offset, next_state in zip(self.offsets, self.states):
            yield start, offset, state
            start, state = offset, next_state

        yield start, self.duration, state

    def state_at(self, time: float) -> State:
        """
        Right-continuous evaluation at an absolute time.
        """
        self._require_recorded()

        offset = time - self.start_time
        state = self.initial_state
        for event_offset, next_state in zip(self.offsets, self.states):
            if event_offset > offset:
                break
            state = next_state

        return state

    def integral(self, function: Callable[[State], Sequence[float]]) -> List[float]:
        """
        Exact `∫ function(Y(t)) dt` over the whole interval.
        """
        total = None
        for start, end, state in self.segments():
            value = function(state)
            if total is None:
                total = [0.0] * len(value)
            for i, v in enumerate(value):
                total[i] += v * (end - start)

        return total

    def to_frame(self, species_names: Sequence[str]) -> pd.DataFrame:
        """
        One row for the start state and one per breakpoint.
        """
        self._require_recorded()

        rows = [(self.start_time, *self.initial_state)]
        rows.extend((time, *state) for time, state in self.breakpoints)

        return pd.DataFrame(rows, columns=['t', *species_names])

    def _require_recorded(self):
        if not self.recorded:
            raise ValueError('The trajectory was propagated without recording its path.')


def homogenize(traj: Trajectory, delta_t: float) -> State:
    """
    Average of the path over the trailing window `[end - delta_t, end]`.
    """
    if not 0 < delta_t <= traj.duration:
        raise ValueError(f'Averaging window {delta_t} must lie in (0, {traj.duration}].')

    if not traj.recorded:
        if traj.window == delta_t and traj.window_mean is not None:
            return traj.window_mean
        raise ValueError('The trajectory was propagated without recording its path.')

    window_start = traj.duration - delta_t
    acc = [0.0] * len(traj.initial_state)
    for start, end, state in traj.segments():
        accumulate_window(acc, state, start, end, window_start)

    return tuple(value / delta_t for value in acc)
