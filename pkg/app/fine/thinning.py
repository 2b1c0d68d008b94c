"""
Acceptance-rejection simulation from a dominating Poisson random measure.

Candidates arrive at the constant rate `W̄ = Σ_r max_S w_r` with marks uniform on `[0, W̄]`;
a candidate with mark `z` fires channel `r` iff `0 <= z - W̄_{r-1} < w_r(x)`, where `W̄_r` is the
cumulative sum of the per-channel maxima over the bounding box `S`.
"""

from bisect import bisect_right
from dataclasses import dataclass
from django.conf import settings
from typing import List, Optional, Sequence, Tuple

from app.exceptions import BoxViolationError, InvalidStateError, StiffnessOverflowError
from app.fine.nrm import check_start
from app.fine.trajectory import Trajectory, accumulate_window
from app.kinetics.networks import ReactionNetwork
from app.noise.streams import IntervalNoise, NoiseSource, StreamClass


@dataclass(frozen=True)
class BoundingBox:
    lower: Tuple[int, ...]
    upper: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, 'lower', tuple(int(v) for v in self.lower))
        object.__setattr__(self, 'upper', tuple(int(v) for v in self.upper))

        if len(self.lower) != len(self.upper):
            raise ValueError('Box bounds must have equal lengths.')

        if any(low < 0 for low in self.lower):
            raise ValueError(f'Box lower bounds {self.lower} must be nonnegative copy numbers.')

        if any(low > high for low, high in zip(self.lower, self.upper)):
            raise ValueError('Box lower bounds must not exceed upper bounds.')

    def contains(self, x: Sequence[float]) -> bool:
        return all(low <= value <= high for low, value, high in zip(self.lower, x, self.upper))


def channel_bounds(net: ReactionNetwork, box: BoundingBox) -> List[float]:
    """
    Cumulative channel bounds `W̄_r = Σ_{s <= r} max_{x in S} w_s(x)`.
    """
    if len(box.lower) != net.D:
        raise ValueError(f'Box has {len(box.lower)} dimensions, the network has {net.D} species.')

    bounds, total = [], 0.0
    for reaction in net.reactions:
        total += reaction.propensity.box_maximum(box.lower, box.upper, net.volume)
        bounds.append(total)

    return bounds


def thinning_propagate(
    net: ReactionNetwork,
    x0: Sequence[float],
    dt: float,
    box: BoundingBox,
    noise: IntervalNoise,
    start_time: float = 0.0,
    record: bool = True,
    window: Optional[float] = None,
    event_cap: Optional[int] = None,
) -> Trajectory:
    check_start(x0, dt)

    if any(value != int(value) for value in x0):
        raise InvalidStateError(f'Thinning requires an integer start state, got {list(x0)}.')

    if not box.contains(x0):
        raise BoxViolationError(f'Start state {list(x0)} lies outside the box {box.lower}..{box.upper}.')

    cap = event_cap if event_cap is not None else settings.SIMULATION['EVENT_CAP']

    bounds = channel_bounds(net, box)
    total = bounds[-1] if bounds else 0.0
    rates = net.rate_functions
    changes = [reaction.changes for reaction in net.reactions]

    x = [float(value) for value in x0]
    initial = tuple(x)
    gaps = NoiseSource(noise.key(0, StreamClass.THINNING_GAP))
    marks = NoiseSource(noise.key(0, StreamClass.THINNING_MARK))
    fires = [0] * net.R

    offsets, states = [], []
    window_start = dt - window if window is not None else None
    acc = [0.0] * len(x)
    t = 0.0
    candidates = 0
    events = 0
    arrival = 0.0

    while total > 0.0:
        arrival += gaps.exponential_gap() / total
        if arrival > dt:
            break

        candidates += 1
        if candidates > cap:
            raise StiffnessOverflowError(noise.interval, cap)

        z = total * marks.uniform()
        r = bisect_right(bounds, z)
        if r >= net.R:
            continue

        floor = bounds[r - 1] if r else 0.0
        if not z - floor < rates[r](x):
            continue

        if window_start is not None:
            accumulate_window(acc, x, t, arrival, window_start)

        for i, n in changes[r]:
            x[i] -= n
        t = arrival
        events += 1
        fires[r] += 1

        if not box.contains(x):
            raise BoxViolationError(
                f'State {x} left the box {box.lower}..{box.upper} at t={start_time + t}; '
                'the channel bounds are no longer valid.'
            )

        if record:
            offsets.append(t)
            states.append(tuple(x))

    window_mean = None
    if window_start is not None:
        accumulate_window(acc, x, t, dt, window_start)
        window_mean = tuple(value / window for value in acc)

    return Trajectory(
        start_time=start_time,
        duration=dt,
        initial_state=initial,
        final_state=tuple(x),
        offsets=offsets,
        states=states,
        recorded=record,
        event_count=events,
        window=window,
        window_mean=window_mean,
        channel_fires=tuple(fires),
        channel_draws=(gaps.counter, marks.counter),
    )
