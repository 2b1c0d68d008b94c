"""
Next reaction method.

Each channel `r` owns an internal (operational) clock `T_r = ∫ w_r ds` and the next arrival
`P_r` of its own unit-rate Poisson process, read from the stream `(seed, interval, r)`. The
channel fires when `T_r` reaches `P_r`. Putative firing times live in a binary heap whose
stale entries are skipped on pop; after a firing only the channels in the dependency set of the
fired channel are rescaled.
"""

import math

from celery.utils.log import get_task_logger
from django.conf import settings
from heapq import heapify, heappop, heappush
from typing import Optional, Sequence

from app.exceptions import InvalidStateError, StiffnessOverflowError
from app.fine.trajectory import Trajectory, accumulate_window
from app.kinetics.networks import ReactionNetwork
from app.noise.streams import IntervalNoise


logger = get_task_logger(__name__)

INFINITY = math.inf


def check_start(x0: Sequence[float], dt: float):
    if not dt > 0:
        raise ValueError(f'Propagation length must be positive, got {dt}.')

    if not all(math.isfinite(value) for value in x0):
        raise InvalidStateError(f'Start state {list(x0)} is not finite.')


def nrm_propagate(
    net: ReactionNetwork,
    x0: Sequence[float],
    dt: float,
    noise: IntervalNoise,
    start_time: float = 0.0,
    record: bool = True,
    window: Optional[float] = None,
    event_cap: Optional[int] = None,
) -> Trajectory:
    """
    Exact sample path of the network over `[start_time, start_time + dt]`.

    With `window` the trailing average over `[dt - window, dt]` is accumulated on the fly, so
    it is available even when the path is not recorded.
    """
    check_start(x0, dt)
    if window is not None and not 0 < window <= dt:
        raise ValueError(f'Averaging window {window} must lie in (0, {dt}].')

    cap = event_cap if event_cap is not None else settings.SIMULATION['EVENT_CAP']

    rates = net.rate_functions
    dependencies = net.dependencies
    changes = [reaction.changes for reaction in net.reactions]
    channels = net.R

    x = [float(value) for value in x0]
    initial = tuple(x)
    sources = noise.sources(channels)
    gaps = [source.exponential_gap for source in sources]

    # Clock state: internal time at the last rescale, time of that rescale, next arrival.
    internal = [0.0] * channels
    updated_at = [0.0] * channels
    arrival = [gap() for gap in gaps]
    intensity = [rate(x) for rate in rates]
    fires = [0] * channels

    # Entries are (putative time, channel, stamp); an entry is live while its stamp is current.
    stamps = [0] * channels
    queue = [(arrival[r] / intensity[r], r, 0) for r in range(channels) if intensity[r] > 0.0]
    heapify(queue)
    compact_at = 4 * channels + 64

    offsets, states = [], []
    window_start = dt - window if window is not None else INFINITY
    acc = [0.0] * len(x)
    t = 0.0
    events = 0

    while queue:
        tau, fired, stamp = queue[0]
        if stamp != stamps[fired]:
            heappop(queue)
            continue
        if tau > dt:
            break
        heappop(queue)

        events += 1
        if events > cap:
            raise StiffnessOverflowError(noise.interval, cap)

        if tau > window_start:
            accumulate_window(acc, x, t, tau, window_start)

        for i, n in changes[fired]:
            x[i] -= n
        t = tau

        internal[fired] = arrival[fired]
        updated_at[fired] = tau
        arrival[fired] += gaps[fired]()
        fires[fired] += 1

        for s in dependencies[fired]:
            if s != fired:
                internal[s] += intensity[s] * (tau - updated_at[s])
                updated_at[s] = tau
                if internal[s] > arrival[s]:
                    internal[s] = arrival[s]

            w = rates[s](x)
            intensity[s] = w
            stamps[s] += 1
            if w > 0.0:
                heappush(queue, (tau + (arrival[s] - internal[s]) / w, s, stamps[s]))

        if len(queue) > compact_at:
            queue = [entry for entry in queue if entry[2] == stamps[entry[1]]]
            heapify(queue)

        if record:
            offsets.append(tau)
            states.append(tuple(x))

    window_mean = None
    if window is not None:
        accumulate_window(acc, x, t, dt, window_start)
        window_mean = tuple(value / window for value in acc)

    clocks = tuple(
        (min(internal[r] + intensity[r] * (dt - updated_at[r]), arrival[r]), arrival[r])
        for r in range(channels)
    )

    logger.debug(f'Interval {noise.interval}: {events} events over {dt}...')

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
        channel_draws=tuple(source.counter for source in sources),
        clocks=clocks,
    )
