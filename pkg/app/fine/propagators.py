from dataclasses import dataclass
from typing import Optional, Sequence

from app.fine.nrm import nrm_propagate
from app.fine.trajectory import State, Trajectory, homogenize
from app.kinetics.networks import ReactionNetwork
from app.noise.streams import IntervalNoise


@dataclass(frozen=True)
class FineMode:
    """
    Exact fine propagation, or the homogenized one averaging over the trailing
    `fraction * dt` of each interval.
    """
    homogenize_fraction: Optional[float] = None

    def __post_init__(self):
        fraction = self.homogenize_fraction
        if fraction is not None and not 0 < fraction <= 1:
            raise ValueError(f'Homogenization fraction must lie in (0, 1], got {fraction}.')

    @property
    def homogenized(self) -> bool:
        return self.homogenize_fraction is not None

    def window(self, dt: float) -> Optional[float]:
        return self.homogenize_fraction * dt if self.homogenized else None

    def __str__(self):
        return f'homogenized({self.homogenize_fraction})' if self.homogenized else 'exact'


EXACT = FineMode()


@dataclass(frozen=True)
class FineResult:
    """
    `value` is what the fine propagator reports (the window mean in homogenized mode);
    `end_state` is the unfiltered state at the end of the interval.
    """
    value: State
    end_state: State
    event_count: int
    trajectory: Optional[Trajectory] = None


def fine_endpoint(
    net: ReactionNetwork,
    x0: Sequence[float],
    dt: float,
    noise: IntervalNoise,
    mode: FineMode = EXACT,
    start_time: float = 0.0,
    record: bool = False,
    event_cap: Optional[int] = None,
) -> FineResult:
    """
    Run the exact path first, then report its end state or its trailing average.
    """
    window = mode.window(dt)
    traj = nrm_propagate(
        net, x0, dt, noise,
        start_time=start_time,
        record=record,
        window=window,
        event_cap=event_cap,
    )

    value = homogenize(traj, window) if mode.homogenized else traj.final_state

    return FineResult(
        value=value,
        end_state=traj.final_state,
        event_count=traj.event_count,
        trajectory=traj if record else None,
    )
