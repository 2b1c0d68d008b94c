from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from app.fine.propagators import FineMode, FineResult, fine_endpoint
from app.kinetics.networks import ReactionNetwork
from app.noise.streams import IntervalNoise


@dataclass(frozen=True)
class FineJob:
    """
    One fine evaluation: interval `interval` started from `start`.
    """
    interval: int
    start: Tuple[float, ...]
    start_time: float
    dt: float
    seed: int
    mode: FineMode
    event_cap: Optional[int] = None

    def to_payload(self) -> Dict:
        return {
            'interval': self.interval,
            'start': list(self.start),
            'start_time': self.start_time,
            'dt': self.dt,
            'seed': self.seed,
            'homogenize': self.mode.homogenize_fraction,
            'event_cap': self.event_cap,
        }

    @classmethod
    def from_payload(cls, payload: Dict) -> 'FineJob':
        return cls(
            interval=int(payload['interval']),
            start=tuple(float(v) for v in payload['start']),
            start_time=float(payload['start_time']),
            dt=float(payload['dt']),
            seed=int(payload['seed']),
            mode=FineMode(payload['homogenize']),
            event_cap=payload['event_cap'],
        )


def run_job(net: ReactionNetwork, job: FineJob, record: bool = False) -> FineResult:
    return fine_endpoint(
        net,
        job.start,
        job.dt,
        IntervalNoise(job.seed, job.interval),
        job.mode,
        start_time=job.start_time,
        record=record,
        event_cap=job.event_cap,
    )


def result_to_payload(result: FineResult) -> Dict:
    return {
        'value': list(result.value),
        'end_state': list(result.end_state),
        'event_count': result.event_count,
    }


def result_from_payload(payload: Dict) -> FineResult:
    return FineResult(
        value=tuple(float(v) for v in payload['value']),
        end_state=tuple(float(v) for v in payload['end_state']),
        event_count=int(payload['event_count']),
    )
