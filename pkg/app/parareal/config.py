from dataclasses import dataclass, field
from django.conf import settings
from typing import Any, Dict, Optional

from app.coarse.steppers import AdaptiveImplicit, BackwardEuler, CoarseMethod, NewtonConfig, coarse_method
from app.fine.propagators import EXACT, FineMode


STOP_TOLERANCE = 'tolerance-met'
STOP_MAX_ITERATIONS = 'K_max'
STOP_PREFIX_EXACT = 'prefix-exact'


@dataclass(frozen=True)
class PararealConfig:
    """
    Interval `n` (1-based) covers `[(n - 1) * dt, n * dt]` with `dt = final_time / intervals`
    and is driven by the noise streams keyed `(seed, n, ·)`.
    """
    final_time: float
    intervals: int
    max_iterations: int = 20
    residual_tolerance: float = 1e-3
    fine_mode: FineMode = EXACT
    coarse: CoarseMethod = field(default_factory=BackwardEuler)
    newton: NewtonConfig = field(default_factory=NewtonConfig)
    seed: int = 0
    event_cap: Optional[int] = None

    def __post_init__(self):
        if not self.final_time > 0:
            raise ValueError('Final time must be positive.')

        if self.intervals <= 0 or self.max_iterations <= 0:
            raise ValueError('Interval and iteration counts must be positive.')

        if not self.residual_tolerance > 0:
            raise ValueError('Residual tolerance must be positive.')

    @property
    def dt(self) -> float:
        return self.final_time / self.intervals

    @property
    def window(self) -> Optional[float]:
        return self.fine_mode.window(self.dt)

    def start_time(self, interval: int) -> float:
        return (interval - 1) * self.dt

    def times(self):
        return [n * self.dt for n in range(self.intervals + 1)]

    @classmethod
    def from_options(cls, options: Dict[str, Any]) -> 'PararealConfig':
        """
        Build a config from flat run options, filling gaps from `PARAREAL_DEFAULTS`.
        """
        values = {**settings.PARAREAL_DEFAULTS, **{k: v for k, v in options.items() if v is not None}}

        return cls(
            final_time=float(values['final_time']),
            intervals=int(values['intervals']),
            max_iterations=int(values['max_iterations']),
            residual_tolerance=float(values['residual_tolerance']),
            fine_mode=FineMode(values.get('homogenize')),
            coarse=coarse_method(values['coarse'], float(values['coarse_rtol']), float(values['coarse_atol'])),
            newton=NewtonConfig.from_settings(),
            seed=int(values['seed']),
            event_cap=values.get('event_cap'),
        )

    def to_options(self) -> Dict[str, Any]:
        """
        Flat, JSON-friendly echo of the config.
        """
        options = {
            'final_time': self.final_time,
            'intervals': self.intervals,
            'max_iterations': self.max_iterations,
            'residual_tolerance': self.residual_tolerance,
            'homogenize': self.fine_mode.homogenize_fraction,
            'coarse': self.coarse.tag,
            'seed': self.seed,
            'event_cap': self.event_cap,
        }

        if isinstance(self.coarse, AdaptiveImplicit):
            options['coarse_rtol'] = self.coarse.rel_tol
            options['coarse_atol'] = self.coarse.abs_tol

        return options
