class SimulationError(Exception):
    """
    Base class of every error raised by the simulation engine.
    """


class InvalidStateError(SimulationError, ValueError):
    """
    A state vector holds non-finite entries or violates a solver precondition.
    """


class StiffnessOverflowError(SimulationError, RuntimeError):
    """
    The fine solver exceeded its event budget within one interval.
    """

    def __init__(self, interval: int, event_cap: int):
        self.interval = interval
        self.event_cap = event_cap

        super().__init__(
            f'Interval {interval} exceeded the cap of {event_cap} reaction events; '
            'the model is too stiff for the exact fine solver, consider the homogenized mode '
            'or a larger number of intervals.'
        )


class BoxViolationError(SimulationError, ValueError):
    """
    A path left the bounding box declared for the thinning simulator or a diagnostic.
    """


class CoarseFailureError(SimulationError, RuntimeError):
    """
    The coarse propagator could not produce a step.
    """


class SingularJacobianError(CoarseFailureError):
    """
    The Newton matrix of an implicit coarse step is singular.
    """


class DegenerateDenominatorError(SimulationError, ValueError):
    """
    A relative norm met a component with `1 + v == 0`.
    """


class StateSpaceTooLargeError(SimulationError, ValueError):
    """
    A truncated state space exceeds the configured cap.
    """


class SpecificationError(SimulationError, ValueError):
    """
    A model or run specification failed validation.
    """
