"""
Propensity forms.

The set of forms is closed: every model of the project is expressed with mass action,
Hill repression, scaled linear and constant channels. Each form knows how to build a fast
scalar rate function, its partial derivatives and its maximum over a box. Clamping against
negative values and against reactions that would drive a copy number below zero is applied
by `app.kinetics.networks.Reaction`, which owns the stoichiometry.

A new form needs `tag`, `species`, `rate_function`, `partials`, `box_maximum`, `scaled` and
a branch in `app.io.serializers.PropensitySerializer`.
"""

import math

from dataclasses import dataclass, replace
from typing import Callable, ClassVar, Dict, Optional, Sequence, Tuple, Union

from app.exceptions import InvalidStateError


RateFunction = Callable[[Sequence[float]], float]


@dataclass(frozen=True)
class MassAction:
    rate_constant: float
    reactant_indices: Tuple[int, ...] = ()

    tag: ClassVar[str] = 'mass_action'

    def __post_init__(self):
        if self.rate_constant < 0:
            raise ValueError('Mass action rate constant must be nonnegative.')

        if len(self.reactant_indices) > 2:
            raise ValueError('Mass action supports at most two reactants.')

        object.__setattr__(self, 'reactant_indices', tuple(sorted(int(i) for i in self.reactant_indices)))

    @property
    def species(self) -> Tuple[int, ...]:
        return tuple(sorted(set(self.reactant_indices)))

    def rate_function(self, volume: float) -> RateFunction:
        k = self.rate_constant
        reactants = self.reactant_indices

        if not reactants:
            value = k * volume
            return lambda x: value

        if len(reactants) == 1:
            i = reactants[0]
            return lambda x: k * x[i]

        i, j = reactants
        if i == j:
            return lambda x: k * x[i] * (x[i] - 1.0) / volume

        return lambda x: k * x[i] * x[j] / volume

    def partials(self, x: Sequence[float], volume: float) -> Dict[int, float]:
        k = self.rate_constant
        reactants = self.reactant_indices

        if not reactants:
            return {}

        if len(reactants) == 1:
            return {reactants[0]: k}

        i, j = reactants
        if i == j:
            return {i: k * (2.0 * x[i] - 1.0) / volume}

        return {i: k * x[j] / volume, j: k * x[i] / volume}

    def box_maximum(self, lower: Sequence[int], upper: Sequence[int], volume: float) -> float:
        # x(x - 1) and x*y are nondecreasing on the nonnegative integers.
        return max(self.rate_function(volume)(upper), 0.0)

    def scaled(self, factor: float) -> 'MassAction':
        return replace(self, rate_constant=self.rate_constant * factor)


@dataclass(frozen=True)
class HillRepression:
    """
    Production repressed by a cooperative (second order) repressor, `a / (b + x_rep^2)`.
    """
    a: float
    b: float
    repressor_index: int

    tag: ClassVar[str] = 'hill_repression'

    def __post_init__(self):
        if self.a < 0 or self.b <= 0:
            raise ValueError('Hill repression requires a >= 0 and b > 0.')

    @property
    def species(self) -> Tuple[int, ...]:
        return (self.repressor_index,)

    def rate_function(self, volume: float) -> RateFunction:
        a, b, r = self.a, self.b, self.repressor_index
        return lambda x: a / (b + x[r] * x[r])

    def partials(self, x: Sequence[float], volume: float) -> Dict[int, float]:
        y = x[self.repressor_index]
        denominator = self.b + y * y
        return {self.repressor_index: -2.0 * self.a * y / (denominator * denominator)}

    def box_maximum(self, lower: Sequence[int], upper: Sequence[int], volume: float) -> float:
        return self.rate_function(volume)(lower)

    def scaled(self, factor: float) -> 'HillRepression':
        return replace(self, a=self.a * factor)


@dataclass(frozen=True)
class ScaledLinear:
    """
    First order channel `coefficient * x_i`; diffusion jumps and degradation.
    """
    coefficient: float
    species_index: int

    tag: ClassVar[str] = 'scaled_linear'

    def __post_init__(self):
        if self.coefficient < 0:
            raise ValueError('Scaled linear coefficient must be nonnegative.')

    @property
    def species(self) -> Tuple[int, ...]:
        return (self.species_index,)

    def rate_function(self, volume: float) -> RateFunction:
        c, i = self.coefficient, self.species_index
        return lambda x: c * x[i]

    def partials(self, x: Sequence[float], volume: float) -> Dict[int, float]:
        return {self.species_index: self.coefficient}

    def box_maximum(self, lower: Sequence[int], upper: Sequence[int], volume: float) -> float:
        return max(self.rate_function(volume)(upper), 0.0)

    def scaled(self, factor: float) -> 'ScaledLinear':
        return replace(self, coefficient=self.coefficient * factor)


@dataclass(frozen=True)
class Constant:
    value: float

    tag: ClassVar[str] = 'constant'

    def __post_init__(self):
        if self.value < 0:
            raise ValueError('Constant propensity must be nonnegative.')

    @property
    def species(self) -> Tuple[int, ...]:
        return ()

    def rate_function(self, volume: float) -> RateFunction:
        value = self.value
        return lambda x: value

    def partials(self, x: Sequence[float], volume: float) -> Dict[int, float]:
        return {}

    def box_maximum(self, lower: Sequence[int], upper: Sequence[int], volume: float) -> float:
        return self.value

    def scaled(self, factor: float) -> 'Constant':
        return replace(self, value=self.value * factor)


PropensityForm = Union[MassAction, HillRepression, ScaledLinear, Constant]

PROPENSITY_FORMS = {form.tag: form for form in (MassAction, HillRepression, ScaledLinear, Constant)}


def consumption_of(stoich_column: Sequence[int]) -> Tuple[Tuple[int, int], ...]:
    """
    Return `(species, amount)` pairs a firing removes, i.e. the positive entries of `N_r`.
    """
    return tuple((i, int(n)) for i, n in enumerate(stoich_column) if n > 0)


def guarded(raw: RateFunction, consumption: Tuple[Tuple[int, int], ...]) -> RateFunction:
    """
    Wrap a raw rate function with the clamp rules.

    The result is zero whenever firing would leave a negative copy number and never negative.
    """
    if not consumption:
        def rate(x):
            value = raw(x)
            return value if value > 0.0 else 0.0

        return rate

    def rate(x):
        for i, amount in consumption:
            if x[i] < amount:
                return 0.0
        value = raw(x)
        return value if value > 0.0 else 0.0

    return rate


def evaluate_propensity(
    form: PropensityForm,
    x: Sequence[float],
    volume: float,
    stoich_column: Optional[Sequence[int]] = None,
) -> float:
    """
    Evaluate a propensity form with clamping.

    Without a stoichiometric column only the nonnegativity clamp applies.
    """
    if not all(math.isfinite(value) for value in x):
        raise InvalidStateError(f'State {list(x)} is not finite.')

    consumption = consumption_of(stoich_column) if stoich_column is not None else ()

    return guarded(form.rate_function(volume), consumption)(x)
