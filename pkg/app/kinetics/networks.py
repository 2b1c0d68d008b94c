import math
import numpy as np

from dataclasses import dataclass, field
from functools import cached_property
from scipy.linalg import null_space
from typing import FrozenSet, List, Sequence, Tuple

from app.exceptions import InvalidStateError
from app.kinetics.propensities import PropensityForm, RateFunction, consumption_of, guarded


@dataclass(frozen=True)
class Reaction:
    """
    One reaction channel. Firing maps the state `x` to `x - stoich_column`.
    """
    propensity: PropensityForm
    stoich_column: Tuple[int, ...]
    name: str = ''

    def __post_init__(self):
        object.__setattr__(self, 'stoich_column', tuple(int(n) for n in self.stoich_column))

    @cached_property
    def consumption(self) -> Tuple[Tuple[int, int], ...]:
        return consumption_of(self.stoich_column)

    @cached_property
    def changes(self) -> Tuple[Tuple[int, int], ...]:
        """
        Sparse `(species, entry)` view of the nonzero stoichiometric entries.
        """
        return tuple((i, n) for i, n in enumerate(self.stoich_column) if n != 0)

    @cached_property
    def reads(self) -> FrozenSet[int]:
        """
        Species whose value the clamped propensity depends on.
        """
        return frozenset(self.propensity.species) | frozenset(i for i, _ in self.consumption)

    def rate_function(self, volume: float) -> RateFunction:
        return guarded(self.propensity.rate_function(volume), self.consumption)

    def apply(self, x: Sequence[float]) -> List[float]:
        state = list(x)
        for i, n in self.changes:
            state[i] -= n
        return state


@dataclass(frozen=True)
class ReactionNetwork:
    species_names: Tuple[str, ...]
    reactions: Tuple[Reaction, ...]
    volume: float = 1.0
    name: str = field(default='', compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'species_names', tuple(self.species_names))
        object.__setattr__(self, 'reactions', tuple(self.reactions))

        if not self.volume > 0:
            raise ValueError('Network volume must be positive.')

        for r, reaction in enumerate(self.reactions):
            if len(reaction.stoich_column) != self.D:
                raise ValueError(f'Reaction {r} has {len(reaction.stoich_column)} stoichiometric entries, '
                                 f'expected {self.D}.')

            if any(not 0 <= i < self.D for i in reaction.propensity.species):
                raise ValueError(f'Reaction {r} reads a species index outside [0, {self.D}).')

    @property
    def D(self) -> int:
        return len(self.species_names)

    @property
    def R(self) -> int:
        return len(self.reactions)

    @cached_property
    def stoichiometry(self) -> np.ndarray:
        """
        The `D x R` stoichiometric matrix; column `r` is `N_r`.
        """
        matrix = np.zeros((self.D, self.R), dtype=np.int64)
        for r, reaction in enumerate(self.reactions):
            matrix[:, r] = reaction.stoich_column
        return matrix

    @cached_property
    def rate_functions(self) -> Tuple[RateFunction, ...]:
        return tuple(reaction.rate_function(self.volume) for reaction in self.reactions)

    @cached_property
    def dependencies(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(sorted(channels)) for channels in dependency_sets(self))

    def propensities(self, x: Sequence[float]) -> np.ndarray:
        _check_finite(x)
        return np.array([rate(x) for rate in self.rate_functions], dtype=float)

    def scaled(self, factor: float) -> 'ReactionNetwork':
        """
        Return a copy with every propensity multiplied by `factor`.
        """
        reactions = tuple(
            Reaction(reaction.propensity.scaled(factor), reaction.stoich_column, reaction.name)
            for reaction in self.reactions
        )
        return ReactionNetwork(self.species_names, reactions, self.volume, self.name)


def _check_finite(x: Sequence[float]):
    if not all(math.isfinite(value) for value in x):
        raise InvalidStateError(f'State {list(x)} is not finite.')


def total_intensity(net: ReactionNetwork, x: Sequence[float]) -> float:
    """
    Sum of all clamped propensities at `x`.
    """
    _check_finite(x)
    return math.fsum(rate(x) for rate in net.rate_functions)


def dependency_sets(net: ReactionNetwork) -> Tuple[FrozenSet[int], ...]:
    """
    For each channel `r`, the channels whose propensity reads a species changed by firing `r`.

    Every set contains `r` itself.
    """
    readers = {}
    for s, reaction in enumerate(net.reactions):
        for species in reaction.reads:
            readers.setdefault(species, set()).add(s)

    sets = []
    for r, reaction in enumerate(net.reactions):
        affected = {r}
        for species, _ in reaction.changes:
            affected.update(readers.get(species, ()))
        sets.append(frozenset(affected))

    return tuple(sets)


def conservation_laws(net: ReactionNetwork) -> np.ndarray:
    """
    Return an orthonormal basis (as rows) of vectors `c` with `c^T N_r = 0` for every channel.
    """
    if net.R == 0:
        return np.eye(net.D)

    return null_space(net.stoichiometry.T.astype(float)).T
