"""
Chemical master equation on a truncated state space.

The generator is assembled as a sparse matrix; transitions leaving the box are dropped from
both the target and the outflow, so the truncated chain is itself a Markov chain on the box.
Transient distributions are computed by uniformization.
"""

import numpy as np

from dataclasses import dataclass
from django.conf import settings
from scipy import sparse
from scipy.stats import poisson
from typing import Optional, Sequence, Tuple

from app.exceptions import StateSpaceTooLargeError
from app.kinetics.networks import ReactionNetwork


UNIFORMIZATION_TAIL = 1e-12


@dataclass(frozen=True)
class TruncatedStateSpace:
    lower: Tuple[int, ...]
    upper: Tuple[int, ...]
    cap: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, 'lower', tuple(int(v) for v in self.lower))
        object.__setattr__(self, 'upper', tuple(int(v) for v in self.upper))

        if len(self.lower) != len(self.upper):
            raise ValueError('Box bounds must have equal lengths.')

        if any(low < 0 or low > high for low, high in zip(self.lower, self.upper)):
            raise ValueError('Box bounds must satisfy 0 <= lower <= upper.')

        cap = self.cap if self.cap is not None else settings.SIMULATION['STATE_SPACE_CAP']
        if self.size > cap:
            raise StateSpaceTooLargeError(f'Truncated state space has {self.size} states, the cap is {cap}.')

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(high - low + 1 for low, high in zip(self.lower, self.upper))

    @property
    def size(self) -> int:
        return int(np.prod(self.shape, dtype=np.int64))

    def contains(self, x: Sequence[float]) -> bool:
        return all(low <= value <= high for low, value, high in zip(self.lower, x, self.upper))

    def index(self, x: Sequence[float]) -> int:
        if not self.contains(x):
            raise ValueError(f'State {list(x)} lies outside the truncated state space.')

        offsets = [int(value) - low for value, low in zip(x, self.lower)]
        return int(np.ravel_multi_index(offsets, self.shape))

    def state(self, index: int) -> Tuple[int, ...]:
        offsets = np.unravel_index(index, self.shape)
        return tuple(int(offset) + low for offset, low in zip(offsets, self.lower))

    def states(self) -> np.ndarray:
        """
        All states as rows, in enumeration order.
        """
        grids = np.indices(self.shape).reshape(len(self.shape), -1).T
        return grids + np.asarray(self.lower, dtype=np.int64)


@dataclass(frozen=True)
class DistributionVector:
    probabilities: np.ndarray
    time: float
    space: TruncatedStateSpace

    def marginal(self, species: int) -> np.ndarray:
        """
        Marginal probabilities of one species over `lower..upper`.
        """
        tensor = self.probabilities.reshape(self.space.shape)
        axes = tuple(i for i in range(tensor.ndim) if i != species)
        return tensor.sum(axis=axes) if axes else tensor

    def mean(self) -> np.ndarray:
        return self.probabilities @ self.space.states()


def point_mass(space: TruncatedStateSpace, x0: Sequence[float], time: float = 0.0) -> DistributionVector:
    p = np.zeros(space.size)
    p[space.index(x0)] = 1.0
    return DistributionVector(p, time, space)


def cme_generator(net: ReactionNetwork, space: TruncatedStateSpace) -> sparse.csr_matrix:
    """
    Sparse `A` with `dp/dt = A p`; column `j` holds the outflow of state `j`.
    """
    if len(space.lower) != net.D:
        raise ValueError(f'State space has {len(space.lower)} dimensions, the network has {net.D} species.')

    states = space.states()
    rows, cols, values = [], [], []
    diagonal = np.zeros(space.size)

    for j, x in enumerate(states):
        state = [float(v) for v in x]
        for rate, reaction in zip(net.rate_functions, net.reactions):
            w = rate(state)
            if w <= 0.0:
                continue

            target = reaction.apply(state)
            if not space.contains(target):
                continue

            rows.append(space.index(target))
            cols.append(j)
            values.append(w)
            diagonal[j] -= w

    rows.extend(range(space.size))
    cols.extend(range(space.size))
    values.extend(diagonal)

    return sparse.coo_matrix((values, (rows, cols)), shape=(space.size, space.size)).tocsr()


def cme_evolve(generator: sparse.spmatrix, p0: DistributionVector, t: float) -> DistributionVector:
    """
    `p(t) = Σ_k Poisson(k; λt) P^k p0` with `P = I + A / λ` and `λ = max |A_jj|`, summed
    until the remaining Poisson mass is below `1e-12`.
    """
    if t < 0:
        raise ValueError(f'Time must be nonnegative, got {t}.')

    p = np.asarray(p0.probabilities, dtype=float).copy()
    rate = float(np.max(np.abs(generator.diagonal()))) if generator.shape[0] else 0.0

    if t == 0 or rate == 0.0:
        return DistributionVector(p / p.sum(), p0.time + t, p0.space)

    mean = rate * t
    terms = int(poisson.isf(UNIFORMIZATION_TAIL, mean)) + 1
    weights = poisson.pmf(np.arange(terms + 1), mean)
    step = sparse.identity(generator.shape[0], format='csr') + generator / rate

    result = weights[0] * p
    for k in range(1, terms + 1):
        p = step @ p
        result += weights[k] * p

    result = np.maximum(result, 0.0)
    return DistributionVector(result / result.sum(), p0.time + t, p0.space)
