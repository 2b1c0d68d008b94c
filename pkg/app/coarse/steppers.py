"""
Coarse propagators for one parareal interval.

- `BackwardEuler`: one implicit Euler step solved by (damped) Newton iteration.
- `LinearizedBackwardEuler`: exactly one Newton step from the start state.
- `AdaptiveImplicit`: sub-stepped TR-BDF2 (an L-stable, stiffly accurate ESDIRK pair of
  order 2 with an embedded order 3 solution) under relative/absolute tolerances.
"""

import math
import numpy as np

from celery.utils.log import get_task_logger
from dataclasses import dataclass
from django.conf import settings
from typing import Callable, Optional, Sequence, Union

from app.coarse.rre import rre_jacobian, rre_rhs
from app.exceptions import CoarseFailureError, InvalidStateError, SingularJacobianError
from app.kinetics.networks import ReactionNetwork


logger = get_task_logger(__name__)

DAMPING_NONE = 'none'
DAMPING_HALVING = 'halving'


@dataclass(frozen=True)
class NewtonConfig:
    max_iterations: int = 25
    residual_tolerance: float = 1e-10
    damping: str = DAMPING_HALVING
    max_halvings: int = 10

    def __post_init__(self):
        if self.max_iterations <= 0 or self.residual_tolerance <= 0 or self.max_halvings < 0:
            raise ValueError('Newton settings must be positive.')

        if self.damping not in (DAMPING_NONE, DAMPING_HALVING):
            raise ValueError(f'Damping {self.damping} is not supported.')

    @classmethod
    def from_settings(cls) -> 'NewtonConfig':
        return cls(**settings.NEWTON_DEFAULTS)


@dataclass(frozen=True)
class BackwardEuler:
    tag = 'be'


@dataclass(frozen=True)
class LinearizedBackwardEuler:
    tag = 'lbe'


@dataclass(frozen=True)
class AdaptiveImplicit:
    rel_tol: float = 1e-6
    abs_tol: float = 1e-8
    max_steps: int = 100000

    tag = 'adaptive'

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError('Adaptive tolerances must be positive.')


CoarseMethod = Union[BackwardEuler, LinearizedBackwardEuler, AdaptiveImplicit]


def coarse_method(tag: str, rel_tol: float = 1e-6, abs_tol: float = 1e-8) -> CoarseMethod:
    """
    Build a coarse method from its CLI tag.
    """
    if tag == BackwardEuler.tag:
        return BackwardEuler()

    if tag == LinearizedBackwardEuler.tag:
        return LinearizedBackwardEuler()

    if tag == AdaptiveImplicit.tag:
        return AdaptiveImplicit(rel_tol, abs_tol)

    raise ValueError(f'Coarse method {tag} is not supported.')


def _solve(matrix: np.ndarray, vector: np.ndarray) -> np.ndarray:
    try:
        step = np.linalg.solve(matrix, vector)
    except np.linalg.LinAlgError as err:
        raise SingularJacobianError(f'Newton matrix is singular: {err}') from err

    if not np.all(np.isfinite(step)):
        raise SingularJacobianError('Newton matrix is numerically singular.')

    return step


def _newton(
    residual: Callable[[np.ndarray], np.ndarray],
    matrix: Callable[[np.ndarray], np.ndarray],
    guess: np.ndarray,
    newton: NewtonConfig,
) -> np.ndarray:
    """
    Solve `residual(x) = 0` starting from `guess`.
    """
    x = guess.copy()
    g = residual(x)

    for _ in range(newton.max_iterations):
        if np.linalg.norm(g) <= newton.residual_tolerance * (1.0 + np.linalg.norm(x)):
            return x

        step = _solve(matrix(x), -g)

        alpha = 1.0
        candidate = x + step
        g_candidate = residual(candidate)
        if newton.damping == DAMPING_HALVING:
            halvings = 0
            while np.linalg.norm(g_candidate) >= np.linalg.norm(g) and halvings < newton.max_halvings:
                alpha *= 0.5
                halvings += 1
                candidate = x + alpha * step
                g_candidate = residual(candidate)

        x, g = candidate, g_candidate

    if np.linalg.norm(g) <= newton.residual_tolerance * (1.0 + np.linalg.norm(x)):
        return x

    raise CoarseFailureError(
        f'Newton iteration did not converge in {newton.max_iterations} iterations '
        f'(residual {np.linalg.norm(g):.3e}).'
    )


def _implicit_stage(
    net: ReactionNetwork,
    base: np.ndarray,
    gamma_h: float,
    guess: np.ndarray,
    newton: NewtonConfig,
) -> np.ndarray:
    """
    Solve `y - gamma_h * f(y) = base`.
    """
    identity = np.eye(net.D)
    return _newton(
        lambda y: y - gamma_h * rre_rhs(net, y) - base,
        lambda y: identity - gamma_h * rre_jacobian(net, y),
        guess,
        newton,
    )


def backward_euler_step(net: ReactionNetwork, x0: np.ndarray, dt: float, newton: NewtonConfig) -> np.ndarray:
    return _implicit_stage(net, x0, dt, x0, newton)


def linearized_backward_euler_step(net: ReactionNetwork, x0: np.ndarray, dt: float) -> np.ndarray:
    matrix = np.eye(net.D) - dt * rre_jacobian(net, x0)
    return x0 + _solve(matrix, dt * rre_rhs(net, x0))


# TR-BDF2 coefficients.
_GAMMA = 2.0 - math.sqrt(2.0)
_D = _GAMMA / 2.0
_W = math.sqrt(2.0) / 4.0
_ERROR_WEIGHTS = (_W - (1.0 - _W) / 3.0, _W - (3.0 * _W + 1.0) / 3.0, _D - _D / 3.0)


def _tr_bdf2_step(net: ReactionNetwork, y: np.ndarray, h: float, newton: NewtonConfig):
    """
    Return the order 2 solution and the local error estimate of one TR-BDF2 step.
    """
    k1 = rre_rhs(net, y)

    stage = _implicit_stage(net, y + h * _D * k1, h * _D, y + h * _GAMMA * k1, newton)
    k2 = rre_rhs(net, stage)

    base = y + h * _W * (k1 + k2)
    solution = _implicit_stage(net, base, h * _D, stage, newton)
    k3 = rre_rhs(net, solution)

    error = h * (_ERROR_WEIGHTS[0] * k1 + _ERROR_WEIGHTS[1] * k2 + _ERROR_WEIGHTS[2] * k3)

    return solution, error


def adaptive_implicit_solve(
    net: ReactionNetwork,
    x0: np.ndarray,
    dt: float,
    method: AdaptiveImplicit,
    newton: NewtonConfig,
) -> np.ndarray:
    """
    Integrate over `[0, dt]` with step size control on the embedded error estimate.
    """
    y = x0.copy()
    t = 0.0
    h = dt
    f0 = rre_rhs(net, y)
    scale0 = method.abs_tol + method.rel_tol * np.abs(y)
    derivative = np.sqrt(np.mean((f0 / scale0) ** 2))
    if derivative > 0:
        h = min(dt, 0.01 / derivative)

    steps = 0
    while t < dt:
        steps += 1
        if steps > method.max_steps:
            raise CoarseFailureError(f'Adaptive coarse solver exceeded {method.max_steps} steps.')

        h = min(h, dt - t)
        try:
            candidate, error = _tr_bdf2_step(net, y, h, newton)
        except CoarseFailureError:
            h *= 0.25
            if h <= 1e-14 * dt:
                raise
            continue

        scale = method.abs_tol + method.rel_tol * np.maximum(np.abs(y), np.abs(candidate))
        norm = float(np.sqrt(np.mean((error / scale) ** 2)))

        if norm <= 1.0:
            t = dt if dt - t <= h else t + h
            y = candidate

        factor = 5.0 if norm == 0.0 else min(5.0, max(0.2, 0.9 * norm ** (-1.0 / 3.0)))
        h *= factor
        if h <= 1e-14 * dt:
            raise CoarseFailureError('Adaptive coarse step size underflow.')

    return y


def coarse_step(
    net: ReactionNetwork,
    x0: Sequence[float],
    dt: float,
    method: CoarseMethod,
    newton: Optional[NewtonConfig] = None,
) -> np.ndarray:
    """
    Propagate the reaction-rate equations over one coarse interval of length `dt`.
    """
    if not dt > 0:
        raise ValueError(f'Coarse step must be positive, got {dt}.')

    x = np.asarray(x0, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InvalidStateError(f'Coarse start state {x.tolist()} is not finite.')

    newton = newton or NewtonConfig.from_settings()

    if isinstance(method, BackwardEuler):
        return backward_euler_step(net, x, dt, newton)

    if isinstance(method, LinearizedBackwardEuler):
        return linearized_backward_euler_step(net, x, dt)

    if isinstance(method, AdaptiveImplicit):
        return adaptive_implicit_solve(net, x, dt, method, newton)

    raise ValueError(f'Coarse method {method} is not supported.')
