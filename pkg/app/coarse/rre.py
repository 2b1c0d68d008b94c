"""
Reaction-rate equations `dx/dt = -Σ_r N_r w_r(x)` and their analytic Jacobian.
"""

import numpy as np

from typing import Sequence

from app.kinetics.networks import ReactionNetwork


def rre_rhs(net: ReactionNetwork, x: Sequence[float]) -> np.ndarray:
    """
    Right-hand side of the reaction-rate equations with clamped propensities.
    """
    w = net.propensities(list(map(float, x)))
    return -(net.stoichiometry @ w)


def rre_jacobian(net: ReactionNetwork, x: Sequence[float]) -> np.ndarray:
    """
    `J_ij = d rhs_i / d x_j`.

    A channel that is clamped at `x` (zero rate, or a consumed species below its
    stoichiometric amount) contributes nothing: the derivative is taken from the clamped side.
    """
    state = list(map(float, x))
    w = net.propensities(state)
    gradient = np.zeros((net.R, net.D))

    for r, reaction in enumerate(net.reactions):
        if w[r] <= 0.0:
            continue

        for j, value in reaction.propensity.partials(state, net.volume).items():
            gradient[r, j] = value

    return -(net.stoichiometry @ gradient)
