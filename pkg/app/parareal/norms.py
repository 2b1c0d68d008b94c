"""
Relative norms used to monitor parareal iterations.

Both take whole rows `v[0..N]` and return `max_n D^{-1/2} ||(a_n - b_n) / (1 + b_n)||` with
elementwise division.
"""

import math
import numpy as np

from typing import Sequence

from app.exceptions import DegenerateDenominatorError


def _relative_max(a: Sequence, b: Sequence) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)

    if a.shape != b.shape:
        raise ValueError(f'Rows have different shapes: {a.shape} and {b.shape}.')

    if a.ndim == 1:
        a, b = a[np.newaxis, :], b[np.newaxis, :]

    denominator = 1.0 + b
    if np.any(denominator == 0.0):
        raise DegenerateDenominatorError('A component of 1 + v is zero; the relative norm is undefined.')

    per_point = np.linalg.norm((a - b) / denominator, axis=1)
    return float(per_point.max()) / math.sqrt(a.shape[1])


def residual_norm(v_prev: Sequence, v_next: Sequence) -> float:
    """
    Preconditioned residual between two consecutive iterate rows.
    """
    return _relative_max(v_prev, v_next)


def error_norm(v_row: Sequence, u: Sequence) -> float:
    """
    Relative error of an iterate row against the reference states.
    """
    return _relative_max(v_row, u)
