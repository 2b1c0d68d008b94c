"""
CSV and manifest writers.

Numbers are written with 17 significant digits so a file read back reproduces the floats
bit for bit.
"""

import json
import os
import numpy as np
import pandas as pd
import tempfile

from celery.utils.log import get_task_logger
from typing import Any, Dict, Optional, Sequence

from app.fine.trajectory import Trajectory


logger = get_task_logger(__name__)

FLOAT_FORMAT = '%.17g'

CONVERGENCE_CSV = 'convergence.csv'
REFERENCE_CSV = 'reference.csv'
REFERENCE_PATH_CSV = 'reference_path.csv'
SCALING_CSV = 'scaling.csv'
OMEGA_SCALING_CSV = 'omega_scaling.csv'
MANIFEST_JSON = 'manifest.json'


def iteration_csv(k: int) -> str:
    return f'iteration_{k}.csv'


def iterates_csv() -> str:
    return 'iterates.csv'


def _write_frame(df: pd.DataFrame, directory: str, filename: str) -> str:
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, filename)

    df.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.info(f'Wrote {path}...')

    return path


def convergence_frame(rows: Sequence) -> pd.DataFrame:
    """
    `rows` are `(iteration, residual, error)`; the error column is dropped when no reference
    was given.
    """
    df = pd.DataFrame(list(rows), columns=['iteration', 'residual', 'error'])
    if df['error'].isna().all():
        df = df.drop(columns=['error'])

    return df


def write_convergence(directory: str, rows: Sequence) -> str:
    return _write_frame(convergence_frame(rows), directory, CONVERGENCE_CSV)


def states_frame(times: Sequence[float], states: np.ndarray, species_names: Sequence[str]) -> pd.DataFrame:
    df = pd.DataFrame(np.asarray(states, dtype=float), columns=list(species_names))
    df.insert(0, 't', list(times))
    return df


def write_states(
    directory: str,
    filename: str,
    times: Sequence[float],
    states: np.ndarray,
    species_names: Sequence[str],
) -> str:
    """
    Write grid states `(t_n, x_n)`, one row per interval boundary.
    """
    return _write_frame(states_frame(times, states, species_names), directory, filename)


def write_trajectory(directory: str, filename: str, trajectories: Sequence[Trajectory], species_names) -> str:
    """
    Concatenate recorded per-interval paths into one `(t, species...)` table.
    """
    frames = [traj.to_frame(species_names) for traj in trajectories]
    df = pd.concat(frames, ignore_index=True) if frames else pd.DataFrame(columns=['t', *species_names])

    return _write_frame(df, directory, filename)


def write_iterates(directory: str, times: Sequence[float], iterates: Sequence[np.ndarray], species_names) -> str:
    frames = []
    for k, row in enumerate(iterates):
        df = states_frame(times, row, species_names)
        df.insert(0, 'iteration', k)
        frames.append(df)

    return _write_frame(pd.concat(frames, ignore_index=True), directory, iterates_csv())


def write_scaling(directory: str, rows: Sequence) -> str:
    df = pd.DataFrame(list(rows), columns=['size', 'iteration', 'residual'])
    return _write_frame(df, directory, SCALING_CSV)


def write_omega_scaling(directory: str, omegas: Sequence[float], rms: Sequence[float], slope: Optional[float]) -> str:
    df = pd.DataFrame({'omega': list(omegas), 'rms': list(rms)})
    df['slope'] = slope
    return _write_frame(df, directory, OMEGA_SCALING_CSV)


def write_manifest(directory: str, manifest: Dict[str, Any]) -> str:
    """
    Write the manifest through a temporary file in the same directory and rename it into
    place.
    """
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, MANIFEST_JSON)

    handle, temporary = tempfile.mkstemp(dir=directory, prefix='.manifest-', suffix='.json')
    try:
        with os.fdopen(handle, 'w') as stream:
            json.dump(manifest, stream, indent=2, sort_keys=True)
        os.replace(temporary, path)
    except BaseException:
        if os.path.exists(temporary):
            os.remove(temporary)
        raise

    logger.info(f'Wrote {path}...')

    return path
