from __future__ import annotations

from typing import TYPE_CHECKING, Any

import numpy as np

from streaming_icvi import exception as te

if TYPE_CHECKING:
    from streaming_icvi.core.types import Vector

__all__ = []


def as_sample(x: Any, dimension: int | None = None) -> Vector:
    """Convert `x` to a float64 vector and check its dimension."""
    sample = np.asarray(x, dtype=np.float64)
    if sample.ndim != 1 or sample.size == 0:
        error_msg = f"sample must be a non-empty vector, got shape {sample.shape}"
        raise te.IcviDimensionError(error_msg)
    if dimension is not None and sample.size != dimension:
        error_msg = f"sample has dimension {sample.size}, stream has {dimension}"
        raise te.IcviDimensionError(error_msg)
    if not np.all(np.isfinite(sample)):
        raise te.IcviValueError("sample has non-finite components")
    return sample


def covariance_floor(epsilon: float, dimension: int) -> float:
    """Diagonal loading `10**(-epsilon/d)`; the floor matrix has determinant
    `10**-epsilon` whatever the dimension."""
    return float(10.0 ** (-epsilon / dimension))


def shift_compactness(
    cp: float, g: Vector, n: int, r_old: Vector, r_new: Vector
) -> tuple[float, Vector]:
    """Move the reference point of a compactness term without adding a sample.

    Args:
        cp: sum of squared distances of the `n` samples to `r_old`.
        g: sum of deviations of the `n` samples from `r_old`.
        n: number of samples.
        r_old: current reference point.
        r_new: new reference point.

    Returns:
        `(cp, g)` about `r_new`
    """
    delta = r_old - r_new
    cp_new = cp + n * float(delta @ delta) + 2.0 * float(delta @ g)
    return cp_new, g + n * delta


def compactness_step(
    cp: float, g: Vector, n_old: int, x: Vector, r_old: Vector, r_new: Vector
) -> tuple[float, Vector]:
    """Add `x` to a compactness term and move its reference from `r_old` to `r_new`.

    `cp` is updated from the old `g`; `g` is updated afterwards.

    Args:
        cp: sum of squared distances of the `n_old` samples to `r_old`.
        g: sum of deviations of the `n_old` samples from `r_old`.
        n_old: number of samples before `x`.
        x: the new sample.
        r_old: reference point before the update.
        r_new: reference point after the update.

    Returns:
        `(cp, g)` of the `n_old + 1` samples about `r_new`
    """
    delta = r_old - r_new
    z = x - r_new
    cp_new = cp + float(z @ z) + n_old * float(delta @ delta) + 2.0 * float(delta @ g)
    g_new = g + z + n_old * delta
    return cp_new, g_new


def covariance_step(
    sigma: Vector, n_new: int, x: Vector, v_old: Vector, delta: float
) -> Vector:
    """Recursive sample covariance with diagonal loading `delta`.

    `sigma` holds the sample covariance of the first `n_new - 1` samples plus
    `delta * I`; `v_old` is their mean.
    """
    floor = delta * np.eye(sigma.shape[0])
    deviation = x - v_old
    scaled = (n_new - 2) / (n_new - 1) * (sigma - floor)
    return scaled + np.outer(deviation, deviation) / n_new + floor
