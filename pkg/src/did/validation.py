"""Input validation helpers.

Small checks shared by the functional API and the estimator, in the spirit
of ``sklearn.utils.validation``: coerce early, fail with a clear message.
"""

import numpy as np


def check_positive(name, value):
    """Validate that ``value`` is a finite positive scalar and return it."""
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite number, got {value!r}")
    return value


def check_count(name, value, minimum=1):
    """Validate that ``value`` is an integer >= ``minimum`` and return it."""
    if int(value) != value:
        raise ValueError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def as_points(array, name, dim=None):
    """Coerce ``array`` to a 2-d float64 point array of shape (n, d).

    1-d input is treated as a single point. If ``dim`` is given the point
    dimension must match.
    """
    pts = np.asarray(array, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise ValueError(f"{name} must be a 2-d array of points, got shape {pts.shape}")
    if pts.shape[0] == 0:
        raise ValueError(f"{name} must contain at least one point")
    if dim is not None and pts.shape[1] != dim:
        raise ValueError(
            f"{name} must have point dimension {dim}, got {pts.shape[1]}"
        )
    return pts


def check_same_output_dim(f, g):
    """Validate that two signals map into the same output space."""
    if f.output_dim != g.output_dim:
        raise ValueError(
            "signals must share an output dimension, got "
            f"{f.output_dim} and {g.output_dim}"
        )
    if f.input_dim != g.input_dim:
        raise ValueError(
            "signals must share an input dimension, got "
            f"{f.input_dim} and {g.input_dim}"
        )
