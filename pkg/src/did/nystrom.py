"""Landmark selection for the low-rank projection of the feature operators.

Landmarks on the input domain live in the unit square; landmarks on the
output (color) domain live in an axis-aligned box that by default hugs the
observed values of the signals being compared.
"""

from dataclasses import dataclass

import numpy as np

from .validation import as_points, check_count

X_STRATEGIES = ("grid", "random")
Y_STRATEGIES = ("cube", "random", "observed")

#: Relative padding applied per side when deriving a color box from data.
BOX_EXPAND = 0.05


@dataclass(frozen=True)
class Landmarks:
    """A deduplicated list of landmark points plus how they were chosen."""

    points: np.ndarray
    strategy: str
    seed: int = None

    def __post_init__(self):
        pts = dedup_points(as_points(self.points, "landmark points"))
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)


def dedup_points(points):
    """Drop exact duplicate rows, keeping first occurrences in order."""
    points = np.asarray(points)
    _, index = np.unique(points, axis=0, return_index=True)
    return points[np.sort(index)]


def color_box(*value_arrays, expand=BOX_EXPAND):
    """Axis-aligned bounding box of the given value arrays, padded per side.

    Degenerate axes (constant values) are padded by ``expand`` in absolute
    terms so the box always has positive width.
    """
    stacked = np.vstack([np.asarray(v, dtype=np.float64) for v in value_arrays])
    lo = stacked.min(axis=0)
    hi = stacked.max(axis=0)
    pad = expand * (hi - lo)
    pad[pad == 0.0] = expand
    return lo - pad, hi + pad


def _cell_centers(m):
    return (np.arange(m) + 0.5) / m


def select_landmarks_x(strategy, m_x, seed=None, dim=2):
    """Choose input-domain landmarks in the unit box.

    In the default two-dimensional domain, ``grid`` places
    ceil(sqrt(m_x))^2 cell centers and keeps the first m_x in row-major
    order; ``random`` draws i.i.d. uniform points from a seeded generator.
    ``dim=1`` covers interval-domain signals with evenly spaced centers.
    """
    m_x = check_count("m_x", m_x)
    if dim not in (1, 2):
        raise ValueError(f"input landmarks support dim 1 or 2, got {dim}")
    if strategy == "grid":
        if dim == 1:
            pts = _cell_centers(m_x)[:, None]
        else:
            m = int(np.ceil(np.sqrt(m_x)))
            c = _cell_centers(m)
            xx, yy = np.meshgrid(c, c, indexing="ij")
            pts = np.stack([xx.ravel(), yy.ravel()], axis=1)[:m_x]
    elif strategy == "random":
        rng = np.random.default_rng(seed)
        pts = rng.random((m_x, dim))
    else:
        raise ValueError(f"unknown input landmark strategy {strategy!r}")
    return Landmarks(points=pts, strategy=strategy, seed=seed)


def select_landmarks_y(strategy, m_y, box=None, observed=None, seed=None):
    """Choose output-domain landmarks.

    ``cube`` lays an m x m x ... grid of cell centers over ``box`` and
    requires m_y to be a perfect power of the output dimension; ``random``
    draws uniformly inside ``box``; ``observed`` subsamples m_y values
    without replacement from the rows of ``observed``.
    """
    m_y = check_count("m_y", m_y)
    if strategy == "observed":
        if observed is None:
            raise ValueError("strategy 'observed' needs observed values")
        observed = as_points(observed, "observed values")
        if len(observed) < m_y:
            raise ValueError(
                f"need at least m_y={m_y} observed values, got {len(observed)}"
            )
        rng = np.random.default_rng(seed)
        idx = rng.choice(len(observed), size=m_y, replace=False)
        pts = observed[np.sort(idx)]
        return Landmarks(points=pts, strategy=strategy, seed=seed)

    if box is None:
        raise ValueError(f"strategy {strategy!r} needs a color box")
    lo = np.asarray(box[0], dtype=np.float64).ravel()
    hi = np.asarray(box[1], dtype=np.float64).ravel()
    if lo.shape != hi.shape or np.any(hi <= lo):
        raise ValueError("color box must satisfy lo < hi per axis")
    dim = len(lo)
    if strategy == "cube":
        m = round(m_y ** (1.0 / dim))
        if m**dim != m_y:
            raise ValueError(
                f"strategy 'cube' needs m_y to be a perfect {dim}-th power, got {m_y}"
            )
        axes = np.meshgrid(*([_cell_centers(m)] * dim), indexing="ij")
        unit = np.stack([a.ravel() for a in axes], axis=1)
        pts = lo + unit * (hi - lo)
    elif strategy == "random":
        rng = np.random.default_rng(seed)
        pts = lo + rng.random((m_y, dim)) * (hi - lo)
    else:
        raise ValueError(f"unknown output landmark strategy {strategy!r}")
    return Landmarks(points=pts, strategy=strategy, seed=seed)
