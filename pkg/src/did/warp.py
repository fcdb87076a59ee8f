"""Random smooth warps, rotations and the RMSE baseline.

Warps are synthesized from a truncated two-dimensional sine basis so the
displacement vanishes exactly on the grid boundary. The temperature sets
the coefficient variance; past roughly T = 1 the pixel map stops being
injective, which is the intended destructive regime.
"""

from dataclasses import dataclass

import numpy as np

from .signal import SampledSignal
from .validation import check_count, check_positive

#: Displacement amplitude per axis, in pixels, as a multiple of (extent - 1).
#: Calibrated so warps are near-isometric for T <= 0.1 and fold for T >> 1.
AMPLITUDE_SCALE = 2.0 / np.pi


@dataclass(frozen=True)
class WarpField:
    """Per-pixel displacements (in pixels) for an h x w grid.

    ``dx`` moves columns, ``dy`` moves rows. Both are exactly zero on all
    four boundary rows/columns.
    """

    dx: np.ndarray
    dy: np.ndarray
    temperature: float
    cutoff: int
    seed: int = None

    def __post_init__(self):
        dx = np.asarray(self.dx, dtype=np.float64)
        dy = np.asarray(self.dy, dtype=np.float64)
        if dx.shape != dy.shape or dx.ndim != 2:
            raise ValueError("dx and dy must be 2-d arrays of equal shape")
        dx.setflags(write=False)
        dy.setflags(write=False)
        object.__setattr__(self, "dx", dx)
        object.__setattr__(self, "dy", dy)

    @property
    def shape(self):
        return self.dx.shape


def admissible_modes(cutoff):
    """Sine modes (m, n) with m, n >= 1 and m^2 + n^2 <= cutoff^2."""
    cutoff = check_count("cutoff", cutoff)
    return [
        (m, n)
        for m in range(1, cutoff + 1)
        for n in range(1, cutoff + 1)
        if m * m + n * n <= cutoff * cutoff
    ]


def random_warp_field(rows, cols, temperature, cutoff=2, seed=None):
    """Draw a random displacement field at the given temperature.

    Each admissible mode (m, n) gets an independent N(0, T/(m^2+n^2))
    coefficient per axis; the horizontal (resp. vertical) field is scaled by
    AMPLITUDE_SCALE * (cols-1) (resp. rows-1) to express pixels. The sine
    basis makes boundary displacement exactly zero, and a fixed seed fixes
    the field.
    """
    rows = check_count("rows", rows, minimum=2)
    cols = check_count("cols", cols, minimum=2)
    temperature = check_positive("temperature", temperature)
    modes = admissible_modes(cutoff)
    rng = np.random.default_rng(seed)
    si = np.sin(np.pi * np.outer(np.arange(1, cutoff + 1), np.arange(rows) / (rows - 1)))
    sj = np.sin(np.pi * np.outer(np.arange(1, cutoff + 1), np.arange(cols) / (cols - 1)))
    fields = []
    for _ in range(2):  # dx first, then dy, from independent draws
        f = np.zeros((rows, cols))
        for m, n in modes:
            amp = rng.normal(0.0, np.sqrt(temperature / (m * m + n * n)))
            f += amp * np.outer(si[m - 1], sj[n - 1])
        fields.append(f)
    dx = fields[0] * AMPLITUDE_SCALE * (cols - 1)
    dy = fields[1] * AMPLITUDE_SCALE * (rows - 1)
    # endpoints of the sine table may carry ~1e-16 residue; pin them to 0
    for f in (dx, dy):
        f[0, :] = 0.0
        f[-1, :] = 0.0
        f[:, 0] = 0.0
        f[:, -1] = 0.0
    return WarpField(dx=dx, dy=dy, temperature=temperature, cutoff=cutoff, seed=seed)


def _bilinear(grid, rows_q, cols_q):
    """Sample grid values at fractional (row, col) positions, edge-clamped."""
    h, w = grid.shape[:2]
    rq = np.clip(rows_q, 0.0, h - 1.0)
    cq = np.clip(cols_q, 0.0, w - 1.0)
    r0 = np.floor(rq).astype(np.intp)
    c0 = np.floor(cq).astype(np.intp)
    r1 = np.minimum(r0 + 1, h - 1)
    c1 = np.minimum(c0 + 1, w - 1)
    fr = (rq - r0)[..., None]
    fc = (cq - c0)[..., None]
    return (
        (1 - fr) * (1 - fc) * grid[r0, c0]
        + (1 - fr) * fc * grid[r0, c1]
        + fr * (1 - fc) * grid[r1, c0]
        + fr * fc * grid[r1, c1]
    )


def apply_warp(signal, field):
    """Resample a grid signal along a displacement field.

    The output at pixel (i, j) is the bilinear interpolation of the input at
    (i + dy, j + dx), clamped at the image edge. Coordinates and volume are
    unchanged; the zero field is the identity.
    """
    if signal.shape is None:
        raise ValueError("apply_warp requires a grid signal")
    if field.shape != signal.shape:
        raise ValueError(
            f"field shape {field.shape} does not match signal shape {signal.shape}"
        )
    h, w = signal.shape
    ii, jj = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    warped = _bilinear(signal.values_grid(), ii + field.dy, jj + field.dx)
    return SampledSignal(
        coords=signal.coords,
        values=warped.reshape(signal.n, signal.output_dim),
        shape=signal.shape,
        volume=signal.volume,
    )


def rotate(signal, angle_degrees):
    """Rotate a square grid signal about its center, bilinear resampling.

    To avoid corner artifacts, rotate a larger patch and crop afterwards
    (see ``extract_patch``).
    """
    if signal.shape is None:
        raise ValueError("rotate requires a grid signal")
    h, w = signal.shape
    if h != w:
        raise ValueError(f"rotate requires a square grid, got {h}x{w}")
    theta = np.deg2rad(float(angle_degrees))
    center = (h - 1) / 2.0
    ii, jj = np.meshgrid(np.arange(h), np.arange(w), indexing="ij")
    # inverse map: sample the source at the back-rotated position
    cols_q = center + (jj - center) * np.cos(theta) - (ii - center) * np.sin(theta)
    rows_q = center + (jj - center) * np.sin(theta) + (ii - center) * np.cos(theta)
    rotated = _bilinear(signal.values_grid(), rows_q, cols_q)
    return SampledSignal(
        coords=signal.coords,
        values=rotated.reshape(signal.n, signal.output_dim),
        shape=signal.shape,
        volume=signal.volume,
    )


def rmse(f, g):
    """Root mean squared difference over all n*p value entries."""
    if f.values.shape != g.values.shape:
        raise ValueError(
            f"value shapes differ: {f.values.shape} vs {g.values.shape}"
        )
    return float(np.sqrt(np.mean((f.values - g.values) ** 2)))
