"""Sampled signals: maps from coordinates in the unit box to output values.

An image is the canonical example, a map from pixel-center coordinates in
[0, 1]^2 to RGB color triples. Coordinates are always normalized to the
unit box with domain volume 1 regardless of aspect ratio, which keeps
quadrature weights and kernel bandwidths independent of image size.
"""

from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from .validation import check_count

#: Channel statistics used by ``load_image(..., normalize=True)``.
IMAGENET_MEAN = np.array([0.485, 0.456, 0.406])
IMAGENET_STD = np.array([0.229, 0.224, 0.225])


@dataclass(frozen=True)
class SampledSignal:
    """A discretized map from [0, 1]^d to R^p.

    ``coords`` holds the n sample locations, ``values`` the outputs at those
    locations. ``shape`` records the original (rows, cols) layout when the
    samples form a grid, row-major. ``volume`` is the domain volume used as
    the quadrature weight scale.
    """

    coords: np.ndarray
    values: np.ndarray
    shape: tuple = None
    volume: float = 1.0

    def __post_init__(self):
        coords = np.ascontiguousarray(self.coords, dtype=np.float64)
        values = np.ascontiguousarray(self.values, dtype=np.float64)
        if coords.ndim == 1:
            coords = coords[:, None]
        if values.ndim == 1:
            values = values[:, None]
        if coords.ndim != 2 or values.ndim != 2:
            raise ValueError("coords and values must be 2-d arrays")
        if len(coords) != len(values) or len(coords) == 0:
            raise ValueError(
                f"need equally many coords and values (>= 1), got "
                f"{len(coords)} and {len(values)}"
            )
        if coords.shape[1] not in (1, 2):
            raise ValueError(f"input dimension must be 1 or 2, got {coords.shape[1]}")
        if coords.min() < 0.0 or coords.max() > 1.0:
            raise ValueError("coordinates must lie in the unit box [0, 1]^d")
        if not np.isfinite(self.volume) or self.volume <= 0:
            raise ValueError(f"volume must be positive, got {self.volume}")
        if self.shape is not None:
            shape = tuple(int(s) for s in self.shape)
            if int(np.prod(shape)) != len(coords):
                raise ValueError(f"shape {shape} does not match {len(coords)} samples")
            object.__setattr__(self, "shape", shape)
        coords.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "volume", float(self.volume))

    @property
    def n(self):
        return len(self.coords)

    @property
    def input_dim(self):
        return self.coords.shape[1]

    @property
    def output_dim(self):
        return self.values.shape[1]

    def values_grid(self):
        """Values reshaped to (rows, cols, p); requires a grid layout."""
        if self.shape is None:
            raise ValueError("signal has no grid shape")
        return self.values.reshape(*self.shape, self.output_dim)


def grid_coordinates(rows, cols):
    """Pixel-center coordinates for a rows x cols grid, row-major.

    Pixel (i, j) maps to ((j + 0.5)/cols, (i + 0.5)/rows), so every point is
    strictly inside (0, 1)^2.
    """
    rows = check_count("rows", rows)
    cols = check_count("cols", cols)
    ii, jj = np.meshgrid(np.arange(rows), np.arange(cols), indexing="ij")
    x = (jj.ravel() + 0.5) / cols
    y = (ii.ravel() + 0.5) / rows
    return np.stack([x, y], axis=1)


def from_array(array, volume=1.0):
    """Build a grid signal from an (h, w) or (h, w, p) value array."""
    arr = np.asarray(array, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise ValueError(f"expected (h, w) or (h, w, p) array, got shape {arr.shape}")
    h, w, p = arr.shape
    return SampledSignal(
        coords=grid_coordinates(h, w),
        values=arr.reshape(h * w, p),
        shape=(h, w),
        volume=volume,
    )


def load_image(path, normalize=False):
    """Load a PNG/JPEG image as an RGB signal with values in [0, 1].

    With ``normalize=True`` each channel c is transformed as
    (v - mean_c) / std_c using the standard ImageNet statistics.
    """
    with Image.open(path) as img:
        arr = np.asarray(img.convert("RGB"), dtype=np.float64) / 255.0
    if normalize:
        arr = (arr - IMAGENET_MEAN) / IMAGENET_STD
    return from_array(arr)


def save_image(signal, path):
    """Write a grid signal with values in [0, 1] as an 8-bit image file."""
    grid = signal.values_grid()
    if grid.shape[2] == 1:
        grid = np.repeat(grid, 3, axis=2)
    if grid.shape[2] != 3:
        raise ValueError(f"can only save 1- or 3-channel signals, got {grid.shape[2]}")
    data = np.clip(np.rint(grid * 255.0), 0, 255).astype(np.uint8)
    Image.fromarray(data, mode="RGB").save(path)


def blackman_mask(coords):
    """Blackman window weights, one per coordinate.

    In 1-d the window is 0.42 - 0.5 cos(2 pi t) + 0.08 cos(4 pi t) for t in
    [0, 1]; higher dimensions take the tensor product over axes. Tiny
    negative floating-point residue at the endpoints is clamped to 0.
    """
    coords = np.asarray(coords, dtype=np.float64)
    if coords.ndim == 1:
        coords = coords[:, None]
    w = 0.42 - 0.5 * np.cos(2 * np.pi * coords) + 0.08 * np.cos(4 * np.pi * coords)
    return np.clip(w, 0.0, None).prod(axis=1)


def uniform_mask(coords):
    """All-ones weights, one per coordinate."""
    coords = np.asarray(coords, dtype=np.float64)
    n = coords.shape[0] if coords.ndim > 1 else len(coords)
    return np.ones(n)


def extract_patch(signal, top, left, size):
    """Cut a size x size patch and renormalize it to its own unit square.

    The patch gets fresh pixel-center coordinates and volume 1, so it is a
    standalone signal rather than a view into the parent's domain.
    """
    if signal.shape is None:
        raise ValueError("extract_patch requires a grid signal")
    size = check_count("size", size)
    h, w = signal.shape
    top, left = int(top), int(left)
    if top < 0 or left < 0 or top + size > h or left + size > w:
        raise ValueError(
            f"patch ({top}, {left}, size {size}) does not fit in a {h}x{w} grid"
        )
    block = signal.values_grid()[top : top + size, left : left + size]
    return from_array(block)


def synthetic_texture(rows, cols, seed=0):
    """Deterministic textured RGB test image.

    Mid-scale correlated noise whose local amplitude and mean color drift
    across the image, so distant patches have distinct color statistics
    while the pixel correlation length stays short. Stands in for the
    photographic test scenes at desk scale.
    """
    rng = np.random.default_rng(seed)
    out = np.full((rows, cols, 3), 0.5)
    gain = gaussian_filter(rng.standard_normal((rows, cols, 3)), sigma=(9.0, 9.0, 0))
    span = np.ptp(gain)
    gain = 0.30 + 0.70 * (gain - gain.min()) / (span if span > 0 else 1.0)
    grain = gaussian_filter(rng.standard_normal((rows, cols, 3)), sigma=(3.5, 3.5, 0))
    grain /= grain.std()
    out += 0.17 * gain * grain
    tint = gaussian_filter(rng.standard_normal((rows, cols, 3)), sigma=(9.0, 9.0, 0))
    tint /= max(np.abs(tint).max(), 1e-12)
    out += 0.10 * tint
    return from_array(np.clip(out, 0.02, 0.98))
