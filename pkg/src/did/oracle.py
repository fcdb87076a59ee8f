"""Independent checking machinery: dense eigensolver and random baselines."""

from dataclasses import dataclass

import numpy as np

from .core import DidConfig, did
from .warp import rmse


def dense_top_eig(matrix, size_guard=4096):
    """Largest eigenvalue and a unit eigenvector via full eigendecomposition.

    Serves as the brute-force reference for power iteration; guarded so a
    stray huge matrix does not stall the suite.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValueError(f"matrix must be square, got shape {matrix.shape}")
    if matrix.shape[0] > size_guard:
        raise ValueError(f"matrix size {matrix.shape[0]} exceeds guard {size_guard}")
    eigvals, eigvecs = np.linalg.eigh((matrix + matrix.T) / 2.0)
    return float(eigvals[-1]), eigvecs[:, -1]


@dataclass(frozen=True)
class RandomRegime:
    """Empirical 90% band of a metric over unrelated signal pairs.

    ``lo`` and ``hi`` are the 5th/95th percentiles (linear interpolation),
    the baseline against which discrimination claims are judged.
    """

    samples: np.ndarray
    lo: float
    hi: float
    median: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)


def random_regime(pairs, metric, config=None):
    """Evaluate a metric on unrelated pairs and summarize its spread.

    ``metric`` is "did" or "rmse"; "did" uses the given config (defaults
    apply when omitted). At least 20 pairs are required for the percentiles
    to mean anything.
    """
    pairs = list(pairs)
    if len(pairs) < 20:
        raise ValueError(f"need at least 20 pairs, got {len(pairs)}")
    if metric == "did":
        config = config or DidConfig()
        values = [did(f, g, config).value for f, g in pairs]
    elif metric == "rmse":
        values = [rmse(f, g) for f, g in pairs]
    else:
        raise ValueError(f"metric must be 'did' or 'rmse', got {metric!r}")
    values = np.asarray(values, dtype=np.float64)
    return RandomRegime(
        samples=values,
        lo=float(np.percentile(values, 5)),
        hi=float(np.percentile(values, 95)),
        median=float(np.median(values)),
    )
