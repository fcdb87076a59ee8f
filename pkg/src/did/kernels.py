"""Positive-definite kernels, Gram matrix assembly and stabilized Cholesky.

Two kernel families are supported, both normalized so k(x, x) = 1:

* ``gaussian``: k(x, x') = exp(-||x - x'||^2 / (2 sigma^2))
* ``laplace``:  k(y, y') = exp(-a ||y - y'||)

Distances are Euclidean throughout.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
from scipy.spatial.distance import cdist

from .errors import SingularKernelMatrixError
from .validation import as_points, check_positive

GAUSSIAN = "gaussian"
LAPLACE = "laplace"

#: Diagonal jitter ladder, as multiples of trace(K)/n. The smallest value
#: that lets the factorization succeed is used and reported.
JITTER_LADDER = (0.0, 1e-12, 1e-10, 1e-8, 1e-6)


@dataclass(frozen=True)
class KernelSpec:
    """A kernel family plus its bandwidth/decay parameter.

    ``param`` is sigma for the Gaussian family and the decay rate a for the
    Laplace family; it must be positive.
    """

    family: str
    param: float

    def __post_init__(self):
        if self.family not in (GAUSSIAN, LAPLACE):
            raise ValueError(f"unknown kernel family {self.family!r}")
        object.__setattr__(self, "param", check_positive("kernel param", self.param))


def _from_distances(spec, dist):
    if spec.family == GAUSSIAN:
        return np.exp(-(dist**2) / (2.0 * spec.param**2))
    return np.exp(-spec.param * dist)


def eval_kernel(spec, x, x_prime):
    """Evaluate the kernel on a single pair of points.

    Both points must have the same dimension. The result lies in (0, 1].
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    x_prime = np.asarray(x_prime, dtype=np.float64).ravel()
    if x.shape != x_prime.shape:
        raise ValueError(
            f"point dimensions differ: {x.shape[0]} vs {x_prime.shape[0]}"
        )
    return float(_from_distances(spec, np.linalg.norm(x - x_prime)))


def kernel_matrix(spec, points_a, points_b=None):
    """Dense Gram matrix k(a_i, b_j) for two point lists.

    With ``points_b`` omitted (or identical to ``points_a``) the result is
    symmetric with a unit diagonal.
    """
    pa = as_points(points_a, "points_a")
    if points_b is None or points_b is points_a:
        d = cdist(pa, pa)
        d = (d + d.T) / 2.0  # force exact symmetry of the distance matrix
        k = _from_distances(spec, d)
        np.fill_diagonal(k, 1.0)
        return k
    pb = as_points(points_b, "points_b", dim=pa.shape[1])
    return _from_distances(spec, cdist(pa, pb))


def cholesky_upper(gram, jitter_ladder=JITTER_LADDER):
    """Upper-triangular R with R^T R = gram + delta*I, for the smallest
    workable jitter delta.

    The ladder entries are scaled by trace(gram)/n. Returns ``(R, delta)``.
    Raises :class:`SingularKernelMatrixError` when even the largest jitter
    does not make the matrix positive definite, which in this package means
    duplicate landmark points.
    """
    gram = np.asarray(gram, dtype=np.float64)
    if gram.ndim != 2 or gram.shape[0] != gram.shape[1]:
        raise ValueError(f"gram matrix must be square, got shape {gram.shape}")
    n = gram.shape[0]
    scale = float(np.trace(gram)) / n
    for level in jitter_ladder:
        delta = level * scale
        try:
            shifted = gram if delta == 0.0 else gram + delta * np.eye(n)
            upper = sla.cholesky(shifted, lower=False)
            return upper, delta
        except np.linalg.LinAlgError:
            continue
    raise SingularKernelMatrixError(
        f"kernel matrix of size {n} is singular even with jitter "
        f"{jitter_ladder[-1]:g}*trace/n; check for duplicate landmarks"
    )
