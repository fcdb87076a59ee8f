"""The dissimilarity itself: low-rank assembly, eigensolve, witnesses.

The measure compares a masked reference signal f against a probe signal g.
Both are embedded as finite-rank operators between the input- and
output-space RKHSs via quadrature over their sample grids, projected onto
landmark spans, and represented in whitened landmark coordinates as the
matrices returned by :func:`reference_matrix` (for f, carrying the mask)
and :func:`probe_matrix` (for g). The value is

    lam * || A^T (B B^T + lam I)^{-1} A ||_op

with A, B those two matrices, computed as the top eigenvalue of a
symmetric PSD matrix by power iteration. The witness pair (h, q), the
region selector on f and the matching reweighting on g, falls out of the
converged eigenvector.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import PowerIterationError
from .kernels import GAUSSIAN, LAPLACE, KernelSpec, cholesky_upper, kernel_matrix
from .nystrom import (
    Landmarks,
    color_box,
    dedup_points,
    select_landmarks_x,
    select_landmarks_y,
)
from .signal import blackman_mask, uniform_mask
from .validation import check_count, check_positive, check_same_output_dim

MASKS = ("blackman", "uniform")
X_CHOICES = ("grid", "random", "full")
Y_CHOICES = ("cube", "random", "observed", "full")


@dataclass(frozen=True)
class DidConfig:
    """Knobs for one dissimilarity evaluation.

    ``lam`` may be left as None, in which case n^(-1/4) is used, n being the
    reference signal's sample count. Landmark strategy ``full`` uses every
    sample point (resp. every observed output value) of both signals, which
    turns the projections into identities on the data span.
    """

    lam: float = None
    kernel_x: KernelSpec = KernelSpec(GAUSSIAN, 1.0 / 6.0)
    kernel_y: KernelSpec = KernelSpec(LAPLACE, 5.0)
    m_x: int = 100
    m_y: int = 16**3
    landmarks_x: str = "grid"
    landmarks_y: str = "cube"
    mask: str = "blackman"
    power_tol: float = 1e-10
    power_max_iter: int = 10000
    seed: int = 0

    def __post_init__(self):
        if self.lam is not None:
            check_positive("lam", self.lam)
        check_positive("power_tol", self.power_tol)
        check_count("power_max_iter", self.power_max_iter)
        check_count("m_x", self.m_x)
        check_count("m_y", self.m_y)
        if self.mask not in MASKS:
            raise ValueError(f"mask must be one of {MASKS}, got {self.mask!r}")
        if self.landmarks_x not in X_CHOICES:
            raise ValueError(f"landmarks_x must be one of {X_CHOICES}")
        if self.landmarks_y not in Y_CHOICES:
            raise ValueError(f"landmarks_y must be one of {Y_CHOICES}")


@dataclass(frozen=True)
class DidResult:
    """Scalar value plus the recovered witness data.

    ``h_tilde`` is the unit-norm top eigenvector in whitened landmark
    coordinates; ``h_sampled`` and ``q_sampled`` are the witness functions
    evaluated on the reference and probe grids respectively.
    """

    value: float
    h_tilde: np.ndarray
    h_sampled: np.ndarray
    q_sampled: np.ndarray
    iterations: int
    jitter_x: float
    jitter_y: float


@dataclass(frozen=True)
class LandmarkFactors:
    """Landmark sets, their kernels, and the Cholesky factors of the Grams."""

    landmarks_x: Landmarks
    landmarks_y: Landmarks
    kernel_x: KernelSpec
    kernel_y: KernelSpec
    chol_x: np.ndarray
    chol_y: np.ndarray
    jitter_x: float
    jitter_y: float


def resolve_lambda(config, n):
    """The effective regularization: config value, or n^(-1/4) by default."""
    if config.lam is not None:
        return float(config.lam)
    return float(n) ** -0.25


def mask_weights(config, f):
    if config.mask == "blackman":
        return blackman_mask(f.coords)
    return uniform_mask(f.coords)


def prepare_landmarks(f, g, config):
    """Select landmark sets for a signal pair according to the config."""
    if config.landmarks_x == "full":
        lx = Landmarks(
            points=dedup_points(np.vstack([f.coords, g.coords])), strategy="full"
        )
    else:
        lx = select_landmarks_x(
            config.landmarks_x, config.m_x, seed=(config.seed, 0), dim=f.input_dim
        )
    observed = np.vstack([f.values, g.values])
    if config.landmarks_y == "full":
        ly = Landmarks(points=dedup_points(observed), strategy="full")
    elif config.landmarks_y == "observed":
        ly = select_landmarks_y(
            "observed", config.m_y, observed=observed, seed=(config.seed, 1)
        )
    else:
        ly = select_landmarks_y(
            config.landmarks_y,
            config.m_y,
            box=color_box(f.values, g.values),
            seed=(config.seed, 1),
        )
    return lx, ly


def factor_landmarks(landmarks_x, landmarks_y, kernel_x, kernel_y):
    """Factorize both landmark Gram matrices (with jitter where needed)."""
    chol_x, jit_x = cholesky_upper(kernel_matrix(kernel_x, landmarks_x.points))
    chol_y, jit_y = cholesky_upper(kernel_matrix(kernel_y, landmarks_y.points))
    return LandmarkFactors(
        landmarks_x=landmarks_x,
        landmarks_y=landmarks_y,
        kernel_x=kernel_x,
        kernel_y=kernel_y,
        chol_x=chol_x,
        chol_y=chol_y,
        jitter_x=jit_x,
        jitter_y=jit_y,
    )


def _whiten(factors, cross_y, cross_x):
    """R_y^{-T} @ (cross_y @ cross_x) @ R_x^{-1} via triangular solves.

    The sample dimension is contracted first so the solves act on the small
    landmark-by-landmark matrix.
    """
    prod = cross_y @ cross_x
    left = sla.solve_triangular(factors.chol_y, prod, trans="T", lower=False)
    return sla.solve_triangular(factors.chol_x, left.T, trans="T", lower=False).T


def reference_matrix(f, weights, factors):
    """Whitened landmark representation of the masked reference signal.

    Row i, column j live in the whitened output/input landmark coordinates;
    the mask weights enter as a diagonal scaling of the quadrature terms.
    A zero mask therefore yields the zero matrix.
    """
    weights = np.asarray(weights, dtype=np.float64).ravel()
    if len(weights) != f.n:
        raise ValueError(f"mask length {len(weights)} does not match n={f.n}")
    cross_y = kernel_matrix(factors.kernel_y, factors.landmarks_y.points, f.values)
    cross_x = kernel_matrix(factors.kernel_x, f.coords, factors.landmarks_x.points)
    scale = f.volume / f.n
    return scale * _whiten(factors, cross_y * weights[None, :], cross_x)


def probe_matrix(g, factors):
    """Whitened landmark representation of the probe signal (no mask)."""
    cross_y = kernel_matrix(factors.kernel_y, factors.landmarks_y.points, g.values)
    cross_x = kernel_matrix(factors.kernel_x, g.coords, factors.landmarks_x.points)
    scale = g.volume / g.n
    return scale * _whiten(factors, cross_y, cross_x)


def _shrunk_inverse_apply(b_mat, lam, rhs):
    """(B B^T + lam I)^{-1} @ rhs without forming the large inverse.

    When B is wide (more output than input landmarks) the inverse is routed
    through the small SPD matrix lam I + B^T B, otherwise it is a direct
    Cholesky solve; both paths avoid explicit inversion.
    """
    m_y, m_x = b_mat.shape
    if m_y <= m_x:
        factor = sla.cho_factor(b_mat @ b_mat.T + lam * np.eye(m_y), lower=False)
        return sla.cho_solve(factor, rhs)
    small = sla.cho_factor(b_mat.T @ b_mat + lam * np.eye(m_x), lower=False)
    return (rhs - b_mat @ sla.cho_solve(small, b_mat.T @ rhs)) / lam


def saddle_matrix(a_mat, b_mat, lam):
    """The symmetric PSD matrix whose top eigenvalue is the dissimilarity.

    Equals lam * A^T (B B^T + lam I)^{-1} A, explicitly symmetrized to kill
    floating-point asymmetry before the eigensolve.
    """
    lam = check_positive("lam", lam)
    t_mat = lam * (a_mat.T @ _shrunk_inverse_apply(b_mat, lam, a_mat))
    return (t_mat + t_mat.T) / 2.0


def power_iteration(matrix, tol=1e-10, max_iter=10000, seed=0):
    """Top eigenvalue and eigenvector of a symmetric PSD matrix.

    Starts from a seeded uniform random vector and stops once the relative
    change of the Rayleigh quotient is at most ``tol`` on two consecutive
    iterations. Returns ``(value, unit_vector, iterations)``. Raises
    :class:`PowerIterationError` when the cap is hit first.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    n = matrix.shape[0]
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    vec = rng.random(n)
    vec /= np.linalg.norm(vec)
    rayleigh = None
    calm_steps = 0
    for it in range(1, int(max_iter) + 1):
        image = matrix @ vec
        current = float(vec @ image)
        norm = np.linalg.norm(image)
        if norm == 0.0:
            return 0.0, vec, it  # zero matrix: eigenvalue 0, any unit vector
        if rayleigh is not None:
            change = abs(current - rayleigh) / max(abs(current), np.finfo(float).tiny)
            calm_steps = calm_steps + 1 if change <= tol else 0
        rayleigh = current
        if calm_steps >= 2:
            return current, vec, it
        vec = image / norm
    raise PowerIterationError(
        f"power iteration did not converge in {max_iter} iterations",
        last_value=rayleigh,
        last_vector=vec,
        iterations=max_iter,
    )


def did(f, g, config=None):
    """Dissimilarity of a probe g from a masked reference f.

    Returns a :class:`DidResult`; see the module docstring for the value's
    definition. The measure is intentionally asymmetric in (f, g).
    """
    config = config or DidConfig()
    check_same_output_dim(f, g)
    lam = check_positive("lam", resolve_lambda(config, f.n))
    weights = mask_weights(config, f)
    lx, ly = prepare_landmarks(f, g, config)
    factors = factor_landmarks(lx, ly, config.kernel_x, config.kernel_y)
    a_mat = reference_matrix(f, weights, factors)
    b_mat = probe_matrix(g, factors)
    value, h_tilde, iterations = power_iteration(
        saddle_matrix(a_mat, b_mat, lam),
        tol=config.power_tol,
        max_iter=config.power_max_iter,
        seed=np.random.default_rng([config.seed, 2]),
    )
    h_sampled, q_sampled = witness_functions(f, g, a_mat, b_mat, h_tilde, factors, lam)
    return DidResult(
        value=max(float(value), 0.0),  # Rayleigh rounding can leave -1e-18 on zero operators
        h_tilde=h_tilde,
        h_sampled=h_sampled,
        q_sampled=q_sampled,
        iterations=iterations,
        jitter_x=factors.jitter_x,
        jitter_y=factors.jitter_y,
    )


def witness_functions(f, g, a_mat, b_mat, h_tilde, factors, lam):
    """Sampled witness pair (h on f's grid, q on g's grid).

    h expands the whitened eigenvector through the input-landmark kernel
    sections; q applies the shrunk inverse to the reference image of h and
    expands the resulting coefficients the same way on the probe grid.
    """
    lam = check_positive("lam", lam)
    h_coef = sla.solve_triangular(factors.chol_x, h_tilde, lower=False)
    cross_f = kernel_matrix(factors.kernel_x, f.coords, factors.landmarks_x.points)
    h_sampled = cross_f @ h_coef
    q_tilde = b_mat.T @ _shrunk_inverse_apply(b_mat, lam, a_mat @ h_tilde)
    q_coef = sla.solve_triangular(factors.chol_x, q_tilde, lower=False)
    cross_g = kernel_matrix(factors.kernel_x, g.coords, factors.landmarks_x.points)
    q_sampled = cross_g @ q_coef
    return h_sampled, q_sampled


def did_sweep(f, g, lambdas, config=None):
    """Dissimilarity values over several regularization strengths.

    The landmark factorizations and the whitened matrices do not depend on
    lam, so a sweep reuses them and only repeats the small eigensolves.
    Returns an array aligned with ``lambdas``.
    """
    config = config or DidConfig()
    check_same_output_dim(f, g)
    weights = mask_weights(config, f)
    lx, ly = prepare_landmarks(f, g, config)
    factors = factor_landmarks(lx, ly, config.kernel_x, config.kernel_y)
    a_mat = reference_matrix(f, weights, factors)
    b_mat = probe_matrix(g, factors)
    values = []
    for lam in lambdas:
        value, _, _ = power_iteration(
            saddle_matrix(a_mat, b_mat, float(lam)),
            tol=config.power_tol,
            max_iter=config.power_max_iter,
            seed=np.random.default_rng([config.seed, 2]),
        )
        values.append(max(float(value), 0.0))
    return np.asarray(values)


def did_dense_oracle(f, g, weights, kernel_x, kernel_y, lam, size_guard=1024):
    """Quadrature-level dissimilarity through full dense kernel matrices.

    Independent cross-check for :func:`did`: no landmark subsampling, no
    whitening and no power iteration. The resolvent of the probe operator
    is expanded by the Woodbury identity over the probe's sample features,
    and the value is the top eigenvalue of a symmetrized dense matrix. With
    landmarks covering every sample point and observed value, :func:`did`
    must agree with this number.
    """
    check_same_output_dim(f, g)
    lam = check_positive("lam", lam)
    if max(f.n, g.n) > size_guard:
        raise ValueError(
            f"dense oracle limited to {size_guard} samples, got {max(f.n, g.n)}"
        )
    weights = np.asarray(weights, dtype=np.float64).ravel()
    if len(weights) != f.n:
        raise ValueError(f"mask length {len(weights)} does not match n={f.n}")
    cf = f.volume / f.n
    cg = g.volume / g.n
    k_ff = kernel_matrix(kernel_y, f.values, f.values)
    k_gg = kernel_matrix(kernel_y, g.values, g.values)
    k_fg = kernel_matrix(kernel_y, f.values, g.values)
    kx_f = kernel_matrix(kernel_x, f.coords, f.coords)
    kx_g = kernel_matrix(kernel_x, g.coords, g.coords)
    # Woodbury: (lam I + c^2 Phi_g Kx_g Phi_g^*)^{-1} pulled back through f's
    # output features, all in sample coordinates.
    shift = lam * np.eye(g.n) + cg**2 * (kx_g @ k_gg)
    pulled = (k_ff - k_fg @ np.linalg.solve(shift, cg**2 * (kx_g @ k_fg.T))) / lam
    eigvals, eigvecs = np.linalg.eigh(kx_f)
    root = (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.T
    core = root @ (pulled * weights[None, :] * weights[:, None]) @ root
    top = float(np.linalg.eigvalsh((core + core.T) / 2.0)[-1])
    return lam * cf**2 * max(top, 0.0)
