"""Diffeomorphism-invariant dissimilarity (DID) between sampled signals.

Signals are maps from a coordinate domain to an output space (an image maps
pixel positions to colors). The dissimilarity searches for a smooth region
selector on the reference signal and a smooth reweighting of the probe
signal that reproduce the same output statistics; its value stays small
exactly when the probe is a smooth re-parameterization of the reference.
"""

from .core import (
    DidConfig,
    DidResult,
    LandmarkFactors,
    did,
    did_dense_oracle,
    did_sweep,
    factor_landmarks,
    power_iteration,
    probe_matrix,
    reference_matrix,
    saddle_matrix,
    witness_functions,
)
from .errors import PowerIterationError, SingularKernelMatrixError
from .estimator import DID, as_signal
from .kernels import (
    GAUSSIAN,
    LAPLACE,
    KernelSpec,
    cholesky_upper,
    eval_kernel,
    kernel_matrix,
)
from .nystrom import (
    Landmarks,
    color_box,
    dedup_points,
    select_landmarks_x,
    select_landmarks_y,
)
from .oracle import RandomRegime, dense_top_eig, random_regime
from .signal import (
    IMAGENET_MEAN,
    IMAGENET_STD,
    SampledSignal,
    blackman_mask,
    extract_patch,
    from_array,
    grid_coordinates,
    load_image,
    save_image,
    synthetic_texture,
    uniform_mask,
)
from .warp import (
    WarpField,
    admissible_modes,
    apply_warp,
    random_warp_field,
    rmse,
    rotate,
)

__version__ = "0.1.0"

__all__ = [
    "DID",
    "DidConfig",
    "DidResult",
    "GAUSSIAN",
    "IMAGENET_MEAN",
    "IMAGENET_STD",
    "KernelSpec",
    "LAPLACE",
    "LandmarkFactors",
    "Landmarks",
    "PowerIterationError",
    "RandomRegime",
    "SampledSignal",
    "SingularKernelMatrixError",
    "WarpField",
    "admissible_modes",
    "apply_warp",
    "as_signal",
    "blackman_mask",
    "cholesky_upper",
    "color_box",
    "dedup_points",
    "dense_top_eig",
    "did",
    "did_dense_oracle",
    "did_sweep",
    "eval_kernel",
    "extract_patch",
    "factor_landmarks",
    "from_array",
    "grid_coordinates",
    "kernel_matrix",
    "load_image",
    "power_iteration",
    "probe_matrix",
    "random_regime",
    "random_warp_field",
    "reference_matrix",
    "rmse",
    "rotate",
    "saddle_matrix",
    "save_image",
    "select_landmarks_x",
    "select_landmarks_y",
    "synthetic_texture",
    "uniform_mask",
    "witness_functions",
]
