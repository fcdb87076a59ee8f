"""Scikit-learn style front end.

The measure is asymmetric: the reference signal is fixed first (with its
mask), then probe signals are scored against it. That maps naturally onto
fit/transform, so the estimator composes with pipelines and model-selection
tooling that only rely on the ``get_params``/``set_params`` contract.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .core import DidConfig, did
from .kernels import GAUSSIAN, LAPLACE, KernelSpec
from .signal import SampledSignal, from_array


def as_signal(x):
    """Coerce input to a SampledSignal; accepts (h, w[, p]) value arrays."""
    if isinstance(x, SampledSignal):
        return x
    return from_array(np.asarray(x, dtype=np.float64))


class DID(BaseEstimator):
    """Diffeomorphism-invariant dissimilarity from a fitted reference.

    ``fit`` stores the reference signal; ``transform`` returns one
    dissimilarity value per probe signal. Lower values mean the probe looks
    like a smoothly re-parameterized version of the reference.

    Parameters mirror :class:`did.core.DidConfig`; ``sigma_x`` and ``a_y``
    are the input Gaussian bandwidth and the output Laplace decay rate.
    """

    def __init__(
        self,
        lam=None,
        sigma_x=1.0 / 6.0,
        a_y=5.0,
        m_x=100,
        m_y=16**3,
        landmarks_x="grid",
        landmarks_y="cube",
        mask="blackman",
        power_tol=1e-10,
        power_max_iter=10000,
        seed=0,
    ):
        self.lam = lam
        self.sigma_x = sigma_x
        self.a_y = a_y
        self.m_x = m_x
        self.m_y = m_y
        self.landmarks_x = landmarks_x
        self.landmarks_y = landmarks_y
        self.mask = mask
        self.power_tol = power_tol
        self.power_max_iter = power_max_iter
        self.seed = seed

    def config(self):
        """The DidConfig equivalent of the current parameters."""
        return DidConfig(
            lam=self.lam,
            kernel_x=KernelSpec(GAUSSIAN, self.sigma_x),
            kernel_y=KernelSpec(LAPLACE, self.a_y),
            m_x=self.m_x,
            m_y=self.m_y,
            landmarks_x=self.landmarks_x,
            landmarks_y=self.landmarks_y,
            mask=self.mask,
            power_tol=self.power_tol,
            power_max_iter=self.power_max_iter,
            seed=self.seed,
        )

    def fit(self, X, y=None):
        """Fix the reference signal (and validate the parameters)."""
        self.config()  # fail fast on bad parameters
        self.reference_ = as_signal(X)
        return self

    def _check_fitted(self):
        if not hasattr(self, "reference_"):
            raise NotFittedError("this DID instance is not fitted yet; call fit first")

    def evaluate(self, X):
        """Full result (value plus witnesses) for a single probe signal."""
        self._check_fitted()
        return did(self.reference_, as_signal(X), self.config())

    def transform(self, X):
        """Dissimilarity of each probe in ``X`` from the fitted reference.

        ``X`` may be a single signal/array or a sequence of them; the return
        value is a 1-d array of scores, one per probe.
        """
        self._check_fitted()
        if isinstance(X, (SampledSignal, np.ndarray)):
            X = [X]
        return np.asarray([self.evaluate(g).value for g in X])

    def fit_transform(self, X, y=None, probes=None):
        """Fit on ``X`` and score ``probes`` (defaults to ``X`` itself)."""
        self.fit(X)
        return self.transform(X if probes is None else probes)
