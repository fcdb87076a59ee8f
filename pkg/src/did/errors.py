"""Exception types shared across the package."""

import numpy as np


class SingularKernelMatrixError(np.linalg.LinAlgError):
    """Raised when a landmark kernel matrix cannot be factorized.

    This typically signals duplicate (or numerically coincident) landmark
    points: the Gram matrix is then singular beyond what diagonal jitter
    can repair.
    """


class PowerIterationError(RuntimeError):
    """Raised when power iteration fails to converge within the iteration cap.

    Carries the last iterate so callers can inspect how far the run got.
    """

    def __init__(self, message, last_value, last_vector, iterations):
        super().__init__(message)
        self.last_value = float(last_value)
        self.last_vector = last_vector
        self.iterations = int(iterations)
