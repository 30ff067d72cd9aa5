"""Matrix helpers shared by the encoder layers. Matrices are 2-D float64 arrays."""
import numpy as np


class ShapeError(Exception):
    def __init__(self, message):
        super().__init__(message)
        self.message = message


def as_matrix(value, name="matrix", cols=None):
    matrix = np.asarray(value, dtype=np.float64)

    if matrix.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {matrix.shape}")

    if cols is not None and matrix.shape[1] != cols:
        raise ShapeError(f"{name} has {matrix.shape[1]} columns, expected {cols}")

    if not np.all(np.isfinite(matrix)):
        raise ShapeError(f"{name} holds non-finite entries")

    return matrix


def sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


def softmax_rows(matrix):
    """Row-wise softmax with the row maximum subtracted before exponentiation"""

    matrix = as_matrix(matrix, "softmax input")
    if matrix.shape[0] == 0:
        return matrix.copy()

    if matrix.shape[1] == 0:
        raise ShapeError("Cannot normalize rows with no columns")

    shifted = matrix - matrix.max(axis=1, keepdims=True)
    exps = np.exp(shifted)
    return exps / exps.sum(axis=1, keepdims=True)


def softmax(vector):
    return softmax_rows(np.asarray(vector, dtype=np.float64)[None, :])[0]
