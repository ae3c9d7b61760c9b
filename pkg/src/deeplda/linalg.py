"""Dense float64 matrix helpers with explicit shape checking.

A "matrix" throughout the package is a 2-D, C-contiguous float64
``numpy.ndarray`` treated as immutable. These wrappers exist to give every
dimension mismatch a uniform, shape-naming error instead of numpy's
assorted messages, and to pin down the numeric conventions: 64-bit floats
everywhere, and per-platform bitwise reproducibility (repeated runs on one
machine produce identical bits; numpy's BLAS owns the accumulation order).
"""

from __future__ import annotations

import numpy as np

from .exceptions import ShapeError

Matrix = np.ndarray


def as_matrix(values) -> Matrix:
    """Coerce nested sequences or an array to a 2-D float64 matrix."""
    m = np.asarray(values, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got {m.ndim}-D shape {m.shape}")
    return np.ascontiguousarray(m)


def _require_2d(name: str, m: np.ndarray) -> None:
    if not isinstance(m, np.ndarray) or m.ndim != 2:
        raise ShapeError(f"{name} must be a 2-D array, got {getattr(m, 'shape', None)}")


def matmul(a: Matrix, b: Matrix) -> Matrix:
    """Matrix product a @ b; requires a.cols == b.rows."""
    _require_2d("a", a)
    _require_2d("b", b)
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    return a @ b

def transpose(a: Matrix) -> Matrix:
    """Transpose as a fresh row-major matrix, (i, j) -> (j, i)."""
    _require_2d("a", a)
    return np.ascontiguousarray(a.T)


def add_row_broadcast(a: Matrix, bias: Matrix) -> Matrix:
    """Add a (1, cols) bias row to every row of a."""
    _require_2d("a", a)
    _require_2d("bias", bias)
    if bias.shape != (1, a.shape[1]):
        raise ShapeError(
            f"bias must have shape (1, {a.shape[1]}) to broadcast over {a.shape}, got {bias.shape}"
        )
    return a + bias
