"""Dense N-order tensors: matricization, folding, and n-mode products.

Matricization follows the standard cycling convention: the rows of the
mode-n unfolding index mode-n, and the columns run over the remaining
modes in increasing order with higher-numbered modes varying fastest.
This matches row-major (C order) storage, so a mode-1 unfolding of a
C-contiguous array is just a reshape.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _as_tensor_array(values) -> np.ndarray:
    arr = np.ascontiguousarray(values, dtype=np.float64)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DenseTensor:
    """Immutable dense N-order tensor with named modes.

    Parameters
    ----------
    values : array_like
        N-dimensional array of finite real values, N >= 2.
    mode_names : tuple of str, optional
        Display name per mode; defaults to ``mode-1 .. mode-N``.
    """

    values: np.ndarray
    mode_names: tuple[str, ...] = ()

    def __post_init__(self):
        arr = _as_tensor_array(self.values)
        if arr.ndim < 2:
            raise ValueError(f"tensor must have at least 2 modes, got {arr.ndim}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor contains non-finite values")
        names = tuple(self.mode_names) or tuple(
            f"mode-{n}" for n in range(1, arr.ndim + 1)
        )
        if len(names) != arr.ndim:
            raise ValueError(
                f"{len(names)} mode names given for a {arr.ndim}-mode tensor"
            )
        object.__setattr__(self, "values", arr)
        object.__setattr__(self, "mode_names", names)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def order(self) -> int:
        return self.values.ndim

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DenseTensor)
            and self.shape == other.shape
            and np.array_equal(self.values, other.values)
        )


@dataclass(frozen=True)
class Matricized:
    """Mode-n unfolding of a dense tensor.

    ``values`` is the ``I_n x prod(I_m, m != n)`` matrix; ``source_shape``
    keeps the originating tensor shape so the unfolding can be folded back.
    """

    mode: int
    values: np.ndarray
    source_shape: tuple[int, ...]
    column_order: str = field(default="remaining modes ascending, last fastest")

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]


def _check_mode(n: int, order: int) -> None:
    if not 1 <= n <= order:
        raise ValueError(f"mode index {n} out of range for a {order}-mode tensor")


def matricize(x: DenseTensor, n: int) -> Matricized:
    """Unfold tensor ``x`` along mode ``n`` (1-based)."""
    _check_mode(n, x.order)
    mat = unfold(x.values, n)
    return Matricized(mode=n, values=mat, source_shape=x.shape)


def unfold(values: np.ndarray, n: int) -> np.ndarray:
    """Mode-n unfolding of a raw ndarray (1-based mode index)."""
    _check_mode(n, values.ndim)
    return np.moveaxis(values, n - 1, 0).reshape(values.shape[n - 1], -1)


def fold(m: Matricized | np.ndarray, n: int, shape: tuple[int, ...],
         mode_names: tuple[str, ...] = ()) -> DenseTensor:
    """Inverse of :func:`matricize` under the same column convention."""
    mat = m.values if isinstance(m, Matricized) else np.asarray(m)
    shape = tuple(shape)
    _check_mode(n, len(shape))
    expected_cols = int(np.prod(shape)) // shape[n - 1]
    if mat.shape[0] != shape[n - 1] or mat.shape[1] != expected_cols:
        raise ValueError(
            f"cannot fold a {mat.shape[0]}x{mat.shape[1]} matrix along mode {n} "
            f"of shape {shape} (expected {shape[n - 1]}x{expected_cols})"
        )
    moved = (shape[n - 1],) + shape[: n - 1] + shape[n:]
    values = np.moveaxis(mat.reshape(moved), 0, n - 1)
    return DenseTensor(values, mode_names)


def mode_product(x: DenseTensor, u: np.ndarray, n: int) -> DenseTensor:
    """n-mode product of ``x`` with matrix ``u``.

    ``u`` has shape ``(I_n, I_n')``; the result replaces mode-n length
    ``I_n`` by ``I_n'``. Implemented as ``fold(u.T @ unfold(x, n))``.
    """
    _check_mode(n, x.order)
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 2 or u.shape[0] != x.shape[n - 1]:
        raise ValueError(
            f"mode-{n} product needs a matrix with {x.shape[n - 1]} rows, "
            f"got shape {u.shape}"
        )
    mat = u.T @ unfold(x.values, n)
    new_shape = x.shape[: n - 1] + (u.shape[1],) + x.shape[n:]
    return fold(mat, n, new_shape, x.mode_names)


def project_to_core(x: DenseTensor, projections: list[np.ndarray]) -> DenseTensor:
    """Project every mode but the first: ``Z = X x_2 U(2) ... x_N U(N)``.

    ``projections[k]`` is the ``I_n x I_n'`` matrix for mode ``n = k + 2``;
    columns may not exceed rows (no mode inflation).
    """
    if len(projections) != x.order - 1:
        raise ValueError(
            f"expected {x.order - 1} projection matrices, got {len(projections)}"
        )
    z = x
    for k, u in enumerate(projections):
        n = k + 2
        u = np.asarray(u)
        if u.ndim != 2 or u.shape[1] > u.shape[0]:
            raise ValueError(
                f"mode-{n} projection must be tall or square, got shape {u.shape}"
            )
        z = mode_product(z, u, n)
    return z
