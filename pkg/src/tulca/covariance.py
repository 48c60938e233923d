"""Per-mode, per-group scatter matrices and weighted objective assembly.

The scatter cache is a pure function of the labeled tensor and is
independent of the weight configuration, so interactive weight changes
only pay for re-assembly plus the eigensolves.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .tensor import DenseTensor

# A weighted scatter sum counts as zero when its largest entry is below
# this factor times max(1, data scale); the identity then stands in for it.
ZERO_SUM_RTOL = 1e-12


@dataclass(frozen=True)
class LabeledDataset:
    """A dense tensor whose mode-1 slices carry group labels.

    The comparing mode is permuted to mode-1 at construction, so all
    downstream code can assume groups live along the first mode.

    Parameters
    ----------
    tensor : DenseTensor
        Input tensor (any mode order).
    labels : array_like of int
        Group id in ``0..L-1`` per slice along the comparing mode.
    comparing_mode : int
        1-based index of the mode carrying the labels; default 1.
    group_names : tuple of str, optional
        Display name per group.
    """

    tensor: DenseTensor
    labels: np.ndarray
    comparing_mode: int = 1
    group_names: tuple[str, ...] = ()

    def __post_init__(self):
        t = self.tensor
        if not 1 <= self.comparing_mode <= t.order:
            raise ValueError(f"comparing mode {self.comparing_mode} out of range")
        if self.comparing_mode != 1:
            values = np.moveaxis(t.values, self.comparing_mode - 1, 0)
            names = (t.mode_names[self.comparing_mode - 1],) + tuple(
                nm for i, nm in enumerate(t.mode_names)
                if i != self.comparing_mode - 1
            )
            t = DenseTensor(values, names)
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.ndim != 1 or labels.shape[0] != t.shape[0]:
            raise ValueError(
                f"need one label per mode-1 slice ({t.shape[0]}), got {labels.shape}"
            )
        if labels.min() < 0:
            raise ValueError("group labels must be non-negative")
        n_groups = int(labels.max()) + 1
        counts = np.bincount(labels, minlength=n_groups)
        if np.any(counts == 0):
            empty = np.nonzero(counts == 0)[0]
            raise ValueError(f"groups {empty.tolist()} have no slices")
        names = tuple(self.group_names) or tuple(
            f"group-{l + 1}" for l in range(n_groups)
        )
        if len(names) != n_groups:
            raise ValueError(f"{len(names)} group names for {n_groups} groups")
        object.__setattr__(self, "tensor", t)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "comparing_mode", 1)
        object.__setattr__(self, "group_names", names)

    @property
    def n_groups(self) -> int:
        return len(self.group_names)

    @property
    def group_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_groups)

    def fingerprint(self) -> str:
        h = hashlib.sha256()
        h.update(repr(self.tensor.shape).encode())
        h.update(self.tensor.values.tobytes())
        h.update(self.labels.tobytes())
        return h.hexdigest()


@dataclass(frozen=True)
class ScatterCache:
    """Within/between-class scatter per mode (2..N) and group.

    ``within[k][l]`` and ``between[k][l]`` are the ``I_n x I_n`` scatter
    matrices for mode ``n = k + 2`` and group ``l``. ``normalization``
    records the convention: ``"group"`` divides within-group scatter by
    the group's slice count (the per-group ratio form); ``"total"``
    weights each group by its share of all slices instead, so the sums
    over groups reproduce the plain pooled within/between matrices.
    """

    dataset: LabeledDataset
    within: list[list[np.ndarray]]
    between: list[list[np.ndarray]]
    group_means: list[list[np.ndarray]]
    global_means: list[np.ndarray]
    normalization: str
    data_scale: float
    fingerprint: str = field(default="")

    def __post_init__(self):
        if not self.fingerprint:
            object.__setattr__(self, "fingerprint", self.dataset.fingerprint())

    @property
    def mode_sizes(self) -> tuple[int, ...]:
        return self.dataset.tensor.shape[1:]


def _slice_unfoldings(values: np.ndarray, n: int) -> np.ndarray:
    """Stack the mode-n matricizations of every mode-1 slice.

    Returns an array of shape ``(I_1, I_n, prod(I_m, m >= 2, m != n))``.
    Mode-n of the full tensor is mode-(n-1) of each slice; moving that
    axis right after the slice axis keeps everything C-ordered.
    """
    moved = np.moveaxis(values, n - 1, 1)
    return np.ascontiguousarray(moved.reshape(moved.shape[0], moved.shape[1], -1))


def compute_scatter_cache(ds: LabeledDataset,
                          normalization: str = "group") -> ScatterCache:
    """Build the per-mode, per-group scatter cache for ``ds``.

    For each mode n >= 2 and group l, with ``X_i`` the mode-n unfolding
    of slice i and ``M_l`` / ``M`` the group / global mean unfoldings::

        within[l]  = c_l * sum_{i: y_i = l} (X_i - M_l)(X_i - M_l)^T
        between[l] = b_l * (M_l - M)(M_l - M)^T

    where ``(c_l, b_l)`` is ``(1/S_l, 1)`` under ``normalization="group"``
    and ``(1/I_1, S_l/I_1)`` under ``"total"``.
    """
    if normalization not in ("group", "total"):
        raise ValueError(f"unknown normalization {normalization!r}")
    values = ds.tensor.values
    labels = ds.labels
    n_slices = values.shape[0]
    counts = ds.group_counts

    within, between, group_means, global_means = [], [], [], []
    for n in range(2, ds.tensor.order + 1):
        slices = _slice_unfoldings(values, n)
        global_mean = slices.mean(axis=0)
        mode_within, mode_between, mode_means = [], [], []
        for l in range(ds.n_groups):
            members = slices[labels == l]
            mean_l = members.mean(axis=0)
            centered = members - mean_l
            # (I_n, S_l * P) Gram product; BLAS-backed and symmetric by
            # construction up to round-off.
            flat = centered.transpose(1, 0, 2).reshape(centered.shape[1], -1)
            wc = flat @ flat.T
            dev = mean_l - global_mean
            bc = dev @ dev.T
            if normalization == "group":
                wc /= counts[l]
            else:
                wc /= n_slices
                bc *= counts[l] / n_slices
            mode_within.append(0.5 * (wc + wc.T))
            mode_between.append(0.5 * (bc + bc.T))
            mode_means.append(mean_l)
        within.append(mode_within)
        between.append(mode_between)
        group_means.append(mode_means)
        global_means.append(global_mean)

    return ScatterCache(
        dataset=ds,
        within=within,
        between=between,
        group_means=group_means,
        global_means=global_means,
        normalization=normalization,
        data_scale=float(np.abs(values).max()) if values.size else 0.0,
    )


@dataclass(frozen=True)
class ObjectivePair:
    """Assembled numerator/denominator matrices per mode (2..N)."""

    numerators: list[np.ndarray]
    denominators: list[np.ndarray]
    gamma_tg: np.ndarray
    gamma_bg: np.ndarray


def _check_weight_vector(w: np.ndarray, n_groups: int, name: str) -> np.ndarray:
    w = np.asarray(w, dtype=np.float64)
    if w.shape != (n_groups,):
        raise ValueError(f"{name} must have length {n_groups}, got shape {w.shape}")
    if np.any(w < 0):
        raise ValueError(f"{name} contains negative weights")
    return w


def assemble_objective(cache: ScatterCache, weights) -> ObjectivePair:
    """Form the weighted trace-ratio matrices for every mode.

    ``weights`` is a :class:`~tulca.optimizer.WeightConfig`. Per mode n::

        C_tg = sum_l w_tg[l] * within[l] + sum_l w_bw[l] * between[l] + g_tg * I
        C_bg = sum_l w_bg[l] * within[l] + g_bg * I

    Gammas default to 0 but are forced to 1 whenever the corresponding
    weighted sum vanishes, so both matrices stay usable.
    """
    n_groups = cache.dataset.n_groups
    n_modes = len(cache.within)
    zero_tol = ZERO_SUM_RTOL * max(1.0, cache.data_scale)

    numerators, denominators = [], []
    gamma_tg = np.zeros(n_modes)
    gamma_bg = np.zeros(n_modes)
    for k in range(n_modes):
        w_tg, w_bg, w_bw = weights.for_mode(k + 2)
        w_tg = _check_weight_vector(w_tg, n_groups, "target weights")
        w_bg = _check_weight_vector(w_bg, n_groups, "background weights")
        w_bw = _check_weight_vector(w_bw, n_groups, "between-class weights")

        size = cache.within[k][0].shape[0]
        num = np.zeros((size, size))
        den = np.zeros((size, size))
        for l in range(n_groups):
            num += w_tg[l] * cache.within[k][l]
            num += w_bw[l] * cache.between[k][l]
            den += w_bg[l] * cache.within[k][l]

        g_tg = weights.gamma_for_mode(k + 2, "tg")
        g_bg = weights.gamma_for_mode(k + 2, "bg")
        if g_tg is None:
            g_tg = 1.0 if np.abs(num).max() <= zero_tol else 0.0
        if g_bg is None:
            g_bg = 1.0 if np.abs(den).max() <= zero_tol else 0.0
        num += g_tg * np.eye(size)
        den += g_bg * np.eye(size)
        gamma_tg[k] = g_tg
        gamma_bg[k] = g_bg
        numerators.append(num)
        denominators.append(den)

    return ObjectivePair(numerators, denominators, gamma_tg, gamma_bg)
