"""Trace-ratio optimization per mode and the fit / fast-update entry points.

Each non-comparing mode gets an independent trace-ratio problem
``max tr(U^T A U) / tr(U^T B U)`` over orthonormal U, solved by the
standard monotone iteration: with the current ratio ``lam``, take the
top-d eigenvectors of ``A - lam * B`` and recompute the ratio.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .covariance import (
    LabeledDataset,
    ScatterCache,
    assemble_objective,
    compute_scatter_cache,
)
from .tensor import DenseTensor, project_to_core, unfold

TRACE_RATIO_TOL = 1e-9
TRACE_RATIO_MAX_ITER = 100
SYMMETRY_TOL = 1e-8
# Ridge applied when the denominator is singular but not the zero matrix
# (the all-zero case is already handled by the automatic gamma).
SINGULAR_RIDGE = 1e-9


@dataclass(frozen=True)
class WeightConfig:
    """Per-group weights, regularization, and target core shape.

    ``w_tg``, ``w_bg``, ``w_bw`` are arrays of shape ``(L,)`` when
    ``tied_modes`` (one triple shared by every mode, the default) or
    ``(M, L)`` with one row per mode n = 2..N otherwise. ``core_shape``
    lists the requested component count per mode n >= 2.
    """

    w_tg: np.ndarray
    w_bg: np.ndarray
    w_bw: np.ndarray
    core_shape: tuple[int, ...]
    tied_modes: bool = True
    gamma_tg: float | np.ndarray | None = None
    gamma_bg: float | np.ndarray | None = None

    def __post_init__(self):
        for name in ("w_tg", "w_bg", "w_bw"):
            w = np.asarray(getattr(self, name), dtype=np.float64)
            expected_ndim = 1 if self.tied_modes else 2
            if w.ndim != expected_ndim:
                raise ValueError(
                    f"{name} must be {expected_ndim}-dimensional "
                    f"(tied_modes={self.tied_modes}), got shape {w.shape}"
                )
            if np.any(w < 0) or np.any(w > 1):
                raise ValueError(f"{name} entries must lie in [0, 1]")
            w.setflags(write=False)
            object.__setattr__(self, name, w)
        object.__setattr__(self, "core_shape", tuple(int(d) for d in self.core_shape))
        if any(d < 1 for d in self.core_shape):
            raise ValueError("core shape entries must be >= 1")
        for name in ("gamma_tg", "gamma_bg"):
            g = getattr(self, name)
            if g is not None and np.any(np.asarray(g, dtype=np.float64) < 0):
                raise ValueError(f"{name} must be >= 0")

    @property
    def n_groups(self) -> int:
        return self.w_tg.shape[-1]

    def for_mode(self, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Weight triple (target, background, between) for mode ``n`` >= 2."""
        if self.tied_modes:
            return self.w_tg, self.w_bg, self.w_bw
        k = n - 2
        return self.w_tg[k], self.w_bg[k], self.w_bw[k]

    def gamma_for_mode(self, n: int, which: str) -> float | None:
        g = self.gamma_tg if which == "tg" else self.gamma_bg
        if g is None:
            return None
        g = np.asarray(g, dtype=np.float64)
        return float(g) if g.ndim == 0 else float(g[n - 2])

    def to_dict(self) -> dict:
        return {
            "w_tg": self.w_tg.tolist(),
            "w_bg": self.w_bg.tolist(),
            "w_bw": self.w_bw.tolist(),
            "core_shape": list(self.core_shape),
            "tied_modes": self.tied_modes,
            "gamma_tg": None if self.gamma_tg is None else np.asarray(self.gamma_tg).tolist(),
            "gamma_bg": None if self.gamma_bg is None else np.asarray(self.gamma_bg).tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "WeightConfig":
        return cls(
            w_tg=np.asarray(d["w_tg"], dtype=np.float64),
            w_bg=np.asarray(d["w_bg"], dtype=np.float64),
            w_bw=np.asarray(d["w_bw"], dtype=np.float64),
            core_shape=tuple(d["core_shape"]),
            tied_modes=bool(d.get("tied_modes", True)),
            gamma_tg=d.get("gamma_tg"),
            gamma_bg=d.get("gamma_bg"),
        )


def preset_weights(kind: str, n_groups: int, core_shape: tuple[int, ...],
                   target: int = 0) -> WeightConfig:
    """Canned weight configurations.

    ``"tda"`` separates all groups while suppressing every group's
    variance; ``"tcpca"`` preserves the ``target`` group's variance while
    suppressing the others'; ``"variance_all"`` preserves everyone's.
    """
    if n_groups < 1:
        raise ValueError("need at least one group")
    ones = np.ones(n_groups)
    zeros = np.zeros(n_groups)
    if kind == "tda":
        w_tg, w_bg, w_bw = zeros, ones, ones
    elif kind == "tcpca":
        if not 0 <= target < n_groups:
            raise ValueError(f"target group {target} out of range")
        e = np.zeros(n_groups)
        e[target] = 1.0
        w_tg, w_bg, w_bw = e, ones - e, zeros
    elif kind == "variance_all":
        w_tg, w_bg, w_bw = ones, zeros, zeros
    else:
        raise ValueError(f"unknown preset {kind!r}")
    return WeightConfig(w_tg=w_tg, w_bg=w_bg, w_bw=w_bw, core_shape=core_shape)


@dataclass(frozen=True)
class TraceRatioResult:
    u: np.ndarray
    ratio: float
    iterations: int
    history: np.ndarray
    converged: bool


def _fix_eigvector_signs(u: np.ndarray) -> np.ndarray:
    """Make each column's largest-magnitude entry positive (ties: lowest index)."""
    u = u.copy()
    for j in range(u.shape[1]):
        col = u[:, j]
        i = int(np.argmax(np.abs(col)))
        if col[i] < 0:
            u[:, j] = -col
    return u


def _top_eigvecs(m: np.ndarray, d: int) -> np.ndarray:
    """Top-d eigenvectors of a symmetric matrix, deterministically signed."""
    k = m.shape[0]
    # Only the leading block is needed; subset drivers skip the full
    # back-transformation and are several times faster on big modes.
    vals, vecs = scipy.linalg.eigh(m, subset_by_index=(k - d, k - 1))
    order = np.argsort(-vals, kind="stable")
    return _fix_eigvector_signs(vecs[:, order])


def trace_ratio_solve(a: np.ndarray, b: np.ndarray, d: int, *,
                      tol: float = TRACE_RATIO_TOL,
                      max_iter: int = TRACE_RATIO_MAX_ITER) -> TraceRatioResult:
    """Maximize ``tr(U^T a U) / tr(U^T b U)`` over orthonormal ``U``.

    Returns the best iterate with its achieved ratio; the ratio sequence
    is non-decreasing. Non-convergence within ``max_iter`` produces a
    warning and ``converged=False`` rather than an error.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrices must be square and same size, got {a.shape}, {b.shape}")
    k = a.shape[0]
    if not 1 <= d <= k:
        raise ValueError(f"target dimension {d} out of range for size {k}")
    for name, m in (("numerator", a), ("denominator", b)):
        if np.abs(m - m.T).max() > SYMMETRY_TOL * max(1.0, np.abs(m).max()):
            raise ValueError(f"{name} matrix is not symmetric")
    a = 0.5 * (a + a.T)
    b = 0.5 * (b + b.T)

    # A singular-but-nonzero denominator would let the ratio blow up on
    # its null space; a tiny ridge keeps the iteration well-posed.
    # Cholesky doubles as a cheap nonsingularity probe.
    b_trace = np.trace(b)
    if b_trace > 0:
        try:
            scipy.linalg.cholesky(b)
        except scipy.linalg.LinAlgError:
            b = b + (SINGULAR_RIDGE * b_trace / k) * np.eye(k)

    lam = 0.0
    history = []
    u = None
    for it in range(1, max_iter + 1):
        u = _top_eigvecs(a - lam * b, d)
        num = float(np.trace(u.T @ a @ u))
        den = float(np.trace(u.T @ b @ u))
        new_lam = num / den
        history.append(new_lam)
        if abs(new_lam - lam) <= tol * max(1.0, abs(new_lam)):
            return TraceRatioResult(u, new_lam, it, np.asarray(history), True)
        lam = new_lam

    warnings.warn(
        f"trace-ratio iteration did not converge within {max_iter} steps "
        f"(last ratio {lam:.6g})",
        RuntimeWarning,
    )
    return TraceRatioResult(u, lam, max_iter, np.asarray(history), False)


@dataclass(frozen=True)
class TulcaModel:
    """Fitted projections, core tensor, and per-mode solver diagnostics."""

    projections: list[np.ndarray]
    core: DenseTensor
    objective_per_mode: np.ndarray
    iterations_per_mode: np.ndarray
    converged_per_mode: np.ndarray
    weights_used: WeightConfig
    fingerprint: str
    gamma_tg: np.ndarray = field(default_factory=lambda: np.zeros(0))
    gamma_bg: np.ndarray = field(default_factory=lambda: np.zeros(0))


def _solve_modes(cache: ScatterCache, weights: WeightConfig) -> TulcaModel:
    ds = cache.dataset
    sizes = cache.mode_sizes
    if len(weights.core_shape) != len(sizes):
        raise ValueError(
            f"core shape {weights.core_shape} does not match "
            f"{len(sizes)} non-comparing modes"
        )
    for size, d in zip(sizes, weights.core_shape):
        if d > size:
            raise ValueError(f"requested {d} components from a mode of length {size}")

    pair = assemble_objective(cache, weights)
    projections, objectives, iters, converged = [], [], [], []
    for k, d in enumerate(weights.core_shape):
        res = trace_ratio_solve(pair.numerators[k], pair.denominators[k], d)
        projections.append(res.u)
        objectives.append(res.ratio)
        iters.append(res.iterations)
        converged.append(res.converged)

    core = project_to_core(ds.tensor, projections)
    return TulcaModel(
        projections=projections,
        core=core,
        objective_per_mode=np.asarray(objectives),
        iterations_per_mode=np.asarray(iters),
        converged_per_mode=np.asarray(converged, dtype=bool),
        weights_used=weights,
        fingerprint=cache.fingerprint,
        gamma_tg=pair.gamma_tg,
        gamma_bg=pair.gamma_bg,
    )


def fit(ds: LabeledDataset, weights: WeightConfig,
        cache: ScatterCache | None = None) -> TulcaModel:
    """Cold fit: build (or reuse) the scatter cache, solve every mode,
    and project the core tensor."""
    if cache is None:
        cache = compute_scatter_cache(ds)
    elif cache.fingerprint != ds.fingerprint():
        raise ValueError("scatter cache was built from a different dataset")
    return _solve_modes(cache, weights)


def update(model: TulcaModel, cache: ScatterCache,
           weights: WeightConfig) -> TulcaModel:
    """Weight-only refit from the cached scatters.

    Equals a cold fit with the same weights; cost is just re-assembly and
    the per-mode eigensolves.
    """
    if cache.fingerprint != model.fingerprint:
        raise ValueError("model and scatter cache come from different datasets")
    return _solve_modes(cache, weights)


def ulca_baseline(ds: LabeledDataset, weights: WeightConfig, d: int) -> TulcaModel:
    """Mode-1 matricized baseline: one projection on the flattened tensor.

    Flattens all non-comparing modes into a single mode of width
    ``prod(I_m, m >= 2)`` and runs the second-order pipeline with a
    single d-column projection, for side-by-side comparison with the
    per-mode fit.
    """
    flat = unfold(ds.tensor.values, 1)
    if d > flat.shape[1]:
        raise ValueError(
            f"requested {d} components from a flattened width of {flat.shape[1]}"
        )
    flat_ds = LabeledDataset(
        tensor=DenseTensor(flat, (ds.tensor.mode_names[0], "flattened")),
        labels=ds.labels,
        group_names=ds.group_names,
    )
    w2 = replace(weights, core_shape=(d,))
    return fit(flat_ds, w2)
