"""CP decomposition of the core tensor for the scatter and bar-chart views.

The core tensor is approximated as a sum of R rank-1 outer products via
alternating least squares with SVD-based initialization. Mode-1 factor
rows double as 2D scatter coordinates when R = 2; the unit-norm factors
of the remaining modes describe each component's makeup per mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor import DenseTensor, unfold

ALS_REL_CHANGE_TOL = 1e-7
ALS_MAX_SWEEPS = 200


@dataclass(frozen=True)
class CpFactors:
    """Rank-R factor matrices of an N-mode tensor.

    ``factors[0]`` is ``I_1 x R`` and absorbs all component magnitudes;
    every other factor has unit-norm columns. ``component_norms[r]`` is
    the 2-norm of column r of ``factors[0]``. Components are sorted by
    descending norm with deterministic signs.
    """

    rank: int
    factors: list[np.ndarray]
    component_norms: np.ndarray
    rel_error: np.ndarray
    sweeps: int
    over_rank: bool
    degenerate: bool = False

    def reconstruct(self) -> np.ndarray:
        shape = tuple(f.shape[0] for f in self.factors)
        out = np.zeros(shape)
        for r in range(self.rank):
            comp = self.factors[0][:, r]
            for f in self.factors[1:]:
                comp = np.multiply.outer(comp, f[:, r])
            out += comp
        return out


def _khatri_rao(mats: list[np.ndarray]) -> np.ndarray:
    """Column-wise Kronecker product, first matrix varying slowest."""
    out = mats[0]
    for m in mats[1:]:
        out = (out[:, None, :] * m[None, :, :]).reshape(-1, m.shape[1])
    return out


def _svd_init(values: np.ndarray, rank: int, rng: np.random.Generator) -> list[np.ndarray]:
    factors = []
    for n in range(1, values.ndim + 1):
        mat = unfold(values, n)
        u, _, _ = np.linalg.svd(mat, full_matrices=False)
        if u.shape[1] >= rank:
            f = u[:, :rank].copy()
        else:
            f = np.concatenate(
                [u, rng.standard_normal((u.shape[0], rank - u.shape[1]))], axis=1
            )
        factors.append(f)
    return factors


def _normalize(factors: list[np.ndarray]) -> None:
    """Push all column magnitudes of modes >= 2 into the mode-1 factor."""
    for f in factors[1:]:
        norms = np.linalg.norm(f, axis=0)
        norms = np.where(norms > 0, norms, 1.0)
        f /= norms
        factors[0] *= norms


def _collinear_pair(factors: list[np.ndarray], thresh: float = 0.999) -> tuple[int, int] | None:
    """Find two components whose vectors are parallel in every mode."""
    rank = factors[0].shape[1]
    for r in range(rank):
        for s in range(r + 1, rank):
            parallel = True
            for f in factors:
                a, b = f[:, r], f[:, s]
                na, nb = np.linalg.norm(a), np.linalg.norm(b)
                if na == 0 or nb == 0:
                    continue
                if abs(a @ b) < thresh * na * nb:
                    parallel = False
                    break
            if parallel:
                return r, s
    return None


def _residual(values: np.ndarray, factors: list[np.ndarray]) -> np.ndarray:
    recon = np.zeros_like(values)
    for r in range(factors[0].shape[1]):
        comp = factors[0][:, r]
        for f in factors[1:]:
            comp = np.multiply.outer(comp, f[:, r])
        recon += comp
    return values - recon


def _repair_collapse(values: np.ndarray, factors: list[np.ndarray],
                     pair: tuple[int, int]) -> None:
    """Break a collinear-component trap without increasing the error.

    Components r and s are parallel in every mode, so their mode-1
    columns can be merged into r; component s is then re-seeded with a
    rank-1 HOSVD approximation of the residual, whose optimal magnitude
    can only decrease the reconstruction error.
    """
    r, s = pair
    # Fold s into r: scale s's mode >= 2 vectors onto r's (they are
    # parallel up to sign/scale, and modes >= 2 are unit norm).
    sign = 1.0
    for f in factors[1:]:
        dot = f[:, r] @ f[:, s]
        sign *= np.sign(dot) if dot != 0 else 1.0
    factors[0][:, r] += sign * factors[0][:, s]
    factors[0][:, s] = 0.0

    resid = _residual(values, factors)
    unit_vectors = []
    for n in range(1, resid.ndim + 1):
        u, _, _ = np.linalg.svd(unfold(resid, n), full_matrices=False)
        unit_vectors.append(u[:, 0])
    outer = unit_vectors[0]
    for v in unit_vectors[1:]:
        outer = np.multiply.outer(outer, v)
    scale = float(np.sum(resid * outer))
    factors[0][:, s] = scale * unit_vectors[0]
    for f, v in zip(factors[1:], unit_vectors[1:]):
        f[:, s] = v


def _canonicalize(factors: list[np.ndarray]) -> list[np.ndarray]:
    """Sort components by descending norm; fix signs deterministically.

    Each mode >= 2 column gets its largest-magnitude entry made positive,
    with the flips absorbed into the mode-1 factor so the reconstruction
    is unchanged.
    """
    for f in factors[1:]:
        for r in range(f.shape[1]):
            i = int(np.argmax(np.abs(f[:, r])))
            if f[i, r] < 0:
                f[:, r] *= -1
                factors[0][:, r] *= -1
    norms = np.linalg.norm(factors[0], axis=0)
    order = np.argsort(-norms, kind="stable")
    return [f[:, order] for f in factors]


def cp_als(z: DenseTensor | np.ndarray, rank: int, seed: int = 0,
           *, tol: float = ALS_REL_CHANGE_TOL,
           max_sweeps: int = ALS_MAX_SWEEPS) -> CpFactors:
    """Rank-``rank`` CP decomposition by alternating least squares.

    Deterministic for a fixed seed (the seed only matters when the SVD
    init cannot supply ``rank`` columns for some mode). Relative
    reconstruction error is non-increasing per sweep.
    """
    if rank < 1:
        raise ValueError("rank must be >= 1")
    values = z.values if isinstance(z, DenseTensor) else np.asarray(z, dtype=np.float64)
    order = values.ndim
    norm_z = np.linalg.norm(values)
    over_rank = rank > min(
        unfold(values, n).shape[0] for n in range(1, order + 1)
    )

    if norm_z == 0.0:
        factors = [np.zeros((values.shape[n], rank)) for n in range(order)]
        return CpFactors(rank, factors, np.zeros(rank), np.zeros(1), 0,
                         over_rank, degenerate=True)

    rng = np.random.default_rng(seed)
    factors = _svd_init(values, rank, rng)
    unfoldings = [unfold(values, n) for n in range(1, order + 1)]
    grams = [f.T @ f for f in factors]

    errors = []
    prev_err = np.inf
    sweeps = 0
    repairs_left = 2 if rank > 1 else 0
    for sweep in range(1, max_sweeps + 1):
        for n in range(order):
            others = [factors[m] for m in range(order) if m != n]
            kr = _khatri_rao(others)
            gram = np.ones((rank, rank))
            for m in range(order):
                if m != n:
                    gram *= grams[m]
            factors[n] = unfoldings[n] @ kr @ np.linalg.pinv(gram)
            grams[n] = factors[n].T @ factors[n]
        _normalize(factors)
        grams = [f.T @ f for f in factors]

        err = _rel_error(values, factors, norm_z)
        errors.append(err)
        sweeps = sweep
        if prev_err - err <= tol * max(1.0, prev_err if np.isfinite(prev_err) else 1.0):
            # ALS can stall with two components stuck parallel in every
            # mode; merge them and re-seed one from the residual, which
            # never increases the error, then keep sweeping.
            pair = _collinear_pair(factors) if repairs_left else None
            if pair is None:
                break
            _repair_collapse(values, factors, pair)
            _normalize(factors)
            grams = [f.T @ f for f in factors]
            repairs_left -= 1
            err = _rel_error(values, factors, norm_z)
            errors.append(err)
        prev_err = err

    factors = _canonicalize(factors)
    norms = np.linalg.norm(factors[0], axis=0)
    return CpFactors(rank, factors, norms, np.asarray(errors), sweeps, over_rank)


def _rel_error(values: np.ndarray, factors: list[np.ndarray], norm_z: float) -> float:
    recon = np.zeros_like(values)
    for r in range(factors[0].shape[1]):
        comp = factors[0][:, r]
        for f in factors[1:]:
            comp = np.multiply.outer(comp, f[:, r])
        recon += comp
    return float(np.linalg.norm(values - recon) / norm_z)


@dataclass(frozen=True)
class CoreSummary:
    """Scatter coordinates plus per-mode component bar vectors."""

    scatter: np.ndarray
    mode_bars: list[list[np.ndarray]]
    rel_error: float
    rank: int
    degenerate: bool


def core_summary(model, rank: int = 2, seed: int = 0) -> CoreSummary:
    """Summarize a fitted model's core tensor for display.

    ``scatter`` is the first two mode-1 factor columns (I_1 x 2, or
    I_1 x rank when rank < 2); ``mode_bars[k]`` holds the per-component
    unit vectors for core mode k + 2, giving 2(N-1) bar vectors at the
    default rank for an N-mode core.
    """
    cp = cp_als(model.core, rank, seed)
    scatter = cp.factors[0][:, : min(2, rank)]
    bars = [[f[:, r].copy() for r in range(rank)] for f in cp.factors[1:]]
    rel = float(cp.rel_error[-1]) if cp.rel_error.size else 1.0
    return CoreSummary(
        scatter=scatter,
        mode_bars=bars,
        rel_error=rel if not cp.degenerate else 0.0,
        rank=rank,
        degenerate=cp.degenerate,
    )
