"""Acceptance gate: every criterion prints one PASS/FAIL line.

Run with ``pytest -v -s tests/test_acceptance.py`` to see the lines as
they happen; thresholds are frozen and must not be loosened.
"""

import time

import numpy as np
import pytest
from sklearn.cluster import KMeans
from sklearn.metrics import silhouette_score

from tulca.covariance import LabeledDataset, compute_scatter_cache
from tulca.cp import core_summary, cp_als
from tulca.datasets import SYNTH_ACTIVE_T, SyntheticSpec, generate_synthetic
from tulca.optimizer import (WeightConfig, fit, preset_weights,
                             trace_ratio_solve, update)
from tulca.tensor import DenseTensor, fold, unfold

CORE_SHAPE = (2, 3)  # variables x timepoints components for the 2D scatter


def _check(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'}: {name}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"{name} {detail}"


@pytest.fixture(scope="module")
def synthetic():
    ds = generate_synthetic(SyntheticSpec(seed=0))
    return ds, compute_scatter_cache(ds)


def _scatter_metrics(ds, cache, weights, seed=0):
    model = fit(ds, weights, cache=cache)
    pts = core_summary(model, rank=2, seed=seed).scatter
    labels = ds.labels
    cents = np.stack([pts[labels == l].mean(axis=0) for l in (0, 1)])
    spread = np.mean([
        np.linalg.norm(pts[labels == l] - cents[l], axis=1).mean()
        for l in (0, 1)
    ])
    separation = float(np.linalg.norm(cents[0] - cents[1]) / spread)
    g1 = pts[labels == 0]
    km = KMeans(n_clusters=2, n_init=10, random_state=0).fit(g1)
    sil = float(silhouette_score(g1, km.labels_))
    return model, pts, separation, sil


# ------------------------------------------------- synthetic pattern suite


def test_criterion_discriminant_preset_separates_without_subgroups(synthetic):
    ds, cache = synthetic
    t0 = time.perf_counter()
    _, _, separation, sil = _scatter_metrics(
        ds, cache, preset_weights("tda", 2, CORE_SHAPE))
    elapsed = time.perf_counter() - t0
    _check("discriminant preset: group separation >= 3.0",
           separation >= 3.0, f"separation={separation:.2f}")
    _check("discriminant preset: group-1 2-means silhouette < 0.4",
           sil < 0.4, f"silhouette={sil:.3f}")
    _check("discriminant preset: runtime < 5 s", elapsed < 5.0,
           f"{elapsed:.2f} s")


def test_criterion_mixed_preset_reveals_subgroups(synthetic):
    ds, cache = synthetic
    w = WeightConfig(w_tg=np.array([1.0, 0.0]), w_bg=np.array([0.0, 1.0]),
                     w_bw=np.array([1.0, 1.0]), core_shape=CORE_SHAPE)
    _, _, separation, sil = _scatter_metrics(ds, cache, w)
    _check("mixed preset: group separation >= 3.0",
           separation >= 3.0, f"separation={separation:.2f}")
    _check("mixed preset: group-1 2-means silhouette >= 0.5",
           sil >= 0.5, f"silhouette={sil:.3f}")


def test_criterion_variance_preset_tracks_static_timepoints(synthetic):
    ds, cache = synthetic
    model = fit(ds, preset_weights("variance_all", 2, CORE_SHAPE), cache=cache)
    u_time = model.projections[1]  # time mode
    # the leading component drives the dominant scatter direction; its
    # large loadings must all sit on the static (inactive) timepoints
    lead = np.abs(u_time[:, 0])
    static = sorted(set(range(u_time.shape[0])) - set(SYNTH_ACTIVE_T))
    active = sorted(SYNTH_ACTIVE_T)
    ok = lead[static].min() > lead[active].max()
    _check("variance preset: largest time-mode loadings on static timepoints",
           ok, f"static min={lead[static].min():.3f} "
               f"active max={lead[active].max():.3f}")


def test_criterion_contrastive_preset_emphasizes_target_variance(synthetic):
    ds, cache = synthetic
    model = fit(ds, preset_weights("tcpca", 2, CORE_SHAPE, target=0),
                cache=cache)
    pts = core_summary(model, rank=2, seed=0).scatter
    var_g1 = float(pts[ds.labels == 0].var(axis=0).sum())
    var_g2 = float(pts[ds.labels == 1].var(axis=0).sum())
    ratio = var_g1 / var_g2
    _check("contrastive preset: group-1 scatter variance >= 5x group-2",
           ratio >= 5.0, f"ratio={ratio:.1f}")


# --------------------------------------------------- solver/algebra suite


def test_criterion_projection_orthonormality(synthetic):
    ds, cache = synthetic
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(10):
        w = WeightConfig(w_tg=rng.random(2), w_bg=rng.random(2),
                         w_bw=rng.random(2), core_shape=CORE_SHAPE)
        model = fit(ds, w, cache=cache)
        for u in model.projections:
            worst = max(worst, float(np.abs(u.T @ u - np.eye(u.shape[1])).max()))
    _check("solver: projection orthonormality <= 1e-8", worst <= 1e-8,
           f"max deviation={worst:.1e}")


def test_criterion_trace_ratio_monotonicity():
    rng = np.random.default_rng(1)
    ok = True
    for _ in range(50):
        k = int(rng.integers(3, 9))
        ga = rng.standard_normal((k, k))
        gb = rng.standard_normal((k, k))
        res = trace_ratio_solve(ga @ ga.T, gb @ gb.T + 0.1 * np.eye(k),
                                int(rng.integers(1, k)))
        ok &= bool(np.all(np.diff(res.history) >= -1e-12))
    _check("solver: trace-ratio iterates are non-decreasing", ok)


def test_criterion_brute_force_optimality():
    rng = np.random.default_rng(2)
    ga = rng.standard_normal((3, 3))
    gb = rng.standard_normal((3, 3))
    a = ga @ ga.T
    b = gb @ gb.T + 0.2 * np.eye(3)
    res = trace_ratio_solve(a, b, 1)
    v = rng.standard_normal((10_000, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    best = float(np.max(np.einsum("ij,jk,ik->i", v, a, v)
                        / np.einsum("ij,jk,ik->i", v, b, v)))
    _check("solver: beats 10^4 random unit vectors within 1e-6",
           res.ratio >= best - 1e-6,
           f"solver={res.ratio:.8f} sampled max={best:.8f}")


def test_criterion_weight_scaling_invariance(synthetic):
    ds, cache = synthetic
    rng = np.random.default_rng(3)
    base = dict(w_tg=rng.random(2), w_bg=rng.random(2) * 0.5 + 0.4,
                w_bw=rng.random(2))
    m1 = fit(ds, WeightConfig(core_shape=CORE_SHAPE, gamma_tg=0.0,
                              gamma_bg=0.0, **base), cache=cache)
    m2 = fit(ds, WeightConfig(core_shape=CORE_SHAPE, gamma_tg=0.0,
                              gamma_bg=0.0,
                              **{k: 0.5 * v for k, v in base.items()}),
             cache=cache)
    gap = max(float(np.linalg.norm(u1 @ u1.T - u2 @ u2.T))
              for u1, u2 in zip(m1.projections, m2.projections))
    _check("solver: weight scaling leaves subspaces unchanged (<= 1e-6)",
           gap <= 1e-6, f"max Frobenius gap={gap:.1e}")


def test_criterion_update_equals_cold_fit(synthetic):
    ds, cache = synthetic
    model = fit(ds, preset_weights("tda", 2, CORE_SHAPE), cache=cache)
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(10):
        w = WeightConfig(w_tg=rng.random(2), w_bg=rng.random(2),
                         w_bw=rng.random(2), core_shape=CORE_SHAPE)
        fast = update(model, cache, w)
        cold = fit(ds, w)
        worst = max(worst, max(
            float(np.abs(a - b).max())
            for a, b in zip(fast.projections, cold.projections)))
        worst = max(worst, float(np.abs(fast.core.values
                                        - cold.core.values).max()))
    _check("solver: cached update equals cold fit (<= 1e-10)",
           worst <= 1e-10, f"max deviation={worst:.1e}")


def test_criterion_scatter_matrices_match_loop_oracle():
    rng = np.random.default_rng(5)
    values = rng.standard_normal((6, 3, 4))
    labels = np.array([0, 0, 0, 1, 1, 1])
    ds = LabeledDataset(tensor=DenseTensor(values), labels=labels)
    cache = compute_scatter_cache(ds)
    worst = 0.0
    for n in (2, 3):
        slices = [unfold(values[i], n - 1) for i in range(6)]
        gmean = np.mean(slices, axis=0)
        for l in (0, 1):
            members = [s for s, y in zip(slices, labels) if y == l]
            lmean = np.mean(members, axis=0)
            wc = sum((s - lmean) @ (s - lmean).T for s in members) / len(members)
            bc = (lmean - gmean) @ (lmean - gmean).T
            worst = max(worst,
                        float(np.abs(cache.within[n - 2][l] - wc).max()),
                        float(np.abs(cache.between[n - 2][l] - bc).max()))
    _check("covariance: scatter cache matches nested-loop oracle (<= 1e-10)",
           worst <= 1e-10, f"max deviation={worst:.1e}")


def test_criterion_fold_inverts_matricize():
    rng = np.random.default_rng(6)
    v = rng.standard_normal((4, 5, 3, 2))
    ok = all(
        np.array_equal(fold(unfold(v, n), n, v.shape).values, v)
        for n in range(1, 5)
    )
    _check("tensor: fold(matricize) is exact", ok)


def test_criterion_cp_rank_one_recovery():
    rng = np.random.default_rng(7)
    vecs = [rng.standard_normal(s) for s in (6, 5, 4)]
    values = np.multiply.outer(np.multiply.outer(vecs[0], vecs[1]), vecs[2])
    res = cp_als(values, rank=1)
    err = float(np.abs(res.reconstruct() - values).max())
    _check("cp: rank-1 tensor recovered exactly (<= 1e-8)",
           err <= 1e-8, f"max error={err:.1e}")


# --------------------------------------------------------- performance


def test_criterion_performance_large_shape():
    rng = np.random.default_rng(0)
    values = rng.standard_normal((1086, 864, 4))
    labels = rng.integers(0, 3, 1086)
    t0 = time.perf_counter()
    ds = LabeledDataset(tensor=DenseTensor(values), labels=labels)
    cache = compute_scatter_cache(ds)
    model = fit(ds, preset_weights("tda", 3, (3, 3)), cache=cache)
    cold = time.perf_counter() - t0

    rng_w = np.random.default_rng(1)
    upd_times = []
    for _ in range(3):
        w = WeightConfig(w_tg=rng_w.random(3), w_bg=rng_w.random(3),
                         w_bw=rng_w.random(3), core_shape=(3, 3))
        t0 = time.perf_counter()
        update(model, cache, w)
        upd_times.append(time.perf_counter() - t0)
    upd = float(np.median(upd_times))

    _check("performance: 1086x864x4 cold fit <= 60 s", cold <= 60.0,
           f"{cold:.2f} s")
    _check("performance: 1086x864x4 weight update <= 3 s", upd <= 3.0,
           f"{upd:.2f} s")
    _check("performance: update >= 5x faster than cold fit",
           cold / upd >= 5.0, f"ratio={cold / upd:.2f}")


def test_criterion_performance_small_shape():
    rng = np.random.default_rng(0)
    values = rng.standard_normal((480, 10, 23))
    labels = rng.integers(0, 8, 480)
    ds = LabeledDataset(tensor=DenseTensor(values), labels=labels)
    cache = compute_scatter_cache(ds)
    model = fit(ds, preset_weights("tda", 8, (3, 3)), cache=cache)
    rng_w = np.random.default_rng(1)
    times = []
    for _ in range(5):
        w = WeightConfig(w_tg=rng_w.random(8), w_bg=rng_w.random(8),
                         w_bw=rng_w.random(8), core_shape=(3, 3))
        t0 = time.perf_counter()
        update(model, cache, w)
        times.append(time.perf_counter() - t0)
    upd = float(np.median(times))
    _check("performance: 480x10x23 weight update <= 0.1 s", upd <= 0.1,
           f"{upd * 1e3:.1f} ms")


def test_criterion_update_scaling_slope():
    rng = np.random.default_rng(2)
    sizes = [250, 500, 1000, 2000]
    times = []
    for width in sizes:
        values = rng.standard_normal((400, width, 4))
        labels = rng.integers(0, 3, 400)
        ds = LabeledDataset(tensor=DenseTensor(values), labels=labels)
        cache = compute_scatter_cache(ds)
        model = fit(ds, preset_weights("tda", 3, (3, 3)), cache=cache)
        w = WeightConfig(w_tg=np.array([0.5, 0.3, 0.2]),
                         w_bg=np.array([0.1, 0.9, 0.4]),
                         w_bw=np.array([1.0, 0.7, 0.2]), core_shape=(3, 3))
        per_size = []
        for _ in range(2):
            t0 = time.perf_counter()
            update(model, cache, w)
            per_size.append(time.perf_counter() - t0)
        times.append(min(per_size))
    slope = float(np.polyfit(np.log(sizes), np.log(times), 1)[0])
    _check("performance: update time vs mode-2 width has log-log slope in "
           "[2.0, 3.5]", 2.0 <= slope <= 3.5, f"slope={slope:.2f}")
