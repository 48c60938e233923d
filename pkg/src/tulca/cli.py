"""Command-line entry points.

Subcommands::

    tulca synth  --seed 7 --out out/                 write a synthetic .tdt
    tulca fit    --input data.tdt --preset tda ...   fit, write model JSON
    tulca export --input data.tdt ...                fit + figures + CSV tables
    tulca update-demo --input data.tdt ...           time cold fit vs updates
    tulca bench  --shape 1086,864,4 --groups 3       mean timings over 10 runs
    tulca serve  --serve 127.0.0.1:8000              run the HTTP service

Input validation problems (bad file, malformed flags, inconsistent
shapes) exit with code 2; everything else nonzero on failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .covariance import LabeledDataset, compute_scatter_cache
from .cp import core_summary
from .datasets import (SyntheticSpec, generate_synthetic, ingest_csv_long,
                       load_tensor_file, save_tensor_file)
from .optimizer import WeightConfig, fit, preset_weights, ulca_baseline, update

EXIT_INPUT_ERROR = 2


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(","))


def _load_dataset(args) -> LabeledDataset:
    if args.input:
        return load_tensor_file(args.input)
    if args.csv:
        if not args.labels:
            raise ValueError("--csv requires --labels <column>")
        return ingest_csv_long(args.csv, labels=args.labels,
                               comparing_mode=args.comparing_mode)
    raise ValueError("need --input <path.tdt> or --csv <path>")


def _resolve_weights(args, ds: LabeledDataset) -> WeightConfig:
    n_groups = int(ds.labels.max()) + 1
    core = _parse_ints(args.core) if args.core else tuple(
        min(3, s) for s in ds.tensor.shape[1:]
    )
    if args.weights:
        d = json.loads(Path(args.weights).read_text()
                       if Path(args.weights).is_file() else args.weights)
        d.setdefault("core_shape", list(core))
        return WeightConfig.from_dict(d)
    kind, _, target = args.preset.partition(":")
    if kind == "custom":
        raise ValueError("--preset custom requires --weights <json>")
    if kind == "variance":
        kind = "variance_all"
    return preset_weights(kind, n_groups, core,
                          target=int(target) if target else 0)


def _model_payload(model, summary) -> dict:
    return {
        "projections": [u.tolist() for u in model.projections],
        "core": {"values": model.core.values.ravel().tolist(),
                 "shape": list(model.core.shape)},
        "objective_per_mode": model.objective_per_mode.tolist(),
        "iterations_per_mode": model.iterations_per_mode.tolist(),
        "converged_per_mode": model.converged_per_mode.tolist(),
        "weights": model.weights_used.to_dict(),
        "cp": {
            "rank": summary.rank,
            "scatter": summary.scatter.tolist(),
            "mode_bars": [[v.tolist() for v in bars]
                          for bars in summary.mode_bars],
            "rel_error": summary.rel_error,
            "degenerate": summary.degenerate,
        },
        "fingerprint": model.fingerprint,
    }


def _cmd_synth(args) -> int:
    ds = generate_synthetic(SyntheticSpec(seed=args.seed))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "synthetic.tdt"
    save_tensor_file(path, ds)
    print(f"wrote {path} shape={ds.tensor.shape} "
          f"groups={np.bincount(ds.labels).tolist()}")
    return 0


def _cmd_fit(args) -> int:
    ds = _load_dataset(args)
    weights = _resolve_weights(args, ds)
    model = fit(ds, weights)
    summary = core_summary(model, rank=args.rank, seed=args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "model.json"
    path.write_text(json.dumps(_model_payload(model, summary)))
    print(f"wrote {path} core={model.core.shape} "
          f"objectives={np.round(model.objective_per_mode, 6).tolist()}")
    return 0


def _cmd_export(args) -> int:
    from . import report

    ds = _load_dataset(args)
    weights = _resolve_weights(args, ds)
    model = fit(ds, weights)
    summary = core_summary(model, rank=args.rank, seed=args.seed)
    created = report.write_report(args.out, model, summary, ds)
    path = Path(args.out) / "model.json"
    path.write_text(json.dumps(_model_payload(model, summary)))
    created.append(path)
    for p in created:
        print(f"wrote {p}")
    return 0


def _cmd_update_demo(args) -> int:
    ds = _load_dataset(args)
    weights = _resolve_weights(args, ds)
    t0 = time.perf_counter()
    cache = compute_scatter_cache(ds)
    model = fit(ds, weights, cache=cache)
    cold = time.perf_counter() - t0
    print(f"cold fit: {cold:.4f} s (cache + {len(weights.core_shape)} eigensolves)")

    rng = np.random.default_rng(args.seed)
    n_groups = int(ds.labels.max()) + 1
    for step in range(3):
        w = WeightConfig(w_tg=rng.random(n_groups), w_bg=rng.random(n_groups),
                         w_bw=rng.random(n_groups),
                         core_shape=weights.core_shape)
        t0 = time.perf_counter()
        model = update(model, cache, w)
        dt = time.perf_counter() - t0
        check = fit(ds, w, cache=cache)
        drift = max(
            float(np.max(np.abs(a - b)))
            for a, b in zip(model.projections, check.projections)
        )
        print(f"update {step + 1}: {dt:.4f} s  "
              f"(max |update - cold refit| = {drift:.2e})")
    return 0


def _cmd_bench(args) -> int:
    shape = _parse_ints(args.shape)
    rng = np.random.default_rng(args.seed)
    values = rng.standard_normal(shape)
    labels = rng.integers(0, args.groups, shape[0])
    from .tensor import DenseTensor

    core = _parse_ints(args.core) if args.core else tuple(
        min(3, s) for s in shape[1:]
    )
    ds = LabeledDataset(tensor=DenseTensor(values), labels=labels)
    w = preset_weights("tda", args.groups, core)
    w_var = preset_weights("variance_all", args.groups, core)

    def timed(fn, runs=args.runs):
        samples = []
        for _ in range(runs):
            t0 = time.perf_counter()
            fn()
            samples.append(time.perf_counter() - t0)
        return float(np.mean(samples)), float(np.std(samples))

    cold_mean, cold_std = timed(lambda: fit(ds, w))
    cache = compute_scatter_cache(ds)
    model = fit(ds, w, cache=cache)
    rng_w = np.random.default_rng(args.seed + 1)

    def one_update():
        wu = WeightConfig(w_tg=rng_w.random(args.groups),
                          w_bg=rng_w.random(args.groups),
                          w_bw=rng_w.random(args.groups), core_shape=core)
        update(model, cache, wu)

    upd_mean, upd_std = timed(one_update)
    base_mean, base_std = timed(lambda: fit(ds, w_var, cache=cache))

    print(f"shape={shape} groups={args.groups} core={core} runs={args.runs}")
    print(f"cold fit:          {cold_mean:.4f} s  (+/- {cold_std:.4f})")
    print(f"weight update:     {upd_mean:.4f} s  (+/- {upd_std:.4f})")
    print(f"variance baseline: {base_mean:.4f} s  (+/- {base_std:.4f})")
    print(f"fit/update ratio:  {cold_mean / upd_mean:.2f}")
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    host, _, port = args.serve.partition(":")
    serve(host or "127.0.0.1", int(port or 8000))
    return 0


def _add_io_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", help="path to a .tdt tensor file")
    p.add_argument("--csv", help="path to a long-format CSV")
    p.add_argument("--labels", help="label column name for --csv")
    p.add_argument("--comparing-mode", type=int, default=1,
                   help="1-based mode carrying the group labels")
    p.add_argument("--core", help="core shape for modes 2..N, e.g. 2,3")
    p.add_argument("--preset", default="tda",
                   help="tda | tcpca:<group> | variance | custom")
    p.add_argument("--weights", help="weight config as JSON text or file")
    p.add_argument("--rank", type=int, default=2, help="CP summary rank")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tulca",
        description="Weighted tensor projections for labeled group comparison.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate the synthetic benchmark tensor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="out")
    p.set_defaults(func=_cmd_synth)

    for name, fn, help_text in [
        ("fit", _cmd_fit, "fit a model and write model.json"),
        ("export", _cmd_export, "fit and write figures + delimited tables"),
        ("update-demo", _cmd_update_demo, "time the cached weight-update path"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _add_io_flags(p)
        p.set_defaults(func=fn)

    p = sub.add_parser("bench", help="mean timings over repeated runs")
    p.add_argument("--shape", required=True, help="tensor shape, e.g. 1086,864,4")
    p.add_argument("--groups", type=int, default=3)
    p.add_argument("--core", help="core shape for modes 2..N")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the JSON-over-HTTP session service")
    p.add_argument("--serve", default="127.0.0.1:8000", metavar="host:port")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
