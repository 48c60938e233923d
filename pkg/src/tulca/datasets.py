"""Data sources: seeded synthetic generator, .tdt tensor files, and
long-format CSV ingestion for multivariate time series.

The .tdt format is a single streamable file: one line of JSON metadata
(version, shape, mode names, comparing mode, labels, group names), a
newline, then the tensor payload as row-major little-endian float64.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .covariance import LabeledDataset
from .tensor import DenseTensor

TDT_VERSION = 1

# Synthetic data layout: instances x variables x timepoints, two groups.
SYNTH_INSTANCES = 600
SYNTH_GROUP_SIZES = (400, 200)
SYNTH_VARIABLES = 3
SYNTH_TIMEPOINTS = 10
SYNTH_ACTIVE_T = (4, 5, 6)  # 0-based t = 5, 6, 7
STATIC_RANGE = 3.0
GROUP1_BLOB_CENTERS = ((-5.0, 0.0, 0.0), (5.0, 0.0, 0.0))
GROUP1_BLOB_STD = 1.0
GROUP2_BLOB_CENTER = (0.0, 0.0, 12.0)
GROUP2_BLOB_STD = (1.0, 3.0, 0.5)


@dataclass(frozen=True)
class SyntheticSpec:
    """Knobs for the synthetic two-group multivariate time series."""

    seed: int = 0
    n_group1: int = SYNTH_GROUP_SIZES[0]
    n_group2: int = SYNTH_GROUP_SIZES[1]
    n_variables: int = SYNTH_VARIABLES
    n_timepoints: int = SYNTH_TIMEPOINTS


def generate_synthetic(spec: SyntheticSpec = SyntheticSpec()) -> LabeledDataset:
    """Two labeled groups of 3D trajectories, deterministic per seed.

    Every instance keeps one random static position at the inactive
    timepoints. At the three active timepoints, group-1 instances sample
    one of two isotropic blobs (fixed blob membership, fresh draw per
    timepoint) and group-2 instances sample a single anisotropic blob
    that is offset from the group-1 blobs' midpoint.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n_group1 + spec.n_group2
    values = np.empty((n, spec.n_variables, spec.n_timepoints))

    static = rng.uniform(-STATIC_RANGE, STATIC_RANGE, size=(n, spec.n_variables))
    values[:] = static[:, :, None]

    half = spec.n_group1 // 2
    centers = np.asarray(GROUP1_BLOB_CENTERS)[:, : spec.n_variables]
    blob_of = np.repeat([0, 1], [half, spec.n_group1 - half])
    g2_center = np.asarray(GROUP2_BLOB_CENTER)[: spec.n_variables]
    g2_std = np.asarray(GROUP2_BLOB_STD)[: spec.n_variables]
    for t in SYNTH_ACTIVE_T:
        if t >= spec.n_timepoints:
            continue
        g1 = centers[blob_of] + GROUP1_BLOB_STD * rng.standard_normal(
            (spec.n_group1, spec.n_variables)
        )
        g2 = g2_center + g2_std * rng.standard_normal(
            (spec.n_group2, spec.n_variables)
        )
        values[: spec.n_group1, :, t] = g1
        values[spec.n_group1 :, :, t] = g2

    labels = np.repeat([0, 1], [spec.n_group1, spec.n_group2])
    tensor = DenseTensor(
        values,
        (
            "instance",
            "variable",
            "time",
        ),
    )
    return LabeledDataset(tensor, labels, group_names=("Group 1", "Group 2"))


def save_tensor_file(path: str | Path, ds: LabeledDataset) -> None:
    """Write ``ds`` in the .tdt format (JSON header line + float64 payload)."""
    header = {
        "version": TDT_VERSION,
        "shape": list(ds.tensor.shape),
        "mode_names": list(ds.tensor.mode_names),
        "comparing_mode": ds.comparing_mode,
        "labels": ds.labels.tolist(),
        "group_names": list(ds.group_names),
    }
    with open(path, "wb") as f:
        f.write(json.dumps(header).encode("utf-8"))
        f.write(b"\n")
        f.write(ds.tensor.values.astype("<f8").tobytes())


def load_tensor_file(path: str | Path) -> LabeledDataset:
    """Read a .tdt file back into a labeled dataset, validating sizes."""
    with open(path, "rb") as f:
        header_line = f.readline()
        payload = f.read()
    try:
        header = json.loads(header_line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ValueError(f"malformed .tdt header: {exc}") from exc
    if header.get("version") != TDT_VERSION:
        raise ValueError(f"unsupported .tdt version {header.get('version')!r}")
    shape = tuple(int(d) for d in header["shape"])
    expected = int(np.prod(shape)) * 8
    if len(payload) != expected:
        raise ValueError(
            f"payload is {len(payload)} bytes but shape {shape} needs {expected} "
            f"(header ends at byte {len(header_line)})"
        )
    values = np.frombuffer(payload, dtype="<f8").reshape(shape)
    labels = np.asarray(header["labels"], dtype=np.int64)
    if labels.shape[0] != shape[header["comparing_mode"] - 1]:
        raise ValueError(
            f"{labels.shape[0]} labels for a comparing mode of length "
            f"{shape[header['comparing_mode'] - 1]}"
        )
    return LabeledDataset(
        DenseTensor(values, tuple(header["mode_names"])),
        labels,
        comparing_mode=int(header["comparing_mode"]),
        group_names=tuple(header["group_names"]),
    )


def ingest_csv_long(
    path: str | Path,
    *,
    time_col: str = "time",
    instance_col: str = "instance",
    variable_col: str = "variable",
    value_col: str = "value",
    labels: dict | str | None = None,
    comparing_mode: int = 1,
    fill: str = "error",
) -> LabeledDataset:
    """Build a time x instance x variable tensor from a long-format CSV.

    ``labels`` maps each comparing-mode key to a group name, or names a
    CSV column holding the group per row. ``fill`` controls missing grid
    cells: ``"error"``, ``"zero"``, or ``"mean"`` (global mean).
    """
    if fill not in ("error", "zero", "mean"):
        raise ValueError(f"unknown fill policy {fill!r}")
    df = pd.read_csv(path)
    for col in (time_col, instance_col, variable_col, value_col):
        if col not in df.columns:
            raise ValueError(f"missing column {col!r}")
    df[value_col] = pd.to_numeric(df[value_col], errors="raise")

    key_cols = [time_col, instance_col, variable_col]
    dupes = df.duplicated(subset=key_cols)
    if dupes.any():
        first = df.loc[dupes.idxmax(), key_cols].tolist()
        raise ValueError(f"duplicate (time, instance, variable) key: {tuple(first)}")

    axes = [sorted(df[c].unique().tolist()) for c in key_cols]
    shape = tuple(len(a) for a in axes)
    index = [{v: i for i, v in enumerate(a)} for a in axes]

    values = np.full(shape, np.nan)
    coords = tuple(
        df[c].map(index[k]).to_numpy() for k, c in enumerate(key_cols)
    )
    values[coords] = df[value_col].to_numpy(dtype=np.float64)

    missing = np.isnan(values)
    n_missing = int(missing.sum())
    if n_missing:
        if fill == "error":
            t, s, v = (int(i[0]) for i in np.nonzero(missing))
            raise ValueError(
                f"{n_missing} missing cells; first at "
                f"(time={axes[0][t]}, instance={axes[1][s]}, variable={axes[2][v]})"
            )
        values[missing] = 0.0 if fill == "zero" else df[value_col].mean()

    comparing_values = axes[comparing_mode - 1]
    if labels is None:
        label_ids = np.zeros(len(comparing_values), dtype=np.int64)
        group_names = ("all",)
    else:
        if isinstance(labels, str):
            if labels not in df.columns:
                raise ValueError(f"missing label column {labels!r}")
            sub = df[[key_cols[comparing_mode - 1], labels]].drop_duplicates()
            mapping = dict(zip(sub[key_cols[comparing_mode - 1]], sub[labels]))
        else:
            mapping = labels
        group_names = tuple(dict.fromkeys(mapping[v] for v in comparing_values))
        name_to_id = {g: i for i, g in enumerate(group_names)}
        label_ids = np.asarray(
            [name_to_id[mapping[v]] for v in comparing_values], dtype=np.int64
        )

    tensor = DenseTensor(values, ("time", "instance", "variable"))
    return LabeledDataset(tensor, label_ids, comparing_mode=comparing_mode,
                          group_names=group_names)
