"""Session-oriented JSON-over-HTTP service backing the steering UI.

Each session holds a dataset, its scatter cache (built once), the current
weights and fitted model, two named selections of mode-1 slices, and a
revision counter. Weight updates are serialized per session; when several
arrive while a solve is running, stale ones skip their solve and report
the freshest available state instead (slider-drag coalescing).
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .covariance import LabeledDataset, ScatterCache, compute_scatter_cache
from .cp import CoreSummary, core_summary
from .optimizer import TulcaModel, WeightConfig, fit, preset_weights, update
from .tensor import DenseTensor

DEFAULT_RANK = 2


class CreateSessionRequest(BaseModel):
    shape: list[int]
    values: list[float]
    labels: list[int]
    comparing_mode: int = 1
    mode_names: list[str] | None = None
    group_names: list[str] | None = None
    core_shape: list[int] | None = None
    preset: str = "tda"
    rank: int = DEFAULT_RANK
    seed: int = 0


class SetWeightsRequest(BaseModel):
    w_tg: list
    w_bg: list
    w_bw: list
    core_shape: list[int] | None = None
    tied_modes: bool = True
    gamma_tg: float | list[float] | None = None
    gamma_bg: float | list[float] | None = None
    base_revision: int | None = None


class SetSelectionRequest(BaseModel):
    which: str
    indices: list[int]


@dataclass
class Session:
    id: str
    dataset: LabeledDataset
    cache: ScatterCache
    weights: WeightConfig
    model: TulcaModel
    summary: CoreSummary
    rank: int
    seed: int
    revision: int = 1
    selections: dict = field(default_factory=lambda: {"A": [], "B": []})
    lock: threading.Lock = field(default_factory=threading.Lock)
    newest_ticket: int = 0
    _tickets: itertools.count = field(default_factory=itertools.count)

    def take_ticket(self) -> int:
        t = next(self._tickets)
        self.newest_ticket = t
        return t


_sessions: dict[str, Session] = {}
_session_ids = itertools.count(1)
_registry_lock = threading.Lock()


def _get_session(session_id: str) -> Session:
    try:
        return _sessions[session_id]
    except KeyError:
        raise HTTPException(status_code=404, detail=f"unknown session {session_id!r}")


def _summary_payload(session: Session, coalesced: bool = False) -> dict:
    model = session.model
    summary = session.summary
    ds = session.dataset
    payload = {
        "session_id": session.id,
        "revision": session.revision,
        "weights": session.weights.to_dict(),
        "scatter": {
            "values": summary.scatter.ravel().tolist(),
            "shape": list(summary.scatter.shape),
        },
        "labels": ds.labels.tolist(),
        "group_names": list(ds.group_names),
        "mode_names": list(ds.tensor.mode_names),
        "mode_bars": [[vec.tolist() for vec in bars]
                      for bars in summary.mode_bars],
        "projections": [
            {"values": u.ravel().tolist(), "shape": list(u.shape)}
            for u in model.projections
        ],
        "objective_per_mode": model.objective_per_mode.tolist(),
        "converged_per_mode": model.converged_per_mode.tolist(),
        "cp_rel_error": summary.rel_error,
        "cp_degenerate": summary.degenerate,
        "selections": dict(session.selections),
    }
    if coalesced:
        payload["coalesced"] = True
    return payload


def _parse_weights(req: SetWeightsRequest, session: Session) -> WeightConfig:
    core = tuple(req.core_shape) if req.core_shape else session.weights.core_shape
    try:
        return WeightConfig(
            w_tg=np.asarray(req.w_tg, dtype=np.float64),
            w_bg=np.asarray(req.w_bg, dtype=np.float64),
            w_bw=np.asarray(req.w_bw, dtype=np.float64),
            core_shape=core,
            tied_modes=req.tied_modes,
            gamma_tg=req.gamma_tg,
            gamma_bg=req.gamma_bg,
        )
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


def create_app() -> FastAPI:
    """Build the service application (fresh session registry per app)."""
    app = FastAPI(title="tulca service")
    _sessions.clear()

    @app.post("/api/v1/sessions")
    def create_session(req: CreateSessionRequest):
        values = np.asarray(req.values, dtype=np.float64)
        shape = tuple(req.shape)
        if values.size != int(np.prod(shape)):
            raise HTTPException(
                status_code=422,
                detail=f"payload has {values.size} values, shape "
                       f"{shape} needs {int(np.prod(shape))}",
            )
        try:
            tensor = DenseTensor(
                values.reshape(shape),
                mode_names=tuple(req.mode_names or ()),
            )
            ds = LabeledDataset(
                tensor=tensor,
                labels=np.asarray(req.labels, dtype=np.int64),
                comparing_mode=req.comparing_mode,
                group_names=tuple(req.group_names) if req.group_names else (),
            )
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

        n_groups = int(ds.labels.max()) + 1
        core = tuple(req.core_shape) if req.core_shape else tuple(
            min(3, s) for s in ds.tensor.shape[1:]
        )
        kind, _, target = req.preset.partition(":")
        try:
            weights = preset_weights(kind, n_groups, core,
                                     target=int(target) if target else 0)
            cache = compute_scatter_cache(ds)
            model = fit(ds, weights, cache=cache)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        summary = core_summary(model, rank=req.rank, seed=req.seed)

        with _registry_lock:
            sid = f"s{next(_session_ids)}"
        session = Session(id=sid, dataset=ds, cache=cache, weights=weights,
                          model=model, summary=summary, rank=req.rank,
                          seed=req.seed)
        _sessions[sid] = session
        return _summary_payload(session)

    @app.post("/api/v1/sessions/{session_id}/weights")
    def set_weights(session_id: str, req: SetWeightsRequest):
        session = _get_session(session_id)
        weights = _parse_weights(req, session)
        if req.base_revision is not None and req.base_revision != session.revision:
            raise HTTPException(
                status_code=409,
                detail=f"base revision {req.base_revision} is stale "
                       f"(current {session.revision})",
            )
        ticket = session.take_ticket()
        with session.lock:
            # A newer request arrived while this one waited for the lock:
            # skip the solve, report whatever state is freshest.
            if ticket != session.newest_ticket:
                return _summary_payload(session, coalesced=True)
            try:
                model = update(session.model, session.cache, weights)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
            session.model = model
            session.weights = weights
            session.summary = core_summary(model, rank=session.rank,
                                           seed=session.seed)
            session.revision += 1
            return _summary_payload(session)

    @app.get("/api/v1/sessions/{session_id}/summary")
    def get_summary(session_id: str):
        return _summary_payload(_get_session(session_id))

    @app.put("/api/v1/sessions/{session_id}/selection")
    def set_selection(session_id: str, req: SetSelectionRequest):
        session = _get_session(session_id)
        if req.which not in ("A", "B"):
            raise HTTPException(status_code=422,
                                detail="selection name must be 'A' or 'B'")
        n = session.dataset.tensor.shape[0]
        indices = sorted(set(req.indices))
        if indices and not (0 <= indices[0] and indices[-1] < n):
            raise HTTPException(
                status_code=422,
                detail=f"selection indices must lie in [0, {n})",
            )
        session.selections[req.which] = indices
        return {"session_id": session.id, "revision": session.revision,
                "selections": dict(session.selections)}

    @app.get("/api/v1/sessions/{session_id}/difference")
    def get_difference(session_id: str, variable: int | None = None):
        session = _get_session(session_id)
        sel_a = session.selections["A"]
        sel_b = session.selections["B"]
        if not sel_a or not sel_b:
            raise HTTPException(status_code=422,
                                detail="both selections must be non-empty")
        values = session.dataset.tensor.values
        diff = values[sel_b].mean(axis=0) - values[sel_a].mean(axis=0)
        if variable is not None:
            if not 0 <= variable < diff.shape[0]:
                raise HTTPException(
                    status_code=422,
                    detail=f"variable index must lie in [0, {diff.shape[0]})",
                )
            diff = diff[variable]
        return {
            "session_id": session.id,
            "revision": session.revision,
            "variable": variable,
            "values": diff.ravel().tolist(),
            "shape": list(np.shape(diff)),
        }

    return app


def serve(host: str, port: int) -> None:  # pragma: no cover - manual entry
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port)
