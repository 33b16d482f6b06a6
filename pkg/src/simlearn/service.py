"""HTTP facade binding dataset, model, suggestions, retrieval, and the label log.

One process serves one dataset and one user's similarity model. Label
submission is serialized behind a lock; reads work on immutable snapshots, so
repeated GETs without intervening POSTs are byte-identical.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .active import suggest_candidates
from .dataset import MISSING, Dataset, Instance, drop_sparse, load_dataset, normalize
from .model import ModelState, SimilarityLabel, compute_weights, update_model, weight_ranking
from .retrieval import display_name, knn, search_instances
from .store import LabelLog


@dataclass
class ServiceConfig:
    k_suggest: int = 5
    k_retrieve: int = 6
    min_coverage: float | None = None


@dataclass
class SessionState:
    """One user session: dataset snapshot, current model, label log."""

    dataset: Dataset
    model: ModelState
    log: LabelLog
    config: ServiceConfig
    lock: threading.Lock = field(default_factory=threading.Lock)


def build_session(
    schema_path: str | Path,
    records_path: str | Path,
    labels_path: str | Path | None = None,
    config: ServiceConfig | None = None,
) -> SessionState:
    """Load + normalize the dataset, replay the label log, train the model."""
    config = config or ServiceConfig()
    dataset = load_dataset(schema_path, records_path)
    if config.min_coverage is not None:
        dataset = drop_sparse(dataset, config.min_coverage)
    dataset = normalize(dataset)
    log = LabelLog.open(labels_path if labels_path else Path("labels.jsonl"))
    model = compute_weights(log.labels, dataset)
    return SessionState(dataset=dataset, model=model, log=log, config=config)


class LabelIn(BaseModel):
    a: str
    b: str
    score: float


def _error(status: int, error: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": error, "detail": detail})


def _summary(instance: Instance) -> dict:
    return {"id": instance.id, "display": dict(instance.display)}


def _model_payload(model: ModelState) -> dict:
    payload = model.to_dict()
    payload["ranking"] = [[name, weight] for name, weight in weight_ranking(model)]
    return payload


def create_app(session: SessionState, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="simlearn", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.get("/instances")
    def list_instances(query: str = "", limit: int = 20):
        ids = search_instances(query, session.dataset, limit=limit)
        return {"instances": [_summary(session.dataset.instance(i)) for i in ids]}

    @app.get("/instances/{instance_id}")
    def instance_detail(instance_id: str):
        if instance_id not in session.dataset.by_id:
            return _error(404, "unknown_instance", f"no instance {instance_id!r}")
        inst = session.dataset.instance(instance_id)
        values = {k: (None if v is MISSING else v) for k, v in inst.values.items()}
        return {"id": inst.id, "display": dict(inst.display), "values": values}

    @app.get("/schema")
    def schema():
        return {
            "attributes": [
                {
                    "name": a.name,
                    "kind": a.kind.value,
                    "role": a.role.value,
                    "zero_variance": a.zero_variance,
                    "observed_min": a.observed_min,
                    "observed_max": a.observed_max,
                }
                for a in session.dataset.attributes
            ]
        }

    @app.post("/labels")
    def post_label(body: LabelIn):
        if body.a == body.b:
            return _error(409, "identical_pair", "a label needs two distinct instances")
        for instance_id in (body.a, body.b):
            if instance_id not in session.dataset.by_id:
                return _error(400, "unknown_instance", f"no instance {instance_id!r}")
        if not 0.0 <= body.score <= 1.0:
            return _error(400, "score_out_of_range", f"score must be in [0, 1], got {body.score}")
        with session.lock:
            label = SimilarityLabel(a=body.a, b=body.b, score=body.score,
                                    created_at=time.time(), source="user")
            history = session.log.labels
            session.log.append(label)
            session.model = update_model(session.model, label, history, session.dataset)
            return _model_payload(session.model)

    @app.get("/suggestions")
    def suggestions(anchor: str, side: str = "left", k: int | None = None):
        if anchor not in session.dataset.by_id:
            return _error(404, "unknown_anchor", f"no instance {anchor!r}")
        if side not in ("left", "right"):
            return _error(400, "bad_side", f"side must be left or right, got {side!r}")
        result = suggest_candidates(
            anchor, k or session.config.k_suggest, session.model,
            session.log.labels, session.dataset, side=side,
        )
        return {
            "anchor": result.anchor,
            "side": result.side,
            "rationale_attribute": result.rationale_attribute,
            "candidates": [_summary(session.dataset.instance(c)) for c in result.candidates],
        }

    @app.get("/knn")
    def nearest(query: str, k: int | None = None):
        if query not in session.dataset.by_id:
            return _error(404, "unknown_query", f"no instance {query!r}")
        result = knn(query, k or session.config.k_retrieve, session.model, session.dataset)
        return {
            "query": result.query,
            "neighbors": [
                {
                    "id": n.id,
                    "rank": n.rank,
                    "distance": n.distance,
                    "top_attributes": [[name, value] for name, value in n.top_attributes],
                    "no_evidence": n.no_evidence,
                    "display": dict(session.dataset.instance(n.id).display),
                }
                for n in result.neighbors
            ],
        }

    @app.get("/model")
    def model_state():
        return _model_payload(session.model)

    @app.get("/history")
    def history(limit: int = 10):
        entries = list(reversed(session.log.entries))[: max(limit, 0)]
        return {
            "history": [
                {
                    "a": e.label.a,
                    "b": e.label.b,
                    "a_name": display_name(session.dataset.instance(e.label.a)),
                    "b_name": display_name(session.dataset.instance(e.label.b)),
                    "score": e.label.score,
                    "created_at": e.label.created_at,
                    "source": e.label.source,
                    "superseded": e.superseded,
                }
                for e in entries
            ]
        }

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")
    return app
