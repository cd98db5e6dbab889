"""HTTP service wrapping the verification core.

Stateless endpoints (graph construction, sorting, retrieval, selection,
evaluation) take their inputs inline; /predict serves the checkpoint loaded
at startup or via POST /checkpoint. The CLI can delegate its stateless
commands here with --server.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from . import __version__
from .datamodel import (
    ParseError,
    SchemaError,
    evidence_set_from_json,
    instance_from_json,
    prediction_from_json,
    prediction_to_json,
)
from .graphs import build_graph, graph_to_json
from .metrics import evaluate
from .model import load_checkpoint, predict
from .ordering import sort_evidence
from .retrieval import Document, retrieve_documents, select_evidence

DEFAULT_TOP_DOCS = 10
DEFAULT_TOP_SENTENCES = 5


class GraphRequest(BaseModel):
    document: dict
    origin: str = "evidence"


class SortRequest(BaseModel):
    document: dict


class SortResponse(BaseModel):
    node_order: list[int]
    sentence_order: list[str]


class CorpusDocument(BaseModel):
    doc_id: str
    title: str
    sentences: list[str]


class RetrieveRequest(BaseModel):
    claim: str
    corpus: list[CorpusDocument]
    m: int = DEFAULT_TOP_DOCS


class RetrieveResponse(BaseModel):
    documents: list[str]


class SelectRequest(BaseModel):
    claim: str
    corpus: list[CorpusDocument]
    m: int = DEFAULT_TOP_DOCS
    k: int = DEFAULT_TOP_SENTENCES


class SelectResponse(BaseModel):
    evidence: list[tuple[str, int, float]]


class PredictRequest(BaseModel):
    document: dict
    instance_id: str = "request"


class PredictResponse(BaseModel):
    instance_id: str
    predicted_label: str
    probabilities: list[float]
    predicted_evidence: list[tuple[str, int]]


class EvaluateRequest(BaseModel):
    predictions: list[dict]
    gold: list[dict]
    k_ev: int = DEFAULT_TOP_SENTENCES


class CheckpointRequest(BaseModel):
    path: str


class HealthResponse(BaseModel):
    status: str
    version: str
    checkpoint_loaded: bool
    mode: Optional[str] = None


def _parse_document(obj: dict):
    try:
        return evidence_set_from_json(obj)
    except (ParseError, SchemaError) as e:
        raise HTTPException(status_code=422, detail=str(e)) from e


def create_app(checkpoint_path: str | None = None) -> FastAPI:
    app = FastAPI(title="evigraph", version=__version__)
    app.state.checkpoint = load_checkpoint(checkpoint_path) if checkpoint_path else None

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        ck = app.state.checkpoint
        return HealthResponse(
            status="ok",
            version=__version__,
            checkpoint_loaded=ck is not None,
            mode=ck.mode if ck else None,
        )

    @app.post("/graph")
    def graph(req: GraphRequest) -> dict:
        if req.origin not in ("claim", "evidence"):
            raise HTTPException(status_code=422, detail="origin must be claim or evidence")
        es = _parse_document(req.document)
        return graph_to_json(build_graph(es, req.origin))

    @app.post("/sort", response_model=SortResponse)
    def sort(req: SortRequest) -> SortResponse:
        es = _parse_document(req.document)
        order = sort_evidence(es, build_graph(es, "evidence"))
        return SortResponse(
            node_order=list(order.node_order),
            sentence_order=list(order.sentence_order),
        )

    @app.post("/retrieve", response_model=RetrieveResponse)
    def retrieve(req: RetrieveRequest) -> RetrieveResponse:
        corpus = [Document(doc_id=d.doc_id, title=d.title, sentences=tuple(d.sentences))
                  for d in req.corpus]
        return RetrieveResponse(documents=retrieve_documents(req.claim, corpus, req.m))

    @app.post("/select", response_model=SelectResponse)
    def select(req: SelectRequest) -> SelectResponse:
        corpus = [Document(doc_id=d.doc_id, title=d.title, sentences=tuple(d.sentences))
                  for d in req.corpus]
        doc_ids = set(retrieve_documents(req.claim, corpus, req.m))
        ranked = select_evidence(req.claim, [d for d in corpus if d.doc_id in doc_ids], req.k)
        return SelectResponse(evidence=list(ranked.items))

    @app.post("/predict", response_model=PredictResponse)
    def predict_route(req: PredictRequest) -> PredictResponse:
        if app.state.checkpoint is None:
            raise HTTPException(status_code=409, detail="no checkpoint loaded")
        es = _parse_document(req.document)
        pred = predict(req.instance_id, es, app.state.checkpoint)
        out = prediction_to_json(pred)
        return PredictResponse(**out)

    @app.post("/evaluate")
    def evaluate_route(req: EvaluateRequest) -> dict:
        try:
            preds = [prediction_from_json(p) for p in req.predictions]
            gold = [instance_from_json(g) for g in req.gold]
            report = evaluate(preds, gold, k_ev=req.k_ev)
        except (SchemaError, ValueError) as e:
            raise HTTPException(status_code=422, detail=str(e)) from e
        return report.to_json()

    @app.post("/checkpoint", response_model=HealthResponse)
    def load_route(req: CheckpointRequest) -> HealthResponse:
        try:
            app.state.checkpoint = load_checkpoint(req.path)
        except (FileNotFoundError, SchemaError) as e:
            raise HTTPException(status_code=422, detail=str(e)) from e
        return health()

    return app
