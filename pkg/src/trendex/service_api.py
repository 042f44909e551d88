"""HTTP service exposing disease search, ranking, trends, and comparison.

All endpoints read from an immutable post-ingest bundle, so any number of
concurrent requests return consistent results. Error bodies always have
the shape {"status", "code", "message"}; codes are one of unknown_cui,
bad_weights, no_disorder_found, bad_request, internal.
"""

from __future__ import annotations

from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .pipeline import DataBundle, compare_treatments, rank_for_disorder, resolve_disorders
from .trend_ranking import WeightProfile, parse_weights

DEFAULT_LIMIT = 70
MAX_COMPARE = 10

SORT_KEYS = ("score", "mentions")
DIRECTIONS = ("desc", "asc")


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


class CompareRequest(BaseModel):
    disease_cui: str
    treatment_cuis: list[str]


def create_app(bundle: DataBundle, threshold: Fraction | str | float = Fraction(1, 100)) -> FastAPI:
    app = FastAPI(title="trendex", docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def handle_api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status,
            content={"status": exc.status, "code": exc.code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    async def handle_validation(_request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400,
            content={"status": 400, "code": "bad_request", "message": str(exc.errors())},
        )

    @app.exception_handler(Exception)
    async def handle_internal(_request: Request, _exc: Exception) -> JSONResponse:
        # Never leak stack traces to clients.
        return JSONResponse(
            status_code=500,
            content={"status": 500, "code": "internal", "message": "internal error"},
        )

    @app.get("/healthz")
    async def healthz() -> dict:
        return {"status": "ok"}

    @app.get("/api/diseases")
    async def search_diseases(q: str = "") -> list[dict]:
        if not q.strip():
            raise ApiError(400, "bad_request", "query parameter q must be nonempty")
        found = resolve_disorders(bundle, q)
        return [{"cui": c.cui, "preferred_name": c.preferred_name} for c in found]

    @app.get("/api/diseases/{cui}/treatments")
    async def ranked_treatments(
        cui: str,
        profile: str = "new",
        weights: str | None = None,
        limit: int = DEFAULT_LIMIT,
        sort: str = "score",
        direction: str = "desc",
    ) -> dict:
        if not bundle.is_known_cui(cui):
            raise ApiError(404, "unknown_cui", f"unknown concept {cui}")
        chosen = _resolve_profile(profile, weights)
        if limit < 1:
            raise ApiError(400, "bad_request", "limit must be >= 1")
        if sort not in SORT_KEYS or direction not in DIRECTIONS:
            raise ApiError(
                400, "bad_request", f"sort must be one of {SORT_KEYS}, direction one of {DIRECTIONS}"
            )
        result = rank_for_disorder(bundle, cui, chosen, threshold)
        treatments = result.ranked[:limit]
        if sort == "mentions":
            sign = -1 if direction == "desc" else 1
            treatments = sorted(treatments, key=lambda t: (sign * t.total_abstracts, t.rank))
        elif direction == "asc":
            treatments = list(reversed(treatments))
        return {
            "disorder_cui": cui,
            "weights": [float(w) for w in chosen.weights],
            "epochs": [
                {"start": e.start_year, "end": e.end_year, "label": e.label}
                for e in bundle.schedule
            ],
            "treatments": [
                {
                    "cui": t.cui,
                    "name": t.name,
                    "rank": t.rank,
                    "score": float(t.score),
                    "epoch_vector": list(t.epoch_vector),
                    "normalized_vector": [float(v) for v in t.normalized_vector],
                    "total_abstracts": t.total_abstracts,
                }
                for t in treatments
            ],
        }

    @app.post("/api/compare")
    async def compare(request: CompareRequest) -> dict:
        cuis = request.treatment_cuis
        if not 1 <= len(cuis) <= MAX_COMPARE:
            raise ApiError(
                400, "bad_request", f"treatment_cuis must have 1..{MAX_COMPARE} entries"
            )
        unknown = [c for c in [request.disease_cui, *cuis] if not bundle.is_known_cui(c)]
        if unknown:
            raise ApiError(404, "unknown_cui", f"unknown concepts: {', '.join(unknown)}")
        sets = compare_treatments(bundle, request.disease_cui, cuis)
        return {
            "disease_cui": request.disease_cui,
            "epochs": [e.label for e in bundle.schedule],
            "treatments": [
                {
                    "cui": cui,
                    "name": bundle.concepts_by_cui[cui].preferred_name,
                    "counts": [len(s) for s in sets.pmids_by_epoch[cui]],
                    "total": len(sets.pmids[cui]),
                }
                for cui in cuis
            ],
            "intersection": {
                "counts": [len(s) for s in sets.intersection_by_epoch],
                "total": len(sets.intersection),
            },
        }

    return app


def _resolve_profile(profile: str, weights: str | None) -> WeightProfile:
    if profile == "new":
        return WeightProfile.new()
    if profile == "established":
        return WeightProfile.established()
    if profile == "custom":
        if weights is None:
            raise ApiError(400, "bad_weights", "profile=custom requires weights=w1,...,w7")
        try:
            return WeightProfile.custom(parse_weights(weights))
        except ValueError as exc:
            raise ApiError(400, "bad_weights", str(exc)) from None
    raise ApiError(400, "bad_request", f"unknown profile {profile!r}")
