"""HTTP API over the registry: records, filters, metrics, releases, and
governance channels.

Public endpoints are unauthenticated but rate-limited; moderation endpoints
require the curator bearer token. Restricted projections are never served
without the token. Error bodies carry a machine-readable code plus a human
message.
"""

from __future__ import annotations

import hmac
import time

from fastapi import Depends, FastAPI, Header, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .errors import (
    AlreadyDecided,
    AlreadyResolved,
    AtlasError,
    BadFilter,
    BadPagination,
    DigestMismatch,
    DuplicateVersion,
    EmptyReason,
    MissingArtifact,
    ProtectedField,
    UnknownRecord,
    UnknownRelease,
    UnparseableDraft,
)
from .records import record_to_dict
from .registry import FILTER_KEYS, AtlasRegistry

class Unauthorized(AtlasError):
    code = "unauthorized"


class RateLimited(AtlasError):
    code = "rate_limited"


_STATUS_BY_CODE = {
    UnknownRecord.code: 404,
    UnknownRelease.code: 404,
    MissingArtifact.code: 404,
    ProtectedField.code: 403,
    DuplicateVersion.code: 409,
    AlreadyDecided.code: 409,
    AlreadyResolved.code: 409,
    DigestMismatch.code: 500,
    Unauthorized.code: 401,
    RateLimited.code: 429,
}

_ARTIFACT_MEDIA_TYPES = {
    "records.csv": "text/csv; charset=utf-8",
    "records.json": "application/json",
    "records.geojson": "application/geo+json",
    "metrics.json": "application/json",
    "changelog.json": "application/json",
}

DEFAULT_RATE_LIMIT_PER_MINUTE = 600


class IntakePayload(BaseModel):
    draft: dict
    submitter: str = "anonymous"


class DisputePayload(BaseModel):
    claim: str
    links: list[str] = Field(default_factory=list)
    author: str = "anonymous"


class AnnotationPayload(BaseModel):
    body: str
    author: str = "anonymous"
    link: str = ""


class RedactionPayload(BaseModel):
    fields: list[str]
    reason: str


class ProposalPayload(BaseModel):
    description: str
    proposer: str = "anonymous"


class DecisionPayload(BaseModel):
    decision: str
    reason: str = ""
    release_note: str = ""


class ResolutionPayload(BaseModel):
    outcome: str
    reason: str
    field: str = ""
    value: str = ""


class _RateLimiter:
    """Fixed-window per-client limiter for unauthenticated write endpoints."""

    def __init__(self, per_minute: int):
        self.per_minute = per_minute
        self._windows: dict[str, tuple[int, int]] = {}

    def allow(self, client: str) -> bool:
        if self.per_minute <= 0:
            return True
        minute = int(time.time() // 60)
        window, count = self._windows.get(client, (minute, 0))
        if window != minute:
            window, count = minute, 0
        count += 1
        self._windows[client] = (window, count)
        return count <= self.per_minute


def _error_response(code: str, message: str, status: int, **extra) -> JSONResponse:
    body = {"error": {"code": code, "message": message, **extra}}
    return JSONResponse(status_code=status, content=body)


def create_app(
    registry: AtlasRegistry,
    curator_token: str = "",
    rate_limit_per_minute: int = DEFAULT_RATE_LIMIT_PER_MINUTE,
) -> FastAPI:
    app = FastAPI(title="civicatlas", docs_url=None, redoc_url=None)
    limiter = _RateLimiter(rate_limit_per_minute)

    def require_curator(authorization: str = Header(default="")) -> None:
        expected = curator_token
        supplied = ""
        if authorization.startswith("Bearer "):
            supplied = authorization[len("Bearer ") :]
        if not expected or not supplied or not hmac.compare_digest(supplied, expected):
            raise Unauthorized("curator token required")

    def rate_limited(request: Request) -> None:
        client = request.client.host if request.client else "unknown"
        if not limiter.allow(client):
            raise RateLimited("too many requests; try again in a minute")

    @app.exception_handler(AtlasError)
    async def atlas_error_handler(_request: Request, exc: AtlasError) -> JSONResponse:
        status = _STATUS_BY_CODE.get(exc.code, 400)
        return _error_response(exc.code, str(exc) or exc.code, status)

    @app.exception_handler(RequestValidationError)
    async def payload_error_handler(_request: Request, exc: RequestValidationError) -> JSONResponse:
        fields = sorted(
            {".".join(str(part) for part in err.get("loc", ()) if part != "body") for err in exc.errors()}
        )
        return _error_response(
            "invalid_payload", "request body failed validation", 422, fields=fields
        )

    # -- records ------------------------------------------------------------

    @app.get("/records")
    def list_records(request: Request, page: int = 1, page_size: int = 50):
        query = {
            key: value
            for key, value in request.query_params.items()
            if key not in ("page", "page_size")
        }
        unknown = sorted(set(query) - set(FILTER_KEYS))
        if unknown:
            raise BadFilter(f"unknown filter keys: {', '.join(unknown)}")
        if page < 1 or page_size < 1 or page_size > 500:
            raise BadPagination("page must be >= 1 and page_size in [1, 500]")
        items, total = registry.list_records(query, page=page, page_size=page_size)
        return {
            "items": [record_to_dict(record) for record in items],
            "total": total,
            "page": page,
            "page_size": page_size,
        }

    @app.get("/records/{record_id}")
    def get_record(record_id: str):
        return registry.record_detail(record_id)

    @app.post("/records/{record_id}/disputes", status_code=201)
    def post_dispute(record_id: str, payload: DisputePayload, _: None = Depends(rate_limited)):
        dispute = registry.open_dispute(
            record_id, payload.claim, payload.links, author=payload.author
        )
        return {"id": dispute.id, "state": dispute.state.value}

    @app.post("/records/{record_id}/annotations", status_code=201)
    def post_annotation(record_id: str, payload: AnnotationPayload, _: None = Depends(rate_limited)):
        note = registry.add_annotation(
            record_id, author=payload.author, body=payload.body, link=payload.link
        )
        return {"id": note.id, "record_id": note.record_id}

    @app.post("/records/{record_id}/redactions", status_code=201)
    def post_redaction(record_id: str, payload: RedactionPayload, _: None = Depends(rate_limited)):
        request_item = registry.request_redaction(record_id, payload.fields, payload.reason)
        return {"id": request_item.id, "state": request_item.state.value}

    @app.post("/intake", status_code=201)
    def post_intake(payload: IntakePayload, _: None = Depends(rate_limited)):
        if not isinstance(payload.draft, dict):
            raise UnparseableDraft("intake draft must be a field map")
        submission = registry.submit_intake(payload.draft, submitter=payload.submitter)
        return {
            "id": submission.id,
            "state": submission.state.value,
            "validation_errors": submission.validation_errors,
            "duplicate_of": submission.duplicate_of,
        }

    @app.post("/schema-proposals", status_code=201)
    def post_schema_proposal(payload: ProposalPayload, _: None = Depends(rate_limited)):
        proposal = registry.propose_schema_change(payload.description, payload.proposer)
        return {"id": proposal.id, "state": proposal.state.value}

    # -- moderation ------------------------------------------------------------

    @app.get("/moderation/intake")
    def moderation_intake(_: None = Depends(require_curator)):
        return {"items": [item.to_dict() for item in list(registry.intake.values())]}

    @app.post("/moderation/intake/{submission_id}/decision")
    def decide_intake(
        submission_id: str, payload: DecisionPayload, _: None = Depends(require_curator)
    ):
        submission = registry.review_intake(submission_id, payload.decision, payload.reason)
        return {
            "id": submission.id,
            "state": submission.state.value,
            "accepted_record_id": submission.accepted_record_id,
        }

    @app.get("/moderation/disputes")
    def moderation_disputes(_: None = Depends(require_curator)):
        return {"items": [item.to_dict() for item in list(registry.disputes.values())]}

    @app.post("/moderation/disputes/{dispute_id}/resolution")
    def resolve_dispute(
        dispute_id: str, payload: ResolutionPayload, _: None = Depends(require_curator)
    ):
        dispute = registry.resolve_dispute(
            dispute_id,
            payload.outcome,
            payload.reason,
            field_name=payload.field,
            new_value=payload.value,
        )
        return {
            "id": dispute.id,
            "state": dispute.state.value,
            "resolution_ref": dispute.resolution_ref,
        }

    @app.get("/moderation/redactions")
    def moderation_redactions(_: None = Depends(require_curator)):
        return {"items": [item.to_dict() for item in list(registry.redactions.values())]}

    @app.post("/moderation/redactions/{request_id}/decision")
    def decide_redaction(
        request_id: str, payload: DecisionPayload, _: None = Depends(require_curator)
    ):
        if payload.decision == "apply":
            request_item = registry.apply_redaction(request_id, reason=payload.reason)
        elif payload.decision == "decline":
            request_item = registry.decline_redaction(request_id, reason=payload.reason)
        else:
            raise BadFilter(f"decision must be 'apply' or 'decline', got {payload.decision!r}")
        return {"id": request_item.id, "state": request_item.state.value}

    @app.get("/moderation/schema-proposals")
    def moderation_proposals(_: None = Depends(require_curator)):
        return {"items": [item.to_dict() for item in list(registry.proposals.values())]}

    @app.post("/moderation/schema-proposals/{proposal_id}/decision")
    def decide_proposal(
        proposal_id: str, payload: DecisionPayload, _: None = Depends(require_curator)
    ):
        proposal = registry.decide_schema_proposal(
            proposal_id, payload.decision, payload.reason, release_note=payload.release_note
        )
        return {
            "id": proposal.id,
            "state": proposal.state.value,
            "resulting_schema_version": proposal.resulting_schema_version,
        }

    @app.get("/moderation/records/{record_id}")
    def restricted_record(record_id: str, _: None = Depends(require_curator)):
        return registry.record_detail(record_id, restricted=True)

    # -- releases ------------------------------------------------------------

    @app.get("/releases")
    def releases():
        return {"items": [manifest.to_dict() for manifest in registry.list_releases()]}

    @app.get("/releases/{version}/manifest")
    def release_manifest(version: str):
        return registry.get_manifest(version).to_dict()

    @app.get("/releases/{version}/artifacts/{name}")
    def release_artifact(version: str, name: str):
        payload = registry.get_artifact(version, name)
        media_type = _ARTIFACT_MEDIA_TYPES.get(name, "application/octet-stream")
        return Response(content=payload, media_type=media_type)

    # -- metrics ------------------------------------------------------------

    @app.get("/metrics/summary")
    def metrics_summary():
        return Response(content=registry.metrics_json(), media_type="application/json")

    @app.get("/metrics/completeness")
    def metrics_completeness():
        import json as _json

        return _json.loads(registry.metrics_json())["completeness"]

    @app.get("/metrics/distributions")
    def metrics_distributions():
        import json as _json

        return _json.loads(registry.metrics_json())["distributions"]

    @app.get("/metrics/domains")
    def metrics_domains():
        import json as _json

        return _json.loads(registry.metrics_json())["provenance_domains"]

    return app
