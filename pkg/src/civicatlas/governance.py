"""Governance items: moderated intake, disputes, annotations, redaction
requests, and schema-change proposals.

Each item owns a small lifecycle; the registry serializes all state changes
through its single-writer path. Annotations never touch record fields, and
dispute threads are closable but never deletable.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum

from .errors import AlreadyDecided, AlreadyResolved, EmptyReason


class IntakeState(str, Enum):
    PENDING = "pending"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


@dataclass
class IntakeSubmission:
    """A draft record queued for moderation; nothing publishes on submit."""

    id: str
    draft: dict
    submitter: str
    created_at: str
    state: IntakeState = IntakeState.PENDING
    decision_reason: str = ""
    decided_at: str = ""
    accepted_record_id: str = ""
    changelog_sequence: int | None = None
    validation_errors: list[str] = field(default_factory=list)
    duplicate_of: str = ""

    def require_pending(self) -> None:
        if self.state is not IntakeState.PENDING:
            raise AlreadyDecided(f"intake {self.id} already {self.state.value}")

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["state"] = self.state.value
        return data

    @classmethod
    def from_dict(cls, raw: dict) -> "IntakeSubmission":
        raw = dict(raw)
        raw["state"] = IntakeState(raw["state"])
        return cls(**raw)


class DisputeState(str, Enum):
    OPEN = "open"
    RESOLVED_EDIT = "resolved_edit"
    RESOLVED_ANNOTATION = "resolved_annotation"
    RESOLVED_REJECTED = "resolved_rejected"


@dataclass
class DisputeMessage:
    author: str
    body: str
    created_at: str


@dataclass
class Dispute:
    """Record-linked correction/dispute thread. The thread is never dropped."""

    id: str
    record_id: str
    claim: str
    links: list[str]
    created_at: str
    messages: list[DisputeMessage] = field(default_factory=list)
    state: DisputeState = DisputeState.OPEN
    resolution_reason: str = ""
    resolution_ref: str = ""  # changelog sequence or annotation id
    resolved_at: str = ""

    def require_open(self) -> None:
        if self.state is not DisputeState.OPEN:
            raise AlreadyResolved(f"dispute {self.id} already {self.state.value}")

    def add_message(self, author: str, body: str, created_at: str) -> None:
        self.messages.append(DisputeMessage(author=author, body=body, created_at=created_at))

    def resolve(self, state: DisputeState, reason: str, ref: str, resolved_at: str) -> None:
        self.require_open()
        if not reason.strip():
            raise EmptyReason("dispute resolution requires a non-empty reason")
        self.state = state
        self.resolution_reason = reason.strip()
        self.resolution_ref = ref
        self.resolved_at = resolved_at

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["state"] = self.state.value
        return data

    @classmethod
    def from_dict(cls, raw: dict) -> "Dispute":
        raw = dict(raw)
        raw["state"] = DisputeState(raw["state"])
        raw["messages"] = [DisputeMessage(**m) for m in raw.get("messages", [])]
        return cls(**raw)


@dataclass
class Annotation:
    """Contextual note attached to a record; distinct from edits by design."""

    id: str
    record_id: str
    author: str
    body: str
    created_at: str
    link: str = ""

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "Annotation":
        return cls(**raw)


class RedactionState(str, Enum):
    PENDING = "pending"
    APPLIED = "applied"
    DECLINED = "declined"


@dataclass
class RedactionRequest:
    id: str
    record_id: str
    fields: list[str]
    reason: str
    created_at: str
    state: RedactionState = RedactionState.PENDING
    decision_reason: str = ""
    applied_at: str = ""

    def require_pending(self) -> None:
        if self.state is not RedactionState.PENDING:
            raise AlreadyDecided(f"redaction request {self.id} already {self.state.value}")

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["state"] = self.state.value
        return data

    @classmethod
    def from_dict(cls, raw: dict) -> "RedactionRequest":
        raw = dict(raw)
        raw["state"] = RedactionState(raw["state"])
        return cls(**raw)


class ProposalState(str, Enum):
    PENDING = "pending"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


@dataclass
class SchemaProposal:
    """Schema-change request handled in its own queue, apart from record edits."""

    id: str
    description: str
    proposer: str
    created_at: str
    state: ProposalState = ProposalState.PENDING
    decision_reason: str = ""
    resulting_schema_version: int | None = None
    release_note: str = ""

    def require_pending(self) -> None:
        if self.state is not ProposalState.PENDING:
            raise AlreadyDecided(f"schema proposal {self.id} already {self.state.value}")

    def to_dict(self) -> dict:
        data = dataclasses.asdict(self)
        data["state"] = self.state.value
        return data

    @classmethod
    def from_dict(cls, raw: dict) -> "SchemaProposal":
        raw = dict(raw)
        raw["state"] = ProposalState(raw["state"])
        return cls(**raw)
