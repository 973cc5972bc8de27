"""Exception and warning types shared across the registry modules.

Every error that can cross the API boundary carries a stable machine-readable
``code`` so the service layer can serialize ``{"error": {"code", "message"}}``
bodies without string matching.
"""

from __future__ import annotations

from dataclasses import dataclass


class AtlasError(Exception):
    """Base class for all registry errors."""

    code = "atlas_error"


@dataclass(frozen=True)
class ValidationIssue:
    """One violated invariant found while validating a raw record."""

    code: str
    field: str
    message: str

    def __str__(self) -> str:
        return f"{self.field}: {self.message} [{self.code}]"


class RecordValidationError(AtlasError):
    """Raised with the complete list of issues, not just the first."""

    code = "record_validation_error"

    def __init__(self, issues: list[ValidationIssue]):
        self.issues = list(issues)
        summary = "; ".join(str(i) for i in self.issues)
        super().__init__(f"record failed validation: {summary}")

    def codes(self) -> set[str]:
        return {issue.code for issue in self.issues}

    def fields(self) -> set[str]:
        return {issue.field for issue in self.issues}


class EmptyAfterNormalization(AtlasError):
    code = "empty_after_normalization"


class UnmappedCountry(AtlasError):
    code = "unmapped_country"


class UnknownField(AtlasError):
    code = "unknown_field"


class OutOfRange(AtlasError):
    code = "out_of_range"


class MalformedURL(AtlasError):
    code = "malformed_url"


class EmptyReason(AtlasError):
    code = "empty_reason"


class DuplicateVersion(AtlasError):
    code = "duplicate_version"


class ValidationFailure(AtlasError):
    """A bulk operation (release cut, intake accept) refused invalid records."""

    code = "validation_failure"

    def __init__(self, message: str, issues: list[ValidationIssue] | None = None):
        super().__init__(message)
        self.issues = list(issues or [])


class MissingArtifact(AtlasError):
    code = "missing_artifact"


class DigestMismatch(AtlasError):
    code = "digest_mismatch"


class UnknownRecord(AtlasError):
    code = "unknown_record"


class UnknownRelease(AtlasError):
    code = "unknown_release"


class AlreadyDecided(AtlasError):
    code = "already_decided"


class AlreadyResolved(AtlasError):
    code = "already_resolved"


class ProtectedField(AtlasError):
    code = "protected_field"


class UnparseableDraft(AtlasError):
    code = "unparseable_draft"


class BadFilter(AtlasError):
    code = "bad_filter"


class BadPagination(AtlasError):
    code = "bad_pagination"


class UnknownCountryWarning(UserWarning):
    """A country label had no alias-table entry and was passed through verbatim."""


class UnknownLocalityWarning(UserWarning):
    """A locality lookup missed and the anchor was downgraded to country precision."""
