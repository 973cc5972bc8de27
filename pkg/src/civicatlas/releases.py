"""Versioned, immutable release snapshots with manifests and a change log.

A release archives five artifacts (records.csv, records.json, records.geojson,
metrics.json, changelog.json) under a version directory together with a
manifest listing each artifact's byte length and SHA-256 digest. Published
artifacts are never modified; verification re-hashes them against the
manifest. The change log is append-only with strictly increasing sequence
numbers and a mandatory reason per entry.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .errors import (
    DigestMismatch,
    DuplicateVersion,
    EmptyReason,
    MissingArtifact,
    RecordValidationError,
    UnknownRelease,
    ValidationFailure,
)
from .metrics import metrics_document
from .records import (
    CANONICAL_HEADER,
    REDACTION_MARKER,
    ProjectRecord,
    record_to_dict,
    record_to_row,
    validate_record,
)

VERSION_RE = re.compile(r"^v\d{4}\.(0[1-9]|1[0-2])(\.\d+)?$")

ARTIFACT_NAMES = (
    "records.csv",
    "records.json",
    "records.geojson",
    "metrics.json",
    "changelog.json",
)


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


@dataclass(frozen=True)
class ChangeLogEntry:
    """One append-only edit record."""

    sequence: int
    record_id: str
    field: str
    old_value: str
    new_value: str
    reason: str
    contributor: str
    timestamp: str

    def to_dict(self) -> dict[str, object]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, raw: dict) -> "ChangeLogEntry":
        return cls(**{f.name: raw[f.name] for f in dataclasses.fields(cls)})

    def masked(self, redacted_fields: dict[str, set[str]]) -> "ChangeLogEntry":
        """Mask values for public serialization when the field is redacted."""
        if self.field in redacted_fields.get(self.record_id, set()):
            return dataclasses.replace(
                self, old_value=REDACTION_MARKER, new_value=REDACTION_MARKER
            )
        return self


class ChangeLog:
    """Append-only edit log; sequences start at 1 and are strictly increasing."""

    def __init__(self, entries: list[ChangeLogEntry] | None = None):
        self._entries: list[ChangeLogEntry] = list(entries or [])

    def append(
        self,
        record_id: str,
        field_name: str,
        old_value: str,
        new_value: str,
        reason: str,
        contributor: str = "anonymous",
        timestamp: str | None = None,
    ) -> ChangeLogEntry:
        if not reason.strip():
            raise EmptyReason("a change log entry requires a non-empty reason")
        entry = ChangeLogEntry(
            sequence=self.last_sequence() + 1,
            record_id=record_id,
            field=field_name,
            old_value=old_value,
            new_value=new_value,
            reason=reason.strip(),
            contributor=contributor.strip() or "anonymous",
            timestamp=timestamp or utc_now_iso(),
        )
        self._entries.append(entry)
        return entry

    def last_sequence(self) -> int:
        return self._entries[-1].sequence if self._entries else 0

    def entries(self) -> tuple[ChangeLogEntry, ...]:
        return tuple(self._entries)

    def entries_for(self, record_id: str) -> tuple[ChangeLogEntry, ...]:
        return tuple(e for e in self._entries if e.record_id == record_id)

    def in_range(self, from_sequence: int, to_sequence: int) -> tuple[ChangeLogEntry, ...]:
        return tuple(e for e in self._entries if from_sequence <= e.sequence <= to_sequence)

    def public_entries(self, redacted_fields: dict[str, set[str]]) -> tuple[ChangeLogEntry, ...]:
        return tuple(entry.masked(redacted_fields) for entry in self._entries)

    def to_list(self) -> list[dict[str, object]]:
        return [entry.to_dict() for entry in self._entries]

    @classmethod
    def from_list(cls, raw: list[dict]) -> "ChangeLog":
        return cls([ChangeLogEntry.from_dict(item) for item in raw])

    def __len__(self) -> int:
        return len(self._entries)


def append_change(log: ChangeLog, **entry_fields) -> ChangeLogEntry:
    """Functional wrapper over ChangeLog.append."""
    return log.append(**entry_fields)


@dataclass(frozen=True)
class ArtifactInfo:
    name: str
    byte_length: int
    sha256: str


@dataclass(frozen=True)
class ReleaseManifest:
    """Immutable snapshot descriptor; never modified after publication."""

    version: str
    schema_version: int
    created_at: str
    record_count: int
    geocoded_count: int
    artifacts: tuple[ArtifactInfo, ...]
    changelog_from: int
    changelog_to: int
    release_notes: tuple[str, ...] = ()

    def artifact(self, name: str) -> ArtifactInfo:
        for info in self.artifacts:
            if info.name == name:
                return info
        raise MissingArtifact(f"release {self.version} has no artifact {name!r}")

    def to_dict(self) -> dict[str, object]:
        return {
            "version": self.version,
            "schema_version": self.schema_version,
            "created_at": self.created_at,
            "record_count": self.record_count,
            "geocoded_count": self.geocoded_count,
            "artifacts": [dataclasses.asdict(a) for a in self.artifacts],
            "changelog_range": {"from_sequence": self.changelog_from, "to_sequence": self.changelog_to},
            "release_notes": list(self.release_notes),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "ReleaseManifest":
        return cls(
            version=raw["version"],
            schema_version=raw["schema_version"],
            created_at=raw["created_at"],
            record_count=raw["record_count"],
            geocoded_count=raw["geocoded_count"],
            artifacts=tuple(ArtifactInfo(**a) for a in raw["artifacts"]),
            changelog_from=raw["changelog_range"]["from_sequence"],
            changelog_to=raw["changelog_range"]["to_sequence"],
            release_notes=tuple(raw.get("release_notes", [])),
        )


def export_csv(records: list[ProjectRecord]) -> str:
    """Canonical CSV (RFC 4180 quoting, CRLF, header row) in column order."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(CANONICAL_HEADER), lineterminator="\r\n")
    writer.writeheader()
    for record in records:
        writer.writerow(record_to_row(record))
    return buffer.getvalue()


class CsvImportError(ValidationFailure):
    """Import failed; carries (line_number, issues) per invalid row."""

    def __init__(self, row_errors: list[tuple[int, RecordValidationError]]):
        self.row_errors = row_errors
        lines = "; ".join(f"line {line}: {err}" for line, err in row_errors)
        super().__init__(f"CSV import failed: {lines}")


def import_csv(text: str) -> list[ProjectRecord]:
    """Parse and validate a canonical CSV document.

    Raises CsvImportError listing every invalid row with its line number.
    """
    reader = csv.DictReader(io.StringIO(text))
    records: list[ProjectRecord] = []
    errors: list[tuple[int, RecordValidationError]] = []
    for line_number, row in enumerate(reader, start=2):
        try:
            records.append(validate_record(row))
        except RecordValidationError as exc:
            errors.append((line_number, exc))
    if errors:
        raise CsvImportError(errors)
    return records


def export_json(records: list[ProjectRecord]) -> str:
    payload = [record_to_dict(record) for record in records]
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def export_geojson(records: list[ProjectRecord]) -> str:
    """RFC 7946 FeatureCollection of Point features.

    One feature per geocoded record, coordinates ordered [longitude, latitude];
    ungeocoded records are excluded entirely.
    """
    features = []
    for record in records:
        anchor = record.anchor
        if not anchor.is_geocoded():
            continue
        features.append(
            {
                "type": "Feature",
                "geometry": {
                    "type": "Point",
                    "coordinates": [anchor.longitude, anchor.latitude],
                },
                "properties": {
                    "id": record.id,
                    "name": record.canonical_name,
                    "region": record.region.value,
                    "participation_tier": record.participation_tier.value,
                    "evidence_grade": record.evidence_grade.value,
                    "review_status": record.review_status.value,
                    "precision": anchor.precision.value,
                },
            }
        )
    document = {"type": "FeatureCollection", "features": features}
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def sha256_hex(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def _latest_changelog_boundary(releases_dir: Path) -> int:
    boundary = 0
    for manifest in list_releases(releases_dir):
        boundary = max(boundary, manifest.changelog_to)
    return boundary


def cut_release(
    records: list[ProjectRecord],
    version: str,
    releases_dir: Path,
    changelog_entries: list[ChangeLogEntry],
    schema_version: int = 1,
    release_notes: tuple[str, ...] = (),
) -> ReleaseManifest:
    """Write an immutable snapshot of the given (public) record set.

    Refuses reused versions and invalid records. The manifest's change-log
    range covers entries appended since the previous release.
    """
    if not VERSION_RE.match(version):
        raise ValueError(f"release version must look like vYYYY.MM[.patch], got {version!r}")
    release_dir = releases_dir / version
    if release_dir.exists():
        raise DuplicateVersion(f"release {version} already exists")

    for record in records:
        try:
            validate_record(record_to_row(record))
        except RecordValidationError as exc:
            raise ValidationFailure(
                f"release refused: record {record.id!r} is invalid: {exc}", exc.issues
            ) from exc

    ordered = sorted(records, key=lambda r: r.id)
    changelog_payload = json.dumps(
        [entry.to_dict() for entry in changelog_entries],
        indent=2,
        sort_keys=True,
        ensure_ascii=False,
    ) + "\n"
    artifacts_payload: dict[str, bytes] = {
        "records.csv": export_csv(ordered).encode("utf-8"),
        "records.json": export_json(ordered).encode("utf-8"),
        "records.geojson": export_geojson(ordered).encode("utf-8"),
        "metrics.json": metrics_document(ordered).encode("utf-8"),
        "changelog.json": changelog_payload.encode("utf-8"),
    }

    from_sequence = _latest_changelog_boundary(releases_dir) + 1
    to_sequence = changelog_entries[-1].sequence if changelog_entries else 0
    manifest = ReleaseManifest(
        version=version,
        schema_version=schema_version,
        created_at=utc_now_iso(),
        record_count=len(ordered),
        geocoded_count=sum(1 for r in ordered if r.anchor.is_geocoded()),
        artifacts=tuple(
            ArtifactInfo(name=name, byte_length=len(payload), sha256=sha256_hex(payload))
            for name, payload in artifacts_payload.items()
        ),
        changelog_from=from_sequence,
        changelog_to=to_sequence,
        release_notes=release_notes,
    )

    release_dir.mkdir(parents=True)
    for name, payload in artifacts_payload.items():
        (release_dir / name).write_bytes(payload)
    manifest_text = json.dumps(manifest.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    (release_dir / "manifest.json").write_text(manifest_text, encoding="utf-8")
    return manifest


def list_releases(releases_dir: Path) -> list[ReleaseManifest]:
    manifests = []
    if not releases_dir.exists():
        return manifests
    for manifest_path in sorted(releases_dir.glob("*/manifest.json")):
        manifests.append(
            ReleaseManifest.from_dict(json.loads(manifest_path.read_text(encoding="utf-8")))
        )
    manifests.sort(key=lambda m: m.version)
    return manifests


def load_manifest(releases_dir: Path, version: str) -> ReleaseManifest:
    manifest_path = releases_dir / version / "manifest.json"
    if not manifest_path.exists():
        raise UnknownRelease(f"no release {version!r}")
    return ReleaseManifest.from_dict(json.loads(manifest_path.read_text(encoding="utf-8")))


def read_artifact(releases_dir: Path, version: str, name: str) -> bytes:
    manifest = load_manifest(releases_dir, version)
    info = manifest.artifact(name)
    path = releases_dir / version / name
    if not path.exists():
        raise MissingArtifact(f"artifact {name!r} of release {version} is missing on disk")
    payload = path.read_bytes()
    if sha256_hex(payload) != info.sha256:
        raise DigestMismatch(f"artifact {name!r} of release {version} does not match its digest")
    return payload


def verify_release(releases_dir: Path, version: str) -> ReleaseManifest:
    """Re-hash every artifact; DigestMismatch is a hard failure."""
    manifest = load_manifest(releases_dir, version)
    for info in manifest.artifacts:
        read_artifact(releases_dir, version, info.name)
    return manifest


@dataclass(frozen=True)
class ReleaseDiff:
    added_ids: tuple[str, ...]
    removed_ids: tuple[str, ...]
    modified: tuple[tuple[str, str], ...]  # (record id, field name) pairs

    def is_empty(self) -> bool:
        return not (self.added_ids or self.removed_ids or self.modified)

    def to_dict(self) -> dict[str, object]:
        return {
            "added_ids": list(self.added_ids),
            "removed_ids": list(self.removed_ids),
            "modified": [list(pair) for pair in self.modified],
        }


def diff_releases(releases_dir: Path, version_a: str, version_b: str) -> ReleaseDiff:
    """Field-level diff between two releases' archived record sets."""
    rows_a = _release_rows(releases_dir, version_a)
    rows_b = _release_rows(releases_dir, version_b)
    added = tuple(sorted(set(rows_b) - set(rows_a)))
    removed = tuple(sorted(set(rows_a) - set(rows_b)))
    modified: list[tuple[str, str]] = []
    for record_id in sorted(set(rows_a) & set(rows_b)):
        row_a, row_b = rows_a[record_id], rows_b[record_id]
        for column in CANONICAL_HEADER:
            if row_a.get(column, "") != row_b.get(column, ""):
                modified.append((record_id, column))
    return ReleaseDiff(added_ids=added, removed_ids=removed, modified=tuple(modified))


def _release_rows(releases_dir: Path, version: str) -> dict[str, dict[str, str]]:
    payload = read_artifact(releases_dir, version, "records.csv")
    reader = csv.DictReader(io.StringIO(payload.decode("utf-8")))
    return {row["id"]: row for row in reader}
