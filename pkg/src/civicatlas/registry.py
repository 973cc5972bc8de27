"""Single-writer working-set store behind every mutation path.

The registry owns the authoritative ("restricted") records plus the change
log, governance queues, and redaction state. Public consumers only ever see
projections: redacted fields are masked with the redaction marker and anchors
are downgraded so coordinates cannot leak a redacted locality or country.
Published releases are immutable snapshots of the public projection.

Data directory layout (operator-private except releases/):
    working/records.csv   authoritative record set
    working/state.json    change log, governance items, redaction state
    releases/<version>/   published, hash-manifested artifacts
"""

from __future__ import annotations

import dataclasses
import json
import re
import threading
from pathlib import Path
from typing import Iterable, Mapping

from . import geocode as geocode_mod
from .errors import (
    BadFilter,
    BadPagination,
    ProtectedField,
    RecordValidationError,
    UnknownField,
    UnknownRecord,
    UnparseableDraft,
    ValidationFailure,
)
from .governance import (
    Annotation,
    Dispute,
    DisputeState,
    IntakeState,
    IntakeSubmission,
    ProposalState,
    RedactionRequest,
    RedactionState,
    SchemaProposal,
)
from .harmonize import (
    CountryAliasTable,
    RegionTable,
    dedupe,
    load_country_tables,
    map_region,
    normalize_country,
    normalize_name,
)
from .metrics import metrics_document
from .records import (
    CANONICAL_HEADER,
    LocationAnchor,
    Precision,
    ProjectRecord,
    REDACTION_MARKER,
    make_record_id,
    mvpd_check,
    record_to_dict,
    record_to_row,
    slug_for,
    validate_record,
)
from .releases import (
    ChangeLog,
    ChangeLogEntry,
    ReleaseDiff,
    ReleaseManifest,
    cut_release,
    diff_releases,
    export_csv,
    import_csv,
    list_releases,
    load_manifest,
    read_artifact,
    utc_now_iso,
)

DATA_DIR = Path(__file__).parent / "data"

# Fields a redaction may mask. Closed enums, years, booleans, and anchor
# coordinates are structural: the marker cannot be represented there without
# breaking the public schema, so they are protected alongside id/name.
REDACTABLE_STRING_FIELDS = frozenset(
    {
        "provenance_url",
        "source_url_2",
        "source_url_3",
        "official_url",
        "country",
        "city",
        "lead_organization",
        "organization_type",
        "application_domain",
        "domain_category",
        "ai_modality",
        "mechanism",
        "evidence_notes",
    }
)
REDACTABLE_LIST_FIELDS = frozenset(
    {
        "alternate_links",
        "partner_organizations",
        "participants",
        "participation_methods",
        "decision_points",
    }
)
REDACTABLE_FIELDS = REDACTABLE_STRING_FIELDS | REDACTABLE_LIST_FIELDS

FILTER_KEYS = (
    "region",
    "country",
    "application_domain",
    "organization_type",
    "participation_tier",
    "lifecycle_stage",
    "verification_status",
    "evidence_grade",
    "review_status",
    "activity_status",
    "q",
)

_ENUM_FILTERS = {
    "region": "region",
    "participation_tier": "participation_tier",
    "verification_status": "verification_status",
    "evidence_grade": "evidence_grade",
    "review_status": "review_status",
    "activity_status": "activity_status",
}

MAX_PAGE_SIZE = 500

_ID_SUFFIX_RE = re.compile(r"^(?P<slug>.*)-(?P<num>\d{4})$")


def default_tables() -> tuple[CountryAliasTable, RegionTable, geocode_mod.Gazetteer]:
    aliases, regions = load_country_tables(
        DATA_DIR / "country_aliases.tsv", DATA_DIR / "country_regions.tsv"
    )
    gazetteer = geocode_mod.Gazetteer.from_tsv(DATA_DIR / "gazetteer.tsv")
    return aliases, regions, gazetteer


class AtlasRegistry:
    """Working set plus governance state; all mutations serialize on one lock."""

    def __init__(
        self,
        aliases: CountryAliasTable | None = None,
        regions: RegionTable | None = None,
        gazetteer: geocode_mod.Gazetteer | None = None,
        data_dir: Path | None = None,
        schema_version: int = 1,
    ):
        if aliases is None or regions is None or gazetteer is None:
            default_aliases, default_regions, default_gazetteer = default_tables()
            aliases = aliases or default_aliases
            regions = regions or default_regions
            gazetteer = gazetteer or default_gazetteer
        self.aliases = aliases
        self.regions = regions
        self.gazetteer = gazetteer
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.schema_version = schema_version
        self.pending_release_notes: list[str] = []

        self.records: dict[str, ProjectRecord] = {}
        self.changelog = ChangeLog()
        self.intake: dict[str, IntakeSubmission] = {}
        self.disputes: dict[str, Dispute] = {}
        self.annotations: dict[str, Annotation] = {}
        self.redactions: dict[str, RedactionRequest] = {}
        self.proposals: dict[str, SchemaProposal] = {}
        self.redacted_fields: dict[str, set[str]] = {}
        self.restricted_store: dict[str, str] = {}
        self._item_counters: dict[str, int] = {}
        self._slug_counters: dict[str, int] = {}
        self._lock = threading.RLock()

    # -- id assignment ----------------------------------------------------

    def _next_item_id(self, kind: str) -> str:
        count = self._item_counters.get(kind, 0) + 1
        self._item_counters[kind] = count
        return f"{kind}-{count:04d}"

    def _seed_slug_counter(self, record_id: str) -> None:
        match = _ID_SUFFIX_RE.match(record_id)
        if match:
            slug, num = match.group("slug"), int(match.group("num"))
            self._slug_counters[slug] = max(self._slug_counters.get(slug, 0), num)

    def _assign_record_id(self, dedup_key: str) -> str:
        slug = slug_for(dedup_key)
        count = self._slug_counters.get(slug, 0) + 1
        self._slug_counters[slug] = count
        return make_record_id(dedup_key, count)

    # -- record mutation --------------------------------------------------

    def add_record(
        self, record: ProjectRecord, reason: str, contributor: str = "system"
    ) -> ProjectRecord:
        """Insert a validated record, assigning an id when blank."""
        with self._lock:
            if not record.id:
                record = dataclasses.replace(
                    record, id=self._assign_record_id(record.dedup_key)
                )
            else:
                if record.id in self.records:
                    raise ValidationFailure(f"record id {record.id!r} already in working set")
                self._seed_slug_counter(record.id)
            record = mvpd_check(record).record
            self.records[record.id] = record
            self.changelog.append(
                record_id=record.id,
                field_name="record",
                old_value="",
                new_value="created",
                reason=reason,
                contributor=contributor,
            )
            return record

    def import_rows(
        self, rows: Iterable[Mapping[str, object]], reason: str, contributor: str = "system"
    ) -> list[ProjectRecord]:
        """Validate and insert raw rows; all-or-nothing on validation errors."""
        issues: list[tuple[int, RecordValidationError]] = []
        validated: list[ProjectRecord] = []
        for index, row in enumerate(rows, start=1):
            try:
                validated.append(validate_record(row))
            except RecordValidationError as exc:
                issues.append((index, exc))
        if issues:
            from .releases import CsvImportError

            raise CsvImportError(issues)
        return self.import_records(validated, reason, contributor)

    def import_records(
        self, records: list[ProjectRecord], reason: str, contributor: str = "system"
    ) -> list[ProjectRecord]:
        """Insert already-validated records atomically with respect to id clashes."""
        with self._lock:
            explicit_ids = [record.id for record in records if record.id]
            clashes = sorted(
                set(explicit_ids) & set(self.records)
                | {i for i in explicit_ids if explicit_ids.count(i) > 1}
            )
            if clashes:
                raise ValidationFailure(f"duplicate record ids: {', '.join(clashes)}")
            return [self.add_record(record, reason, contributor) for record in records]

    def _replace_record(
        self, record_id: str, new_record: ProjectRecord, reason: str, contributor: str
    ) -> list[ChangeLogEntry]:
        """Swap a record and log one changelog entry per changed column."""
        old_record = self._require_record(record_id)
        old_row, new_row = record_to_row(old_record), record_to_row(new_record)
        entries = []
        for column in CANONICAL_HEADER:
            if old_row[column] != new_row[column]:
                entries.append(
                    self.changelog.append(
                        record_id=record_id,
                        field_name=column,
                        old_value=old_row[column],
                        new_value=new_row[column],
                        reason=reason,
                        contributor=contributor,
                    )
                )
        self.records[record_id] = new_record
        return entries

    def edit_record(
        self,
        record_id: str,
        field_name: str,
        new_value: str,
        reason: str,
        contributor: str = "curator",
    ) -> ChangeLogEntry:
        """Apply a single-field edit (row-level value) with validation."""
        with self._lock:
            record = self._require_record(record_id)
            row = record_to_row(record)
            if field_name not in row:
                raise UnknownField(f"no such record field: {field_name!r}")
            if row[field_name] == new_value:
                raise ValidationFailure(f"edit to {field_name!r} changes nothing")
            row[field_name] = new_value
            new_record = validate_record(row)
            entries = self._replace_record(record_id, new_record, reason, contributor)
            return entries[0]

    def _require_record(self, record_id: str) -> ProjectRecord:
        record = self.records.get(record_id)
        if record is None:
            raise UnknownRecord(f"no record with id {record_id!r}")
        return record

    # -- harmonization and geocoding ---------------------------------------

    def harmonize_records(self, contributor: str = "system") -> dict[str, object]:
        """Normalize countries, re-map regions, then dedupe the working set."""
        with self._lock:
            for record_id in sorted(self.records):
                record = self.records[record_id]
                canonical_country = normalize_country(record.country, self.aliases)
                updates: dict[str, object] = {}
                if canonical_country != record.country:
                    updates["country"] = canonical_country
                region = self.regions.lookup(canonical_country)
                if region is not None and region != record.region:
                    updates["region"] = region
                if updates:
                    self._replace_record(
                        record_id,
                        dataclasses.replace(record, **updates),
                        reason="country/region harmonization",
                        contributor=contributor,
                    )

            canonical, merges = dedupe(sorted(self.records.values(), key=lambda r: r.id))
            surviving = {record.id: record for record in canonical}
            for merge in merges:
                for absorbed_id in merge.absorbed_ids:
                    self.changelog.append(
                        record_id=absorbed_id,
                        field_name="record",
                        old_value="active",
                        new_value=f"merged into {merge.survivor_id}",
                        reason=f"duplicate of {merge.survivor_id} (key {merge.dedup_key!r})",
                        contributor=contributor,
                    )
                    del self.records[absorbed_id]
                survivor = surviving[merge.survivor_id]
                if survivor != self.records[merge.survivor_id]:
                    self._replace_record(
                        merge.survivor_id,
                        survivor,
                        reason="alternate links preserved from merged duplicates",
                        contributor=contributor,
                    )
            return {
                "records": len(self.records),
                "merges": [dataclasses.asdict(m) for m in merges],
            }

    def geocode_records(self, contributor: str = "system") -> dict[str, int]:
        """Resolve every record's anchor against the gazetteer."""
        changed = 0
        with self._lock:
            for record_id in sorted(self.records):
                record = self.records[record_id]
                resolved = geocode_mod.resolve_record(record, self.gazetteer)
                if resolved != record:
                    self._replace_record(
                        record_id, resolved, reason="gazetteer geocoding", contributor=contributor
                    )
                    changed += 1
            geocoded = geocode_mod.geocoded_count(list(self.records.values()))
        return {"records": len(self.records), "changed": changed, "geocoded": geocoded}

    # -- projections --------------------------------------------------------

    def _masked_record(self, record: ProjectRecord) -> ProjectRecord:
        masked_fields = self.redacted_fields.get(record.id)
        if not masked_fields:
            return record
        updates: dict[str, object] = {}
        for name in masked_fields:
            if name in REDACTABLE_STRING_FIELDS:
                updates[name] = REDACTION_MARKER
            elif name in REDACTABLE_LIST_FIELDS:
                updates[name] = (REDACTION_MARKER,)
        if "country" in masked_fields:
            updates["anchor"] = LocationAnchor.UNGEOCODED
        elif "city" in masked_fields and record.anchor.precision is Precision.LOCALITY:
            country_entry = self.gazetteer.country_entry(record.country)
            if country_entry is None:
                updates["anchor"] = LocationAnchor.UNGEOCODED
            else:
                updates["anchor"] = LocationAnchor(
                    latitude=country_entry.latitude,
                    longitude=country_entry.longitude,
                    precision=Precision.COUNTRY,
                )
        return dataclasses.replace(record, **updates)

    def public_record(self, record_id: str) -> ProjectRecord:
        with self._lock:
            return self._masked_record(self._require_record(record_id))

    def restricted_record(self, record_id: str) -> ProjectRecord:
        with self._lock:
            return self._require_record(record_id)

    def public_records(self) -> list[ProjectRecord]:
        with self._lock:
            return [
                self._masked_record(self.records[record_id]) for record_id in sorted(self.records)
            ]

    def public_changelog(self) -> tuple[ChangeLogEntry, ...]:
        with self._lock:
            return self.changelog.public_entries(self.redacted_fields)

    def record_detail(self, record_id: str, restricted: bool = False) -> dict[str, object]:
        """Full projection: fields, per-field presence, edit history, annotations."""
        from .metrics import DEFAULT_COMPLETENESS_FIELDS
        from .records import field_presence

        with self._lock:
            record = self._require_record(record_id)
            shown = record if restricted else self._masked_record(record)
            history = [
                entry.to_dict()
                for entry in (
                    self.changelog.entries_for(record_id)
                    if restricted
                    else tuple(
                        e.masked(self.redacted_fields)
                        for e in self.changelog.entries_for(record_id)
                    )
                )
            ]
            payload = record_to_dict(shown)
            payload["field_presence"] = {
                name: field_presence(shown, name) for name in DEFAULT_COMPLETENESS_FIELDS
            }
            payload["redacted_fields"] = sorted(
                self.redacted_fields.get(record_id, set()) & REDACTABLE_FIELDS
            )
            payload["edit_history"] = history
            payload["annotations"] = [
                note.to_dict()
                for note in sorted(self.annotations.values(), key=lambda n: n.id)
                if note.record_id == record_id
            ]
            return payload

    # -- filtering ----------------------------------------------------------

    def filter_records(self, query: Mapping[str, str]) -> list[ProjectRecord]:
        """Conjunction of filters over public projections, deterministic order."""
        from .records import (
            Grade,
            LifecycleStage,
            Region,
            Review,
            Status,
            Tier,
            Verification,
            parse_enum,
        )

        enum_types = {
            "region": Region,
            "participation_tier": Tier,
            "verification_status": Verification,
            "evidence_grade": Grade,
            "review_status": Review,
            "activity_status": Status,
        }
        unknown = sorted(set(query) - set(FILTER_KEYS))
        if unknown:
            raise BadFilter(f"unknown filter keys: {', '.join(unknown)}")
        parsed: dict[str, object] = {}
        for key, raw in query.items():
            if raw is None or raw == "":
                continue
            if key in enum_types:
                try:
                    parsed[key] = parse_enum(enum_types[key], raw)
                except ValueError as exc:
                    raise BadFilter(str(exc)) from exc
            elif key == "lifecycle_stage":
                try:
                    parsed[key] = parse_enum(LifecycleStage, raw)
                except ValueError as exc:
                    raise BadFilter(str(exc)) from exc
            else:
                parsed[key] = raw

        def matches(record: ProjectRecord) -> bool:
            for key, wanted in parsed.items():
                if key == "q":
                    needle = str(wanted).casefold()
                    if needle not in record.canonical_name.casefold() and needle not in record.lead_organization.casefold():
                        return False
                elif key == "lifecycle_stage":
                    if wanted not in record.lifecycle_stages:
                        return False
                elif key == "country":
                    if record.country.casefold() != str(wanted).casefold():
                        return False
                elif key in ("application_domain", "organization_type"):
                    if getattr(record, key).casefold() != str(wanted).casefold():
                        return False
                elif getattr(record, key) is not wanted:
                    return False
            return True

        matched = [record for record in self.public_records() if matches(record)]
        matched.sort(key=lambda r: (r.canonical_name, r.id))
        return matched

    def list_records(
        self, query: Mapping[str, str], page: int = 1, page_size: int = 50
    ) -> tuple[list[ProjectRecord], int]:
        if page < 1 or not 1 <= page_size <= MAX_PAGE_SIZE:
            raise BadPagination(
                f"page must be >= 1 and page_size in [1, {MAX_PAGE_SIZE}]"
            )
        matched = self.filter_records(query)
        start = (page - 1) * page_size
        return matched[start : start + page_size], len(matched)

    # -- governance: intake ---------------------------------------------------

    def _prepare_draft(self, draft: Mapping[str, object]) -> dict[str, object]:
        """Normalize the country and derive a missing region before validation."""
        prepared = dict(draft)
        country_raw = str(prepared.get("country", "") or "")
        if country_raw.strip():
            canonical_country = normalize_country(country_raw, self.aliases)
            prepared["country"] = canonical_country
            region = self.regions.lookup(canonical_country)
            if region is not None and not str(prepared.get("region", "") or "").strip():
                prepared["region"] = region.value
        return prepared

    def submit_intake(self, draft: object, submitter: str = "anonymous") -> IntakeSubmission:
        """Queue a draft for moderation; nothing is published."""
        if not isinstance(draft, Mapping):
            raise UnparseableDraft("intake draft must be a field map")
        try:
            draft_map = {str(key): draft[key] for key in draft}
        except Exception as exc:  # pragma: no cover - defensive
            raise UnparseableDraft(f"intake draft is not readable: {exc}") from exc

        validation_errors: list[str] = []
        try:
            validate_record(self._prepare_draft(draft_map))
        except RecordValidationError as exc:
            validation_errors = [str(issue) for issue in exc.issues]

        duplicate_of = ""
        name = str(draft_map.get("canonical_name", "") or "")
        if name.strip():
            try:
                key = normalize_name(name)
            except Exception:
                key = ""
            if key:
                for record in self.records.values():
                    if record.dedup_key == key:
                        duplicate_of = record.id
                        break

        with self._lock:
            submission = IntakeSubmission(
                id=self._next_item_id("intake"),
                draft=dict(draft_map),
                submitter=submitter.strip() or "anonymous",
                created_at=utc_now_iso(),
                validation_errors=validation_errors,
                duplicate_of=duplicate_of,
            )
            self.intake[submission.id] = submission
            return submission

    def review_intake(
        self, submission_id: str, decision: str, reason: str, moderator: str = "curator"
    ) -> IntakeSubmission:
        """Accept (validate, harmonize, geocode, publish to working set) or reject."""
        from .errors import EmptyReason

        if not reason.strip():
            raise EmptyReason("intake review requires a non-empty reason")
        if decision not in ("accept", "reject"):
            raise ValueError(f"decision must be 'accept' or 'reject', got {decision!r}")
        with self._lock:
            submission = self._require_intake(submission_id)
            submission.require_pending()
            if decision == "reject":
                submission.state = IntakeState.REJECTED
                submission.decision_reason = reason.strip()
                submission.decided_at = utc_now_iso()
                return submission

            draft = self._prepare_draft(submission.draft)
            record = validate_record(draft)  # raises RecordValidationError; stays pending
            record = geocode_mod.resolve_record(record, self.gazetteer)
            record = self.add_record(
                dataclasses.replace(record, id=""),
                reason=f"intake {submission.id} accepted: {reason.strip()}",
                contributor=moderator,
            )
            submission.state = IntakeState.ACCEPTED
            submission.decision_reason = reason.strip()
            submission.decided_at = utc_now_iso()
            submission.accepted_record_id = record.id
            submission.changelog_sequence = self.changelog.last_sequence()
            return submission

    def _require_intake(self, submission_id: str) -> IntakeSubmission:
        submission = self.intake.get(submission_id)
        if submission is None:
            raise UnknownRecord(f"no intake submission {submission_id!r}")
        return submission

    # -- governance: disputes ---------------------------------------------------

    def open_dispute(
        self, record_id: str, claim: str, links: list[str] | None = None, author: str = "anonymous"
    ) -> Dispute:
        with self._lock:
            self._require_record(record_id)
            dispute = Dispute(
                id=self._next_item_id("dispute"),
                record_id=record_id,
                claim=claim,
                links=list(links or []),
                created_at=utc_now_iso(),
            )
            dispute.add_message(author, claim, dispute.created_at)
            self.disputes[dispute.id] = dispute
            return dispute

    def resolve_dispute(
        self,
        dispute_id: str,
        outcome: str,
        reason: str,
        field_name: str = "",
        new_value: str = "",
        moderator: str = "curator",
    ) -> Dispute:
        """Outcomes: edit (field correction), annotation, reject."""
        outcome_states = {
            "edit": DisputeState.RESOLVED_EDIT,
            "annotation": DisputeState.RESOLVED_ANNOTATION,
            "reject": DisputeState.RESOLVED_REJECTED,
        }
        if outcome not in outcome_states:
            raise ValueError(f"outcome must be one of {sorted(outcome_states)}, got {outcome!r}")
        with self._lock:
            dispute = self.disputes.get(dispute_id)
            if dispute is None:
                raise UnknownRecord(f"no dispute {dispute_id!r}")
            dispute.require_open()
            ref = ""
            if outcome == "edit":
                entry = self.edit_record(
                    dispute.record_id,
                    field_name,
                    new_value,
                    reason=f"dispute {dispute.id}: {reason}",
                    contributor=moderator,
                )
                ref = str(entry.sequence)
            elif outcome == "annotation":
                note = self.add_annotation(
                    dispute.record_id, author=moderator, body=reason, link=""
                )
                ref = note.id
            dispute.resolve(outcome_states[outcome], reason, ref, utc_now_iso())
            dispute.add_message(moderator, f"resolved as {dispute.state.value}: {reason}", dispute.resolved_at)
            return dispute

    # -- governance: annotations -------------------------------------------------

    def add_annotation(
        self, record_id: str, author: str, body: str, link: str = ""
    ) -> Annotation:
        with self._lock:
            self._require_record(record_id)
            note = Annotation(
                id=self._next_item_id("annotation"),
                record_id=record_id,
                author=author.strip() or "anonymous",
                body=body,
                created_at=utc_now_iso(),
                link=link,
            )
            self.annotations[note.id] = note
            return note

    # -- governance: redactions ----------------------------------------------------

    def request_redaction(
        self, record_id: str, fields: list[str], reason: str
    ) -> RedactionRequest:
        from .errors import EmptyReason

        if not reason.strip():
            raise EmptyReason("redaction request requires a non-empty reason")
        if not fields:
            raise UnknownField("redaction request names no fields")
        with self._lock:
            self._require_record(record_id)
            request = RedactionRequest(
                id=self._next_item_id("redaction"),
                record_id=record_id,
                fields=list(fields),
                reason=reason.strip(),
                created_at=utc_now_iso(),
            )
            self.redactions[request.id] = request
            return request

    def apply_redaction(
        self, request_id: str, reason: str = "", moderator: str = "curator"
    ) -> RedactionRequest:
        """Mask the named fields publicly; originals stay in the restricted store."""
        with self._lock:
            request = self._require_redaction(request_id)
            request.require_pending()
            record = self._require_record(request.record_id)
            for name in request.fields:
                if name not in set(CANONICAL_HEADER) | {"anchor"}:
                    raise UnknownField(f"no such record field: {name!r}")
                if name not in REDACTABLE_FIELDS:
                    raise ProtectedField(f"field {name!r} cannot be redacted")

            old_public_row = record_to_row(self._masked_record(record))
            old_row = record_to_row(record)
            masked = self.redacted_fields.setdefault(request.record_id, set())
            for name in request.fields:
                masked.add(name)
                self.restricted_store[f"{request.record_id}:{name}"] = old_row[name]
            if "city" in masked or "country" in masked:
                masked.update({"latitude", "longitude"})

            new_public_row = record_to_row(self._masked_record(record))
            applied_at = utc_now_iso()
            note = reason.strip() or request.reason
            for column in CANONICAL_HEADER:
                if old_public_row[column] != new_public_row[column]:
                    self.changelog.append(
                        record_id=request.record_id,
                        field_name=column,
                        old_value=old_public_row[column],
                        new_value=new_public_row[column],
                        reason=f"redaction {request.id}: {note}",
                        contributor=moderator,
                    )
            request.state = RedactionState.APPLIED
            request.decision_reason = note
            request.applied_at = applied_at
            return request

    def decline_redaction(
        self, request_id: str, reason: str, moderator: str = "curator"
    ) -> RedactionRequest:
        from .errors import EmptyReason

        if not reason.strip():
            raise EmptyReason("declining a redaction requires a non-empty reason")
        with self._lock:
            request = self._require_redaction(request_id)
            request.require_pending()
            request.state = RedactionState.DECLINED
            request.decision_reason = reason.strip()
            return request

    def _require_redaction(self, request_id: str) -> RedactionRequest:
        request = self.redactions.get(request_id)
        if request is None:
            raise UnknownRecord(f"no redaction request {request_id!r}")
        return request

    # -- governance: schema proposals -------------------------------------------------

    def propose_schema_change(self, description: str, proposer: str = "anonymous") -> SchemaProposal:
        with self._lock:
            proposal = SchemaProposal(
                id=self._next_item_id("proposal"),
                description=description,
                proposer=proposer.strip() or "anonymous",
                created_at=utc_now_iso(),
            )
            self.proposals[proposal.id] = proposal
            return proposal

    def decide_schema_proposal(
        self, proposal_id: str, decision: str, reason: str, release_note: str = ""
    ) -> SchemaProposal:
        from .errors import EmptyReason

        if not reason.strip():
            raise EmptyReason("schema proposal decisions require a non-empty reason")
        if decision not in ("accept", "reject"):
            raise ValueError(f"decision must be 'accept' or 'reject', got {decision!r}")
        with self._lock:
            proposal = self.proposals.get(proposal_id)
            if proposal is None:
                raise UnknownRecord(f"no schema proposal {proposal_id!r}")
            proposal.require_pending()
            proposal.decision_reason = reason.strip()
            if decision == "accept":
                self.schema_version += 1
                proposal.state = ProposalState.ACCEPTED
                proposal.resulting_schema_version = self.schema_version
                proposal.release_note = (
                    release_note.strip()
                    or f"schema v{self.schema_version}: {proposal.description}"
                )
                self.pending_release_notes.append(proposal.release_note)
            else:
                proposal.state = ProposalState.REJECTED
            return proposal

    # -- metrics and releases ----------------------------------------------------------

    def metrics_json(self) -> str:
        """Canonical public metrics document (shared by CLI and API)."""
        return metrics_document(self.public_records())

    def releases_dir(self) -> Path:
        if self.data_dir is None:
            raise ValueError("registry has no data directory; releases need one")
        path = self.data_dir / "releases"
        path.mkdir(parents=True, exist_ok=True)
        return path

    def cut_release(self, version: str) -> ReleaseManifest:
        with self._lock:
            manifest = cut_release(
                records=self.public_records(),
                version=version,
                releases_dir=self.releases_dir(),
                changelog_entries=list(self.public_changelog()),
                schema_version=self.schema_version,
                release_notes=tuple(self.pending_release_notes),
            )
            self.pending_release_notes = []
            return manifest

    def list_releases(self) -> list[ReleaseManifest]:
        return list_releases(self.releases_dir())

    def get_manifest(self, version: str) -> ReleaseManifest:
        return load_manifest(self.releases_dir(), version)

    def get_artifact(self, version: str, name: str) -> bytes:
        return read_artifact(self.releases_dir(), version, name)

    def diff_releases(self, version_a: str, version_b: str) -> ReleaseDiff:
        return diff_releases(self.releases_dir(), version_a, version_b)

    # -- persistence ----------------------------------------------------------

    def save(self) -> None:
        if self.data_dir is None:
            raise ValueError("registry has no data directory")
        working = self.data_dir / "working"
        working.mkdir(parents=True, exist_ok=True)
        ordered = [self.records[record_id] for record_id in sorted(self.records)]
        (working / "records.csv").write_text(export_csv(ordered), encoding="utf-8")
        state = {
            "schema_version": self.schema_version,
            "pending_release_notes": self.pending_release_notes,
            "changelog": self.changelog.to_list(),
            "intake": [item.to_dict() for item in self.intake.values()],
            "disputes": [item.to_dict() for item in self.disputes.values()],
            "annotations": [item.to_dict() for item in self.annotations.values()],
            "redactions": [item.to_dict() for item in self.redactions.values()],
            "proposals": [item.to_dict() for item in self.proposals.values()],
            "redacted_fields": {k: sorted(v) for k, v in self.redacted_fields.items()},
            "restricted_store": self.restricted_store,
            "item_counters": self._item_counters,
        }
        (working / "state.json").write_text(
            json.dumps(state, indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )

    @classmethod
    def load(
        cls,
        data_dir: Path,
        aliases: CountryAliasTable | None = None,
        regions: RegionTable | None = None,
        gazetteer: geocode_mod.Gazetteer | None = None,
    ) -> "AtlasRegistry":
        registry = cls(aliases=aliases, regions=regions, gazetteer=gazetteer, data_dir=data_dir)
        working = Path(data_dir) / "working"
        records_path = working / "records.csv"
        if records_path.exists():
            for record in import_csv(records_path.read_text(encoding="utf-8")):
                record = mvpd_check(record).record
                registry.records[record.id] = record
                registry._seed_slug_counter(record.id)
        state_path = working / "state.json"
        if state_path.exists():
            state = json.loads(state_path.read_text(encoding="utf-8"))
            registry.schema_version = state.get("schema_version", 1)
            registry.pending_release_notes = list(state.get("pending_release_notes", []))
            registry.changelog = ChangeLog.from_list(state.get("changelog", []))
            registry.intake = {
                item["id"]: IntakeSubmission.from_dict(item) for item in state.get("intake", [])
            }
            registry.disputes = {
                item["id"]: Dispute.from_dict(item) for item in state.get("disputes", [])
            }
            registry.annotations = {
                item["id"]: Annotation.from_dict(item) for item in state.get("annotations", [])
            }
            registry.redactions = {
                item["id"]: RedactionRequest.from_dict(item)
                for item in state.get("redactions", [])
            }
            registry.proposals = {
                item["id"]: SchemaProposal.from_dict(item) for item in state.get("proposals", [])
            }
            registry.redacted_fields = {
                k: set(v) for k, v in state.get("redacted_fields", {}).items()
            }
            registry.restricted_store = dict(state.get("restricted_store", {}))
            registry._item_counters = dict(state.get("item_counters", {}))
        return registry
