from __future__ import annotations

import hashlib
import json

import pytest

from civicatlas.errors import (
    AlreadyDecided,
    AlreadyResolved,
    EmptyReason,
    ProtectedField,
    RecordValidationError,
    UnknownRecord,
)
from civicatlas.governance import DisputeState, IntakeState, ProposalState, RedactionState
from civicatlas.records import Precision, REDACTION_MARKER, record_to_row
from civicatlas.registry import AtlasRegistry

from fixtures import make_record


def draft_for(name="Helsinki Care Pilot", **overrides) -> dict:
    draft = {
        "canonical_name": name,
        "provenance_url": "https://example.org/care-pilot",
        "official_url": "https://care.example.org",
        "country": "Finland",
        "city": "Helsinki",
        "lead_organization": "City Health Lab",
        "activity_status": "pilot",
        "participation_tier": "CoDesign",
        "participants": "patient association",
        "participation_methods": "workshops",
        "lifecycle_stages": "Design; Evaluation",
        "decision_points": "service eligibility rules",
        "mechanism": "co-design board",
        "verification_status": "live_verified",
        "evidence_grade": "A",
        "review_status": "core",
    }
    draft.update(overrides)
    return draft


def record_hash(record) -> str:
    return hashlib.sha256(json.dumps(record_to_row(record), sort_keys=True).encode()).hexdigest()


class TestIntake:
    def test_valid_draft_queues_pending(self, registry):
        submission = registry.submit_intake(draft_for(), submitter="community member")
        assert submission.state is IntakeState.PENDING
        assert submission.validation_errors == []
        assert registry.records == {}  # nothing published

    def test_draft_missing_provenance_pre_flagged(self, registry):
        submission = registry.submit_intake(draft_for(provenance_url=""))
        assert submission.state is IntakeState.PENDING
        assert any("provenance_url" in err for err in submission.validation_errors)

    def test_duplicate_dedup_key_warns_with_existing_id(self, registry):
        existing = registry.add_record(make_record(id="", canonical_name="Helsinki Care Pilot"), reason="seed")
        submission = registry.submit_intake(draft_for(name="Helsinki  Care  Pilot"))
        assert submission.duplicate_of == existing.id

    def test_unparseable_draft_rejected(self, registry):
        from civicatlas.errors import UnparseableDraft

        with pytest.raises(UnparseableDraft):
            registry.submit_intake("not a mapping")

    def test_accept_creates_record_and_changelog(self, registry):
        submission = registry.submit_intake(draft_for())
        before = len(registry.changelog)
        decided = registry.review_intake(submission.id, "accept", "well documented")
        assert decided.state is IntakeState.ACCEPTED
        record = registry.records[decided.accepted_record_id]
        assert record.id.startswith("helsinki-care-pilot-")
        assert record.anchor.precision is Precision.LOCALITY  # geocoded on accept
        entries = registry.changelog.entries_for(record.id)
        assert len(entries) == 1 and len(registry.changelog) == before + 1
        assert entries[0].new_value == "created"

    def test_accept_invalid_draft_stays_pending(self, registry):
        submission = registry.submit_intake(draft_for(participation_tier="NotATier"))
        with pytest.raises(RecordValidationError):
            registry.review_intake(submission.id, "accept", "try anyway")
        assert registry.intake[submission.id].state is IntakeState.PENDING

    def test_reject_with_reason(self, registry):
        submission = registry.submit_intake(draft_for())
        decided = registry.review_intake(submission.id, "reject", "insufficient documentation")
        assert decided.state is IntakeState.REJECTED
        assert decided.decision_reason == "insufficient documentation"

    def test_decide_twice_fails(self, registry):
        submission = registry.submit_intake(draft_for())
        registry.review_intake(submission.id, "reject", "nope")
        with pytest.raises(AlreadyDecided):
            registry.review_intake(submission.id, "accept", "changed my mind")

    def test_empty_reason_rejected(self, registry):
        submission = registry.submit_intake(draft_for())
        with pytest.raises(EmptyReason):
            registry.review_intake(submission.id, "reject", "  ")

    def test_region_derived_from_country_on_accept(self, registry):
        draft = draft_for()
        draft.pop("region", None)
        draft["country"] = "UK"
        draft["city"] = "London"
        submission = registry.submit_intake(draft)
        decided = registry.review_intake(submission.id, "accept", "ok")
        record = registry.records[decided.accepted_record_id]
        assert record.country == "United Kingdom"
        assert record.region.value == "Europe"


class TestDisputes:
    def seed(self, registry):
        return registry.add_record(
            make_record(id="", canonical_name="Disputed Project", country="Kenya", city="Nairobi", region="Africa"),
            reason="seed",
        )

    def test_resolved_edit_applies_changelog_and_correction(self, registry):
        record = self.seed(registry)
        dispute = registry.open_dispute(record.id, "country is wrong", ["https://proof.example"])
        resolved = registry.resolve_dispute(
            dispute.id, "edit", "verified against source", field_name="country", new_value="Uganda"
        )
        assert resolved.state is DisputeState.RESOLVED_EDIT
        assert registry.records[record.id].country == "Uganda"
        sequence = int(resolved.resolution_ref)
        entry = next(e for e in registry.changelog.entries() if e.sequence == sequence)
        assert (entry.field, entry.old_value, entry.new_value) == ("country", "Kenya", "Uganda")

    def test_resolved_annotation_leaves_record_unchanged(self, registry):
        record = self.seed(registry)
        digest_before = record_hash(registry.records[record.id])
        dispute = registry.open_dispute(record.id, "context is missing")
        resolved = registry.resolve_dispute(dispute.id, "annotation", "adding context note")
        assert resolved.state is DisputeState.RESOLVED_ANNOTATION
        assert record_hash(registry.records[record.id]) == digest_before
        note = registry.annotations[resolved.resolution_ref]
        assert note.record_id == record.id

    def test_resolve_twice_fails(self, registry):
        record = self.seed(registry)
        dispute = registry.open_dispute(record.id, "claim")
        registry.resolve_dispute(dispute.id, "reject", "no evidence supplied")
        with pytest.raises(AlreadyResolved):
            registry.resolve_dispute(dispute.id, "annotation", "after the fact")

    def test_unknown_record_rejected(self, registry):
        with pytest.raises(UnknownRecord):
            registry.open_dispute("ghost-0001", "claim")

    def test_thread_preserved_through_resolution(self, registry):
        record = self.seed(registry)
        dispute = registry.open_dispute(record.id, "original claim", author="reporter")
        registry.resolve_dispute(dispute.id, "reject", "not substantiated")
        stored = registry.disputes[dispute.id]
        assert stored.messages[0].body == "original claim"
        assert len(stored.messages) == 2  # claim + resolution note


class TestAnnotations:
    def test_annotation_changes_no_field(self, registry):
        record = registry.add_record(make_record(id="", canonical_name="Annotated"), reason="seed")
        digest_before = record_hash(registry.records[record.id])
        note = registry.add_annotation(record.id, "observer", "useful context", link="https://ctx.example")
        assert record_hash(registry.records[record.id]) == digest_before
        assert registry.annotations[note.id].body == "useful context"

    def test_annotation_requires_known_record(self, registry):
        with pytest.raises(UnknownRecord):
            registry.add_annotation("ghost-0001", "observer", "note")


class TestRedactions:
    def seed_sensitive(self, registry):
        record = make_record(
            id="",
            canonical_name="Sensitive Project",
            country="Finland",
            city="Rovaniemi",
            region="Europe",
            latitude="66.5",
            longitude="25.73",
            location_precision="locality",
        )
        return registry.add_record(record, reason="seed")

    def test_apply_masks_public_and_downgrades_anchor(self, registry):
        record = self.seed_sensitive(registry)
        request = registry.request_redaction(record.id, ["city"], "safety-sensitive location")
        applied = registry.apply_redaction(request.id)
        assert applied.state is RedactionState.APPLIED

        public = registry.public_record(record.id)
        assert public.city == REDACTION_MARKER
        assert public.anchor.precision is Precision.COUNTRY
        country_point = registry.gazetteer.country_entry("Finland")
        assert (public.anchor.latitude, public.anchor.longitude) == (
            country_point.latitude,
            country_point.longitude,
        )

        restricted = registry.restricted_record(record.id)
        assert restricted.city == "Rovaniemi"
        assert restricted.anchor.precision is Precision.LOCALITY
        assert registry.restricted_store[f"{record.id}:city"] == "Rovaniemi"

    def test_redacted_value_absent_from_public_changelog(self, registry):
        record = self.seed_sensitive(registry)
        request = registry.request_redaction(record.id, ["city"], "safety")
        registry.apply_redaction(request.id)
        public_log = json.dumps([e.to_dict() for e in registry.public_changelog()])
        assert "Rovaniemi" not in public_log
        restricted_log = json.dumps(registry.changelog.to_list())
        assert "Rovaniemi" in restricted_log

    def test_protected_field_refused(self, registry):
        record = self.seed_sensitive(registry)
        request = registry.request_redaction(record.id, ["canonical_name"], "hide name")
        with pytest.raises(ProtectedField):
            registry.apply_redaction(request.id)

    def test_structural_field_refused(self, registry):
        record = self.seed_sensitive(registry)
        request = registry.request_redaction(record.id, ["participation_tier"], "hide tier")
        with pytest.raises(ProtectedField):
            registry.apply_redaction(request.id)

    def test_decline_changes_nothing(self, registry):
        record = self.seed_sensitive(registry)
        digest_before = record_hash(registry.public_record(record.id))
        request = registry.request_redaction(record.id, ["city"], "please hide")
        declined = registry.decline_redaction(request.id, "not sensitive enough")
        assert declined.state is RedactionState.DECLINED
        assert record_hash(registry.public_record(record.id)) == digest_before

    def test_country_redaction_ungeocodes_public_anchor(self, registry):
        record = self.seed_sensitive(registry)
        request = registry.request_redaction(record.id, ["country"], "hide country")
        registry.apply_redaction(request.id)
        public = registry.public_record(record.id)
        assert public.country == REDACTION_MARKER
        assert public.anchor.precision is Precision.NONE


class TestSchemaProposals:
    def test_accept_increments_schema_version_and_notes(self, registry):
        assert registry.schema_version == 1
        proposal = registry.propose_schema_change("add consent_conditions field", "steward")
        decided = registry.decide_schema_proposal(proposal.id, "accept", "community request")
        assert decided.state is ProposalState.ACCEPTED
        assert registry.schema_version == 2
        assert decided.resulting_schema_version == 2
        assert registry.pending_release_notes  # queued for the next release

    def test_reject_keeps_version(self, registry):
        proposal = registry.propose_schema_change("drop provenance", "someone")
        registry.decide_schema_proposal(proposal.id, "reject", "provenance is mandatory")
        assert registry.schema_version == 1

    def test_accepted_note_lands_in_next_manifest(self, registry):
        registry.add_record(make_record(id="", canonical_name="Rel"), reason="seed")
        proposal = registry.propose_schema_change("add consent_conditions", "steward")
        registry.decide_schema_proposal(proposal.id, "accept", "useful")
        manifest = registry.cut_release("v2026.03")
        assert manifest.schema_version == 2
        assert any("consent_conditions" in note for note in manifest.release_notes)
        # notes are consumed by the release
        next_manifest = registry.cut_release("v2026.04")
        assert next_manifest.release_notes == ()


class TestFiltersAndPagination:
    def seed_many(self, registry):
        specs = [
            ("Kenya Audit", "Kenya", "Africa", "ParticipatoryAudit", "A"),
            ("Nairobi Data", "Kenya", "Africa", "CoDesign", "B"),
            ("Ghana Consult", "Ghana", "Africa", "PublicConsultation", "A"),
            ("Helsinki Reg", "Finland", "Europe", "CoDesign", "A"),
            ("Toronto Board", "Canada", "NorthAmerica", "CoGovernance", "C"),
        ]
        for name, country, region, tier, grade in specs:
            registry.add_record(
                make_record(
                    id="",
                    canonical_name=name,
                    country=country,
                    city="",
                    region=region,
                    participation_tier=tier,
                    evidence_grade=grade,
                ),
                reason="seed",
            )

    def test_tier_filter_exact_set(self, registry):
        self.seed_many(registry)
        matched = registry.filter_records({"participation_tier": "CoDesign"})
        assert sorted(r.canonical_name for r in matched) == ["Helsinki Reg", "Nairobi Data"]

    def test_conjunction_matches_brute_force(self, registry):
        self.seed_many(registry)
        matched = registry.filter_records({"region": "Africa", "evidence_grade": "A"})
        brute = [
            r
            for r in registry.public_records()
            if r.region.value == "Africa" and r.evidence_grade.value == "A"
        ]
        brute.sort(key=lambda r: (r.canonical_name, r.id))
        assert matched == brute
        assert len(matched) == 2

    def test_empty_query_returns_all_ordered(self, registry):
        self.seed_many(registry)
        matched = registry.filter_records({})
        assert len(matched) == 5
        assert [r.canonical_name for r in matched] == sorted(r.canonical_name for r in matched)

    def test_unknown_filter_key_rejected(self, registry):
        from civicatlas.errors import BadFilter

        with pytest.raises(BadFilter):
            registry.filter_records({"sort_by": "name"})

    def test_bad_enum_value_rejected(self, registry):
        from civicatlas.errors import BadFilter

        with pytest.raises(BadFilter):
            registry.filter_records({"participation_tier": "NotATier"})

    def test_pagination_complete_and_disjoint(self, registry):
        self.seed_many(registry)
        seen: list[str] = []
        page = 1
        while True:
            items, total = registry.list_records({}, page=page, page_size=2)
            if not items:
                break
            seen.extend(r.id for r in items)
            page += 1
        assert total == 5
        assert len(seen) == len(set(seen)) == 5

    def test_bad_pagination_rejected(self, registry):
        from civicatlas.errors import BadPagination

        with pytest.raises(BadPagination):
            registry.list_records({}, page=0, page_size=10)
        with pytest.raises(BadPagination):
            registry.list_records({}, page=1, page_size=0)
        with pytest.raises(BadPagination):
            registry.list_records({}, page=1, page_size=501)


class TestPersistence:
    def test_save_load_round_trip(self, registry):
        record = registry.add_record(
            make_record(id="", canonical_name="Persisted Project"), reason="seed"
        )
        registry.open_dispute(record.id, "check me")
        registry.add_annotation(record.id, "observer", "note")
        request = registry.request_redaction(record.id, ["evidence_notes"], "tidy")
        registry.apply_redaction(request.id)
        registry.save()

        reloaded = AtlasRegistry.load(registry.data_dir)
        assert set(reloaded.records) == set(registry.records)
        assert reloaded.changelog.entries() == registry.changelog.entries()
        assert set(reloaded.disputes) == set(registry.disputes)
        assert set(reloaded.annotations) == set(registry.annotations)
        assert reloaded.redacted_fields == registry.redacted_fields
        assert reloaded.public_record(record.id) == registry.public_record(record.id)

    def test_new_ids_continue_after_reload(self, registry):
        registry.add_record(make_record(id="", canonical_name="Counter Test"), reason="seed")
        registry.save()
        reloaded = AtlasRegistry.load(registry.data_dir)
        second = reloaded.add_record(
            make_record(id="", canonical_name="Counter Test Two", provenance_url="https://x.example"),
            reason="seed",
        )
        # same slug prefix families never collide
        assert second.id not in registry.records
