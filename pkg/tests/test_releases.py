from __future__ import annotations

import dataclasses
import hashlib
import json
import random

import pytest

from civicatlas.errors import DigestMismatch, DuplicateVersion, EmptyReason, UnknownRelease
from civicatlas.geocode import resolve_record
from civicatlas.records import LocationAnchor, Precision
from civicatlas.releases import (
    ChangeLog,
    cut_release,
    diff_releases,
    export_csv,
    export_geojson,
    import_csv,
    list_releases,
    load_manifest,
    read_artifact,
    verify_release,
)

from fixtures import build_corpus_records, make_record


def three_records(gazetteer):
    records = [
        make_record(id="alpha-0001", canonical_name="Alpha", country="Finland", city="Helsinki", region="Europe"),
        make_record(id="beta-0001", canonical_name="Beta", country="Kenya", city="", region="Africa"),
        make_record(id="gamma-0001", canonical_name="Gamma", country="Global", city="", region="Global"),
    ]
    return [resolve_record(record, gazetteer) for record in records]


class TestChangeLog:
    def test_sequences_start_at_one_and_increase(self):
        log = ChangeLog()
        first = log.append("alpha-0001", "city", "", "Helsinki", reason="initial geocode")
        second = log.append("alpha-0001", "city", "Helsinki", "Espoo", reason="correction")
        assert (first.sequence, second.sequence) == (1, 2)
        assert [e.sequence for e in log.entries()] == [1, 2]

    def test_empty_reason_rejected(self):
        log = ChangeLog()
        with pytest.raises(EmptyReason):
            log.append("alpha-0001", "city", "", "Helsinki", reason="   ")

    def test_prior_entries_untouched(self):
        log = ChangeLog()
        log.append("a-0001", "city", "", "X", reason="r1")
        before = log.entries()
        log.append("a-0001", "city", "X", "Y", reason="r2")
        assert log.entries()[:1] == before

    def test_round_trip_serialization(self):
        log = ChangeLog()
        log.append("a-0001", "city", "", "X", reason="r1", contributor="tester")
        restored = ChangeLog.from_list(log.to_list())
        assert restored.entries() == log.entries()


class TestExports:
    def test_geojson_excludes_ungeocoded(self, gazetteer):
        records = three_records(gazetteer)
        payload = json.loads(export_geojson(records))
        assert payload["type"] == "FeatureCollection"
        assert len(payload["features"]) == 2  # Global record excluded

    def test_geojson_coordinate_order_and_properties(self, gazetteer):
        records = three_records(gazetteer)
        feature = json.loads(export_geojson(records))["features"][0]
        anchor = records[0].anchor
        assert feature["geometry"]["coordinates"] == [anchor.longitude, anchor.latitude]
        assert set(feature["properties"]) == {
            "id",
            "name",
            "region",
            "participation_tier",
            "evidence_grade",
            "review_status",
            "precision",
        }

    def test_geojson_empty_set(self):
        payload = json.loads(export_geojson([]))
        assert payload == {"type": "FeatureCollection", "features": []}

    def test_geojson_corpus_feature_count_equals_geocoded(self, gazetteer):
        records = build_corpus_records(gazetteer)
        payload = json.loads(export_geojson(records))
        assert len(payload["features"]) == 130

    def test_geojson_never_includes_none_precision_coordinates(self, gazetteer):
        records = three_records(gazetteer)
        text = export_geojson(records)
        assert "gamma-0001" not in text

    def test_csv_round_trip_small(self, gazetteer):
        records = three_records(gazetteer)
        assert import_csv(export_csv(records)) == records

    def test_csv_round_trip_randomized(self, gazetteer):
        rng = random.Random(42)
        places = {"Finland": "Helsinki", "Kenya": "Nairobi", "Canada": "Toronto"}
        records = []
        for i in range(50):
            country = rng.choice(list(places))
            record = make_record(
                id=f"rand-{i:03d}-0001",
                canonical_name=f"Randomized Project {i}",
                country=country,
                city=places[country] if rng.random() < 0.7 else "",
                region={"Finland": "Europe", "Kenya": "Africa", "Canada": "NorthAmerica"}[country],
                start_year=str(rng.randrange(1990, 2026)),
                end_year="",
                evidence_grade=rng.choice(["A", "B", "C"]),
                partner_organizations="Org 1; Org 2" if rng.random() < 0.5 else "",
                evidence_notes=f"notes with, commas and \"quotes\" {i}",
            )
            records.append(resolve_record(record, gazetteer))
        assert import_csv(export_csv(records)) == records


class TestCutRelease:
    def test_manifest_and_digest_oracle(self, tmp_path, gazetteer):
        records = three_records(gazetteer)
        log = ChangeLog()
        for record in records:
            log.append(record.id, "record", "", "created", reason="import")
        manifest = cut_release(records, "v2026.03", tmp_path, list(log.entries()))
        assert manifest.record_count == 3
        assert manifest.geocoded_count == 2
        assert len(manifest.artifacts) == 5
        for info in manifest.artifacts:
            payload = (tmp_path / "v2026.03" / info.name).read_bytes()
            assert hashlib.sha256(payload).hexdigest() == info.sha256
            assert len(payload) == info.byte_length

    def test_duplicate_version_refused(self, tmp_path, gazetteer):
        records = three_records(gazetteer)
        cut_release(records, "v2026.03", tmp_path, [])
        with pytest.raises(DuplicateVersion):
            cut_release(records, "v2026.03", tmp_path, [])

    def test_bad_version_format_rejected(self, tmp_path, gazetteer):
        with pytest.raises(ValueError):
            cut_release(three_records(gazetteer), "2026.03", tmp_path, [])
        with pytest.raises(ValueError):
            cut_release(three_records(gazetteer), "v2026.13", tmp_path, [])

    def test_immutability_edits_do_not_reach_published_artifacts(self, tmp_path, gazetteer):
        records = three_records(gazetteer)
        manifest = cut_release(records, "v2026.03", tmp_path, [])
        # mutate the working set afterwards
        records[0] = dataclasses.replace(records[0], city="Espoo")
        verify_release(tmp_path, "v2026.03")
        archived = read_artifact(tmp_path, "v2026.03", "records.csv").decode("utf-8")
        assert "Espoe" not in archived and "Espoo" not in archived
        assert manifest.artifact("records.csv").sha256 == hashlib.sha256(
            archived.encode("utf-8")
        ).hexdigest()

    def test_tampering_detected(self, tmp_path, gazetteer):
        cut_release(three_records(gazetteer), "v2026.03", tmp_path, [])
        artifact = tmp_path / "v2026.03" / "records.csv"
        artifact.write_text(artifact.read_text() + "tampered", encoding="utf-8")
        with pytest.raises(DigestMismatch):
            verify_release(tmp_path, "v2026.03")

    def test_changelog_range_tracks_previous_release(self, tmp_path, gazetteer):
        records = three_records(gazetteer)
        log = ChangeLog()
        log.append(records[0].id, "record", "", "created", reason="import")
        first = cut_release(records, "v2026.03", tmp_path, list(log.entries()))
        assert (first.changelog_from, first.changelog_to) == (1, 1)
        log.append(records[0].id, "city", "Helsinki", "Espoo", reason="edit")
        second = cut_release(records, "v2026.04", tmp_path, list(log.entries()))
        assert (second.changelog_from, second.changelog_to) == (2, 2)

    def test_list_and_load(self, tmp_path, gazetteer):
        records = three_records(gazetteer)
        cut_release(records, "v2026.03", tmp_path, [])
        cut_release(records, "v2026.04", tmp_path, [])
        versions = [m.version for m in list_releases(tmp_path)]
        assert versions == ["v2026.03", "v2026.04"]
        assert load_manifest(tmp_path, "v2026.04").version == "v2026.04"
        with pytest.raises(UnknownRelease):
            load_manifest(tmp_path, "v2099.01")


class TestDiffReleases:
    def test_identical_releases_empty_diff(self, tmp_path, gazetteer):
        records = three_records(gazetteer)
        cut_release(records, "v2026.03", tmp_path, [])
        cut_release(records, "v2026.04", tmp_path, [])
        diff = diff_releases(tmp_path, "v2026.03", "v2026.04")
        assert diff.is_empty()

    def test_added_record(self, tmp_path, gazetteer):
        records = three_records(gazetteer)
        cut_release(records, "v2026.03", tmp_path, [])
        extra = make_record(id="delta-0001", canonical_name="Delta", country="Finland", region="Europe", city="")
        cut_release(records + [extra], "v2026.04", tmp_path, [])
        diff = diff_releases(tmp_path, "v2026.03", "v2026.04")
        assert diff.added_ids == ("delta-0001",)
        assert diff.removed_ids == () and diff.modified == ()

    def test_field_edit_detected_by_brute_force(self, tmp_path, gazetteer):
        records = three_records(gazetteer)
        cut_release(records, "v2026.03", tmp_path, [])
        edited = records[:]
        edited[1] = dataclasses.replace(edited[1], lead_organization="New Lead Org")
        cut_release(edited, "v2026.04", tmp_path, [])
        diff = diff_releases(tmp_path, "v2026.03", "v2026.04")
        assert diff.modified == (("beta-0001", "lead_organization"),)
