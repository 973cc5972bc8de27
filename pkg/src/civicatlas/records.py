"""Canonical record schema: enumerations, the project record, and validation.

A record is one harmonized participatory-AI initiative. Validation collects
the complete list of violated invariants rather than failing on the first,
computes the dedup key, and returns an immutable typed record. The canonical
CSV column order is published here as CANONICAL_HEADER; multi-valued cells
are "; "-joined.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

from .errors import RecordValidationError, ValidationIssue
from .harmonize import EmptyAfterNormalization, normalize_name

REDACTION_MARKER = "[REDACTED]"
LIST_SEPARATOR = "; "
YEAR_MIN, YEAR_MAX = 1900, 2100


class Region(str, Enum):
    AFRICA = "Africa"
    ASIA = "Asia"
    EUROPE = "Europe"
    LATIN_AMERICA = "LatinAmerica"
    NORTH_AMERICA = "NorthAmerica"
    OCEANIA = "Oceania"
    MULTI_REGION = "MultiRegion"
    GLOBAL = "Global"


class Tier(str, Enum):
    COMMUNITY_LED = "CommunityLed"
    CO_DESIGN = "CoDesign"
    PARTICIPATORY_GOVERNANCE = "ParticipatoryGovernance"
    PUBLIC_CONSULTATION = "PublicConsultation"
    PARTICIPATORY_AUDIT = "ParticipatoryAudit"
    CO_GOVERNANCE = "CoGovernance"


class LifecycleStage(str, Enum):
    PROBLEM_FORMULATION = "ProblemFormulation"
    DESIGN = "Design"
    DATA_COLLECTION = "DataCollection"
    MODEL_DEVELOPMENT = "ModelDevelopment"
    MODEL_TRAINING = "ModelTraining"
    EVALUATION = "Evaluation"
    DEPLOYMENT = "Deployment"
    GOVERNANCE = "Governance"


class Verification(str, Enum):
    LIVE_VERIFIED = "live_verified"
    INDIRECT_VERIFIED = "indirect_verified"
    MIXED_VERIFIED = "mixed_verified"
    PAPER_VERIFIED = "paper_verified"


class Grade(str, Enum):
    A = "A"
    B = "B"
    C = "C"


class Review(str, Enum):
    CORE = "core"
    CAUTIOUS = "cautious"
    REVIEW_CANDIDATE = "review_candidate"


class Status(str, Enum):
    ACTIVE = "active"
    COMPLETED = "completed"
    PUBLISHED_CASE = "published_case"
    PILOT = "pilot"
    FUNDED = "funded"
    LEGACY = "legacy"


class Precision(str, Enum):
    LOCALITY = "locality"
    COUNTRY = "country"
    NONE = "none"


def _enum_key(text: str) -> str:
    return "".join(ch for ch in text.casefold() if ch.isalnum())


def parse_enum(enum_cls: type[Enum], raw: str) -> Enum:
    """Parse an enum value leniently: case, spaces, hyphens, underscores ignored.

    Closed enumerations: unknown inputs raise ValueError.
    """
    key = _enum_key(raw)
    for member in enum_cls:
        if key == _enum_key(member.value) or key == _enum_key(member.name):
            return member
    raise ValueError(f"unknown {enum_cls.__name__} value {raw!r}")


@dataclass(frozen=True)
class LocationAnchor:
    """Approximate representative point with an explicit precision tier."""

    latitude: float | None = None
    longitude: float | None = None
    precision: Precision = Precision.NONE

    def is_geocoded(self) -> bool:
        return self.precision is not Precision.NONE


# Shared sentinel for the ungeocoded anchor.
LocationAnchor.UNGEOCODED = LocationAnchor(None, None, Precision.NONE)  # type: ignore[attr-defined]


@dataclass(frozen=True)
class ProjectRecord:
    """One harmonized participatory-AI initiative."""

    id: str
    canonical_name: str
    dedup_key: str
    provenance_url: str
    official_url: str
    country: str
    region: Region
    lead_organization: str
    activity_status: Status
    participation_tier: Tier
    verification_status: Verification
    evidence_grade: Grade
    review_status: Review
    lifecycle_stages: tuple[LifecycleStage, ...]
    alternate_links: tuple[str, ...] = ()
    source_url_2: str = ""
    source_url_3: str = ""
    city: str = ""
    organization_type: str = ""
    partner_organizations: tuple[str, ...] = ()
    start_year: int | None = None
    end_year: int | None = None
    application_domain: str = ""
    domain_category: str = ""
    ai_modality: str = ""
    participants: tuple[str, ...] = ()
    participation_methods: tuple[str, ...] = ()
    decision_points: tuple[str, ...] = ()
    mechanism: str = ""
    evidence_notes: str = ""
    documentation_insufficient: bool = False
    suppress_locality: bool = False
    anchor: LocationAnchor = field(default_factory=lambda: LocationAnchor.UNGEOCODED)


# Canonical CSV column order (published interface). dedup_key is derived from
# canonical_name and therefore not a column.
CANONICAL_HEADER: tuple[str, ...] = (
    "id",
    "canonical_name",
    "alternate_links",
    "provenance_url",
    "source_url_2",
    "source_url_3",
    "official_url",
    "country",
    "city",
    "region",
    "lead_organization",
    "organization_type",
    "partner_organizations",
    "activity_status",
    "start_year",
    "end_year",
    "application_domain",
    "domain_category",
    "ai_modality",
    "participation_tier",
    "participants",
    "participation_methods",
    "lifecycle_stages",
    "decision_points",
    "mechanism",
    "evidence_notes",
    "verification_status",
    "evidence_grade",
    "review_status",
    "documentation_insufficient",
    "suppress_locality",
    "latitude",
    "longitude",
    "location_precision",
)

_LIST_FIELDS = {
    "alternate_links",
    "partner_organizations",
    "participants",
    "participation_methods",
    "lifecycle_stages",
    "decision_points",
}

_REQUIRED_TEXT_FIELDS = ("canonical_name", "provenance_url", "official_url", "lead_organization", "country")

_ENUM_FIELDS: dict[str, type[Enum]] = {
    "region": Region,
    "activity_status": Status,
    "participation_tier": Tier,
    "verification_status": Verification,
    "evidence_grade": Grade,
    "review_status": Review,
}


def _as_text(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value.strip()
    return str(value).strip()


def _as_list(value: object, field_name: str, issues: list[ValidationIssue]) -> list[str]:
    if value is None:
        return []
    if isinstance(value, str):
        items = [part.strip() for part in value.split(";")]
        return [item for item in items if item]
    if isinstance(value, (list, tuple)):
        items = [_as_text(item) for item in value]
        items = [item for item in items if item]
        for item in items:
            if ";" in item:
                issues.append(
                    ValidationIssue(
                        "list_separator_conflict",
                        field_name,
                        f"list element {item!r} contains the reserved separator ';'",
                    )
                )
        return items
    issues.append(ValidationIssue("unknown_enum_value", field_name, f"cannot read list from {value!r}"))
    return []


def _as_year(value: object, field_name: str, issues: list[ValidationIssue]) -> int | None:
    text = _as_text(value)
    if not text:
        return None
    try:
        year = int(text)
    except ValueError:
        issues.append(ValidationIssue("year_out_of_range", field_name, f"not a year: {text!r}"))
        return None
    if not YEAR_MIN <= year <= YEAR_MAX:
        issues.append(
            ValidationIssue(
                "year_out_of_range", field_name, f"{year} outside [{YEAR_MIN}, {YEAR_MAX}]"
            )
        )
        return None
    return year


def _as_bool(value: object) -> bool:
    if isinstance(value, bool):
        return value
    return _as_text(value).casefold() in {"true", "1", "yes"}


def _as_float(value: object, field_name: str, issues: list[ValidationIssue]) -> float | None:
    text = _as_text(value)
    if not text:
        return None
    try:
        return float(text)
    except ValueError:
        issues.append(
            ValidationIssue("coordinate_precision_mismatch", field_name, f"not a number: {text!r}")
        )
        return None


def _parse_anchor(
    candidate: Mapping[str, object], city: str, country: str, issues: list[ValidationIssue]
) -> LocationAnchor:
    lat = _as_float(candidate.get("latitude"), "latitude", issues)
    lon = _as_float(candidate.get("longitude"), "longitude", issues)
    raw_precision = _as_text(candidate.get("location_precision"))
    if not raw_precision:
        precision = Precision.NONE
    else:
        try:
            precision = parse_enum(Precision, raw_precision)
        except ValueError:
            issues.append(
                ValidationIssue(
                    "unknown_enum_value", "location_precision", f"unknown precision {raw_precision!r}"
                )
            )
            return LocationAnchor.UNGEOCODED

    if precision is Precision.NONE:
        if lat is not None or lon is not None:
            issues.append(
                ValidationIssue(
                    "coordinate_precision_mismatch",
                    "location_precision",
                    "precision 'none' must not carry coordinates",
                )
            )
        return LocationAnchor.UNGEOCODED

    if lat is None or lon is None:
        issues.append(
            ValidationIssue(
                "coordinate_precision_mismatch",
                "location_precision",
                f"precision '{precision.value}' requires latitude and longitude",
            )
        )
        return LocationAnchor.UNGEOCODED
    if not -90.0 <= lat <= 90.0:
        issues.append(
            ValidationIssue("coordinate_precision_mismatch", "latitude", f"{lat} outside [-90, 90]")
        )
    if not -180.0 <= lon <= 180.0:
        issues.append(
            ValidationIssue(
                "coordinate_precision_mismatch", "longitude", f"{lon} outside [-180, 180]"
            )
        )
    if precision is Precision.LOCALITY and (not city or not country):
        issues.append(
            ValidationIssue(
                "coordinate_precision_mismatch",
                "location_precision",
                "locality precision requires both city and country",
            )
        )
    if precision is Precision.COUNTRY and not country:
        issues.append(
            ValidationIssue(
                "coordinate_precision_mismatch",
                "location_precision",
                "country precision requires a country",
            )
        )
    return LocationAnchor(latitude=lat, longitude=lon, precision=precision)


def validate_record(candidate: Mapping[str, object]) -> ProjectRecord:
    """Validate a raw field map (CSV row or intake form) into a typed record.

    Collects every violated invariant; on any failure raises
    RecordValidationError carrying the full issue list. The dedup key is
    always recomputed from the canonical name. Unknown keys are ignored so
    importers can carry extra columns.
    """
    issues: list[ValidationIssue] = []

    text: dict[str, str] = {}
    for name in _REQUIRED_TEXT_FIELDS:
        value = _as_text(candidate.get(name))
        text[name] = value
        if not value:
            issues.append(ValidationIssue("missing_required_field", name, "required field is empty"))

    dedup_key = ""
    if text["canonical_name"]:
        try:
            dedup_key = normalize_name(text["canonical_name"])
        except EmptyAfterNormalization:
            issues.append(
                ValidationIssue(
                    "empty_after_normalization",
                    "canonical_name",
                    "name contains no letters or digits",
                )
            )

    enums: dict[str, Enum] = {}
    for name, enum_cls in _ENUM_FIELDS.items():
        raw = _as_text(candidate.get(name))
        if not raw:
            issues.append(ValidationIssue("missing_required_field", name, "required field is empty"))
            continue
        try:
            enums[name] = parse_enum(enum_cls, raw)
        except ValueError as exc:
            issues.append(ValidationIssue("unknown_enum_value", name, str(exc)))

    lists: dict[str, list[str]] = {
        name: _as_list(candidate.get(name), name, issues) for name in _LIST_FIELDS if name != "lifecycle_stages"
    }

    stages: list[LifecycleStage] = []
    for raw_stage in _as_list(candidate.get("lifecycle_stages"), "lifecycle_stages", issues):
        try:
            stages.append(parse_enum(LifecycleStage, raw_stage))  # type: ignore[arg-type]
        except ValueError as exc:
            issues.append(ValidationIssue("unknown_enum_value", "lifecycle_stages", str(exc)))
    if not stages and not any(i.field == "lifecycle_stages" for i in issues):
        issues.append(
            ValidationIssue("missing_required_field", "lifecycle_stages", "at least one stage required")
        )

    start_year = _as_year(candidate.get("start_year"), "start_year", issues)
    end_year = _as_year(candidate.get("end_year"), "end_year", issues)
    if start_year is not None and end_year is not None and start_year > end_year:
        issues.append(
            ValidationIssue(
                "year_order_violation",
                "start_year",
                f"start_year {start_year} after end_year {end_year}",
            )
        )

    city = _as_text(candidate.get("city"))
    anchor = _parse_anchor(candidate, city, text["country"], issues)

    if issues:
        raise RecordValidationError(issues)

    return ProjectRecord(
        id=_as_text(candidate.get("id")),
        canonical_name=text["canonical_name"],
        dedup_key=dedup_key,
        alternate_links=tuple(lists["alternate_links"]),
        provenance_url=text["provenance_url"],
        source_url_2=_as_text(candidate.get("source_url_2")),
        source_url_3=_as_text(candidate.get("source_url_3")),
        official_url=text["official_url"],
        country=text["country"],
        city=city,
        region=enums["region"],  # type: ignore[arg-type]
        lead_organization=text["lead_organization"],
        organization_type=_as_text(candidate.get("organization_type")),
        partner_organizations=tuple(lists["partner_organizations"]),
        activity_status=enums["activity_status"],  # type: ignore[arg-type]
        start_year=start_year,
        end_year=end_year,
        application_domain=_as_text(candidate.get("application_domain")),
        domain_category=_as_text(candidate.get("domain_category")),
        ai_modality=_as_text(candidate.get("ai_modality")),
        participation_tier=enums["participation_tier"],  # type: ignore[arg-type]
        participants=tuple(lists["participants"]),
        participation_methods=tuple(lists["participation_methods"]),
        lifecycle_stages=tuple(stages),
        decision_points=tuple(lists["decision_points"]),
        mechanism=_as_text(candidate.get("mechanism")),
        evidence_notes=_as_text(candidate.get("evidence_notes")),
        verification_status=enums["verification_status"],  # type: ignore[arg-type]
        evidence_grade=enums["evidence_grade"],  # type: ignore[arg-type]
        review_status=enums["review_status"],  # type: ignore[arg-type]
        documentation_insufficient=_as_bool(candidate.get("documentation_insufficient")),
        suppress_locality=_as_bool(candidate.get("suppress_locality")),
        anchor=anchor,
    )


def record_to_row(record: ProjectRecord) -> dict[str, str]:
    """Serialize a record to a CSV row dict in canonical column order."""
    anchor = record.anchor
    row = {
        "id": record.id,
        "canonical_name": record.canonical_name,
        "alternate_links": LIST_SEPARATOR.join(record.alternate_links),
        "provenance_url": record.provenance_url,
        "source_url_2": record.source_url_2,
        "source_url_3": record.source_url_3,
        "official_url": record.official_url,
        "country": record.country,
        "city": record.city,
        "region": record.region.value,
        "lead_organization": record.lead_organization,
        "organization_type": record.organization_type,
        "partner_organizations": LIST_SEPARATOR.join(record.partner_organizations),
        "activity_status": record.activity_status.value,
        "start_year": "" if record.start_year is None else str(record.start_year),
        "end_year": "" if record.end_year is None else str(record.end_year),
        "application_domain": record.application_domain,
        "domain_category": record.domain_category,
        "ai_modality": record.ai_modality,
        "participation_tier": record.participation_tier.value,
        "participants": LIST_SEPARATOR.join(record.participants),
        "participation_methods": LIST_SEPARATOR.join(record.participation_methods),
        "lifecycle_stages": LIST_SEPARATOR.join(s.value for s in record.lifecycle_stages),
        "decision_points": LIST_SEPARATOR.join(record.decision_points),
        "mechanism": record.mechanism,
        "evidence_notes": record.evidence_notes,
        "verification_status": record.verification_status.value,
        "evidence_grade": record.evidence_grade.value,
        "review_status": record.review_status.value,
        "documentation_insufficient": "true" if record.documentation_insufficient else "false",
        "suppress_locality": "true" if record.suppress_locality else "false",
        "latitude": "" if anchor.latitude is None else repr(anchor.latitude),
        "longitude": "" if anchor.longitude is None else repr(anchor.longitude),
        "location_precision": anchor.precision.value,
    }
    return {name: row[name] for name in CANONICAL_HEADER}


def record_to_dict(record: ProjectRecord) -> dict[str, object]:
    """JSON-ready dict with typed values and a nested anchor object."""
    return {
        "id": record.id,
        "canonical_name": record.canonical_name,
        "dedup_key": record.dedup_key,
        "alternate_links": list(record.alternate_links),
        "provenance_url": record.provenance_url,
        "source_url_2": record.source_url_2,
        "source_url_3": record.source_url_3,
        "official_url": record.official_url,
        "country": record.country,
        "city": record.city,
        "region": record.region.value,
        "lead_organization": record.lead_organization,
        "organization_type": record.organization_type,
        "partner_organizations": list(record.partner_organizations),
        "activity_status": record.activity_status.value,
        "start_year": record.start_year,
        "end_year": record.end_year,
        "application_domain": record.application_domain,
        "domain_category": record.domain_category,
        "ai_modality": record.ai_modality,
        "participation_tier": record.participation_tier.value,
        "participants": list(record.participants),
        "participation_methods": list(record.participation_methods),
        "lifecycle_stages": [s.value for s in record.lifecycle_stages],
        "decision_points": list(record.decision_points),
        "mechanism": record.mechanism,
        "evidence_notes": record.evidence_notes,
        "verification_status": record.verification_status.value,
        "evidence_grade": record.evidence_grade.value,
        "review_status": record.review_status.value,
        "documentation_insufficient": record.documentation_insufficient,
        "suppress_locality": record.suppress_locality,
        "anchor": {
            "latitude": record.anchor.latitude,
            "longitude": record.anchor.longitude,
            "precision": record.anchor.precision.value,
        },
    }


@dataclass(frozen=True)
class MvpdResult:
    """Outcome of the minimal-participation-documentation check."""

    passed: bool
    missing: tuple[str, ...]
    record: ProjectRecord


MVPD_ELEMENTS = ("locus", "participants", "decision_points", "mechanism")


def mvpd_check(record: ProjectRecord) -> MvpdResult:
    """Check the four minimal documentation elements.

    Passes iff lifecycle locus, participants, decision points, and mechanism
    are all non-empty; otherwise lists exactly the missing ones. The returned
    record carries documentation_insufficient set accordingly and is otherwise
    unchanged.
    """
    missing: list[str] = []
    if not record.lifecycle_stages:
        missing.append("locus")
    if not record.participants:
        missing.append("participants")
    if not record.decision_points:
        missing.append("decision_points")
    if not record.mechanism.strip():
        missing.append("mechanism")
    insufficient = bool(missing)
    updated = record
    if record.documentation_insufficient != insufficient:
        updated = dataclasses.replace(record, documentation_insufficient=insufficient)
    return MvpdResult(passed=not insufficient, missing=tuple(missing), record=updated)


_SLUG_MAX = 48


def slug_for(dedup_key: str) -> str:
    """Lowercase ASCII slug of a dedup key, truncated to 48 characters."""
    ascii_key = dedup_key.encode("ascii", "ignore").decode("ascii")
    slug = "".join(ch if ch.isalnum() else "-" for ch in ascii_key)
    slug = "-".join(part for part in slug.split("-") if part)
    return slug[:_SLUG_MAX].rstrip("-") or "record"


def make_record_id(dedup_key: str, counter: int) -> str:
    """Stable id: slug plus zero-padded 4-digit disambiguator."""
    return f"{slug_for(dedup_key)}-{counter:04d}"


def field_presence(record: ProjectRecord, field_name: str) -> bool:
    """True when the named field holds a non-empty value."""
    if field_name not in {f.name for f in dataclasses.fields(ProjectRecord)}:
        from .errors import UnknownField

        raise UnknownField(f"no such record field: {field_name!r}")
    value = getattr(record, field_name)
    if value is None:
        return False
    if isinstance(value, bool):
        return True
    if isinstance(value, LocationAnchor):
        return value.is_geocoded()
    if isinstance(value, (tuple, list)):
        return len(value) > 0
    if isinstance(value, str):
        return bool(value.strip())
    return True


def iter_field_names() -> Iterable[str]:
    return [f.name for f in dataclasses.fields(ProjectRecord)]
