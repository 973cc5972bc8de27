"""Corpus-level statistics: completeness, missingness bands, distributions,
and provenance-domain analysis.

All computations are pure and deterministic. Percentages use half-up rounding
at one decimal (Decimal arithmetic, never binary floats), so recomputing a
report over a release snapshot reproduces it byte-for-byte.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from enum import Enum
from urllib.parse import urlparse

from .errors import OutOfRange
from .records import ProjectRecord, field_presence

# Fields whose completeness the standard report covers: locality anchor,
# organizations, sources, and the temporal profile.
DEFAULT_COMPLETENESS_FIELDS: tuple[str, ...] = (
    "city",
    "lead_organization",
    "provenance_url",
    "official_url",
    "source_url_2",
    "source_url_3",
    "partner_organizations",
    "start_year",
    "end_year",
)


def round_half_up_percent(count: int, total: int) -> Decimal:
    """count/total as a percentage, half-up rounded to one decimal."""
    if total == 0:
        return Decimal("0.0")
    value = Decimal(count) * 100 / Decimal(total)
    return value.quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)


@dataclass(frozen=True)
class FieldCompleteness:
    present_count: int
    percent: Decimal

    @property
    def display(self) -> str:
        return str(self.percent)


@dataclass(frozen=True)
class CompletenessReport:
    total: int
    fields: dict[str, FieldCompleteness]


def field_completeness(
    records: list[ProjectRecord],
    field_names: tuple[str, ...] = DEFAULT_COMPLETENESS_FIELDS,
) -> CompletenessReport:
    """Per-field presence counts and percentages over the record set.

    Presence means a non-empty value. Unknown field names raise UnknownField.
    """
    total = len(records)
    fields: dict[str, FieldCompleteness] = {}
    for name in field_names:
        present = sum(1 for record in records if field_presence(record, name))
        fields[name] = FieldCompleteness(
            present_count=present, percent=round_half_up_percent(present, total)
        )
    return CompletenessReport(total=total, fields=fields)


class MissingnessBand(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"


def missingness_band(completeness_percent: Decimal | float | int | str) -> MissingnessBand:
    """Band a field by how much of it is missing.

    missing% = 100 - completeness%; low < 30, 30 <= medium <= 70, high > 70.
    """
    percent = Decimal(str(completeness_percent))
    if percent < 0 or percent > 100:
        raise OutOfRange(f"completeness percent {percent} outside [0, 100]")
    missing = Decimal(100) - percent
    if missing < Decimal(30):
        return MissingnessBand.LOW
    if missing <= Decimal(70):
        return MissingnessBand.MEDIUM
    return MissingnessBand.HIGH


@dataclass(frozen=True)
class DistributionReport:
    """Label -> count maps. Single-label maps sum to N; lifecycle stages are
    counted once per (record, stage) pair; start years cover dated records."""

    tiers: dict[str, int]
    lifecycle_stages: dict[str, int]
    regions: dict[str, int]
    statuses: dict[str, int]
    verification: dict[str, int]
    grades: dict[str, int]
    review: dict[str, int]
    start_years: dict[int, int]


def _sorted_counts(counter: Counter) -> dict:
    return dict(sorted(counter.items()))


def distributions(records: list[ProjectRecord]) -> DistributionReport:
    tiers: Counter = Counter()
    stages: Counter = Counter()
    regions: Counter = Counter()
    statuses: Counter = Counter()
    verification: Counter = Counter()
    grades: Counter = Counter()
    review: Counter = Counter()
    years: Counter = Counter()
    for record in records:
        tiers[record.participation_tier.value] += 1
        regions[record.region.value] += 1
        statuses[record.activity_status.value] += 1
        verification[record.verification_status.value] += 1
        grades[record.evidence_grade.value] += 1
        review[record.review_status.value] += 1
        for stage in record.lifecycle_stages:
            stages[stage.value] += 1
        if record.start_year is not None:
            years[record.start_year] += 1
    return DistributionReport(
        tiers=_sorted_counts(tiers),
        lifecycle_stages=_sorted_counts(stages),
        regions=_sorted_counts(regions),
        statuses=_sorted_counts(statuses),
        verification=_sorted_counts(verification),
        grades=_sorted_counts(grades),
        review=_sorted_counts(review),
        start_years=_sorted_counts(years),
    )


@dataclass(frozen=True)
class DomainReport:
    """Provenance hosts ranked by count (ties lexicographic) plus suffix counts."""

    ranked: tuple[tuple[str, int], ...]
    suffixes: dict[str, int]
    malformed: tuple[str, ...]

    def top(self, n: int) -> tuple[tuple[str, int], ...]:
        return self.ranked[:n]


def extract_domain(url: str) -> str:
    """Registered domain of a URL: host minus a leading 'www.'.

    Raises ValueError for URLs without an http(s) scheme and host.
    """
    parsed = urlparse(url.strip())
    if parsed.scheme not in ("http", "https") or not parsed.netloc:
        raise ValueError(f"not a well-formed http(s) URL: {url!r}")
    host = parsed.netloc.lower()
    if "@" in host:
        host = host.rsplit("@", 1)[1]
    if ":" in host:
        host = host.split(":", 1)[0]
    if host.startswith("www."):
        host = host[4:]
    if not host:
        raise ValueError(f"not a well-formed http(s) URL: {url!r}")
    return host


def domain_suffix(domain: str) -> str:
    """Final dot-separated label, '.'-prefixed ('a.gov.uk' -> '.uk')."""
    return "." + domain.rsplit(".", 1)[-1]


def provenance_domains(records: list[ProjectRecord]) -> DomainReport:
    """Rank provenance-URL domains and count suffixes.

    Malformed URLs are skipped and reported by record id; domain counts sum to
    the number of well-formed provenance URLs.
    """
    domains: Counter = Counter()
    suffixes: Counter = Counter()
    malformed: list[str] = []
    for record in records:
        try:
            domain = extract_domain(record.provenance_url)
        except ValueError:
            malformed.append(record.id)
            continue
        domains[domain] += 1
        suffixes[domain_suffix(domain)] += 1
    ranked = tuple(sorted(domains.items(), key=lambda item: (-item[1], item[0])))
    return DomainReport(
        ranked=ranked,
        suffixes=_sorted_counts(suffixes),
        malformed=tuple(malformed),
    )


def metrics_document(
    records: list[ProjectRecord],
    field_names: tuple[str, ...] = DEFAULT_COMPLETENESS_FIELDS,
) -> str:
    """Canonical JSON metrics artifact shared by the CLI and the service.

    Percentages serialize as one-decimal strings to stay exact.
    """
    completeness = field_completeness(records, field_names)
    dist = distributions(records)
    domains = provenance_domains(records)
    payload = {
        "total_records": completeness.total,
        "completeness": {
            name: {
                "present_count": fc.present_count,
                "percent": fc.display,
                "missingness_band": missingness_band(fc.percent).value,
            }
            for name, fc in completeness.fields.items()
        },
        "distributions": {
            "participation_tiers": dist.tiers,
            "lifecycle_stages": dist.lifecycle_stages,
            "regions": dist.regions,
            "activity_statuses": dist.statuses,
            "verification_statuses": dist.verification,
            "evidence_grades": dist.grades,
            "review_statuses": dist.review,
            "start_years": {str(year): count for year, count in dist.start_years.items()},
        },
        "provenance_domains": {
            "ranked": [[domain, count] for domain, count in domains.ranked],
            "suffixes": domains.suffixes,
            "malformed_record_ids": list(domains.malformed),
        },
    }
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
