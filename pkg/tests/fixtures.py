"""Synthetic corpus builders shared across the test suite.

The main fixture is a 131-record corpus engineered so that its per-field
presence counts are 130/131/131/131/131/112/95/131/29 (city, lead org,
provenance, official, second source, third source, partners, start year,
end year), its provenance domains embed a known top-10 ranking, exactly one
global record stays ungeocoded, and every region count sums to 131.
"""

from __future__ import annotations

import warnings

from civicatlas.geocode import Gazetteer, resolve_record
from civicatlas.records import ProjectRecord, validate_record

CORPUS_TOTAL = 131
CORPUS_PRESENT_COUNTS = {
    "city": 130,
    "lead_organization": 131,
    "provenance_url": 131,
    "official_url": 131,
    "source_url_2": 131,
    "source_url_3": 112,
    "partner_organizations": 95,
    "start_year": 131,
    "end_year": 29,
}
CORPUS_EXPECTED_PERCENTS = {
    "city": "99.2",
    "lead_organization": "100.0",
    "provenance_url": "100.0",
    "official_url": "100.0",
    "source_url_2": "100.0",
    "source_url_3": "85.5",
    "partner_organizations": "72.5",
    "start_year": "100.0",
    "end_year": "22.1",
}

# Domain -> count pairs for the engineered top-10 provenance ranking.
TOP_DOMAINS = (
    ("aplusalliance.org", 5),
    ("dl.acm.org", 5),
    ("masakhane.io", 5),
    ("mila.quebec", 4),
    ("moda.gov.tw", 3),
    ("nesta.org.uk", 3),
    ("arxiv.org", 2),
    ("cdacnetwork.org", 2),
    ("cndp.us", 2),
    ("openforgood.info", 2),
)

EXPECTED_TOP10 = (
    ("aplusalliance.org", 5),
    ("dl.acm.org", 5),
    ("masakhane.io", 5),
    ("mila.quebec", 4),
    ("moda.gov.tw", 3),
    ("nesta.org.uk", 3),
    ("arxiv.org", 2),
    ("cdacnetwork.org", 2),
    ("cndp.us", 2),
    ("openforgood.info", 2),
)

_PLACES = (
    ("United States", "San Francisco"),
    ("United Kingdom", "London"),
    ("Canada", "Toronto"),
    ("Kenya", "Nairobi"),
    ("Finland", "Helsinki"),
    ("Germany", "Berlin"),
    ("India", "New Delhi"),
    ("Brazil", "São Paulo"),
    ("Australia", "Sydney"),
    ("Taiwan", "Taipei"),
    ("Netherlands", "Amsterdam"),
    ("Nigeria", "Lagos"),
    ("Mexico", "Mexico City"),
    ("New Zealand", "Wellington"),
    ("South Africa", "Cape Town"),
    ("France", "Paris"),
    ("Japan", "Tokyo"),
    ("Ghana", "Accra"),
    ("Sweden", "Stockholm"),
    ("Estonia", "Tallinn"),
)

_REGION_BY_COUNTRY = {
    "United States": "NorthAmerica",
    "United Kingdom": "Europe",
    "Canada": "NorthAmerica",
    "Kenya": "Africa",
    "Finland": "Europe",
    "Germany": "Europe",
    "India": "Asia",
    "Brazil": "LatinAmerica",
    "Australia": "Oceania",
    "Taiwan": "Asia",
    "Netherlands": "Europe",
    "Nigeria": "Africa",
    "Mexico": "LatinAmerica",
    "New Zealand": "Oceania",
    "South Africa": "Africa",
    "France": "Europe",
    "Japan": "Asia",
    "Ghana": "Africa",
    "Sweden": "Europe",
    "Estonia": "Europe",
}

_TIERS = (
    "CommunityLed",
    "CoDesign",
    "ParticipatoryGovernance",
    "PublicConsultation",
    "ParticipatoryAudit",
    "CoGovernance",
)
_STAGES = (
    "ProblemFormulation",
    "Governance",
    "Evaluation",
    "DataCollection",
    "Deployment",
    "Design",
    "ModelTraining",
    "ModelDevelopment",
)
_STATUSES = ("active", "completed", "published_case", "pilot", "funded", "legacy")
_VERIFICATION = ("live_verified", "indirect_verified", "mixed_verified", "paper_verified")
_GRADES = ("A", "B", "C")
_REVIEW = ("core", "cautious", "review_candidate")


def _domain_cycle() -> list[str]:
    domains: list[str] = []
    for domain, count in TOP_DOMAINS:
        domains.extend([domain] * count)
    return domains


def build_corpus_rows() -> list[dict[str, str]]:
    """Raw field maps for the engineered 131-record corpus."""
    top_domains = _domain_cycle()  # 33 urls
    rows: list[dict[str, str]] = []
    for i in range(CORPUS_TOTAL):
        if i == 0:
            country, city, region = "Global", "", "Global"
        else:
            country, city = _PLACES[(i - 1) % len(_PLACES)]
            region = _REGION_BY_COUNTRY[country]
            if i % 7 == 0:
                city = f"District {i}"  # not in the gazetteer: country fallback
        domain = top_domains[i] if i < len(top_domains) else f"project-{i:03d}.example"
        start_year = 2015 + (i % 10)
        stage_count = 1 + (i % 3)
        stages = [_STAGES[(i + offset) % len(_STAGES)] for offset in range(stage_count)]
        row = {
            "id": f"fixture-project-{i:03d}-0001",
            "canonical_name": f"Fixture Project {i:03d}",
            "alternate_links": "",
            "provenance_url": f"https://{domain}/projects/{i:03d}",
            "source_url_2": f"https://mirror.example/{i:03d}",
            "source_url_3": f"https://archive.example/{i:03d}" if i < 112 else "",
            "official_url": f"https://official.example/{i:03d}",
            "country": country,
            "city": city,
            "region": region,
            "lead_organization": f"Lead Organization {i % 11}",
            "organization_type": ("university/research lab", "nonprofit/NGO", "public agency")[i % 3],
            "partner_organizations": f"Partner {i % 9}; Partner {(i + 1) % 9}" if i < 95 else "",
            "activity_status": _STATUSES[i % len(_STATUSES)],
            "start_year": str(start_year),
            "end_year": str(start_year + 2) if i < 29 else "",
            "application_domain": ("healthcare", "AI governance", "accessibility", "human rights")[i % 4],
            "domain_category": ("public dialogue", "stakeholder engagement", "co-design")[i % 3],
            "ai_modality": ("NLP", "computer vision", "tabular ML")[i % 3],
            "participation_tier": _TIERS[i % len(_TIERS)],
            "participants": f"community organization {i % 5}",
            "participation_methods": ("workshops", "community review", "oversight board")[i % 3],
            "lifecycle_stages": "; ".join(stages),
            "decision_points": ("data governance", "deployment conditions", "evaluation criteria")[i % 3],
            "mechanism": "documented advisory mechanism",
            "evidence_notes": "synthetic fixture record",
            "verification_status": _VERIFICATION[i % len(_VERIFICATION)],
            "evidence_grade": _GRADES[i % len(_GRADES)],
            "review_status": _REVIEW[i % len(_REVIEW)],
            "documentation_insufficient": "false",
            "suppress_locality": "false",
            "latitude": "",
            "longitude": "",
            "location_precision": "none",
        }
        rows.append(row)
    return rows


def build_corpus_records(gazetteer: Gazetteer) -> list[ProjectRecord]:
    """Validated, geocoded corpus. Exactly one (global) record stays ungeocoded."""
    records = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for row in build_corpus_rows():
            records.append(resolve_record(validate_record(row), gazetteer))
    return records


def make_record(**overrides) -> ProjectRecord:
    """One valid record with sensible defaults, tweakable per test."""
    row: dict[str, object] = {
        "id": "sample-project-0001",
        "canonical_name": "Sample Project",
        "alternate_links": "",
        "provenance_url": "https://example.org/sample",
        "source_url_2": "",
        "source_url_3": "",
        "official_url": "https://sample.example.org",
        "country": "Finland",
        "city": "Helsinki",
        "region": "Europe",
        "lead_organization": "Sample Lab",
        "organization_type": "university/research lab",
        "partner_organizations": "",
        "activity_status": "active",
        "start_year": "2020",
        "end_year": "",
        "application_domain": "healthcare",
        "domain_category": "co-design",
        "ai_modality": "NLP",
        "participation_tier": "CoDesign",
        "participants": "patient association",
        "participation_methods": "workshops",
        "lifecycle_stages": "Design; Evaluation",
        "decision_points": "evaluation criteria",
        "mechanism": "standing advisory group",
        "evidence_notes": "",
        "verification_status": "live_verified",
        "evidence_grade": "A",
        "review_status": "core",
        "documentation_insufficient": "false",
        "suppress_locality": "false",
        "latitude": "",
        "longitude": "",
        "location_precision": "none",
    }
    row.update(overrides)
    return validate_record(row)
