"""Governed, versioned registry and atlas service for participatory-AI
project records: harmonized record schema, deterministic geocoding, corpus
metrics, immutable releases, and moderated governance workflows."""

from .errors import AtlasError, RecordValidationError, ValidationIssue
from .geocode import Gazetteer, geocoded_count, resolve
from .harmonize import (
    CountryAliasTable,
    RegionTable,
    dedupe,
    load_country_tables,
    map_region,
    normalize_country,
    normalize_name,
)
from .metrics import (
    DomainReport,
    MissingnessBand,
    distributions,
    field_completeness,
    metrics_document,
    missingness_band,
    provenance_domains,
)
from .records import (
    CANONICAL_HEADER,
    Grade,
    LifecycleStage,
    LocationAnchor,
    Precision,
    ProjectRecord,
    Region,
    Review,
    Status,
    Tier,
    Verification,
    mvpd_check,
    record_to_dict,
    record_to_row,
    validate_record,
)
from .registry import AtlasRegistry, default_tables
from .releases import (
    ChangeLog,
    ChangeLogEntry,
    ReleaseManifest,
    cut_release,
    diff_releases,
    export_csv,
    export_geojson,
    export_json,
    import_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AtlasError",
    "AtlasRegistry",
    "CANONICAL_HEADER",
    "ChangeLog",
    "ChangeLogEntry",
    "CountryAliasTable",
    "DomainReport",
    "Gazetteer",
    "Grade",
    "LifecycleStage",
    "LocationAnchor",
    "MissingnessBand",
    "Precision",
    "ProjectRecord",
    "RecordValidationError",
    "Region",
    "RegionTable",
    "ReleaseManifest",
    "Review",
    "Status",
    "Tier",
    "ValidationIssue",
    "Verification",
    "cut_release",
    "dedupe",
    "default_tables",
    "diff_releases",
    "distributions",
    "export_csv",
    "export_geojson",
    "export_json",
    "field_completeness",
    "geocoded_count",
    "import_csv",
    "load_country_tables",
    "map_region",
    "metrics_document",
    "missingness_band",
    "mvpd_check",
    "normalize_country",
    "normalize_name",
    "provenance_domains",
    "record_to_dict",
    "record_to_row",
    "resolve",
    "validate_record",
]
