"""Deterministic offline geocoding against a file-backed gazetteer.

Resolution never fabricates coordinates: every returned point exists verbatim
in the gazetteer. Locality lookups are exact on the normalized (country, city)
pair; misses downgrade to the country reference point with a warning. Global,
multi-country, and unknown countries stay ungeocoded. A suppress flag forces
country precision for sensitive records.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path

from .errors import UnknownLocalityWarning, UnknownCountryWarning
from .harmonize import GLOBAL_LABEL, MULTI_COUNTRY_LABEL, normalize_name
from .records import LocationAnchor, Precision, ProjectRecord

UNGEOCODED_LABELS = {GLOBAL_LABEL, MULTI_COUNTRY_LABEL}


@dataclass(frozen=True)
class GazetteerEntry:
    country: str
    locality: str | None
    latitude: float
    longitude: float
    note: str = ""


class Gazetteer:
    """Country reference points plus (country, locality) points.

    TSV columns: type(country|locality), country, locality, lat, lon, note.
    The note documents which reference point a row uses (capital, centroid...).
    """

    def __init__(self, entries: list[GazetteerEntry]):
        self._countries: dict[str, GazetteerEntry] = {}
        self._localities: dict[tuple[str, str], GazetteerEntry] = {}
        for entry in entries:
            if not -90.0 <= entry.latitude <= 90.0 or not -180.0 <= entry.longitude <= 180.0:
                raise ValueError(f"coordinates out of range for {entry!r}")
            country_key = normalize_name(entry.country)
            if entry.locality is None:
                self._countries[country_key] = entry
            else:
                self._localities[(country_key, normalize_name(entry.locality))] = entry
        for country_key, locality_key in self._localities:
            if country_key not in self._countries:
                raise ValueError(
                    f"locality entry {locality_key!r} references unknown country key {country_key!r}"
                )

    @classmethod
    def from_tsv(cls, path: str | Path) -> "Gazetteer":
        entries: list[GazetteerEntry] = []
        for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            parts = stripped.split("\t")
            if len(parts) not in (5, 6):
                raise ValueError(f"{path}:{lineno}: expected 5 or 6 tab-separated columns")
            kind, country, locality, lat, lon = (p.strip() for p in parts[:5])
            note = parts[5].strip() if len(parts) == 6 else ""
            if kind == "country":
                locality_value = None
            elif kind == "locality":
                if not locality:
                    raise ValueError(f"{path}:{lineno}: locality row without a locality name")
                locality_value = locality
            else:
                raise ValueError(f"{path}:{lineno}: unknown row type {kind!r}")
            entries.append(
                GazetteerEntry(
                    country=country,
                    locality=locality_value,
                    latitude=float(lat),
                    longitude=float(lon),
                    note=note,
                )
            )
        return cls(entries)

    def country_entry(self, country: str) -> GazetteerEntry | None:
        return self._countries.get(normalize_name(country))

    def locality_entry(self, country: str, locality: str) -> GazetteerEntry | None:
        return self._localities.get((normalize_name(country), normalize_name(locality)))

    def __len__(self) -> int:
        return len(self._countries) + len(self._localities)


def resolve(
    city: str | None,
    country: str,
    gazetteer: Gazetteer,
    suppress_locality: bool = False,
) -> LocationAnchor:
    """Resolve (city, country) to an anchor with an explicit precision tier.

    Locality hit -> locality anchor; absent or unknown city -> country
    reference point; Global/Multi-country or unknown country -> ungeocoded.
    suppress_locality forces country precision even when the locality matches.
    """
    if not country or country in UNGEOCODED_LABELS:
        return LocationAnchor.UNGEOCODED

    country_hit = gazetteer.country_entry(country)
    if country_hit is None:
        warnings.warn(
            f"country {country!r} not in gazetteer; record left ungeocoded",
            UnknownCountryWarning,
            stacklevel=2,
        )
        return LocationAnchor.UNGEOCODED

    if city and not suppress_locality:
        locality_hit = gazetteer.locality_entry(country, city)
        if locality_hit is not None:
            return LocationAnchor(
                latitude=locality_hit.latitude,
                longitude=locality_hit.longitude,
                precision=Precision.LOCALITY,
            )
        warnings.warn(
            f"locality {city!r} in {country!r} not in gazetteer; downgraded to country precision",
            UnknownLocalityWarning,
            stacklevel=2,
        )

    return LocationAnchor(
        latitude=country_hit.latitude,
        longitude=country_hit.longitude,
        precision=Precision.COUNTRY,
    )


def resolve_record(record: ProjectRecord, gazetteer: Gazetteer) -> ProjectRecord:
    """Return the record with its anchor resolved from the gazetteer."""
    import dataclasses

    anchor = resolve(
        record.city or None,
        record.country,
        gazetteer,
        suppress_locality=record.suppress_locality,
    )
    if anchor == record.anchor:
        return record
    return dataclasses.replace(record, anchor=anchor)


def geocoded_count(records: list[ProjectRecord]) -> int:
    """Number of records whose anchor precision is not 'none'."""
    return sum(1 for record in records if record.anchor.is_geocoded())
