"""Name and country normalization, region mapping, and key-based deduplication.

Normalization fixes a deterministic recipe: canonical Unicode form, case fold,
punctuation runs collapsed to spaces, whitespace collapsed. Deduplication merges
records sharing a normalized name key, keeps the best-evidenced record, and
preserves every URL of the absorbed records as alternate links.
"""

from __future__ import annotations

import dataclasses
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import EmptyAfterNormalization, UnknownCountryWarning, UnmappedCountry

if TYPE_CHECKING:
    from .records import ProjectRecord, Region

# Punctuation that collapses to a single space: hyphen/dash family, colon,
# comma, period, straight and curly quotes.
_PUNCT_RUN = re.compile(r"[-‐‑‒–—―:,.'\"‘’‚‛“”„]+")
_WS_RUN = re.compile(r"\s+")

GLOBAL_LABEL = "Global"
MULTI_COUNTRY_LABEL = "Multi-country"


def _fold(raw: str) -> str:
    """NFKC-normalize and case-fold until stable (guarantees idempotence)."""
    import unicodedata

    current = raw
    for _ in range(4):
        folded = unicodedata.normalize("NFKC", current).casefold()
        if folded == current:
            return current
        current = folded
    return current


def normalize_name(raw: str) -> str:
    """Produce the deduplication key for a display name.

    Case-folded, Unicode-canonicalized, punctuation runs and whitespace
    collapsed to single spaces, stripped.

    Raises:
        EmptyAfterNormalization: if the input contains no letter or digit.
    """
    cleaned = _PUNCT_RUN.sub(" ", _fold(raw))
    cleaned = _WS_RUN.sub(" ", cleaned).strip()
    if not any(ch.isalnum() for ch in cleaned):
        raise EmptyAfterNormalization(f"no letters or digits in {raw!r}")
    return cleaned


class CountryAliasTable:
    """Alias string -> canonical country label, keyed on normalized aliases.

    Canonical labels are always fixed points of the table; no alias may map to
    two different canonicals.
    """

    def __init__(self, aliases: Mapping[str, str], canonicals: Iterable[str] = ()):
        self._map: dict[str, str] = {}
        for canonical in canonicals:
            self._add(canonical, canonical)
        for alias, canonical in aliases.items():
            self._add(canonical, canonical)
            self._add(alias, canonical)

    def _add(self, alias: str, canonical: str) -> None:
        key = normalize_name(alias)
        existing = self._map.get(key)
        if existing is not None and existing != canonical:
            raise ValueError(
                f"alias {alias!r} maps to both {existing!r} and {canonical!r}"
            )
        self._map[key] = canonical

    @classmethod
    def from_tsv(cls, path: str | Path, canonicals: Iterable[str] = ()) -> CountryAliasTable:
        return cls(_read_two_column_tsv(path), canonicals=canonicals)

    def lookup(self, normalized_key: str) -> str | None:
        return self._map.get(normalized_key)

    def canonicals(self) -> set[str]:
        return set(self._map.values())

    def __len__(self) -> int:
        return len(self._map)


class RegionTable:
    """Canonical country label -> Region."""

    def __init__(self, mapping: Mapping[str, "Region"]):
        self._map = dict(mapping)

    @classmethod
    def from_tsv(cls, path: str | Path) -> RegionTable:
        from .records import Region

        mapping = {
            country: Region(region) for country, region in _read_two_column_tsv(path).items()
        }
        return cls(mapping)

    def lookup(self, country: str) -> "Region | None":
        return self._map.get(country)

    def countries(self) -> set[str]:
        return set(self._map)

    def __len__(self) -> int:
        return len(self._map)


def _read_two_column_tsv(path: str | Path) -> dict[str, str]:
    rows: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ValueError(f"{path}:{lineno}: expected two tab-separated columns")
        rows[parts[0].strip()] = parts[1].strip()
    return rows


def load_country_tables(
    aliases_path: str | Path, regions_path: str | Path
) -> tuple[CountryAliasTable, RegionTable]:
    """Load both tables and check the region table is total over the canonicals."""
    regions = RegionTable.from_tsv(regions_path)
    aliases = CountryAliasTable.from_tsv(aliases_path, canonicals=regions.countries())
    missing = sorted(aliases.canonicals() - regions.countries())
    if missing:
        raise ValueError(f"region table is missing canonical countries: {missing}")
    return aliases, regions


def normalize_country(raw: str, table: CountryAliasTable) -> str:
    """Resolve a country label to its canonical form.

    Unknown labels are returned verbatim (stripped) with an
    UnknownCountryWarning; there is no fatal path.
    """
    try:
        key = normalize_name(raw)
    except EmptyAfterNormalization:
        warnings.warn(f"unknown country label {raw!r}", UnknownCountryWarning, stacklevel=2)
        return raw.strip()
    canonical = table.lookup(key)
    if canonical is None:
        warnings.warn(f"unknown country label {raw!r}", UnknownCountryWarning, stacklevel=2)
        return raw.strip()
    return canonical


def map_region(country: str, table: RegionTable) -> "Region":
    """Map a canonical country label to its region.

    Raises:
        UnmappedCountry: for labels absent from the table.
    """
    region = table.lookup(country)
    if region is None:
        raise UnmappedCountry(f"no region mapping for {country!r}")
    return region


@dataclass(frozen=True)
class MergeEntry:
    """One collapse of duplicate records onto a surviving canonical record."""

    dedup_key: str
    survivor_id: str
    absorbed_ids: tuple[str, ...]


_GRADE_RANK = {"A": 0, "B": 1, "C": 2}


def _survivor_key(record: "ProjectRecord") -> tuple[int, int, str]:
    start = record.start_year if record.start_year is not None else 10**6
    return (_GRADE_RANK[record.evidence_grade.value], start, record.id)


def _record_urls(record: "ProjectRecord") -> list[str]:
    urls = [record.provenance_url, record.official_url]
    if record.source_url_2:
        urls.append(record.source_url_2)
    if record.source_url_3:
        urls.append(record.source_url_3)
    urls.extend(record.alternate_links)
    return urls


def dedupe(records: list["ProjectRecord"]) -> tuple[list["ProjectRecord"], list[MergeEntry]]:
    """Merge records sharing a dedup key into one canonical record each.

    The survivor is the record with the best evidence grade (A > B > C),
    tie-broken by earlier start year, then lexicographic id. Every URL held by
    an absorbed record is appended to the survivor's alternate links, so no
    URL is ever discarded. Output is sorted by id; the merge report lists one
    entry per collapsed key.
    """
    by_key: dict[str, list["ProjectRecord"]] = {}
    for record in records:
        by_key.setdefault(record.dedup_key, []).append(record)

    canonical: list["ProjectRecord"] = []
    report: list[MergeEntry] = []
    for key in sorted(by_key):
        group = sorted(by_key[key], key=_survivor_key)
        survivor, absorbed = group[0], group[1:]
        if absorbed:
            extra_links: list[str] = []
            for loser in absorbed:
                extra_links.extend(_record_urls(loser))
            survivor = dataclasses.replace(
                survivor,
                alternate_links=tuple(list(survivor.alternate_links) + extra_links),
            )
            report.append(
                MergeEntry(
                    dedup_key=key,
                    survivor_id=survivor.id,
                    absorbed_ids=tuple(loser.id for loser in absorbed),
                )
            )
        canonical.append(survivor)

    canonical.sort(key=lambda r: r.id)
    return canonical, report
