from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from civicatlas.geocode import Gazetteer
from civicatlas.harmonize import load_country_tables
from civicatlas.registry import DATA_DIR, AtlasRegistry

from fixtures import build_corpus_records


@pytest.fixture(scope="session")
def tables():
    return load_country_tables(
        DATA_DIR / "country_aliases.tsv", DATA_DIR / "country_regions.tsv"
    )


@pytest.fixture(scope="session")
def alias_table(tables):
    return tables[0]


@pytest.fixture(scope="session")
def region_table(tables):
    return tables[1]


@pytest.fixture(scope="session")
def gazetteer():
    return Gazetteer.from_tsv(DATA_DIR / "gazetteer.tsv")


@pytest.fixture(scope="session")
def corpus_records(gazetteer):
    return build_corpus_records(gazetteer)


@pytest.fixture
def registry(tmp_path) -> AtlasRegistry:
    data_dir = tmp_path / "atlas-data"
    data_dir.mkdir()
    return AtlasRegistry(data_dir=data_dir)
