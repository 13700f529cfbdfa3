"""Shared fixtures: curated records, graphs, and the bundled defaults."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

import pytest

from ekgmine.builder import build_graph
from ekgmine.curation import clean, load_csv, select_features
from ekgmine.mapping import MappingSchema
from ekgmine.taxonomy import default_taxonomy

from helpers import synthetic_records

# Where the published dataset is looked for; tests needing it skip when absent.
REAL_CSV_ENV = "XAPI_EDU_CSV"
REAL_CSV_DEFAULT = Path(__file__).resolve().parent.parent / "data" / "xAPI-Edu-Data.csv"


def real_csv_path():
    path = Path(os.environ.get(REAL_CSV_ENV, REAL_CSV_DEFAULT))
    return path if path.exists() else None


def require_real_csv():
    path = real_csv_path()
    if path is None:
        pytest.skip(
            "published xAPI-Edu-Data.csv not present; place it at "
            f"{REAL_CSV_DEFAULT} or set ${REAL_CSV_ENV}"
        )
    return path


@pytest.fixture(scope="session")
def schema():
    return MappingSchema.default()


@pytest.fixture(scope="session")
def taxonomy():
    return default_taxonomy()


@pytest.fixture(scope="session")
def student1_records():
    path = resources.files("ekgmine").joinpath("defaults/student1.csv")
    cleaned, _ = clean(load_csv(str(path)))
    return select_features(cleaned)


@pytest.fixture(scope="session")
def records480():
    return synthetic_records(seed=11, n=480)


@pytest.fixture(scope="session")
def graph480(records480, schema):
    return build_graph(records480, schema)
