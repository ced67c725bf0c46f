from pathlib import Path

import pytest

from drugatlas import defaults
from drugatlas.ingest import CountryRef, DrugKind, Series

DATA_DIR = Path(__file__).parent / "data"
FIXTURE_CSV = DATA_DIR / "fixture_consumption.csv"
GOLDEN_BUNDLE = DATA_DIR / "golden_bundle.json"

HKG = CountryRef("HKG", "Hong Kong", "Asia")
DNK = CountryRef("DNK", "Denmark", "Europe")
ZMB = CountryRef("ZMB", "Zambia", "Africa")
MORPHINE = DrugKind("morphine")
OXYCODONE = DrugKind("oxycodone")

KEY = (DNK, MORPHINE)


def make_series(values: dict[int, float], span: tuple[int, int] | None = None, key=KEY) -> Series:
    if span is None:
        span = (min(values), max(values))
    return Series(key=key, span=span, values=dict(values))


@pytest.fixture(scope="session")
def country_registry():
    return defaults.default_country_registry()


@pytest.fixture(scope="session")
def drug_registry():
    return defaults.default_drug_registry()


@pytest.fixture(scope="session")
def conversion_table():
    return defaults.default_conversion_table()
