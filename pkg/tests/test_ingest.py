import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drugatlas.errors import (
    DuplicateCell,
    MalformedRow,
    NegativeQuantity,
    UnknownCountry,
    UnknownDrug,
    YearOutOfBounds,
)
from drugatlas.ingest import (
    CountryRef,
    CsvSchema,
    DrugKind,
    Series,
    build_series,
    key_id,
    normalize_country,
    parse_consumption_csv,
    write_consumption_csv,
)

from conftest import DNK, HKG, MORPHINE, OXYCODONE, ZMB, make_series


def parse(text, countries, drugs, **kwargs):
    return parse_consumption_csv(io.StringIO(text), CsvSchema(), countries, drugs, **kwargs)


class TestParse:
    def test_single_row(self, country_registry, drug_registry):
        records = parse(
            "country,drug,year,quantity\nHong Kong,oxycodone,2010,12.5\n",
            country_registry,
            drug_registry,
        )
        assert len(records) == 1
        rec = records[0]
        assert rec.country.iso3 == "HKG"
        assert rec.drug.canonical_name == "oxycodone"
        assert rec.year == 2010
        assert rec.quantity_kg == 12.5

    def test_header_only(self, country_registry, drug_registry):
        assert parse("country,drug,year,quantity\n", country_registry, drug_registry) == []

    def test_negative_quantity_names_row(self, country_registry, drug_registry):
        text = "country,drug,year,quantity\nDenmark,morphine,2000,1.0\nDenmark,morphine,2001,-1\n"
        with pytest.raises(NegativeQuantity) as exc:
            parse(text, country_registry, drug_registry)
        assert exc.value.row == 2

    def test_wrong_column_count(self, country_registry, drug_registry):
        with pytest.raises(MalformedRow) as exc:
            parse("country,drug,year,quantity\nDenmark,morphine,2000\n", country_registry, drug_registry)
        assert exc.value.row == 1

    def test_unparsable_quantity(self, country_registry, drug_registry):
        with pytest.raises(MalformedRow):
            parse("country,drug,year,quantity\nDenmark,morphine,2000,lots\n", country_registry, drug_registry)

    def test_non_finite_quantity(self, country_registry, drug_registry):
        with pytest.raises(MalformedRow):
            parse("country,drug,year,quantity\nDenmark,morphine,2000,inf\n", country_registry, drug_registry)

    def test_year_out_of_bounds(self, country_registry, drug_registry):
        with pytest.raises(YearOutOfBounds):
            parse("country,drug,year,quantity\nDenmark,morphine,1970,1.0\n", country_registry, drug_registry)

    def test_unknown_drug(self, country_registry, drug_registry):
        with pytest.raises(UnknownDrug):
            parse("country,drug,year,quantity\nDenmark,unobtainium,2000,1.0\n", country_registry, drug_registry)

    def test_unknown_country_strict(self, country_registry, drug_registry):
        with pytest.raises(UnknownCountry):
            parse("country,drug,year,quantity\nAtlantis,morphine,2000,1.0\n", country_registry, drug_registry)

    def test_unknown_country_report_mode(self, country_registry, drug_registry):
        collected = []
        records = parse(
            "country,drug,year,quantity\nAtlantis,morphine,2000,1.0\nDenmark,morphine,2000,1.0\n",
            country_registry,
            drug_registry,
            unknown_countries=collected,
        )
        assert collected == ["Atlantis"]
        assert [r.country.iso3 for r in records] == ["DNK"]

    def test_custom_column_names(self, country_registry, drug_registry):
        schema = CsvSchema(country="nation", drug="substance", year="yr", quantity="kg")
        text = "yr,kg,nation,substance\n2001,3.5,Zambia,morphine\n"
        records = parse_consumption_csv(io.StringIO(text), schema, country_registry, drug_registry)
        assert records[0].country.iso3 == "ZMB"
        assert records[0].quantity_kg == 3.5

    def test_quoted_country_with_comma(self, country_registry, drug_registry):
        records = parse(
            'country,drug,year,quantity\n"China, Hong Kong SAR",morphine,2000,1.0\n',
            country_registry,
            drug_registry,
        )
        assert records[0].country.iso3 == "HKG"

    def test_bytes_stream(self, country_registry, drug_registry):
        raw = io.BytesIO("country,drug,year,quantity\nDenmark,morphine,2000,1.0\n".encode())
        records = parse_consumption_csv(raw, CsvSchema(), country_registry, drug_registry)
        assert len(records) == 1

    def test_missing_header_column(self, country_registry, drug_registry):
        with pytest.raises(MalformedRow) as exc:
            parse("country,drug,year\n", country_registry, drug_registry)
        assert exc.value.row == 0


class TestNormalizeCountry:
    def test_alias(self, country_registry):
        assert normalize_country("Hong Kong SAR of China", country_registry).iso3 == "HKG"

    def test_case_and_whitespace_folding(self, country_registry):
        assert normalize_country("DENMARK ", country_registry).iso3 == "DNK"

    def test_unknown(self, country_registry):
        with pytest.raises(UnknownCountry) as exc:
            normalize_country("Atlantis", country_registry)
        assert exc.value.raw_name == "Atlantis"

    def test_idempotent_on_display_names(self, country_registry):
        for country in country_registry:
            assert normalize_country(country.display_name, country_registry) == country


class TestBuildSeries:
    def test_gap_preserved(self):
        records = parse_records([(HKG, OXYCODONE, 2009, 1.0), (HKG, OXYCODONE, 2011, 3.0)])
        series = build_series(records, "error", (2009, 2011))[(HKG, OXYCODONE)]
        assert series.values == {2009: 1.0, 2011: 3.0}
        assert 2010 not in series.values
        assert series.span == (2009, 2011)

    def test_duplicates_sum(self):
        records = parse_records([(DNK, MORPHINE, 2000, 1.0), (DNK, MORPHINE, 2000, 2.0)])
        series = build_series(records, "sum", (2000, 2000))[(DNK, MORPHINE)]
        assert series.values == {2000: 3.0}

    def test_duplicates_error(self):
        records = parse_records([(DNK, MORPHINE, 2000, 1.0), (DNK, MORPHINE, 2000, 2.0)])
        with pytest.raises(DuplicateCell) as exc:
            build_series(records, "error", (2000, 2000))
        assert (exc.value.iso3, exc.value.drug, exc.value.year) == ("DNK", "morphine", 2000)

    def test_never_invents_values(self):
        triples = [(HKG, MORPHINE, 1999, 2.0), (ZMB, MORPHINE, 2001, 0.0), (HKG, OXYCODONE, 1999, 5.5)]
        series_map = build_series(parse_records(triples), "error")
        cells = {
            (key, year, value)
            for key, s in series_map.items()
            for year, value in s.values.items()
        }
        assert cells == {((c, d), y, q) for c, d, y, q in triples}

    def test_bad_policy(self):
        with pytest.raises(ValueError):
            build_series([], "mean")


def parse_records(triples):
    from drugatlas.ingest import ConsumptionRecord

    return [ConsumptionRecord(c, d, y, q) for c, d, y, q in triples]


# Round-trip: write a series map as long-format rows and re-parse it.

_POOL_COUNTRIES = [HKG, DNK, ZMB]
_POOL_DRUGS = [MORPHINE, OXYCODONE]


@st.composite
def series_maps(draw):
    keys = draw(
        st.lists(
            st.tuples(st.sampled_from(_POOL_COUNTRIES), st.sampled_from(_POOL_DRUGS)),
            min_size=1,
            max_size=4,
            unique=True,
        )
    )
    out = {}
    for key in keys:
        years = draw(st.lists(st.integers(1989, 2013), min_size=1, max_size=8, unique=True))
        values = {
            y: draw(st.floats(min_value=0.0, max_value=1e6, allow_nan=False, allow_infinity=False))
            for y in years
        }
        out[key] = Series(key=key, span=(1989, 2013), values=values)
    return out


@given(series_maps())
@settings(max_examples=60, deadline=None)
def test_roundtrip_series_csv(country_registry, drug_registry, series_map):
    text = write_consumption_csv(series_map)
    records = parse_consumption_csv(io.StringIO(text), CsvSchema(), country_registry, drug_registry)
    rebuilt = build_series(records, "error", (1989, 2013))
    assert rebuilt == series_map


def test_series_requires_presence():
    with pytest.raises(ValueError):
        Series(key=(DNK, MORPHINE), span=(2000, 2001), values={})


def test_series_rejects_out_of_span_years():
    with pytest.raises(ValueError):
        make_series({1999: 1.0}, span=(2000, 2001))


def test_country_ref_validation():
    with pytest.raises(ValueError):
        CountryRef("dk", "Denmark", "Europe")
    with pytest.raises(ValueError):
        CountryRef("DNK", "Denmark", "Atlantis")


def test_drug_kind_validation():
    with pytest.raises(ValueError):
        DrugKind("Morphine")
    with pytest.raises(ValueError):
        DrugKind("mor phine")


def test_key_id_ordering():
    assert key_id((DNK, MORPHINE)) == "DNK:morphine"
    assert key_id((DNK, MORPHINE)) < key_id((HKG, MORPHINE))
