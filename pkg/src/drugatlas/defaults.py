"""Accessors for the editable configuration tables shipped with the package.

Every table here is a starting point, not ground truth: country naming drifts
across report years and equivalence factors should be checked against a
clinical source before analytical use. Point the pipeline config at your own
files to override any of them.
"""

from __future__ import annotations

from importlib import resources

from .ingest import CountryRegistry, DrugRegistry, load_country_registry, load_drug_registry
from .transform import ConversionTable, load_conversion_table


def _data_path(name: str):
    return resources.files("drugatlas").joinpath("data", name)


def default_country_registry_path():
    return _data_path("countries.csv")


def default_alias_table_path():
    return _data_path("country_aliases.csv")


def default_drug_registry_path():
    return _data_path("drugs.txt")


def default_conversion_table_path():
    return _data_path("conversion_factors.csv")


def default_country_registry() -> CountryRegistry:
    return load_country_registry(default_country_registry_path(), default_alias_table_path())


def default_drug_registry() -> DrugRegistry:
    return load_drug_registry(default_drug_registry_path())


def default_conversion_table() -> ConversionTable:
    return load_conversion_table(default_conversion_table_path())
