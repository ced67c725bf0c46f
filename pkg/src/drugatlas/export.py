"""Deterministic atlas bundle: assembly, canonical JSON, schema validation, serving.

The bundle is one UTF-8 JSON document with lexicographically sorted keys,
shortest-round-trip float rendering, compact separators and a trailing
newline, so identical pipeline inputs always produce byte-identical files.
Missing series values are encoded as null, never 0: densified zeros are
internal to the numeric stages and must not leak into the artifact.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer
from importlib import resources
from typing import Mapping, Union

import jsonschema

from .cognostics import CognosticVector
from .embedding import Embedding
from .errors import DanglingKey, IoFailure
from .ingest import CountryRegistry, DrugRegistry, Series, SeriesKey, key_id
from .trends import TrendGrid, TrendParams

SCHEMA_VERSION = 1

# A layout slot holds either a computed Embedding or the reason no layout
# exists (for example fewer than 3 series for that slice).
LayoutInput = Union[Embedding, str]


def bundle_schema() -> dict:
    """The published bundle schema shipped with the package."""
    text = resources.files("drugatlas").joinpath("schemas", "bundle.schema.json").read_text("utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class AtlasBundle:
    """Validated, JSON-ready bundle tree. Equality is structural."""

    data: dict

    @property
    def schema_version(self) -> int:
        return self.data["schema_version"]

    @property
    def years(self) -> tuple[int, int]:
        return (self.data["years"]["first"], self.data["years"]["last"])

    @property
    def series(self) -> dict:
        return self.data["series"]

    @property
    def cognostics(self) -> dict:
        return self.data["cognostics"]

    @property
    def embedding(self) -> dict:
        return self.data["embedding"]

    @property
    def trends(self) -> dict:
        return self.data["trends"]

    @property
    def countries(self) -> list:
        return self.data["countries"]

    @property
    def drugs(self) -> list:
        return self.data["drugs"]


def _num(x) -> float:
    # float() strips numpy scalars; adding 0.0 folds -0.0 into 0.0 so the
    # canonical text never depends on the sign of a zero.
    return float(x) + 0.0


def _opt_num(x):
    return None if x is None else _num(x)


def _series_cells(series: Series, years: tuple[int, int]) -> list:
    first, last = years
    return [
        _num(series.values[y]) if y in series.values else None
        for y in range(first, last + 1)
    ]


def _layout_obj(layout: LayoutInput) -> dict:
    if isinstance(layout, str):
        return {"status": "empty", "reason": layout}
    return {
        "status": "ok",
        "keys": [key_id(k) for k in layout.keys],
        "coords": [[_num(x), _num(y)] for x, y in layout.coords],
        "stress": _num(layout.stress),
        "iterations": int(layout.iterations),
    }


def build_bundle(
    series_map: Mapping[SeriesKey, Series],
    cognostic_map: Mapping[SeriesKey, CognosticVector],
    joint_embedding: LayoutInput,
    per_drug_embeddings: Mapping[str, LayoutInput],
    trend_map: Mapping[SeriesKey, TrendGrid],
    trend_params: TrendParams,
    countries: CountryRegistry,
    drugs: DrugRegistry,
    years: tuple[int, int],
) -> AtlasBundle:
    """Assemble and cross-check all computed artifacts into one bundle.

    Every key referenced by cognostics, trends or a layout must resolve to a
    series (DanglingKey otherwise). Series values come in morphine-equivalent
    kilograms with missing years as None.
    """
    series_obj = {
        key_id(key): _series_cells(s, years)
        for key, s in series_map.items()
    }

    cognostics_obj = {}
    for key, vec in cognostic_map.items():
        kid = key_id(key)
        if kid not in series_obj:
            raise DanglingKey(kid, "cognostics")
        cognostics_obj[kid] = {
            "net_change": _num(vec.net_change),
            "max_annual_increase": _opt_num(vec.max_annual_increase),
            "max_annual_decrease": _opt_num(vec.max_annual_decrease),
            "mean_level": _num(vec.mean_level),
            "latest_value": _num(vec.latest_value),
        }

    grids_obj = {}
    for key, grid in trend_map.items():
        kid = key_id(key)
        if kid not in series_obj:
            raise DanglingKey(kid, "trends")
        grids_obj[kid] = {
            "level": [_num(x) for x in grid.level],
            "slope": [_num(x) for x in grid.slope],
        }

    embedding_obj = {
        "joint": _layout_obj(joint_embedding),
        "per_drug": {drug: _layout_obj(layout) for drug, layout in per_drug_embeddings.items()},
    }
    for section, layout in [("embedding.joint", embedding_obj["joint"])] + [
        (f"embedding.per_drug.{d}", obj) for d, obj in embedding_obj["per_drug"].items()
    ]:
        if layout["status"] == "ok":
            for kid in layout["keys"]:
                if kid not in series_obj:
                    raise DanglingKey(kid, section)

    data = {
        "schema_version": SCHEMA_VERSION,
        "years": {"first": years[0], "last": years[1]},
        "countries": [
            {"iso3": c.iso3, "display_name": c.display_name, "region": c.region}
            for c in countries
        ],
        "drugs": [d.canonical_name for d in drugs],
        "series": series_obj,
        "cognostics": cognostics_obj,
        "embedding": embedding_obj,
        "trends": {
            "params": {
                "bandwidth_years": _num(trend_params.bandwidth_years),
                "ridge_lambda": _num(trend_params.ridge_lambda),
                "kernel": trend_params.kernel,
            },
            "grids": grids_obj,
        },
    }
    validate_bundle_obj(data)
    return AtlasBundle(data)


def validate_bundle_obj(obj: dict) -> None:
    """Schema-validate a bundle tree and enforce cross-reference closure."""
    jsonschema.validate(obj, bundle_schema())
    first, last = obj["years"]["first"], obj["years"]["last"]
    if first > last:
        raise ValueError(f"year span {first}..{last} is reversed")
    span = last - first + 1
    iso3s = {c["iso3"] for c in obj["countries"]}
    drugs = set(obj["drugs"])
    series = obj["series"]
    for kid, cells in series.items():
        if len(cells) != span:
            raise ValueError(f"series {kid} has {len(cells)} cells, expected {span}")
        iso3, _, drug = kid.partition(":")
        if iso3 not in iso3s:
            raise DanglingKey(kid, "series (unregistered country)")
        if drug not in drugs:
            raise DanglingKey(kid, "series (unregistered drug)")
    for kid in obj["cognostics"]:
        if kid not in series:
            raise DanglingKey(kid, "cognostics")
    for kid, grid in obj["trends"]["grids"].items():
        if kid not in series:
            raise DanglingKey(kid, "trends")
        if len(grid["level"]) != span or len(grid["slope"]) != span:
            raise ValueError(f"trend grid {kid} does not cover the year span")
    layouts = [("embedding.joint", obj["embedding"]["joint"])] + [
        (f"embedding.per_drug.{d}", lay) for d, lay in obj["embedding"]["per_drug"].items()
    ]
    for section, layout in layouts:
        if layout["status"] != "ok":
            continue
        if len(layout["keys"]) != len(layout["coords"]):
            raise ValueError(f"{section}: keys and coords lengths differ")
        for kid in layout["keys"]:
            if kid not in series:
                raise DanglingKey(kid, section)


def canonical_dumps(obj) -> str:
    """Canonical JSON text: sorted keys, compact, shortest-round-trip floats, newline-terminated."""
    return (
        json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False, allow_nan=False)
        + "\n"
    )


def write_bundle(bundle: AtlasBundle, path) -> None:
    """Write the canonical bundle document; byte-identical for identical bundles."""
    text = canonical_dumps(bundle.data)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write bundle to {path}: {exc}") from exc


def read_bundle(path) -> AtlasBundle:
    """Read and validate a bundle document."""
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read bundle from {path}: {exc}") from exc
    validate_bundle_obj(obj)
    return AtlasBundle(obj)


class _StaticHandler(SimpleHTTPRequestHandler):
    # Open CORS so a UI served from another local port can fetch the bundle.
    def end_headers(self):
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Cache-Control", "no-store")
        super().end_headers()

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass


def make_server(directory, host: str = "127.0.0.1", port: int = 8000) -> ThreadingHTTPServer:
    """Static HTTP server over the bundle directory (no API routes)."""
    handler = functools.partial(_StaticHandler, directory=str(directory))
    return ThreadingHTTPServer((host, port), handler)
