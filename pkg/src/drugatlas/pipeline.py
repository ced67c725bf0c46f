"""Stage orchestration and the on-disk artifacts that let stages rerun alone.

Each stage reads and writes canonical JSON artifacts in the output directory:

    series_raw.json   ingest    raw-kilogram series
    series_me.json    compute   morphine-equivalent series
    cognostics.json   compute   per-series summaries
    embedding.json    compute   joint and per-drug layouts
    trends.json       compute   per-series (level, slope) grids
    bundle.json       export    the full atlas bundle

Worker-thread count affects wall time only: every parallel map preserves
input order and every series computation is pure, so outputs are
byte-identical at any thread count.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

from . import cognostics as cog
from . import defaults, embedding, transform, trends
from .config import PipelineConfig
from .errors import IoFailure
from .export import AtlasBundle, build_bundle, canonical_dumps, write_bundle
from .ingest import (
    CountryRegistry,
    CsvSchema,
    DrugRegistry,
    Series,
    SeriesKey,
    build_series,
    key_id,
    load_alias_table,
    load_country_registry,
    load_drug_registry,
    parse_consumption_csv,
)
from .transform import ConversionTable, load_conversion_table

log = logging.getLogger("drugatlas")

T = TypeVar("T")
R = TypeVar("R")

ARTIFACTS = {
    "series_raw": "series_raw.json",
    "series_me": "series_me.json",
    "cognostics": "cognostics.json",
    "embedding": "embedding.json",
    "trends": "trends.json",
    "bundle": "bundle.json",
}

MIN_EMBED_SERIES = 3


def map_ordered(fn: Callable[[T], R], items: Sequence[T], threads: int) -> list[R]:
    """Apply fn to items, optionally on a thread pool, preserving input order."""
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


class Registries:
    """Resolved lookup tables for one pipeline run."""

    def __init__(self, countries: CountryRegistry, drugs: DrugRegistry, conversion: ConversionTable):
        self.countries = countries
        self.drugs = drugs
        self.conversion = conversion


def load_registries(cfg: PipelineConfig) -> Registries:
    if cfg.country_registry is not None:
        countries = load_country_registry(
            cfg.country_registry,
            cfg.alias_table,
        )
    else:
        base = load_country_registry(
            defaults.default_country_registry_path(),
            defaults.default_alias_table_path(),
        )
        if cfg.alias_table is not None:
            extra = load_alias_table(cfg.alias_table)
            countries = CountryRegistry(list(base), extra)
        else:
            countries = base
    drugs = (
        load_drug_registry(cfg.drug_registry)
        if cfg.drug_registry is not None
        else defaults.default_drug_registry()
    )
    conversion = (
        load_conversion_table(cfg.conversion_table)
        if cfg.conversion_table is not None
        else defaults.default_conversion_table()
    )
    return Registries(countries, drugs, conversion)


# --- artifact (de)serialization ----------------------------------------------

def _series_obj(series_map: Mapping[SeriesKey, Series], years: tuple[int, int]) -> dict:
    first, last = years
    return {
        key_id(key): [
            (s.values[y] if y in s.values else None) for y in range(first, last + 1)
        ]
        for key, s in sorted(series_map.items(), key=lambda kv: key_id(kv[0]))
    }


def _series_from_obj(obj: dict, regs: Registries, years: tuple[int, int]) -> dict[SeriesKey, Series]:
    first, _last = years
    out: dict[SeriesKey, Series] = {}
    for kid, cells in obj.items():
        iso3, _, drug = kid.partition(":")
        key = (regs.countries.by_iso3(iso3), regs.drugs.resolve(drug))
        values = {first + i: v for i, v in enumerate(cells) if v is not None}
        out[key] = Series(key=key, span=years, values=values)
    return out


def _write_artifact(out_dir: Path, name: str, obj) -> Path:
    path = out_dir / ARTIFACTS[name]
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path.write_text(canonical_dumps(obj), encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return path


def _read_artifact(out_dir: Path, name: str):
    path = out_dir / ARTIFACTS[name]
    try:
        return json.loads(path.read_text("utf-8"))
    except OSError as exc:
        raise IoFailure(
            f"cannot read {path}: {exc}; run the producing stage first"
        ) from exc


# --- stages -------------------------------------------------------------------

def stage_ingest(cfg: PipelineConfig, regs: Registries) -> dict[SeriesKey, Series]:
    """Parse the input CSV and assemble raw-kilogram series; writes series_raw.json."""
    t0 = time.perf_counter()
    schema = CsvSchema(
        country=cfg.country_column,
        drug=cfg.drug_column,
        year=cfg.year_column,
        quantity=cfg.quantity_column,
    )
    unknown: list[str] | None = [] if cfg.unknown_country_policy == "skip" else None
    with open(cfg.input_csv, encoding="utf-8", newline="") as fh:
        records = parse_consumption_csv(
            fh, schema, regs.countries, regs.drugs, cfg.year_bounds, unknown
        )
    if unknown:
        for name in sorted(set(unknown)):
            log.info("[ingest] unknown country %r skipped (%d rows)", name, unknown.count(name))
    series_map = build_series(records, cfg.duplicate_policy, cfg.year_bounds)
    _write_artifact(
        Path(cfg.output_dir),
        "series_raw",
        {"years": {"first": cfg.year_min, "last": cfg.year_max}, "series": _series_obj(series_map, cfg.year_bounds)},
    )
    log.info(
        "[ingest] %d records -> %d series in %.3fs",
        len(records),
        len(series_map),
        time.perf_counter() - t0,
    )
    return series_map


def _load_series_artifact(
    cfg: PipelineConfig, regs: Registries, name: str
) -> tuple[dict[SeriesKey, Series], tuple[int, int]]:
    # The artifact's own year span wins over the config: a stage rerun alone
    # must agree with whatever the producing stage wrote.
    obj = _read_artifact(Path(cfg.output_dir), name)
    years = (obj["years"]["first"], obj["years"]["last"])
    return _series_from_obj(obj["series"], regs, years), years


def load_series_raw(cfg: PipelineConfig, regs: Registries) -> dict[SeriesKey, Series]:
    return _load_series_artifact(cfg, regs, "series_raw")[0]


def load_series_me(cfg: PipelineConfig, regs: Registries) -> dict[SeriesKey, Series]:
    return _load_series_artifact(cfg, regs, "series_me")[0]


def stage_transform(
    cfg: PipelineConfig, regs: Registries, series_raw: Mapping[SeriesKey, Series]
) -> dict[SeriesKey, Series]:
    """Convert raw series to morphine-equivalent kilograms; writes series_me.json."""
    t0 = time.perf_counter()
    series_me = transform.convert_all(series_raw, regs.conversion)
    _write_artifact(
        Path(cfg.output_dir),
        "series_me",
        {"years": {"first": cfg.year_min, "last": cfg.year_max}, "series": _series_obj(series_me, cfg.year_bounds)},
    )
    log.info("[compute] transform: %d series in %.3fs", len(series_me), time.perf_counter() - t0)
    return series_me


def stage_cognostics(
    cfg: PipelineConfig, series_me: Mapping[SeriesKey, Series]
) -> dict[SeriesKey, cog.CognosticVector]:
    """Compute per-series summaries; writes cognostics.json."""
    t0 = time.perf_counter()
    keys = sorted(series_me, key=key_id)
    vectors = map_ordered(lambda k: cog.compute_cognostics(series_me[k]), keys, cfg.threads)
    result = dict(zip(keys, vectors))
    obj = {
        key_id(k): {
            "net_change": v.net_change,
            "max_annual_increase": v.max_annual_increase,
            "max_annual_decrease": v.max_annual_decrease,
            "mean_level": v.mean_level,
            "latest_value": v.latest_value,
        }
        for k, v in result.items()
    }
    _write_artifact(Path(cfg.output_dir), "cognostics", obj)
    log.info("[compute] cognostics: %d series in %.3fs", len(result), time.perf_counter() - t0)
    return result


def _layout_for(series_list, cfg: PipelineConfig):
    if len(series_list) < MIN_EMBED_SERIES:
        return f"fewer than {MIN_EMBED_SERIES} series (got {len(series_list)})"
    cubed = [transform.cube_root(s) for s in series_list]
    distances = embedding.pairwise_distances(cubed)
    return embedding.embed_distances(distances, max_iter=cfg.mds_max_iter, tol=cfg.mds_tol)


def stage_embedding(cfg: PipelineConfig, series_me: Mapping[SeriesKey, Series]):
    """Joint (and optional per-drug) layouts over cube-rooted dense series; writes embedding.json."""
    t0 = time.perf_counter()
    keys = sorted(series_me, key=key_id)
    dense = {k: transform.densify(series_me[k]) for k in keys}
    joint = _layout_for([dense[k] for k in keys], cfg)
    per_drug = {}
    if cfg.per_drug_embeddings:
        drug_names = sorted({k[1].canonical_name for k in keys})
        layouts = map_ordered(
            lambda d: _layout_for([dense[k] for k in keys if k[1].canonical_name == d], cfg),
            drug_names,
            cfg.threads,
        )
        per_drug = dict(zip(drug_names, layouts))
    obj = {
        "joint": _layout_artifact(joint),
        "per_drug": {d: _layout_artifact(l) for d, l in per_drug.items()},
    }
    _write_artifact(Path(cfg.output_dir), "embedding", obj)
    log.info(
        "[compute] embedding: %d series, joint %s in %.3fs",
        len(keys),
        _layout_summary(joint),
        time.perf_counter() - t0,
    )
    return joint, per_drug


def _layout_artifact(layout):
    if isinstance(layout, str):
        return {"status": "empty", "reason": layout}
    return {
        "status": "ok",
        "keys": [key_id(k) for k in layout.keys],
        "coords": [[float(x) + 0.0, float(y) + 0.0] for x, y in layout.coords],
        "stress": float(layout.stress),
        "iterations": int(layout.iterations),
    }


def _layout_summary(layout) -> str:
    if isinstance(layout, str):
        return "empty"
    return f"stress={layout.stress:.3g} after {layout.iterations} iterations"


def stage_trends(
    cfg: PipelineConfig, series_me: Mapping[SeriesKey, Series]
) -> tuple[dict[SeriesKey, trends.TrendGrid], trends.TrendParams]:
    """Fit local (level, slope) grids for every series; writes trends.json."""
    t0 = time.perf_counter()
    params = trends.TrendParams(bandwidth_years=cfg.bandwidth_years, ridge_lambda=cfg.ridge_lambda)
    keys = sorted(series_me, key=key_id)
    grids = map_ordered(
        lambda k: trends.trend_grid(transform.densify(series_me[k]), params), keys, cfg.threads
    )
    result = dict(zip(keys, grids))
    obj = {
        "params": {
            "bandwidth_years": params.bandwidth_years,
            "ridge_lambda": params.ridge_lambda,
            "kernel": params.kernel,
        },
        "grids": {
            key_id(k): {"level": [float(x) + 0.0 for x in g.level], "slope": [float(x) + 0.0 for x in g.slope]}
            for k, g in result.items()
        },
    }
    _write_artifact(Path(cfg.output_dir), "trends", obj)
    log.info("[compute] trends: %d series in %.3fs", len(result), time.perf_counter() - t0)
    return result, params


def stage_export(cfg: PipelineConfig, regs: Registries) -> AtlasBundle:
    """Assemble bundle.json from the computed artifacts on disk."""
    t0 = time.perf_counter()
    out_dir = Path(cfg.output_dir)
    series_me, years = _load_series_artifact(cfg, regs, "series_me")
    cog_obj = _read_artifact(out_dir, "cognostics")
    emb_obj = _read_artifact(out_dir, "embedding")
    trends_obj = _read_artifact(out_dir, "trends")

    def resolve_key(kid: str) -> SeriesKey:
        iso3, _, drug = kid.partition(":")
        return (regs.countries.by_iso3(iso3), regs.drugs.resolve(drug))

    cog_map = {
        resolve_key(kid): cog.CognosticVector(
            key=resolve_key(kid),
            net_change=v["net_change"],
            max_annual_increase=v["max_annual_increase"],
            max_annual_decrease=v["max_annual_decrease"],
            mean_level=v["mean_level"],
            latest_value=v["latest_value"],
        )
        for kid, v in cog_obj.items()
    }

    def layout_from(obj):
        if obj["status"] == "empty":
            return obj["reason"]
        return embedding.Embedding(
            keys=tuple(resolve_key(kid) for kid in obj["keys"]),
            coords=[[x, y] for x, y in obj["coords"]],
            stress=obj["stress"],
            iterations=obj["iterations"],
        )

    params = trends.TrendParams(
        bandwidth_years=trends_obj["params"]["bandwidth_years"],
        ridge_lambda=trends_obj["params"]["ridge_lambda"],
        kernel=trends_obj["params"]["kernel"],
    )
    trend_map = {
        resolve_key(kid): trends.TrendGrid(
            key=resolve_key(kid),
            first_year=years[0],
            level=g["level"],
            slope=g["slope"],
            params=params,
        )
        for kid, g in trends_obj["grids"].items()
    }

    bundle = build_bundle(
        series_map=series_me,
        cognostic_map=cog_map,
        joint_embedding=layout_from(emb_obj["joint"]),
        per_drug_embeddings={d: layout_from(o) for d, o in emb_obj["per_drug"].items()},
        trend_map=trend_map,
        trend_params=params,
        countries=regs.countries,
        drugs=regs.drugs,
        years=years,
    )
    write_bundle(bundle, out_dir / ARTIFACTS["bundle"])
    log.info(
        "[export] bundle: %d series, %d bytes in %.3fs",
        len(bundle.series),
        len(canonical_dumps(bundle.data).encode("utf-8")),
        time.perf_counter() - t0,
    )
    return bundle


def run_compute(
    cfg: PipelineConfig,
    regs: Registries,
    series_raw: Mapping[SeriesKey, Series],
    stages: Iterable[str] = ("transform", "cognostics", "embedding", "trends"),
) -> dict[SeriesKey, Series]:
    """Run the selected compute stages; non-transform stages reuse series_me.json if present."""
    stages = tuple(stages)
    if "transform" in stages:
        series_me = stage_transform(cfg, regs, series_raw)
    else:
        series_me = load_series_me(cfg, regs)
    if "cognostics" in stages:
        stage_cognostics(cfg, series_me)
    if "embedding" in stages:
        stage_embedding(cfg, series_me)
    if "trends" in stages:
        stage_trends(cfg, series_me)
    return series_me


def run_pipeline(cfg: PipelineConfig) -> AtlasBundle:
    """Execute ingest -> transform -> {cognostics, embedding, trends} -> export."""
    t0 = time.perf_counter()
    regs = load_registries(cfg)
    series_raw = stage_ingest(cfg, regs)
    run_compute(cfg, regs, series_raw)
    bundle = stage_export(cfg, regs)
    log.info("[run] pipeline finished in %.3fs", time.perf_counter() - t0)
    return bundle
