"""Pipeline configuration: a flat key/value text file plus CLI overrides.

Format: one `key = value` per line, '#' comments, blank lines ignored.
Relative paths are resolved against the config file's directory. Validation
collects every problem before failing so a bad config is reported once,
completely.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError

_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


@dataclass
class PipelineConfig:
    input_csv: Path | None = None
    output_dir: Path = Path("out")
    country_registry: Path | None = None
    alias_table: Path | None = None
    drug_registry: Path | None = None
    conversion_table: Path | None = None
    country_column: str = "country"
    drug_column: str = "drug"
    year_column: str = "year"
    quantity_column: str = "quantity"
    year_min: int = 1989
    year_max: int = 2013
    duplicate_policy: str = "error"
    unknown_country_policy: str = "error"
    bandwidth_years: float = 7.0
    ridge_lambda: float = 0.01
    mds_tol: float = 1e-8
    mds_max_iter: int = 500
    per_drug_embeddings: bool = True
    threads: int = 1

    @property
    def year_bounds(self) -> tuple[int, int]:
        return (self.year_min, self.year_max)


_PATH_KEYS = {
    "input_csv",
    "output_dir",
    "country_registry",
    "alias_table",
    "drug_registry",
    "conversion_table",
}
_INT_KEYS = {"year_min", "year_max", "mds_max_iter", "threads"}
_FLOAT_KEYS = {"bandwidth_years", "ridge_lambda", "mds_tol"}
_BOOL_KEYS = {"per_drug_embeddings"}


def _parse_value(key: str, raw: str, base: Path, problems: list[str]):
    if key in _PATH_KEYS:
        p = Path(raw)
        return p if p.is_absolute() else base / p
    if key in _INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            problems.append(f"{key}: expected an integer, got {raw!r}")
            return None
    if key in _FLOAT_KEYS:
        try:
            return float(raw)
        except ValueError:
            problems.append(f"{key}: expected a number, got {raw!r}")
            return None
    if key in _BOOL_KEYS:
        low = raw.strip().lower()
        if low in _BOOL_TRUE:
            return True
        if low in _BOOL_FALSE:
            return False
        problems.append(f"{key}: expected on/off, got {raw!r}")
        return None
    return raw


def load_config(path) -> PipelineConfig:
    """Parse a flat key/value config file; raises ConfigError listing all problems."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError([f"config file {path} does not exist"])
    known = {f.name for f in fields(PipelineConfig)}
    base = path.parent
    cfg = PipelineConfig()
    problems: list[str] = []
    for lineno, line in enumerate(path.read_text("utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            problems.append(f"line {lineno}: expected 'key = value', got {stripped!r}")
            continue
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key not in known:
            problems.append(f"line {lineno}: unknown key {key!r}")
            continue
        value = _parse_value(key, raw, base, problems)
        if value is not None:
            setattr(cfg, key, value)
    if problems:
        raise ConfigError(problems)
    return cfg


def validate_config(cfg: PipelineConfig, require_input: bool = True) -> None:
    """Check value ranges and referenced paths; raises ConfigError with every problem."""
    problems: list[str] = []
    if require_input:
        if cfg.input_csv is None:
            problems.append("input_csv is not set")
        elif not Path(cfg.input_csv).is_file():
            problems.append(f"input_csv {cfg.input_csv} does not exist")
    for key in ("country_registry", "alias_table", "drug_registry", "conversion_table"):
        value = getattr(cfg, key)
        if value is not None and not Path(value).is_file():
            problems.append(f"{key} {value} does not exist")
    if cfg.year_min > cfg.year_max:
        problems.append(f"year bounds {cfg.year_min}..{cfg.year_max} are reversed")
    if cfg.duplicate_policy not in ("error", "sum"):
        problems.append(f"duplicate_policy must be 'error' or 'sum', got {cfg.duplicate_policy!r}")
    if cfg.unknown_country_policy not in ("error", "skip"):
        problems.append(
            f"unknown_country_policy must be 'error' or 'skip', got {cfg.unknown_country_policy!r}"
        )
    if not cfg.bandwidth_years > 0:
        problems.append(f"bandwidth_years must be > 0, got {cfg.bandwidth_years!r}")
    if cfg.ridge_lambda < 0:
        problems.append(f"ridge_lambda must be >= 0, got {cfg.ridge_lambda!r}")
    if not cfg.mds_tol > 0:
        problems.append(f"mds_tol must be > 0, got {cfg.mds_tol!r}")
    if cfg.mds_max_iter < 1:
        problems.append(f"mds_max_iter must be >= 1, got {cfg.mds_max_iter!r}")
    if cfg.threads < 1:
        problems.append(f"threads must be >= 1, got {cfg.threads!r}")
    if problems:
        raise ConfigError(problems)
