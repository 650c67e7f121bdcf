"""Config files (json, schema-checked) and result rendering."""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any, Iterable

import jsonschema

from .crystal import Crystal, DeltaLattice, Layer, Scan, SpectrumRow, StackConfig
from .sp2 import DomainError

CSV_HEADER = "x,half_trace,class,bloch_phase,T,R"
_KINDS = ("stack", "delta")  # order of the oneOf branches


class ConfigError(DomainError):
    """Config failed schema or semantic validation; ``path`` names the field."""

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path or '<root>'}: {message}")
        self.path = path


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("latticeprop.schemas").joinpath(name).read_text()
    return json.loads(text)


def _format_path(parts: Iterable[Any]) -> str:
    return "/".join(str(p) for p in parts)


def _deepest_error(err: jsonschema.ValidationError, kind: Any) -> jsonschema.ValidationError:
    # oneOf failures hide the informative error in their context; keep the
    # branch whose "kind" matched and report its deepest error
    if err.validator == "oneOf" and err.context:
        branch = _KINDS.index(kind) if kind in _KINDS else None
        errs = [e for e in err.context if e.relative_schema_path[0] == branch]
        if errs:
            return max(errs, key=lambda e: len(e.absolute_path))
    return err


def parse_config(doc: Any) -> Crystal:
    validator = jsonschema.Draft202012Validator(load_schema("config.schema.json"))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        kind = doc.get("kind") if isinstance(doc, dict) else None
        err = _deepest_error(errors[0], kind)
        raise ConfigError(err.message, _format_path(err.absolute_path))
    if doc["kind"] == "stack":
        scan_key, lo_key, hi_key = "scan", "lambda_min_nm", "lambda_max_nm"
    else:
        scan_key, lo_key, hi_key = "k_scan", "k_min", "k_max"
    s = doc[scan_key]
    if s[hi_key] < s[lo_key]:
        raise ConfigError(f"{hi_key} must be >= {lo_key}", f"{scan_key}/{hi_key}")
    scan = Scan(float(s[lo_key]), float(s[hi_key]), int(s["points"]))
    try:
        if doc["kind"] == "stack":
            return StackConfig(
                ambient_n=float(doc["ambient_n"]),
                exit_n=float(doc["exit_n"]),
                cell=tuple(Layer(float(l["n"]), float(l["d"])) for l in doc["cell"]),
                periods=int(doc["periods"]),
                scan=scan,
            )
        return DeltaLattice(
            g=float(doc["g"]), a=float(doc["a"]), k_scan=scan, periods=int(doc.get("periods", 1))
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def load_config(path: str | Path) -> Crystal:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid json: {exc.msg} (line {exc.lineno})") from None
    return parse_config(doc)


def fmt(x: float | None) -> str:
    """Shortest round-trip rendering; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to render non-finite value {x!r}")
    return repr(float(x))


def row_to_dict(row: SpectrumRow) -> dict:
    out = {
        "x": row.x,
        "half_trace": row.half_trace,
        "class": row.w_class,
        "bloch_phase": row.bloch_phase,
        "T": row.T,
        "R": row.R,
    }
    if row.overflow:
        out["overflow"] = True
    return out


def rows_to_csv(rows: Iterable[SpectrumRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join([fmt(r.x), fmt(r.half_trace), r.w_class, fmt(r.bloch_phase), fmt(r.T), fmt(r.R)]))
    return "\n".join(lines) + "\n"


def dumps_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def validate_output(doc: Any) -> None:
    jsonschema.validate(doc, load_schema("output.schema.json"), cls=jsonschema.Draft202012Validator)
