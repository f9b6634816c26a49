"""Flat experiment records and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any, Iterable, Optional, Sequence

SCHEMA_VERSION = 1

SPECTRUM_COLUMNS = (
    "sweep_value",
    "level_index",
    "energy",
    "shifted_energy",
    "parity",
    "doublet_expectation",
    "cutoff_used",
    "converged",
)

RECORD_COLUMNS = SPECTRUM_COLUMNS + ("experiment_id", "seed")


@dataclass
class ExperimentRecord:
    """One row of figure data.

    ``energy`` is in units of omega and never shifted; ``shifted_energy``
    holds the same level with the (lambda/omega)^2 visualisation offset, or
    None when no shift applies.  Non-spectral rows leave the spectral fields
    as None and carry their payload in ``extra``.
    """

    experiment_id: str
    sweep_value: float
    level_index: int
    energy: Optional[float] = None
    shifted_energy: Optional[float] = None
    parity: Optional[int] = None
    doublet_expectation: Optional[float] = None
    cutoff_used: Optional[int] = None
    converged: Optional[bool] = None
    seed: Optional[int] = None
    extra: dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if self.energy is not None and not math.isfinite(self.energy):
            raise ValueError(f"non-finite energy in record {self.experiment_id}")
        if self.parity is not None and self.parity not in (-1, 1):
            raise ValueError(f"parity must be +-1, got {self.parity}")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "ExperimentRecord":
        return cls(**d)


def _fmt(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        text = format(v, ".17g")
        # keep a float marker so extra columns re-parse as float
        return text if any(ch in text for ch in ".eni") else text + ".0"
    if isinstance(v, (list, tuple, dict)):
        return json.dumps(v, sort_keys=True)
    return str(v)


def record_columns(records: Sequence[ExperimentRecord]) -> list[str]:
    """Fixed base columns followed by the union of ``extra`` keys, sorted."""
    keys = sorted({k for r in records for k in r.extra})
    return list(RECORD_COLUMNS) + keys


def rows_to_csv(columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def records_to_csv(records: Sequence[ExperimentRecord], columns: Optional[Sequence[str]] = None) -> str:
    columns = list(columns) if columns is not None else record_columns(records)
    rows = []
    for r in records:
        d = r.to_dict()
        extra = d.pop("extra")
        d.update(extra)
        rows.append(d)
    return rows_to_csv(columns, rows)


def records_to_json(records: Sequence[ExperimentRecord], meta: Optional[dict[str, Any]] = None) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "meta": meta or {},
        "records": [r.to_dict() for r in records],
    }
    return json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"


def records_from_json(text: str) -> list[ExperimentRecord]:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {doc.get('schema_version')!r}")
    return [ExperimentRecord.from_dict(d) for d in doc["records"]]


_FLOAT_COLUMNS = ("sweep_value", "energy", "shifted_energy", "doublet_expectation")


def _parse_cell(column: str, text: str) -> Any:
    if text == "":
        return None
    if column in ("level_index", "cutoff_used", "parity", "seed"):
        return int(text)
    if column == "converged":
        return text == "true"
    if column == "experiment_id":
        return text
    if column in _FLOAT_COLUMNS:
        return float(text)
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def records_from_csv(text: str) -> list[ExperimentRecord]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    out = []
    base = set(RECORD_COLUMNS)
    for row in reader:
        d = {c: _parse_cell(c, v) for c, v in zip(header, row)}
        extra = {k: d.pop(k) for k in list(d) if k not in base and d[k] is not None}
        for k in [k for k in d if k not in base]:
            d.pop(k)
        d.setdefault("experiment_id", "")
        out.append(ExperimentRecord(extra=extra, **d))
    return out
