"""Append-only JSONL persistence for run results.

One line per run, schema-versioned, keyed by (a, b, c, N). Numeric payload
fields round-trip exactly through json (ints stay ints, floats via repr
semantics); the timestamp is carried but excluded from key lookups and
comparisons so reruns can be diffed against history.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from typing import Iterator

from .errors import SpecParseError

SCHEMA_VERSION = 1

RunKey = tuple[int, int, int, int]


@dataclass(frozen=True)
class RunRecord:
    """Everything needed to reproduce and compare one analyze run."""

    a: int
    b: int
    c: int
    n_value: int
    pi_f: int
    cardinality_a: int
    v_of_a: float
    main_term: float
    relative_error: float | None
    l_one: float | None
    l_one_bound: float | None
    beta: float | None
    beta_bound: float | None
    hypotheses_hold: bool | None
    version: str
    timestamp: str
    schema: int = SCHEMA_VERSION

    @property
    def key(self) -> RunKey:
        return (self.a, self.b, self.c, self.n_value)

    def payload(self) -> dict:
        """Comparison view: every field except the timestamp."""
        d = asdict(self)
        d.pop("timestamp")
        return d


def utc_timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def to_json_line(record: RunRecord) -> str:
    d = asdict(record)
    # schema first so a reader can dispatch before parsing the rest
    ordered = {"schema": d.pop("schema"), **d}
    return json.dumps(ordered, separators=(",", ":"), sort_keys=False)


_FIELD_NAMES = {f.name for f in fields(RunRecord)}


def from_json_line(line: str) -> RunRecord:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"bad record line: {exc}") from None
    if not isinstance(raw, dict):
        raise SpecParseError("record line is not an object")
    schema = raw.get("schema")
    if schema != SCHEMA_VERSION:
        raise SpecParseError(f"unsupported record schema {schema!r}")
    unknown = set(raw) - _FIELD_NAMES
    if unknown:
        raise SpecParseError(f"unknown record fields {sorted(unknown)}")
    missing = _FIELD_NAMES - set(raw)
    if missing:
        raise SpecParseError(f"missing record fields {sorted(missing)}")
    return RunRecord(**raw)


def append_record(path: str, record: RunRecord) -> None:
    """Append one line; creates the file (and parents) on first use."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(to_json_line(record) + "\n")


def iter_records(path: str) -> Iterator[RunRecord]:
    if not os.path.exists(path):
        return
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                yield from_json_line(line)


def load_records(path: str) -> list[RunRecord]:
    return list(iter_records(path))


def find_latest(path: str, key: RunKey) -> RunRecord | None:
    """Most recent record for (a, b, c, N); the log is append-only so the
    last match wins."""
    found = None
    for rec in iter_records(path):
        if rec.key == key:
            found = rec
    return found
