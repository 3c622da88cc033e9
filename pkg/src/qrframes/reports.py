"""Run reports and their JSON / CSV renderings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .errors import DomainError, QRFError

PASS, FAIL = "pass", "fail"


@dataclass
class CheckRecord:
    name: str
    status: str
    measured: dict = field(default_factory=dict)
    tolerance: object = None
    witness: dict | None = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status, "measured": self.measured, "tolerance": self.tolerance}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class RunReport:
    scenario: str
    seed: int | None = None
    checks: list[CheckRecord] = field(default_factory=list)
    tables: dict[str, list[dict]] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def add(self, name: str, ok: bool, measured: dict | None = None, tolerance=None, witness=None) -> CheckRecord:
        if any(c.name == name for c in self.checks):
            raise QRFError(f"check {name!r} recorded twice")
        rec = CheckRecord(name, PASS if ok else FAIL, measured or {}, tolerance, witness)
        self.checks.append(rec)
        return rec

    @property
    def status(self) -> str:
        return PASS if all(c.status == PASS for c in self.checks) else FAIL

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def check(self, name: str) -> CheckRecord:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self, include_timings: bool = False) -> dict:
        d = {
            "scenario": self.scenario,
            "seed": self.seed,
            "status": self.status,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "tables": self.tables,
            "notes": self.notes,
        }
        if include_timings:
            d["timings"] = self.timings
        return d

    @classmethod
    def from_dict(cls, doc: dict) -> RunReport:
        r = cls(doc["scenario"], doc.get("seed"), tables=doc.get("tables", {}),
                timings=doc.get("timings", {}), notes=doc.get("notes", {}))
        for c in doc.get("checks", []):
            r.checks.append(CheckRecord(c["name"], c["status"], c.get("measured", {}), c.get("tolerance"), c.get("witness")))
        return r


def to_jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in items]
    if hasattr(x, "item") and callable(x.item):  # numpy scalar
        return x.item()
    return x


CHECK_COLUMNS = ["check", "status", "quantity", "value", "tolerance"]


def emit_report(r: RunReport, fmt: str = "json", table: str | None = None, include_timings: bool = False) -> str:
    if fmt == "json":
        return json.dumps(to_jsonable(r.to_dict(include_timings)), sort_keys=True, indent=2) + "\n"
    if fmt != "csv":
        raise DomainError(f"unknown report format {fmt!r}; expected json or csv")
    buf = io.StringIO()
    if table is not None:
        rows = r.tables.get(table)
        if rows is None:
            raise DomainError(f"report has no table {table!r}; available: {sorted(r.tables)}")
        cols = list(rows[0]) if rows else []
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([_cell(row[c]) for c in cols])
        return buf.getvalue()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CHECK_COLUMNS)
    for c in sorted(r.checks, key=lambda c: c.name):
        tol = "" if c.tolerance is None else _cell(c.tolerance)
        if not c.measured:
            w.writerow([c.name, c.status, "", "", tol])
        for k in sorted(c.measured):
            w.writerow([c.name, c.status, k, _cell(c.measured[k]), tol])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(to_jsonable(v), sort_keys=True, separators=(",", ":"))
    return v
