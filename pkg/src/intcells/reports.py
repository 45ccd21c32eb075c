"""Verification reports, run manifests and their JSON / CSV renderings."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import platform
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .lattice import IndexSet, ShatterWitness
from .polytope import CoordSubspace

TOOL_VERSION = "0.1.0"

RELATIONS = ("<=", ">=", "==", "vacuous")
_CSV_TEXT = ("claim", "digest", "relation", "provenance")
CSV_FIELDS = ("claim", "digest", "lhs", "rhs", "relation", "pass", "witness", "constant", "provenance", "ci", "details")


def digest(obj: Any) -> str:
    """sha256 of the canonical JSON form (first 16 hex digits)."""
    blob = json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def to_jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if isinstance(x, IndexSet):
        return list(x.indices)
    if isinstance(x, CoordSubspace):
        return {"kept": list(x.kept.indices), "codim": x.codim}
    if isinstance(x, ShatterWitness):
        return {"indices": list(x.indices.indices), "level": [str(h) for h in x.level], "scale": str(x.scale)}
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [to_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if hasattr(x, "to_dict"):
        return to_jsonable(x.to_dict())
    if hasattr(x, "__float__"):
        return float(x)
    return repr(x)


def _holds(lhs, rhs, relation: str) -> bool:
    if relation == "vacuous":
        return True
    if lhs is None or rhs is None:
        return False
    if relation == "<=":
        return lhs <= rhs
    if relation == ">=":
        return lhs >= rhs
    if relation == "==":
        return lhs == rhs
    raise ValueError(f"unknown relation {relation!r}")


@dataclass
class VerificationReport:
    """Outcome of one claim check.

    ``passed`` is always derived from ``lhs relation rhs``. Claims that are a
    conjunction of many comparisons record the number of violations as lhs
    against rhs 0, with the individual comparisons in ``details``.
    """

    claim: str
    digest: str
    lhs: Any
    rhs: Any
    relation: str
    witness: Any = None
    measured_constant: Any = None
    provenance: str = "exact"
    ci: float | None = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}")
        if self.provenance not in ("exact", "mc"):
            raise ValueError("provenance must be 'exact' or 'mc'")

    @property
    def passed(self) -> bool:
        return _holds(self.lhs, self.rhs, self.relation)

    def to_dict(self) -> dict:
        return {
            "claim": self.claim,
            "digest": self.digest,
            "lhs": to_jsonable(self.lhs),
            "rhs": to_jsonable(self.rhs),
            "relation": self.relation,
            "pass": self.passed,
            "witness": to_jsonable(self.witness),
            "constant": to_jsonable(self.measured_constant),
            "provenance": self.provenance,
            "ci": self.ci,
            "details": to_jsonable(self.details),
        }


@dataclass
class RunManifest:
    command: list[str]
    config_digest: str
    seeds: list[int]
    tool_version: str = TOOL_VERSION
    wall_time: float = 0.0
    python: str = field(default_factory=lambda: platform.python_version())

    @classmethod
    def start(cls, argv, cfg_dict: dict, seeds) -> "RunManifest":
        m = cls(list(argv), digest(cfg_dict), list(seeds))
        m._t0 = time.perf_counter()
        return m

    def finish(self) -> "RunManifest":
        t0 = getattr(self, "_t0", None)
        if t0 is not None:
            self.wall_time = round(time.perf_counter() - t0, 6)
        return self

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config_digest": self.config_digest,
            "seeds": self.seeds,
            "tool_version": self.tool_version,
            "wall_time": self.wall_time,
            "python": self.python,
        }


def render_json(reports: list[VerificationReport], manifest: RunManifest | None = None) -> str:
    doc: dict = {"reports": [r.to_dict() for r in reports]}
    if manifest is not None:
        doc["manifest"] = manifest.to_dict()
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def render_csv(reports: list[VerificationReport], manifest: RunManifest | None = None) -> str:
    """One row per report; structured fields are embedded as JSON strings."""
    rows = [r.to_dict() for r in reports]
    if manifest is not None:
        for d in rows:
            d["manifest"] = manifest.to_dict()
    return render_rows_csv(rows)


def render_rows_csv(rows: list[dict]) -> str:
    """CSV for report dictionaries (as produced by ``to_dict`` or :func:`parse_csv`)."""
    buf = io.StringIO()
    extra = ("manifest",) if any("manifest" in d for d in rows) else ()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS + extra, lineterminator="\n")
    w.writeheader()
    for d in rows:
        w.writerow({k: d.get(k) if k in _CSV_TEXT else json.dumps(d.get(k), sort_keys=True) for k in CSV_FIELDS + extra})
    return buf.getvalue()


def parse_csv(text: str) -> list[dict]:
    """Inverse of :func:`render_csv` (field values decoded back to JSON types)."""
    rows = []
    for row in csv.DictReader(io.StringIO(text)):
        out = {}
        for k, v in row.items():
            if k in _CSV_TEXT:
                out[k] = v
            else:
                out[k] = json.loads(v)
        rows.append(out)
    return rows


def write_stderr_summary(reports: list[VerificationReport]) -> None:
    for r in reports:
        sys.stderr.write(f"{r.claim}: {'pass' if r.passed else 'FAIL'}\n")
