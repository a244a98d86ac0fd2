"""Serialization of verification reports: versioned JSON and the CSV summary table."""
from __future__ import annotations

import csv
import io
import json
import time

SCHEMA_VERSION = 1
SUMMARY_HEADER = ["r", "empirical", "exact", "bound_thm_main", "bound_gromov", "bound_cor41", "margin"]

_number_or_null = {"type": ["number", "null"]}

REPORT_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "conclab verification report",
    "type": "object",
    "required": ["schema_version", "kind", "seed", "experiments", "violation_count"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "kind": {"enum": ["simulate", "verify"]},
        "preset": {"type": ["string", "null"]},
        "seed": {"type": "integer", "minimum": 0},
        "timestamp": {"type": "string"},
        "violation_count": {"type": "integer", "minimum": 0},
        "experiments": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["config", "rows", "lemma_rows", "moment_rows", "checks", "violations", "rng"],
                "properties": {
                    "config": {
                        "type": "object",
                        "required": ["n", "m", "map", "samples", "seed", "r_grid", "q_list", "profile"],
                    },
                    "rows": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": SUMMARY_HEADER,
                            "properties": {"r": {"type": "number"},
                                           **{k: _number_or_null for k in SUMMARY_HEADER[1:]}},
                        },
                    },
                    "lemma_rows": {"type": "array", "items": {"type": "object"}},
                    "moment_rows": {"type": "array", "items": {"type": "object", "required": ["q", "V_q", "V_tilde_q"]}},
                    "checks": {"type": "object"},
                    "violations": {"type": "array", "items": {"type": "object", "required": ["section"]}},
                    "rng": {"type": "object", "required": ["seed", "algorithm"]},
                },
            },
        },
    },
}


def build_document(reports, kind, seed, preset=None, timestamp=True):
    """Wrap experiment reports in the versioned envelope."""
    exps = [r.to_dict() if hasattr(r, "to_dict") else r for r in reports]
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": kind,
        "preset": preset,
        "seed": int(seed),
        "violation_count": sum(len(e["violations"]) for e in exps),
        "experiments": exps,
    }
    if timestamp:
        doc["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return doc


def dumps(doc) -> str:
    # repr-based float output is shortest round-trip, hence exact on reload
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def loads(text):
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported report schema_version {doc.get('schema_version')!r}")
    return doc


def fmt(x) -> str:
    """17 significant digits; None becomes an empty field."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, str)):
        return str(x)
    return format(float(x), ".17g")


def write_csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(row.get(h)) for h in header])
    return buf.getvalue()


def summary_table(doc) -> str:
    """Per-radius summary CSV. Multi-experiment documents get a leading
    ``experiment`` column (index into ``experiments``)."""
    exps = doc["experiments"]
    if len(exps) == 1:
        return write_csv(exps[0]["rows"], SUMMARY_HEADER)
    rows = [dict(row, experiment=i) for i, e in enumerate(exps) for row in e["rows"]]
    return write_csv(rows, ["experiment"] + SUMMARY_HEADER)
