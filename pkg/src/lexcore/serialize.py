"""CSV/JSON emission for metric results.

CSV files carry a header row (``x,y`` for series, ``key,value`` for
mappings) and full-precision floats via ``repr``, so identical inputs
always produce byte-identical output.  JSON documents carry a
``schema`` field of the form ``lexcore.<kind>/<version>``.
"""

from __future__ import annotations

import json
import os
from pathlib import Path
from typing import Mapping

from .metrics import MetricSeries, OverlapReport, TransitionPartition

SCHEMA_PREFIX = "lexcore"
SCHEMA_VERSION = 1


def _schema(kind: str) -> str:
    return f"{SCHEMA_PREFIX}.{kind}/{SCHEMA_VERSION}"


def fmt(value: float) -> str:
    """Shortest round-trip decimal form of a float."""
    return repr(float(value))


def series_to_csv(series: MetricSeries) -> str:
    lines = ["x,y"] + [f"{x},{fmt(y)}" for x, y in series.points]
    return "\n".join(lines) + "\n"


def series_to_json(series: MetricSeries) -> dict:
    return {
        "schema": _schema("series"),
        "name": series.name,
        "points": [[x, y] for x, y in series.points],
    }


def mapping_to_csv(items: Mapping[str, float]) -> str:
    lines = ["key,value"] + [f"{k},{fmt(v)}" for k, v in items.items()]
    return "\n".join(lines) + "\n"


def mapping_to_json(kind: str, items: Mapping[str, float]) -> dict:
    return {"schema": _schema(kind), "values": dict(items)}


def overlap_to_csv(report: OverlapReport) -> str:
    items = {
        "size_a": report.size_a,
        "size_b": report.size_b,
        "shared": report.shared,
        "only_a": len(report.only_a),
        "only_b": len(report.only_b),
        "symmetric_difference": len(report.only_a) + len(report.only_b),
        "overlap_pct": fmt(report.overlap_pct),
        "jaccard": fmt(report.jaccard),
    }
    lines = ["key,value"] + [f"{k},{v}" for k, v in items.items()]
    return "\n".join(lines) + "\n"


def overlap_to_json(report: OverlapReport) -> dict:
    return {
        "schema": _schema("overlap"),
        "size_a": report.size_a,
        "size_b": report.size_b,
        "shared": report.shared,
        "overlap_pct": report.overlap_pct,
        "jaccard": report.jaccard,
        "only_a": list(report.only_a),
        "only_b": list(report.only_b),
    }


def partition_to_json(partition: TransitionPartition) -> dict:
    return {
        "schema": _schema("transition"),
        "both": sorted(partition.both),
        "only_old": sorted(partition.only_old),
        "only_new": sorted(partition.only_new),
    }


def dump_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write via a temp file and rename, so readers never see a torn file."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(text, encoding="utf-8", newline="\n")
    os.replace(tmp, path)
