"""Shared fixtures: hand-built fixture corpora and one small synthetic corpus."""

from __future__ import annotations

import json
from pathlib import Path

import pytest

from lexcore.alphabets import alphabet_preset
from lexcore.config import RunConfig
from lexcore.ingest import build_store
from lexcore.synth import PRESETS, generate_corpus

# Hand fixture: 1900-1904, lexical totals 100/100/1000/0/100.
# press_VERB is exactly 1% of press and must be dropped; vol. fails the
# lexical filter; _NOUN_ is a wildcard row; 1903 is an empty year.
HAND_LINES = [
    "the_DET\t1900\t40\t8",
    "time_NOUN\t1900\t24\t7",
    "time_VERB\t1900\t6\t3",
    "cat_NOUN\t1900\t20\t6",
    "dog_NOUN\t1900\t10\t5",
    "the_DET\t1901\t30\t8",
    "time_NOUN\t1901\t20\t6",
    "cat_NOUN\t1901\t25\t7",
    "dog_NOUN\t1901\t15\t5",
    "vol.\t1901\t99\t9",
    "don't\t1901\t10\t4",
    "_NOUN_\t1901\t77\t9",
    "press_NOUN\t1902\t990\t10",
    "press_VERB\t1902\t10\t2",
    "the_DET\t1902\t10\t3",
    "the_DET\t1904\t50\t9",
    "cat_NOUN\t1904\t30\t8",
    "new_ADJ\t1904\t20\t7",
]


def write_shards(tmp: Path, lines: list[str], n_shards: int = 1) -> list[Path]:
    tmp.mkdir(parents=True, exist_ok=True)
    paths = []
    for i in range(n_shards):
        chunk = lines[i::n_shards]
        p = tmp / f"shard-{i}.tsv"
        p.write_text("\n".join(chunk) + "\n", encoding="utf-8")
        paths.append(p)
    return paths


def english_config(year_start: int, year_end: int, fold_case: bool = False) -> RunConfig:
    return RunConfig(
        language="english",
        alphabet=alphabet_preset("english"),
        year_start=year_start,
        year_end=year_end,
        fold_case=fold_case,
    )


def store_from_lines(tmp: Path, lines: list[str], y0: int, y1: int, volumes: int | None = None):
    """Build a store from literal shard lines; optional flat volume totals."""
    shards = write_shards(tmp, lines)
    sidecar = None
    if volumes is not None:
        sidecar = tmp / "volumes.tsv"
        sidecar.write_text("".join(f"{y}\t{volumes}\n" for y in range(y0, y1 + 1)), encoding="utf-8")
    store, _ = build_store(shards, english_config(y0, y1), volume_sidecar=sidecar)
    return store


@pytest.fixture
def hand_store(tmp_path):
    shards = write_shards(tmp_path, HAND_LINES, n_shards=2)
    sidecar = tmp_path / "volumes.tsv"
    sidecar.write_text("".join(f"{y}\t10\n" for y in range(1900, 1905)), encoding="utf-8")
    store, stats = build_store(shards, english_config(1900, 1904), volume_sidecar=sidecar)
    return store, stats


@pytest.fixture(scope="session")
def small_synth(tmp_path_factory):
    """One churn15-small corpus shared by the whole session."""
    out = tmp_path_factory.mktemp("small-synth")
    result = generate_corpus(PRESETS["churn15-small"], out)
    truth = json.loads(result.truth_path.read_text(encoding="utf-8"))
    return result, truth


@pytest.fixture(scope="session")
def small_store(small_synth):
    result, _ = small_synth
    config = english_config(1800, 1999)
    store, stats = build_store(result.shard_paths, config, volume_sidecar=result.volumes_path)
    assert stats.malformed == 0
    return store
