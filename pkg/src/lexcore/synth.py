"""Synthetic yearly corpora with known ground truth.

The generator emits shards in the exact ingest TSV format plus a
``truth.json`` sidecar recording the planted parameters, so every
downstream metric can be checked against an independent oracle at desk
scale.

Ground-truth knobs:

* rank r has expected yearly count proportional to 1/(r+q)^s
  (Zipf-Mandelbrot); counts are drawn multinomially per year so
  tolerance tests see realistic sampling noise;
* at each era boundary a fraction ``churn`` of the top ``churn_band``
  ranks is replaced by fresh words inheriting the vacated ranks
  (per-tag replacement probabilities can override the uniform rate);
* an optional rank band decays linearly to ``decay_factor`` of its
  initial weight by the last year, and is pinned against churn;
* ``volume_count`` is simulated as min(match_count, Binomial draw
  against the configured volumes per year).

Generation is fully deterministic for a given seed: every year draws
from its own seed derived from (seed, year), so any generation schedule
produces byte-identical shards.
"""

from __future__ import annotations

import gzip
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ConfigInvalid
from .postags import PosTag

log = logging.getLogger(__name__)

__all__ = ["SynthConfig", "SynthResult", "PRESETS", "generate_corpus", "synth_config_from_dict"]

_ALPHA = "abcdefghijklmnopqrstuvwxyz"

# Default tag mix for newly created words.
DEFAULT_TAG_WEIGHTS: dict[PosTag, float] = {
    PosTag.NOUN: 0.32,
    PosTag.VERB: 0.18,
    PosTag.ADJ: 0.13,
    PosTag.ADV: 0.08,
    PosTag.PRON: 0.04,
    PosTag.DET: 0.04,
    PosTag.ADP: 0.07,
    PosTag.NUM: 0.02,
    PosTag.CONJ: 0.03,
    PosTag.PRT: 0.02,
    PosTag.X: 0.03,
    PosTag.UNTAGGED: 0.04,
}


@dataclass(frozen=True)
class SynthConfig:
    """Parameters of one synthetic corpus."""

    vocabulary: int
    year_start: int
    year_end: int
    tokens_per_year: int
    zipf_exponent: float = 1.0
    mandelbrot_offset: float = 0.0
    era_length: int = 50
    churn: float = 0.15
    churn_band: int = 0
    pos_churn: Mapping[PosTag, float] = field(default_factory=dict)
    tag_weights: Mapping[PosTag, float] = field(default_factory=lambda: dict(DEFAULT_TAG_WEIGHTS))
    volumes_per_year: int = 2000
    decay_group: tuple[int, int] | None = None
    decay_factor: float = 1.0
    seed: int = 0

    def validate(self) -> None:
        if self.vocabulary < 100:
            raise ConfigInvalid("vocabulary must be >= 100")
        if self.zipf_exponent <= 0:
            raise ConfigInvalid("zipf_exponent must be > 0")
        if self.mandelbrot_offset < 0:
            raise ConfigInvalid("mandelbrot_offset must be >= 0")
        if self.year_start > self.year_end:
            raise ConfigInvalid(f"year range inverted: {self.year_start}..{self.year_end}")
        if self.era_length < 1:
            raise ConfigInvalid("era_length must be >= 1")
        if not 0 <= self.churn <= 1:
            raise ConfigInvalid("churn must be in [0, 1]")
        for tag, p in self.pos_churn.items():
            if not 0 <= p <= 1:
                raise ConfigInvalid(f"pos_churn[{tag.name}] must be in [0, 1]")
        if self.tokens_per_year < 1:
            raise ConfigInvalid("tokens_per_year must be >= 1")
        if self.volumes_per_year < 1:
            raise ConfigInvalid("volumes_per_year must be >= 1")
        if self.churn > 0 or self.pos_churn:
            if not 1 <= self.churn_band <= self.vocabulary:
                raise ConfigInvalid("churn requires churn_band in 1..vocabulary")
        if self.decay_group is not None:
            lo, hi = self.decay_group
            if not 1 <= lo <= hi <= self.vocabulary:
                raise ConfigInvalid("decay_group ranks must lie in 1..vocabulary")
            if self.decay_factor <= 0:
                raise ConfigInvalid("decay_factor must be > 0")
        weights = dict(self.tag_weights)
        if not weights or any(v < 0 for v in weights.values()) or sum(weights.values()) <= 0:
            raise ConfigInvalid("tag_weights must be non-negative and sum > 0")
        if self.tokens_per_year < 100 * self.vocabulary:
            log.warning(
                "tokens_per_year=%d below the 100*vocabulary=%d recommendation; "
                "top-K ranks will be noisy",
                self.tokens_per_year,
                100 * self.vocabulary,
            )

    @property
    def years(self) -> range:
        return range(self.year_start, self.year_end + 1)

    def eras(self) -> list[tuple[int, int]]:
        spans = []
        start = self.year_start
        while start <= self.year_end:
            spans.append((start, min(start + self.era_length - 1, self.year_end)))
            start += self.era_length
        return spans

    def to_dict(self) -> dict:
        return {
            "vocabulary": self.vocabulary,
            "year_start": self.year_start,
            "year_end": self.year_end,
            "tokens_per_year": self.tokens_per_year,
            "zipf_exponent": self.zipf_exponent,
            "mandelbrot_offset": self.mandelbrot_offset,
            "era_length": self.era_length,
            "churn": self.churn,
            "churn_band": self.churn_band,
            "pos_churn": {t.name: p for t, p in self.pos_churn.items()},
            "tag_weights": {t.name: w for t, w in self.tag_weights.items()},
            "volumes_per_year": self.volumes_per_year,
            "decay_group": list(self.decay_group) if self.decay_group else None,
            "decay_factor": self.decay_factor,
            "seed": self.seed,
        }


def synth_config_from_dict(data: dict) -> SynthConfig:
    """Build a SynthConfig from parsed JSON (tag names as strings)."""

    def tags(mapping: Mapping[str, float] | None) -> dict[PosTag, float]:
        if not mapping:
            return {}
        try:
            return {PosTag[name]: float(v) for name, v in mapping.items()}
        except KeyError as exc:
            raise ConfigInvalid(f"unknown POS tag {exc.args[0]!r}") from None

    try:
        cfg = SynthConfig(
            vocabulary=int(data["vocabulary"]),
            year_start=int(data["year_start"]),
            year_end=int(data["year_end"]),
            tokens_per_year=int(data["tokens_per_year"]),
            zipf_exponent=float(data.get("zipf_exponent", 1.0)),
            mandelbrot_offset=float(data.get("mandelbrot_offset", 0.0)),
            era_length=int(data.get("era_length", 50)),
            churn=float(data.get("churn", 0.15)),
            churn_band=int(data.get("churn_band", 0)),
            pos_churn=tags(data.get("pos_churn")),
            tag_weights=tags(data.get("tag_weights")) or dict(DEFAULT_TAG_WEIGHTS),
            volumes_per_year=int(data.get("volumes_per_year", 2000)),
            decay_group=tuple(data["decay_group"]) if data.get("decay_group") else None,
            decay_factor=float(data.get("decay_factor", 1.0)),
            seed=int(data.get("seed", 0)),
        )
    except KeyError as exc:
        raise ConfigInvalid(f"synth config missing key {exc.args[0]!r}") from None
    cfg.validate()
    return cfg


PRESETS: dict[str, SynthConfig] = {
    # Stationary 15% churn per 50-year era over four eras; sized so cores
    # up to K=8000 sit well inside the churn band, with enough tokens per
    # year that empirical rank boundaries stay quiet.
    "churn15": SynthConfig(
        vocabulary=50_000,
        year_start=1800,
        year_end=1999,
        tokens_per_year=10_000_000,
        churn=0.15,
        churn_band=16_000,
        volumes_per_year=2_000,
        seed=7,
    ),
    # Same dynamics at quick-test scale.
    "churn15-small": SynthConfig(
        vocabulary=2_000,
        year_start=1800,
        year_end=1999,
        tokens_per_year=200_000,
        churn=0.15,
        churn_band=800,
        volumes_per_year=500,
        seed=42,
    ),
    # POS-stratified churn: nouns replaced fast, determiners slowly.
    "poschurn": SynthConfig(
        vocabulary=5_000,
        year_start=1800,
        year_end=1999,
        tokens_per_year=500_000,
        churn=0.25,
        churn_band=3_000,
        pos_churn={PosTag.NOUN: 0.4, PosTag.DET: 0.1},
        tag_weights={PosTag.NOUN: 0.45, PosTag.DET: 0.30, PosTag.VERB: 0.25},
        volumes_per_year=500,
        seed=11,
    ),
    # A pinned word group whose total frequency halves across the span.
    "decay": SynthConfig(
        vocabulary=5_000,
        year_start=1800,
        year_end=1999,
        tokens_per_year=1_000_000,
        churn=0.0,
        churn_band=0,
        decay_group=(2001, 2400),
        decay_factor=0.5,
        volumes_per_year=500,
        seed=5,
    ),
    # Static Zipf corpus for rank-frequency checks.
    "zipf-demo": SynthConfig(
        vocabulary=10_000,
        year_start=1900,
        year_end=1949,
        tokens_per_year=1_000_000,
        churn=0.0,
        churn_band=0,
        volumes_per_year=1_000,
        seed=3,
    ),
}


@dataclass(frozen=True)
class SynthResult:
    shard_paths: tuple[Path, ...]
    truth_path: Path
    volumes_path: Path


def _word_name(word_id: int) -> str:
    digits = []
    n = word_id
    for _ in range(6):
        n, rem = divmod(n, 26)
        digits.append(_ALPHA[rem])
    return "".join(reversed(digits))


def _rng(seed: int, domain: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(domain, index)))


class _WordPool:
    """Assigns names and POS tags to word ids as they are created."""

    def __init__(self, config: SynthConfig):
        self._tags_order = list(PosTag)
        weights = np.array(
            [config.tag_weights.get(t, 0.0) for t in self._tags_order], dtype=np.float64
        )
        self._tag_probs = weights / weights.sum()
        self.tokens: list[str] = []
        self.tags: list[PosTag] = []
        initial_rng = _rng(config.seed, 0, 0)
        self.extend(config.vocabulary, initial_rng)

    def extend(self, count: int, rng: np.random.Generator) -> np.ndarray:
        start = len(self.tokens)
        drawn = rng.choice(len(self._tags_order), size=count, p=self._tag_probs)
        for offset, tag_idx in enumerate(drawn):
            tag = self._tags_order[int(tag_idx)]
            name = _word_name(start + offset)
            self.tags.append(tag)
            self.tokens.append(name if tag is PosTag.UNTAGGED else f"{name}_{tag.name}")
        return np.arange(start, start + count, dtype=np.int64)


def _apply_churn(
    alive: np.ndarray, pool: _WordPool, config: SynthConfig, era_index: int, pinned: np.ndarray
) -> list[int]:
    """Replace a planted fraction of the churn band's ranks in place.

    Returns the replaced ranks (1-based) so the truth sidecar can expose
    the exact survival history.
    """
    if config.churn == 0 and not config.pos_churn:
        return []
    rng = _rng(config.seed, 1, era_index)
    band = min(config.churn_band, config.vocabulary)
    eligible = np.setdiff1d(np.arange(band, dtype=np.int64), pinned, assume_unique=True)
    if config.pos_churn:
        probs = np.array(
            [config.pos_churn.get(pool.tags[int(alive[r])], config.churn) for r in eligible]
        )
        replaced = eligible[rng.random(len(eligible)) < probs]
    else:
        m = int(round(config.churn * len(eligible)))
        replaced = rng.choice(eligible, size=m, replace=False) if m else eligible[:0]
    replaced = np.sort(replaced)
    if len(replaced):
        alive[replaced] = pool.extend(len(replaced), rng)
    return [int(r) + 1 for r in replaced]


def generate_corpus(
    config: SynthConfig,
    out_dir: str | Path,
    shard_years: int = 25,
    gzip_output: bool = False,
) -> SynthResult:
    """Write synthetic shards, a volumes sidecar and the truth sidecar.

    Returns the created paths.  Raises :class:`ConfigInvalid` on a bad
    config; never emits a line the ingest parser would reject.
    """
    config.validate()
    if shard_years < 1:
        raise ConfigInvalid("shard_years must be >= 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    V = config.vocabulary
    ranks = np.arange(1, V + 1, dtype=np.float64)
    base_weights = 1.0 / (ranks + config.mandelbrot_offset) ** config.zipf_exponent

    pinned = np.zeros(0, dtype=np.int64)
    decay_words: list[str] = []
    pool = _WordPool(config)
    alive = np.arange(V, dtype=np.int64)
    if config.decay_group is not None:
        lo, hi = config.decay_group
        pinned = np.arange(lo - 1, hi, dtype=np.int64)
        decay_words = [_word_name(int(alive[r])) for r in pinned]

    eras = config.eras()
    boundaries = []
    span = config.year_end - config.year_start
    era_index = 0

    shard_paths: list[Path] = []
    chunk_start = config.year_start
    opener = (lambda p: gzip.open(p, "wt", encoding="utf-8", newline="\n")) if gzip_output else (
        lambda p: open(p, "wt", encoding="utf-8", newline="\n")
    )
    suffix = ".tsv.gz" if gzip_output else ".tsv"

    while chunk_start <= config.year_end:
        chunk_end = min(chunk_start + shard_years - 1, config.year_end)
        path = out / f"synth-{chunk_start}-{chunk_end}{suffix}"
        with opener(path) as fh:
            for year in range(chunk_start, chunk_end + 1):
                new_era = (year - config.year_start) // config.era_length
                if new_era != era_index:
                    era_index = new_era
                    replaced = _apply_churn(alive, pool, config, era_index, pinned)
                    boundaries.append(
                        {
                            "era_start": eras[era_index][0],
                            "replaced": len(replaced),
                            "replaced_ranks": replaced,
                        }
                    )

                weights = base_weights
                if config.decay_group is not None and span > 0:
                    g = 1.0 + (config.decay_factor - 1.0) * (year - config.year_start) / span
                    weights = base_weights.copy()
                    weights[pinned] *= g
                probs = weights / weights.sum()

                rng = _rng(config.seed, 2, year)
                counts = rng.multinomial(config.tokens_per_year, probs)
                vol_p = -np.expm1(-counts / config.volumes_per_year)
                vols = rng.binomial(config.volumes_per_year, vol_p)
                vols = np.minimum(vols, counts)
                vols = np.where(counts > 0, np.maximum(vols, 1), 0)

                nz = np.flatnonzero(counts)
                tokens = pool.tokens
                rows = "\n".join(
                    f"{tokens[alive[i]]}\t{year}\t{counts[i]}\t{vols[i]}" for i in nz
                )
                fh.write(rows)
                fh.write("\n")
        shard_paths.append(path)
        chunk_start = chunk_end + 1

    volumes_path = out / "volumes.tsv"
    volumes_path.write_text(
        "".join(f"{y}\t{config.volumes_per_year}\n" for y in config.years), encoding="utf-8"
    )

    truth = {
        "schema": "lexcore.synth-truth/1",
        "config": config.to_dict(),
        "eras": [list(e) for e in eras],
        "boundaries": boundaries,
        "decay_words": decay_words,
    }
    truth_path = out / "truth.json"
    truth_path.write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    log.info("synthetic corpus written to %s (%d shards)", out, len(shard_paths))
    return SynthResult(tuple(shard_paths), truth_path, volumes_path)
