"""Compact year-by-word count store with checksummed persistence.

The store is immutable after construction and safe for unrestricted
concurrent reads.  Rows are kept in five parallel columns sorted by
(word id, year, pos id), so all rows of one word are a contiguous slice
and a per-word query costs O(years), independent of vocabulary size.

On-disk layout (little-endian)::

    magic "LXST" | u32 version | u32 header_len | header JSON
    | words blob (utf-8, newline-joined) | column blobs | sha256 digest

The whole file except the trailing digest is checksummed; truncation or
corruption raises :class:`ChecksumMismatch`, an unknown magic/version
raises :class:`FormatVersionMismatch`.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import ChecksumMismatch, ConfigInvalid, EmptyYearError, FormatVersionMismatch
from .postags import PosTag

MAGIC = b"LXST"
FORMAT_VERSION = 1

_COLUMNS = (
    ("word_id", "<i4"),
    ("pos_id", "u1"),
    ("year", "<i4"),
    ("match_count", "<i8"),
    ("volume_count", "<i8"),
)

__all__ = [
    "YearSlice",
    "CorpusStore",
    "relative_frequency",
    "save_store",
    "load_store",
    "read_volume_sidecar",
]


@dataclass(frozen=True)
class YearSlice:
    """One year's cleaned counts: (word, pos) -> (match, volumes)."""

    year: int
    entries: dict[tuple[str, PosTag], tuple[int, int]]
    lexical_total: int
    volume_total: int


@dataclass(eq=False)
class CorpusStore:
    language: str
    year_start: int
    year_end: int
    words: list[str]
    word_id: np.ndarray
    pos_id: np.ndarray
    year: np.ndarray
    match_count: np.ndarray
    volume_count: np.ndarray
    lexical_totals: np.ndarray
    volume_totals: np.ndarray
    word_index: dict[str, int] = field(init=False, repr=False)
    word_offsets: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.word_index = {w: i for i, w in enumerate(self.words)}
        counts = np.bincount(self.word_id, minlength=len(self.words)) if len(self.word_id) else np.zeros(len(self.words), dtype=np.int64)
        offsets = np.zeros(len(self.words) + 1, dtype=np.int64)
        np.cumsum(counts, out=offsets[1:])
        self.word_offsets = offsets

    @property
    def years(self) -> range:
        return range(self.year_start, self.year_end + 1)

    def empty_years(self) -> set[int]:
        span = self.year_end - self.year_start + 1
        return {self.year_start + i for i in range(span) if self.lexical_totals[i] == 0}

    def lexical_total(self, year: int) -> int:
        self._check_year(year)
        return int(self.lexical_totals[year - self.year_start])

    def volume_total(self, year: int) -> int:
        self._check_year(year)
        return int(self.volume_totals[year - self.year_start])

    def word_rows(self, word: str) -> slice | None:
        """Row slice for one word, or None when absent from the dictionary."""
        idx = self.word_index.get(word)
        if idx is None:
            return None
        return slice(int(self.word_offsets[idx]), int(self.word_offsets[idx + 1]))

    def year_slice(self, year: int) -> YearSlice:
        self._check_year(year)
        mask = self.year == year
        entries = {
            (self.words[int(w)], PosTag(int(p))): (int(m), int(v))
            for w, p, m, v in zip(
                self.word_id[mask], self.pos_id[mask], self.match_count[mask], self.volume_count[mask]
            )
        }
        return YearSlice(
            year=year,
            entries=entries,
            lexical_total=self.lexical_total(year),
            volume_total=self.volume_total(year),
        )

    def iter_clean_records(self) -> Iterator[tuple[str, PosTag, int, int, int]]:
        """Yield (word, pos, year, match, volumes) rows in store order."""
        for w, p, y, m, v in zip(self.word_id, self.pos_id, self.year, self.match_count, self.volume_count):
            yield self.words[int(w)], PosTag(int(p)), int(y), int(m), int(v)

    def _check_year(self, year: int) -> None:
        if year < self.year_start or year > self.year_end:
            raise ValueError(f"year {year} outside store range {self.year_start}..{self.year_end}")


def relative_frequency(store: CorpusStore, word: str, year: int) -> float:
    """Relative frequency of ``word`` in ``year``: count / lexical total.

    Counts sum over the word's retained POS tags; an absent word gives 0.
    Raises :class:`EmptyYearError` when the year has no lexical tokens.
    """
    store._check_year(year)
    total = int(store.lexical_totals[year - store.year_start])
    if total == 0:
        raise EmptyYearError(f"year {year} has no lexical tokens")
    rows = store.word_rows(word)
    if rows is None:
        return 0.0
    years = store.year[rows]
    count = int(store.match_count[rows][years == year].sum())
    return count / total


def save_store(store: CorpusStore, path: str | Path) -> None:
    """Write the store atomically with a whole-file checksum."""
    path = Path(path)
    words_blob = "\n".join(store.words).encode("utf-8")
    header = {
        "language": store.language,
        "year_start": store.year_start,
        "year_end": store.year_end,
        "n_rows": int(len(store.word_id)),
        "n_words": len(store.words),
        "words_bytes": len(words_blob),
        "columns": [name for name, _ in _COLUMNS],
    }
    header_blob = json.dumps(header, sort_keys=True).encode("utf-8")
    parts = [MAGIC, struct.pack("<I", FORMAT_VERSION), struct.pack("<I", len(header_blob)), header_blob, words_blob]
    for name, dtype in _COLUMNS:
        parts.append(np.ascontiguousarray(getattr(store, name), dtype=dtype).tobytes())
    parts.append(np.ascontiguousarray(store.lexical_totals, dtype="<i8").tobytes())
    parts.append(np.ascontiguousarray(store.volume_totals, dtype="<i8").tobytes())
    payload = b"".join(parts)
    digest = hashlib.sha256(payload).digest()
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(payload + digest)
    os.replace(tmp, path)


def load_store(path: str | Path) -> CorpusStore:
    """Load a store written by :func:`save_store`, verifying its checksum."""
    blob = Path(path).read_bytes()
    if len(blob) < len(MAGIC) + 8 + 32:
        raise ChecksumMismatch(f"{path}: file truncated")
    payload, digest = blob[:-32], blob[-32:]
    if hashlib.sha256(payload).digest() != digest:
        raise ChecksumMismatch(f"{path}: checksum does not verify (truncated or corrupt)")
    if payload[:4] != MAGIC:
        raise FormatVersionMismatch(f"{path}: not a store file (bad magic)")
    (version,) = struct.unpack_from("<I", payload, 4)
    if version != FORMAT_VERSION:
        raise FormatVersionMismatch(f"{path}: format version {version}, expected {FORMAT_VERSION}")
    (header_len,) = struct.unpack_from("<I", payload, 8)
    pos = 12
    header = json.loads(payload[pos : pos + header_len].decode("utf-8"))
    pos += header_len
    words_blob = payload[pos : pos + header["words_bytes"]]
    pos += header["words_bytes"]
    words = words_blob.decode("utf-8").split("\n") if words_blob else []
    n_rows = header["n_rows"]
    if len(words) != header["n_words"]:
        raise ChecksumMismatch(f"{path}: dictionary size mismatch")

    columns = {}
    for name, dtype in _COLUMNS:
        nbytes = np.dtype(dtype).itemsize * n_rows
        columns[name] = np.frombuffer(payload, dtype=dtype, count=n_rows, offset=pos).copy()
        pos += nbytes
    span = header["year_end"] - header["year_start"] + 1
    lexical_totals = np.frombuffer(payload, dtype="<i8", count=span, offset=pos).copy()
    pos += span * 8
    volume_totals = np.frombuffer(payload, dtype="<i8", count=span, offset=pos).copy()
    pos += span * 8
    if pos != len(payload):
        raise ChecksumMismatch(f"{path}: trailing bytes after columns")

    return CorpusStore(
        language=header["language"],
        year_start=header["year_start"],
        year_end=header["year_end"],
        words=words,
        word_id=columns["word_id"],
        pos_id=columns["pos_id"],
        year=columns["year"],
        match_count=columns["match_count"],
        volume_count=columns["volume_count"],
        lexical_totals=lexical_totals,
        volume_totals=volume_totals,
    )


def read_volume_sidecar(path: str | Path) -> dict[int, int]:
    """Read per-year total volume counts from a metadata sidecar.

    Two layouts are accepted: plain ``year<TAB>total_volumes`` rows, and
    the total-counts layout of tab-separated ``year,match,page,volume``
    entries (possibly all on one line).
    """
    out: dict[int, int] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        chunks = [c for c in line.split("\t") if c.strip()]
        if "," in line:
            pairs = []
            for chunk in chunks:
                fields = chunk.strip().split(",")
                if len(fields) != 4:
                    raise ConfigInvalid(f"{path}:{lineno}: expected year,match,page,volume entries")
                pairs.append((fields[0], fields[3]))
        elif len(chunks) == 2:
            pairs = [(chunks[0], chunks[1])]
        else:
            raise ConfigInvalid(f"{path}:{lineno}: expected 'year<TAB>total_volumes'")
        for year_s, vol_s in pairs:
            try:
                out[int(year_s)] = int(vol_s)
            except ValueError:
                raise ConfigInvalid(f"{path}:{lineno}: non-integer field {year_s!r}/{vol_s!r}") from None
    return out
