"""Command-line surface: ingest -> store -> windows -> metrics -> figures.

Exit codes: 0 success, 1 data error (bad file, bad store, empty window),
2 usage error (bad flags).  Every run writes a ``manifest.json`` next to
its outputs recording the resolved parameters and their hash; the
``report`` command refuses inputs whose manifests disagree on the
underlying store.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import re
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import load_config, params_hash
from .errors import LexcoreError
from .ingest import build_store
from .metrics import (
    coverage_series,
    group_frequency_series,
    overlap_report,
    partition_core_transition,
    pearson_correlation,
    pos_composition,
    pos_dropout,
    turnover_series,
)
from .serialize import (
    dump_json,
    mapping_to_csv,
    mapping_to_json,
    overlap_to_csv,
    overlap_to_json,
    partition_to_json,
    series_to_csv,
    series_to_json,
    write_text_atomic,
)
from .store import load_store, save_store
from .svgchart import bar_chart, line_chart
from .synth import PRESETS, generate_corpus, synth_config_from_dict
from .windows import (
    CORE_1800_WINDOW,
    CORE_2000_WINDOW,
    WindowSpec,
    aggregate_window,
    bookshare_core,
    frequency_core,
    standard_windows,
    write_core,
)

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
_WINDOW_PRESETS = {"core1800": CORE_1800_WINDOW, "core2000": CORE_2000_WINDOW}


class _UsageError(Exception):
    pass


def _utcnow() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _resolve_input(path_str: str) -> Path:
    """Resolve an input path, falling back to $LEXCORE_DATA_DIR."""
    p = Path(path_str)
    if p.exists() or p.is_absolute():
        return p
    base = os.environ.get("LEXCORE_DATA_DIR")
    if base and (Path(base) / p).exists():
        return Path(base) / p
    return p


def _parse_window(text: str) -> WindowSpec:
    if text in _WINDOW_PRESETS:
        return _WINDOW_PRESETS[text]
    m = re.fullmatch(r"(\d+):(\d+)", text)
    if not m:
        raise _UsageError(f"expected 'START:END', 'core1800' or 'core2000', got {text!r}")
    try:
        return WindowSpec(int(m.group(1)), int(m.group(2)))
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _parse_years(text: str) -> range:
    m = re.fullmatch(r"(\d+):(\d+)", text)
    if not m or int(m.group(1)) > int(m.group(2)):
        raise _UsageError(f"expected 'START:END' year range, got {text!r}")
    return range(int(m.group(1)), int(m.group(2)) + 1)


def _outdir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _sha256_file(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    inputs: list[str]
    output_dir: str
    store_hash: str | None
    created_utc: str

    def write(self, out_dir: Path) -> None:
        doc = {
            "schema": "lexcore.manifest/1",
            "subcommand": self.subcommand,
            "params": self.params,
            "params_hash": params_hash(self.params),
            "inputs": self.inputs,
            "output_dir": self.output_dir,
            "store_hash": self.store_hash,
            "tool_version": __version__,
            "created_utc": self.created_utc,
            "completed_utc": _utcnow(),
        }
        write_text_atomic(out_dir / MANIFEST_NAME, dump_json(doc))


def _load_store_arg(args) -> tuple:
    path = _resolve_input(args.store)
    store = load_store(path)
    return store, _sha256_file(path)


def _extract_core(table, args):
    if getattr(args, "k", None) is not None and getattr(args, "threshold", None) is not None:
        raise _UsageError("--k and --threshold are mutually exclusive")
    if getattr(args, "k", None) is not None:
        if args.k < 1:
            raise _UsageError("--k must be >= 1")
        return frequency_core(table, args.k)
    if getattr(args, "threshold", None) is not None:
        if not 0 < args.threshold <= 1:
            raise _UsageError("--threshold must be in (0, 1]")
        return bookshare_core(table, args.threshold)
    raise _UsageError("one of --k or --threshold is required")


def _write_series(out: Path, stem: str, series, fmt_kind: str) -> Path:
    if fmt_kind == "json":
        path = out / f"{stem}.json"
        write_text_atomic(path, dump_json(series_to_json(series)))
    else:
        path = out / f"{stem}.csv"
        write_text_atomic(path, series_to_csv(series))
    return path


def _write_mapping(out: Path, stem: str, kind: str, items: dict, fmt_kind: str) -> Path:
    if fmt_kind == "json":
        path = out / f"{stem}.json"
        write_text_atomic(path, dump_json(mapping_to_json(kind, items)))
    else:
        path = out / f"{stem}.csv"
        write_text_atomic(path, mapping_to_csv(items))
    return path


# ---------------------------------------------------------------- commands


def cmd_ingest(args) -> int:
    config = load_config(_resolve_input(args.config))
    shards = [_resolve_input(p) for p in args.shards]
    missing = [str(p) for p in shards if not p.exists()]
    if missing:
        raise FileNotFoundError(f"shard(s) not found: {', '.join(missing)}")
    volumes = _resolve_input(args.volumes) if args.volumes else None
    created = _utcnow()
    store, stats = build_store(shards, config, volume_sidecar=volumes, threads=args.threads)
    out = _outdir(args)
    store_path = out / "store.lxst"
    save_store(store, store_path)
    write_text_atomic(out / "ingest_stats.json", dump_json(stats.to_dict()))
    params = {
        "config": config.to_dict(),
        "threads": args.threads,
        "volumes": str(volumes) if volumes else None,
    }
    RunManifest(
        "ingest", params, [str(p) for p in shards], str(out), _sha256_file(store_path), created
    ).write(out)
    print(store_path)
    return 0


def cmd_synth(args) -> int:
    if bool(args.preset) == bool(args.config):
        raise _UsageError("exactly one of --preset or --config is required")
    if args.preset:
        try:
            config = PRESETS[args.preset]
        except KeyError:
            raise _UsageError(f"unknown preset {args.preset!r} (known: {', '.join(sorted(PRESETS))})") from None
    else:
        config = synth_config_from_dict(json.loads(Path(_resolve_input(args.config)).read_text()))
    created = _utcnow()
    out = _outdir(args)
    result = generate_corpus(config, out, shard_years=args.shard_years, gzip_output=args.gzip)
    params = {"synth_config": config.to_dict(), "gzip": args.gzip, "shard_years": args.shard_years}
    RunManifest("synth", params, [], str(out), None, created).write(out)
    for p in result.shard_paths:
        print(p)
    return 0


def cmd_core(args) -> int:
    created = _utcnow()
    store, store_hash = _load_store_arg(args)
    window = _parse_window(args.window)
    table = aggregate_window(store, window)
    core = _extract_core(table, args)
    out = _outdir(args)
    path = out / f"core_{core.method}_{core.param:g}_{window.label}.tsv"
    write_core(core, path)
    params = {
        "store": str(args.store),
        "window": window.label,
        "k": args.k,
        "threshold": args.threshold,
    }
    RunManifest("core", params, [str(args.store)], str(out), store_hash, created).write(out)
    print(path)
    return 0


def cmd_turnover(args) -> int:
    created = _utcnow()
    if args.width < 1:
        raise _UsageError("--width must be >= 1")
    store, store_hash = _load_store_arg(args)
    if args.windows == "standard":
        specs = standard_windows(store.year_start, store.year_end, width=args.width)
    else:
        specs = [_parse_window(w) for w in args.windows.split(",")]
        if len(specs) < 2:
            raise _UsageError("--windows needs at least two windows")
    cores = [_extract_core(aggregate_window(store, spec), args) for spec in specs]
    series = turnover_series(cores)
    out = _outdir(args)
    path = _write_series(out, "turnover", series, args.format)
    params = {
        "store": str(args.store),
        "windows": [s.label for s in specs],
        "k": args.k,
        "threshold": args.threshold,
        "format": args.format,
    }
    RunManifest("turnover", params, [str(args.store)], str(out), store_hash, created).write(out)
    print(path)
    return 0


def cmd_coverage(args) -> int:
    created = _utcnow()
    store, store_hash = _load_store_arg(args)
    window = _parse_window(args.window)
    core = _extract_core(aggregate_window(store, window), args)
    years = _parse_years(args.years) if args.years else store.years
    series = coverage_series(core, store, years, name=f"coverage_{window.label}")
    out = _outdir(args)
    path = _write_series(out, f"coverage_{window.label}", series, args.format)
    params = {
        "store": str(args.store),
        "window": window.label,
        "k": args.k,
        "threshold": args.threshold,
        "years": [min(years), max(years)],
        "format": args.format,
    }
    RunManifest("coverage", params, [str(args.store)], str(out), store_hash, created).write(out)
    print(path)
    return 0


def cmd_overlap(args) -> int:
    created = _utcnow()
    store, store_hash = _load_store_arg(args)
    window = _parse_window(args.window)
    table = aggregate_window(store, window)
    share_core = bookshare_core(table, args.threshold)
    k = args.k if args.k is not None else max(len(share_core), 1)
    freq_core_ = frequency_core(table, k)
    report = overlap_report(freq_core_, share_core)
    out = _outdir(args)
    if args.format == "json":
        path = out / "overlap.json"
        write_text_atomic(path, dump_json(overlap_to_json(report)))
    else:
        path = out / "overlap.csv"
        write_text_atomic(path, overlap_to_csv(report))
    params = {
        "store": str(args.store),
        "window": window.label,
        "k": k,
        "threshold": args.threshold,
        "format": args.format,
    }
    RunManifest("overlap", params, [str(args.store)], str(out), store_hash, created).write(out)
    print(path)
    return 0


def cmd_correlate(args) -> int:
    created = _utcnow()
    store, store_hash = _load_store_arg(args)
    window = _parse_window(args.window)
    table = aggregate_window(store, window)
    if args.k is not None:
        idx = table.rank_order[: args.k]
        xs = table.rel_freq[idx].tolist()
        ys = table.volume_share[idx].tolist()
    else:
        xs = table.rel_freq.tolist()
        ys = table.volume_share.tolist()
    r = pearson_correlation(xs, ys)
    out = _outdir(args)
    path = _write_mapping(
        out, "correlation", "correlation", {"pearson_r": r, "n_words": len(xs)}, args.format
    )
    params = {
        "store": str(args.store),
        "window": window.label,
        "k": args.k,
        "format": args.format,
    }
    RunManifest("correlate", params, [str(args.store)], str(out), store_hash, created).write(out)
    print(path)
    return 0


def cmd_pos(args) -> int:
    created = _utcnow()
    store, store_hash = _load_store_arg(args)
    window = _parse_window(args.window)
    core = _extract_core(aggregate_window(store, window), args)
    out = _outdir(args)
    comp = {tag.name: share for tag, share in pos_composition(core).items()}
    paths = [_write_mapping(out, "pos_composition", "pos_composition", comp, args.format)]
    if args.window2:
        window2 = _parse_window(args.window2)
        core2 = _extract_core(aggregate_window(store, window2), args)
        drop = {tag.name: v for tag, v in pos_dropout(core, core2).items()}
        paths.append(_write_mapping(out, "pos_dropout", "pos_dropout", drop, args.format))
    params = {
        "store": str(args.store),
        "window": window.label,
        "window2": args.window2,
        "k": args.k,
        "threshold": args.threshold,
        "format": args.format,
    }
    RunManifest("pos", params, [str(args.store)], str(out), store_hash, created).write(out)
    for p in paths:
        print(p)
    return 0


def cmd_transition(args) -> int:
    created = _utcnow()
    store, store_hash = _load_store_arg(args)
    w_old = _parse_window(args.window)
    w_new = _parse_window(args.window2)
    old = _extract_core(aggregate_window(store, w_old), args)
    new = _extract_core(aggregate_window(store, w_new), args)
    partition = partition_core_transition(old, new)
    years = _parse_years(args.years) if args.years else store.years
    out = _outdir(args)
    write_text_atomic(out / "transition.json", dump_json(partition_to_json(partition)))
    paths = [out / "transition.json"]
    for name, words in (
        ("both", partition.both),
        ("only_old", partition.only_old),
        ("only_new", partition.only_new),
    ):
        series = coverage_series(words, store, years, name=name)
        paths.append(_write_series(out, f"coverage_{name}", series, args.format))
    params = {
        "store": str(args.store),
        "window": w_old.label,
        "window2": w_new.label,
        "k": args.k,
        "threshold": args.threshold,
        "years": [min(years), max(years)],
        "format": args.format,
    }
    RunManifest("transition", params, [str(args.store)], str(out), store_hash, created).write(out)
    for p in paths:
        print(p)
    return 0


def cmd_group(args) -> int:
    created = _utcnow()
    store, store_hash = _load_store_arg(args)
    words_path = _resolve_input(args.words)
    words = [
        line.strip()
        for line in words_path.read_text(encoding="utf-8").splitlines()
        if line.strip() and not line.startswith("#")
    ]
    years = _parse_years(args.years) if args.years else store.years
    series = group_frequency_series(words, store, years, name=args.name)
    out = _outdir(args)
    path = _write_series(out, f"group_{args.name}", series, args.format)
    params = {
        "store": str(args.store),
        "words": str(args.words),
        "name": args.name,
        "years": [min(years), max(years)],
        "format": args.format,
    }
    RunManifest("group", params, [str(args.store)], str(out), store_hash, created).write(out)
    print(path)
    return 0


def _read_series_csv(path: Path) -> list[tuple[float, float]]:
    points = []
    lines = path.read_text(encoding="utf-8").splitlines()
    for line in lines[1:]:
        x_s, y_s = line.split(",", 1)
        points.append((float(x_s), float(y_s)))
    return points


def _read_mapping_csv(path: Path) -> dict[str, float]:
    items: dict[str, float] = {}
    for line in path.read_text(encoding="utf-8").splitlines()[1:]:
        k, v = line.split(",", 1)
        try:
            items[k] = float(v)
        except ValueError:
            continue
    return items


def cmd_report(args) -> int:
    created = _utcnow()
    run_dirs = [_resolve_input(d) for d in args.runs]
    manifests = []
    for d in run_dirs:
        mpath = Path(d) / MANIFEST_NAME
        if not mpath.exists():
            raise LexcoreError(f"{d}: no {MANIFEST_NAME}; not a lexcore run directory")
        manifests.append(json.loads(mpath.read_text(encoding="utf-8")))
    hashes = {m.get("store_hash") for m in manifests}
    if len(hashes) > 1:
        raise LexcoreError(
            "mismatched manifests: run directories were produced from different stores"
        )
    timestamp = None if args.no_timestamp else _utcnow()
    out = Path(args.out) if args.out else Path(run_dirs[0])
    out.mkdir(parents=True, exist_ok=True)

    # Collect chartable CSVs; labels get a run-dir prefix when the same
    # stem occurs in several runs (e.g. two pos_composition runs).
    turnovers: list[tuple[str, Path]] = []
    lines: list[tuple[str, Path]] = []
    mappings: dict[str, list[tuple[str, Path]]] = {"pos_composition": [], "pos_dropout": []}
    for d in run_dirs:
        for path in sorted(Path(d).glob("*.csv")):
            stem = path.stem
            if stem.startswith("turnover"):
                turnovers.append((stem, path))
            elif stem.startswith(("coverage", "group")):
                lines.append((stem, path))
            elif stem.startswith("pos_composition"):
                mappings["pos_composition"].append((stem, path))
            elif stem.startswith("pos_dropout"):
                mappings["pos_dropout"].append((stem, path))

    def unique_label(stem: str, path: Path, pairs) -> str:
        clashes = sum(1 for s, _ in pairs if s == stem)
        return f"{path.parent.name}/{stem}" if clashes > 1 else stem

    written = []

    def emit(target: Path, svg: str) -> None:
        write_text_atomic(target, svg)
        written.append(target)

    for stem, path in turnovers:
        points = _read_series_csv(path)
        svg = bar_chart(
            [f"{int(x)}" for x, _ in points],
            [("dropout share", [y for _, y in points])],
            title="Core turnover per window",
            timestamp=timestamp,
        )
        name = unique_label(stem, path, turnovers).replace("/", "_")
        emit(out / f"{name}.svg", svg)

    if lines:
        series = [
            (unique_label(stem, path, lines), _read_series_csv(path)) for stem, path in lines
        ]
        emit(out / "coverage.svg", line_chart(series, title="Coverage dynamics", timestamp=timestamp))

    for kind, found in mappings.items():
        if not found:
            continue
        tables = [(unique_label(stem, path, found), _read_mapping_csv(path)) for stem, path in found]
        labels: list[str] = []
        for _, items in tables:
            labels.extend(k for k in items if k not in labels)
        groups = [(name, [items.get(k, 0.0) for k in labels]) for name, items in tables]
        emit(
            out / f"{kind}.svg",
            bar_chart(labels, groups, title=kind.replace("_", " "), timestamp=timestamp),
        )

    if not written:
        raise LexcoreError("no chartable CSV outputs found in the given run directories")
    params = {"runs": [str(d) for d in run_dirs], "no_timestamp": args.no_timestamp}
    RunManifest(
        "report", params, [str(d) for d in run_dirs], str(out), hashes.pop() if hashes else None, created
    ).write(out)
    for p in written:
        print(p)
    return 0


# ---------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser, *, store=True, window=False, core=False, fmt=True):
    if store:
        p.add_argument("--store", required=True, help="path to a store file built by 'ingest'")
    if window:
        p.add_argument("--window", required=True, help="'START:END', 'core1800' or 'core2000'")
    if core:
        p.add_argument("--k", type=int, help="frequency-core size")
        p.add_argument("--threshold", type=float, help="book-share core threshold in (0,1]")
    p.add_argument("--out", required=True, help="output directory")
    if fmt:
        p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lexcore",
        description="Vocabulary-core dynamics from yearly 1-gram counts.",
    )
    parser.add_argument("--version", action="version", version=f"lexcore {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("ingest", help="parse shards into a store file")
    p.add_argument("shards", nargs="+", help="shard TSV files (optionally .gz)")
    p.add_argument("--config", required=True, help="run config JSON")
    p.add_argument("--volumes", help="per-year total-volumes sidecar")
    p.add_argument("--threads", type=int, default=1, help="parallel shard parsers")
    p.add_argument("--out", required=True, help="output directory for store.lxst")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("synth", help="generate a synthetic corpus with known truth")
    p.add_argument("--preset", help=f"one of: {', '.join(sorted(PRESETS))}")
    p.add_argument("--config", help="synth config JSON")
    p.add_argument("--gzip", action="store_true", help="write gzip-compressed shards")
    p.add_argument("--shard-years", type=int, default=25, help="years per shard file")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("core", help="extract and export one vocabulary core")
    _add_common(p, window=True, core=True, fmt=False)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("turnover", help="dropout between consecutive window cores")
    p.add_argument("--windows", default="standard", help="'standard' or 'a:b,c:d,...'")
    p.add_argument("--width", type=int, default=50, help="standard window width in years")
    _add_common(p, core=True)
    p.set_defaults(func=cmd_turnover)

    p = sub.add_parser("coverage", help="text coverage of one core over the years")
    p.add_argument("--years", help="'START:END' (default: store range)")
    _add_common(p, window=True, core=True)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("overlap", help="frequency core vs book-share core")
    p.add_argument("--threshold", type=float, required=True, help="book-share threshold")
    p.add_argument("--k", type=int, help="frequency-core size (default: book-share core size)")
    p.add_argument(
        "--window",
        default="core2000",
        help="'START:END', 'core1800' or 'core2000' (default: core2000)",
    )
    _add_common(p)
    p.set_defaults(func=cmd_overlap)

    p = sub.add_parser("correlate", help="Pearson r of frequency vs book share")
    p.add_argument("--k", type=int, help="restrict to the top-K words")
    _add_common(p, window=True)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("pos", help="POS composition (and dropout) of a core")
    p.add_argument("--window2", help="second window for POS dropout")
    _add_common(p, window=True, core=True)
    p.set_defaults(func=cmd_pos)

    p = sub.add_parser("transition", help="kept/lost/gained partition and coverage")
    p.add_argument("--window2", required=True, help="second window 'START:END'")
    p.add_argument("--years", help="'START:END' (default: store range)")
    _add_common(p, window=True, core=True)
    p.set_defaults(func=cmd_transition)

    p = sub.add_parser("group", help="total frequency series of a word list")
    p.add_argument("--words", required=True, help="file with one word per line")
    p.add_argument("--name", default="group", help="series name")
    p.add_argument("--years", help="'START:END' (default: store range)")
    _add_common(p)
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("report", help="render SVG figures from run outputs")
    p.add_argument("runs", nargs="+", help="run directories with manifest.json")
    p.add_argument("--out", help="output directory (default: first run dir)")
    p.add_argument("--no-timestamp", action="store_true", help="omit the embedded timestamp")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (LexcoreError, OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main())
