#!/usr/bin/env python3
"""Stub: lay out (but do not download) the real English 1-gram dataset.

This project deliberately ships no downloader.  The full dataset is
tens of gigabytes; fetch it yourself with your preferred tool and place
the files where this script expects them, e.g.::

    DATA=data/eng-1grams
    BASE=http://storage.googleapis.com/books/ngrams/books
    for l in a b c d e f g h i j k l m n o p q r s t u v w x y z; do
        curl -O $BASE/googlebooks-eng-all-1gram-20120701-$l.gz
    done
    curl -O $BASE/googlebooks-eng-all-totalcounts-20120701.txt

Expected layout checked by this script:

    <data-dir>/googlebooks-eng-all-1gram-20120701-<a..z>.gz
    <data-dir>/googlebooks-eng-all-totalcounts-20120701.txt

Exit code 0 when everything is present, 1 otherwise.
"""

from __future__ import annotations

import argparse
import string
import sys
from pathlib import Path

SHARD_TEMPLATE = "googlebooks-eng-all-1gram-20120701-{letter}.gz"
TOTALS_NAME = "googlebooks-eng-all-totalcounts-20120701.txt"


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("data_dir", type=Path, help="directory that should hold the shards")
    args = parser.parse_args(argv)

    missing = []
    for letter in string.ascii_lowercase:
        path = args.data_dir / SHARD_TEMPLATE.format(letter=letter)
        if not path.exists():
            missing.append(path.name)
    if not (args.data_dir / TOTALS_NAME).exists():
        missing.append(TOTALS_NAME)

    if missing:
        print(f"{len(missing)} file(s) missing under {args.data_dir}:", file=sys.stderr)
        for name in missing:
            print(f"  {name}", file=sys.stderr)
        print("\nThis is a stub: download the files manually (see --help).", file=sys.stderr)
        return 1
    print(f"all 1-gram shards and the total-counts file present in {args.data_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
