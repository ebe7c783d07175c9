#!/usr/bin/env python3
"""Run every pipeline stage on the bundled fixture and show the manifest.

Useful as a smoke check after changes: it exercises filtering, series,
correlogram, narrowing, term ranking, event filtering, the source
graph, and clustering in one go.
"""

from __future__ import annotations

import argparse
import tempfile
from pathlib import Path

from opflow.cli import MANIFEST_TXT, main as opflow_main

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", type=Path, default=None)
    parser.add_argument("--threshold", type=float, default=0.6)
    args = parser.parse_args()
    out = args.out_dir or Path(tempfile.mkdtemp(prefix="opflow-demo-"))
    rc = opflow_main(
        [
            "pipeline",
            "--corpus", str(FIXTURES / "corpus.jsonl"),
            "--query", "protest,referendum,petition,terrorist act",
            "--stopwords", str(FIXTURES / "stopwords.txt"),
            "--threshold", str(args.threshold),
            "--out-dir", str(out),
        ]
    )
    if rc != 0:
        print(f"pipeline failed with exit status {rc}")
        return rc
    print(f"\nartifacts in {out}:\n")
    print((out / MANIFEST_TXT).read_text(encoding="utf-8"))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
