#!/usr/bin/env python3
"""Dump every compiled-in fixture as a JSON document.

Useful as a starting point for hand-written inputs: each file re-loads
through the same schema the CLI accepts.
"""

import argparse
import json
import pathlib
import sys

from ratsynth.fixtures import FIXTURES, load_fixture
from ratsynth.jsonio import from_json, to_json


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="fixtures-json",
                        help="output directory (created if missing)")
    args = parser.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in sorted(FIXTURES):
        doc = to_json(load_fixture(name))
        if from_json(doc) != load_fixture(name):
            print(f"round-trip failure for {name}", file=sys.stderr)
            return 1
        path = out / f"{name}.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        print(f"wrote {path} ({doc['format']})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
