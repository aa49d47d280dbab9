"""Write a seeded certificate corpus to a JSON file for `laurentkit certify`.

Usage: python scripts/emit_certificates.py OUT.json [--ring gf2 ...] [--seed N] [--rounds K]
"""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from laurentkit.corpus import certificate_corpus
from laurentkit.rings import ring_from_json


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("out")
    ap.add_argument("--ring", action="append", help="ring preset (repeatable; default gf2, gf4-frob, z)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--rounds", type=int, default=2)
    args = ap.parse_args()
    certs = []
    for name in args.ring or ["gf2", "gf4-frob", "z"]:
        ring = ring_from_json(name)
        certs.extend(c.to_json() for c in certificate_corpus(ring, args.seed, args.rounds))
    Path(args.out).write_text(json.dumps(certs, sort_keys=True) + "\n")
    print(f"wrote {len(certs)} certificates to {args.out}")


if __name__ == "__main__":
    main()
