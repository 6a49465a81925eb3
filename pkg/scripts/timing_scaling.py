#!/usr/bin/env python3
"""Exact-vs-approximate runtime scaling: bench a range of sample counts and
fit log-log compute-time exponents."""

import argparse
import json
from pathlib import Path

import numpy as np

from mtpsd.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--powers", default="10-18",
                    help="range of log2(n), e.g. 10-18")
    ap.add_argument("--exact-max", type=int, default=2 ** 14)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--out", default="out/bench.json")
    args = ap.parse_args()

    lo, hi = (int(tok) for tok in args.powers.split("-"))
    n_list = ",".join(str(2 ** p) for p in range(lo, hi + 1))
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    rc = cli_main(["bench", "--n-list", n_list,
                   "--exact-max", str(args.exact_max),
                   "--trials", str(args.trials), "--output", args.out])
    if rc != 0:
        return rc

    rows = json.loads(Path(args.out).read_text())["rows"]
    for label, sel in [("exact", lambda r: r["path"] == "exact"),
                       ("approx eps=1e-08",
                        lambda r: r["path"] == "approx" and r["epsilon"] == 1e-8)]:
        sub = [r for r in rows if sel(r)]
        if len(sub) < 2:
            continue
        p = np.polyfit(np.log([r["n"] for r in sub]),
                       np.log([max(r["compute_s"], 1e-9) for r in sub]), 1)[0]
        print(f"{label}: fitted compute-time exponent p = {p:.2f} "
              f"over n = {sub[0]['n']}..{sub[-1]['n']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
