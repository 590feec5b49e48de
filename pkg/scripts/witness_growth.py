#!/usr/bin/env python3
"""Growth of the witness-map cost ratio with the graph order.

Draws random connected 3-regular graphs at several sizes, builds the
truncated-distance witness into the sup-norm grid for a huge target
cardinality, and records the per-size ratio medians.  The medians should
increase with n while every edge cost stays at most 1.

Usage: python scripts/witness_growth.py [--sizes 64,256,1024] [--trials 10]
       [--seed 3] [--logN 230.2585] [--outdir results]
"""
import argparse
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from nlgap.embeddings import witness_certificate
from nlgap.graphs import random_connected_regular
from nlgap.io import write_manifest
from nlgap.svg import emit_svg


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,256,1024")
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--logN", type=float, default=100 * math.log(10.0))
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    sizes = [int(x) for x in args.sizes.split(",")]

    rows = ["n,trial,ratio,ave,dirichlet,max_edge_cost"]
    medians = []
    for n in sizes:
        ratios = []
        for t in range(args.trials):
            g = random_connected_regular(n, 3, seed=args.seed + 1000 * n + t)
            r = witness_certificate(g, args.logN)
            assert r.max_edge_cost <= 1
            ratios.append(r.ratio)
            rows.append(f"{n},{t},{r.ratio!r},{r.ave!r},{r.dirichlet!r},{r.max_edge_cost}")
        med = sorted(ratios)[len(ratios) // 2]
        medians.append((math.log(n), med))
        print(f"n={n:5d}  median ratio {med:.4f}")

    (outdir / "witness_growth.csv").write_text("\n".join(rows) + "\n")
    (outdir / "witness_growth.svg").write_text(
        emit_svg([("median ratio", medians)], title="witness ratio vs log n",
                 config_echo=f"sizes={args.sizes} trials={args.trials} seed={args.seed}"))
    write_manifest(outdir / "witness_growth.manifest", sizes=args.sizes,
                   trials=args.trials, seed=args.seed, logN=args.logN)
    increasing = all(a[1] < b[1] for a, b in zip(medians, medians[1:]))
    print("median strictly increasing:", increasing)
    return 0 if increasing else 2


if __name__ == "__main__":
    sys.exit(main())
