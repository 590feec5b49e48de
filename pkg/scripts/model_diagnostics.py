#!/usr/bin/env python3
"""Diagnostic frequencies for the typical-vertex-set events on the staged
random-graph model.

Runs the deletion/seed statistics at the nominal parameterization
ell0 = floor(dn/(Km)), k0 = floor(Kn/(d-1)^m) and reports how often the
three size events hold.  No pass/fail: the constants behind the events are
asymptotic, so at desk scale the rows are evidence, not a verdict.  When
the nominal k0 exceeds n the seed set is clamped to all vertices.

Usage: python scripts/model_diagnostics.py [--n 2000] [--d 3] [--K 20]
       [--m 4] [--trials 20] [--seed 5] [--outdir results]
"""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from nlgap.io import write_manifest
from nlgap.models import typical_sets_experiment


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--K", type=float, default=20.0)
    ap.add_argument("--m", type=int, default=4)
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args()

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = typical_sets_experiment(args.n, args.d, args.K, args.m,
                                   trials=args.trials, seed=args.seed)
    lines = ["trial,v,v_prime,v_dprime,ell0,k0,f1,f2,f3"]
    lines += [f"{r.trial},{r.v_size},{r.v_prime_size},{r.v_dprime_size},"
              f"{r.ell0},{r.k0},{int(r.f1)},{int(r.f2)},{int(r.f3)}" for r in rows]
    for name, hit in (("f1", sum(r.f1 for r in rows)),
                      ("f2", sum(r.f2 for r in rows)),
                      ("f3", sum(r.f3 for r in rows))):
        print(f"{name}: {hit}/{len(rows)}")
    lines.append(f"frequency,{sum(r.f1 for r in rows) / len(rows)!r},"
                 f"{sum(r.f2 for r in rows) / len(rows)!r},"
                 f"{sum(r.f3 for r in rows) / len(rows)!r},,,,,")
    (outdir / "model_diagnostics.csv").write_text("\n".join(lines) + "\n")
    write_manifest(outdir / "model_diagnostics.manifest", n=args.n, d=args.d,
                   K=args.K, m=args.m, trials=args.trials, seed=args.seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
