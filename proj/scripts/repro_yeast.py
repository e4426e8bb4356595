#!/usr/bin/env python3
"""Reproduce the yeast protein-localization clustering comparison.

The analysis clusters a two-class subset of the UCI "Yeast" dataset
(classes CYT and ME3, variables mcg, alm, vac) with both SAL and Gaussian
mixtures and checks the qualitative orderings that distinguish them:

  1. the ICL-selected SAL model has G = 2 components;
  2. the SAL partition agrees with the true classes better than the best
     Gaussian partition (higher adjusted Rand index);
  3. a 2-component Gaussian mixture splits the data by skew tail rather
     than by class, giving a negative adjusted Rand index.

Exact log-likelihoods and ARIs depend on restart randomness, so only the
orderings are asserted, not specific values.

Usage:
  1. Download the UCI Machine Learning Repository "Yeast" data file
     (yeast.data, whitespace-separated, 1484 rows) and place it at
     data/yeast.data relative to the repository root.
  2. Build the project (see README.md), then run:
       python3 scripts/repro_yeast.py [--salmix build/salmix] [--seed 1]

Exit status 0 means every assertion held.
"""

import argparse
import json
import pathlib
import subprocess
import sys
import tempfile

COLUMNS = ["mcg", "gvh", "alm", "mit", "erl", "pox", "vac", "nuc"]
KEPT = ["mcg", "alm", "vac"]
CLASSES = {"CYT": 1, "ME3": 2}


def prepare_csv(raw_path: pathlib.Path, out_path: pathlib.Path) -> int:
    rows = []
    for line in raw_path.read_text().splitlines():
        parts = line.split()
        if len(parts) != 10:
            continue
        name, values, label = parts[0], parts[1:9], parts[9]
        if label not in CLASSES:
            continue
        record = dict(zip(COLUMNS, values))
        rows.append([record[c] for c in KEPT] + [str(CLASSES[label])])
    with open(out_path, "w") as f:
        f.write(",".join(KEPT) + ",label\n")
        for r in rows:
            f.write(",".join(r) + "\n")
    return len(rows)


def run_cluster(salmix: str, csv_path: pathlib.Path, out_dir: pathlib.Path, seed: int) -> dict:
    subprocess.run(
        [salmix, "cluster", "--input", str(csv_path), "--model", "both",
         "--g-min", "1", "--g-max", "3", "--seed", str(seed),
         "--out-dir", str(out_dir)],
        check=True,
    )
    summary = json.loads((out_dir / "sweep_summary.json").read_text())
    fits = {}
    for fit in summary["fits"]:
        report = json.loads((out_dir / fit["report"]).read_text())
        fits[(fit["model_kind"], fit["g"])] = {
            "icl": fit["icl"],
            "ari": report.get("ari"),
        }
    return fits


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--salmix", default="build/salmix", help="path to the salmix binary")
    ap.add_argument("--data", default="data/yeast.data", help="path to the UCI yeast.data file")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    raw = pathlib.Path(args.data)
    if not raw.exists():
        print(f"SKIP: {raw} not found; download the UCI yeast data file first.")
        return 0

    with tempfile.TemporaryDirectory() as tmp:
        tmp_path = pathlib.Path(tmp)
        csv_path = tmp_path / "yeast_cyt_me3.csv"
        n = prepare_csv(raw, csv_path)
        print(f"prepared {n} CYT/ME3 rows with variables {KEPT}")
        fits = run_cluster(args.salmix, csv_path, tmp_path / "fits", args.seed)

    sal = {g: f for (kind, g), f in fits.items() if kind == "sal"}
    gmm = {g: f for (kind, g), f in fits.items() if kind == "gaussian"}
    sal_best_g = max(sal, key=lambda g: sal[g]["icl"])
    gmm_best_g = max(gmm, key=lambda g: gmm[g]["icl"])

    checks = [
        ("SAL ICL selects G=2", sal_best_g == 2),
        ("SAL ARI beats best Gaussian ARI",
         sal[sal_best_g]["ari"] > gmm[gmm_best_g]["ari"]),
        ("2-component Gaussian ARI is negative", gmm[2]["ari"] < 0),
    ]
    failures = 0
    for name, ok in checks:
        print(f"[{'PASS' if ok else 'FAIL'}] {name}")
        failures += not ok
    print(f"SAL g={sal_best_g} ari={sal[sal_best_g]['ari']:.4f}; "
          f"Gaussian g={gmm_best_g} ari={gmm[gmm_best_g]['ari']:.4f}; "
          f"Gaussian g=2 ari={gmm[2]['ari']:.4f}")
    return failures


if __name__ == "__main__":
    sys.exit(main())
