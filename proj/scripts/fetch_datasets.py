#!/usr/bin/env python3
# Copyright 2026 The irkit Authors.
# Licensed under the Apache License, Version 2.0.
"""Builds the four benchmark CSVs into a cache directory with SHA-256 pinning.

Sources:
  wine, breast_cancer, diabetes  -- files bundled with scikit-learn
  housing                        -- MASS::Boston CSV (e.g. from the pydataset
                                    sdist), passed with --boston-csv

Usage:
  fetch_datasets.py [--out DIR] [--boston-csv PATH] [--verify-only]

DIR defaults to $IRKIT_CACHE, then ./data.
"""
import argparse
import csv
import gzip
import hashlib
import io
import os
import sys

PINNED = {
    "wine.csv": "23e4194a5c52a750cd051677786d41f8de435bb6fc210f597f07080b5d910ef7",
    "breast_cancer.csv": "5c3e458a6f8780b7dd2bc07e65dc975d149b6f8324cb7442a6ead4c5c9858d07",
    "diabetes.csv": "461ee313b848f6288ff3f3032b02846ca3261fcb4809542d156564ecf718c0e8",
    "housing.csv": "b9f88f3463a208dadd78546f0fb9ddacfa4897b4c92dd1b8269734f000fe377c",
}


def sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def write_csv(path, header, rows):
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            f.write(",".join(row) + "\n")


def sklearn_dir():
    import sklearn
    return os.path.join(os.path.dirname(sklearn.__file__), "datasets", "data")


def build_wine(out):
    names = ["alcohol", "malic_acid", "ash", "alcalinity_of_ash", "magnesium",
             "total_phenols", "flavanoids", "nonflavanoid_phenols",
             "proanthocyanins", "color_intensity", "hue",
             "od280_od315_of_diluted_wines", "proline"]
    with open(os.path.join(sklearn_dir(), "wine_data.csv")) as f:
        lines = list(csv.reader(f))[1:]
    rows = [r[:13] + [r[13]] for r in lines]
    write_csv(out, names + ["label"], rows)


def build_cancer(out):
    with open(os.path.join(sklearn_dir(), "breast_cancer.csv")) as f:
        lines = list(csv.reader(f))[1:]
    from sklearn.datasets import load_breast_cancer
    names = [n.replace(" ", "_") for n in load_breast_cancer().feature_names]
    rows = [r[:30] + [r[30]] for r in lines]
    write_csv(out, names + ["label"], rows)


def build_diabetes(out):
    d = sklearn_dir()
    with gzip.open(os.path.join(d, "diabetes_data_raw.csv.gz"), "rt") as f:
        x = [line.split() for line in f if line.strip()]
    with gzip.open(os.path.join(d, "diabetes_target.csv.gz"), "rt") as f:
        y = [line.split()[0] for line in f if line.strip()]
    names = ["age", "sex", "bmi", "bp", "s1", "s2", "s3", "s4", "s5", "s6"]
    fmt = lambda v: repr(float(v)).rstrip("0").rstrip(".") if "." in repr(float(v)) else v
    rows = [[fmt(v) for v in r] + [fmt(t)] for r, t in zip(x, y)]
    write_csv(out, names + ["target"], rows)


def build_housing(out, boston_csv):
    if boston_csv is None:
        raise SystemExit("housing: pass --boston-csv pointing at MASS Boston.csv")
    with open(boston_csv) as f:
        lines = list(csv.reader(f))
    header = lines[0][1:]
    rows = [r[1:] for r in lines[1:]]
    write_csv(out, header, rows)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=os.environ.get("IRKIT_CACHE", "data"))
    ap.add_argument("--boston-csv")
    ap.add_argument("--verify-only", action="store_true")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    builders = {
        "wine.csv": build_wine,
        "breast_cancer.csv": build_cancer,
        "diabetes.csv": build_diabetes,
        "housing.csv": lambda p: build_housing(p, args.boston_csv),
    }
    ok = True
    for name, build in builders.items():
        path = os.path.join(args.out, name)
        if not args.verify_only and not os.path.exists(path):
            build(path)
        digest = sha256(path)
        want = PINNED[name]
        status = "ok" if want is None or want == digest else "MISMATCH"
        ok &= status == "ok"
        print(f"{name} {digest} {status}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
