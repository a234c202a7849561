#!/usr/bin/env python3
"""Seeded Erdos-Renyi study of the antisnowflaking bound t(p) >= p/(p-1).

Thin wrapper over `modmetrics experiment` with the defaults used in the
write-up: 50 connected G(10, q) graphs at expected degree 6, the standard
p grid, CSV to results/er_experiment.csv.
"""

import pathlib
import sys

from modmetrics.cli import main

if __name__ == "__main__":
    out = pathlib.Path(__file__).resolve().parent.parent / "results"
    out.mkdir(exist_ok=True)
    argv = [
        "experiment",
        "--graphs", "50",
        "--nodes", "10",
        "--degree", "6",
        "--seed", "0",
        "--out", str(out / "er_experiment.csv"),
    ] + sys.argv[1:]
    sys.exit(main(argv))
