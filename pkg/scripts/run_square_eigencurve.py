#!/usr/bin/env python3
"""Schoenberg eigenvalue curve for the two-parameter square family.

Sweeps the diagonal ratio beta, writes the three eigenvalues of the
embedding Gram form to results/square_eigencurve.csv, and reports the
bracket where the smallest one changes sign (the planarity boundary,
beta = sqrt(2)).
"""

import pathlib
import sys

from modmetrics.cli import main

if __name__ == "__main__":
    out = pathlib.Path(__file__).resolve().parent.parent / "results"
    out.mkdir(exist_ok=True)
    argv = [
        "eigencurve",
        "--start", "0.1",
        "--stop", "1.95",
        "--step", "0.05",
        "--out", str(out / "square_eigencurve.csv"),
    ] + sys.argv[1:]
    sys.exit(main(argv))
