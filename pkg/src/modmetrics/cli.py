"""Command-line front end.

Subcommands: dist (one pair), matrix (all pairs), experiment (seeded ER
exponent study), embed (Schoenberg check + coordinates), validate
(closed-form oracle battery), bench (grid-graph timings).

Exit codes: 0 success, 2 input/parse error, 3 solver failure,
4 validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .embedding import embeddability, square_eigencurve
from .graph import (
    Graph,
    GraphFormatError,
    build_graph,
    complete_graph,
    cycle_graph,
    erdos_renyi_connected,
    load_graph,
    parallel_paths,
    path_graph,
)
from .metrics import (
    DistanceMatrix,
    distance_matrix,
    default_p_grid,
    er_experiment,
    triple_exponents,
)
from .solver import SolverConfig, SolverError, modulus
from .rng import SplitMix64
from . import __version__

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_SOLVE = 3
EXIT_VALIDATION = 4


def grid_graph(rows: int, cols: int | None = None) -> Graph:
    """rows x cols lattice with row-major "r,c" labels."""
    cols = rows if cols is None else cols
    if rows < 1 or cols < 1 or rows * cols < 2:
        raise ValueError("grid needs at least two nodes")
    labels = [f"{r},{c}" for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                edges.append((i, i + 1))
            if r + 1 < rows:
                edges.append((i, i + cols))
    return build_graph(labels, edges)


def parse_p(text: str) -> float:
    if text.strip().lower() in ("inf", "infinity", "oo"):
        return math.inf
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad p value {text!r}") from None
    if p < 1.0:
        raise argparse.ArgumentTypeError("p must be >= 1 (or inf)")
    return p


def resolve_graph(spec: str) -> Graph:
    """A generator spec (kind:args) or a path to an edge-list/JSON file."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "path" and rest:
            return path_graph(int(rest))
        if kind == "cycle" and rest:
            return cycle_graph(int(rest))
        if kind == "complete" and rest:
            return complete_graph(int(rest))
        if kind == "grid" and rest:
            dims = rest.lower().split("x")
            if len(dims) == 1:
                return grid_graph(int(dims[0]))
            return grid_graph(int(dims[0]), int(dims[1]))
        if kind == "parallel" and rest:
            k, hops = rest.split(",")
            return parallel_paths(int(k), int(hops))
        if kind == "er" and rest:
            n, deg, seed = rest.split(",")
            return erdos_renyi_connected(int(n), float(deg), int(seed))
    except (ValueError, GraphFormatError) as exc:
        if isinstance(exc, GraphFormatError):
            raise
        raise GraphFormatError(f"bad generator spec {spec!r}: {exc}") from None
    return load_graph(spec)


def scalar_str(x) -> str:
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return "inf" if math.isinf(x) else x
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _meta_line(**kv) -> str:
    parts = [f"# modmetrics v{__version__}"]
    parts += [f"{k}={v}" for k, v in kv.items()]
    return " ".join(parts)


def _open_out(out):
    if out in (None, "-"):
        return sys.stdout, False
    return open(out, "w", encoding="utf-8", newline=""), True


def _p_label(p: float) -> str:
    return "inf" if math.isinf(p) else f"{p:g}"


# ---------------------------------------------------------------------------
# dist


def cmd_dist(ns) -> int:
    g = resolve_graph(ns.graph)
    a, b = g.index(ns.a), g.index(ns.b)
    cfg = SolverConfig(tolerance=ns.tol)
    res = modulus(g, a, b, ns.p, cfg, ns.method)
    if a == b:
        d = 0.0
    elif math.isinf(ns.p):
        d = 1.0 / res.value
    else:
        d = res.value ** (-1.0 / ns.p)
    if ns.format == "json":
        doc = {
            "p": _jsonable(ns.p), "a": ns.a, "b": ns.b,
            "distance": _jsonable(d),
            "modulus": _jsonable(res.value),
            "lower_bound": _jsonable(res.lower_bound),
            "upper_bound": _jsonable(res.upper_bound),
            "iterations": res.iterations,
            "active_paths": res.active_paths,
            "method": res.method,
            "converged": res.converged,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(f"d_{_p_label(ns.p)}({ns.a}, {ns.b}) = {scalar_str(d)}")
        print(
            f"modulus = {scalar_str(res.value)}  "
            f"bracket [{scalar_str(res.lower_bound)}, {scalar_str(res.upper_bound)}]  "
            f"method={res.method} iterations={res.iterations} "
            f"active_paths={res.active_paths} converged={res.converged}"
        )
    if not res.converged:
        print("warning: solver hit its iteration budget; bracket still valid",
              file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# matrix


def _pair_worker(task):
    g, a, b, p, tol, method = task
    from .metrics import dp_distance

    return dp_distance(g, a, b, p, SolverConfig(tolerance=tol), method)


def cmd_matrix(ns) -> int:
    g = resolve_graph(ns.graph)
    cfg = SolverConfig(tolerance=ns.tol)
    pairwise = not (
        math.isinf(ns.p) or ns.p == 1.0 or (ns.p == 2.0 and ns.method == "auto")
    )
    if ns.jobs > 1 and pairwise:
        pairs = [(a, b) for a in range(g.n) for b in range(a + 1, g.n)]
        tasks = [(g, a, b, ns.p, ns.tol, ns.method) for a, b in pairs]
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            dists = list(pool.map(_pair_worker, tasks))
        vals = np.zeros((g.n, g.n))
        for (a, b), d in zip(pairs, dists):
            vals[a, b] = vals[b, a] = d
        m = DistanceMatrix(p=ns.p, values=vals, labels=g.labels)
    else:
        m = distance_matrix(g, ns.p, cfg, ns.method)
    fh, close = _open_out(ns.out)
    try:
        if ns.format == "json":
            doc = {
                "p": _jsonable(ns.p), "t": m.t, "labels": list(m.labels),
                "values": _jsonable(m.values),
            }
            fh.write(json.dumps(doc, indent=2) + "\n")
        else:
            fh.write(_meta_line(p=_p_label(ns.p), t=m.t, tol=ns.tol,
                                method=ns.method) + "\n")
            w = csv.writer(fh)
            w.writerow([""] + list(m.labels))
            for i, lab in enumerate(m.labels):
                w.writerow([lab] + [scalar_str(x) for x in m.values[i]])
    finally:
        if close:
            fh.close()
    return EXIT_OK


def load_distance_matrix(path: str) -> DistanceMatrix:
    """Read back a matrix CSV produced by cmd_matrix."""
    p = math.nan
    rows = []
    labels = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("#"):
                for tok in line.split():
                    if tok.startswith("p="):
                        p = parse_p(tok[2:])
                continue
            rec = next(csv.reader([line]))
            if labels is None:
                labels = rec[1:]
            elif len(rec) > 1:
                rows.append([float(x) for x in rec[1:]])
    if labels is None or not rows:
        raise GraphFormatError(f"{path}: not a distance-matrix CSV")
    vals = np.asarray(rows)
    if vals.shape != (len(labels), len(labels)):
        raise GraphFormatError(f"{path}: matrix is not square")
    return DistanceMatrix(p=p, values=vals, labels=tuple(labels))


# ---------------------------------------------------------------------------
# experiment


def _experiment_worker(task):
    n_nodes, degree, gseed, p_grid, tol = task
    g = erdos_renyi_connected(n_nodes, degree, gseed)
    return triple_exponents(g, np.asarray(p_grid), SolverConfig(tolerance=tol))


def parse_p_grid(text: str) -> np.ndarray:
    if ":" in text:
        lo, hi, count = text.split(":")
        return np.linspace(float(lo), float(hi), int(count))
    return np.asarray([float(t) for t in text.split(",")])


def cmd_experiment(ns) -> int:
    grid = parse_p_grid(ns.p_grid) if ns.p_grid else default_p_grid()
    cfg = SolverConfig(tolerance=ns.tol)
    if ns.jobs > 1:
        stream = SplitMix64(ns.seed)
        seeds = tuple(stream.next_u64() for _ in range(ns.graphs))
        tasks = [(ns.nodes, ns.degree, s, tuple(grid), ns.tol) for s in seeds]
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            per_graph = np.vstack(list(pool.map(_experiment_worker, tasks)))
        from .metrics import AsfeEstimate

        argmin = per_graph.argmin(axis=0)
        seeds_arr = np.asarray(seeds, dtype=np.uint64)
        est = AsfeEstimate(
            p_grid=grid, t_of_p=per_graph.min(axis=0),
            q_of_p=grid / (grid - 1.0), per_graph=per_graph,
            graph_seeds=seeds, argmin_graph_seed=seeds_arr[argmin],
            triple=(0, 1, 2),
            params={"n_graphs": ns.graphs, "n_nodes": ns.nodes,
                    "expected_degree": ns.degree, "seed": ns.seed},
        )
    else:
        est = er_experiment(ns.graphs, ns.nodes, ns.degree, grid, ns.seed, cfg)
    fh, close = _open_out(ns.out)
    try:
        fh.write(_meta_line(seed=ns.seed, graphs=ns.graphs, nodes=ns.nodes,
                            degree=ns.degree, tol=ns.tol,
                            triple="0,1,2") + "\n")
        w = csv.writer(fh)
        w.writerow(["p", "t_of_p", "q_of_p", "margin", "argmin_graph_seed"])
        for i, p in enumerate(est.p_grid):
            w.writerow([
                scalar_str(p),
                scalar_str(est.t_of_p[i]),
                scalar_str(est.q_of_p[i]),
                scalar_str(est.t_of_p[i] - est.q_of_p[i]),
                int(est.argmin_graph_seed[i]),
            ])
    finally:
        if close:
            fh.close()
    verdict = "no counterexample" if est.margin >= 0 else "BOUND CROSSED"
    print(f"min margin t(p) - p/(p-1) = {scalar_str(est.margin)} ({verdict})",
          file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# embed


def cmd_embed(ns) -> int:
    if ns.matrix:
        m = load_distance_matrix(ns.matrix)
    elif ns.graph:
        g = resolve_graph(ns.graph)
        m = distance_matrix(g, ns.p, SolverConfig(tolerance=ns.tol), ns.method)
    else:
        raise GraphFormatError("embed needs a graph argument or --matrix FILE")
    if ns.base:
        if ns.base not in m.labels:
            raise GraphFormatError(f"unknown base point {ns.base!r}")
        base = list(m.labels).index(ns.base)
    else:
        base = 0
    dim = ns.dim if ns.dim else m.n - 1
    rep = embeddability(m, dim, base=base)
    fh, close = _open_out(ns.out)
    try:
        if ns.format == "csv":
            fh.write(_meta_line(p=_p_label(m.p), base=m.labels[base], dim=dim,
                                embeddable=rep.embeddable, rank=rep.rank) + "\n")
            w = csv.writer(fh)
            ncols = rep.coordinates.shape[1] if rep.coordinates is not None else 0
            w.writerow(["label"] + [f"x{i+1}" for i in range(ncols)])
            if rep.coordinates is not None:
                for lab, row in zip(m.labels, rep.coordinates):
                    w.writerow([lab] + [scalar_str(x) for x in row])
        else:
            doc = {
                "p": _jsonable(m.p),
                "base": m.labels[base],
                "dimension": dim,
                "eigenvalues": _jsonable(rep.eigenvalues),
                "psd": rep.psd,
                "rank": rep.rank,
                "rank_interval": list(rep.rank_interval),
                "embeddable": rep.embeddable,
                "round_trip_max_rel_error": _jsonable(rep.round_trip_max_rel_error),
                "coordinates": (
                    {lab: _jsonable(row) for lab, row in zip(m.labels, rep.coordinates)}
                    if rep.coordinates is not None else None
                ),
            }
            fh.write(json.dumps(doc, indent=2) + "\n")
    finally:
        if close:
            fh.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# validate


def closed_form_cases(only=None):
    """(name, graph, a, b, p, expected) for every closed-form oracle."""
    cases = []
    if not only or "parallel" in only:
        for k, hops in ((2, 3), (3, 2), (4, 4)):
            g = parallel_paths(k, hops)
            for p in (1.5, 2.0, 3.0):
                cases.append(
                    (f"parallel k={k} hops={hops}", g, 0, 1, p,
                     k / hops ** (p - 1.0))
                )
    if not only or "cycle" in only:
        for n in (4, 6, 9):
            g = cycle_graph(n)
            for p in (1.5, 2.0, 4.0):
                cases.append(
                    (f"cycle n={n} adjacent", g, 0, 1, p,
                     1.0 + (n - 1.0) ** (1.0 - p))
                )
                cases.append(
                    (f"cycle n={n} two-hop", g, 0, 2, p,
                     2.0 ** (1.0 - p) + (n - 2.0) ** (1.0 - p))
                )
    if not only or "complete" in only:
        for n in (4, 6, 10):
            g = complete_graph(n)
            for p in (2.0, 3.0):
                cases.append(
                    (f"complete n={n}", g, 0, 1, p,
                     1.0 + (n - 2.0) / 2.0 ** (p - 1.0))
                )
    return cases


def cmd_validate(ns) -> int:
    cfg = SolverConfig(tolerance=ns.solver_tol)
    failures = 0
    for name, g, a, b, p, expected in closed_form_cases(ns.only):
        res = modulus(g, a, b, p, cfg, ns.method)
        rel = abs(res.value - expected) / max(abs(expected), 1e-300)
        ok = rel <= ns.tol
        failures += 0 if ok else 1
        status = "ok  " if ok else "FAIL"
        print(f"{status} {name:24s} p={p:<4g} value={res.value:.10g} "
              f"expected={expected:.10g} rel_err={rel:.3e}")
    total = len(closed_form_cases(ns.only))
    print(f"{total - failures}/{total} closed-form cases within {ns.tol:g}")
    return EXIT_VALIDATION if failures else EXIT_OK


# ---------------------------------------------------------------------------
# bench


def cmd_bench(ns) -> int:
    sizes = [int(t) for t in ns.sizes.split(",")]
    if any(s < 1 for s in sizes):
        raise ValueError("grid sizes must be positive")
    plist = [parse_p(t) for t in ns.p_list.split(",")]
    methods2 = [m.strip() for m in ns.methods.split(",")]
    if any(m not in ("opt", "lap") for m in methods2):
        raise ValueError("p=2 methods must be opt and/or lap")
    cols = []
    for p in plist:
        if p == 2.0:
            cols += [(p, meth) for meth in methods2]
        else:
            cols.append((p, None))

    def label(p, meth):
        if meth:
            return f"2.0 ({meth})"
        return _p_label(p)

    cfg = SolverConfig(tolerance=ns.tol)
    rows = []
    for n in sizes:
        g = grid_graph(n)
        a, b = g.index("0,0"), g.index(f"{n-1},{n-1}")
        row = [n]
        for p, meth in cols:
            total = 0.0
            for _ in range(ns.reps):
                t0 = time.perf_counter()
                if meth == "opt" or (meth is None and not math.isinf(p)
                                     and p not in (1.0, 2.0)):
                    modulus(g, a, b, p, cfg, "potential")
                else:
                    modulus(g, a, b, p, cfg, "auto")
                total += time.perf_counter() - t0
            row.append(total / ns.reps)
        rows.append(row)
    fh, close = _open_out(ns.out)
    try:
        fh.write(_meta_line(reps=ns.reps, tol=ns.tol,
                            sizes=ns.sizes, p_list=ns.p_list) + "\n")
        w = csv.writer(fh)
        w.writerow(["n"] + [label(p, meth) for p, meth in cols])
        for row in rows:
            w.writerow([row[0]] + [f"{x:.6f}" for x in row[1:]])
    finally:
        if close:
            fh.close()
    return EXIT_OK


# ---------------------------------------------------------------------------
# eigencurve (small helper subcommand used by the square study script)


def cmd_eigencurve(ns) -> int:
    betas = np.arange(ns.start, ns.stop + 1e-12, ns.step)
    rows, brackets = square_eigencurve(betas)
    fh, close = _open_out(ns.out)
    try:
        fh.write(_meta_line(start=ns.start, stop=ns.stop, step=ns.step) + "\n")
        w = csv.writer(fh)
        w.writerow(["beta", "lambda_1", "lambda_2", "lambda_3"])
        for r in rows:
            w.writerow([scalar_str(x) for x in r])
    finally:
        if close:
            fh.close()
    for lo, hi in brackets:
        print(f"lambda_min changes sign in [{scalar_str(lo)}, {scalar_str(hi)}]",
              file=sys.stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser / main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="modmetrics",
        description="p-modulus distances on finite graphs",
    )
    ap.add_argument("--version", action="version",
                    version=f"modmetrics {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p_, with_method=True):
        p_.add_argument("--tol", type=float, default=1e-6,
                        help="solver relative-gap tolerance")
        if with_method:
            p_.add_argument("--method", choices=("auto", "greedy", "potential"),
                            default="auto")

    d = sub.add_parser("dist", help="d_p and modulus for one node pair")
    d.add_argument("graph", help="graph file or generator spec (e.g. cycle:6)")
    d.add_argument("a")
    d.add_argument("b")
    d.add_argument("--p", type=parse_p, default=2.0)
    d.add_argument("--format", choices=("text", "json"), default="text")
    common(d)
    d.set_defaults(func=cmd_dist)

    mx = sub.add_parser("matrix", help="all-pairs d_p matrix")
    mx.add_argument("graph")
    mx.add_argument("--p", type=parse_p, default=2.0)
    mx.add_argument("--out", default="-")
    mx.add_argument("--format", choices=("csv", "json"), default="csv")
    mx.add_argument("--jobs", type=int, default=1)
    common(mx)
    mx.set_defaults(func=cmd_matrix)

    ex = sub.add_parser("experiment",
                        help="seeded ER study of the snowflake exponent bound")
    ex.add_argument("--graphs", type=int, default=50)
    ex.add_argument("--nodes", type=int, default=10)
    ex.add_argument("--degree", type=float, default=6.0)
    ex.add_argument("--seed", type=int, default=0)
    ex.add_argument("--p-grid", default="",
                    help="lo:hi:count or comma list (default 1.2:5:15)")
    ex.add_argument("--out", default="-")
    ex.add_argument("--jobs", type=int, default=1)
    common(ex, with_method=False)
    ex.set_defaults(func=cmd_experiment)

    em = sub.add_parser("embed", help="Schoenberg embeddability + coordinates")
    em.add_argument("graph", nargs="?", default=None)
    em.add_argument("--matrix", default=None,
                    help="distance-matrix CSV instead of a graph")
    em.add_argument("--p", type=parse_p, default=2.0)
    em.add_argument("--dim", type=int, default=0,
                    help="target dimension (default: points - 1)")
    em.add_argument("--base", default="")
    em.add_argument("--out", default="-")
    em.add_argument("--format", choices=("json", "csv"), default="json")
    common(em)
    em.set_defaults(func=cmd_embed)

    va = sub.add_parser("validate", help="closed-form oracle battery")
    va.add_argument("--only", action="append",
                    choices=("parallel", "cycle", "complete"))
    va.add_argument("--tol", type=float, default=1e-5,
                    help="acceptance threshold on relative error")
    va.add_argument("--solver-tol", type=float, default=1e-6)
    va.add_argument("--method", choices=("auto", "greedy", "potential"),
                    default="auto")
    va.set_defaults(func=cmd_validate)

    be = sub.add_parser("bench", help="grid-graph timing table")
    be.add_argument("--sizes", default="3,6,9,12,15")
    be.add_argument("--p-list", default="1,1.5,2,2.5,inf")
    be.add_argument("--reps", type=int, default=20)
    be.add_argument("--methods", default="opt,lap",
                    help="columns to time at p=2")
    be.add_argument("--out", default="-")
    be.add_argument("--tol", type=float, default=1e-6)
    be.set_defaults(func=cmd_bench)

    ec = sub.add_parser("eigencurve",
                        help="square-family Schoenberg eigenvalues vs beta")
    ec.add_argument("--start", type=float, default=0.1)
    ec.add_argument("--stop", type=float, default=1.95)
    ec.add_argument("--step", type=float, default=0.05)
    ec.add_argument("--out", default="-")
    ec.set_defaults(func=cmd_eigencurve)

    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return ns.func(ns)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
