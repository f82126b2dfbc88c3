"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 runtime error, 4 colouring retries
exhausted. Failures print one JSON line ``{"error": ..., "message": ...}``
to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import coloring, concentration, hadamard, strong
from .graph import RANDOM_KINDS, GraphError, generate, parse_graph, write_graph

DEFAULT_SEED = 20_150_901

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME, EXIT_RETRY = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, kind: str, message: str, code: int = EXIT_RUNTIME):
        self.kind, self.code = kind, code
        super().__init__(message)


def _emit(text: str, out: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        try:
            Path(out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise CliError("io", f"cannot write {out}: {exc}") from exc


def _load(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError("io", f"cannot read {path}: {exc}") from exc
    try:
        return parse_graph(text)
    except GraphError as exc:
        raise CliError("parse", f"{path}: {exc}") from exc


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# ---------------------------------------------------------------- commands

def cmd_gen(args) -> int:
    params = {k: getattr(args, k) for k in ("n", "k", "a", "b", "r", "p") if getattr(args, k) is not None}
    try:
        G = generate(args.kind, seed=args.seed, **params)
    except GraphError as exc:
        raise CliError("generator", str(exc)) from exc
    body = write_graph(G)
    if args.kind in RANDOM_KINDS:
        desc = " ".join(f"{k}={v}" for k, v in sorted(params.items()))
        body = f"# kind={args.kind} {desc} seed={args.seed}\n" + body
    _emit(body, args.out)
    return EXIT_OK


def cmd_stats(args) -> int:
    G = _load(args.input)
    _emit(strong.stats_csv(G), args.out)
    return EXIT_OK


def cmd_clique(args) -> int:
    G = _load(args.input)
    D = G.max_degree
    try:
        size, witness = strong.strong_clique_exact(G, budget=args.budget)
    except strong.CliqueBudgetExceeded as exc:
        raise CliError("budget", f"{exc}; lower_bound={exc.best_size}") from exc
    report = {"size": size, "witness": sorted(witness), "delta": D,
              "kappa": size / D**2 if D else 0.0,
              "kappa_bound": strong.clique_bound_value(D) if D else None}
    _emit(_json(report), args.out)
    return EXIT_OK


def cmd_extremal(args) -> int:
    rows = [hadamard.EXTREMAL_CSV_HEADER]
    try:
        for k in range(args.k_min, args.k_max + 1):
            rows.append(hadamard.extremal_report(k).csv_row())
    except ValueError as exc:
        raise CliError("range", str(exc)) from exc
    _emit("\n".join(rows), args.out)
    return EXIT_OK


def cmd_color(args) -> int:
    G = _load(args.input)
    H = strong.square_linegraph(G) if args.mode == "strong" else G
    try:
        res = coloring.color_until_success(H, args.colors, args.retries, args.seed, order=args.order)
    except coloring.RetryExhausted as exc:
        print(json.dumps({"error": "retry_exhausted", "message": str(exc),
                          "attempts": exc.attempts, "best_uncolored": exc.best_uncolored}),
              file=sys.stderr)
        return EXIT_RETRY
    except ValueError as exc:
        raise CliError("argument", str(exc), EXIT_USAGE) from exc
    ident = "edge" if args.mode == "strong" else "vertex"
    lines = [f"# mode={args.mode} colors={args.colors} seed={args.seed} attempts={res.attempts}",
             f"{ident},color"]
    lines += [f"{i},{int(c)}" for i, c in enumerate(res.colors)]
    _emit("\n".join(lines), args.out)
    return EXIT_OK


def cmd_mc(args) -> int:
    G = _load(args.input)
    if not 0 <= args.u < G.n:
        raise CliError("argument", f"vertex {args.u} not in graph", EXIT_USAGE)
    rep = concentration.run_trials(G, args.u, args.colors, args.trials, args.seed,
                                   r_for_xi=args.r, threads=args.threads)
    _emit(_json(rep.to_json_dict()), args.out)
    return EXIT_OK


def cmd_triangles(args) -> int:
    try:
        mean, var, expected = concentration.triangle_experiment(args.n, args.p, args.trials, args.seed)
    except ValueError as exc:
        raise CliError("argument", str(exc), EXIT_USAGE) from exc
    se = (var / args.trials) ** 0.5
    _emit(_json({"n": args.n, "p": args.p, "trials": args.trials, "seed": args.seed,
                 "mean": mean, "variance": var, "expected": expected, "std_error": se}), args.out)
    return EXIT_OK


def cmd_gamma(args) -> int:
    d = args.delta
    try:
        mg = concentration.max_gamma(d)
        ag = concentration.approx_gamma(d)
        out = {"delta": d, "max_gamma": mg, "approx_gamma": ag,
               "approx_gamma_margin": concentration.gamma_margin(ag, d)}
        if args.gamma is not None:
            out["gamma"] = args.gamma
            out["condition_holds"] = concentration.gamma_condition_holds(args.gamma, d)
            out["margin"] = concentration.gamma_margin(args.gamma, d)
    except ValueError as exc:
        raise CliError("argument", str(exc), EXIT_USAGE) from exc
    _emit(_json(out), args.out)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="strongcolor", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=1, help="worker cap for Monte Carlo runs")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph",
                       description="Generate a test graph (cycles, cliques, C5 blow-ups, "
                                   "Petersen, random regular, G(n,p)) as an edge list.")
    g.add_argument("--kind", required=True,
                   choices=["cycle", "complete", "complete_bipartite", "star", "blowup_c5",
                            "petersen", "random_regular", "gnp"])
    for name, typ in (("n", int), ("k", int), ("a", int), ("b", int), ("r", int), ("p", float)):
        g.add_argument(f"--{name}", type=typ)
    g.add_argument("--seed", type=int, default=DEFAULT_SEED)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", help="per-edge strong-neighbourhood statistics",
                       description="Strong degree and neighbourhood-density bounds in the square "
                                   "of the linegraph: one CSV row per edge with bound verdicts.")
    s.add_argument("--input", required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_stats)

    c = sub.add_parser("clique", help="exact maximum strong clique",
                       description="Maximum clique of the square of the linegraph by branch and "
                                   "bound, next to the 3/(2Δ²)+sqrt(3+10/Δ+9/(4Δ⁴)) clique bound.")
    c.add_argument("--input", required=True)
    c.add_argument("--budget", type=int, default=1_000_000)
    c.add_argument("--out")
    c.set_defaults(func=cmd_clique)

    e = sub.add_parser("extremal", help="Hadamard extremal construction report",
                       description="Hadamard-code graphs whose strong neighbourhood of uv "
                                   "approaches 3/2·Δ⁴ induced edges; CSV row per k.")
    e.add_argument("--k-min", type=int, default=2)
    e.add_argument("--k-max", type=int, default=6)
    e.add_argument("--out")
    e.set_defaults(func=cmd_extremal)

    col = sub.add_parser("color", help="randomised colouring with greedy completion",
                         description="Random colouring, oriented conflict resolution and greedy "
                                     "completion, retried until success. --mode strong colours "
                                     "edges via the square of the linegraph.")
    col.add_argument("--input", required=True)
    col.add_argument("--colors", type=int, required=True)
    col.add_argument("--retries", type=int, default=100)
    col.add_argument("--seed", type=int, default=DEFAULT_SEED)
    col.add_argument("--mode", choices=["strong", "vertex"], default="strong")
    col.add_argument("--order", choices=["index", "degree"], default="index")
    col.add_argument("--out")
    col.set_defaults(func=cmd_color)

    mc = sub.add_parser("mc", help="Monte Carlo statistics of P_u, T_u and savings",
                        description="Repeated colouring trials at vertex u: sample moments of "
                                    "P_u and T_u, savings, deviation tails and the frequency of "
                                    "the exceptional event (a colour on more than log r "
                                    "neighbours of u).")
    mc.add_argument("--input", required=True)
    mc.add_argument("--u", type=int, default=0)
    mc.add_argument("--colors", type=int, required=True)
    mc.add_argument("--trials", type=int, default=10_000)
    mc.add_argument("--r", type=float, help="r used for log r (default: max degree)")
    mc.add_argument("--seed", type=int, default=DEFAULT_SEED)
    mc.add_argument("--out")
    mc.set_defaults(func=cmd_mc)

    t = sub.add_parser("triangles", help="triangle counts in G(n,p)",
                       description="Triangle counts in G(n,p) samples against C(n,3)p³.")
    t.add_argument("--n", type=int, default=200)
    t.add_argument("--p", type=float, default=0.05)
    t.add_argument("--trials", type=int, default=200)
    t.add_argument("--seed", type=int, default=DEFAULT_SEED)
    t.add_argument("--out")
    t.set_defaults(func=cmd_triangles)

    gm = sub.add_parser("gamma", help="palette-saving parameter condition",
                        description="Largest γ with γ < δ/(2(1-γ))e^(-1/(1-γ)) - "
                                    "δ^(3/2)/(6(1-γ)²)e^(-7/(8(1-γ))), the linear-fit "
                                    "approximation, and the margin at a given γ.")
    gm.add_argument("--delta", type=float, required=True)
    gm.add_argument("--gamma", type=float, default=0.035)
    gm.add_argument("--out")
    gm.set_defaults(func=cmd_gamma)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc)}), file=sys.stderr)
        return exc.code
    except Exception as exc:  # noqa: BLE001 - last-resort machine-readable line
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
