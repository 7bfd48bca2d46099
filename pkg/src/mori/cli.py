"""Command-line entry point: generation, statistics, exact queries,
predictions, and Monte Carlo experiments with machine-readable output.

Exit codes: 0 success, 1 runtime/I-O failure, 2 usage or validation error.
Every subcommand is deterministic given its flags; outputs written with
``--out`` get a sidecar ``<out>.manifest.json`` recording how to re-run them
(``mori --manifest <file>`` replays it).  The manifest timestamp honours
SOURCE_DATE_EPOCH and is null when that variable is unset, keeping outputs
byte-stable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .errors import MoriError
from .forests import PossibleForest
from .io import read_edge_list, write_edge_list, write_outcome_log
from .model import ModelParams, generate, generate_tree
from .montecarlo import default_threads, run_ensemble
from .oracle import (
    DEFAULT_CAP,
    ClusteringExpectation,
    exact_expectation,
    exact_subgraph_probability,
)
from .stats import CSV_HEADER, compute_stats
from .theory import constants, lemma1_probability, predicted_adjacent_pairs, \
    predicted_clustering, predicted_triangles

SWEEP_HEADER = (
    "n,m,beta,reps,master_seed,mean_triangles,ci_triangles,"
    "mean_adjacent_pairs,ci_adjacent_pairs,mean_clustering,ci_clustering,"
    "mean_degenerate_pairs,ci_degenerate_pairs,mean_max_degree,tail_exceed_count"
)
PLOT_HEADER = "x,y,ci"


def _timestamp() -> str | None:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if not epoch:
        return None
    return datetime.fromtimestamp(int(epoch), tz=timezone.utc).isoformat()


def _strip_threads(argv: list[str]) -> list[str]:
    """Drop --threads from recorded invocations: results never depend on it."""
    out = []
    skip = False
    for token in argv:
        if skip:
            skip = False
            continue
        if token == "--threads":
            skip = True
            continue
        if token.startswith("--threads="):
            continue
        out.append(token)
    return out


def _manifest(subcommand: str, argv: list[str], parameters: dict) -> dict:
    return {
        "subcommand": subcommand,
        "argv": _strip_threads(argv),
        "parameters": parameters,
        "master_seed": parameters.get("seed"),
        "version": __version__,
        "timestamp": _timestamp(),
    }


def _emit(text: str, out: str | None, manifest: dict | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)
        if manifest is not None:
            with open(out + ".manifest.json", "w") as fh:
                json.dump(manifest, fh, indent=2)
                fh.write("\n")


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _rational_dict(value) -> dict:
    if isinstance(value, Fraction):
        return {
            "numerator": value.numerator,
            "denominator": value.denominator,
            "decimal": float(value),
        }
    return {"numerator": None, "denominator": None, "decimal": float(value)}


def _parse_int_list(text: str) -> list[int]:
    return [int(float(tok)) for tok in text.split(",") if tok.strip()]


def _parse_float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mori",
        description="Preferential-attachment multigraph lab: generate, measure, verify.",
    )
    parser.add_argument("--manifest", metavar="PATH",
                        help="re-run the invocation recorded in a manifest file")
    sub = parser.add_subparsers(dest="subcommand")

    p = sub.add_parser("generate", help="generate one instance; write edge list or outcome log")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=["edges", "outcomes"], default="edges")

    p = sub.add_parser("stats", help="clustering statistics of an edge list or a fresh instance")
    p.add_argument("--input", metavar="PATH", help="edge-list file (header optional)")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--beta", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--format", choices=["json", "csv"], default="json")

    p = sub.add_parser("exact", help="exact enumeration: subgraph probability or expectation")
    p.add_argument("--forest", metavar="SPEC", help='edge list such as "3>1,2>1"')
    p.add_argument("--t", type=int, help="horizon (tree vertices) for a forest query")
    p.add_argument("--statistic", choices=["triangles", "adjacent_pairs", "clustering"])
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--beta", required=True, help="rational accepted, e.g. 1/2")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("predict", help="closed-form constants and predictions")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("ensemble", help="Monte Carlo ensemble at one parameter point")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("sweep", help="ensembles over a parameter grid, one row per cell")
    p.add_argument("--n", required=True, help="comma list, e.g. 1e3,1e4,1e5")
    p.add_argument("--m", default="2", help="comma list")
    p.add_argument("--beta", default="1", help="comma list")
    p.add_argument("--reps", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=0.05)
    p.add_argument("--threads", type=int, default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--plot-data", action="store_true",
                   help="emit x,y,ci triples instead of full rows")
    p.add_argument("--stat", choices=["triangles", "adjacent_pairs", "clustering"],
                   default="clustering", help="statistic for --plot-data")
    p.add_argument("--out", metavar="PATH")
    return parser


def _cmd_generate(args, argv) -> int:
    params = ModelParams(args.n, args.m, args.beta)
    manifest = _manifest("generate", argv, {
        "n": args.n, "m": args.m, "beta": args.beta, "seed": args.seed,
        "format": args.format,
    })
    import io as _io
    buf = _io.StringIO()
    if args.format == "edges":
        g = generate(params, args.seed)
        write_edge_list(g, buf)
    else:
        _, log = generate_tree(params.nm, params.beta, args.seed)
        write_outcome_log(log, buf)
    _emit(buf.getvalue(), args.out, manifest)
    return 0


def _cmd_stats(args, argv) -> int:
    if args.input is not None:
        with open(args.input) as fh:
            g = read_edge_list(fh)
    else:
        missing = [k for k in ("n", "m", "beta", "seed") if getattr(args, k) is None]
        if missing:
            raise MoriError(
                "stats needs --input or all of --n/--m/--beta/--seed "
                f"(missing {', '.join('--' + k for k in missing)})"
            )
        g = generate(ModelParams(args.n, args.m, args.beta), args.seed)
    s = compute_stats(g)
    manifest = _manifest("stats", argv, {
        "input": args.input, "n": args.n, "m": args.m,
        "beta": args.beta, "seed": args.seed, "format": args.format,
    })
    if args.format == "csv":
        text = CSV_HEADER + "\n" + s.to_csv_row() + "\n"
    else:
        payload = s.to_dict()
        if not s.clustering_defined:
            payload["clustering_undefined"] = True
        text = _json(payload)
    _emit(text, args.out, manifest)
    return 0


def _cmd_exact(args, argv) -> int:
    beta = Fraction(args.beta)
    manifest = _manifest("exact", argv, {
        "forest": args.forest, "t": args.t, "statistic": args.statistic,
        "n": args.n, "m": args.m, "beta": args.beta, "cap": args.cap,
    })
    if args.forest is not None:
        if args.t is None:
            raise MoriError("a forest query needs --t")
        forest = PossibleForest.parse(args.forest)
        prob = exact_subgraph_probability(forest, args.t, beta, cap=args.cap)
        closed = lemma1_probability(forest, args.t, beta)
        payload = {
            "forest": forest.to_spec(),
            "t": args.t,
            "beta": str(beta),
            "probability": _rational_dict(prob),
            "lemma1": _rational_dict(closed),
            "manifest": manifest,
        }
    elif args.statistic is not None:
        if args.n is None or args.m is None:
            raise MoriError("an expectation query needs --n and --m")
        params = ModelParams(args.n, args.m, beta)
        value = exact_expectation(params, args.statistic, cap=args.cap)
        payload = {
            "statistic": args.statistic,
            "n": args.n,
            "m": args.m,
            "beta": str(beta),
            "manifest": manifest,
        }
        if isinstance(value, ClusteringExpectation):
            payload["conditional_mean"] = (
                _rational_dict(value.conditional_mean)
                if value.conditional_mean is not None else None
            )
            payload["prob_undefined"] = _rational_dict(value.prob_undefined)
        else:
            payload["expectation"] = _rational_dict(value)
    else:
        raise MoriError("exact needs either --forest or --statistic")
    _emit(_json(payload), args.out, manifest)
    return 0


def _cmd_predict(args, argv) -> int:
    params = ModelParams(args.n, args.m, args.beta)
    cs = constants(params.m, params.beta)
    manifest = _manifest("predict", argv,
                         {"n": args.n, "m": args.m, "beta": args.beta})
    payload = {
        "n": params.n,
        "m": params.m,
        "beta": params.beta,
        "c1": cs.c1,
        "c2": cs.c2,
        "predicted_triangles": predicted_triangles(params.n, params.m, params.beta),
        "predicted_pairs": predicted_adjacent_pairs(params.n, params.m, params.beta),
        "predicted_clustering": predicted_clustering(params.n, params.m, params.beta),
        "manifest": manifest,
    }
    _emit(_json(payload), args.out, manifest)
    return 0


def _cmd_ensemble(args, argv) -> int:
    params = ModelParams(args.n, args.m, args.beta)
    manifest = _manifest("ensemble", argv, {
        "n": args.n, "m": args.m, "beta": args.beta, "reps": args.reps,
        "seed": args.seed, "epsilon": args.epsilon,
    })
    report = run_ensemble(params, args.reps, args.seed, epsilon=args.epsilon,
                          threads=args.threads)
    payload = report.to_dict()
    payload["manifest"] = manifest
    _emit(_json(payload), args.out, manifest)
    return 0


def _fmt(x) -> str:
    if x is None:
        return ""
    return repr(float(x))


def _cmd_sweep(args, argv) -> int:
    ns = _parse_int_list(args.n)
    ms = _parse_int_list(args.m)
    betas = _parse_float_list(args.beta)
    if not ns or not ms or not betas:
        raise MoriError("sweep needs non-empty --n/--m/--beta lists")
    manifest = _manifest("sweep", argv, {
        "n": ns, "m": ms, "beta": betas, "reps": args.reps, "seed": args.seed,
        "epsilon": args.epsilon, "stat": args.stat, "plot_data": args.plot_data,
        "format": args.format,
    })
    reports = []
    for beta in betas:
        for m in ms:
            for n in ns:
                params = ModelParams(n, m, beta)
                reports.append(run_ensemble(
                    params, args.reps, args.seed, epsilon=args.epsilon,
                    tag=f"sweep:n={n}:m={m}:beta={beta!r}", threads=args.threads,
                ))

    if args.plot_data:
        lines = [PLOT_HEADER]
        for rep in reports:
            summary = getattr(rep, args.stat)
            if summary is None:
                lines.append(f"{rep.params.n},,")
            else:
                lines.append(
                    f"{rep.params.n},{_fmt(summary.mean)},{_fmt(summary.ci95)}"
                )
        text = "\n".join(lines) + "\n"
    elif args.format == "json":
        payload = {"rows": [rep.to_dict() for rep in reports], "manifest": manifest}
        text = _json(payload)
    else:
        lines = [SWEEP_HEADER]
        for rep in reports:
            c = rep.clustering
            lines.append(",".join([
                str(rep.params.n), str(rep.params.m), repr(rep.params.beta),
                str(rep.replicates), str(rep.master_seed),
                _fmt(rep.triangles.mean), _fmt(rep.triangles.ci95),
                _fmt(rep.adjacent_pairs.mean), _fmt(rep.adjacent_pairs.ci95),
                _fmt(c.mean) if c else "", _fmt(c.ci95) if c else "",
                _fmt(rep.degenerate_pairs.mean), _fmt(rep.degenerate_pairs.ci95),
                _fmt(rep.max_degree.mean), str(rep.tail_exceed_count),
            ]))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out, manifest)
    return 0


_HANDLERS = {
    "generate": _cmd_generate,
    "stats": _cmd_stats,
    "exact": _cmd_exact,
    "predict": _cmd_predict,
    "ensemble": _cmd_ensemble,
    "sweep": _cmd_sweep,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.manifest:
        try:
            with open(args.manifest) as fh:
                saved = json.load(fh)
            stored_argv = saved["argv"]
        except (OSError, json.JSONDecodeError, KeyError) as exc:
            print(f"mori: cannot load manifest: {exc}", file=sys.stderr)
            return 1
        return main(stored_argv)
    if not args.subcommand:
        parser.print_usage(sys.stderr)
        return 2
    try:
        return _HANDLERS[args.subcommand](args, argv)
    except MoriError as exc:
        print(f"mori: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"mori: {exc}", file=sys.stderr)
        return 1


def app() -> None:
    sys.exit(main())


if __name__ == "__main__":
    app()
