"""Command-line front end.

Machine-readable JSON goes to stdout (stable key order, no volatile fields
such as runtimes, so repeated runs are byte-identical); human-readable
notes go to stderr.  Exit codes: 0 success/verified, 1 a claim was refuted,
2 usage or input error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bollobas as bl
from . import families as fam
from . import geodesy, theorems
from .core import KSet, ParseError, ResourceCapError, parse_family_file, rank_colex
from .kneser import BFS_CAP, KneserParams, KneserUniverse, MatrixCache


@dataclass
class CliConfig:
    cache_dir: str | None = None
    report_dir: str | None = None
    threads: int = 1  # accepted and validated; execution is single-threaded
    seed: int = 42
    cap_bfs: int = BFS_CAP
    cap_solver: int = geodesy.EXACT_CAP
    cap_naive: int = geodesy.NAIVE_CAP
    cap_oracle: int = bl.ORACLE_CAP
    cap_brute: int = fam.BRUTE_CAP


_CONFIG_INT_KEYS = {"threads", "seed", "cap_bfs", "cap_solver", "cap_naive", "cap_oracle", "cap_brute"}


def load_config(path: str | None, env: dict | None = None, overrides: dict | None = None) -> CliConfig:
    """Build the effective config: defaults, then config file, then environment
    (GPKN_CACHE_DIR / GPKN_REPORT_DIR), then explicit flags."""
    env = os.environ if env is None else env
    cfg = CliConfig()
    if path:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ValueError(f"cannot read config {path}: {exc}") from None
        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"config line {line_no}: expected key=value, got {raw!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not hasattr(cfg, key):
                raise ValueError(f"config line {line_no}: unknown key {key!r}")
            setattr(cfg, key, int(value) if key in _CONFIG_INT_KEYS else value)
    if env.get("GPKN_CACHE_DIR"):
        cfg.cache_dir = env["GPKN_CACHE_DIR"]
    if env.get("GPKN_REPORT_DIR"):
        cfg.report_dir = env["GPKN_REPORT_DIR"]
    for key, value in (overrides or {}).items():
        if value is not None:
            setattr(cfg, key, value)
    if cfg.threads < 1:
        raise ValueError("threads must be >= 1")
    return cfg


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n")


def _note(message: str) -> None:
    sys.stderr.write(message + "\n")


def _parse_kset(spec: str, n: int) -> KSet:
    try:
        elems = [int(tok) for tok in spec.split(",") if tok.strip()]
        return KSet.from_elements(elems, n)
    except ValueError as exc:
        raise ValueError(f"bad vertex spec {spec!r}: {exc}") from None


def _graph_source(args):
    """Resolve --kneser/--graph into (params-or-None, SimpleGraph-or-None)."""
    if args.kneser:
        n, k = args.kneser
        return KneserParams(n, k), None
    text = Path(args.graph).read_text()
    return None, geodesy.parse_edge_list(text)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_dist(args, cfg: CliConfig) -> int:
    params, graph = _graph_source(args)
    if params is not None:
        if params.order > cfg.cap_bfs:
            raise ResourceCapError(f"{params.order} vertices exceeds BFS cap {cfg.cap_bfs}")
        u = _parse_kset(args.u, params.n)
        v = _parse_kset(args.v, params.n)
        for s in (u, v):
            if s.k != params.k:
                raise ValueError(f"vertex {{{s}}} is not a {params.k}-subset")
        cache = MatrixCache(cfg.cache_dir)
        dm = cache.get(params, cap=cfg.cap_bfs)
        d = dm.dist(rank_colex(u), rank_colex(v))
    else:
        try:
            a, b = int(args.u), int(args.v)
        except ValueError:
            raise ValueError(f"graph mode expects integer vertex ids, got {args.u!r} {args.v!r}") from None
        if not (0 <= a < graph.order and 0 <= b < graph.order):
            raise ValueError(f"vertex out of range 0..{graph.order - 1}")
        d = geodesy.distance_matrix(graph).dist(a, b)
    _emit(d)
    return 0


def _gp_target_ranks(args, params: KneserParams | None, graph) -> list[int]:
    if params is not None:
        if args.star is not None:
            members = fam.star(params.n, params.k, args.star)
            return [rank_colex(s) for s in members]
        if args.family:
            system = parse_family_file(Path(args.family).read_text())
            if system.n != params.n or system.k != params.k:
                raise ValueError(f"family file is over (n={system.n}, k={system.k}), graph is Kn_{{{params.n},{params.k}}}")
            return [rank_colex(s) for f in system.families for s in f]
        if args.set:
            return [rank_colex(_parse_kset(chunk, params.n)) for chunk in args.set.split(";")]
        raise ValueError("gp check needs one of --star, --family or --set")
    if args.set:
        try:
            return [int(tok) for tok in args.set.split(",")]
        except ValueError:
            raise ValueError("graph mode expects comma-separated vertex ids in --set") from None
    raise ValueError("gp check on a graph file needs --set")


def cmd_gp(args, cfg: CliConfig) -> int:
    params, graph = _graph_source(args)
    if args.action == "check":
        if params is not None:
            if params.order > cfg.cap_bfs:
                raise ResourceCapError(f"{params.order} vertices exceeds BFS cap {cfg.cap_bfs}")
            cache = MatrixCache(cfg.cache_dir)
            dm = cache.get(params, cap=cfg.cap_bfs)
            uni = KneserUniverse(params)
            label = lambda r: list(uni.vertex(r).elements())
        else:
            dm = geodesy.distance_matrix(graph)
            label = lambda r: r
        ranks = _gp_target_ranks(args, params, graph)
        witness = geodesy.check_gp_direct(dm, ranks)
        if witness is None:
            _emit({"size": len(set(ranks)), "status": "pass"})
        else:
            _emit({
                "size": len(set(ranks)),
                "status": "fail",
                "witness": {"x": label(witness.x), "z": label(witness.z), "y": label(witness.y)},
            })
        return 0

    # solve
    if params is not None:
        if params.order > cfg.cap_solver:
            raise ResourceCapError(f"{params.order} vertices exceeds solver cap {cfg.cap_solver}")
        graph = geodesy.SimpleGraph.from_kneser(params)
        uni = KneserUniverse(params)
        label = lambda r: list(uni.vertex(r).elements())
    else:
        label = lambda r: r
    if args.naive:
        result = geodesy.gp_solve_naive(graph, cap=cfg.cap_naive)
    else:
        result = geodesy.gp_solve_exact(graph, time_limit=args.time_limit, cap=cfg.cap_solver)
    _emit({
        "exact": result.optimal,
        "gp": result.size,
        "vertices": [label(v) for v in result.vertices],
    })
    return 0


def cmd_verify(args, cfg: CliConfig) -> int:
    claims = list(theorems.CLAIM_IDS) if args.claim == "all" else [args.claim]
    for c in claims:
        if c not in theorems.CLAIM_IDS:
            raise ValueError(f"unknown claim {c!r}; known: {', '.join(theorems.CLAIM_IDS)} or 'all'")
    options = {
        "k": args.k, "n": args.n, "m": args.m,
        "max_k": args.max_k, "trials": args.trials, "seed": args.seed,
    }
    options = {key: value for key, value in options.items() if value is not None}
    cache = MatrixCache(cfg.cache_dir)
    reports: list[theorems.VerificationReport] = []
    for c in claims:
        reports.extend(theorems.run_claim(c, options, cache))
    if cfg.report_dir:
        for r in reports:
            theorems.write_report(r, cfg.report_dir)
        theorems.write_summary(reports, cfg.report_dir)
    _emit([r.to_dict(include_runtime=False) for r in reports])
    refuted = sum(1 for r in reports if r.status == "refuted")
    for r in reports:
        pstr = " ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
        _note(f"{r.status.upper():9s} {r.claim} {pstr}")
    _note(f"{len(reports)} reports: "
          f"{sum(r.status == 'verified' for r in reports)} verified, "
          f"{refuted} refuted, {sum(r.status == 'skipped' for r in reports)} skipped")
    return 1 if refuted else 0


def cmd_bollobas(args, cfg: CliConfig) -> int:
    text = Path(args.file).read_text()
    system = bl.SetPairSystem.from_json(text)
    mode = args.mode
    if mode == "auto":
        mode = "lemma5" if system.triples else "classic"
    if mode == "classic":
        if system.triples:
            raise ValueError("classic mode only applies to systems of pairs")
        lhs = bl.classic_lhs(system.pairs)
    else:
        lhs = bl.lemma5_lhs(system)
    payload = {
        "lhs": f"{lhs.numerator}/{lhs.denominator}",
        "decimal": f"{float(lhs):.6f}",
        "mode": mode,
        "within_bound": lhs <= 1,
        "tight": lhs == 1,
    }
    if args.action == "oracle":
        rep = bl.permutation_oracle(system, cap=cfg.cap_oracle)
        payload["oracle"] = {
            "ground": list(rep.ground),
            "total_permutations": rep.total_permutations,
            "counts": [
                {"index": c.index, "s": list(c.s), "t": list(c.t),
                 "count": c.count, "expected": c.expected}
                for c in rep.counts
            ],
            "counts_match": rep.counts_match,
            "at_most_one": rep.at_most_one_ok,
        }
    _emit(payload)
    _note(f"{payload['lhs']} (≈ {payload['decimal']}) "
          f"{'<= 1: bound holds' if payload['within_bound'] else '> 1: bound violated'}")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--cache-dir", dest="cache_dir", help="distance-matrix cache directory")
    p.add_argument("--report-dir", dest="report_dir", help="verification report directory")
    p.add_argument("--threads", type=int, help="worker count (validated; runs serially)")
    p.add_argument("--cap-bfs", dest="cap_bfs", type=int, help="override BFS vertex cap")
    p.add_argument("--cap-solver", dest="cap_solver", type=int, help="override exact-solver cap")
    p.add_argument("--cap-naive", dest="cap_naive", type=int, help="override naive-solver cap")
    p.add_argument("--cap-oracle", dest="cap_oracle", type=int, help="override permutation-oracle cap")
    p.add_argument("--cap-brute", dest="cap_brute", type=int, help="override brute-force cap")


def _add_graph_source(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--kneser", nargs=2, type=int, metavar=("N", "K"),
                       help="Kneser graph parameters")
    group.add_argument("--graph", help="edge-list file (order=<int> header, 'u v' lines)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gpkn",
        description="Exact toolkit for general-position sets in Kneser graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="distance between two vertices")
    _add_graph_source(p_dist)
    p_dist.add_argument("u", help="first vertex (comma list of elements, or index for --graph)")
    p_dist.add_argument("v", help="second vertex")
    _add_common(p_dist)
    p_dist.set_defaults(func=cmd_dist)

    p_gp = sub.add_parser("gp", help="general-position check or exact solve")
    p_gp.add_argument("action", choices=("check", "solve"))
    _add_graph_source(p_gp)
    p_gp.add_argument("--star", type=int, help="check the star of this element (Kneser mode)")
    p_gp.add_argument("--family", help="family file whose union is the vertex set to check")
    p_gp.add_argument("--set", help="inline vertex set: 'a,b;c,d' (Kneser) or 'i,j,k' (graph)")
    p_gp.add_argument("--naive", action="store_true", help="use the subset-enumeration oracle")
    p_gp.add_argument("--time-limit", type=float, help="seconds before the solver returns a lower bound")
    _add_common(p_gp)
    p_gp.set_defaults(func=cmd_gp)

    p_ver = sub.add_parser("verify", help="run verification claims")
    p_ver.add_argument("claim", help=f"one of {', '.join(theorems.CLAIM_IDS)}, or 'all'")
    p_ver.add_argument("--k", type=int)
    p_ver.add_argument("--n", type=int)
    p_ver.add_argument("--m", type=int)
    p_ver.add_argument("--max-k", dest="max_k", type=int)
    p_ver.add_argument("--trials", type=int)
    p_ver.add_argument("--seed", type=int)
    _add_common(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_bol = sub.add_parser("bollobas", help="set-pair system checks")
    p_bol.add_argument("action", choices=("check", "oracle"))
    p_bol.add_argument("file", help="system JSON file: {\"pairs\": [...], \"triples\": [...]}")
    p_bol.add_argument("--mode", choices=("auto", "classic", "lemma5"), default="auto")
    _add_common(p_bol)
    p_bol.set_defaults(func=cmd_bollobas)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = {
            key: getattr(args, key, None)
            for key in ("cache_dir", "report_dir", "threads",
                        "cap_bfs", "cap_solver", "cap_naive", "cap_oracle", "cap_brute")
        }
        cfg = load_config(getattr(args, "config", None), overrides=overrides)
        return args.func(args, cfg)
    except ResourceCapError as exc:
        _note(f"resource cap: {exc}")
        return 3
    except (ParseError, bl.SetPairValidationError) as exc:
        _note(f"input error: {exc}")
        return 2
    except (ValueError, OSError, KeyError) as exc:
        _note(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
