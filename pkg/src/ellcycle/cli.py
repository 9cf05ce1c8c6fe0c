"""Command-line harness: ``ellcycle gen | verify | search | gadget | pipeline | sweep``.

Exit codes: 0 success (found, valid), 1 negative result (exhausted, invalid,
pipeline failure), 2 bad input, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import __version__
from .gadgets import (
    build_AP,
    build_F,
    build_P,
    build_W,
    compact_absorber,
    extremal_cover,
    extremal_parity,
    f_parts,
)
from .hgraph import KGraph, complete, complete_partite, load_graph, min_codegree, random_kgraph, raise_codegree
from .oracle import (
    SearchBudget,
    Status,
    find_hamilton_cycle,
    find_path_between,
    find_perfect_matching,
    is_perfect_matching,
)
from .paths import CycleSeq, dump_sequence, is_cycle_in, is_hamilton_cycle_in, is_path_in, sequence_from_dict, threshold_denominator
from .pipeline import PipelineParams, run_pipeline

OK, NEGATIVE, BAD_INPUT, OVER_BUDGET = 0, 1, 2, 3
CSV_VERSION = 1


class CliError(Exception):
    pass


def _emit(obj, out: str | None = None) -> None:
    text = json.dumps(obj)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _budget(args) -> SearchBudget:
    return SearchBudget(args.budget_nodes, args.budget_ms, args.parallel)


def _status_code(status: Status) -> int:
    return {Status.FOUND: OK, Status.EXHAUSTED: NEGATIVE, Status.BUDGET: OVER_BUDGET}[status]


def _read_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc


def _load(path: str) -> KGraph:
    try:
        return load_graph(path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CliError(f"cannot read graph {path}: {exc}") from exc


# ---------------------------------------------------------------------------
# gen

GENERATORS = {
    "complete": ("N K", lambda a: complete(int(a[0]), int(a[1]))),
    "complete_partite": ("K SIZE [SIZE ...]", lambda a: complete_partite([int(x) for x in a[1:]], int(a[0]))),
    "random": ("N K P", None),
    "extremal_cover": ("K ELL N", lambda a: extremal_cover(int(a[0]), int(a[1]), int(a[2]))),
    "extremal_parity": ("K ELL N", lambda a: extremal_parity(int(a[0]), int(a[1]), int(a[2]))),
    "F": ("K ELL", lambda a: build_F(int(a[0]), int(a[1]))),
}


def generate(name: str, params: list[str], seed: int | None = None) -> KGraph:
    if name not in GENERATORS:
        raise CliError(f"unknown generator {name!r}; choose from {', '.join(GENERATORS)}")
    usage, fn = GENERATORS[name]
    need = len(usage.split()) if "..." not in usage else 2
    if len(params) < need or ("..." not in usage and len(params) != need):
        raise CliError(f"{name} expects {usage}")
    try:
        if name == "random":
            return random_kgraph(int(params[0]), int(params[1]), float(params[2]), seed)
        return fn(params)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def cmd_gen(args) -> int:
    h = generate(args.generator, args.params, args.seed)
    _emit(h.to_dict(), args.output)
    return OK


# ---------------------------------------------------------------------------
# verify


def verify_certificate(h: KGraph, cert: dict, spanning: bool = True) -> dict:
    """Re-check a cycle, path or matching certificate against ``h`` from scratch."""
    if "matching" in cert:
        ok = is_perfect_matching(h, cert["matching"])
        return {"kind": "matching", "valid": ok}
    try:
        seq = sequence_from_dict(cert)
    except (KeyError, TypeError, ValueError) as exc:
        return {"kind": "sequence", "valid": False, "reason": str(exc)}
    if seq.k != h.k:
        return {"kind": "sequence", "valid": False, "reason": "uniformity mismatch"}
    if isinstance(seq, CycleSeq):
        hamilton = is_hamilton_cycle_in(h, seq)
        ok = hamilton if spanning else is_cycle_in(h, seq)
        return {"kind": "cycle", "valid": ok, "hamilton": hamilton}
    return {"kind": "path", "valid": is_path_in(h, seq)}


def cmd_verify(args) -> int:
    h = _load(args.graph)
    report = verify_certificate(h, _read_json(args.certificate), not args.non_spanning)
    _emit(report)
    return OK if report["valid"] else NEGATIVE


# ---------------------------------------------------------------------------
# search


def cmd_search(args) -> int:
    h = _load(args.graph)
    budget = _budget(args)
    try:
        if args.kind == "cycle":
            out = find_hamilton_cycle(h, args.ell, budget, count=args.count)
        elif args.kind == "matching":
            out = find_perfect_matching(h, budget)
        else:
            if not args.start or not args.end:
                raise CliError("path search needs --from and --to")
            out = find_path_between(h, args.ell, args.start, args.end, args.max_order, budget)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    report = out.to_dict()
    if args.kind == "matching" and out.certificate is not None:
        report["certificate"] = {"matching": [list(e) for e in out.certificate]}
    if args.output and report["certificate"] is not None:
        _emit(report["certificate"], args.output)
    _emit(report)
    return _status_code(out.status)


# ---------------------------------------------------------------------------
# gadget


def gadget_document(name: str, k: int, ell: int, seed: int | None = None) -> dict:
    """Host k-graph of a gadget plus the metadata needed to use it."""
    if name == "W":
        w = build_W(k, ell)
        return {"graph": w.host.to_dict(), "meta": {"X": w.X, "Y": w.Y, "Z": w.Z, "edges": w.edge_list}}
    if name == "P":
        p = build_P(k, ell, seed)
        return {
            "graph": p.host.to_dict(),
            "meta": {"ends": p.ends, "paths": [list(q.vertices) for q in p.paths], "class_map": p.class_map},
        }
    if name in ("AP", "compact"):
        a = build_AP(k, ell) if name == "AP" else compact_absorber(k, ell)
        return {
            "graph": a.host.to_dict(),
            "meta": {"S": a.S, "P": list(a.P.vertices), "Q": list(a.Q.vertices), "ends": a.ends, "classes": a.classes},
        }
    if name == "F":
        A, B = f_parts(k, ell)
        return {"graph": build_F(k, ell).to_dict(), "meta": {"A": A, "B": B}}
    raise CliError(f"unknown gadget {name!r}")


def cmd_gadget(args) -> int:
    try:
        doc = gadget_document(args.name, args.k, args.ell, args.seed)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(doc, args.output)
    return OK


# ---------------------------------------------------------------------------
# pipeline


def cmd_pipeline(args) -> int:
    h = _load(args.graph)
    try:
        params = PipelineParams(
            alpha=args.alpha,
            eps=args.eps,
            seed=args.seed or 0,
            max_cover_paths=args.max_cover_paths,
            n_absorbers=args.absorbers,
            absorber=args.absorber,
            restarts=args.restarts,
            search_nodes=args.budget_nodes or PipelineParams.search_nodes,
        )
        trace = run_pipeline(h, args.ell, params)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    doc = trace.to_dict()
    _emit(doc, args.output)
    if args.certificate and trace.cycle is not None:
        dump_sequence(trace.cycle, args.certificate)
    if args.output:
        _emit({"success": trace.success, "failed_phase": trace.failed_phase, "reason": trace.reason})
    return OK if trace.success else NEGATIVE


# ---------------------------------------------------------------------------
# sweep


@dataclass
class ExperimentRecord:
    version: int
    k: int
    ell: int
    n: int
    generator: str
    level: int
    trial: int
    seed: int
    min_codegree: int
    outcome: str
    nodes: int
    millis: float
    graph: str
    certificate: str
    reason: str = ""

    @property
    def threshold_value(self) -> float:
        return self.n / threshold_denominator(self.k, self.ell)

    def row(self) -> dict:
        d = asdict(self)
        d["threshold_value"] = round(self.threshold_value, 6)
        return {c: d[c] for c in COLUMNS}


COLUMNS = [
    "version", "k", "ell", "n", "generator", "level", "trial", "seed", "min_codegree",
    "threshold_value", "outcome", "nodes", "millis", "graph", "certificate", "reason",
]
OUTCOME = {Status.FOUND: "Found", Status.EXHAUSTED: "None", Status.BUDGET: "Budget"}


@dataclass(frozen=True)
class _Trial:
    k: int
    ell: int
    n: int
    generator: str
    level: int
    trial: int
    seed: int
    budget: SearchBudget
    outdir: str
    stem: str


def _run_trial(t: _Trial) -> ExperimentRecord:
    if t.generator == "extremal_parity":
        h = extremal_parity(t.k, t.ell, t.n)
    else:
        base = extremal_cover(t.k, t.ell, t.n)
        h = raise_codegree(base, t.level, t.seed) if t.level > min_codegree(base) else base
    name = f"{t.stem}_k{t.k}_l{t.ell}_n{t.n}_{t.generator}_d{t.level}_t{t.trial}"
    graph_file = f"{name}.graph.json"
    (Path(t.outdir) / graph_file).write_text(json.dumps(h.to_dict()) + "\n")
    out = find_hamilton_cycle(h, t.ell, t.budget)
    cert_file = ""
    if out.found:
        cert_file = f"{name}.cert.json"
        dump_sequence(out.certificate, Path(t.outdir) / cert_file)
    return ExperimentRecord(
        CSV_VERSION, t.k, t.ell, t.n, t.generator, t.level, t.trial, t.seed, min_codegree(h),
        OUTCOME[out.status], out.nodes, round(out.elapsed, 3), graph_file, cert_file, out.reason,
    )


def sweep(k, ell, n_list, offsets, trials, seed, budget, out_csv, parallel=1) -> list[ExperimentRecord]:
    """Oracle runs over codegree levels delta(extremal_cover) + offset, one CSV row per trial.

    Levels are reached by adding random edges to the lower-bound construction.
    When (k-l) | k, rows for the parity construction are added as well.
    """
    m = k - ell
    out_csv = Path(out_csv)
    outdir = out_csv.parent
    outdir.mkdir(parents=True, exist_ok=True)
    stem = out_csv.stem
    plan: list[_Trial | ExperimentRecord] = []
    for n in n_list:
        if n % m:
            plan.append(ExperimentRecord(CSV_VERSION, k, ell, n, "-", 0, 0, seed, 0, "Skipped", 0, 0.0, "", "", f"(k-ell)={m} does not divide n"))
            continue
        base = min_codegree(extremal_cover(k, ell, n))
        for trial in range(trials):
            for off in offsets:
                level = base + off
                if not 0 <= level <= n - k + 1:
                    continue
                tseed = seed * 1_000_003 + n * 1009 + level * 101 + trial
                plan.append(_Trial(k, ell, n, "extremal_cover", level, trial, tseed, budget, str(outdir), stem))
            if k % m == 0 and n % k == 0 and n >= 3 * k and k >= 3:
                plan.append(_Trial(k, ell, n, "extremal_parity", 0, trial, seed, budget, str(outdir), stem))
    jobs = [p for p in plan if isinstance(p, _Trial)]
    if parallel > 1 and jobs:
        with ProcessPoolExecutor(parallel) as pool:
            done = iter(pool.map(_run_trial, jobs))
    else:
        done = map(_run_trial, jobs)
    records = [p if isinstance(p, ExperimentRecord) else next(done) for p in plan]
    for r in records:
        if r.generator == "extremal_parity":
            r.level = r.min_codegree
    with out_csv.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COLUMNS)
        writer.writeheader()
        for r in records:
            writer.writerow(r.row())
    return records


def cmd_sweep(args) -> int:
    budget = SearchBudget(args.budget_nodes, args.budget_ms)
    try:
        sweep(args.k, args.ell, args.n, args.offsets, args.trials, args.seed or 0, budget, args.output, args.parallel)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    return OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="ellcycle", description="Hamilton l-cycles in k-uniform hypergraphs.")
    top.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    top.add_argument("--seed", type=int, default=None)
    top.add_argument("--budget-nodes", type=int, default=None, help="search node limit")
    top.add_argument("--budget-ms", type=float, default=None, help="search wall-clock limit")
    top.add_argument("--parallel", type=int, default=1, help="worker processes")
    top.add_argument("--json-errors", action="store_true", help="report errors as JSON on stderr")
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a k-graph")
    p.add_argument("generator", choices=sorted(GENERATORS))
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="re-check a certificate against a graph")
    p.add_argument("graph")
    p.add_argument("certificate")
    p.add_argument("--non-spanning", action="store_true", help="accept cycles that miss vertices")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="exact search")
    p.add_argument("graph")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--kind", choices=["cycle", "path", "matching"], default="cycle")
    p.add_argument("--from", dest="start", type=int, nargs="+")
    p.add_argument("--to", dest="end", type=int, nargs="+")
    p.add_argument("--max-order", type=int)
    p.add_argument("--count", action="store_true", help="count cycles instead of stopping at the first")
    p.add_argument("-o", "--output", help="write the certificate here")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("gadget", help="emit a gadget host with metadata")
    p.add_argument("name", choices=["W", "P", "AP", "compact", "F"])
    p.add_argument("k", type=int)
    p.add_argument("ell", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gadget)

    p = sub.add_parser("pipeline", help="run the absorbing heuristic")
    p.add_argument("graph")
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--alpha", type=float, default=0.2)
    p.add_argument("--eps", type=float, default=0.25)
    p.add_argument("--max-cover-paths", type=int)
    p.add_argument("--absorbers", type=int)
    p.add_argument("--absorber", choices=["auto", "ap", "compact"], default="auto")
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("-o", "--output", help="trace file")
    p.add_argument("--certificate", help="write the cycle here on success")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("sweep", help="oracle sweep over codegree levels, CSV output")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--offsets", type=int, nargs="+", default=[0, 1, 2, 3], help="levels above the extremal codegree")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sweep)
    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, ValueError) as exc:
        if args.json_errors:
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        else:
            print(f"ellcycle: error: {exc}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
