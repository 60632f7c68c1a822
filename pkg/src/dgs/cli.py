"""Command-line interface: certify graphs, run the density survey, run the
small-order oracle, build switching mates, print walk-matrix SNFs.

Exit codes: 0 clean (an inconclusive criterion is still a valid answer),
2 unreadable or malformed input, 3 at least one verdict hit the factoring
budget (retry with --rho-budget / --trial-bound, or the DGS_RHO_BUDGET /
DGS_TRIAL_BOUND environment variables).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional, Sequence, Tuple

from .arith import FactorBudget
from .criterion import (
    DgsVerdict,
    VerdictKind,
    certify,
    verdict_to_dict,
)
from .graphs import (
    AdjacencyTextError,
    Graph,
    Graph6Error,
    encode_graph6,
    find_gm_partitions,
    gm_switch,
    is_isomorphic,
    parse_adjacency_text,
    parse_graph6,
)
from .linalg import smith_normal_form
from .oracle import (
    format_oracle_report,
    level_divides_dn,
    level_prime_support,
    reconstruct_q,
    spectrum_key,
    summarize_order,
)
from .survey import CSV_HEADER, rows_to_csv, run_survey
from .walk import det_walk, valuation2, walk_matrix

CLI_SCHEMA = "dgs-cli/1"

ADJACENCY_CHARS = set("01, \t\r")


class InputError(Exception):
    pass


def _read_graph_file(path: str) -> List[Tuple[str, Graph]]:
    """Graphs from one file: either a single adjacency matrix or one graph6
    record per line (sniffed from the content)."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not an ASCII graph file") from exc
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        return []
    if all(set(ln) <= ADJACENCY_CHARS for ln in lines):
        try:
            return [(f"{path}:1", parse_adjacency_text(text))]
        except AdjacencyTextError as exc:
            raise InputError(f"{path}: {exc}") from exc
    out = []
    for i, ln in enumerate(text.splitlines(), start=1):
        if not ln.strip():
            continue
        try:
            out.append((f"{path}:{i}", parse_graph6(ln)))
        except Graph6Error as exc:
            raise InputError(f"{path}:{i}: {exc}") from exc
    return out


def _collect_inputs(paths: Sequence[str]) -> List[Tuple[str, Graph]]:
    graphs: List[Tuple[str, Graph]] = []
    for p in paths:
        graphs.extend(_read_graph_file(p))
    return graphs


def _budget_from_args(args) -> FactorBudget:
    return FactorBudget(trial_bound=args.trial_bound, rho_iterations=args.rho_budget)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _group_diag(diag: Sequence[int]) -> str:
    """Render an SNF diagonal compactly: runs of >= 3 collapse to 'v x k';
    a final entry with a big odd part prints as '2^l b' with b spelled out."""
    if not diag:
        return ""
    *head, last = diag
    lv = valuation2(last)
    parts: List[str] = []
    run_val: Optional[int] = None
    run_len = 0

    def flush() -> None:
        if run_val is None:
            return
        if run_len >= 3:
            parts.append(f"{run_val}×{run_len}")
        else:
            parts.extend([str(run_val)] * run_len)

    for d in head:
        if d == run_val:
            run_len += 1
        else:
            flush()
            run_val, run_len = d, 1
    flush()
    if lv.odd_part > 1:
        parts.append(f"{1 << lv.alpha}b")
        return ", ".join(parts) + f"\nb = {lv.odd_part}"
    parts.append(str(last))
    return ", ".join(parts)


def _human_verdict(origin: str, g: Graph, v: DgsVerdict) -> str:
    ev = v.evidence
    lines = [f"{origin}  n={g.n}  verdict: {v.kind.value}"]
    lines.append(f"  det(W) = {ev.det_w}")
    if ev.alpha is not None:
        lines.append(
            f"  2-adic split: sign={'+' if ev.sign > 0 else '-'} "
            f"alpha={ev.alpha} (floor(n/2)={g.n // 2}) odd part b={ev.odd_part}"
        )
    if ev.rank2_w is not None:
        lines.append(f"  rank2(W) = {ev.rank2_w} (ceil(n/2) = {(g.n + 1) // 2})")
    if ev.squarefree is not None:
        c = ev.squarefree
        facs = " ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in c.found_factors)
        lines.append(
            f"  square-free check: {c.status.value}"
            + (f", factors: {facs}" if facs else "")
            + (f", residual: {c.residual} ({c.residual_class.value})"
               if c.residual != 1 else "")
        )
    if ev.snf_diag is not None:
        lines.append("  SNF(W) diag: " + _group_diag(ev.snf_diag).replace("\n", "; "))
    if ev.eq4_holds is not None:
        lines.append(
            f"  kernel containment: dim={ev.kernel_dim}, "
            f"holds={'yes' if ev.eq4_holds else 'no'}"
        )
    if ev.failed_clause:
        lines.append(f"  failed clause: {ev.failed_clause}")
    return "\n".join(lines) + "\n"


def cmd_check(args) -> int:
    graphs = _collect_inputs(args.input)
    budget = _budget_from_args(args)
    docs = []
    texts = []
    exit_code = 0
    for origin, g in graphs:
        v = certify(g, budget)
        if v.kind is VerdictKind.FACTORIZATION_UNKNOWN:
            exit_code = 3
        doc = verdict_to_dict(v)
        doc["origin"] = origin
        doc["graph6"] = encode_graph6(g)
        docs.append(doc)
        texts.append(_human_verdict(origin, g, v))
    if args.format == "json":
        _emit(args, json.dumps(
            {"schema": CLI_SCHEMA, "command": "check", "seed": args.seed,
             "verdicts": docs}, indent=2) + "\n")
    else:
        _emit(args, "".join(texts))
    return exit_code


def cmd_survey(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    budget = _budget_from_args(args)
    rows = run_survey(sizes, args.samples, args.seed, budget,
                      shards=max(args.workers, 1), workers=args.workers)
    if args.format == "json":
        payload = {
            "schema": CLI_SCHEMA, "command": "survey", "seed": args.seed,
            "rows": [row.__dict__ for row in rows],
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    elif args.format == "human":
        lines = [CSV_HEADER.replace(",", "  ")]
        lines += [rows_to_csv([r]).splitlines()[1].replace(",", "  ") for r in rows]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, rows_to_csv(rows))
    return 0


def cmd_oracle(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    budget = _budget_from_args(args)
    summaries = [summarize_order(n, budget) for n in sizes]
    if args.format == "json":
        payload = {
            "schema": CLI_SCHEMA, "command": "oracle", "seed": args.seed,
            "orders": [
                {
                    "n": s.n,
                    "graphs": s.graph_count,
                    "classes": s.class_count,
                    "nontrivial_classes": [
                        [encode_graph6(g) for g in c.members]
                        for c in s.nontrivial_classes
                    ],
                    "certified_dgs": s.certified_dgs,
                    "violations": list(s.violations),
                }
                for s in summaries
            ],
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        _emit(args, format_oracle_report(summaries) + "\n")
    return 0


def cmd_mate(args) -> int:
    graphs = _collect_inputs(args.input)
    cell_sizes = tuple(int(s) for s in args.cell_sizes.split(",") if s.strip())
    budget = _budget_from_args(args)
    entries = []
    for origin, g in graphs:
        entry = {"origin": origin, "graph6": encode_graph6(g), "mates": []}
        controllable = det_walk(g) != 0
        for p in find_gm_partitions(g, cell_sizes):
            h = gm_switch(g, p)
            if h == g:
                continue
            mate = {
                "cell": list(p.cell),
                "graph6": encode_graph6(h),
                "keys_equal": spectrum_key(g) == spectrum_key(h),
                "isomorphic_to_input": is_isomorphic(g, h),
            }
            if controllable:
                rec = reconstruct_q(g, h)
                mate["q_level"] = rec.level
                mate["q_verified"] = rec.verified
                mate["q_level_prime_support"] = sorted(
                    level_prime_support(rec.q, budget))
                mate["level_divides_dn"] = level_divides_dn(g, rec.level)
            entry["mates"].append(mate)
        entries.append(entry)
    if args.format == "json":
        payload = {"schema": CLI_SCHEMA, "command": "mate", "seed": args.seed,
                   "entries": entries}
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        lines = []
        for entry in entries:
            for mate in entry["mates"]:
                lines.append(
                    f"{entry['origin']}  cell={mate['cell']}  "
                    f"mate={mate['graph6']}  keys_equal={mate['keys_equal']}  "
                    f"isomorphic={mate['isomorphic_to_input']}"
                    + (f"  level={mate['q_level']}"
                       f"  q_verified={mate['q_verified']}"
                       f"  level|dn={mate['level_divides_dn']}"
                       if "q_level" in mate else "")
                )
        _emit(args, "\n".join(lines) + "\n" if lines else "no mates found\n")
    return 0


def cmd_snf(args) -> int:
    graphs = _collect_inputs(args.input)
    entries = []
    texts = []
    for origin, g in graphs:
        w = walk_matrix(g)
        if det_walk(g) == 0:
            texts.append(f"{origin}: walk matrix is singular\n")
            entries.append({"origin": origin, "graph6": encode_graph6(g),
                            "singular": True, "snf_diag": None})
            continue
        diag = smith_normal_form(w).diag
        texts.append(f"{origin}: {_group_diag(diag)}\n")
        entries.append({"origin": origin, "graph6": encode_graph6(g),
                        "singular": False, "snf_diag": [str(d) for d in diag]})
    if args.format == "json":
        _emit(args, json.dumps({"schema": CLI_SCHEMA, "command": "snf",
                                "seed": args.seed, "entries": entries},
                               indent=2) + "\n")
    else:
        _emit(args, "".join(texts))
    return 0


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"environment variable {name} must be an integer")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dgs",
        description="Certify graphs as determined by their generalized "
                    "spectrum via walk-matrix arithmetic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_input: bool):
        if needs_input:
            p.add_argument("--input", action="append", required=True,
                           help="graph6 file (one record per line) or "
                                "adjacency-matrix text file; repeatable")
        p.add_argument("--output", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=0,
                       help="seed echoed into reports and driving any sampling")
        p.add_argument("--trial-bound", type=int,
                       default=_env_int("DGS_TRIAL_BOUND", 1_000_000),
                       help="trial-division bound for square-free checks")
        p.add_argument("--rho-budget", type=int,
                       default=_env_int("DGS_RHO_BUDGET", 400_000),
                       help="total Brent-rho iterations per square-free check")
        p.add_argument("--workers", type=int, default=1,
                       help="parallel workers for batch work")

    p = sub.add_parser("check", help="certify each input graph")
    common(p, needs_input=True)
    p.add_argument("--format", choices=("json", "human"), default="human")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("survey", help="measure the family density over G(n,1/2)")
    common(p, needs_input=False)
    p.add_argument("--sizes", default="10,20,30", help="comma-separated orders")
    p.add_argument("--samples", type=int, default=1000, help="samples per order")
    p.add_argument("--format", choices=("csv", "json", "human"), default="csv")
    p.set_defaults(func=cmd_survey)

    p = sub.add_parser("oracle", help="exhaustive cospectrality report (n <= 7)")
    common(p, needs_input=False)
    p.add_argument("--sizes", default="1,2,3,4,5,6", help="comma-separated orders")
    p.add_argument("--format", choices=("json", "human"), default="human")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("mate", help="switching mates plus Q forensics")
    common(p, needs_input=True)
    p.add_argument("--cell-sizes", default="4", help="switching cell sizes")
    p.add_argument("--format", choices=("json", "human"), default="human")
    p.set_defaults(func=cmd_mate)

    p = sub.add_parser("snf", help="Smith normal form of the walk matrix")
    common(p, needs_input=True)
    p.add_argument("--format", choices=("json", "human"), default="human")
    p.set_defaults(func=cmd_snf)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
