"""Random-graph experiment: how often does G(n, 1/2) land in the
square-free family?

Every sample gets its own PRNG stream derived from (seed, n, index), so the
measured counts are independent of sharding and worker layout; only the
wall-clock column varies between runs.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .arith import FactorBudget
from .criterion import VerdictKind, check_fn
from .graphs import random_gnp_half
from .rng import derive_seed


@dataclass(frozen=True)
class SurveyRow:
    n: int
    samples: int
    count_fn: int
    count_unknown: int
    fraction: float
    seed: int
    elapsed_ms: int


def _tally_range(args: Tuple[int, int, int, int, Optional[FactorBudget]]) -> Tuple[int, int]:
    n, seed, start, stop, budget = args
    count_fn = 0
    count_unknown = 0
    for i in range(start, stop):
        g = random_gnp_half(n, derive_seed(seed, n, i))
        kind = check_fn(g, budget).kind
        if kind is VerdictKind.DGS_BY_FN:
            count_fn += 1
        elif kind is VerdictKind.FACTORIZATION_UNKNOWN:
            count_unknown += 1
    return count_fn, count_unknown


def run_survey(
    sizes: Sequence[int],
    samples: int,
    seed: int,
    budget: Optional[FactorBudget] = None,
    shards: int = 1,
    workers: int = 1,
) -> List[SurveyRow]:
    """One row per requested order.  count_fn counts certified members,
    count_unknown the samples whose square-free check exhausted its budget
    (reported, never silently folded into either side)."""
    if samples < 1:
        raise ValueError("need at least one sample per order")
    if shards < 1 or workers < 1:
        raise ValueError("shards and workers must be positive")
    rows = []
    for n in sizes:
        t0 = time.monotonic()
        bounds = [
            (samples * s // shards, samples * (s + 1) // shards)
            for s in range(shards)
        ]
        tasks = [(n, seed, a, b, budget) for a, b in bounds if a < b]
        if workers > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_tally_range, tasks))
        else:
            parts = [_tally_range(t) for t in tasks]
        count_fn = sum(p[0] for p in parts)
        count_unknown = sum(p[1] for p in parts)
        rows.append(
            SurveyRow(
                n=n,
                samples=samples,
                count_fn=count_fn,
                count_unknown=count_unknown,
                fraction=count_fn / samples,
                seed=seed,
                elapsed_ms=int((time.monotonic() - t0) * 1000),
            )
        )
    return rows


CSV_HEADER = "n,samples,count_fn,count_unknown,fraction,seed,elapsed_ms"


def rows_to_csv(rows: Sequence[SurveyRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.n},{r.samples},{r.count_fn},{r.count_unknown},"
            f"{r.fraction:.4f},{r.seed},{r.elapsed_ms}"
        )
    return "\n".join(lines) + "\n"
