"""Query workloads over built structures, with oracle checks and counter tables."""
from __future__ import annotations

import csv
import io
import json
import random
import time
from dataclasses import dataclass

from .baseline import BaselineIndex
from .stats import QueryStats
from .structures import CERTIFIED, Built, build_structure
from .text import Text

__all__ = ["SCHEMA", "COLUMNS", "OracleMismatch", "Workload", "random_pairs", "run_cell", "run_bench", "render"]

SCHEMA = "lce-bench/1"

COLUMNS = [
    "schema", "text", "n", "structure", "tau", "tau_eff", "words", "words_per_block",
    "samples", "queries", "max_char_comparisons", "mean_char_comparisons",
    "max_fp_evaluations", "mean_fp_evaluations", "max_reduction_rounds",
    "mean_reduction_rounds", "max_checks", "certificates",
]
TIMING_COLUMNS = ["build_seconds", "query_seconds"]


class OracleMismatch(AssertionError):
    def __init__(self, structure: str, tau: int, i: int, j: int, got: int, expected: int):
        super().__init__(f"{structure} tau={tau}: LCE({i},{j}) = {got}, oracle says {expected}")
        self.witness = {"structure": structure, "tau": tau, "i": i, "j": j, "got": got, "expected": expected}


@dataclass
class Workload:
    text: Text
    taus: list[int]
    structures: list[str]
    pairs: list[tuple[int, int]] | None = None  # explicit queries
    queries: int = 0  # random queries when ``pairs`` is None
    seed: int = 0
    checks: str = "oracle"  # oracle, invariants or none
    eps: float = 0.5
    timing: bool = False


def random_pairs(n: int, count: int, seed: int, max_distance: int | None = None) -> list[tuple[int, int]]:
    """Uniform pairs, or pairs at distance <= max_distance."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        i = rng.randrange(n)
        if max_distance is None:
            j = rng.randrange(n)
        else:
            j = min(n - 1, max(0, i + rng.randint(-max_distance, max_distance)))
        out.append((i, j))
    return out


def run_cell(
    built: Built,
    pairs: list[tuple[int, int]],
    oracle: BaselineIndex | None,
    debug: bool = False,
) -> tuple[dict, float]:
    """Run the queries of one (structure, tau) cell; returns counters and seconds."""
    agg = {
        "max_char_comparisons": 0, "sum_char": 0,
        "max_fp_evaluations": 0, "sum_fp": 0,
        "max_reduction_rounds": 0, "sum_rounds": 0,
        "max_checks": 0, "certificates": 0,
    }
    bound = built.tau * built.tau
    start = time.perf_counter()
    for i, j in pairs:
        st = QueryStats()
        got = built.query(i, j, st, debug)
        if oracle is not None:
            expected = oracle.lce(i, j)
            if st.path == CERTIFIED:
                if expected > bound:
                    raise OracleMismatch(built.kind, built.tau, i, j, got, expected)
            elif got != expected:
                raise OracleMismatch(built.kind, built.tau, i, j, got, expected)
        agg["certificates"] += st.path == CERTIFIED
        agg["max_char_comparisons"] = max(agg["max_char_comparisons"], st.char_comparisons)
        agg["max_fp_evaluations"] = max(agg["max_fp_evaluations"], st.fp_evaluations)
        agg["max_reduction_rounds"] = max(agg["max_reduction_rounds"], st.reduction_rounds)
        agg["max_checks"] = max(agg["max_checks"], st.checks)
        agg["sum_char"] += st.char_comparisons
        agg["sum_fp"] += st.fp_evaluations
        agg["sum_rounds"] += st.reduction_rounds
    elapsed = time.perf_counter() - start
    q = max(len(pairs), 1)
    row = {
        "max_char_comparisons": agg["max_char_comparisons"],
        "mean_char_comparisons": round(agg["sum_char"] / q, 4),
        "max_fp_evaluations": agg["max_fp_evaluations"],
        "mean_fp_evaluations": round(agg["sum_fp"] / q, 4),
        "max_reduction_rounds": agg["max_reduction_rounds"],
        "mean_reduction_rounds": round(agg["sum_rounds"] / q, 4),
        "max_checks": agg["max_checks"],
        "certificates": agg["certificates"],
    }
    return row, elapsed


def run_bench(w: Workload) -> list[dict]:
    """One row per (structure, tau), sorted by that key.

    Rows are only produced when there are queries to run; an empty query
    list gives an empty table.
    """
    t = w.text
    n = t.n
    if w.checks not in ("oracle", "invariants", "none"):
        raise ValueError(f"unknown checks mode {w.checks!r}")
    if w.pairs is not None:
        for i, j in w.pairs:
            t.check_index(i, j)
    if (w.pairs is not None and not w.pairs) or (w.pairs is None and w.queries <= 0):
        return []
    oracle = BaselineIndex(t)
    rows = []
    for kind in w.structures:
        for tau in w.taus:
            start = time.perf_counter()
            built = build_structure(kind, t, tau, seed=w.seed, eps=w.eps, oracle=oracle)
            build_seconds = time.perf_counter() - start
            if w.pairs is not None:
                pairs = w.pairs
            else:
                pairs = random_pairs(n, w.queries, w.seed, tau if kind == "nearby" else None)
            if kind == "nearby":
                pairs = [(i, j) for i, j in pairs if abs(i - j) <= built.tau]
            counters, query_seconds = run_cell(
                built, pairs, oracle if w.checks == "oracle" else None, debug=w.checks == "invariants"
            )
            blocks = n / built.tau
            row = {
                "schema": SCHEMA,
                "text": t.source or t.digest()[:16],
                "n": n,
                "structure": kind,
                "tau": tau,
                "tau_eff": built.tau,
                "words": built.words,
                "words_per_block": round(built.words / blocks, 4),
                "samples": built.samples,
                "queries": len(pairs),
                **counters,
            }
            if w.timing:
                row["build_seconds"] = round(build_seconds, 6)
                row["query_seconds"] = round(query_seconds, 6)
            rows.append(row)
    rows.sort(key=lambda r: (r["structure"], r["tau"]))
    return rows


def render(rows: list[dict], fmt: str = "csv", timing: bool = False) -> str:
    columns = COLUMNS + (TIMING_COLUMNS if timing else [])
    if fmt == "json":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
    if fmt != "csv":
        raise ValueError(f"unknown format {fmt!r}")
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r)
    return buf.getvalue()
