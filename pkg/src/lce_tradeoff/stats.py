"""Per-query instrumentation counters."""
from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class QueryStats:
    """Counters filled in by one query; every field starts at zero.

    ``char_comparisons`` counts symbol-pair comparisons, ``fp_evaluations``
    counts fingerprint work (one per check plus one per extension step),
    ``reduction_rounds`` counts rounds of the deterministic structure, and
    ``checks`` counts calls to the fingerprint comparison. ``path`` names the
    route that produced the answer.
    """

    char_comparisons: int = 0
    fp_evaluations: int = 0
    reduction_rounds: int = 0
    checks: int = 0
    align_comparisons: int = 0
    max_round_comparisons: int = 0
    path: str = ""
    wall_time: float = 0.0

    def as_dict(self, timing: bool = False) -> dict:
        out = asdict(self)
        if not timing:
            del out["wall_time"]
        return out
