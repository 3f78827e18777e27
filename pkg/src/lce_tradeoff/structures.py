"""One build/query/serialize interface over every structure kind."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .baseline import BaselineIndex
from .dc import DcStructure, build_dc, combined_query, dc_query
from .derand import PhiTuple, build_derand_mc
from .det import DetStructure, build_det, det_query
from .fingerprint import pick_random_phi
from .mc import McStructure, build_mc, mc_query
from .nearby import NearbyStructure, build_nearby, nearby_query
from .stats import QueryStats
from .text import Text
from .verify import VerificationReport, build_las_vegas

__all__ = ["KINDS", "Built", "build_structure", "restore_structure"]

KINDS = ("det", "nearby", "mc", "lv", "dc", "combined", "derand", "baseline")

CERTIFIED = "dc-certificate"  # stats.path for a dc answer that is only a bound


@dataclass
class Built:
    kind: str
    text: Text
    params: dict
    parts: dict = field(default_factory=dict)
    report: VerificationReport | None = None

    @property
    def tau(self) -> int:
        return self.params["tau_eff"]

    @property
    def words(self) -> int:
        return sum(part.words for part in self.parts.values())

    @property
    def samples(self) -> int:
        return sum(getattr(part, "samples", 0) for part in self.parts.values())

    def query(self, i: int, j: int, stats: QueryStats | None = None, debug: bool = False) -> int:
        """LCE(i, j). For a bare dc structure a certificate returns tau**2 and
        sets ``stats.path`` to ``dc-certificate``."""
        t, kind, parts = self.text, self.kind, self.parts
        if kind == "det":
            return det_query(parts["det"], t, i, j, stats, check=debug)
        if kind == "nearby":
            return nearby_query(parts["nearby"], t, i, j, stats)
        if kind in ("mc", "lv", "derand"):
            return mc_query(parts["mc"], t, i, j, stats, debug)
        if kind == "combined":
            return combined_query(parts["mc"], parts["dc"], t, i, j, stats, debug)
        if kind == "dc":
            res = dc_query(parts["dc"], t, i, j)
            if stats is not None:
                stats.path = "dc" if res.exact else CERTIFIED
            return res.value
        if kind == "baseline":
            if stats is not None:
                stats.path = "baseline"
            return parts["baseline"].lce(i, j)
        raise ValueError(f"unknown structure kind {kind!r}")

    def to_arrays(self) -> dict[str, np.ndarray]:
        arrays: dict[str, np.ndarray] = {}
        for name, part in self.parts.items():
            if name == "baseline":
                sub = {"sa": part.sa, "lcp": part.lcp}
            else:
                sub = part.to_arrays()
            prefix = "" if len(self.parts) == 1 else name + "."
            arrays.update({prefix + k: v for k, v in sub.items()})
        return arrays


class _BaselinePart:
    """Wraps BaselineIndex so that ``words`` counts the forward index only."""

    def __init__(self, index: BaselineIndex):
        self.index = index
        self.sa = index.sa
        self.lcp = index.lcp

    @property
    def words(self) -> int:
        return 3 * self.index.n + self.index.fwd.rmq.words

    def lce(self, i: int, j: int) -> int:
        return self.index.lce(i, j)


def _phi_params(ms: McStructure) -> dict:
    return {"p": ms.p, "xs": list(ms.xs)}


def build_structure(
    kind: str,
    t: Text,
    tau: int,
    *,
    seed: int = 0,
    eps: float = 0.5,
    c: float = 1.0,
    oracle: BaselineIndex | None = None,
) -> Built:
    if kind not in KINDS:
        raise ValueError(f"unknown structure kind {kind!r}; choose from {', '.join(KINDS)}")
    n = t.n
    if not 1 <= tau:
        raise ValueError("tau must be >= 1")
    if kind in ("det", "nearby") and tau > n:
        raise ValueError(f"tau={tau} exceeds n={n}")
    if oracle is None and kind in ("det", "dc", "combined", "derand", "baseline"):
        oracle = BaselineIndex(t)
    params: dict = {"n": n, "tau": tau, "tau_eff": tau, "text": t.source, "text_sha256": t.digest()}
    built = Built(kind, t, params)
    if kind == "det":
        built.parts["det"] = build_det(t, tau, oracle)
    elif kind == "nearby":
        built.parts["nearby"] = build_nearby(t, tau)
    elif kind == "mc":
        ms = build_mc(t, tau, pick_random_phi(n, c, seed=seed))
        built.parts["mc"] = ms
        params.update(seed=seed, c=c, **_phi_params(ms))
    elif kind == "lv":
        ms, report = build_las_vegas(t, tau, seed=seed, c=c)
        built.parts["mc"] = ms
        built.report = report
        params.update(seed=seed, c=c, trials=report.trials, **_phi_params(ms))
    elif kind == "derand":
        ms = build_derand_mc(t, tau, eps, oracle=oracle)
        built.parts["mc"] = ms
        params.update(eps=eps, **_phi_params(ms))
    elif kind == "dc":
        built.parts["dc"] = build_dc(t, tau, oracle)
    elif kind == "combined":
        ms = build_mc(t, tau, pick_random_phi(n, c, seed=seed))
        built.parts["mc"] = ms
        built.parts["dc"] = build_dc(t, ms.tau, oracle)
        params.update(seed=seed, c=c, **_phi_params(ms))
    elif kind == "baseline":
        built.parts["baseline"] = _BaselinePart(oracle)
    if "mc" in built.parts:
        params["tau_eff"] = built.parts["mc"].tau
    return built


def restore_structure(kind: str, t: Text, params: dict, arrays: dict[str, np.ndarray]) -> Built:
    """Inverse of ``Built.to_arrays`` given the same text and parameters."""
    n, tau = params["n"], params["tau_eff"]
    if t.n != n or t.digest() != params["text_sha256"]:
        raise ValueError("text does not match the one the structure was built on")
    built = Built(kind, t, dict(params))

    def sub(prefix: str) -> dict[str, np.ndarray]:
        return {k[len(prefix):]: v for k, v in arrays.items() if k.startswith(prefix)}

    def restore_mc(a: dict[str, np.ndarray]) -> McStructure:
        ms = McStructure.from_arrays(n, tau, params["p"], a, params.get("seed"))
        if kind == "derand":
            ms.certificate = PhiTuple(params["p"], tuple(params["xs"]), params["eps"])
        return ms

    if kind == "det":
        built.parts["det"] = DetStructure.from_arrays(tau, n, arrays)
    elif kind == "nearby":
        built.parts["nearby"] = NearbyStructure.from_arrays(tau, n, arrays)
    elif kind in ("mc", "lv", "derand"):
        built.parts["mc"] = restore_mc(arrays)
    elif kind == "dc":
        built.parts["dc"] = DcStructure.from_arrays(tau, n, arrays)
    elif kind == "combined":
        built.parts["mc"] = restore_mc(sub("mc."))
        built.parts["dc"] = DcStructure.from_arrays(tau, n, sub("dc."))
    elif kind == "baseline":
        built.parts["baseline"] = _BaselinePart(BaselineIndex(t))
    else:
        raise ValueError(f"unknown structure kind {kind!r}")
    return built
