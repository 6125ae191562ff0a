"""Cop-number upper bounds from treewidth, tree decompositions and retract covers."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

from .cover import PoolLimits, RccResult, RetractCatalog, candidate_retracts, rcc
from .decomposition import (
    TreeDecomposition,
    clique_tree,
    pairwise_clique_intersections,
    validate_td,
)
from .errors import InvalidInputError, PursuitError, SoundnessError
from .graph import Graph
from .solver import DEFAULT_STATE_BUDGET, cop_number
from .treewidth import TreewidthResult, treewidth_exact

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Eq1Result:
    value: int
    treewidth: int
    tw_optimal: bool


def eq1_bound(g: Graph, tw: TreewidthResult | None = None) -> Eq1Result:
    """floor(tw/2) + 1. A non-optimal treewidth witness still yields a valid bound."""
    tw = tw or treewidth_exact(g)
    return Eq1Result(tw.width // 2 + 1, tw.width, tw.optimal)


@dataclass
class DecompositionBound:
    value: int
    decomposition: TreeDecomposition
    per_bag: list[RccResult]

    @property
    def max_rcc(self) -> int:
        return max(r.value for r in self.per_bag)

    @property
    def pool_relative(self) -> bool:
        """True unless every bag's rcc is the exact parameter."""
        return not all(r.exact for r in self.per_bag)

    @property
    def covers(self):
        return [r.cover for r in self.per_bag]


def bag_rccs(
    g: Graph,
    t: TreeDecomposition,
    limits: PoolLimits | None = None,
    catalog: RetractCatalog | None = None,
    mode: str = "exact",
) -> list[RccResult]:
    report = validate_td(g, t)
    if not report.valid:
        raise InvalidInputError(f"invalid tree decomposition: {report.violations[0].message}")
    catalog = catalog or RetractCatalog(g, limits)
    out = []
    for bag in t.bags:
        pool = candidate_retracts(g, bag, catalog=catalog)
        out.append(rcc(g, bag, pool, mode, catalog.limits.branch_budget))
    return out


def theorem1_bound(
    g: Graph,
    t: TreeDecomposition,
    limits: PoolLimits | None = None,
    catalog: RetractCatalog | None = None,
    mode: str = "exact",
) -> DecompositionBound:
    """2 * max over bags of rcc(<B>), two teams leapfrogging along the tree."""
    per_bag = bag_rccs(g, t, limits, catalog, mode)
    return DecompositionBound(2 * max(r.value for r in per_bag), t, per_bag)


def theorem_main2_bound(
    g: Graph,
    t: TreeDecomposition,
    limits: PoolLimits | None = None,
    catalog: RetractCatalog | None = None,
    mode: str = "exact",
    per_bag: list[RccResult] | None = None,
) -> DecompositionBound | None:
    """max rcc + 1 when all bags meet in cliques; None when that fails."""
    if not validate_td(g, t).valid:
        raise InvalidInputError("invalid tree decomposition")
    if not pairwise_clique_intersections(g, t):
        return None
    per_bag = per_bag if per_bag is not None else bag_rccs(g, t, limits, catalog, mode)
    return DecompositionBound(max(r.value for r in per_bag) + 1, t, per_bag)


@dataclass(frozen=True)
class CopWinCertificate:
    decomposition: TreeDecomposition


def theorem_i_bound(g: Graph) -> CopWinCertificate | None:
    """Cop-win certificate from a clique tree, or None when the graph is not chordal."""
    if not g.is_connected():
        return None
    t = clique_tree(g)
    return CopWinCertificate(t) if t is not None else None


@dataclass
class BoundReport:
    graph_id: str
    n: int
    m: int
    decompositions: list[str] = field(default_factory=list)
    exact_c: int | None = None
    exact_reason: str = ""
    eq1: Eq1Result | None = None
    thm1: DecompositionBound | None = None
    thm1_all: list[DecompositionBound] = field(default_factory=list)
    thm_i: CopWinCertificate | None = None
    thm_main2: DecompositionBound | None = None
    thm_main2_reason: str = ""
    capt_bound: int | None = None
    errors: dict[str, str] = field(default_factory=dict)

    def bounds(self) -> dict[str, int]:
        out = {}
        if self.eq1 is not None:
            out["eq1"] = self.eq1.value
        if self.thm1 is not None:
            out["thm1"] = self.thm1.value
        if self.thm_main2 is not None:
            out["thm_main2"] = self.thm_main2.value
        if self.thm_i is not None:
            out["thm_i"] = 1
        return out

    def soundness_violations(self) -> list[str]:
        if self.exact_c is None:
            return []
        return [
            f"c(G)={self.exact_c} exceeds {name}={value}"
            for name, value in self.bounds().items()
            if self.exact_c > value
        ]

    def to_json(self) -> dict:
        def dec(b: DecompositionBound | None):
            if b is None:
                return None
            return {
                "value": b.value,
                "decomposition": b.decomposition.name,
                "bags": [list(x) for x in b.decomposition.bags],
                "tree_edges": [list(e) for e in b.decomposition.tree_edges],
                "per_bag_rcc": [r.value for r in b.per_bag],
                "pool_relative": b.pool_relative,
                "witness_covers": [r.cover.to_json() for r in b.per_bag],
            }

        return {
            "graph": {"id": self.graph_id, "n": self.n, "m": self.m},
            "decompositions": self.decompositions,
            "exact_c": self.exact_c,
            "exact_reason": self.exact_reason or None,
            "bounds": {
                "eq1": None
                if self.eq1 is None
                else {
                    "value": self.eq1.value,
                    "treewidth": self.eq1.treewidth,
                    "treewidth_optimal": self.eq1.tw_optimal,
                },
                "thm1": dec(self.thm1),
                "thm1_per_decomposition": {b.decomposition.name: b.value for b in self.thm1_all},
                "thm_i_copwin": None
                if self.thm_i is None
                else {"copwin": True, "decomposition": [list(x) for x in self.thm_i.decomposition.bags]},
                "thm_main2": dec(self.thm_main2),
                "thm_main2_reason": self.thm_main2_reason or None,
                "capt_bound": self.capt_bound,
            },
            "soundness_ok": not self.soundness_violations(),
            "errors": dict(sorted(self.errors.items())),
        }


def best_bound_report(
    g: Graph,
    decomps: Sequence[TreeDecomposition],
    limits: PoolLimits | None = None,
    exact_k_max: int = 4,
    state_budget: int = DEFAULT_STATE_BUDGET,
    tw: TreewidthResult | None = None,
    check: bool = True,
) -> BoundReport:
    """Every bound for g, minimised over `decomps`, plus c(G) when the solver can afford it.

    Raises SoundnessError if `check` is set and an exact value beats a bound.
    """
    report = BoundReport(g.name or f"graph-{g.n}-{g.m}", g.n, g.m)
    report.decompositions = [f"{i}:{t.name or 'unnamed'}" for i, t in enumerate(decomps)]
    catalog = RetractCatalog(g, limits)
    try:
        report.exact_c = cop_number(g, exact_k_max, state_budget)
    except PursuitError as exc:
        report.exact_reason = f"{type(exc).__name__}: {exc}"
    try:
        report.eq1 = eq1_bound(g, tw)
    except (PursuitError, ValueError) as exc:
        report.errors["eq1"] = str(exc)
    main2_candidates = []
    for t in decomps:
        try:
            b = theorem1_bound(g, t, catalog=catalog)
        except PursuitError as exc:
            report.errors[f"thm1:{t.name}"] = f"{type(exc).__name__}: {exc}"
            continue
        report.thm1_all.append(b)
        if report.thm1 is None or b.value < report.thm1.value:
            report.thm1 = b
        m2 = theorem_main2_bound(g, t, per_bag=b.per_bag)
        if m2 is not None:
            main2_candidates.append(m2)
    if main2_candidates:
        report.thm_main2 = min(main2_candidates, key=lambda b: b.value)
    else:
        report.thm_main2_reason = "no supplied decomposition has clique intersections"
    report.thm_i = theorem_i_bound(g)
    bad = report.soundness_violations()
    if check and bad:
        raise SoundnessError("; ".join(bad))
    return report
