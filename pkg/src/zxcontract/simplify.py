"""Pivot-based simulated annealing and the end-to-end simulation pipeline."""

from __future__ import annotations

import csv
import enum
import hashlib
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import engine, orderfinder, rewrite, twtools
from .circuit import Circuit, to_zx
from .zxgraph import ClosedGraphLike, close_to_hybrid, to_graph_like

_INV_E = math.exp(-1.0)

# accept() works on log(log(cost)); widths can be 0 or 1, so costs are shifted
COST_SHIFT = 2.0


def temperature(prog: float) -> float:
    """Exponential schedule going from 1 at ``prog = 0`` to 0 at ``prog = 1``."""
    if not 0.0 <= prog <= 1.0:
        raise ValueError(f"progress must lie in [0, 1], got {prog}")
    if prog == 0.0:
        return 1.0
    if prog == 1.0:
        return 0.0
    return (math.exp(-prog) - _INV_E) / (1.0 - _INV_E)


def accept(cost: float, new_cost: float, tau: float) -> float:
    """Probability of moving from a solution of ``cost`` to one of ``new_cost``."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"temperature must lie in [0, 1], got {tau}")
    if new_cost < cost:
        return 1.0
    if cost <= 1.0 or new_cost <= 1.0:
        raise ValueError("costs must exceed 1")
    if tau == 0.0:
        return 0.0
    return math.exp(-math.log(math.log(new_cost) - math.log(cost) + 1.0) / tau)


class CostFn(enum.Enum):
    QUICK_TW = "quicktw"
    MIN_FILL_TW = "minfill"
    FLOP_ESTIMATE = "flops"


class Mode(enum.Enum):
    ANNEAL = "anneal"
    GREEDY = "greedy"


@dataclass
class AnnealConfig:
    nb_steps: int = 100
    seed: int = 0
    cost_fn: CostFn = CostFn.QUICK_TW
    mode: Mode = Mode.ANNEAL

    def __post_init__(self):
        if self.nb_steps < 0:
            raise ValueError("nb_steps must be >= 0")
        self.cost_fn = CostFn(self.cost_fn)
        self.mode = Mode(self.mode)


@dataclass
class PlanConfig:
    """Settings of everything downstream of the rewriting."""

    trials: int = 1
    seeds: list[int] | None = None
    bb_budget_ms: float | None = None
    bb_expansions: int | None = orderfinder.DEFAULT_BB_EXPANSIONS
    target_rank: int = orderfinder.DEFAULT_TARGET_RANK
    workers: int = 1

    def trial_seeds(self) -> list[int]:
        return list(self.seeds) if self.seeds is not None else list(range(self.trials))


@dataclass
class AnnealStep:
    step: int
    cost: float
    accepted: bool
    tau: float


@dataclass
class AnnealReport:
    initial_cost: float | None = None
    rows: list[AnnealStep] = field(default_factory=list)
    best_cost: float | None = None
    best_step: int = 0  # 0 is the input, k >= 1 the candidate of step k

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "cost", "accepted", "tau"])
        for r in self.rows:
            w.writerow([r.step, repr(float(r.cost)), int(r.accepted), repr(r.tau)])
        return buf.getvalue()


# ---------------------------------------------------------------------------
# cost functions


def plan_hybrid(g: ClosedGraphLike, pcfg: PlanConfig | None = None):
    """Split, build the network, pre-contract and find the cheapest plan."""
    pcfg = pcfg or PlanConfig()
    split = rewrite.split_high_degree(g)
    net = engine.hybrid_to_network(split)
    return net, plan_network(net, pcfg), split


def plan_network(net: engine.Network, pcfg: PlanConfig) -> orderfinder.ContractionPlan:
    return plan_structure(net.structure(), pcfg)


def plan_structure(structure: dict, pcfg: PlanConfig) -> orderfinder.ContractionPlan:
    graph = engine.structure_graph(structure)
    pre = twtools.precontract(graph)
    return orderfinder.parallel_trials(
        graph,
        structure=structure,
        n_trials=len(pcfg.trial_seeds()),
        seeds=pcfg.trial_seeds(),
        workers=pcfg.workers,
        bb_budget_ms=pcfg.bb_budget_ms,
        bb_expansions=pcfg.bb_expansions,
        target_rank=pcfg.target_rank,
        prefix=pre.contracted,
    )


def min_fill_tw(g) -> int:
    pre = twtools.precontract(g)
    if pre.graph.number_of_edges() == 0:
        return 0
    lg, _ = twtools.line_graph(pre.graph)
    return twtools.treewidth_min_fill(lg).width


def graph_cost(g: ClosedGraphLike, cost_fn: CostFn, pcfg: PlanConfig | None = None) -> float:
    """Cost of a closed graph-like diagram under one of the proxy cost functions."""
    cost_fn = CostFn(cost_fn)
    if cost_fn is CostFn.QUICK_TW:
        return float(twtools.quick_tw(g.to_multigraph()))
    if cost_fn is CostFn.MIN_FILL_TW:
        return float(min_fill_tw(g.to_multigraph()))
    split = rewrite.split_high_degree(g)
    plan = plan_structure(engine.hybrid_structure(split), pcfg or PlanConfig())
    return float(plan.predicted_cost)


# ---------------------------------------------------------------------------
# annealing


def anneal(
    g: ClosedGraphLike, cfg: AnnealConfig, pcfg: PlanConfig | None = None
) -> tuple[ClosedGraphLike, AnnealReport]:
    """Simulated annealing over single random pivots; returns the best diagram seen.

    ``pcfg`` is only used by the FLOP cost function.
    """
    report = AnnealReport()
    if cfg.nb_steps == 0:
        return g, report
    rng = np.random.default_rng(cfg.seed)
    current = g
    e_current = graph_cost(current, cfg.cost_fn, pcfg)
    best, e_best = current, e_current
    report.initial_cost = e_current
    for step in range(cfg.nb_steps):
        edges = current.edges()
        tau = 0.0 if cfg.mode is Mode.GREEDY else temperature(step / cfg.nb_steps)
        if not edges:
            report.rows.append(AnnealStep(step + 1, e_current, False, tau))
            continue
        u, v = edges[int(rng.integers(len(edges)))]
        candidate = rewrite.pivot(current, u, v)
        e_cand = graph_cost(candidate, cfg.cost_fn, pcfg)
        if e_cand < e_best:
            best, e_best = candidate, e_cand
            report.best_step = step + 1
        prob = accept(e_current + COST_SHIFT, e_cand + COST_SHIFT, tau)
        took = bool(prob > rng.random())
        if took:
            current, e_current = candidate, e_cand
        report.rows.append(AnnealStep(step + 1, e_cand, took, tau))
    report.best_cost = e_best
    return best, report


# ---------------------------------------------------------------------------
# pipeline


@dataclass
class PipelineResult:
    plan: orderfinder.ContractionPlan
    network: engine.Network
    amplitude: complex | None
    anneal_report: AnnealReport
    stages: dict[str, dict]
    timings: dict[str, float]
    measured_cost: int | None = None
    subtasks: int | None = None

    @property
    def width(self) -> int:
        return self.plan.max_rank


def circuit_digest(c: Circuit) -> str:
    return hashlib.sha256(c.to_text().encode()).hexdigest()


def _graph_stats(g) -> dict:
    degs = [d for _, d in g.degree()]
    return {"nodes": g.number_of_nodes(), "edges": g.number_of_edges(), "max_degree": max(degs, default=0)}


def pipeline(
    c: Circuit,
    cfg: AnnealConfig | None = None,
    pcfg: PlanConfig | None = None,
    x: str | None = None,
    contract: bool = True,
) -> PipelineResult:
    """Circuit -> ZX -> graph-like -> anneal -> split -> pre-contract -> plan -> amplitude.

    ``cfg=None`` or ``nb_steps=0`` skips rewriting (the unoptimized ZX method).
    """
    cfg = cfg or AnnealConfig(nb_steps=0)
    pcfg = pcfg or PlanConfig()
    timings: dict[str, float] = {}
    stages: dict[str, dict] = {}
    t0 = time.perf_counter()

    def tick(name):
        nonlocal t0
        now = time.perf_counter()
        timings[name] = now - t0
        t0 = now

    d = to_zx(c, x)
    stages["zx"] = d.stats()
    tick("to_zx")
    g = close_to_hybrid(to_graph_like(d))
    stages["graph_like"] = g.stats()
    tick("graph_like")
    g, rep = anneal(g, cfg, pcfg)
    stages["annealed"] = g.stats()
    tick("anneal")
    split = rewrite.split_high_degree(g)
    stages["split"] = split.stats()
    tick("split")
    net = engine.hybrid_to_network(split)
    stages["precontracted"] = _graph_stats(twtools.precontract(net.graph()).graph)
    plan = plan_network(net, pcfg)
    tick("find_order")
    return _finish(plan, net, rep, stages, timings, contract, pcfg)


def standard_pipeline(
    c: Circuit, pcfg: PlanConfig | None = None, x: str | None = None, contract: bool = True
) -> PipelineResult:
    """Baseline: the gate-by-gate network through the same pre-contraction and order finder."""
    pcfg = pcfg or PlanConfig()
    t0 = time.perf_counter()
    net = engine.circuit_network(c, x)
    stages = {
        "network": _graph_stats(net.graph()),
        "precontracted": _graph_stats(twtools.precontract(net.graph()).graph),
    }
    plan = plan_network(net, pcfg)
    timings = {"find_order": time.perf_counter() - t0}
    return _finish(plan, net, AnnealReport(), stages, timings, contract, pcfg)


def _finish(plan, net, rep, stages, timings, contract, pcfg) -> PipelineResult:
    res = PipelineResult(plan, net, None, rep, stages, timings)
    if contract:
        t0 = time.perf_counter()
        out = engine.execute_plan(net, plan, workers=pcfg.workers)
        timings["contract"] = time.perf_counter() - t0
        res.amplitude = out.amplitude
        res.measured_cost = out.measured_cost
        res.subtasks = out.subtasks
    return res
