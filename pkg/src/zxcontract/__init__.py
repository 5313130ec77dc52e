"""Tensor-network contraction of circuit amplitudes via ZX-diagram rewriting."""

__version__ = "0.1.0"

from .circuit import Circuit, CircuitError, Gate, GateKind, parse_circuit, random_grid_circuit, to_zx
from .engine import Network, circuit_network, execute_plan, hybrid_to_network
from .oracle import statevector_amplitude
from .orderfinder import ContractionPlan, find_order, find_slices, parallel_trials
from .rewrite import local_complement, pivot, split_high_degree, unfuse
from .simplify import AnnealConfig, CostFn, Mode, PlanConfig, anneal, pipeline, standard_pipeline
from .zxgraph import ClosedGraphLike, ZxDiagram, close_to_hybrid, eval_hybrid, to_graph_like

__all__ = [
    "AnnealConfig",
    "Circuit",
    "CircuitError",
    "ClosedGraphLike",
    "ContractionPlan",
    "CostFn",
    "Gate",
    "GateKind",
    "Mode",
    "Network",
    "PlanConfig",
    "ZxDiagram",
    "anneal",
    "circuit_network",
    "close_to_hybrid",
    "eval_hybrid",
    "execute_plan",
    "find_order",
    "find_slices",
    "hybrid_to_network",
    "local_complement",
    "parallel_trials",
    "parse_circuit",
    "pipeline",
    "pivot",
    "random_grid_circuit",
    "split_high_degree",
    "standard_pipeline",
    "statevector_amplitude",
    "to_graph_like",
    "to_zx",
    "unfuse",
]
