"""Continuous-variable gate decomposition of Bose-Hubbard time evolution."""
from .circuit import Circuit, Gate, GateHistogram, GateKind, count_gates, deserialize, serialize
from .counting import closed_form_grid, compare
from .decompose import (ModelParams, TrotterPlan, build_full_circuit, build_trotter_step, choose_K,
                        make_plan)
from .lattice import LatticeSpec, build_chain, build_grid

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "Gate",
    "GateHistogram",
    "GateKind",
    "LatticeSpec",
    "ModelParams",
    "TrotterPlan",
    "build_chain",
    "build_full_circuit",
    "build_grid",
    "build_trotter_step",
    "choose_K",
    "closed_form_grid",
    "compare",
    "count_gates",
    "deserialize",
    "make_plan",
    "serialize",
]
