"""Error-scaling studies: Trotter step count and commutator-block strength."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .decompose import ModelParams, TrotterPlan, build_trotter_step, emit_commutator_block
from .focksim import (circuit_unitary, exact_evolution, exact_hamiltonian, infidelity,
                      interior_block, momentum, position, random_states, expm_hermitian)
from .lattice import LatticeSpec

__all__ = [
    "NOISE_FLOOR",
    "fit_slope",
    "trotter_infidelities",
    "commutator_residuals",
    "ScalingReport",
    "trotter_scaling",
    "commutator_scaling",
]

#: Infidelities at or below this are indistinguishable from rounding.
NOISE_FLOOR = 1e-12


def fit_slope(xs, ys) -> float:
    """Least-squares slope of ``log y`` against ``log x``."""
    lx, ly = np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float))
    return float(np.polyfit(lx, ly, 1)[0])


def trotter_infidelities(lattice: LatticeSpec, J: float, U: float, V_dip: float, t: float,
                         Ks, d: int, seed: int = 0, num_states: int = 20,
                         max_level: int | None = None) -> list[float]:
    """Infidelity of the K-step circuit against ``exp(i t H)`` for each K."""
    H = exact_hamiltonian(ModelParams(J, U, V_dip, t, 1), lattice, d)
    exact = exact_evolution(H, t)
    states = random_states(d, lattice.num_sites, num_states, seed, max_level)
    out = []
    for K in Ks:
        plan = TrotterPlan(lattice, ModelParams(J, U, V_dip, t, int(K)))
        step = circuit_unitary(build_trotter_step(plan), d).matrix
        out.append(infidelity(exact, np.linalg.matrix_power(step, int(K)), states))
    return out


def commutator_generator(d: int) -> np.ndarray:
    """Truncated ``[x^3, p^3]`` (anti-Hermitian)."""
    x, p = position(d), momentum(d)
    x3, p3 = x @ x @ x, p @ p @ p
    return x3 @ p3 - p3 @ x3


def commutator_residuals(taus, d: int = 24, levels: int | None = None) -> list[float]:
    """Interior spectral-norm distance between the block and ``exp(tau^2 [x^3, p^3])``.

    ``tau`` is the parameter of the target exponential; the block is emitted
    with cubic strength ``tau / sqrt(2)``. ``levels`` defaults to ``d // 4``.
    """
    if levels is None:
        levels = d // 4
    herm = -1j * commutator_generator(d)
    out = []
    for tau in taus:
        block = circuit_unitary(Circuit(1, tuple(emit_commutator_block(0, tau / math.sqrt(2)))), d)
        target = expm_hermitian(herm, tau * tau)
        diff = interior_block(block.matrix - target, d, 1, levels)
        out.append(float(np.linalg.norm(diff, 2)))
    return out


@dataclass(frozen=True)
class ScalingReport:
    check_name: str
    xs: tuple[float, ...]
    errors: tuple[float, ...]
    slope: float | None
    window: tuple[float, float]
    cutoff: int
    note: str = ""

    @property
    def below_noise_floor(self) -> bool:
        return self.slope is None

    @property
    def passed(self) -> bool:
        if self.slope is None:
            return True
        return self.window[0] <= self.slope <= self.window[1]

    def to_document(self) -> dict:
        doc = {
            "check_name": self.check_name,
            "cutoff": self.cutoff,
            "x": list(self.xs),
            "error": list(self.errors),
            "slope": self.slope,
            "window": list(self.window),
            "pass": self.passed,
        }
        if self.slope is None:
            doc["status"] = "below noise floor"
        if self.note:
            doc["note"] = self.note
        return doc


def trotter_scaling(lattice: LatticeSpec, J: float, U: float, V_dip: float, t: float,
                    Ks=(1, 2, 4, 8, 16), d: int = 12, seed: int = 0,
                    window=(-1.3, -0.7)) -> ScalingReport:
    """Log-log slope of infidelity against K."""
    Ks = tuple(int(k) for k in Ks)
    if len(Ks) < 3 or any(b <= a for a, b in zip(Ks, Ks[1:])):
        raise ValueError("need at least three increasing K values")
    errs = trotter_infidelities(lattice, J, U, V_dip, t, Ks, d, seed)
    if max(errs) <= NOISE_FLOOR:
        return ScalingReport("trotter_infidelity_vs_K", Ks, tuple(errs), None, tuple(window), d)
    floor = [max(e, NOISE_FLOOR) for e in errs]
    slope = fit_slope(Ks, floor)
    amp = fit_slope(Ks, np.sqrt(floor))
    note = f"error-amplitude (sqrt infidelity) slope {amp:.4f}"
    return ScalingReport("trotter_infidelity_vs_K", Ks, tuple(errs), slope, tuple(window), d, note)


def commutator_scaling(taus=(0.2, 0.1, 0.05, 0.025), d: int = 24, levels: int | None = None,
                       window=(3.5, 4.5)) -> ScalingReport:
    """Log-log slope of the commutator-block residual against tau."""
    taus = tuple(float(x) for x in taus)
    lv = d // 4 if levels is None else levels
    errs = commutator_residuals(taus, d, lv)
    return ScalingReport("commutator_residual_vs_tau", taus, tuple(errs), fit_slope(taus, errs),
                         tuple(window), d, f"interior levels < {lv}")
