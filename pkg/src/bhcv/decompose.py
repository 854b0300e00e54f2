"""Lowering of one Bose-Hubbard Trotter step to elementary CV gates.

Every emitter returns gates in application order. Exponent signs follow the
operator identities rather than the schematic circuit drawings, so that the
gate product reproduces ``exp(i t/K H)`` term by term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .circuit import Circuit, Gate, cubic, cz, fourier, fourier_dag, quartic, shear, swap
from .lattice import LatticeSpec

__all__ = [
    "ModelParams",
    "TrotterPlan",
    "choose_K",
    "make_plan",
    "emit_J_pair",
    "emit_commutator_block",
    "emit_U_site",
    "emit_W",
    "emit_Vnn_pair",
    "route_nonlocal",
    "build_trotter_step",
    "build_full_circuit",
]


def _finite(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ValueError(f"{name} must be a finite real number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class ModelParams:
    """Couplings, total time and Trotter step count.

    The gate strengths of a single step of length ``t/K`` are exposed as
    properties.
    """

    J: float
    U: float
    V_dip: float = 0.0
    t: float = 1.0
    K: int = 1

    def __post_init__(self):
        for name in ("J", "U", "V_dip", "t"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if isinstance(self.K, bool) or not isinstance(self.K, int) or self.K < 1:
            raise ValueError(f"K must be a positive integer, got {self.K!r}")

    @property
    def dt(self) -> float:
        return self.t / self.K

    @property
    def g_J(self) -> float:
        return self.dt * self.J

    @property
    def g_U(self) -> float:
        return self.dt * self.U

    @property
    def g_C(self) -> float:
        """Cubic strength of the commutator block.

        The eight-factor block with strength ``g`` yields
        ``exp(2 g^2 [x^3, p^3])``; matching ``exp(dt (2U/9) [x^3, p^3])``
        needs ``g = sqrt(dt U / 9)``.
        """
        arg = self.dt * self.U
        if arg < 0:
            raise ValueError(f"cubic strength undefined for tU/K = {arg} < 0")
        return math.sqrt(arg / 9.0)

    @property
    def g_V(self) -> float:
        return self.dt * self.V_dip / 2.0


def choose_K(N: int, t: float, epsilon: float, C: float = 1.0) -> int:
    """Trotter step count ``max(1, ceil(C N^2 t^2 / epsilon))``.

    The largest term norm is taken as 1, so ``C`` absorbs all constants.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon!r}")
    if not C > 0:
        raise ValueError(f"C must be positive, got {C!r}")
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N!r}")
    raw = C * N * N * t * t / epsilon
    # strip binary noise such as 1600.0000000000002 before the ceiling
    return max(1, math.ceil(float(f"{raw:.12g}")))


@dataclass(frozen=True)
class TrotterPlan:
    lattice: LatticeSpec
    params: ModelParams
    epsilon_target: float | None = None
    safety_constant: float = 1.0

    def __post_init__(self):
        if not self.safety_constant > 0:
            raise ValueError("safety_constant must be positive")
        if self.epsilon_target is not None:
            want = choose_K(self.lattice.num_sites, self.params.t, self.epsilon_target, self.safety_constant)
            if want != self.params.K:
                raise ValueError(f"K={self.params.K} disagrees with epsilon target (needs K={want})")

    @property
    def K(self) -> int:
        return self.params.K


def make_plan(lattice: LatticeSpec, J: float, U: float, V_dip: float = 0.0, t: float = 1.0,
              K: int | None = None, epsilon: float | None = None, C: float = 1.0) -> TrotterPlan:
    """Build a plan from either an explicit ``K`` or an accuracy target."""
    if (K is None) == (epsilon is None):
        raise ValueError("give exactly one of K or epsilon")
    if epsilon is not None:
        K = choose_K(lattice.num_sites, t, epsilon, C)
    return TrotterPlan(lattice, ModelParams(J, U, V_dip, t, K), epsilon, C)


def _distinct(i, j):
    if i == j:
        raise ValueError(f"two-mode block needs distinct modes, got ({i}, {j})")


def emit_J_pair(i: int, j: int, g_J: float) -> list[Gate]:
    """Tunnelling factor ``exp(-i g_J x_i x_j) exp(-i g_J p_i p_j)``."""
    _distinct(i, j)
    return [
        fourier_dag(i), fourier_dag(j),
        cz(i, j, -g_J, "g_J"),
        fourier(i), fourier(j),
        cz(i, j, -g_J, "g_J"),
    ]


def _p_conj(i: int, g: Gate) -> list[Gate]:
    # F g(x) F^dagger = g(p), applied as F^dagger first
    return [fourier_dag(i), g, fourier(i)]


def emit_commutator_block(i: int, g_C: float) -> list[Gate]:
    """Eight cubic factors approximating ``exp(2 g_C^2 [x^3, p^3])``.

    With ``A = x^3`` and ``B = p^3`` the operator product is the pair of
    group commutators ``C(iB, iA) C(-iB, -iA)``; the opposite signs of the
    second commutator cancel the third-order term, leaving an
    ``O(g_C^4)`` residual.
    """
    plus, minus = cubic(i, g_C, "g_C"), cubic(i, -g_C, "-g_C")
    # operator, left to right: e^{iB} e^{iA} e^{-iB} e^{-iA} e^{-iB} e^{-iA} e^{iB} e^{iA}
    return [
        plus, *_p_conj(i, plus),
        minus, *_p_conj(i, minus),
        minus, *_p_conj(i, minus),
        plus, *_p_conj(i, plus),
    ]


def emit_U_site(i: int, g_U: float, g_C: float) -> list[Gate]:
    """On-site interaction ``exp(i (t/K)(U/2) n (n-1))`` up to a global phase."""
    if g_U < 0 or g_C < 0:
        raise ValueError("cubic strength undefined for tU/K < 0")
    return [
        *_p_conj(i, shear(i, -g_U, "g_U")),
        shear(i, -g_U, "g_U"),
        *_p_conj(i, quartic(i, g_U / 2, "g_U/2")),
        *emit_commutator_block(i, g_C),
        quartic(i, g_U / 2, "g_U/2"),
    ]


def emit_W(i: int, j: int, g_V: float) -> list[Gate]:
    """Exact two-mode quartic ``exp(i 2 g_V x_i^2 x_j^2)``.

    Position shifts ``x_i -> x_i +- x_j`` from Fourier-conjugated CZ gates
    turn single-mode quartics into ``(x_i + x_j)^4`` and ``(x_i - x_j)^4``.
    """
    _distinct(i, j)
    return [
        quartic(j, -g_V / 3, "-g_V/3"),
        quartic(i, -g_V / 3, "-g_V/3"),
        fourier_dag(i), cz(i, j, 2.0, "cz2"), fourier(i),
        quartic(i, g_V / 6, "g_V/6"),
        fourier_dag(i), cz(i, j, -4.0, "czm4"), fourier(i),
        quartic(i, g_V / 6, "g_V/6"),
        fourier_dag(i), cz(i, j, 2.0, "cz2"), fourier(i),
    ]


def emit_Vnn_pair(i: int, j: int, g_V: float) -> list[Gate]:
    """Dipole factor ``exp(i (t/K) V_dip n_i n_j)`` up to a global phase."""
    _distinct(i, j)
    w = emit_W(i, j, g_V)
    return [
        *_p_conj(j, shear(j, -g_V, "g_V")), shear(j, -g_V, "g_V"),
        *_p_conj(i, shear(i, -g_V, "g_V")), shear(i, -g_V, "g_V"),
        *w,
        fourier_dag(j), *w, fourier(j),
        fourier_dag(i), *w, fourier(i),
        fourier_dag(j), fourier_dag(i), *w, fourier(i), fourier(j),
    ]


def route_nonlocal(block: list[Gate], i: int, j: int) -> list[Gate]:
    """Make a block on wires ``i < j`` nearest-neighbour by SWAP sandwiching.

    Wire ``j`` is swapped down to ``i+1`` with ``j-i-1`` SWAPs, the block runs
    on ``(i, i+1)`` and the SWAPs are undone in reverse order.
    """
    if i > j:
        i, j = j, i
    if j - i <= 1:
        return list(block)
    down = [swap(k - 1, k) for k in range(j, i + 1, -1)]
    inner = [g.shifted({j: i + 1}) for g in block]
    return down + inner + down[::-1]


def build_trotter_step(plan: TrotterPlan, routed: bool = True) -> Circuit:
    """One Trotter step: all tunnelling pairs, all sites, then dipole pairs."""
    p = plan.params
    lat = plan.lattice
    place = route_nonlocal if routed else (lambda block, i, j: block)
    gates: list[Gate] = []
    for i, j in lat.edges:
        gates += place(emit_J_pair(i, j, p.g_J), i, j)
    g_C = p.g_C
    for i in range(lat.num_sites):
        gates += emit_U_site(i, p.g_U, g_C)
    if p.V_dip != 0:
        for i, j in lat.edges:
            gates += place(emit_Vnn_pair(i, j, p.g_V), i, j)
    return Circuit(lat.num_sites, tuple(gates))


def build_full_circuit(plan: TrotterPlan, routed: bool = True) -> Circuit:
    return build_trotter_step(plan, routed).repeat(plan.K)
