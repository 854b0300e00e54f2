import math

import numpy as np
import pytest
import scipy.linalg

from bhcv.circuit import Circuit, count_gates, cubic, fourier, fourier_dag
from bhcv.convergence import commutator_generator, commutator_residuals, fit_slope, trotter_infidelities
from bhcv.decompose import (ModelParams, TrotterPlan, build_full_circuit, build_trotter_step, choose_K,
                            emit_commutator_block, emit_J_pair, emit_U_site, emit_Vnn_pair, emit_W,
                            make_plan, route_nonlocal)
from bhcv.focksim import circuit_unitary, embed, infidelity, ladder, number, position, random_states
from bhcv.lattice import build_chain, build_grid


def unitary(gates, modes, d):
    return circuit_unitary(Circuit(modes, tuple(gates)), d).matrix


@pytest.mark.parametrize("N, t, eps, C, K", [(4, 1, 0.01, 1, 1600), (2, 0.1, 1, 1, 1),
                                            (3, 2, 0.5, 0.25, 18), (1, 0, 1e-3, 1, 1)])
def test_choose_K(N, t, eps, C, K):
    assert choose_K(N, t, eps, C) == K


@pytest.mark.parametrize("eps", [0, -1e-3])
def test_choose_K_rejects_bad_epsilon(eps):
    with pytest.raises(ValueError):
        choose_K(4, 1, eps)


def test_make_plan_requires_one_of_K_or_epsilon():
    lat = build_chain(2)
    with pytest.raises(ValueError):
        make_plan(lat, 1, 1)
    with pytest.raises(ValueError):
        make_plan(lat, 1, 1, K=2, epsilon=0.1)
    assert make_plan(lat, 1, 1, t=1, epsilon=0.01).K == 400
    with pytest.raises(ValueError):
        TrotterPlan(lat, ModelParams(1, 1, K=3), epsilon_target=0.01)


def test_strengths():
    p = ModelParams(J=2, U=3, V_dip=0.5, t=0.4, K=2)
    assert p.g_J == pytest.approx(0.4)
    assert p.g_U == pytest.approx(0.6)
    assert p.g_V == pytest.approx(0.05)
    assert p.g_C == pytest.approx(math.sqrt(0.6 / 9))


def test_negative_tU_has_no_cubic_strength():
    with pytest.raises(ValueError, match="cubic strength undefined"):
        ModelParams(1, -1).g_C
    with pytest.raises(ValueError):
        build_trotter_step(make_plan(build_chain(2), 1, -1, K=1))
    with pytest.raises(ValueError):
        emit_U_site(0, -0.1, 0.1)


def test_model_params_validation():
    with pytest.raises(ValueError):
        ModelParams(1, 1, K=0)
    with pytest.raises(ValueError):
        ModelParams(float("inf"), 1)


def test_j_pair_structure():
    gates = emit_J_pair(0, 1, 0.1)
    assert count_gates(gates).columns(["F", "Cz(g)"]) == (4, 2)
    with pytest.raises(ValueError):
        emit_J_pair(1, 1, 0.1)


def test_j_pair_zero_is_identity():
    assert np.allclose(unitary(emit_J_pair(0, 1, 0.0), 2, 5), np.eye(25), atol=1e-14)


def test_j_pair_approximates_hopping():
    # exp(-i g (x x + p p)) = exp(-i (g/2)(a^+ b + h.c.)); the two factors do not commute
    d = 12
    a = ladder(d)
    hop = embed(a, 0, 2).T @ embed(a, 1, 2)
    hop = hop + hop.T
    S = random_states(d, 2, 20, 0, 2)
    gs = [0.1, 0.05, 0.025]
    errs = [infidelity(unitary(emit_J_pair(0, 1, g), 2, d), scipy.linalg.expm(-0.5j * g * hop), S) for g in gs]
    assert errs[0] < 1e-5
    assert 3.7 <= fit_slope(gs, errs) <= 4.3


def test_commutator_block_structure():
    h = count_gates(emit_commutator_block(0, 0.2))
    assert h.as_dict()["V(g_C)"] == 8
    assert h["F"] == 8
    assert np.allclose(unitary(emit_commutator_block(0, 0.0), 1, 8), np.eye(8), atol=1e-14)


def test_commutator_block_fourth_order():
    taus = (0.2, 0.1, 0.05, 0.025)
    res = commutator_residuals(taus, 24, 6)
    assert all(b < a for a, b in zip(res, res[1:]))
    assert 3.5 <= fit_slope(taus, res) <= 4.5


def test_same_sign_commutator_pair_is_only_third_order():
    # squaring one group commutator leaves an O(tau^3) term; the emitted
    # opposite-sign pair cancels it
    d = 24
    gen = commutator_generator(d)

    def squared(g):
        a = [cubic(0, g)]
        b = [fourier_dag(0), cubic(0, g), fourier(0)]
        am = [cubic(0, -g)]
        bm = [fourier_dag(0), cubic(0, -g), fourier(0)]
        ops = [a, b, am, bm] * 2  # operator order, left to right
        return unitary([x for op in reversed(ops) for x in op], 1, d)

    taus = (0.2, 0.1, 0.05, 0.025)
    res = []
    for tau in taus:
        U = squared(tau / math.sqrt(2))
        res.append(min(np.linalg.norm((U - scipy.linalg.expm(s * tau * tau * gen))[:6, :6], 2) for s in (1, -1)))
    assert fit_slope(taus, res) < 3.4


def test_u_site_structure():
    h = count_gates(emit_U_site(0, 0.1, 0.1))
    assert h.columns(["F", "P(g_U)", "V(g_C)", "Q(g_U/2)"]) == (12, 2, 8, 2)
    assert h.total() == 24


def test_u_site_zero_is_identity():
    assert np.allclose(unitary(emit_U_site(0, 0.0, 0.0), 1, 10), np.eye(10), atol=1e-13)


def test_u_site_approximates_onsite_phase():
    d = 24
    n = np.arange(d)
    S = random_states(d, 1, 20, 0, 3)
    dts = [0.1, 0.05, 0.025]
    errs = []
    for dt in dts:
        p = ModelParams(0, 1, t=dt)
        target = np.diag(np.exp(0.5j * dt * n * (n - 1)))
        errs.append(infidelity(unitary(emit_U_site(0, p.g_U, p.g_C), 1, d), target, S))
    assert errs[2] < 1e-4
    assert 3.5 <= fit_slope(dts, errs) <= 5.0


def test_w_structure():
    h = count_gates(emit_W(0, 1, 0.1))
    assert h.columns(["Q(g_V/3)", "Q(g_V/6)", "Cz(2)", "Cz(-4)", "F"]) == (2, 2, 2, 1, 6)


def test_w_zero_is_identity():
    assert np.allclose(unitary(emit_W(0, 1, 0.0), 2, 6), np.eye(36), atol=1e-12)


def test_w_is_exact_away_from_truncation():
    d, s = 30, 0.05
    x2 = position(d) @ position(d)
    target = scipy.linalg.expm(1j * s * np.kron(x2, x2))
    S = random_states(d, 2, 20, 0, 2)
    assert infidelity(unitary(emit_W(0, 1, s / 2), 2, d), target, S) <= 1e-6


def test_vnn_structure():
    h = count_gates(emit_Vnn_pair(0, 1, 0.1))
    assert h.columns(["F", "P(g_V)", "Q(g_V/3)", "Q(g_V/6)", "Cz(2)", "Cz(-4)"]) == (36, 4, 8, 8, 8, 4)


def test_vnn_approximates_density_coupling():
    d = 12
    nn = np.kron(np.arange(d), np.arange(d))
    S = random_states(d, 2, 20, 0, 2)
    dts = [0.1, 0.05, 0.025]
    errs = [infidelity(unitary(emit_Vnn_pair(0, 1, dt / 2), 2, d), np.diag(np.exp(1j * dt * nn)), S)
            for dt in dts]
    assert errs[1] < 5e-3
    assert fit_slope(dts, errs) >= 1.7


def test_routing_adjacent_is_unchanged():
    block = emit_J_pair(3, 4, 0.1)
    assert route_nonlocal(block, 3, 4) == block


def test_routing_distance_two():
    routed = route_nonlocal(emit_J_pair(0, 2, 0.1), 0, 2)
    assert count_gates(routed).as_dict()["SWAP"] == 2
    assert routed[0].modes == (1, 2) and routed[-1].modes == (1, 2)
    assert all(max(g.modes) - min(g.modes) <= 1 for g in routed)


@pytest.mark.parametrize("span", [2, 3, 5])
def test_routing_swap_count(span):
    routed = route_nonlocal(emit_W(0, span, 0.1), 0, span)
    assert count_gates(routed).as_dict()["SWAP"] == 2 * (span - 1)
    assert all(max(g.modes) - min(g.modes) <= 1 for g in routed)


@pytest.mark.parametrize("V", [0.0, 0.7])
def test_routed_matches_unrouted(V):
    plan = make_plan(build_grid(2), 0.9, 1.1, V, 0.5, K=1)
    Ur = circuit_unitary(build_trotter_step(plan, routed=True), 3).matrix
    Uu = circuit_unitary(build_trotter_step(plan, routed=False), 3).matrix
    assert np.abs(Ur - Uu).max() <= 1e-12


def test_step_ordering_and_full_circuit():
    plan = make_plan(build_chain(2), 1, 1, 0.5, 1, K=3)
    step = build_trotter_step(plan)
    kinds = [g.label for g in step if g.label in ("g_J", "g_U", "g_V")]
    first = {lab: kinds.index(lab) for lab in ("g_J", "g_U", "g_V")}
    assert first["g_J"] < first["g_U"] < first["g_V"]
    full = build_full_circuit(plan)
    assert len(full) == 3 * len(step)
    assert count_gates(full) == count_gates(step).scaled(3)


def test_single_site_step():
    c = build_trotter_step(make_plan(build_grid(1), 1, 1, K=1))
    assert len(c) == 24 and c.num_modes == 1


def test_trotter_error_shrinks_with_K():
    errs = trotter_infidelities(build_chain(2), 1, 1, 0, 0.1, (2, 4, 8), 12, 0, 20, 2)
    assert errs[0] > errs[1] > errs[2]
    assert 3.0 <= errs[1] / errs[2] <= 5.0


def test_no_coupling_gives_identity():
    plan = make_plan(build_chain(2), 0, 0, 0, 1, K=1)
    assert np.allclose(circuit_unitary(build_trotter_step(plan), 5).matrix, np.eye(25), atol=1e-12)
