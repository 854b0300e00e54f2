import pytest
from hypothesis import given
from hypothesis import strategies as st

from bhcv.circuit import count_gates
from bhcv.counting import (REFERENCE_CHAIN4, REFERENCE_CHAIN4_DIPOLE, COLUMN_ORDER, closed_form_chain,
                           closed_form_grid, compare, format_histogram, summary_line_grid)
from bhcv.decompose import build_trotter_step, make_plan
from bhcv.lattice import build_chain, build_grid


def _enumerate(lat, V):
    return count_gates(build_trotter_step(make_plan(lat, 1, 1, V, 1, K=1))).as_dict()


def test_chain4_without_dipole():
    h = _enumerate(build_chain(4), 0)
    assert tuple(h[k] for k in ("F", "P(g_U)", "V(g_C)", "Q(g_U/2)", "Cz(g)")) == (60, 8, 32, 8, 6)
    assert all(h[k] == REFERENCE_CHAIN4.get(k, 0) for k in COLUMN_ORDER)


def test_chain4_with_dipole():
    h = _enumerate(build_chain(4), 1)
    assert all(h[k] == REFERENCE_CHAIN4_DIPOLE.get(k, 0) for k in COLUMN_ORDER)
    assert h["SWAP"] == 0


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("dipole", [True, False])
def test_grid_closed_form_matches_enumeration(n, dipole):
    h = _enumerate(build_grid(n), 1 if dipole else 0)
    closed = closed_form_grid(n, dipole)
    for name in COLUMN_ORDER:
        if name == "SWAP":
            assert h[name] == (4 if dipole else 2) * (n - 1) * (n * n - n) <= closed[name]
        else:
            assert h[name] == closed[name], name


def test_grid2_values():
    c = closed_form_grid(2)
    assert (c["F"], c["Cz(-4)"], c["SWAP"]) == (208, 16, 16)
    assert summary_line_grid(2)["Cz(-4)"] == 32


@given(st.integers(1, 12), st.booleans())
def test_chain_closed_form_linear(N, dipole):
    h = _enumerate(build_chain(N), 1 if dipole else 0)
    assert h == closed_form_chain(N, dipole)


def test_rejects_empty_lattices():
    with pytest.raises(ValueError):
        closed_form_grid(0)
    with pytest.raises(ValueError):
        closed_form_chain(0)


def test_grid_report_flags_summary_discrepancy():
    rep = compare(make_plan(build_grid(2), 1, 1, 1, 1, K=5))
    assert rep.passed
    assert any("Cz(-4) enumerated 16 vs printed summary 32" in n for n in rep.notes)
    assert any("SWAP enumerated 8" in n and "bound 16" in n for n in rep.notes)
    assert rep.totals()["F"] == 5 * 208
    table = rep.render_table()
    assert "summary" in table and "MISMATCH" not in table


def test_chain_report_has_no_discrepancy():
    rep = compare(make_plan(build_chain(4), 1, 1, 0, 1, K=1))
    assert rep.passed and rep.notes == ()
    assert rep.count_tuple(("F", "P(g_U)", "V(g_C)", "Q(g_U/2)", "Cz(g)")) == (60, 8, 32, 8, 6)
    doc = rep.to_document()
    assert doc["pass"]["F"] is True and doc["columns"] == list(COLUMN_ORDER)


def test_format_histogram():
    h = count_gates(build_trotter_step(make_plan(build_chain(2), 1, 1, 0, 1, K=1)))
    assert format_histogram(h) == "F=28 P(g_U)=4 V(g_C)=16 Q(g_U/2)=4 Cz(g)=2"
    assert format_histogram({k: 0 for k in COLUMN_ORDER}) == "(empty)"
