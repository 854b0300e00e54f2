"""Closed-form gate counts and their comparison with enumerated circuits."""
from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import COLUMNS, GateHistogram, count_gates
from .decompose import TrotterPlan, build_trotter_step
from .lattice import LatticeSpec

__all__ = [
    "COLUMN_ORDER",
    "J_GATE",
    "U_GATE",
    "VNN_GATE",
    "closed_form_grid",
    "closed_form_chain",
    "summary_line_grid",
    "CountReport",
    "compare",
    "format_histogram",
]

COLUMN_ORDER = tuple(COLUMNS)

# per-block tallies
J_GATE = {"F": 4, "Cz(g)": 2}
U_GATE = {"F": 12, "P(g_U)": 2, "V(g_C)": 8, "Q(g_U/2)": 2}
VNN_GATE = {"F": 36, "P(g_V)": 4, "Q(g_V/3)": 8, "Q(g_V/6)": 8, "Cz(2)": 8, "Cz(-4)": 4}

_DIPOLE_COLUMNS = ("P(g_V)", "Q(g_V/3)", "Q(g_V/6)", "Cz(2)", "Cz(-4)")

# Reference four-site chain tallies.
REFERENCE_CHAIN4 = {"F": 60, "P(g_U)": 8, "V(g_C)": 32, "Q(g_U/2)": 8, "Cz(g)": 6}
REFERENCE_CHAIN4_DIPOLE = {"F": 168, "P(g_U)": 8, "P(g_V)": 12, "V(g_C)": 32, "Q(g_U/2)": 8,
                       "Q(g_V/3)": 24, "Q(g_V/6)": 24, "Cz(g)": 6, "Cz(2)": 24, "Cz(-4)": 12}


def _full(d):
    return {name: d.get(name, 0) for name in COLUMN_ORDER}


def closed_form_grid(n: int, dipole: bool = True) -> dict[str, int]:
    """Per-step counts for an ``n x n`` grid; ``SWAP`` is the upper bound.

    ``Cz(-4)`` is ``8(n^2 - n)``, consistent with four such gates per dipole
    block and ``2(n^2 - n)`` blocks.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    e = n * n - n
    if not dipole:
        return _full({"F": 12 * n * n + 8 * e, "P(g_U)": 2 * n * n, "V(g_C)": 8 * n * n,
                      "Q(g_U/2)": 2 * n * n, "Cz(g)": 4 * e, "SWAP": 2 * (n ** 3 - n ** 2)})
    return {
        "F": 92 * n * n - 80 * n,
        "P(g_U)": 2 * n * n,
        "P(g_V)": 8 * e,
        "V(g_C)": 8 * n * n,
        "Q(g_U/2)": 2 * n * n,
        "Q(g_V/3)": 16 * e,
        "Q(g_V/6)": 16 * e,
        "Cz(g)": 4 * e,
        "Cz(2)": 16 * e,
        "Cz(-4)": 8 * e,
        "SWAP": 4 * (n ** 3 - n ** 2),
    }


def summary_line_grid(n: int) -> dict[str, int]:
    """The grid tuple exactly as printed in the summary line (``Cz(-4) = 16(n^2 - n)``)."""
    out = closed_form_grid(n, dipole=True)
    out["Cz(-4)"] = 16 * (n * n - n)
    return out


def closed_form_chain(N: int, dipole: bool = True) -> dict[str, int]:
    """Per-step counts for an open chain: ``N - 1`` pair blocks and ``N`` site blocks."""
    if N < 1:
        raise ValueError("N must be >= 1")
    out = dict.fromkeys(COLUMN_ORDER, 0)
    for block, times in ((J_GATE, N - 1), (U_GATE, N), (VNN_GATE, (N - 1) if dipole else 0)):
        for k, v in block.items():
            out[k] += v * times
    return out


def format_histogram(h: GateHistogram | dict, names=COLUMN_ORDER, skip_zero: bool = True) -> str:
    get = h.__getitem__
    parts = [f"{name}={get(name)}" for name in names if not (skip_zero and get(name) == 0)]
    return " ".join(parts) if parts else "(empty)"


@dataclass(frozen=True)
class CountReport:
    lattice: LatticeSpec
    K: int
    dipole: bool
    enumerated: dict[str, int]
    closed_form: dict[str, int]
    summary_line: dict[str, int] | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def label_passes(self) -> dict[str, bool]:
        out = {}
        for name in COLUMN_ORDER:
            if name == "SWAP":
                out[name] = self.enumerated[name] <= self.closed_form[name]
            else:
                out[name] = self.enumerated[name] == self.closed_form[name]
        return out

    @property
    def passed(self) -> bool:
        return all(self.label_passes().values())

    def count_tuple(self, names=COLUMN_ORDER) -> tuple[int, ...]:
        return tuple(self.enumerated[n] for n in names)

    def totals(self) -> dict[str, int]:
        """Counts for the full K-step circuit."""
        return {k: v * self.K for k, v in self.enumerated.items()}

    def render_table(self) -> str:
        show_summary = self.summary_line is not None
        head = f"{'label':<10} {'enumerated':>11} {'closed form':>12}"
        if show_summary:
            head += f" {'summary':>11}"
        head += f" {'x K':>10}  status"
        lines = [f"lattice {self.lattice.describe()}, K={self.K}, "
                 f"dipole={'on' if self.dipole else 'off'} (counts per step)", head]
        passes = self.label_passes()
        totals = self.totals()
        for name in COLUMN_ORDER:
            row = f"{name:<10} {self.enumerated[name]:>11} {self.closed_form[name]:>12}"
            if show_summary:
                row += f" {self.summary_line[name]:>11}"
            status = "ok" if passes[name] else "MISMATCH"
            if name == "SWAP":
                status += " (<= bound)" if passes[name] else " (> bound)"
            row += f" {totals[name]:>10}  {status}"
            lines.append(row)
        lines.extend(f"note: {n}" for n in self.notes)
        return "\n".join(lines)

    def to_document(self) -> dict:
        return {
            "format_version": "1",
            "kind": "count_report",
            "lattice": self.lattice.describe(),
            "K": self.K,
            "dipole": self.dipole,
            "columns": list(COLUMN_ORDER),
            "enumerated": self.enumerated,
            "closed_form": self.closed_form,
            "summary_line": self.summary_line,
            "totals": self.totals(),
            "pass": {k: bool(v) for k, v in self.label_passes().items()},
            "notes": list(self.notes),
        }


def compare(plan: TrotterPlan) -> CountReport:
    """Enumerate one step of ``plan`` and compare with the closed forms."""
    lat = plan.lattice
    dipole = plan.params.V_dip != 0
    hist = count_gates(build_trotter_step(plan))
    enumerated = hist.as_dict()
    if lat.kind == "grid":
        closed = closed_form_grid(lat.size, dipole)
        summary = summary_line_grid(lat.size) if dipole else None
    else:
        closed = closed_form_chain(lat.size, dipole)
        summary = None
        if lat.size == 4:
            summary = _full(REFERENCE_CHAIN4_DIPOLE if dipole else REFERENCE_CHAIN4)
    notes = []
    if summary is not None:
        for name in COLUMN_ORDER:
            if name == "SWAP":
                continue
            if summary[name] != enumerated[name]:
                notes.append(f"summary-line discrepancy: {name} enumerated "
                             f"{enumerated[name]} vs printed summary {summary[name]}")
    if closed["SWAP"]:
        notes.append(f"SWAP enumerated {enumerated['SWAP']} (d-1 per side) vs bound {closed['SWAP']}")
    return CountReport(lat, plan.K, dipole, enumerated, closed, summary, tuple(notes))
