"""Gate-level intermediate representation for continuous-variable circuits.

Gate semantics (``x`` the position quadrature of the target mode)::

    P(s)    = exp(i s x^2)
    V(s)    = exp(i s x^3)
    Q(s)    = exp(i s x^4)
    CZ(s)   = exp(i s x_i x_j)
    F       = exp(i pi/2 n),  F x F^dagger = p
    SWAP    exchanges two modes

A :class:`Circuit` lists gates in application order: the first gate acts
first, so ``[G1, G2]`` is the operator ``U(G2) U(G1)``.
"""
from __future__ import annotations

import enum
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

__all__ = [
    "GateKind",
    "Gate",
    "Circuit",
    "GateHistogram",
    "CircuitFormatError",
    "COLUMNS",
    "count_gates",
    "serialize",
    "deserialize",
    "to_document",
    "from_document",
    "fourier",
    "fourier_dag",
    "shear",
    "cubic",
    "quartic",
    "cz",
    "swap",
]

FORMAT_VERSION = "1"


class GateKind(str, enum.Enum):
    FOURIER = "F"
    FOURIER_DAG = "Fdag"
    P = "P"
    V = "V"
    Q = "Q"
    CZ = "CZ"
    SWAP = "SWAP"


_ARITY = {
    GateKind.FOURIER: 1,
    GateKind.FOURIER_DAG: 1,
    GateKind.P: 1,
    GateKind.V: 1,
    GateKind.Q: 1,
    GateKind.CZ: 2,
    GateKind.SWAP: 2,
}

# Symbolic coefficient tags allowed on each parametrised gate kind. A leading
# "-" marks the negated coefficient; counts pool both signs.
_LABELS = {
    GateKind.P: {"g_U", "g_V", "custom"},
    GateKind.V: {"g_C", "-g_C", "custom"},
    GateKind.Q: {"g_U/2", "g_V/3", "-g_V/3", "g_V/6", "-g_V/6", "custom"},
    GateKind.CZ: {"g_J", "cz2", "czm4", "custom"},
}

PARAMETRISED = frozenset(_LABELS)


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    modes: tuple[int, ...]
    strength: float | None = None
    label: str | None = None

    def __post_init__(self):
        kind = GateKind(self.kind)
        object.__setattr__(self, "kind", kind)
        modes = tuple(self.modes)
        object.__setattr__(self, "modes", modes)
        if len(modes) != _ARITY[kind]:
            raise ValueError(f"{kind.value} acts on {_ARITY[kind]} mode(s), got {modes}")
        for m in modes:
            if isinstance(m, bool) or not isinstance(m, int) or m < 0:
                raise ValueError(f"mode indices must be non-negative integers, got {modes}")
        if len(set(modes)) != len(modes):
            raise ValueError(f"{kind.value} needs distinct modes, got {modes}")
        if kind in PARAMETRISED:
            if self.strength is None:
                raise ValueError(f"{kind.value} requires a strength")
            s = float(self.strength)
            if not math.isfinite(s):
                raise ValueError(f"strength must be finite, got {self.strength!r}")
            object.__setattr__(self, "strength", s)
            label = "custom" if self.label is None else self.label
            if label not in _LABELS[kind]:
                raise ValueError(f"label {label!r} is not valid on {kind.value}")
            object.__setattr__(self, "label", label)
        else:
            if self.strength is not None or self.label is not None:
                raise ValueError(f"{kind.value} takes no strength or label")

    def shifted(self, mapping: dict[int, int]) -> Gate:
        """Copy with mode indices remapped (indices absent from ``mapping`` kept)."""
        return Gate(self.kind, tuple(mapping.get(m, m) for m in self.modes), self.strength, self.label)

    def __repr__(self):
        modes = ",".join(map(str, self.modes))
        if self.strength is None:
            return f"{self.kind.value}[{modes}]"
        return f"{self.kind.value}[{modes}]({self.strength!r}:{self.label})"


def fourier(i: int) -> Gate:
    return Gate(GateKind.FOURIER, (i,))


def fourier_dag(i: int) -> Gate:
    return Gate(GateKind.FOURIER_DAG, (i,))


def shear(i: int, s: float, label: str = "custom") -> Gate:
    return Gate(GateKind.P, (i,), s, label)


def cubic(i: int, s: float, label: str = "custom") -> Gate:
    return Gate(GateKind.V, (i,), s, label)


def quartic(i: int, s: float, label: str = "custom") -> Gate:
    return Gate(GateKind.Q, (i,), s, label)


def cz(i: int, j: int, s: float, label: str = "custom") -> Gate:
    return Gate(GateKind.CZ, (i, j), s, label)


def swap(i: int, j: int) -> Gate:
    return Gate(GateKind.SWAP, (i, j))


@dataclass(frozen=True)
class Circuit:
    num_modes: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if isinstance(self.num_modes, bool) or not isinstance(self.num_modes, int) or self.num_modes < 1:
            raise ValueError(f"num_modes must be a positive integer, got {self.num_modes!r}")
        gates = tuple(self.gates)
        object.__setattr__(self, "gates", gates)
        for k, g in enumerate(gates):
            if not isinstance(g, Gate):
                raise TypeError(f"gate {k} is not a Gate: {g!r}")
            if max(g.modes) >= self.num_modes:
                raise ValueError(f"gate {k} ({g!r}) addresses a mode >= {self.num_modes}")

    def __len__(self):
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: Circuit) -> Circuit:
        if not isinstance(other, Circuit):
            return NotImplemented
        return Circuit(max(self.num_modes, other.num_modes), self.gates + other.gates)

    def repeat(self, times: int) -> Circuit:
        return Circuit(self.num_modes, self.gates * times)


# Count-table columns -> (pooled kind, unsigned label).
COLUMNS = {
    "F": ("F", None),
    "P(g_U)": ("P", "g_U"),
    "P(g_V)": ("P", "g_V"),
    "V(g_C)": ("V", "g_C"),
    "Q(g_U/2)": ("Q", "g_U/2"),
    "Q(g_V/3)": ("Q", "g_V/3"),
    "Q(g_V/6)": ("Q", "g_V/6"),
    "Cz(g)": ("CZ", "g_J"),
    "Cz(2)": ("CZ", "cz2"),
    "Cz(-4)": ("CZ", "czm4"),
    "SWAP": ("SWAP", None),
}


def _count_key(g: Gate) -> tuple[str, str | None]:
    kind = "F" if g.kind in (GateKind.FOURIER, GateKind.FOURIER_DAG) else g.kind.value
    label = g.label.lstrip("-") if g.label is not None else None
    return kind, label


@dataclass(frozen=True)
class GateHistogram:
    """Gate counts keyed by ``(kind, label)``.

    Fourier and inverse Fourier share the ``"F"`` key and opposite-sign
    labels share one key, as in the reference count tuples.
    """

    counts: Counter = field(default_factory=Counter)

    def __getitem__(self, key) -> int:
        if isinstance(key, str):
            key = COLUMNS[key]
        return self.counts.get(key, 0)

    def __add__(self, other: GateHistogram) -> GateHistogram:
        return GateHistogram(self.counts + other.counts)

    def __eq__(self, other):
        if not isinstance(other, GateHistogram):
            return NotImplemented
        return +self.counts == +other.counts

    def scaled(self, k: int) -> GateHistogram:
        return GateHistogram(Counter({key: v * k for key, v in self.counts.items()}))

    def total(self) -> int:
        return sum(self.counts.values())

    def columns(self, names: Iterable[str]) -> tuple[int, ...]:
        return tuple(self[name] for name in names)

    def as_dict(self) -> dict[str, int]:
        return {name: self[name] for name in COLUMNS}


def count_gates(c: Circuit | Iterable[Gate]) -> GateHistogram:
    return GateHistogram(Counter(_count_key(g) for g in c))


class CircuitFormatError(ValueError):
    """Raised when a circuit document cannot be parsed."""


def to_document(c: Circuit) -> dict:
    gates = []
    for g in c.gates:
        entry = {"kind": g.kind.value, "modes": list(g.modes)}
        if g.strength is not None:
            entry["strength"] = g.strength
            entry["strength_label"] = g.label
        gates.append(entry)
    return {"format_version": FORMAT_VERSION, "num_modes": c.num_modes, "gates": gates}


def serialize(c: Circuit) -> bytes:
    # json writes floats with repr(), which round-trips binary64 exactly
    return json.dumps(to_document(c), separators=(",", ":")).encode("utf-8")


def from_document(doc: dict) -> Circuit:
    if not isinstance(doc, dict):
        raise CircuitFormatError("circuit document must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise CircuitFormatError(f"unsupported format_version {doc.get('format_version')!r}")
    num_modes = doc.get("num_modes")
    if isinstance(num_modes, bool) or not isinstance(num_modes, int) or num_modes < 1:
        raise CircuitFormatError(f"num_modes must be a positive integer, got {num_modes!r}")
    raw = doc.get("gates")
    if not isinstance(raw, list):
        raise CircuitFormatError("gates must be a list")
    gates = []
    for k, entry in enumerate(raw):
        try:
            if not isinstance(entry, dict):
                raise ValueError("gate entry must be an object")
            unknown = set(entry) - {"kind", "modes", "strength", "strength_label"}
            if unknown:
                raise ValueError(f"unknown fields {sorted(unknown)}")
            kind = GateKind(entry.get("kind"))
            modes = entry.get("modes")
            if not isinstance(modes, list):
                raise ValueError("modes must be a list")
            strength = entry.get("strength")
            if strength is not None and (isinstance(strength, bool) or not isinstance(strength, (int, float))):
                raise ValueError(f"strength must be a number, got {strength!r}")
            g = Gate(kind, tuple(modes), strength, entry.get("strength_label"))
            if max(g.modes) >= num_modes:
                raise ValueError(f"mode index out of range for {num_modes} modes: {modes}")
        except (ValueError, TypeError) as exc:
            raise CircuitFormatError(f"gate {k}: {exc}") from None
        gates.append(g)
    return Circuit(num_modes, tuple(gates))


def deserialize(data: bytes | str) -> Circuit:
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"malformed document: {exc}") from None
    return from_document(doc)
