"""Rectangular lattices and their nearest-neighbour couplings."""
from __future__ import annotations

from dataclasses import dataclass

__all__ = ["LatticeSpec", "build_chain", "build_grid", "parse_lattice"]


@dataclass(frozen=True)
class LatticeSpec:
    """Sites and ordered nearest-neighbour edges of a chain or square grid.

    Sites are zero-based. Grids are numbered row-major, so site ``r*n + c``
    sits at row ``r`` and column ``c``.
    """

    kind: str
    size: int
    num_sites: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.kind not in ("chain", "grid"):
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        seen = set()
        for i, j in self.edges:
            if not 0 <= i < j < self.num_sites:
                raise ValueError(f"invalid edge ({i}, {j})")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))

    def describe(self) -> str:
        if self.kind == "chain":
            return f"chain({self.size})"
        return f"grid({self.size}x{self.size})"

    @staticmethod
    def site_label(i: int) -> str:
        """1-based label used in rendered output."""
        return str(i + 1)


def _check_size(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")


def build_chain(N: int) -> LatticeSpec:
    """Open chain of ``N`` sites with edges ``(0,1), (1,2), ...``."""
    _check_size(N, "N")
    edges = tuple((i, i + 1) for i in range(N - 1))
    return LatticeSpec("chain", N, N, edges)


def build_grid(n: int) -> LatticeSpec:
    """Open ``n x n`` square grid.

    Edges are emitted row by row; within a row the horizontal coupling at
    column ``c`` precedes the vertical coupling at column ``c``. This is the
    staircase order in which the tunnelling gates are laid out on the wires.
    """
    _check_size(n, "n")
    edges = []
    for r in range(n):
        for c in range(n):
            s = r * n + c
            if c + 1 < n:
                edges.append((s, s + 1))
            if r + 1 < n:
                edges.append((s, s + n))
    return LatticeSpec("grid", n, n * n, tuple(edges))


def parse_lattice(text: str) -> LatticeSpec:
    """Parse ``"chain:N"`` or ``"grid:n"`` (``chainN`` / ``gridn`` also accepted)."""
    s = text.strip().lower()
    for kind, builder in (("chain", build_chain), ("grid", build_grid)):
        if s.startswith(kind):
            rest = s[len(kind):].lstrip(":=")
            try:
                size = int(rest)
            except ValueError:
                break
            return builder(size)
    raise ValueError(f"cannot parse lattice {text!r}; expected chain:N or grid:n")
