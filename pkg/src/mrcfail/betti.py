"""Graded Betti numbers via Koszul strand homology.

β_{i,j}(M) is the homology at ``∧^i V ⊗ M_{j-i}`` of

    ∧^{i+1} V ⊗ M_{j-i-1} -> ∧^i V ⊗ M_{j-i} -> ∧^{i-1} V ⊗ M_{j-i+1}

computed as ``dim - rank(out) - rank(in)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exactfield as ef
from .multilinear import koszul_map, sym_basis, sym_dim, sym_index, wedge_dim


class WindowError(ValueError):
    """A degree window does not cover what a computation needs."""


@dataclass
class GradedModulePresentation:
    """A graded module known in degrees ``d0 .. d0 + len(dims) - 1``.

    ``actions[t][k]`` is the matrix of the k-th variable from degree
    ``d0 + t`` to ``d0 + t + 1``.  By contract the module is zero below
    ``d0``; above the window nothing is known.
    """

    p: int
    nvars: int
    d0: int
    dims: list[int]
    actions: list[np.ndarray] = field(repr=False)

    def __post_init__(self):
        if len(self.actions) != max(len(self.dims) - 1, 0):
            raise ValueError("need one action block per consecutive degree pair")
        for t, a in enumerate(self.actions):
            if a.shape != (self.nvars, self.dims[t + 1], self.dims[t]):
                raise ValueError(f"action block {t} has shape {a.shape}")

    @property
    def d1(self) -> int:
        return self.d0 + len(self.dims) - 1

    def dim(self, d: int) -> int:
        if d < self.d0:
            return 0
        if d > self.d1:
            raise WindowError(f"degree {d} above the window [{self.d0}, {self.d1}]")
        return self.dims[d - self.d0]

    def variable_maps(self, d: int) -> list[np.ndarray]:
        """Matrices of x_0..x_r from degree d to d+1."""
        if d + 1 > self.d1 and self.dim(d):
            raise WindowError(f"degree {d + 1} above the window [{self.d0}, {self.d1}]")
        if d < self.d0 or self.dim(d) == 0:
            return [np.zeros((self.dim(d + 1) if d + 1 <= self.d1 else 0, self.dim(d)),
                             dtype=np.int64)] * self.nvars
        return list(self.actions[d - self.d0])

    def commutes(self) -> bool:
        for t in range(len(self.actions) - 1):
            lo, hi = self.actions[t], self.actions[t + 1]
            for j in range(self.nvars):
                for k in range(j + 1, self.nvars):
                    if not np.array_equal(ef.matmul(hi[j], lo[k], self.p),
                                          ef.matmul(hi[k], lo[j], self.p)):
                        return False
        return True


def rational_normal_module(degree: int, shift: int, top: int, p: int) -> GradedModulePresentation:
    """⊕_t H^0(O_{P^1}(shift + degree*t)) over the coordinate ring of P^degree.

    The variables act as the monomials ``s^(degree-k) t^k``.  With ``shift = 0``
    this is S/I of the rational normal curve; with ``shift = degree - 2`` it
    is the canonical module up to a twist.  Degrees ``0..top``.
    """
    n = degree + 1
    dims = [shift + degree * t + 1 for t in range(top + 1)]
    actions = []
    for t in range(top):
        src = sym_basis(2, dims[t] - 1)
        idx = sym_index(2, dims[t + 1] - 1)
        block = np.zeros((n, dims[t + 1], dims[t]), dtype=np.int64)
        for k in range(n):
            for col, (a, b) in enumerate(src):
                block[k, idx[(a + degree - k, b + k)], col] = 1
        actions.append(block)
    return GradedModulePresentation(p, n, 0, dims, actions)


class _RankCache:
    def __init__(self, module: GradedModulePresentation):
        self.module = module
        self.ranks: dict[tuple[int, int], int] = {}

    def koszul_rank(self, i: int, d: int) -> int:
        """Rank of ∧^i V ⊗ M_d -> ∧^{i-1} V ⊗ M_{d+1}."""
        M = self.module
        n = M.nvars
        if i < 1 or i > n or M.dim(d) == 0:
            return 0
        key = (i, d)
        if key not in self.ranks:
            mat = koszul_map(i, M.variable_maps(d), M.p, dtype=np.int32)
            self.ranks[key] = ef.rank(mat, M.p) if mat.size else 0
            del mat
        return self.ranks[key]


def koszul_strand(M: GradedModulePresentation, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """The two maps (in, out) around ∧^i V ⊗ M_{j-i}."""
    d = j - i
    n = M.nvars
    if i + 1 <= n and M.dim(d - 1):
        into = koszul_map(i + 1, M.variable_maps(d - 1), M.p)
    else:
        into = np.zeros((wedge_dim(n, i) * M.dim(d), 0), dtype=np.int64)
    if i >= 1 and M.dim(d):
        out = koszul_map(i, M.variable_maps(d), M.p)
    else:
        out = np.zeros((0, wedge_dim(n, i) * M.dim(d)), dtype=np.int64)
    return into, out


def _tor(cache: _RankCache, i: int, j: int) -> int:
    M = cache.module
    n = M.nvars
    if i < 0 or i > n:
        return 0
    d = j - i
    middle = M.dim(d)
    if middle == 0:
        return 0
    if i >= 1:
        M.dim(d + 1)  # window check even when the map turns out to be zero
    return wedge_dim(n, i) * middle - cache.koszul_rank(i, d) - cache.koszul_rank(i + 1, d - 1)


def tor_dimension(M: GradedModulePresentation, i: int, j: int) -> int:
    return _tor(_RankCache(M), i, j)


@dataclass
class BettiTable:
    r: int
    values: dict[tuple[int, int], int] = field(default_factory=dict)
    tags: dict[tuple[int, int], str] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.values.get(key, 0)

    def set(self, i: int, j: int, value: int, tag: str = "computed") -> None:
        if value < 0:
            raise ValueError("Betti numbers are nonnegative")
        self.values[(i, j)] = int(value)
        self.tags[(i, j)] = tag

    def nonzero(self) -> list[tuple[int, int]]:
        keys = [k for k, v in self.values.items() if v]
        return sorted(keys, key=lambda k: (k[1] - k[0], k[0]))

    def alternating_sum(self, j: int) -> int:
        return sum((-1) ** i * v for (i, jj), v in self.values.items() if jj == j)

    def to_text(self) -> str:
        lines = [f"betti r={self.r}"]
        for i, j in self.nonzero():
            lines.append(f"{i} {j} {self.values[(i, j)]} {self.tags.get((i, j), 'computed')}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "BettiTable":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("betti r="):
            raise ValueError("missing 'betti r=<r>' header")
        table = cls(int(lines[0].split("=", 1)[1]))
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 4 or parts[3] not in ("computed", "expected"):
                raise ValueError(f"bad Betti line: {ln!r}")
            table.set(int(parts[0]), int(parts[1]), int(parts[2]), parts[3])
        return table

    def diagram(self) -> str:
        keys = self.nonzero()
        if not keys:
            return "(zero)\n"
        cols = range(0, max(i for i, _ in keys) + 1)
        rows = range(min(j - i for i, j in keys), max(j - i for i, j in keys) + 1)
        width = max(len(str(v)) for v in self.values.values())
        width = max(width, len(str(cols[-1])))
        head = "     " + " ".join(f"{c:>{width}}" for c in cols)
        out = [head]
        for rr in rows:
            cells = []
            for c in cols:
                v = self.values.get((c, c + rr), 0)
                cells.append(f"{v if v else '.':>{width}}")
            out.append(f"{rr:>3}: " + " ".join(cells))
        return "\n".join(out) + "\n"


def betti_table(M: GradedModulePresentation, i_max: int, j_max: int) -> BettiTable:
    cache = _RankCache(M)
    table = BettiTable(M.nvars - 1)
    for i in range(0, min(i_max, M.nvars) + 1):
        for j in range(i + M.d0, j_max + 1):
            table.set(i, j, _tor(cache, i, j))
    return table


def dual_indices(r: int, i: int, j: int) -> tuple[int, int]:
    return r - i, r + 1 - j


def betti_via_duality(config, i: int, j: int) -> int:
    """β_{i,j}(S/I_Γ) read off the Koszul homology of the canonical module."""
    from .points import canonical_module_presentation, lowest_canonical_degree

    r = config.r
    i2, j2 = dual_indices(r, i, j)
    if i2 < 0 or i2 > r + 1:
        return 0
    d = j2 - i2
    lo = min(lowest_canonical_degree(config), d)
    omega = canonical_module_presentation(config, (lo, max(d + 1, lo)))
    return tor_dimension(omega, i2, j2)
