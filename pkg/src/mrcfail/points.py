"""Finite point configurations in P^r over GF(p).

Coordinates are stored as an ``(r+1) x gamma`` matrix, one column per
point.  Everything that evaluates polynomials at the points uses the
normalized representative of each point (first nonzero coordinate 1), which
fixes the identification of ``H^0(O_Γ(d))`` with ``k^gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from . import exactfield as ef
from .betti import GradedModulePresentation, WindowError
from .multilinear import sym_basis

EXHAUSTIVE_LIMIT = 10**6
DEFAULT_SAMPLES = 10**4
MAX_RETRIES = 16


class GenerationError(RuntimeError):
    """Random generation kept failing a genericity check."""


class GaleUndefinedError(ValueError):
    pass


class PreconditionError(ValueError):
    pass


class DegeneratePairingError(ValueError):
    pass


def normalize_columns(coords: np.ndarray, p: int) -> np.ndarray:
    c = ef.residues(coords, p)
    out = np.empty_like(c)
    for j in range(c.shape[1]):
        nz = np.flatnonzero(c[:, j])
        if nz.size == 0:
            raise ValueError(f"point {j} has all coordinates zero")
        out[:, j] = c[:, j] * ef.inv_mod(c[nz[0], j], p) % p
    return out


@dataclass(frozen=True)
class PointConfiguration:
    p: int
    coords: np.ndarray = field(repr=False)

    def __post_init__(self):
        ef.check_prime(self.p)
        c = ef.residues(self.coords, self.p)
        if c.ndim != 2 or c.shape[0] < 1:
            raise ValueError("coordinates must be an (r+1) x gamma matrix")
        if c.shape[1] and (c != 0).sum(axis=0).min() == 0:
            raise ValueError("a point has all coordinates zero")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)

    @property
    def r(self) -> int:
        return self.coords.shape[0] - 1

    @property
    def gamma(self) -> int:
        return self.coords.shape[1]

    @property
    def is_normalized(self) -> bool:
        return bool(np.array_equal(self.coords, normalize_columns(self.coords, self.p)))

    def normalized(self) -> "PointConfiguration":
        if self.is_normalized:
            return self
        return PointConfiguration(self.p, normalize_columns(self.coords, self.p))

    @property
    def normal_coords(self) -> np.ndarray:
        return self.normalized().coords

    def distinct(self) -> bool:
        cols = {tuple(c) for c in self.normal_coords.T}
        return len(cols) == self.gamma

    def to_text(self) -> str:
        lines = [f"{self.p} {self.r} {self.gamma}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.coords]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PointConfiguration":
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty points file")
        p, r, gamma = ef.parse_int_line(lines[0], 3)
        body = lines[1:]
        if len(body) != r + 1:
            raise ValueError(f"expected {r + 1} coordinate rows, got {len(body)}")
        rows = np.array([ef.parse_int_line(ln, gamma) for ln in body], dtype=np.int64)
        if rows.size and (rows.min() < 0 or rows.max() >= p):
            raise ValueError("coordinates must be residues in [0, p)")
        return cls(p, rows.reshape(r + 1, gamma))


# ---------------------------------------------------------------------------
# linearly general position


def parse_check_mode(mode) -> tuple[str, int | None]:
    """``None``/"auto", "exhaustive" or "sampled:N" (also ``("sampled", N)``)."""
    if mode is None or mode == "auto":
        return ("auto", None)
    if isinstance(mode, tuple):
        kind, n = mode
        return (kind, n)
    if mode == "exhaustive":
        return ("exhaustive", None)
    if isinstance(mode, str) and mode.startswith("sampled"):
        _, _, n = mode.partition(":")
        return ("sampled", int(n) if n else DEFAULT_SAMPLES)
    raise ValueError(f"unknown check mode {mode!r}")


def _resolve_mode(mode, gamma: int, size: int) -> tuple[str, int | None]:
    kind, n = parse_check_mode(mode)
    if kind == "auto":
        if comb(gamma, size) <= EXHAUSTIVE_LIMIT:
            return ("exhaustive", None)
        return ("sampled", DEFAULT_SAMPLES)
    return (kind, n)


def _subset_batches(gamma: int, size: int, batch: int = 20000):
    chunk = []
    for s in combinations(range(gamma), size):
        chunk.append(s)
        if len(chunk) == batch:
            yield np.array(chunk)
            chunk = []
    if chunk:
        yield np.array(chunk)


def is_lgp(config: PointConfiguration, check=None, seed: int = 0) -> bool:
    """Every (r+1)-subset of the points spans P^r.

    Sampled mode tests ``N`` seeded random subsets and is one-sided.
    """
    M = config.coords
    r1, gamma = M.shape
    if gamma <= r1:
        return ef.rank(M, config.p) == gamma
    kind, n = _resolve_mode(check, gamma, r1)
    if kind == "exhaustive":
        batches = _subset_batches(gamma, r1)
    else:
        rng = ef.SeededRng(seed)
        picks = []
        for _ in range(n):
            pool = list(range(gamma))
            for t in range(r1):
                k = t + rng.below(gamma - t)
                pool[t], pool[k] = pool[k], pool[t]
            picks.append(sorted(pool[:r1]))
        batches = [np.array(picks[i:i + 20000]) for i in range(0, len(picks), 20000)]
    for subsets in batches:
        mats = np.transpose(M[:, subsets], (1, 0, 2))
        if (ef.batched_det(mats, config.p) == 0).any():
            return False
    return True


def random_config(r: int, gamma: int, p: int, seed: int) -> PointConfiguration:
    """gamma seeded random points of P^r, drawn point by point."""
    rng = ef.SeededRng(seed)
    raw = rng.residues(p, (r + 1) * gamma).reshape(gamma, r + 1).T
    for j in range(gamma):
        while not raw[:, j].any():
            raw[:, j] = rng.residues(p, r + 1)
    return PointConfiguration(p, normalize_columns(raw, p))


def random_lgp_config(r: int, gamma: int, p: int = ef.DEFAULT_PRIME, seed: int = 0,
                      check=None, retries: int = MAX_RETRIES) -> PointConfiguration:
    if gamma < r + 1:
        raise ValueError("need gamma >= r + 1")
    ef.check_prime(p)
    for s in ef.derived_seeds(seed, retries):
        config = random_config(r, gamma, p, s)
        if config.distinct() and is_lgp(config, check):
            return config
    raise GenerationError(
        f"no configuration of {gamma} points in P^{r} over GF({p}) in linearly "
        f"general position after {retries} seeds starting at {seed}"
    )


# ---------------------------------------------------------------------------
# evaluation, Hilbert function, ideal


def evaluation_matrix(config: PointConfiguration, d: int) -> np.ndarray:
    """gamma x dim Sym_d: monomials (in sym_basis order) at each point."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    p = config.p
    X = config.normal_coords
    n, gamma = X.shape
    powers = np.ones((n, d + 1, gamma), dtype=np.int64)
    for e in range(1, d + 1):
        powers[:, e] = powers[:, e - 1] * X % p
    mons = sym_basis(n, d)
    out = np.ones((gamma, len(mons)), dtype=np.int64)
    for col, e in enumerate(mons):
        v = np.ones(gamma, dtype=np.int64)
        for i, ei in enumerate(e):
            if ei:
                v = v * powers[i, ei] % p
        out[:, col] = v
    return out


def hilbert_function(config: PointConfiguration, d: int) -> int:
    return ef.rank(evaluation_matrix(config, d), config.p)


def ideal_piece(config: PointConfiguration, d: int) -> np.ndarray:
    """Basis (columns, in monomial coordinates) of the degree-d forms vanishing on Γ."""
    return ef.kernel_basis(evaluation_matrix(config, d), config.p)


# ---------------------------------------------------------------------------
# Gale duality


def gale_transform(config: PointConfiguration) -> PointConfiguration:
    """The gamma points in P^s, s = gamma - r - 2, given by the rows of ker(M).

    The coordinate matrix is exactly ``kernel_basis(M).T`` (not rescaled), so
    that applying the transform twice returns a matrix with the same row
    space as ``M``.
    """
    M = config.coords
    r1, gamma = M.shape
    if gamma < r1 + 2:
        raise GaleUndefinedError(f"need gamma >= r + 3, got gamma={gamma}, r={r1 - 1}")
    if ef.rank(M, config.p) != r1:
        raise GaleUndefinedError("points do not span P^r")
    N = ef.kernel_basis(M, config.p)
    zero = np.flatnonzero(~N.any(axis=1))
    if zero.size:
        raise GaleUndefinedError(
            f"Gale transform undefined: kernel row {int(zero[0])} is zero "
            "(all points but that one lie in a hyperplane)"
        )
    return PointConfiguration(config.p, N.T)


# ---------------------------------------------------------------------------
# canonical module


@dataclass(frozen=True)
class CanonicalPiece:
    degree: int
    basis: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def canonical_piece(config: PointConfiguration, j: int) -> CanonicalPiece:
    """(ω_Γ)_j inside the functionals on k^gamma.

    For j <= 0 this is the annihilator of the image of degree -j forms; for
    j >= 1 it is everything.
    """
    if j >= 1:
        return CanonicalPiece(j, np.eye(config.gamma, dtype=np.int64))
    ev = evaluation_matrix(config, -j)
    return CanonicalPiece(j, ef.kernel_basis(ev.T, config.p))


def linear_form_values(config: PointConfiguration, form) -> np.ndarray:
    form = ef.residues(np.asarray(form).reshape(-1), config.p)
    if form.size != config.r + 1:
        raise ValueError(f"a linear form on P^{config.r} needs {config.r + 1} coefficients")
    return ef.matmul(form[None, :], config.normal_coords, config.p)[0]


def canonical_action(config: PointConfiguration, form) -> np.ndarray:
    """Multiplication by a linear form on functionals: diag of its values."""
    return np.diag(linear_form_values(config, form))


@dataclass(frozen=True)
class PairingTensor:
    """μ: W ⊗ U -> V with ``entries[a, b, k]`` the k-th V-coordinate of μ(w_a ⊗ u_b)."""

    p: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = ef.residues(self.entries, self.p)
        if e.ndim != 3 or min(e.shape) < 1:
            raise ValueError("pairing tensor needs positive dimensions (w, u, v)")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @property
    def w(self) -> int:
        return self.entries.shape[0]

    @property
    def u(self) -> int:
        return self.entries.shape[1]

    @property
    def v(self) -> int:
        return self.entries.shape[2]

    @property
    def dims(self) -> tuple[int, int, int]:
        return self.entries.shape

    def to_text(self) -> str:
        lines = [f"{self.p} {self.w} {self.u} {self.v}"]
        for a in range(self.w):
            for b in range(self.u):
                lines.append(" ".join(str(int(x)) for x in self.entries[a, b]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PairingTensor":
        lines = text.splitlines()
        if not lines:
            raise ValueError("empty tensor file")
        p, w, u, v = ef.parse_int_line(lines[0], 4)
        if min(w, u, v) < 1:
            raise ValueError("tensor dimensions must be positive")
        body = lines[1:]
        if len(body) != w * u:
            raise ValueError(f"expected {w * u} rows, got {len(body)}")
        rows = np.array([ef.parse_int_line(ln, v) for ln in body], dtype=np.int64)
        if rows.min() < 0 or rows.max() >= p:
            raise ValueError("entries must be residues in [0, p)")
        return cls(p, rows.reshape(w, u, v))


@dataclass(frozen=True)
class PairingData:
    tensor: PairingTensor
    U: np.ndarray = field(repr=False)
    V: np.ndarray = field(repr=False)


def build_mu(gamma_prime: PointConfiguration) -> PairingData:
    """The multiplication pairing W ⊗ (ω_Γ')_{-2} -> (ω_Γ')_{-1}.

    W is the space of linear forms on P^s.  μ(x_a ⊗ λ) is the componentwise
    product of the values of x_a with λ, written in the basis of the
    degree -1 piece returned alongside the tensor.
    """
    p = gamma_prime.p
    if ideal_piece(gamma_prime, 2).shape[1] != 0:
        raise PreconditionError("the points lie on a quadric")
    U = canonical_piece(gamma_prime, -2).basis
    if U.shape[1] == 0:
        raise DegeneratePairingError(
            "μ degenerate: parameters outside counterexample range "
            "(points impose independent conditions on quadrics)"
        )
    V = canonical_piece(gamma_prime, -1).basis
    X = gamma_prime.normal_coords
    w, u = X.shape[0], U.shape[1]
    prods = (X[:, :, None] * U[None, :, :]) % p  # (w, gamma, u)
    stacked = np.transpose(prods, (1, 0, 2)).reshape(gamma_prime.gamma, w * u)
    coords = ef.solve(V, stacked, p)  # (v, w*u)
    entries = coords.T.reshape(w, u, V.shape[1])
    return PairingData(PairingTensor(p, entries), U, V)


# ---------------------------------------------------------------------------
# graded module presentations


def _variable_values(config: PointConfiguration) -> np.ndarray:
    return config.normal_coords


def _present(pieces: list[np.ndarray], values: np.ndarray, p: int, d0: int,
             nvars: int) -> GradedModulePresentation:
    actions = []
    for lo, hi in zip(pieces, pieces[1:]):
        blocks = np.zeros((nvars, hi.shape[1], lo.shape[1]), dtype=np.int64)
        if lo.shape[1] and hi.shape[1]:
            for k in range(nvars):
                blocks[k] = ef.solve(hi, values[k][:, None] * lo % p, p)
        actions.append(blocks)
    dims = [b.shape[1] for b in pieces]
    return GradedModulePresentation(p, nvars, d0, dims, actions)


def quotient_module_presentation(config: PointConfiguration, window) -> GradedModulePresentation:
    """S/I_Γ in degrees ``window = (0, d_max)`` as functions on the points.

    (S/I)_d is the column space of the evaluation matrix with the pivot
    monomials as basis; x_k acts by componentwise multiplication.
    """
    lo, hi = window
    if lo != 0:
        raise WindowError("quotient presentations start in degree 0")
    pieces = []
    for d in range(lo, hi + 1):
        ev = evaluation_matrix(config, d)
        pieces.append(ev[:, ef.pivot_columns(ev, config.p)])
    return _present(pieces, _variable_values(config), config.p, lo, config.r + 1)


def canonical_module_presentation(config: PointConfiguration, window) -> GradedModulePresentation:
    """ω_Γ in degrees ``window = (j_min, j_max)``.

    ``(ω_Γ)_{j_min - 1}`` must vanish, so the presentation's contract that
    the module is zero below the window actually holds.
    """
    lo, hi = window
    if hi < lo:
        raise WindowError("empty window")
    if canonical_piece(config, lo - 1).dim != 0:
        raise WindowError(
            f"(ω_Γ)_{lo - 1} is nonzero; the window must start at or below the "
            "lowest nonzero degree"
        )
    pieces = [canonical_piece(config, j).basis for j in range(lo, hi + 1)]
    return _present(pieces, _variable_values(config), config.p, lo, config.r + 1)


def lowest_canonical_degree(config: PointConfiguration) -> int:
    """Smallest j with (ω_Γ)_j nonzero."""
    j = 0
    while canonical_piece(config, j - 1).dim:
        j -= 1
    return j
