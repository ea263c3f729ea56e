"""Exterior-algebra side of the BGG correspondence.

Conventions:

* An :class:`ExteriorModule` over ``E = ∧V*`` lives in degrees
  ``d0 .. d0 + len(dims) - 1`` and each ``e_k`` lowers the degree by one.
  ``acts[t][k]`` is the matrix of ``e_k`` from degree ``d0 + t + 1`` to
  ``d0 + t``.
* ``L(P)`` has ``F_i = S ⊗ P_{d0+i}`` and differential ``Σ_k x_k ⊗ e_k``, so
  the coefficient matrices of a :class:`LinearComplex` use the same layout:
  ``coeffs[i-1][k]`` is ``C_k`` for ``F_i -> F_{i-1}``.
* The dual module has ``(P*)_d = (P_{-d})*`` and transposed actions, with no
  extra signs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb

import numpy as np

from . import exactfield as ef
from .multilinear import (divided_diagonal, divided_dim, shuffle_sign, sym_basis,
                          sym_dim, sym_index, sym_multiplication, wedge_basis,
                          wedge_diagonal, wedge_dim, wedge_index)
from .points import PairingTensor


class EnumerationBudgetError(ValueError):
    pass


@dataclass
class ExteriorModule:
    p: int
    nvars: int
    d0: int
    dims: list[int]
    acts: list[np.ndarray] = field(repr=False)

    def __post_init__(self):
        if len(self.acts) != max(len(self.dims) - 1, 0):
            raise ValueError("need one action block per consecutive degree pair")
        self.acts = [ef.residues(a, self.p) for a in self.acts]
        for t, a in enumerate(self.acts):
            if a.shape != (self.nvars, self.dims[t], self.dims[t + 1]):
                raise ValueError(f"action block {t} has shape {a.shape}")

    @property
    def d1(self) -> int:
        return self.d0 + len(self.dims) - 1

    def dim(self, d: int) -> int:
        return self.dims[d - self.d0] if self.d0 <= d <= self.d1 else 0

    def action(self, k: int, d: int) -> np.ndarray:
        """e_k : P_d -> P_{d-1}."""
        if self.d0 < d <= self.d1:
            return self.acts[d - self.d0 - 1][k]
        return np.zeros((self.dim(d - 1), self.dim(d)), dtype=np.int64)

    def is_valid(self) -> bool:
        """e_k^2 = 0 and e_j e_k = -e_k e_j on every piece."""
        p = self.p
        for t in range(1, len(self.acts)):
            hi, lo = self.acts[t], self.acts[t - 1]
            for j in range(self.nvars):
                for k in range(j, self.nvars):
                    s = ef.matmul(lo[j], hi[k], p) + ef.matmul(lo[k], hi[j], p)
                    if (s % p).any():
                        return False
        return True

    def dual(self) -> "ExteriorModule":
        acts = [np.transpose(a, (0, 2, 1)) for a in reversed(self.acts)]
        return ExteriorModule(self.p, self.nvars, -self.d1, self.dims[::-1], acts)

    def shifted(self, k: int) -> "ExteriorModule":
        """The same module with every degree raised by ``k``."""
        return ExteriorModule(self.p, self.nvars, self.d0 + k, list(self.dims), self.acts)


@dataclass
class LinearComplex:
    """``F_i = S^{ranks[i]}(-i-twist)``, differentials ``Σ_k x_k C_k``."""

    p: int
    nvars: int
    ranks: list[int]
    coeffs: list[np.ndarray] = field(repr=False)
    twist: int = 0

    def __post_init__(self):
        if len(self.coeffs) != max(len(self.ranks) - 1, 0):
            raise ValueError("need one coefficient block per differential")
        self.coeffs = [ef.residues(c, self.p) for c in self.coeffs]
        for i, c in enumerate(self.coeffs, start=1):
            if c.shape != (self.nvars, self.ranks[i - 1], self.ranks[i]):
                raise ValueError(f"coefficients of φ_{i} have shape {c.shape}")

    @property
    def length(self) -> int:
        return len(self.ranks) - 1

    def coefficient(self, k: int, i: int) -> np.ndarray:
        return self.coeffs[i - 1][k]

    def stacked(self, i: int) -> np.ndarray:
        """[C_0; ...; C_n] for φ_i : F_i -> F_{i-1}."""
        c = self.coeffs[i - 1]
        return c.reshape(self.nvars * c.shape[1], c.shape[2])

    def squares_to_zero(self) -> bool:
        """Every quadric coefficient of φ_{i-1} φ_i vanishes."""
        p = self.p
        for i in range(2, self.length + 1):
            lo, hi = self.coeffs[i - 2], self.coeffs[i - 1]
            for j in range(self.nvars):
                for k in range(j, self.nvars):
                    s = ef.matmul(lo[j], hi[k], p)
                    if j != k:
                        s = (s + ef.matmul(lo[k], hi[j], p)) % p
                    if s.any():
                        return False
        return True

    def same_as(self, other: "LinearComplex") -> bool:
        return (self.p == other.p and self.nvars == other.nvars
                and self.ranks == other.ranks
                and all(np.array_equal(a, b) for a, b in zip(self.coeffs, other.coeffs)))


def L_functor(P: ExteriorModule) -> LinearComplex:
    """The linear free complex with F_i = S ⊗ P_{d0+i}."""
    return LinearComplex(P.p, P.nvars, list(P.dims), [a.copy() for a in P.acts], twist=P.d0)


def module_of(F: LinearComplex) -> ExteriorModule:
    """Inverse of :func:`L_functor`."""
    return ExteriorModule(F.p, F.nvars, F.twist, list(F.ranks), [c.copy() for c in F.coeffs])


def _as_module(obj) -> ExteriorModule:
    return module_of(obj) if isinstance(obj, LinearComplex) else obj


def is_irredundant(F: LinearComplex) -> bool:
    """Each stacked coefficient matrix of φ_i, i >= 1, is injective on generators.

    This is H_i(F)_i = 0 for i > 0, including the map F_1 -> F_0.
    """
    for i in range(1, F.length + 1):
        if F.ranks[i] and ef.rank(F.stacked(i), F.p) < F.ranks[i]:
            return False
    return True


def is_generated_in_degree_zero(P: ExteriorModule, dualize: bool = False) -> bool:
    if dualize:
        P = P.dual()
    if any(P.dim(d) for d in range(1, P.d1 + 1)):
        return False
    span = np.eye(P.dim(0), dtype=np.int64)
    for d in range(0, P.d0, -1):
        if P.dim(d - 1) == 0:
            span = np.zeros((0, 0), dtype=np.int64)
            continue
        if span.shape[1] == 0:
            return False
        images = np.hstack([ef.matmul(P.action(k, d), span, P.p) for k in range(P.nvars)])
        span = ef.column_space_basis(images, P.p)
        if span.shape[1] < P.dim(d - 1):
            return False
    return True


# ---------------------------------------------------------------------------
# maximal irredundant quotient


def max_irredundant_quotient_generation(F) -> LinearComplex:
    """L(Q*) with Q the E-submodule of P* generated by (P*)_0.

    ``B_i`` spans Q_{-i} inside (P_i)*; e_k acts on P* through the
    transposed matrices, and the induced action on Q is read off in the
    bases ``B_i``.
    """
    P = _as_module(F)
    p = P.p
    bases = [np.eye(P.dims[0], dtype=np.int64)]
    coeffs = []
    for t, block in enumerate(P.acts):
        prev = bases[-1]
        images = [ef.matmul(block[k].T, prev, p) for k in range(P.nvars)]
        if prev.shape[1]:
            nxt = ef.column_space_basis(np.hstack(images), p)
        else:
            nxt = np.zeros((P.dims[t + 1], 0), dtype=np.int64)
        c = np.zeros((P.nvars, prev.shape[1], nxt.shape[1]), dtype=np.int64)
        if prev.shape[1] and nxt.shape[1]:
            coords = ef.solve(nxt, np.hstack(images), p)
            for k in range(P.nvars):
                c[k] = coords[:, k * prev.shape[1]:(k + 1) * prev.shape[1]].T
        bases.append(nxt)
        coeffs.append(c)
    ranks = [b.shape[1] for b in bases]
    return LinearComplex(p, P.nvars, ranks, coeffs, twist=P.d0)


def annihilator_rows(P: ExteriorModule) -> list[np.ndarray]:
    """Row bases of the spans of all degree-i exterior monomials P_{d0+i} -> P_{d0}.

    N_i is the common kernel of these rows.
    """
    p = P.p
    rows = [np.eye(P.dims[0], dtype=np.int64)]
    for block in P.acts:
        prev = rows[-1]
        if prev.shape[0] == 0:
            rows.append(np.zeros((0, block.shape[2]), dtype=np.int64))
            continue
        stack = np.vstack([ef.matmul(prev, block[k], p) for k in range(P.nvars)])
        R, piv = ef.rref(stack, p)
        rows.append(R[:len(piv)])
    return rows


def max_irredundant_quotient_annihilator(F) -> LinearComplex:
    """L(P/N), N_i = {n in P_i : every degree-i exterior monomial kills n}."""
    P = _as_module(F)
    p = P.p
    rows = annihilator_rows(P)
    pivots = [[int(np.flatnonzero(r[i])[0]) for i in range(r.shape[0])] for r in rows]
    coeffs = []
    for t, block in enumerate(P.acts):
        lo, hi = rows[t], rows[t + 1]
        c = np.zeros((P.nvars, lo.shape[0], hi.shape[0]), dtype=np.int64)
        for k in range(P.nvars):
            if lo.shape[0] and hi.shape[0]:
                c[k] = ef.matmul(lo, block[k][:, pivots[t + 1]], p)
        coeffs.append(c)
    return LinearComplex(p, P.nvars, [r.shape[0] for r in rows], coeffs, twist=P.d0)


# ---------------------------------------------------------------------------
# the complexes F(μ)


def f_mu_ranks(w: int, u: int) -> list[int]:
    return [comb(w, l + 1) * comb(l + u - 1, u - 1) for l in range(w)]


def build_F_mu_direct(mu: PairingTensor) -> LinearComplex:
    """F_l = ∧^{l+1}W ⊗ D_l(U) with differential (μ ⊗ 1)(Δ_∧ ⊗ Δ_D).

    The coefficient of x_k on ``e_S ⊗ u^(α)`` is
    ``Σ sign(a, S) μ_{a,b,k} e_{S∖a} ⊗ u^(α - e_b)``.
    """
    w, u, v = mu.dims
    p = mu.p
    ranks = f_mu_ranks(w, u)
    coeffs = []
    for l in range(1, w):
        dw = wedge_diagonal(w, l + 1, p).reshape(wedge_dim(w, l), w, wedge_dim(w, l + 1))
        du = divided_diagonal(u, l, p).reshape(divided_dim(u, l - 1), u, divided_dim(u, l))
        dw = np.where(dw > p // 2, dw - p, dw)
        c = np.einsum("xas,ybt,abk->kxyst", dw, du, mu.entries, optimize=True)
        coeffs.append(c.reshape(v, ranks[l - 1], ranks[l]) % p)
    return LinearComplex(p, v, ranks, coeffs)


def pairing_module(mu: PairingTensor) -> ExteriorModule:
    """Q with Q_{-l} = ∧^{l+1}W* ⊗ Sym_l(U*), l = 0..w-1.

    e_k acts by left multiplication with ``Σ_{a,b} μ_{a,b,k} w_a* ⊗ u_b*``.
    """
    w, u, v = mu.dims
    p = mu.p
    dims = [comb(w, l + 1) * sym_dim(u, l) for l in range(w - 1, -1, -1)]
    acts = []
    for l in range(w - 2, -1, -1):  # Q_{-l} -> Q_{-l-1}
        src_w, tgt_w = wedge_basis(w, l + 1), wedge_index(w, l + 2)
        src_u, tgt_u = sym_basis(u, l), sym_index(u, l + 1)
        nu_t = sym_dim(u, l + 1)
        block = np.zeros((v, len(tgt_w) * nu_t, len(src_w) * len(src_u)), dtype=np.int64)
        for ti, T in enumerate(src_w):
            for a in range(w):
                if a in T:
                    continue
                S = tuple(sorted(T + (a,)))
                sgn = shuffle_sign((a,), T)
                for bi, beta in enumerate(src_u):
                    col = ti * len(src_u) + bi
                    for b in range(u):
                        alpha = list(beta)
                        alpha[b] += 1
                        row = tgt_w[S] * nu_t + tgt_u[tuple(alpha)]
                        block[:, row, col] += sgn * mu.entries[a, b]
        acts.append(block % p)
    return ExteriorModule(p, v, -(w - 1), dims, acts)


def build_F_mu_via_Q(mu: PairingTensor) -> LinearComplex:
    return L_functor(pairing_module(mu).dual())


# ---------------------------------------------------------------------------
# homology and restriction


def _strand_map(F: LinearComplex, i: int, m: int) -> np.ndarray:
    """Sym_{m-i} ⊗ F_i -> Sym_{m-i+1} ⊗ F_{i-1}."""
    t = m - i
    n = F.nvars
    src = sym_dim(n, t) * F.ranks[i]
    if i < 1 or i > F.length or t < 0 or src == 0:
        return np.zeros((0 if i < 1 else sym_dim(n, t + 1) * F.ranks[i - 1], max(src, 0)),
                        dtype=np.int64)
    out = np.zeros((sym_dim(n, t + 1) * F.ranks[i - 1], src), dtype=np.int64)
    for k in range(n):
        out += np.kron(sym_multiplication(n, t, k), F.coefficient(k, i))
    return out % F.p


def strand_homology(F: LinearComplex, i: int, m: int) -> int:
    """dim H_i of the internal-degree-m part of F (generators of F_i in degree i)."""
    if i < 0 or i > F.length or m < 0:
        raise ValueError(f"position ({i}, {m}) outside the complex")
    middle = sym_dim(F.nvars, m - i) * F.ranks[i]
    if middle == 0:
        return 0
    out = _strand_map(F, i, m)
    into = _strand_map(F, i + 1, m) if i + 1 <= F.length else np.zeros((middle, 0), dtype=np.int64)
    return middle - ef.rank(out, F.p) - ef.rank(into, F.p)


def restrict_complex(F: LinearComplex, projection) -> LinearComplex:
    """Base change along V -> V' given by a full-rank (dim V') x (dim V) matrix."""
    T = ef.residues(projection, F.p)
    if T.shape[1] != F.nvars:
        raise ValueError(f"projection must have {F.nvars} columns")
    if ef.rank(T, F.p) != T.shape[0]:
        raise ValueError("projection is rank deficient")
    coeffs = [np.einsum("jk,kab->jab", T, c) % F.p for c in F.coeffs]
    return LinearComplex(F.p, T.shape[0], list(F.ranks), coeffs, F.twist)


# ---------------------------------------------------------------------------
# 1-genericity and the minors criterion


def slice_matrices(mu: PairingTensor, bs: np.ndarray) -> np.ndarray:
    """For each row b of ``bs``, the v x w matrix of μ(- ⊗ b)."""
    return np.einsum("abk,nb->nka", mu.entries, ef.residues(bs, mu.p)) % mu.p


def _poly_mod(f: list[int], g: list[int], p: int) -> list[int]:
    """Remainder of f by monic g; coefficient lists, lowest degree first."""
    f = list(f)
    dg = len(g) - 1
    for top in range(len(f) - 1, dg - 1, -1):
        c = f[top] % p
        if c:
            for i in range(dg + 1):
                f[top - dg + i] = (f[top - dg + i] - c * g[i]) % p
    return [x % p for x in f[:dg]]


def irreducible_polynomial(p: int, e: int) -> list[int]:
    """First monic irreducible of degree e over GF(p) (lowest degree first)."""
    if e == 1:
        return [0, 1]
    for tail in product(range(p), repeat=e):
        f = list(reversed(tail)) + [1]
        if f[0] == 0:
            continue
        reducible = False
        for d in range(1, e // 2 + 1):
            for g_tail in product(range(p), repeat=d):
                g = list(reversed(g_tail)) + [1]
                if not any(_poly_mod(f, g, p)):
                    reducible = True
                    break
            if reducible:
                break
        if not reducible:
            return f
    raise ArithmeticError("no irreducible polynomial found")


def _multiplication_matrices(p: int, e: int) -> np.ndarray:
    """Powers 0..e-1 of the companion matrix of the chosen irreducible."""
    f = irreducible_polynomial(p, e)
    C = np.zeros((e, e), dtype=np.int64)
    C[1:, :-1] = np.eye(e - 1, dtype=np.int64)
    C[:, -1] = [(-c) % p for c in f[:e]]
    pw = [np.eye(e, dtype=np.int64)]
    for _ in range(e - 1):
        pw.append(pw[-1] @ C % p)
    return np.array(pw)


def _projective_points(u: int, q: int, batch: int):
    """Normalized points of P^{u-1}(GF(q)), elements encoded 0..q-1."""
    for lead in range(u):
        free = u - 1 - lead
        total = q ** free
        for start in range(0, total, batch):
            idx = np.arange(start, min(start + batch, total), dtype=np.int64)
            pts = np.zeros((idx.size, u), dtype=np.int64)
            pts[:, lead] = 1
            rest = idx.copy()
            for c in range(u - 1, lead, -1):
                pts[:, c] = rest % q
                rest //= q
            yield pts


def parse_genericity_mode(mode) -> tuple[str, int]:
    if isinstance(mode, tuple):
        return mode
    kind, _, n = str(mode).partition(":")
    if kind not in ("exhaustive", "monte-carlo"):
        raise ValueError(f"unknown mode {mode!r}")
    return kind, int(n) if n else (1 if kind == "exhaustive" else 1000)


def is_one_generic(mu: PairingTensor, mode="monte-carlo:1000", *, seed: int = 0,
                   budget: int = 10**6) -> bool:
    """No nonzero a, b with μ(a ⊗ b) = 0.

    ``exhaustive:e`` decides this over GF(p^e) by checking every projective
    b; ``monte-carlo:N`` tests N seeded random b over GF(p) and can only
    prove failure.
    """
    kind, n = parse_genericity_mode(mode)
    w, u, v = mu.dims
    p = mu.p
    if v < w:
        return False
    if kind == "monte-carlo":
        rng = ef.SeededRng(seed)
        bs = rng.residues(p, n * u).reshape(n, u)
        bs = bs[bs.any(axis=1)]
        return bool((ef.batched_rank(slice_matrices(mu, bs), p) == w).all())
    e = n
    q = p ** e
    count = (q ** u - 1) // (q - 1)
    if count > budget:
        raise EnumerationBudgetError(
            f"exhaustive:{e} needs {count} points of P^{u - 1}(GF({p}^{e})), budget {budget}")
    powers = _multiplication_matrices(p, e)
    for pts in _projective_points(u, q, max(1, 200000 // (v * w * e * e))):
        digits = np.stack([(pts // p ** i) % p for i in range(e)], axis=-1)  # (N, u, e)
        mult = np.einsum("nbi,ixy->nbxy", digits, powers) % p
        big = np.einsum("abk,nbxy->nkxay", mu.entries, mult) % p
        big = big.reshape(pts.shape[0], v * e, w * e)
        if (ef.batched_rank(big, p) < w * e).any():
            return False
    return True


def linear_matrix(mu: PairingTensor) -> np.ndarray:
    """(u, v, w): the v x w matrix of linear forms in u variables, by variable."""
    return np.transpose(mu.entries, (1, 2, 0))


def _interpolation_points(u: int, d: int, p: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    mons = np.array(sym_basis(u, d), dtype=np.int64)
    n = len(mons)
    rng = ef.SeededRng(seed)
    for _ in range(64):
        pts = rng.residues(p, n * u).reshape(n, u)
        ev = np.ones((n, n), dtype=np.int64)
        for c in range(u):
            pw = np.ones((n, d + 1), dtype=np.int64)
            for t in range(1, d + 1):
                pw[:, t] = pw[:, t - 1] * pts[:, c] % p
            ev = ev * pw[:, mons[:, c]] % p
        if ef.rank(ev, p) == n:
            return pts, ev
    raise ArithmeticError("could not find interpolation points; field too small")


def minors_polynomials(mu: PairingTensor, d: int, *, budget: int = 200000,
                       seed: int = 0) -> np.ndarray:
    """Coefficient vectors (rows, in sym_basis(u, d) order) of d x d minors."""
    w, u, v = mu.dims
    p = mu.p
    if d > w or d < 1:
        raise ValueError(f"minor size {d} outside 1..{w}")
    col_sets = list(combinations(range(w), d))
    row_sets = list(combinations(range(v), d))
    if not row_sets:
        return np.zeros((0, sym_dim(u, d)), dtype=np.int64)
    if len(row_sets) * len(col_sets) > budget:
        rng = ef.SeededRng(seed)
        keep = max(1, budget // len(col_sets))
        chosen = set()
        while len(chosen) < min(keep, len(row_sets)):
            chosen.add(rng.below(len(row_sets)))
        row_sets = [row_sets[i] for i in sorted(chosen)]
    pts, ev = _interpolation_points(u, d, p, seed)
    mats = slice_matrices(mu, pts)  # (N, v, w)
    rows = np.array(row_sets)
    cols = np.array(col_sets)
    values = []
    for c in cols:
        sub = mats[:, rows][:, :, :, c]  # (N, R, d, d)
        dets = ef.batched_det(sub.reshape(-1, d, d), p).reshape(len(pts), len(rows))
        values.append(dets)
    values = np.concatenate(values, axis=1)  # (N, #minors)
    return ef.solve(ev, values, p).T


def minors_span(mu: PairingTensor, d: int, *, budget: int = 200000,
                seed: int = 0) -> tuple[bool, int]:
    polys = minors_polynomials(mu, d, budget=budget, seed=seed)
    dim = ef.rank(polys, mu.p)
    return dim == sym_dim(mu.u, d), dim


def last_term_preserved(mu: PairingTensor) -> bool:
    Fp = max_irredundant_quotient_generation(build_F_mu_direct(mu))
    return Fp.ranks[mu.w - 1] == comb(mu.w + mu.u - 2, mu.u - 1)


# ---------------------------------------------------------------------------
# sample data


def exterior_algebra(nvars: int, p: int, top: int = 0) -> ExteriorModule:
    """E itself, with 1 in degree ``top`` and ∧^k V* in degree ``top - k``."""
    dims = [wedge_dim(nvars, k) for k in range(nvars, -1, -1)]
    acts = []
    for k in range(nvars - 1, -1, -1):  # ∧^k -> ∧^{k+1}
        src, tgt = wedge_basis(nvars, k), wedge_index(nvars, k + 1)
        block = np.zeros((nvars, len(tgt), len(src)), dtype=np.int64)
        for c, T in enumerate(src):
            for j in range(nvars):
                if j not in T:
                    block[j, tgt[tuple(sorted(T + (j,)))], c] = shuffle_sign((j,), T)
        acts.append(block % p)
    return ExteriorModule(p, nvars, top - nvars, dims, acts)


def _closure(P: ExteriorModule, seeds: dict[int, np.ndarray]) -> dict[int, np.ndarray]:
    """Column bases of the E-submodule generated by the given vectors."""
    p = P.p
    spans = {d: np.zeros((P.dim(d), 0), dtype=np.int64) for d in range(P.d0, P.d1 + 1)}
    for d in range(P.d1, P.d0 - 1, -1):
        parts = [spans[d]]
        if d in seeds:
            parts.append(seeds[d])
        if d + 1 <= P.d1 and spans[d + 1].shape[1]:
            parts += [ef.matmul(P.action(k, d + 1), spans[d + 1], p) for k in range(P.nvars)]
        spans[d] = ef.column_space_basis(np.hstack(parts), p) if P.dim(d) else spans[d]
    return spans


def quotient_module(P: ExteriorModule, sub: dict[int, np.ndarray]) -> ExteriorModule:
    """P / N for an E-submodule N given by column bases per degree."""
    p = P.p
    proj, lifts = {}, {}
    for d in range(P.d0, P.d1 + 1):
        ann = ef.kernel_basis(sub[d].T, p) if sub[d].shape[1] else np.eye(P.dim(d), dtype=np.int64)
        R, piv = ef.rref(ann.T, p) if ann.shape[1] else (np.zeros((0, P.dim(d)), dtype=np.int64), [])
        proj[d] = R[:len(piv)]
        lifts[d] = list(piv)
    acts = []
    for t in range(len(P.acts)):
        lo, hi = P.d0 + t, P.d0 + t + 1
        block = np.zeros((P.nvars, proj[lo].shape[0], proj[hi].shape[0]), dtype=np.int64)
        for k in range(P.nvars):
            if block[k].size:
                block[k] = ef.matmul(proj[lo], P.acts[t][k][:, lifts[hi]], p)
        acts.append(block)
    return ExteriorModule(p, P.nvars, P.d0, [proj[d].shape[0] for d in range(P.d0, P.d1 + 1)], acts)


def truncate(P: ExteriorModule, lo: int, hi: int) -> ExteriorModule:
    """The subquotient living in degrees lo..hi."""
    keep = [d for d in range(lo, hi + 1)]
    dims = [P.dim(d) for d in keep]
    acts = []
    for d in keep[1:]:
        a = np.zeros((P.nvars, P.dim(d - 1), P.dim(d)), dtype=np.int64)
        if P.d0 < d <= P.d1:
            a = P.acts[d - P.d0 - 1]
        acts.append(a)
    return ExteriorModule(P.p, P.nvars, lo, dims, acts)


def direct_sum(mods: list[ExteriorModule]) -> ExteriorModule:
    lo = min(m.d0 for m in mods)
    hi = max(m.d1 for m in mods)
    mods = [truncate(m, lo, hi) for m in mods]
    dims = [sum(m.dims[t] for m in mods) for t in range(hi - lo + 1)]
    acts = []
    for t in range(hi - lo):
        block = np.zeros((mods[0].nvars, dims[t], dims[t + 1]), dtype=np.int64)
        r = c = 0
        for m in mods:
            a = m.acts[t]
            block[:, r:r + a.shape[1], c:c + a.shape[2]] = a
            r += a.shape[1]
            c += a.shape[2]
        acts.append(block)
    return ExteriorModule(mods[0].p, mods[0].nvars, lo, dims, acts)


def random_exterior_module(nvars: int, length: int, p: int, seed: int,
                           max_dim: int = 5) -> ExteriorModule:
    """A seeded random E-module in degrees 0..length with pieces of dim <= max_dim.

    Built as a truncated quotient of a free module by a random submodule,
    possibly dualized, then written in random bases.
    """
    rng = ef.SeededRng(seed)
    gens = [exterior_algebra(nvars, p, top=rng.below(length + 2)) for _ in range(1 + rng.below(3))]
    P = truncate(direct_sum(gens), 0, length)
    seeds = {}
    for d in range(P.d0, P.d1 + 1):
        if P.dim(d) and rng.below(2):
            seeds[d] = rng.residues(p, P.dim(d) * (1 + rng.below(2))).reshape(P.dim(d), -1)
    P = quotient_module(P, _closure(P, seeds))
    # cut oversized pieces down by quotienting random vectors
    while max(P.dims) > max_dim:
        d = P.d0 + int(np.argmax(P.dims))
        P = quotient_module(P, _closure(P, {d: rng.residues(p, P.dim(d)).reshape(-1, 1)}))
    if rng.below(2):
        P = P.dual().shifted(length)
    changes = []
    for dim in P.dims:
        while True:
            g = rng.residues(p, dim * dim).reshape(dim, dim)
            if ef.rank(g, p) == dim:
                break
        changes.append(g)
    acts = [np.array([ef.matmul(ef.matmul(changes[t], a[k], p), ef.inverse(changes[t + 1], p), p)
                      for k in range(nvars)]).reshape(nvars, P.dims[t], P.dims[t + 1])
            for t, a in enumerate(P.acts)]
    return ExteriorModule(p, nvars, P.d0, list(P.dims), acts)


def binary_form_tensor(w_deg: int, u_deg: int, p: int) -> PairingTensor:
    """Multiplication of binary forms, Sym_a ⊗ Sym_b -> Sym_{a+b}, monomial bases."""
    return PairingTensor(p, np.array([[[1 if k == a + b else 0 for k in range(w_deg + u_deg + 1)]
                                       for b in range(u_deg + 1)] for a in range(w_deg + 1)]))


def identity_tensor(w: int, u: int, p: int) -> PairingTensor:
    return PairingTensor(p, np.eye(w * u, dtype=np.int64).reshape(w, u, w * u))


def read_tensor(text: str) -> PairingTensor:
    return PairingTensor.from_text(text)
