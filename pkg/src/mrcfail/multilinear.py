"""Monomial bases and structure maps for Sym, ∧ and divided powers.

Basis orders (part of the file/test contract):

* ``sym_basis(n, d)``: exponent tuples summing to ``d``, lexicographically
  descending, so ``(d, 0, ..., 0)`` comes first.
* ``wedge_basis(n, k)``: increasing index tuples in lexicographic order.
* ``divided_basis(u, m)``: indexed exactly like ``sym_basis(u, m)``.

A tensor product ``X ⊗ Y`` is ordered first-factor-major, i.e. basis
element ``(x, y)`` sits at ``x * dim(Y) + y``; this is what ``np.kron``
produces.  A linear map ``X -> Y`` is stored as a ``dim(Y) x dim(X)``
matrix whose columns are images of basis vectors.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from math import comb

import numpy as np


@lru_cache(maxsize=None)
def sym_basis(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    if n < 0 or d < 0:
        return ()
    if n == 0:
        return ((),) if d == 0 else ()

    def rec(k: int, left: int):
        if k == 1:
            yield (left,)
            return
        for first in range(left, -1, -1):
            for rest in rec(k - 1, left - first):
                yield (first,) + rest

    return tuple(rec(n, d))


@lru_cache(maxsize=None)
def sym_index(n: int, d: int) -> dict[tuple[int, ...], int]:
    return {e: i for i, e in enumerate(sym_basis(n, d))}


def sym_dim(n: int, d: int) -> int:
    if d < 0 or n < 0:
        return 0
    if n == 0:
        return 1 if d == 0 else 0
    return comb(n + d - 1, d)


@lru_cache(maxsize=None)
def wedge_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    if k < 0 or k > n:
        return ()
    return tuple(combinations(range(n), k))


@lru_cache(maxsize=None)
def wedge_index(n: int, k: int) -> dict[tuple[int, ...], int]:
    return {s: i for i, s in enumerate(wedge_basis(n, k))}


def wedge_dim(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0


def divided_basis(u: int, m: int) -> tuple[tuple[int, ...], ...]:
    return sym_basis(u, m)


def divided_dim(u: int, m: int) -> int:
    return sym_dim(u, m)


def shuffle_sign(front: tuple[int, ...], back: tuple[int, ...]) -> int:
    """Sign with ``e_front ∧ e_back = sign * e_sorted``."""
    inversions = sum(1 for x in front for y in back if x > y)
    return -1 if inversions % 2 else 1


def removal_sign(k: int, s: tuple[int, ...]) -> int:
    """(-1)^(position of k in s), positions counted from 0."""
    return -1 if s.index(k) % 2 else 1


def wedge_coproduct(n: int, a: int, b: int, p: int) -> np.ndarray:
    """∧^(a+b) -> ∧^a ⊗ ∧^b, ``e_S ↦ Σ sign(B, S∖B) e_{S∖B} ⊗ e_B``.

    ``sign(B, A)`` is the sign of ``e_B ∧ e_A`` relative to ``e_S``; for
    ``b = 1`` this is ``(-1)^(position of k in S)``.
    """
    src = wedge_basis(n, a + b)
    ia, ib = wedge_index(n, a), wedge_index(n, b)
    nb = wedge_dim(n, b)
    out = np.zeros((wedge_dim(n, a) * nb, len(src)), dtype=np.int64)
    for col, s in enumerate(src):
        for back in combinations(s, b):
            front = tuple(x for x in s if x not in back)
            out[ia[front] * nb + ib[back], col] = shuffle_sign(back, front)
    return out % p


def wedge_diagonal(n: int, k: int, p: int) -> np.ndarray:
    """∧^k W -> ∧^(k-1) W ⊗ W for ``dim W = n``."""
    if not 1 <= k <= n:
        raise ValueError(f"exterior degree {k} out of range 1..{n}")
    return wedge_coproduct(n, k - 1, 1, p)


def divided_coproduct(u: int, a: int, b: int, p: int) -> np.ndarray:
    """D_(a+b) -> D_a ⊗ D_b, ``u^(α) ↦ Σ_{β ≤ α, |β| = b} u^(α-β) ⊗ u^(β)``."""
    if a < 0 or b < 0:
        raise ValueError("negative divided-power degree")
    src = divided_basis(u, a + b)
    ia, ib = sym_index(u, a), sym_index(u, b)
    nb = divided_dim(u, b)
    out = np.zeros((divided_dim(u, a) * nb, len(src)), dtype=np.int64)
    for col, alpha in enumerate(src):
        for beta in sym_basis(u, b):
            if all(x <= y for x, y in zip(beta, alpha)):
                rest = tuple(y - x for x, y in zip(beta, alpha))
                out[ia[rest] * nb + ib[beta], col] = 1
    return out % p


def divided_diagonal(u: int, m: int, p: int) -> np.ndarray:
    """D_m(U) -> D_(m-1)(U) ⊗ U with all coefficients 1."""
    if m < 1:
        raise ValueError("divided diagonal needs degree m >= 1")
    return divided_coproduct(u, m - 1, 1, p)


@lru_cache(maxsize=None)
def _sym_mult(n: int, t: int, k: int) -> np.ndarray:
    src = sym_basis(n, t)
    idx = sym_index(n, t + 1)
    out = np.zeros((sym_dim(n, t + 1), len(src)), dtype=np.int64)
    for col, e in enumerate(src):
        f = list(e)
        f[k] += 1
        out[idx[tuple(f)], col] = 1
    out.setflags(write=False)
    return out


def sym_multiplication(n: int, t: int, k: int) -> np.ndarray:
    """Sym_t -> Sym_(t+1), multiplication by the k-th variable."""
    return _sym_mult(n, t, k)


def koszul_map(i: int, actions, p: int, *, source_dim: int | None = None,
               target_dim: int | None = None, dtype=np.int64) -> np.ndarray:
    """Koszul differential ``∧^i V ⊗ M_d -> ∧^(i-1) V ⊗ M_(d+1)``.

    ``actions[k]`` is the matrix of the k-th variable ``M_d -> M_(d+1)``.
    ``e_S ⊗ m ↦ Σ_{k ∈ S} (-1)^(pos of k in S) e_{S∖k} ⊗ A_k m``.
    """
    n = len(actions)
    if n:
        target_dim, source_dim = actions[0].shape
        for a in actions:
            if a.shape != (target_dim, source_dim):
                raise ValueError("action matrices have inconsistent shapes")
    if source_dim is None or target_dim is None:
        raise ValueError("dimensions required when no actions are given")
    src = wedge_basis(n, i)
    tgt = wedge_index(n, i - 1)
    out = np.zeros((wedge_dim(n, i - 1) * target_dim, len(src) * source_dim), dtype=dtype)
    if out.size == 0:
        return out
    plus = [np.asarray(a, dtype=dtype) % p for a in actions]
    minus = [(-a) % p for a in plus]
    for col, s in enumerate(src):
        c0 = col * source_dim
        for pos, k in enumerate(s):
            t = tgt[s[:pos] + s[pos + 1:]]
            r0 = t * target_dim
            out[r0:r0 + target_dim, c0:c0 + source_dim] = minus[k] if pos % 2 else plus[k]
    return out
