"""Exact linear algebra over prime fields GF(p).

Matrices are plain ``numpy`` int64 arrays holding residues in ``[0, p)``.
Small eliminations run in int64; large ranks go through a recursive
block elimination whose trailing updates are float64 BLAS products.
A float64 product is exact as long as ``K * (p - 1)**2 < 2**53`` for
inner dimension ``K``, so products are chunked along ``K`` when needed.

All pivot choices are "first nonzero in column order", which makes every
echelon form, kernel basis and column-space basis reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_PRIME = 32003
MAX_PRIME = 1 << 25

_FLOAT_EXACT = 1 << 53
_LEAF = 8
_SMALL = 96


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p >= MAX_PRIME:
        raise ValueError(f"modulus {p} too large (must be < {MAX_PRIME})")
    return p


def residues(a, p: int) -> np.ndarray:
    """Return ``a`` reduced mod p as a fresh int64 array."""
    return np.mod(np.asarray(a, dtype=np.int64), p)


def inv_mod(x: int, p: int) -> int:
    x = int(x) % p
    if x == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(x, p - 2, p)


# ---------------------------------------------------------------------------
# products


def _chunk(p: int) -> int:
    return max(1, (_FLOAT_EXACT - 1) // ((p - 1) ** 2 + 1))


def _fmod(x: np.ndarray, p: int) -> np.ndarray:
    """In-place ``x mod p`` for integral float64 ``|x| < 2**53``.

    ``floor(x / p)`` is off by at most one at this magnitude, so a single
    conditional correction makes it exact; much faster than ``np.mod``.
    """
    q = np.floor(x * (1.0 / p))
    q *= p
    x -= q
    del q
    np.add(x, p, out=x, where=x < 0)
    np.subtract(x, p, out=x, where=x >= p)
    return x


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact product ``a @ b`` mod p."""
    a = np.asarray(a)
    b = np.asarray(b)
    K = a.shape[1]
    if K == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    step = _chunk(p)
    af = a.astype(np.float64, copy=False)
    bf = b.astype(np.float64, copy=False)
    if K <= step:
        return _fmod(af @ bf, p).astype(np.int64)
    acc = np.zeros((a.shape[0], b.shape[1]), dtype=np.float64)
    for k0 in range(0, K, step):
        acc += af[:, k0:k0 + step] @ bf[k0:k0 + step]
        _fmod(acc, p)
    return acc.astype(np.int64)


def _fmm(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # float in, float out, reduced mod p
    K = a.shape[1]
    step = _chunk(p)
    if K <= step:
        return _fmod(a @ b, p)
    acc = np.zeros((a.shape[0], b.shape[1]))
    for k0 in range(0, K, step):
        acc += a[:, k0:k0 + step] @ b[k0:k0 + step]
        _fmod(acc, p)
    return acc


# ---------------------------------------------------------------------------
# echelon forms


def _rref_int(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    R = residues(a, p)
    m, n = R.shape
    pivots: list[int] = []
    row = 0
    for c in range(n):
        if row == m:
            break
        nz = np.flatnonzero(R[row:, c])
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            R[[row, piv]] = R[[piv, row]]
        inv = inv_mod(R[row, c], p)
        R[row, c:] = R[row, c:] * inv % p
        col = R[:, c].copy()
        col[row] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            R[hit, c:] = (R[hit, c:] - np.outer(col[hit], R[row, c:])) % p
        pivots.append(c)
        row += 1
    return R, pivots


def _leaf(A: np.ndarray, p: int):
    B = A.astype(np.int64)
    m, w = B.shape
    free = np.ones(m, dtype=bool)
    rows: list[int] = []
    cols: list[int] = []
    for c in range(w):
        cand = np.flatnonzero(free & (B[:, c] != 0))
        if cand.size == 0:
            continue
        r = int(cand[0])
        free[r] = False
        rows.append(r)
        cols.append(c)
        others = cand[1:]
        if others.size and c + 1 < w:
            f = B[others, c] * inv_mod(B[r, c], p) % p
            B[others, c + 1:] = (B[others, c + 1:] - np.outer(f, B[r, c + 1:])) % p
    rows_a = np.asarray(rows, dtype=np.intp)
    cols_a = np.asarray(cols, dtype=np.intp)
    if not rows:
        return rows_a, cols_a, np.zeros((0, 0))
    sub = A[np.ix_(rows_a, cols_a)].astype(np.int64)
    return rows_a, cols_a, inverse(sub, p).astype(np.float64)


def _reduce(A: np.ndarray, p: int):
    """Recursive column-split elimination on a float64 residue matrix.

    Returns ``(rows, cols, Binv)``: a maximal independent set of rows, the
    matching greedy column basis, and the inverse of ``A[rows][:, cols]``.
    """
    m, n = A.shape
    if m == 0 or n == 0:
        e = np.zeros(0, dtype=np.intp)
        return e, e, np.zeros((0, 0))
    if n <= _LEAF:
        return _leaf(A, p)
    h = n // 2
    r1, c1, B11i = _reduce(A[:, :h], p)
    k1 = r1.size
    if k1 == 0:
        r2, c2, S = _reduce(A[:, h:], p)
        return r2, c2 + h, S
    keep = np.ones(m, dtype=bool)
    keep[r1] = False
    rest = np.flatnonzero(keep)
    if rest.size == 0:
        return r1, c1, B11i
    X = _fmm(A[np.ix_(rest, c1)], B11i, p)
    top = A[r1, h:]
    R2 = A[rest, h:]
    step = _chunk(p)
    for k0 in range(0, k1, step):
        R2 -= X[:, k0:k0 + step] @ top[k0:k0 + step]
        _fmod(R2, p)
    del top
    r2, c2, Si = _reduce(R2, p)
    del R2
    k2 = r2.size
    if k2 == 0:
        return r1, c1, B11i
    Xr = X[r2]
    del X
    B12 = A[np.ix_(r1, h + c2)]
    Y = _fmm(_fmm(B11i, B12, p), Si, p)
    top_left = _fmod(B11i + _fmm(Y, Xr, p), p)
    top_right = _fmod(-Y, p)
    bottom_left = _fmod(-_fmm(Si, Xr, p), p)
    Binv = np.block([[top_left, top_right], [bottom_left, Si]])
    return (np.concatenate([r1, rest[r2]]), np.concatenate([c1, h + c2]), Binv)


def _blocked(A: np.ndarray, p: int, panel: int = 256, row_block: int = 2048):
    """Right-looking blocked elimination, in place on float64 ``A``.

    Panels are factored with :func:`_reduce`; the trailing block gets one
    BLAS update per panel and is never reduced mod p (entries stay below
    ``p + ncols * (p - 1)**2``, exact in float64).  Returns the original
    indices of the pivot rows.
    """
    m, n = A.shape
    if n * (p - 1) ** 2 + p >= _FLOAT_EXACT or panel > _chunk(p):
        raise ValueError("matrix too wide for delayed reduction at this modulus")
    order = np.arange(m)
    top = 0
    for c0 in range(0, n, panel):
        if top == m:
            break
        c1 = min(n, c0 + panel)
        P = _fmod(A[top:, c0:c1].copy(), p)
        rows, cols, Binv = _reduce(P, p)
        del P
        k = rows.size
        if k == 0:
            continue
        # move pivot rows to top..top+k-1 (in pivot order) by pairwise swaps
        where = np.arange(top, m)  # where[i] = current row of local row i
        at = np.arange(m - top)    # at[j - top] = local row currently at row j
        for i, r in enumerate(rows):
            src = where[r]
            dst = top + i
            if src != dst:
                A[[dst, src]] = A[[src, dst]]
                order[[dst, src]] = order[[src, dst]]
                other = at[dst - top]
                at[dst - top], at[src - top] = r, other
                where[r], where[other] = dst, src
        below = top + k
        if c1 < n and below < m:
            T = _fmod(A[top:below, c1:].copy(), p)
            pc = c0 + cols
            for r0 in range(below, m, row_block):
                r1 = min(m, r0 + row_block)
                X = _fmm(_fmod(A[r0:r1, pc], p), Binv, p)
                A[r0:r1, c1:] -= X @ T
            del T
        top = below
    return order[:top]


def _pivot_rows(a: np.ndarray, p: int) -> np.ndarray:
    m, n = a.shape
    A = _fmod(np.array(a, dtype=np.float64), p)
    if n <= 4 * _LEAF * 8 or n * (p - 1) ** 2 + p >= _FLOAT_EXACT:
        return _reduce(A, p)[0]
    return _blocked(A, p)


def independent_rows(a: np.ndarray, p: int) -> np.ndarray:
    """Indices of a maximal linearly independent set of rows (sorted)."""
    a = np.asarray(a)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return np.zeros(0, dtype=np.intp)
    return np.sort(_pivot_rows(a, p))


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    The returned matrix has the same shape as ``a``; zero rows sit at the
    bottom.
    """
    a = np.asarray(a)
    m, n = a.shape
    if m > _SMALL and n > _SMALL and m * n > 200_000:
        keep = independent_rows(a, p)
        R_sub, piv = _rref_int(a[keep], p)
        R = np.zeros((m, n), dtype=np.int64)
        R[: R_sub.shape[0]] = R_sub
        return R, piv
    return _rref_int(a, p)


def rank(a: np.ndarray, p: int) -> int:
    """Rank of ``a`` over GF(p)."""
    a = np.asarray(a)
    m, n = a.shape
    if m == 0 or n == 0:
        return 0
    if min(m, n) <= _SMALL:
        return len(_rref_int(a, p)[1])
    # fewer rows than columns keeps the panel factorizations short
    return int(_pivot_rows(a.T if m > n else a, p).size)


def kernel_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Right kernel as columns, one per free column of the RREF.

    Column ``t`` has a 1 in the ``t``-th free position, zeros in the other
    free positions and ``-R[:, free]`` in the pivot positions.
    """
    a = np.asarray(a)
    m, n = a.shape
    R, piv = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    K = np.zeros((n, len(free)), dtype=np.int64)
    for t, f in enumerate(free):
        K[f, t] = 1
        if piv:
            K[piv, t] = (-R[: len(piv), f]) % p
    return K


def column_space_basis(a: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis (columns) of the column space: transposed RREF of aᵀ."""
    a = np.asarray(a)
    if a.shape[1] == 0:
        return np.zeros((a.shape[0], 0), dtype=np.int64)
    R, piv = rref(a.T, p)
    return R[: len(piv)].T.copy()


def pivot_columns(a: np.ndarray, p: int) -> list[int]:
    return rref(a, p)[1]


def row_space_equal(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[1] != b.shape[1]:
        raise ValueError(f"column counts differ: {a.shape[1]} vs {b.shape[1]}")
    ra, rb = rank(a, p), rank(b, p)
    if ra != rb:
        return False
    return rank(np.vstack([a, b]), p) == ra


def inverse(a: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    R, piv = _rref_int(np.hstack([residues(a, p), np.eye(n, dtype=np.int64)]), p)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R[:, n:].copy()


def solve(basis: np.ndarray, x: np.ndarray, p: int) -> np.ndarray:
    """Coordinates ``c`` with ``basis @ c == x``; basis must have full column rank."""
    basis = np.asarray(basis)
    x = np.asarray(x)
    k = basis.shape[1]
    if x.ndim == 1:
        return solve(basis, x[:, None], p)[:, 0]
    R, piv = _rref_int(np.hstack([residues(basis, p), residues(x, p)]), p)
    if piv[:k] != list(range(k)):
        raise ValueError("basis columns are linearly dependent")
    if len(piv) > k:
        raise ValueError("vector not in the span of the basis")
    return R[:k, k:].copy()


def in_span(basis: np.ndarray, x: np.ndarray, p: int) -> bool:
    basis = np.asarray(basis)
    x = np.asarray(x)
    if x.ndim == 1:
        x = x[:, None]
    return rank(np.hstack([basis, x]), p) == rank(basis, p)


# ---------------------------------------------------------------------------
# batched small eliminations


def _batched_eliminate(mats: np.ndarray, p: int):
    M = residues(mats, p)
    B, m, n = M.shape
    used = np.zeros((B, m), dtype=bool)
    pivot_row = np.full((B, n), -1, dtype=np.int64)
    pivot_val = np.ones((B, n), dtype=np.int64)
    idx = np.arange(B)
    for c in range(n):
        cand = (M[:, :, c] != 0) & ~used
        has = cand.any(axis=1)
        if not has.any():
            continue
        bs = idx[has]
        pr = cand[bs].argmax(axis=1)
        pv = M[bs, pr, c]
        pivot_row[bs, c] = pr
        pivot_val[bs, c] = pv
        used[bs, pr] = True
        inv = np.array([pow(int(v), p - 2, p) for v in pv], dtype=np.int64)
        f = M[bs, :, c] * inv[:, None] % p
        f[np.arange(bs.size), pr] = 0
        prow = M[bs, pr, :]
        M[bs] = (M[bs] - f[:, :, None] * prow[:, None, :]) % p
    return pivot_row, pivot_val


def batched_rank(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks of a stack of matrices with shape (batch, m, n)."""
    mats = np.asarray(mats)
    if mats.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    pivot_row, _ = _batched_eliminate(mats, p)
    return (pivot_row >= 0).sum(axis=1)


def batched_det(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of square matrices."""
    mats = np.asarray(mats)
    B, m, n = mats.shape
    if m != n:
        raise ValueError("determinant of non-square matrices")
    if B == 0:
        return np.zeros(0, dtype=np.int64)
    if n == 0:
        return np.ones(B, dtype=np.int64)
    pivot_row, pivot_val = _batched_eliminate(mats, p)
    singular = (pivot_row < 0).any(axis=1)
    det = np.ones(B, dtype=np.int64)
    for c in range(n):
        det = det * pivot_val[:, c] % p
    inversions = np.zeros(B, dtype=np.int64)
    for c in range(n):
        inversions += (pivot_row[:, c:c + 1] > pivot_row[:, c + 1:]).sum(axis=1)
    det = np.where(inversions % 2 == 1, (-det) % p, det)
    det[singular] = 0
    return det


# ---------------------------------------------------------------------------
# seeded randomness

_MASK = (1 << 64) - 1


def rng_next(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns ``(value, new_state)``."""
    s = (state + 0x9E3779B97F4A7C15) & _MASK
    z = s
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4B9B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31), s


@dataclass
class SeededRng:
    """splitmix64 stream; residues come from the high bits by rejection."""

    state: int = 0

    def __post_init__(self):
        self.state = int(self.state) & _MASK

    def next_u64(self) -> int:
        value, self.state = rng_next(self.state)
        return value

    def residue(self, p: int) -> int:
        bits = max(1, (p - 1).bit_length())
        while True:
            z = self.next_u64() >> (64 - bits)
            if z < p:
                return z

    def residues(self, p: int, count: int) -> np.ndarray:
        return np.array([self.residue(p) for _ in range(count)], dtype=np.int64)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) (n need not be prime)."""
        return self.residue(n) if n > 1 else 0


def derived_seeds(seed: int, count: int) -> list[int]:
    """``seed`` followed by ``count - 1`` seeds obtained by chaining rng_next."""
    seeds = [int(seed) & _MASK]
    while len(seeds) < count:
        seeds.append(rng_next(seeds[-1])[0])
    return seeds


# ---------------------------------------------------------------------------
# matrix value type + text format


@dataclass(frozen=True)
class FieldMatrix:
    """Immutable dense matrix over GF(p)."""

    p: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        check_prime(self.p)
        a = np.asarray(self.entries)
        if a.ndim != 2:
            raise ValueError("FieldMatrix entries must be 2-dimensional")
        a = residues(a, self.p)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def nrows(self) -> int:
        return self.entries.shape[0]

    @property
    def ncols(self) -> int:
        return self.entries.shape[1]

    def rank(self) -> int:
        return rank(self.entries, self.p)

    def kernel_basis(self) -> "FieldMatrix":
        return FieldMatrix(self.p, kernel_basis(self.entries, self.p))

    def transpose(self) -> "FieldMatrix":
        return FieldMatrix(self.p, self.entries.T)

    def row_space_equal(self, other: "FieldMatrix") -> bool:
        if other.p != self.p:
            raise ValueError("moduli differ")
        return row_space_equal(self.entries, other.entries, self.p)

    def __matmul__(self, other: "FieldMatrix") -> "FieldMatrix":
        if other.p != self.p:
            raise ValueError("moduli differ")
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.entries.shape} @ {other.entries.shape}")
        return FieldMatrix(self.p, matmul(self.entries, other.entries, self.p))

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (
            self.p == other.p
            and self.entries.shape == other.entries.shape
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def to_text(self) -> str:
        lines = [f"{self.p} {self.nrows} {self.ncols}"]
        lines += [" ".join(str(int(x)) for x in row) for row in self.entries]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "FieldMatrix":
        p, nrows, ncols, rows = parse_matrix_block(text.splitlines(), 0)[0]
        if rows.shape != (nrows, ncols):
            raise ValueError("matrix text does not match its header")
        return cls(p, rows)


def parse_int_line(line: str, count: int | None = None) -> list[int]:
    parts = line.split(" ") if line else []
    try:
        values = [int(x) for x in parts]
    except ValueError as exc:
        raise ValueError(f"malformed line {line!r}") from exc
    if count is not None and len(values) != count:
        raise ValueError(f"expected {count} integers, got {len(values)} in {line!r}")
    return values


def parse_matrix_block(lines: list[str], start: int):
    """Parse ``p nrows ncols`` + rows starting at ``lines[start]``."""
    if start >= len(lines):
        raise ValueError("missing matrix header")
    p, nrows, ncols = parse_int_line(lines[start], 3)
    body = lines[start + 1:start + 1 + nrows]
    if len(body) != nrows:
        raise ValueError(f"expected {nrows} rows, got {len(body)}")
    rows = np.array([parse_int_line(ln, ncols) for ln in body], dtype=np.int64).reshape(nrows, ncols)
    if rows.size and (rows.min() < 0 or rows.max() >= p):
        raise ValueError("entries must be residues in [0, p)")
    return (p, nrows, ncols, rows), start + 1 + nrows
