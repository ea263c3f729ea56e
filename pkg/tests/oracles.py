"""Slow, independent reference implementations used only by the tests.

Nothing here imports the package: these are the oracles the fast code is
checked against.
"""

from fractions import Fraction
from itertools import combinations, permutations
from math import comb

MASK = (1 << 64) - 1


def splitmix64(seed, count):
    out = []
    s = seed & MASK
    for _ in range(count):
        s = (s + 0x9E3779B97F4A7C15) & MASK
        z = s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4B9B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        out.append(z ^ (z >> 31))
    return out


def rank_mod(rows, p):
    """Gaussian elimination on lists of Python ints."""
    m = [[int(x) % p for x in row] for row in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        r += 1
    return r


def perm_sign(perm):
    sign = 1
    for i, j in combinations(range(len(perm)), 2):
        if perm[i] > perm[j]:
            sign = -sign
    return sign


def det_mod(rows, p):
    """Leibniz expansion; fine for tiny matrices."""
    n = len(rows)
    total = 0
    for perm in permutations(range(n)):
        term = perm_sign(perm)
        for i in range(n):
            term *= rows[i][perm[i]]
        total += term
    return total % p


def poly_mul(a, b, p):
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % p
    return {e: c for e, c in out.items() if c}


def poly_add(a, b, p, scale=1):
    out = dict(a)
    for e, c in b.items():
        out[e] = (out.get(e, 0) + scale * c) % p
    return {e: c for e, c in out.items() if c}


def symbolic_det(entries, p):
    """Determinant of a square matrix of polynomials (dicts exponent -> coeff)."""
    n = len(entries)
    nvars = len(next(iter(entries[0][0])) if entries[0][0] else ())
    total = {}
    for perm in permutations(range(n)):
        term = None
        for i in range(n):
            f = entries[i][perm[i]]
            term = f if term is None else poly_mul(term, f, p)
            if not term:
                break
        if term:
            total = poly_add(total, term, p, perm_sign(perm))
    return total


def series_numerator(r, gamma, terms=None):
    """Numerator of the Hilbert series by expanding H(t)·(1-t)^{r+1} term by term."""
    terms = terms or r + 3
    h = [1, r + 1] + [gamma] * (terms + 2)
    out = []
    for j in range(terms):
        out.append(sum((-1) ** k * comb(r + 1, k) * h[j - k] for k in range(0, min(j, r + 1) + 1)))
    return out


def defect_closed_form(s, delta):
    r = comb(s + 1, 2) + delta
    return Fraction(2 * delta + 4 - s * s + s, s * s - s + 2 * delta + 4) * comb(r, s)
