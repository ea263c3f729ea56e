from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mrcfail import bgg
from mrcfail import exactfield as ef
from mrcfail import points as pt
from mrcfail.betti import betti_table, rational_normal_module
from mrcfail.mrc import MrcParameters
from oracles import rank_mod, symbolic_det

P = 32003


def example_mu():
    return bgg.binary_form_tensor(2, 2, P)


def random_family(count=100, p=101):
    out = []
    for seed in range(count):
        n = 2 + seed % 3
        length = 1 + seed % 4
        out.append(bgg.random_exterior_module(n, length, p, seed))
    return out


@pytest.fixture(scope="module")
def family():
    return random_family()


def random_mu(seed, p=101, max_dim=4):
    rng = np.random.default_rng(seed)
    w, u, v = (int(x) for x in rng.integers(1, max_dim + 1, 3))
    return pt.PairingTensor(p, rng.integers(0, p, (w, u, v)))


def zero_slice(w, u, v, p, seed=0):
    e = np.random.default_rng(seed).integers(0, p, (w, u, v))
    e[0] = 0
    return pt.PairingTensor(p, e)


def test_exterior_algebra_and_L():
    E = bgg.exterior_algebra(2, P)
    assert E.is_valid() and E.dims == [1, 2, 1]
    F = bgg.L_functor(E)
    assert F.ranks == [1, 2, 1] and F.squares_to_zero()
    assert bgg.is_irredundant(F)
    assert bgg.module_of(F).dims == E.dims
    k = bgg.ExteriorModule(P, 3, 0, [1], [])
    assert bgg.L_functor(k).ranks == [1]


def test_invalid_module_is_detected():
    acts = [np.ones((2, 1, 2), dtype=np.int64), np.ones((2, 2, 1), dtype=np.int64)]
    assert not bgg.ExteriorModule(7, 2, 0, [1, 2, 1], acts).is_valid()
    with pytest.raises(ValueError):
        bgg.ExteriorModule(7, 2, 0, [1, 2], [np.ones((2, 2, 1), dtype=np.int64)])


def test_zero_differential_is_redundant():
    F = bgg.LinearComplex(P, 2, [1, 2, 3], [np.zeros((2, 1, 2)), np.zeros((2, 2, 3))])
    assert not bgg.is_irredundant(F)


def test_socle_generator_blocks_generation():
    # k ⊕ k(-1): the degree-1 piece is not reached from degree 0
    M = bgg.ExteriorModule(P, 2, 0, [1, 1], [np.zeros((2, 1, 1), dtype=np.int64)])
    assert not bgg.is_generated_in_degree_zero(M)
    assert bgg.is_generated_in_degree_zero(bgg.exterior_algebra(3, P))


def test_generation_equals_irredundancy(family):
    results = [bgg.is_irredundant(bgg.L_functor(M)) for M in family]
    for M, irred in zip(family, results):
        assert M.is_valid()
        assert irred == bgg.is_generated_in_degree_zero(M, dualize=True)
    assert 0 < sum(results) < len(results)


def generated_spans(M):
    """Q_i inside (P_i)* by brute force: all images of (P_0)* under transposed actions."""
    spans = [np.eye(M.dims[0], dtype=np.int64)]
    for block in M.acts:
        prev = spans[-1]
        spans.append(np.hstack([block[k].T @ prev % M.p for k in range(M.nvars)]))
    return spans


def test_quotient_constructions_agree(family):
    for M in family:
        gen = bgg.max_irredundant_quotient_generation(M)
        ann = bgg.max_irredundant_quotient_annihilator(M)
        assert gen.ranks == ann.ranks
        assert gen.ranks[0] == M.dims[0]
        assert bgg.is_irredundant(gen) and bgg.is_irredundant(ann)
        assert gen.squares_to_zero() and ann.squares_to_zero()
        rows = bgg.annihilator_rows(M)
        assert rows[0].shape[0] == M.dims[0]
        for span, row in zip(generated_spans(M), rows):
            if row.shape[0]:
                assert ef.row_space_equal(span.T, row, M.p)
            else:
                assert not span.any()


def test_quotient_is_idempotent(family):
    seen = 0
    for M in family:
        F = bgg.L_functor(M)
        if bgg.is_irredundant(F):
            seen += 1
            assert bgg.max_irredundant_quotient_generation(F).same_as(F)
            assert bgg.max_irredundant_quotient_annihilator(F).same_as(F)
        Fq = bgg.max_irredundant_quotient_generation(F)
        assert bgg.max_irredundant_quotient_generation(Fq).same_as(Fq)
    assert seen


def test_example_complex():
    mu = example_mu()
    assert mu.dims == (3, 3, 5)
    F = bgg.build_F_mu_direct(mu)
    assert F.ranks == [3, 9, 6] and F.squares_to_zero()
    assert not bgg.is_irredundant(F)
    assert bgg.max_irredundant_quotient_generation(F).ranks == [3, 8, 6]
    assert bgg.max_irredundant_quotient_annihilator(F).ranks == [3, 8, 6]
    assert bgg.strand_homology(F, 1, 1) == 1
    assert bgg.last_term_preserved(mu)
    assert bgg.build_F_mu_via_Q(mu).same_as(F)


def test_single_term_complex():
    F = bgg.build_F_mu_direct(pt.PairingTensor(7, np.ones((1, 3, 2), dtype=np.int64)))
    assert F.ranks == [1] and F.length == 0


@pytest.mark.parametrize("seed", range(50))
def test_direct_and_dual_constructions_agree(seed):
    mu = random_mu(seed)
    F = bgg.build_F_mu_direct(mu)
    assert F.ranks == bgg.f_mu_ranks(mu.w, mu.u)
    assert F.squares_to_zero()
    Q = bgg.pairing_module(mu)
    assert Q.is_valid()
    assert bgg.build_F_mu_via_Q(mu).same_as(F)


def test_one_generic_examples():
    binary = bgg.binary_form_tensor(2, 2, 7)
    assert bgg.is_one_generic(binary, "exhaustive:1")
    assert bgg.is_one_generic(binary, "exhaustive:2")
    assert bgg.is_one_generic(binary, "monte-carlo:200")
    assert not bgg.is_one_generic(zero_slice(3, 2, 5, 7), "exhaustive:1")
    assert bgg.is_one_generic(bgg.identity_tensor(2, 3, 7), "exhaustive:2")
    with pytest.raises(bgg.EnumerationBudgetError):
        bgg.is_one_generic(example_mu(), "exhaustive:1")
    with pytest.raises(ValueError):
        bgg.parse_genericity_mode("sometimes")


def test_irreducible_polynomials():
    for p, e in [(2, 2), (2, 3), (3, 2), (5, 3), (7, 2)]:
        f = bgg.irreducible_polynomial(p, e)
        assert len(f) == e + 1 and f[-1] == 1
        # no roots, and for e <= 3 that already means irreducible
        assert all(sum(c * x ** i for i, c in enumerate(f)) % p for x in range(p))


def test_field_extension_multiplication_is_a_field():
    p, e = 3, 2
    powers = bgg._multiplication_matrices(p, e)
    mats = [sum(int(d) * powers[i] for i, d in enumerate(digits)) % p
            for digits in np.ndindex(*(p,) * e)]
    assert sum(ef.rank(m, p) == e for m in mats) == p ** e - 1


@settings(max_examples=80)
@given(st.integers(1, 2), st.integers(1, 2), st.integers(1, 4), st.sampled_from([2, 3, 5]),
       st.integers(0, 10**6))
def test_certified_generic_pairings_are_large(w, u, v, p, seed):
    """Over GF(p^2) every binary quadric has a root, so this mode is exact for w, u <= 2."""
    e = np.random.default_rng(seed).integers(0, p, (w, u, v))
    if bgg.is_one_generic(pt.PairingTensor(p, e), "exhaustive:2"):
        assert v >= u + w - 1


def linear_entries(mu):
    """The v x w matrix of linear forms as polynomial dicts for the oracle."""
    w, u, v = mu.dims
    unit = [tuple(1 if c == b else 0 for c in range(u)) for b in range(u)]
    return [[{unit[b]: int(mu.entries[a, b, k]) for b in range(u) if mu.entries[a, b, k]}
             for a in range(w)] for k in range(v)]


def oracle_minor_span(mu, d):
    m = linear_entries(mu)
    monos = sorted({e for rows in combinations(range(mu.v), d) for cols in combinations(range(mu.w), d)
                    for e in symbolic_det([[m[i][j] for j in cols] for i in rows], mu.p)})
    vecs = []
    for rows in combinations(range(mu.v), d):
        for cols in combinations(range(mu.w), d):
            det = symbolic_det([[m[i][j] for j in cols] for i in rows], mu.p)
            vecs.append([det.get(e, 0) for e in monos])
    return rank_mod(vecs, mu.p) if monos else 0


def test_minors_span_examples():
    full, dim = bgg.minors_span(example_mu(), 2)
    assert (full, dim) == (True, 6)
    assert dim == oracle_minor_span(example_mu(), 2)
    assert bgg.minors_span(bgg.identity_tensor(3, 1, P), 2) == (True, 1)
    assert bgg.minors_span(zero_slice(3, 1, 4, P), 3) == (False, 0)
    with pytest.raises(ValueError):
        bgg.minors_span(example_mu(), 4)
    config = pt.random_lgp_config(3, 11, P, seed=1)
    mu = pt.build_mu(config).tensor
    assert mu.dims == (4, 1, 7)
    assert bgg.minors_span(mu, 3) == (True, 1)


@pytest.mark.parametrize("seed", range(6))
def test_minors_span_matches_oracle(seed):
    mu = random_mu(seed, p=7, max_dim=3)
    d = 1 + seed % mu.w
    assert bgg.minors_span(mu, d)[1] == oracle_minor_span(mu, d)


@pytest.mark.parametrize("delta", [0, 1, 2])
def test_pairings_from_general_points(delta):
    pr = MrcParameters(3, delta)
    for seed in range(2):
        mu = pt.build_mu(pt.random_lgp_config(3, pr.gamma, P, seed)).tensor
        assert (mu.w, mu.u) == (4, delta + 1)
        assert bgg.minors_span(mu, 3) == (True, comb(3 + delta, delta))
        assert bgg.last_term_preserved(mu)


def test_zero_slice_fixture_loses_last_term():
    # μ(- ⊗ u_0) = 0: no element of Sym(U*) involving u_0* is ever generated
    e = np.random.default_rng(2).integers(0, P, (3, 2, 4))
    e[:, 0] = 0
    mu = pt.PairingTensor(P, e)
    assert not bgg.is_one_generic(mu, "exhaustive:1")
    assert not bgg.last_term_preserved(mu)
    # a zero slice on the W side alone still keeps the last term here
    assert bgg.last_term_preserved(zero_slice(3, 2, 4, P, seed=2))


def test_strand_homology_of_koszul_complex():
    F = bgg.L_functor(bgg.exterior_algebra(3, P))
    for i in range(F.length + 1):
        for m in range(i, i + 4):
            assert bgg.strand_homology(F, i, m) == (1 if (i, m) == (0, 0) else 0)
    with pytest.raises(ValueError):
        bgg.strand_homology(F, 4, 4)


def test_restriction_examples():
    F = bgg.L_functor(bgg.exterior_algebra(3, P))
    assert bgg.restrict_complex(F, np.eye(3, dtype=np.int64)).same_as(F)
    G = bgg.restrict_complex(F, np.array([[1, 0, 2], [0, 1, 5]]))
    assert bgg.is_irredundant(G) == (bgg.strand_homology(G, 1, 1) == 0)
    with pytest.raises(ValueError):
        bgg.restrict_complex(F, np.array([[1, 2, 3], [2, 4, 6]]))


def rigidity_cases(count=50, p=101):
    cases = []
    seed = 0
    while len(cases) < count:
        M = bgg.random_exterior_module(3 + seed % 2, 2 + seed % 3, p, seed)
        F = bgg.max_irredundant_quotient_generation(M)
        seed += 1
        if F.length < 1 or not any(F.ranks[1:]):
            continue
        rng = ef.SeededRng(seed)
        rows = 1 + rng.below(F.nvars - 1)
        T = rng.residues(p, rows * F.nvars).reshape(rows, F.nvars)
        if ef.rank(T, p) == rows:
            cases.append((F, T))
    return cases


def test_linear_rigidity():
    outcomes = []
    for F, T in rigidity_cases():
        assert bgg.is_irredundant(F)
        G = bgg.restrict_complex(F, T)
        assert G.squares_to_zero()
        outcomes.append(bgg.is_irredundant(G))
        assert outcomes[-1] == (bgg.strand_homology(G, 1, 1) == 0)
    assert any(outcomes) and not all(outcomes)


def test_resolution_dominates_quotient():
    # the module ⊕ H^0(O(2 + 4t)) on the rational normal quartic contains the binary quadrics
    table = betti_table(rational_normal_module(4, 2, 6, P), 4, 5)
    G = [sum(v for (i, _), v in table.values.items() if i == k) for k in range(4)]
    Fq = bgg.max_irredundant_quotient_generation(bgg.build_F_mu_direct(example_mu()))
    assert G == [3, 8, 6, 1]
    assert all(g >= f for g, f in zip(G, Fq.ranks))


def test_tensor_file_roundtrip():
    mu = example_mu()
    text = mu.to_text()
    assert text.splitlines()[0] == f"{P} 3 3 5"
    assert text.splitlines()[1] == "1 0 0 0 0"
    assert bgg.read_tensor(text).to_text() == text
    with pytest.raises(ValueError):
        bgg.read_tensor("7 1 1 2\n1\n")
