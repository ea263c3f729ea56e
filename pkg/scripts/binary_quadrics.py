"""Walk through F(μ) for multiplication of binary quadrics into binary quartics.

Prints the ranks of F and of its maximal irredundant quotient, the extra
homology in the first strand, and compares with the minimal resolution of
the module of forms of degree 2 + 4t on the rational normal quartic.
"""

from mrcfail import bgg
from mrcfail.betti import betti_table, rational_normal_module

P = 32003


def main():
    mu = bgg.binary_form_tensor(2, 2, P)
    F = bgg.build_F_mu_direct(mu)
    Fq = bgg.max_irredundant_quotient_generation(F)
    print(f"pairing dims (w, u, v) = {mu.dims}")
    print(f"F ranks {F.ranks}, squares to zero: {F.squares_to_zero()}")
    print(f"same as L(Q*): {F.same_as(bgg.build_F_mu_via_Q(mu))}")
    print(f"irredundant: {bgg.is_irredundant(F)}, H_1 in degree 1: {bgg.strand_homology(F, 1, 1)}")
    print(f"F' ranks {Fq.ranks}, last term preserved: {bgg.last_term_preserved(mu)}")
    print(f"1-generic over GF(7^2): {bgg.is_one_generic(bgg.binary_form_tensor(2, 2, 7), 'exhaustive:2')}")
    print(f"2x2 minors span: {bgg.minors_span(mu, 2)}")
    table = betti_table(rational_normal_module(4, 2, 6, P), 4, 5)
    print("resolution of the degree 2 + 4t module:")
    print(table.diagram(), end="")


if __name__ == "__main__":
    main()
