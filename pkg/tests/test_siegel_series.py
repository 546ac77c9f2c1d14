import pytest

from tripadic.arith import ord_int
from tripadic.errors import PreconditionError
from tripadic.siegel import enumerate_T
from tripadic.siegel_series import (hermite_key, local_siegel_polynomial, reduced_key,
                                    siegel_series_bruteforce, siegel_series_coeffs)


@pytest.mark.parametrize("n,ell", [(1, 2), (4, 2), (12, 2), (9, 3), (50, 5), (49, 7)])
def test_degree_one_closed_form(n, ell):
    v = ord_int(n, ell)
    assert local_siegel_polynomial([[2 * n]], ell) == [ell**j for j in range(v + 1)]


@pytest.mark.parametrize("S,ell,E", [
    (((2,),), 2, 4),
    (((4,),), 3, 2),
    (((2, 1), (1, 2)), 3, 2),
    (((2, 0), (0, 4)), 2, 2),
    (((2, 1, 0), (1, 2, 0), (0, 0, 2)), 2, 1),
])
def test_lattice_sum_matches_brute_force(S, ell, E):
    assert siegel_series_coeffs(S, ell, E) == siegel_series_bruteforce(S, ell, E)


@pytest.mark.parametrize("S", [
    ((2, 1, 1), (1, 2, 1), (1, 1, 2)),
    ((2, 0, 0), (0, 2, 0), (0, 0, 4)),
    ((4, 2, 0), (2, 4, 0), (0, 0, 2)),
])
def test_tree_walk_matches_full_enumeration(S):
    assert siegel_series_coeffs(S, 2, 4, "tree") == siegel_series_coeffs(S, 2, 4, "hnf")


def test_local_polynomials_for_small_ternary_forms():
    for T in enumerate_T(3, 3):
        if not T.is_positive_definite():
            continue
        for ell in (2, 3):
            F = local_siegel_polynomial(T, ell)
            assert F[0] == 1 and all(isinstance(c, int) for c in F)
            if T.det2() % ell:
                assert F == [1]


def test_equivalent_forms_share_key_and_polynomial():
    A = ((2, 1, 0), (1, 2, 0), (0, 0, 2))
    B = ((2, 0, 1), (0, 2, 0), (1, 0, 2))
    assert reduced_key(A) == reduced_key(B)
    assert local_siegel_polynomial(A, 3) == local_siegel_polynomial(B, 3)


def test_hermite_key_is_basis_independent():
    # same column span, different bases
    K = hermite_key([[2, 0], [0, 1]])
    assert hermite_key([[2, 2], [0, 1]]) == K == hermite_key([[0, 2], [1, 0]])
    assert hermite_key([[2, 1], [0, 1]]) != K


def test_even_degree_rejected():
    with pytest.raises(PreconditionError):
        local_siegel_polynomial([[2, 0], [0, 2]], 2)
