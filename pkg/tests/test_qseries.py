from fractions import Fraction

import pytest

from tripadic.arith import PadicCapped
from tripadic.characters import DirichletCharacter
from tripadic.errors import PreconditionError
from tripadic.qseries import (QExpansion, atkin_u, closed_form_q, delta_cusp, eisenstein,
                              eisenstein_bare, eisenstein_e2, evaluate_family,
                              family_eisenstein, hecke_roots, hecke_tq, mul, p_stabilize,
                              ramanujan_theta, serre_operator, shimura_delta_iterate, twist,
                              v_operator)

TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_delta_coefficients():
    assert delta_cusp(10).coefficient_list()[1:] == TAU


def test_theta_delta_is_e2_delta():
    D = delta_cusp(30)
    assert ramanujan_theta(D) == mul(eisenstein_e2(30), D)


def test_serre_derivative_of_e4():
    assert serre_operator(eisenstein(4, 20)) == eisenstein(6, 20).scale(Fraction(-1, 3))


def test_e4_squared_is_e8():
    assert mul(eisenstein(4, 15), eisenstein(4, 15)) == eisenstein(8, 15)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_delta_is_hecke_eigenform(q):
    D = delta_cusp(30)
    assert hecke_tq(D, q) == D.truncate(30 // q).scale(D.a(q))


def test_u_is_left_inverse_of_v():
    D = delta_cusp(12)
    assert atkin_u(v_operator(D, 7), 7) == D


@pytest.mark.parametrize("k,r", [(4, 1), (6, 2), (12, 3)])
def test_delta_iterate_on_eisenstein_matches_closed_form(k, r):
    E = eisenstein_bare(k, 8)
    F = shimura_delta_iterate(E, k, r)
    for n in range(1, 9):
        assert F[n] == closed_form_q(n, k, r).scale(E.a(n))


def test_twist_by_legendre():
    chi = DirichletCharacter.legendre(5)
    T = twist(delta_cusp(10), chi)
    assert T.a(2) == 24 and T.a(5) == 0 and T.a(4) == -1472
    assert 0 not in T.coeffs


def test_json_round_trip():
    f = shimura_delta_iterate(delta_cusp(6), 12, 1)
    assert QExpansion.from_json(f.to_json()) == f


def test_e2_underflow_is_rejected():
    with pytest.raises(PreconditionError):
        eisenstein(2, 5)


def test_rational_roots_for_eisenstein():
    h = hecke_roots(1 + 7**3, 7**3, 7)
    assert {h.alpha1, h.alpha2} == {1, 343}
    assert h.slopes() == (0, 3)


@pytest.mark.parametrize("k", [4, 6, 8])
def test_ordinary_stabilization_of_eisenstein(k):
    E = eisenstein_bare(k, 49, Fraction(1))
    f0, h = p_stabilize(E, 7, k)
    assert h.alpha1 == 1
    assert atkin_u(f0, 7) == f0.truncate(7).scale(h.alpha1)


def test_stabilized_delta_is_u_eigenvector():
    f0, h = p_stabilize(delta_cusp(98), 7)
    assert h.slopes() == (1, 10)  # 7 | tau(7)
    lhs = atkin_u(f0, 7)
    alpha = h.alpha1
    for n in range(1, 15):
        d = lhs.a(n) - alpha * f0.a(n)
        d = d if isinstance(d, PadicCapped) else PadicCapped.from_rational(d, 7, 20)
        assert d.is_zero() or d.val >= d.abs_prec


def test_stabilize_needs_the_p_th_coefficient():
    with pytest.raises(PreconditionError):
        p_stabilize(delta_cusp(5), 7)


def test_family_specializes_to_depleted_eisenstein():
    fam = family_eisenstein(4, 7, 10, order=8, prec=10)
    for k in (4, 10, 16):
        E = evaluate_family(fam, k)
        ref = eisenstein_bare(k, 10, p=7)
        for n in range(1, 11):
            d = E.a(n) - PadicCapped.from_rational(ref.a(n), 7, 10)
            assert d.is_zero() or d.val >= 2
