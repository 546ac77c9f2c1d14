import random
from fractions import Fraction

import pytest

from tripadic import linalg as la
from tripadic.arith import PadicCapped
from tripadic.errors import AmbiguityError, PreconditionError, SpanError
from tripadic.qseries import QExpansion, atkin_u, delta_cusp, v_operator
from tripadic.spectral import (coordinates, fredholm_det, iterate_project, lambda_projection,
                               linear_form_ell, model_from_matrix, newton_polygon_slopes,
                               operator_matrix, representative, sup_norm)

P = 7


def semisimple(rng, eigs):
    n = len(eigs)
    while True:
        C = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        d = la.det(C)
        if d != 0 and d.numerator % P:
            break
    D = [[Fraction(eigs[i]) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    return C, la.matmul(la.matmul(C, D), la.inverse(C))


def to_padic(M, prec=20):
    return [[PadicCapped.from_rational(x, P, prec) for x in r] for r in M]


def close(a, b, need=10):
    d = a - b
    if not isinstance(d, PadicCapped):
        d = PadicCapped.from_rational(d, P, 40)
    return d.is_zero() or d.val >= need


def delta_model():
    D = delta_cusp(49)
    return operator_matrix([D, v_operator(D, P)], lambda f: atkin_u(f, P))


def test_delta_model_fredholm_and_slopes():
    M = delta_model()
    assert M.matrix == [[-16744, 1], [-7**11, 0]]
    F = fredholm_det(M)
    assert F == [1, 16744, 7**11]
    assert newton_polygon_slopes(F, P) == [1, 10]


def test_slopes_of_tied_polygon():
    assert newton_polygon_slopes([1, -7, -7], P) == [Fraction(1, 2)] * 2
    with pytest.raises(PreconditionError):
        newton_polygon_slopes([7, 1], P)


@pytest.mark.parametrize("seed", range(4))
def test_projector_over_rationals(seed):
    rng = random.Random(seed)
    eigs = [2, 2, 5, -3]
    C, M = semisimple(rng, eigs)
    rep = lambda_projection(M, 2)
    Pm = rep.projector
    assert la.matmul(Pm, Pm) == Pm
    assert la.matmul(Pm, M) == la.matmul(M, Pm)
    assert rep.dimension == 2 and rep.nilpotency_index == 1
    E = [[Fraction(int(i == j and eigs[i] == 2)) for j in range(4)] for i in range(4)]
    assert Pm == la.matmul(la.matmul(C, E), la.inverse(C))


@pytest.mark.parametrize("seed", range(3))
def test_projector_over_capped_padics(seed):
    rng = random.Random(100 + seed)
    C, M = semisimple(rng, [1, 3, 3])
    exact = lambda_projection(M, 3).projector
    rep = lambda_projection(to_padic(M), PadicCapped.from_rational(3, P, 20))
    for r1, r2 in zip(rep.projector, exact):
        for a, b in zip(r1, r2):
            assert close(a, b)
    assert rep.dimension == 2


def test_nilpotent_block_is_reported():
    M = [[2, 1, 0], [0, 2, 0], [0, 0, 5]]
    rep = lambda_projection([[Fraction(x) for x in r] for r in M], 2)
    assert rep.dimension == 2 and rep.nilpotency_index == 2
    with pytest.raises(AmbiguityError):
        linear_form_ell(M, 2, 0)


def test_linear_form_picks_the_eigen_coordinate():
    rng = random.Random(7)
    C, M = semisimple(rng, [4, 1, 9])
    v0 = [C[i][0] for i in range(3)]
    ell = linear_form_ell(M, 4, v0)
    assert ell(v0) == 1
    for j in (1, 2):
        assert ell([C[i][j] for i in range(3)]) == 0
    with pytest.raises(PreconditionError):
        linear_form_ell(M, 4, [C[i][1] for i in range(3)])


def test_dual_vector_resolves_higher_multiplicity():
    M = [[Fraction(3), 0, 0], [0, Fraction(3), 0], [0, 0, Fraction(1)]]
    with pytest.raises(AmbiguityError):
        linear_form_ell(M, 3, 0)
    ell = linear_form_ell(M, 3, 0, dual=[1, 1, 5])
    assert ell([1, 0, 0]) == 1 and ell([0, 0, 1]) == 0 and ell([0, 1, 0]) == 1


def test_coordinates_and_span_errors():
    f = QExpansion.from_list([0, 1, 2, 3])
    g = QExpansion.from_list([0, 0, 1, 1])
    assert coordinates([f, g], f.scale(2) + g.scale(-1)) == [2, -1]
    with pytest.raises(SpanError) as exc:
        coordinates([f, g], QExpansion.from_list([1, 0, 0, 0]))
    assert exc.value.offending
    with pytest.raises(AmbiguityError):
        coordinates([f, f.scale(2)], f)


def test_representative_identity():
    f = QExpansion.from_list([0, 1, 0, 5])
    g = QExpansion.from_list([0, 0, 1, 7])
    duals = [lambda h: h.a(1), lambda h: h.a(2)]
    E = f.scale(3) + g.scale(-2)
    Et, coords = representative(E, duals, [f, g])
    assert coords == [3, -2] and Et == E
    with pytest.raises(PreconditionError):
        representative(E, duals, [f, f])


def test_iterate_project_inverts_u_on_block():
    rng = random.Random(3)
    C, M = semisimple(rng, [2, 7, 7])
    h = [Fraction(1), Fraction(-2), Fraction(5)]
    base = iterate_project(h, M, 2, 0)
    for v in (1, 2, 3):
        assert iterate_project(h, M, 2, v) == base
    assert la.matvec(M, base) == [2 * x for x in base]


def test_sup_norm():
    assert sup_norm([Fraction(1, 7), 49, 3], P) == 7
    assert sup_norm(delta_cusp(7), P) == 1
    assert sup_norm(model_from_matrix([[0]]).matrix[0], P) == 0
