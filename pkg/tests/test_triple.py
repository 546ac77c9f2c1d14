from fractions import Fraction

import pytest

from tripadic.errors import PreconditionError
from tripadic.qseries import (atkin_u, delta_cusp, eisenstein_bare, mul, p_stabilize,
                              shimura_delta_elliptic)
from tripadic.triple import (TripleExpansion, atkin_u_triple, tensor3, tensor_v,
                             triple_euler_factor, v_triple)


def small():
    return delta_cusp(6), eisenstein_bare(4, 6, Fraction(1, 240)), shimura_delta_elliptic(delta_cusp(6))


def test_tensor_coefficients_are_products():
    f1, f2, f3 = small()
    g = tensor3(f1, f2, f3)
    assert g.trunc == (6, 6, 6)
    for n in [(1, 2, 3), (2, 0, 5), (6, 6, 6)]:
        assert g.a(n) == f1.a(n[0]) * f2.a(n[1]) * f3.a(n[2])
    # R lives in the third slot only
    assert g[(1, 1, 2)].degree(2) == 1 and g[(1, 1, 2)].degree(0) == 0


def test_u_commutes_with_tensor():
    f1, f2, f3 = small()
    fs = [f.truncate(6) for f in (f1, f2, f3)]
    lhs = atkin_u_triple(tensor3(*fs), 2)
    rhs = tensor3(*(atkin_u(f, 2) for f in fs))
    assert lhs == rhs


def test_u_left_inverse_of_v():
    g = tensor3(*small()).truncate((3, 3, 3))
    assert atkin_u_triple(v_triple(g, 5), 5) == g
    assert atkin_u_triple(tensor_v(*(f.truncate(3) for f in small()), 5), 5) == g


@pytest.mark.parametrize("ks", [(4, 6, 8), (4, 4, 4)])
def test_stabilized_tensor_is_u_eigenvector(ks):
    p = 5
    fs, alphas = [], []
    for k in ks:
        f0, h = p_stabilize(eisenstein_bare(k, 25, Fraction(1)), p, k)
        fs.append(f0)
        alphas.append(h.alpha1)
    g = tensor3(*fs)
    lam = alphas[0] * alphas[1] * alphas[2]
    assert atkin_u_triple(g, p) == g.truncate((5, 5, 5)).scale(lam)


def test_euler_factor_from_roots():
    got = triple_euler_factor((1, 3), (1, 5), (2, 1))
    want = [1]
    for a in (1, 3):
        for b in (1, 5):
            for c in (2, 1):
                x = a * b * c
                want = [w - x * v for w, v in zip(want + [0], [0] + want)]
    assert got == want and len(got) == 9


def test_euler_factor_shift_needs_prime():
    with pytest.raises(PreconditionError):
        triple_euler_factor((1, 1), (1, 1), (1, 1), s=1)


def test_json_and_arithmetic():
    g = tensor3(*small()).truncate((2, 2, 2))
    back = TripleExpansion.from_json(g.to_json())
    assert back == g
    assert (g + g - g.scale(2)).is_zero()
