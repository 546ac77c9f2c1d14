import math

import pytest

from tripadic.characters import ONE, DirichletCharacter, RootOfUnity, is_complete
from tripadic.errors import PreconditionError, UnsupportedError


def units(n):
    return [a for a in range(1, n) if math.gcd(a, n) == 1]


@pytest.mark.parametrize("n", [3, 7, 8, 9, 12, 35])
def test_characters_are_multiplicative(n):
    chars = {DirichletCharacter.from_function(n, lambda g: RootOfUnity(0))}
    chars.add(DirichletCharacter(n, [1] * len(DirichletCharacter(n)._gens)))
    for chi in chars:
        for a in units(n):
            for b in units(n):
                assert chi(a * b) == chi(a) * chi(b)
        assert chi(n) == 0


def test_legendre_symbol():
    chi = DirichletCharacter.legendre(7)
    squares = {a * a % 7 for a in range(1, 7)}
    for a in range(1, 7):
        assert chi.value(a) == (1 if a in squares else -1)
    assert chi.order == 2 and chi.conductor == 7


def test_conductor_and_primitive():
    chi = DirichletCharacter.legendre(5).extend(15)
    assert chi.conductor == 5
    assert chi.primitive() == DirichletCharacter.legendre(5)
    assert not is_complete(5, 15)
    assert is_complete(3, 9)


def test_conj_and_powers():
    chi = DirichletCharacter(7, [1])
    assert chi.order == 6
    assert (chi * chi.conj()).is_trivial()
    assert chi ** 6 == DirichletCharacter.trivial(7)
    assert chi(3) ** 6 == ONE


def test_padic_embedding_is_a_homomorphism():
    chi = DirichletCharacter(7, [1])
    for a in (2, 3, 5):
        for b in (3, 6):
            assert chi.value(a * b, 7, 10) == chi.value(a, 7, 10) * chi.value(b, 7, 10)


def test_spec_and_json_round_trip():
    chi = DirichletCharacter.from_spec("12:1,1")
    assert DirichletCharacter.from_spec(chi.spec()) == chi
    assert DirichletCharacter.from_json(chi.to_json()) == chi
    assert DirichletCharacter.from_spec("5").is_trivial()
    with pytest.raises(PreconditionError):
        DirichletCharacter.from_spec("x:1")


def test_non_rational_value_refuses_to_rationalize():
    chi = DirichletCharacter(7, [1])
    with pytest.raises(UnsupportedError):
        chi.value(3)
