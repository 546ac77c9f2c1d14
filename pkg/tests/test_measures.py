from fractions import Fraction

import pytest

from tripadic.arith import bernoulli, padic_valuation
from tripadic.characters import DirichletCharacter
from tripadic.errors import DistributionError, PrecisionError, PreconditionError
from tripadic.measures import (Distribution, ProfiniteLevel, WeightCharacter,
                               admissibility_check, bernoulli_measure, derived_characters,
                               distribution_integrate, growth_check, local_moment, mellin_eval,
                               synthetic_binomial)

P = 5


def test_profinite_level():
    L = ProfiniteLevel(3, P, 2)
    assert L.modulus == 75 and L.order == 40
    assert L.project(76, 1) == 1
    assert sorted(L.children(1)) == [1, 76, 151, 226, 301]
    with pytest.raises(PreconditionError):
        ProfiniteLevel(10, P, 1)


def test_derived_characters():
    chi = DirichletCharacter.legendre(5)
    psi = DirichletCharacter(5, [1])
    triv = DirichletCharacter.trivial(5)
    d = derived_characters(chi, triv, psi, triv, 1, 5)
    assert d.chi1 == chi and d.chi2 == psi * chi and d.chi3 == chi
    assert d.psi == chi * chi * psi
    assert d.complete["chi1"]


def test_bernoulli_measure_is_additive():
    mu = bernoulli_measure(P, 2, [1, 2, 3])
    mu.check()
    # coarse value recovered from finer data
    coarse = Distribution(1, P, {2: mu.levels[2]})
    assert coarse.value(1, 1) == mu.value(1, 1)


def test_corrupted_distribution_is_localized():
    mu = bernoulli_measure(P, 2, [1, 2])
    mu.levels[2][7] += 1
    with pytest.raises(DistributionError) as exc:
        mu.check()
    assert exc.value.coset == 2 and exc.value.level == 1


def test_total_mass_and_integration():
    mu = bernoulli_measure(P, 3, [1, 2])
    total = distribution_integrate(mu, lambda a: 1, 1)
    assert total == distribution_integrate(mu, lambda a: 1, 2)


@pytest.mark.parametrize("k", [1, 3, 5])
def test_mellin_of_bernoulli_converges_to_zeta_value(k):
    c = 2
    want = (1 - Fraction(c) ** (k + 1)) * (1 - Fraction(P) ** k) * bernoulli(k + 1) / (k + 1)
    mu = bernoulli_measure(P, c, [1, 2, 3, 4])
    for v in (1, 2, 3, 4):
        got = mellin_eval([mu], WeightCharacter(k), v)
        assert padic_valuation(got - want, P) >= v


def test_mellin_precision_guard():
    mu = bernoulli_measure(P, 2, [1, 2])
    with pytest.raises(PrecisionError):
        mellin_eval([mu], WeightCharacter(3), 2, prec=10)
    with pytest.raises(PrecisionError):
        mellin_eval([mu], WeightCharacter(1, DirichletCharacter(25, [1]), P), 1)


def test_distribution_json_round_trip():
    mu = bernoulli_measure(P, 2, [1, 2])
    back = Distribution.from_json(mu.to_json())
    assert back.levels == mu.levels


def test_synthetic_moments_vanish_for_positive_t():
    Phis = synthetic_binomial(P, [1, 2], h=3)
    for t in (1, 2):
        for a in ProfiniteLevel(1, P, 2).elements():
            assert local_moment(Phis, t, a, 2) == [0, 0]


def test_admissibility_passes_on_synthetic_data():
    vs = [1, 2]
    U = [[Fraction(P), Fraction(0)], [Fraction(0), Fraction(1)]]
    rep = admissibility_check(synthetic_binomial(P, vs, h=3), 2, Fraction(P), U, vs)
    assert rep.passed and rep.h == 3
    assert rep.growth is not None and rep.growth.passed
    assert all(c["status"] == "not recorded" for c in rep.level_checks)


def test_admissibility_localizes_corruption():
    vs = [1, 2]
    U = [[Fraction(P), Fraction(0)], [Fraction(0), Fraction(1)]]
    Phis = synthetic_binomial(P, vs, h=3)
    Phis[1].levels[2][7] = [Fraction(7), Fraction(1)]
    rep = admissibility_check(Phis, 2, Fraction(P), U, vs)
    assert not rep.passed
    assert {(a, v) for _, a, v, _, _ in rep.failures} == {(7, 2)}


def test_admissibility_needs_positive_slope():
    U = [[Fraction(1)]]
    with pytest.raises(PreconditionError):
        admissibility_check(synthetic_binomial(P, [1], dim=1), 1, Fraction(1), U, [1])


def test_growth_on_bounded_measure():
    mu = bernoulli_measure(P, 2, [1, 2, 3])
    rep = growth_check([mu], 1, [1, 2, 3])
    assert rep.passed
    ratios = [r for _, _, _, r, _ in rep.entries]
    assert ratios == sorted(ratios, reverse=True)
