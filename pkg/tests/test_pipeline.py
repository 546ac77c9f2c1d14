from fractions import Fraction

import pytest

from tripadic import pipeline
from tripadic.characters import DirichletCharacter
from tripadic.errors import StageError, UnsupportedError
from tripadic.siegel import SiegelExpansion, boecherer_twist, ibukiyama_pullback
from tripadic.spectral import FiniteRankModel
from tripadic.triple import TripleExpansion

TRIV = DirichletCharacter.trivial()
T0 = ((2, 1, 1), (1, 2, 1), (1, 1, 2))


def toy():
    F = SiegelExpansion(3, 4, 3, {T0: 7})
    basis = [TripleExpansion({(1, 1, 1): 1}, (1, 1, 1), (4, 4, 4))]
    return F, FiniteRankModel(basis, [[Fraction(7)]], "U_T")


def run(**kw):
    F, M = toy()
    args = dict(siegel_data=F)
    args.update(kw)
    return pipeline.phi_r_pipeline(0, TRIV, (4, 4, 4), 7, 1, M, Fraction(7), **args)


def test_toy_value():
    res = run()
    assert res.value == 7 and res.coords == [7] and res.projected == [7]


def test_stages_recompose():
    res = run()
    G = boecherer_twist(res.siegel, TRIV, TRIV, TRIV)
    assert G == res.twisted
    assert ibukiyama_pullback(G, 4, 4, 4) == res.pullback


def test_deterministic():
    a, b = run(), run()
    assert a.value == b.value and a.pullback == b.pullback


def test_params_stage_rejects_out_of_range_r():
    F, M = toy()
    with pytest.raises(StageError) as exc:
        pipeline.phi_r_pipeline(3, TRIV, (4, 4, 4), 7, 1, M, 7, siegel_data=F)
    assert exc.value.stage == "params"


def test_pullback_stage_reports_unsupported_r():
    F, M = toy()
    with pytest.raises(StageError) as exc:
        pipeline.phi_r_pipeline(1, TRIV, (4, 4, 4), 7, 1, M, 7, siegel_data=F)
    assert exc.value.stage == "pullback" and isinstance(exc.value.error, UnsupportedError)


def test_projection_onto_other_eigenvalue_gives_zero():
    F, _ = toy()
    basis = [TripleExpansion({(1, 1, 1): 1}, (1, 1, 1)), TripleExpansion({(1, 1, 0): 1}, (1, 1, 1))]
    M = FiniteRankModel(basis, [[Fraction(7), 0], [0, Fraction(1)]])
    res = pipeline.phi_r_pipeline(0, TRIV, (4, 4, 4), 7, 1, M, 1, f0=1, siegel_data=F)
    assert res.value == 0


def test_assembled_siegel_scales_by_two_power():
    from tripadic.siegel import siegel_eisenstein_coeff
    a = pipeline.assemble_siegel(1, 6, TRIV, 1, 3)
    assert not a.is_zero() and a.m == 3
    for T, c in a.terms.items():
        assert c == siegel_eisenstein_coeff(T, 6, 1).scale(2)
