"""The Phi_r flow: Siegel-Eisenstein data, twist, pullback, projection, l."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .characters import DirichletCharacter
from .errors import StageError, TripadicError, PreconditionError
from .measures import derived_characters
from .siegel import (SiegelExpansion, boecherer_twist, enumerate_T, ibukiyama_pullback,
                     siegel_eisenstein_coeff)
from .spectral import coordinates, lambda_projection, linear_form_ell
from . import linalg as la

# Phi_r is scaled by 2^r on assembly; set to False to drop the factor
APPLY_TWO_POWER = True


@dataclass
class PipelineResult:
    siegel: SiegelExpansion
    twisted: SiegelExpansion
    pullback: object
    coords: list
    projected: list
    projected_expansion: object
    value: object


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except StageError:
        raise
    except TripadicError as exc:
        raise StageError(name, exc) from exc


def assemble_siegel(r: int, k: int, psi: DirichletCharacter, level: int, trace_bound: int):
    scale = Fraction(2) ** r if APPLY_TWO_POWER else Fraction(1)
    terms = {}
    for T in enumerate_T(3, trace_bound):
        if T.is_positive_definite():
            c = siegel_eisenstein_coeff(T, k, r, psi, level)
            if not c.is_zero():
                terms[T] = c.scale(scale)
    return SiegelExpansion(3, k, trace_bound, terms, psi)


def phi_r_pipeline(r: int, chi: DirichletCharacter, weights, p: int, N: int, model,
                   lam, f0=0, psis=None, trace_bound: int = 6, v: int = 1,
                   siegel_data: SiegelExpansion | None = None, dual=None) -> PipelineResult:
    """Run every stage; errors carry the failing stage name.

    ``model`` is a :class:`~tripadic.spectral.FiniteRankModel` of triple
    expansions with the matrix of U_T; ``siegel_data`` replaces the
    assembled Siegel-Eisenstein series (toy inputs, tests).
    """
    k1, k2, k3 = weights
    k = k2 + k3 - k1

    def check():
        if k < 2:
            raise PreconditionError(f"k = k2 + k3 - k1 must be >= 2, got {k}")
        if not 0 <= r <= k - 2:
            raise PreconditionError(f"r = {r} outside the critical range 0..{k - 2}")
    _stage("params", check)
    triv = DirichletCharacter.trivial()
    psi1, psi2, psi3 = psis or (triv, triv, triv)
    dc = _stage("characters", derived_characters, chi, psi1, psi2, psi3, N, p)
    level = N * p**v
    F = siegel_data if siegel_data is not None else _stage(
        "siegel", assemble_siegel, r, k, dc.psi, level, trace_bound)
    G = _stage("twist", boecherer_twist, F, dc.chi1.conj(), dc.chi2.conj(), dc.chi3.conj())
    g = _stage("pullback", ibukiyama_pullback, G, k1, k2, k3, r)
    c = _stage("span", coordinates, model.basis, g, g.trunc)
    rep = _stage("project", lambda_projection, model, lam)
    pc = la.matvec(rep.projector, c)
    ell = _stage("linear-form", linear_form_ell, model, lam, f0, dual)
    return PipelineResult(F, G, g, c, pc, model.combine(pc) if model.basis else None, ell(pc))
