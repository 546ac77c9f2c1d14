"""Distributions on Y = (Z/N)^* x Z_p^*, admissibility and the Mellin transform.

A coset a + (N p^v) is keyed by its least positive representative a; the
p-component a_p used in the binomial sums is that integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .arith import INFINITY, PadicCapped, check_prime, padic_valuation
from .characters import DirichletCharacter, is_complete
from .errors import DistributionError, PrecisionError, PreconditionError
from .serialize import decode_value, encode_value
from .spectral import iterate_project, sup_norm


class ProfiniteLevel:
    """(Z / N p^v)^*, the level-v quotient of Y."""

    def __init__(self, N: int, p: int, v: int):
        check_prime(p)
        if N < 1 or N % p == 0:
            raise PreconditionError("N must be positive and prime to p")
        if v < 0:
            raise PreconditionError("level v must be >= 0")
        self.N, self.p, self.v = N, p, v
        self.modulus = N * p**v

    def elements(self):
        M = self.modulus
        return [a for a in range(1, M + 1) if math.gcd(a, self.N * self.p) == 1]

    @property
    def order(self) -> int:
        return len(self.elements())

    def project(self, a: int, w: int) -> int:
        """Image of the coset a at the coarser level w <= v."""
        if w > self.v:
            raise PreconditionError("can only project to a coarser level")
        M = self.N * self.p**w
        return a % M or M

    def children(self, a: int):
        """Cosets of level v+1 inside a + (N p^v)."""
        M = self.modulus
        return [b for b in (a + j * M for j in range(self.p))
                if math.gcd(b, self.N * self.p) == 1]

    def split(self, a: int):
        """(y_0, y_p) = (a mod N, a)."""
        return a % self.N, a


# --------------------------------------------------------------------------
# characters

@dataclass
class DerivedCharacters:
    chi1: DirichletCharacter
    chi2: DirichletCharacter
    chi3: DirichletCharacter
    psi: DirichletCharacter
    complete: dict = field(default_factory=dict)


def derived_characters(chi, psi1, psi2, psi3, N: int | None = None, p: int | None = None):
    """chi1 = chi, chi2 = psi2 psi3^-1 chi, chi3 = psi1 psi3^-1 chi, psi = chi^2 psi1 psi2 psi3^-1.

    With N and p given, ``complete`` records whether each primitive
    conductor has the same prime divisors as N p.
    """
    c3 = psi3.conj()
    chi1 = chi
    chi2 = psi2 * c3 * chi
    chi3 = psi1 * c3 * chi
    psi = chi * chi * psi1 * psi2 * c3
    flags = {}
    if N is not None and p is not None:
        for name, c in (("chi1", chi1), ("chi2", chi2), ("chi3", chi3), ("psi", psi)):
            flags[name] = is_complete(c.conductor, N * p)
    return DerivedCharacters(chi1, chi2, chi3, psi, flags)


class WeightCharacter:
    """y -> chi(y) y_p^k on Y, chi of modulus dividing N p^v."""

    def __init__(self, k: int, chi: DirichletCharacter | None = None, p: int | None = None,
                 prec: int = 20):
        self.k = k
        self.chi = chi or DirichletCharacter.trivial()
        self.p = p
        self.prec = prec

    def __call__(self, a: int):
        if self.chi.order <= 2:
            return self.chi.value(a) * Fraction(a) ** self.k
        if self.p is None:
            raise PreconditionError("a character of order > 2 needs p for its values")
        return self.chi.value(a, self.p, self.prec) * PadicCapped.from_rational(
            Fraction(a) ** self.k, self.p, self.prec)

    def level_exponent(self, N: int, p: int) -> int:
        """Least v with modulus(chi) | N p^v."""
        v = 0
        while (N * p**v) % self.chi.modulus:
            v += 1
            if v > 64:
                raise PreconditionError("character modulus is not of the form N p^v")
        return v


def character_eval(x: WeightCharacter, a: int):
    return x(a)


# --------------------------------------------------------------------------
# distributions

def _zero_like(x):
    if isinstance(x, list):
        return [_zero_like(y) for y in x]
    if hasattr(x, "scale"):
        return x.scale(0)
    return x * 0


def _add(x, y):
    if isinstance(x, list):
        return [_add(a, b) for a, b in zip(x, y)]
    return x + y


def _scale(c, x):
    if isinstance(x, list):
        return [_scale(c, y) for y in x]
    if hasattr(x, "scale"):
        return x.scale(c)
    return c * x


def _vals(x):
    if isinstance(x, list):
        return [z for y in x for z in _vals(y)]
    if hasattr(x, "coeffs"):
        return [v for c in x.coeffs.values() for v in c.terms.values()]
    return [x]


def _is_zero(x) -> bool:
    return all(v == 0 for v in _vals(x))


def norm(x, p: int) -> Fraction:
    """Sup (Gauss) norm over all serialized coefficients."""
    return sup_norm(_vals(x), p)


class Distribution:
    """Values on cosets a + (N p^v) for a range of levels v.

    ``levels`` maps v to {a: value}; values are scalars, coordinate
    vectors (lists) or expansions.  ``value_levels`` optionally records the
    modular level carried by the values at each v.
    """

    def __init__(self, N: int, p: int, levels: dict, value_levels: dict | None = None):
        self.N, self.p = N, p
        self.levels = {int(v): dict(vals) for v, vals in levels.items()}
        self.value_levels = dict(value_levels or {})

    @classmethod
    def from_function(cls, N, p, fn, vs, value_levels=None):
        levels = {v: {a: fn(a, v) for a in ProfiniteLevel(N, p, v).elements()} for v in vs}
        return cls(N, p, levels, value_levels)

    def value(self, a: int, v: int):
        if v in self.levels:
            M = self.N * self.p**v
            key = a % M or M
            if key not in self.levels[v]:
                raise DistributionError(f"no value for coset {a} at level {v}")
            return self.levels[v][key]
        finer = [w for w in self.levels if w > v]
        if not finer:
            raise DistributionError(f"no data at or above level {v}")
        # coarsen by summing over the children
        L = ProfiniteLevel(self.N, self.p, v)
        total = None
        for b in L.children(a % L.modulus or L.modulus):
            x = self.value(b, v + 1)
            total = x if total is None else _add(total, x)
        return total

    def check(self):
        """Raise DistributionError at the first coset violating additivity."""
        for v in sorted(self.levels):
            if v + 1 not in self.levels:
                continue
            L = ProfiniteLevel(self.N, self.p, v)
            for a in L.elements():
                s = None
                for b in L.children(a):
                    x = self.levels[v + 1][b]
                    s = x if s is None else _add(s, x)
                diff = _add(self.levels[v][a], _scale(-1, s))
                if not _is_zero(diff):
                    err = DistributionError(f"refinement fails at coset {a}, level {v}")
                    err.coset, err.level = a, v
                    raise err

    def to_json(self) -> dict:
        def enc(x):
            if isinstance(x, list):
                return [enc(y) for y in x]
            if hasattr(x, "to_json"):
                return x.to_json()
            return encode_value(x)
        return {"N": self.N, "p": self.p,
                "levels": [{"v": v, "values": {str(a): enc(x) for a, x in sorted(vals.items())}}
                           for v, vals in sorted(self.levels.items())]}

    @classmethod
    def from_json(cls, d: dict) -> "Distribution":
        def dec(x):
            if isinstance(x, list):
                return [dec(y) for y in x]
            return decode_value(x)
        levels = {e["v"]: {int(a): dec(x) for a, x in e["values"].items()} for e in d["levels"]}
        return cls(d["N"], d["p"], levels)


def distribution_integrate(Phi: Distribution, phi, v: int):
    """sum_a phi(a) Phi(a + (N p^v)); finer stored data must agree."""
    L = ProfiniteLevel(Phi.N, Phi.p, v)
    get = phi.get if isinstance(phi, dict) else phi
    total = None
    for a in L.elements():
        c = get(a)
        if c is None or c == 0:
            continue
        term = _scale(c, Phi.value(a, v))
        total = term if total is None else _add(total, term)
    if v + 1 in Phi.levels and v in Phi.levels:
        Phi.check()
    if total is None:
        sample = next(iter(next(iter(Phi.levels.values())).values()))
        total = _zero_like(sample)
    return total


def _binom(n: int, k: int) -> int:
    return math.comb(n, k)


def local_moment(Phis, t: int, a: int, v: int):
    """integral of (y_p - a)^t over a + (N p^v): sum_r C(t,r) (-a)^(t-r) Phi_r."""
    total = None
    for r in range(t + 1):
        term = _scale(_binom(t, r) * (-a) ** (t - r), Phis[r].value(a, v))
        total = term if total is None else _add(total, term)
    return total


@dataclass
class GrowthReport:
    passed: bool
    entries: list  # (h', v, max norm, normalized ratio, argmax coset)
    note: str = "finite-range proxy: normalized norms must be non-increasing in v"

    def to_json(self) -> dict:
        return {"passed": self.passed, "note": self.note,
                "entries": [{"h_prime": hp, "v": v, "norm": encode_value(n),
                             "ratio": encode_value(r), "coset": a}
                            for hp, v, n, r, a in self.entries]}


def growth_check(Phis, h: int, vs, p: int | None = None) -> GrowthReport:
    """max_a |int_{a+(Np^v)} (y_p - a)^h' dPhi| p^(v(h'-h)) for h' < h, v in vs."""
    p = p or Phis[0].p
    if len(Phis) < h:
        raise PreconditionError(f"need {h} moment distributions, got {len(Phis)}")
    entries = []
    ok = True
    for hp in range(h):
        prev = None
        for v in vs:
            best, where = Fraction(0), None
            for a in ProfiniteLevel(Phis[0].N, p, v).elements():
                n = norm(local_moment(Phis, hp, a, v), p)
                if where is None or n > best:
                    best, where = n, a
            ratio = best * Fraction(p) ** (v * (hp - h))
            entries.append((hp, v, best, ratio, where))
            if prev is not None and ratio > prev:
                ok = False
            prev = ratio
    return GrowthReport(ok, entries)


@dataclass
class AdmissibilityReport:
    passed: bool
    h: int
    failures: list  # (t, a, v, min valuation found, required)
    level_checks: list
    growth: GrowthReport | None = None
    measure: list | None = None

    def to_json(self) -> dict:
        return {"passed": self.passed, "h": self.h,
                "failures": [{"t": t, "a": a, "v": v, "valuation": None if val == INFINITY else val,
                              "required": req} for t, a, v, val, req in self.failures],
                "level_checks": self.level_checks,
                "growth": self.growth.to_json() if self.growth else None}


def _min_valuation(x, p):
    vals = [padic_valuation(y, p) for y in _vals(x)]
    return min(vals, default=INFINITY)


def admissibility_check(Phis, kappa: int, alpha, U, vs, p: int | None = None,
                        threshold=None) -> AdmissibilityReport:
    """Level condition and the congruences
    U^(kappa v) sum_{r<=t} C(t,r) (-a)^(t-r) Phi_r(a + (N p^v)) = 0 mod p^(vt).

    ``Phis`` take values in coordinate vectors of the model with matrix U.
    On success the measure pi_alpha(Phi_r) is built through (U^-v pi U^v)
    and passed to :func:`growth_check`.
    """
    p = p or Phis[0].p
    ov = padic_valuation(alpha, p)
    if ov == INFINITY or ov <= 0:
        raise PreconditionError("need 0 < |alpha|_p < 1")
    h = math.floor(kappa * ov) + 1
    if len(Phis) < h:
        raise PreconditionError(f"h = {h} needs Phi_0..Phi_{h - 1}")
    N = Phis[0].N
    level_checks = []
    for r, Phi in enumerate(Phis[:h]):
        for v in vs:
            lev = Phi.value_levels.get(v)
            if lev is None:
                level_checks.append({"r": r, "v": v, "status": "not recorded"})
            else:
                good = (N * p ** (kappa * v)) % lev == 0
                level_checks.append({"r": r, "v": v, "level": lev, "status": "ok" if good else "fail"})
    failures = []
    for v in vs:
        Uk = la.matpow(U, kappa * v)
        for t in range(h):
            for a in ProfiniteLevel(N, p, v).elements():
                s = la.matvec(Uk, local_moment(Phis, t, a, v))
                val = _min_valuation(s, p)
                if val < v * t:
                    failures.append((t, a, v, val, v * t))
    passed = not failures and all(c["status"] != "fail" for c in level_checks)
    growth = measure = None
    if passed:
        measure = []
        for r in range(h):
            levels = {}
            for v in vs:
                levels[v] = {a: iterate_project(Phis[r].value(a, v), U, alpha, v, threshold)
                             for a in ProfiniteLevel(N, p, v).elements()}
            measure.append(Distribution(N, p, levels))
        growth = growth_check(measure, h, vs, p)
    return AdmissibilityReport(passed, h, failures, level_checks, growth, measure)


# --------------------------------------------------------------------------
# Mellin transform

def mellin_eval(Phis, x: WeightCharacter, v: int, h: int = 1, prec: int | None = None):
    """int x dmu from level-v data, Taylor-expanding y_p^k to degree h-1.

    ``Phis`` are the moment distributions Phi_r = y_p^r mu for r < h.
    With ``prec`` set, raises PrecisionError when level v cannot pin the
    value to that many p-adic digits (error term p^(v h) times the data).
    """
    p = Phis[0].p
    N = Phis[0].N
    if x.level_exponent(N, p) > v:
        raise PrecisionError(f"character needs level >= {x.level_exponent(N, p)}")
    if len(Phis) < h:
        raise PreconditionError(f"need {h} moment distributions")
    if prec is not None:
        data_val = min((_min_valuation(Phis[0].value(a, v), p)
                        for a in ProfiniteLevel(N, p, v).elements()), default=INFINITY)
        reach = v * h + (0 if data_val == INFINITY else data_val)
        if reach < prec:
            raise PrecisionError(f"level {v} gives {reach} digits, {prec} requested")
    total = 0
    for a in ProfiniteLevel(N, p, v).elements():
        chi_a = x.chi.value(a) if x.chi.order <= 2 else x.chi.value(a, p, x.prec)
        if chi_a == 0:
            continue
        for j in range(min(h, x.k + 1) if x.k >= 0 else h):
            c = _binom(x.k, j) * Fraction(a) ** (x.k - j)
            total = total + chi_a * c * local_moment(Phis, j, a, v)
    return total


# --------------------------------------------------------------------------
# sample data

def bernoulli_measure(p: int, c: int, vs, N: int = 1) -> Distribution:
    """mu_c(a + p^v) = B1({a/p^v}) - c B1({c^-1 a / p^v}), a bounded measure."""
    if math.gcd(c, N * p) != 1 or c == 1:
        raise PreconditionError("c must be a unit > 1 prime to N p")

    def b1(x: Fraction) -> Fraction:
        return x - Fraction(1, 2)

    def mu(a, v):
        M = N * p**v
        ci = pow(c, -1, M)
        return b1(Fraction(a % M, M)) - c * b1(Fraction(ci * a % M, M))
    return Distribution.from_function(N, p, mu, vs)


def synthetic_binomial(p: int, vs, N: int = 1, dim: int = 2, h: int = 3):
    """Phi_r(a + (N p^v)) = a^r e_1: every t >= 1 sum telescopes to zero."""
    def make(r):
        return Distribution.from_function(
            N, p, lambda a, v: [Fraction(a) ** r if i == 0 else Fraction(0) for i in range(dim)], vs)
    return [make(r) for r in range(h)]
