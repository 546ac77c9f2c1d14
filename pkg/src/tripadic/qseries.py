"""Truncated elliptic q-expansions with coefficients polynomial in R.

R stands for (4 pi y)^(-1).  A coefficient is a one-variable :class:`Poly`
in R; holomorphic expansions are those where every coefficient is constant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import (DEFAULT_FAMILY_ORDER, DEFAULT_PREC, INFINITY, FamilyCoefficient,
                    PadicCapped, bernoulli, check_prime, divisors, family_eval,
                    padic_sqrt, padic_valuation, power_family, sigma)
from .characters import DirichletCharacter
from .errors import FactorizationError, PreconditionError, VerificationError
from .polynomial import Poly
from .serialize import decode_value, encode_value, ring_of_all

R = Poly.var(1, 0)


def _poly(c) -> Poly:
    if isinstance(c, Poly):
        if c.nvars != 1:
            raise PreconditionError("q-expansion coefficients are polynomials in one variable R")
        return c
    return Poly.constant(1, c)


class QExpansion:
    """sum_{n <= trunc} a(n; R) q^n, known exactly up to q^trunc."""

    __slots__ = ("trunc", "weight", "character", "coeffs")

    def __init__(self, coeffs, trunc: int, weight=None, character=None):
        if trunc < 0:
            raise PreconditionError("truncation must be >= 0")
        self.trunc = trunc
        self.weight = weight
        self.character = character or DirichletCharacter.trivial()
        items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
        clean = {}
        for n, c in items:
            if n < 0:
                raise PreconditionError("negative q-exponent")
            if n > trunc:
                continue
            c = _poly(c)
            if not c.is_zero():
                clean[n] = c
        self.coeffs = clean

    @classmethod
    def from_list(cls, values, weight=None, character=None):
        values = list(values)
        return cls(dict(enumerate(values)), len(values) - 1, weight, character)

    @classmethod
    def monomial(cls, n: int, trunc: int, c=Fraction(1), weight=None):
        return cls({n: c}, trunc, weight)

    # access -----------------------------------------------------------------
    def __getitem__(self, n: int) -> Poly:
        if n > self.trunc:
            raise IndexError(f"q^{n} is beyond the truncation {self.trunc}")
        return self.coeffs.get(n, Poly.zero(1))

    def a(self, n: int):
        """Holomorphic part (R-degree 0) of the n-th coefficient."""
        return self[n].constant_term()

    def coefficient_list(self):
        return [self.a(n) for n in range(self.trunc + 1)]

    @property
    def type(self) -> int:
        return max((c.total_degree() for c in self.coeffs.values()), default=0)

    def is_holomorphic(self) -> bool:
        return all(c.is_constant() for c in self.coeffs.values())

    def is_zero(self) -> bool:
        return not self.coeffs

    def truncate(self, trunc: int) -> "QExpansion":
        return QExpansion(self.coeffs, min(trunc, self.trunc), self.weight, self.character)

    def _with(self, coeffs, trunc=None, weight="same"):
        return QExpansion(coeffs, self.trunc if trunc is None else trunc,
                          self.weight if weight == "same" else weight, self.character)

    # ring structure -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, QExpansion):
            other = QExpansion({0: other}, self.trunc, self.weight)
        N = min(self.trunc, other.trunc)
        out = {n: c for n, c in self.coeffs.items() if n <= N}
        for n, c in other.coeffs.items():
            if n <= N:
                out[n] = out[n] + c if n in out else c
        return QExpansion(out, N, self.weight, self.character)

    __radd__ = __add__

    def __neg__(self):
        return self._with({n: -c for n, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        return self._with({n: v.scale(c) for n, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return mul(self, other)
        if isinstance(other, Poly):
            return self._with({n: v * other for n, v in self.coeffs.items()})
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, Poly):
            return self * other
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def map_coeffs(self, fn):
        return self._with({n: c.map_coeffs(fn) for n, c in self.coeffs.items()})

    def __repr__(self):
        head = ", ".join(f"{n}: {c!r}" for n, c in sorted(self.coeffs.items())[:6])
        return f"QExpansion(trunc={self.trunc}, weight={self.weight}, {{{head}}})"

    # serialization ----------------------------------------------------------
    def ring(self) -> str:
        return ring_of_all(v for c in self.coeffs.values() for v in c.terms.values())

    def to_json(self) -> dict:
        return {
            "kind": "qexp",
            "ring": self.ring(),
            "weight": self.weight,
            "trunc": self.trunc,
            "coeffs": [[n, [[m[0], encode_value(v)] for m, v in c.sorted_terms()]]
                       for n, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, d: dict) -> "QExpansion":
        if d.get("kind") != "qexp":
            raise PreconditionError("not a qexp document")
        coeffs = {n: Poly(1, {(j,): decode_value(v) for j, v in terms})
                  for n, terms in d["coeffs"]}
        return cls(coeffs, d["trunc"], d.get("weight"))


def mul(f: QExpansion, g: QExpansion) -> QExpansion:
    """Cauchy product truncated at the smaller truncation."""
    N = min(f.trunc, g.trunc)
    out = {}
    for n1, c1 in f.coeffs.items():
        if n1 > N:
            continue
        for n2, c2 in g.coeffs.items():
            n = n1 + n2
            if n > N:
                continue
            t = c1 * c2
            out[n] = out[n] + t if n in out else t
    w = None if f.weight is None or g.weight is None else f.weight + g.weight
    return QExpansion(out, N, w, f.character * g.character)


# --------------------------------------------------------------------------
# standard series

def eisenstein_bare(k: int, trunc: int, constant=Fraction(0), p: int | None = None) -> QExpansion:
    """sum sigma_{k-1}(n) q^n with a caller-supplied constant term.

    With ``p`` given, divisors divisible by p are dropped.
    """
    coeffs = {0: constant}
    for n in range(1, trunc + 1):
        coeffs[n] = Fraction(sum(d ** (k - 1) for d in divisors(n) if p is None or d % p))
    return QExpansion(coeffs, trunc, k)


def eisenstein(k: int, trunc: int) -> QExpansion:
    """E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n, for even k >= 4."""
    if k % 2 or k < 4:
        raise PreconditionError("eisenstein needs an even weight k >= 4")
    c = -2 * k / bernoulli(k)
    coeffs = {0: Fraction(1)}
    for n in range(1, trunc + 1):
        coeffs[n] = c * sigma(k - 1, n)
    return QExpansion(coeffs, trunc, k)


def eisenstein_e2(trunc: int) -> QExpansion:
    coeffs = {0: Fraction(1)}
    for n in range(1, trunc + 1):
        coeffs[n] = Fraction(-24 * sigma(1, n))
    return QExpansion(coeffs, trunc, 2)


def delta_cusp(trunc: int) -> QExpansion:
    """q prod (1 - q^n)^24 to q^trunc."""
    M = trunc  # the product is needed to q^(trunc-1)
    euler = [0] * (M + 1)
    euler[0] = 1
    # pentagonal number theorem
    j = 1
    while True:
        hit = False
        for g in (j * (3 * j - 1) // 2, j * (3 * j + 1) // 2):
            if g <= M:
                euler[g] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
        j += 1
    acc = [1] + [0] * M
    for _ in range(24):
        new = [0] * (M + 1)
        for i, a in enumerate(acc):
            if a:
                for t, b in enumerate(euler[: M + 1 - i]):
                    if b:
                        new[i + t] += a * b
        acc = new
    coeffs = {n + 1: Fraction(acc[n]) for n in range(trunc)}
    return QExpansion(coeffs, trunc, 12)


def family_eisenstein(k0: int, p: int, trunc: int, order: int = DEFAULT_FAMILY_ORDER,
                      constant=None, prec: int = DEFAULT_PREC) -> QExpansion:
    """The p-depleted family n -> sum_{d | n, p not| d} d^(k-1) around k0.

    The parity sector is fixed by k0 (weights k = k0 mod p - 1).  The
    constant term is caller-supplied; by default it is omitted.
    """
    check_prime(p)
    cache = {}
    coeffs = {}
    if constant is not None:
        coeffs[0] = constant if isinstance(constant, FamilyCoefficient) else \
            FamilyCoefficient.constant(k0, PadicCapped.from_rational(constant, p, prec), order)
    for n in range(1, trunc + 1):
        total = None
        for d in divisors(n):
            if d % p == 0:
                continue
            if d not in cache:
                cache[d] = power_family(d, k0, p, order, prec)
            total = cache[d] if total is None else total + cache[d]
        coeffs[n] = total
    return QExpansion(coeffs, trunc, k0)


def evaluate_family(f: QExpansion, k: int) -> QExpansion:
    """Specialize every family coefficient at the integer weight k."""
    out = f.map_coeffs(lambda c: family_eval(c, k))
    out.weight = k
    return out


# --------------------------------------------------------------------------
# differential operators

def ramanujan_theta(f: QExpansion) -> QExpansion:
    """theta(a R^j q^n) = a (n R^j + j R^(j+1)) q^n."""
    out = {}
    for n, c in f.coeffs.items():
        terms = {}
        for (j,), a in c.terms.items():
            if n:
                terms[(j,)] = terms.get((j,), 0) + a * n
            if j:
                terms[(j + 1,)] = terms.get((j + 1,), 0) + a * j
        out[n] = Poly(1, terms)
    return f._with(out, weight=None if f.weight is None else f.weight + 2)


def shimura_delta_elliptic(f: QExpansion, k=None) -> QExpansion:
    k = f.weight if k is None else k
    if k is None:
        raise PreconditionError("weight required")
    out = ramanujan_theta(f) - f * R.scale(k)
    out.weight = k + 2
    return out


def shimura_delta_iterate(f: QExpansion, k: int, r: int) -> QExpansion:
    for i in range(r):
        f = shimura_delta_elliptic(f, k + 2 * i)
    return f


def closed_form_q(n, k: int, r: int) -> Poly:
    """sum_j (-1)^(r-j) C(r,j) (k+j)...(k+r-1) R^(r-j) n^j."""
    from math import comb
    out = {}
    for j in range(r + 1):
        rising = 1
        for i in range(k + j, k + r):
            rising *= i
        c = Fraction((-1) ** (r - j) * comb(r, j) * rising) * Fraction(n) ** j
        out[(r - j,)] = out.get((r - j,), 0) + c
    return Poly(1, out)


def serre_operator(f: QExpansion, k=None) -> QExpansion:
    k = f.weight if k is None else k
    if k is None:
        raise PreconditionError("weight required")
    out = ramanujan_theta(f) - mul(eisenstein_e2(f.trunc), f).scale(Fraction(k, 12))
    out.weight = k + 2
    return out


# --------------------------------------------------------------------------
# arithmetic operators

def twist(f: QExpansion, chi: DirichletCharacter, p: int | None = None,
          prec: int = DEFAULT_PREC) -> QExpansion:
    """a_n -> chi(n) a_n for n >= 1; the constant term is dropped."""
    out = {}
    for n, c in f.coeffs.items():
        if n == 0:
            continue
        v = chi.value(n, p, prec)
        if v != 0:
            out[n] = c.scale(v)
    return QExpansion(out, f.trunc, f.weight, f.character * chi * chi)


def atkin_u(f: QExpansion, p: int) -> QExpansion:
    """a(n; R) -> a(pn; pR); the truncation becomes floor(trunc/p)."""
    N = f.trunc // p
    out = {n // p: c.scale_vars([p]) for n, c in f.coeffs.items() if n % p == 0 and n // p <= N}
    return QExpansion(out, N, f.weight, f.character)


def v_operator(f: QExpansion, p: int) -> QExpansion:
    """a(n; R) q^n -> a(n; R/p) q^(pn), a section of :func:`atkin_u`."""
    inv = Fraction(1, p)
    out = {p * n: c.scale_vars([inv]) for n, c in f.coeffs.items()}
    return QExpansion(out, f.trunc * p, f.weight, f.character)


def hecke_tq(f: QExpansion, q: int, k=None, psi: DirichletCharacter | None = None,
             p: int | None = None) -> QExpansion:
    """T_q: a_n -> a_{qn} + psi(q) q^(k-1) a_{n/q}."""
    k = f.weight if k is None else k
    psi = psi or f.character
    if psi.modulus % q == 0 and not psi.is_trivial():
        raise PreconditionError("q divides the level")
    eps = psi.value(q, p) * Fraction(q) ** (k - 1)
    N = f.trunc // q
    out = {}
    for n in range(N + 1):
        c = f[q * n]
        if n % q == 0 and eps != 0:
            c = c + f[n // q].scale(eps)
        out[n] = c
    return QExpansion(out, N, f.weight, f.character)


# --------------------------------------------------------------------------
# p-stabilization

@dataclass(frozen=True)
class HeckeParameters:
    p: int
    a_p: object
    c: object  # psi(p) p^(k-1)
    alpha1: object
    alpha2: object

    def check(self) -> None:
        if not (self.alpha1 + self.alpha2 == self.a_p and self.alpha1 * self.alpha2 == self.c):
            raise VerificationError("roots do not factor the Hecke polynomial")

    def slopes(self):
        return (padic_valuation(self.alpha1, self.p), padic_valuation(self.alpha2, self.p))


def _rational_sqrt(x: Fraction):
    from math import isqrt
    if x < 0:
        return None
    a, b = isqrt(x.numerator), isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def hecke_roots(a_p, c, p: int, prec: int = DEFAULT_PREC, choose: int = 0) -> HeckeParameters:
    """Split 1 - a_p X + c X^2 = (1 - alpha1 X)(1 - alpha2 X).

    Exact when the discriminant is a rational square, otherwise in Z_p to
    precision ``prec``.  ``choose`` = 1 swaps the roots when slopes tie.
    """
    if c == 0:
        return HeckeParameters(p, a_p, c, a_p, Fraction(0))
    rational = isinstance(a_p, (int, Fraction)) and isinstance(c, (int, Fraction))
    if rational:
        a_p, c = Fraction(a_p), Fraction(c)
        s = _rational_sqrt(a_p * a_p - 4 * c)
        if s is not None:
            r1, r2 = (a_p + s) / 2, (a_p - s) / 2
            return _ordered(p, a_p, c, r1, r2, choose)
    A = a_p if isinstance(a_p, PadicCapped) else PadicCapped.from_rational(a_p, p, prec)
    C = c if isinstance(c, PadicCapped) else PadicCapped.from_rational(c, p, prec)
    va, vc = padic_valuation(A, p), padic_valuation(C, p)
    if va != INFINITY and 2 * va < vc:
        # the root of valuation va is the fixed point of x -> a_p - c/x
        x = A
        gain = vc - 2 * va
        for _ in range(prec // gain + 3):
            x = A - C / x
        return _ordered(p, A, C, x, C / x, choose)
    try:
        s = padic_sqrt(A * A - 4 * C)
    except PreconditionError as exc:
        raise FactorizationError(f"Hecke polynomial does not split over Z_{p}: {exc}") from exc
    half = Fraction(1, 2)
    return _ordered(p, A, C, (A + s) * half, (A - s) * half, choose)


def _ordered(p, a_p, c, r1, r2, choose):
    v1, v2 = padic_valuation(r1, p), padic_valuation(r2, p)
    if v1 > v2 or (v1 == v2 and choose):
        r1, r2 = r2, r1
    return HeckeParameters(p, a_p, c, r1, r2)


def p_stabilize(f: QExpansion, p: int, k=None, psi: DirichletCharacter | None = None,
                choose: int = 0, prec: int = DEFAULT_PREC, params: HeckeParameters | None = None):
    """f_0 = f - alpha2 * f|V_p for a normalized-or-scaled eigenform f.

    Returns (f_0, parameters).  a_p is read as a_p(f)/a_1(f).
    """
    k = f.weight if k is None else k
    psi = psi or f.character
    if params is None:
        if f.trunc < p:
            raise PreconditionError(f"need the q^{p} coefficient, truncation is {f.trunc}")
        a1 = f.a(1)
        if a1 == 0:
            raise PreconditionError("a_1 = 0: cannot normalize the eigenvalue")
        a_p = f.a(p) / a1
        c = psi.value(p, None if psi.order <= 2 else p, prec) * Fraction(p) ** (k - 1)
        params = hecke_roots(a_p, c, p, prec, choose)
    params.check()
    if params.alpha2 == 0:
        return f, params
    f0 = f - v_operator(f, p).scale(params.alpha2)
    return f0.truncate(f.trunc), params
