"""Formal Siegel expansions of degree m <= 3 and the Maass-Shimura calculus.

An index T is stored as the even-diagonal integer matrix S = 2T.  A
coefficient is det(R)^s * P(R) with P a polynomial in the symmetric
variables R_ab (a <= b), ordered as in :func:`r_vars`.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .characters import DirichletCharacter
from .errors import PreconditionError, UnsupportedError, VerificationError
from .polynomial import Poly
from .serialize import decode_value, encode_value


@lru_cache(maxsize=None)
def r_vars(m: int) -> tuple:
    return tuple((a, b) for a in range(m) for b in range(a, m))


@lru_cache(maxsize=None)
def _var_index(m: int) -> dict:
    idx = {}
    for i, (a, b) in enumerate(r_vars(m)):
        idx[(a, b)] = idx[(b, a)] = i
    return idx


def r_var(m: int, a: int, b: int) -> Poly:
    return Poly.var(len(r_vars(m)), _var_index(m)[(a, b)])


def r_matrix(m: int):
    return [[r_var(m, a, b) for b in range(m)] for a in range(m)]


def det(M):
    """Determinant by cofactor expansion (entries from any ring)."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


# --------------------------------------------------------------------------
# indices

class HalfIntegralMatrix:
    __slots__ = ("S",)

    def __init__(self, S):
        S = tuple(tuple(int(x) for x in row) for row in S)
        m = len(S)
        if m < 1 or m > 3 or any(len(row) != m for row in S):
            raise PreconditionError("2T must be a square matrix of size 1..3")
        for i in range(m):
            if S[i][i] % 2:
                raise PreconditionError("2T must have even diagonal")
            for j in range(i):
                if S[i][j] != S[j][i]:
                    raise PreconditionError("2T must be symmetric")
        self.S = S

    @classmethod
    def from_T(cls, T):
        return cls([[int(Fraction(x) * 2) for x in row] for row in T])

    @property
    def m(self) -> int:
        return len(self.S)

    def t(self, i: int, j: int) -> Fraction:
        return Fraction(self.S[i][j], 2)

    @property
    def T(self):
        return [[self.t(i, j) for j in range(self.m)] for i in range(self.m)]

    def det2(self) -> int:
        """det(2T)."""
        return det([list(r) for r in self.S])

    def det(self) -> Fraction:
        return Fraction(self.det2(), 2**self.m)

    def trace(self) -> int:
        return sum(self.S[i][i] for i in range(self.m)) // 2

    def leading_minors(self):
        return [det([list(r[:i]) for r in self.S[:i]]) for i in range(1, self.m + 1)]

    def is_positive_definite(self) -> bool:
        return all(d > 0 for d in self.leading_minors())

    def is_semidefinite(self) -> bool:
        m = self.m
        for size in range(1, m + 1):
            for I in itertools.combinations(range(m), size):
                if det([[self.S[a][b] for b in I] for a in I]) < 0:
                    return False
        return True

    def __eq__(self, other):
        return isinstance(other, HalfIntegralMatrix) and self.S == other.S

    def __hash__(self):
        return hash(self.S)

    def __lt__(self, other):
        return self.S < other.S

    def __repr__(self):
        return f"HalfIntegralMatrix({[list(r) for r in self.S]})"


def enumerate_T(m: int, max_trace: int):
    """All T >= 0 of size m with tr(T) <= max_trace, sorted."""
    if not 1 <= m <= 3:
        raise PreconditionError("degree must be 1, 2 or 3")
    out = []
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    for diag in itertools.product(range(max_trace + 1), repeat=m):
        if sum(diag) > max_trace:
            continue
        bounds = [isqrt(4 * diag[i] * diag[j]) for i, j in pairs]
        for offs in itertools.product(*[range(-b, b + 1) for b in bounds]):
            S = [[0] * m for _ in range(m)]
            for i in range(m):
                S[i][i] = 2 * diag[i]
            for (i, j), x in zip(pairs, offs):
                S[i][j] = S[j][i] = x
            T = HalfIntegralMatrix(S)
            if T.is_semidefinite():
                out.append(T)
    return sorted(out)


# --------------------------------------------------------------------------
# coefficients det(R)^s P(R)

class DetPowerCoefficient:
    __slots__ = ("m", "s", "P")

    def __init__(self, m: int, s, P: Poly):
        if P.nvars != len(r_vars(m)):
            raise PreconditionError("polynomial has the wrong number of R-variables")
        self.m = m
        self.s = Fraction(s)
        self.P = P

    @classmethod
    def constant(cls, m, c):
        return cls(m, 0, Poly.constant(len(r_vars(m)), c))

    def is_zero(self) -> bool:
        return self.P.is_zero()

    def __add__(self, other):
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if other.s != self.s:
            raise PreconditionError("adding coefficients with different det exponents")
        return DetPowerCoefficient(self.m, self.s, self.P + other.P)

    def scale(self, c):
        return DetPowerCoefficient(self.m, self.s, self.P.scale(c))

    def __eq__(self, other):
        if not isinstance(other, DetPowerCoefficient):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return True
        return self.s == other.s and self.P == other.P

    __hash__ = None

    def __repr__(self):
        return f"det(R)^{self.s} * ({self.P!r})"


def theta_derivation(i: int, j: int, P: Poly, s, T: HalfIntegralMatrix) -> Poly:
    """theta_ij applied to det(R)^s P(R) q^T, returned as the new P.

    Rules: theta_ij q^T = t_ij q^T, theta_ij R = R E^(ij) R with the
    symmetric elementary matrix (entries 1/2 off the diagonal), and
    theta_ij det(R)^s = s R_ij det(R)^s.
    """
    m = T.m
    if not (0 <= i < m and 0 <= j < m):
        raise PreconditionError("derivation index out of range")
    half = Fraction(1, 2)
    out = P.scale(T.t(i, j)) + (r_var(m, i, j) * P).scale(Fraction(s))
    for v, (a, b) in enumerate(r_vars(m)):
        dP = P.diff(v)
        if dP.is_zero():
            continue
        img = (r_var(m, a, i) * r_var(m, j, b) + r_var(m, a, j) * r_var(m, i, b)).scale(half)
        out = out + dP * img
    return out


def theta_det(P: Poly, s, T: HalfIntegralMatrix) -> Poly:
    """Theta_m = det(theta_ij) on det(R)^s P q^T."""
    m = T.m
    total = Poly.zero(len(r_vars(m)))
    for perm in itertools.permutations(range(m)):
        sign = 1
        for a in range(m):
            for b in range(a + 1, m):
                if perm[a] > perm[b]:
                    sign = -sign
        cur = P
        # the derivations commute, so the order of application is immaterial
        for a in reversed(range(m)):
            cur = theta_derivation(a, perm[a], cur, s, T)
            if cur.is_zero():
                break
        total = total + cur if sign > 0 else total - cur
    return total


def kappa(m: int) -> Fraction:
    return Fraction(m + 1, 2)


def delta_term(P: Poly, T: HalfIntegralMatrix, k) -> Poly:
    """det(R)^(k+1-kappa) Theta_m[det(R)^(kappa-1-k) P q^T], as a polynomial."""
    return theta_det(P, kappa(T.m) - 1 - k, T)


def universal_q_polynomial(m: int, k, r: int, T: HalfIntegralMatrix) -> Poly:
    """Q(R, T; k, r) with delta_k^(r) q^T = Q q^T."""
    if T.m != m:
        raise PreconditionError("index size does not match the degree")
    P = Poly.one(len(r_vars(m)))
    for i in range(r):
        P = delta_term(P, T, k + 2 * i)
    return P


# --------------------------------------------------------------------------
# the r = 1 closed formula

def _minor(M, I, J):
    return det([[M[a][b] for b in J] for a in I])


def rho(M, r: int):
    """Matrix of r x r minors indexed by r-subsets in lexicographic order."""
    m = len(M)
    subs = list(itertools.combinations(range(m), r))
    return [[_minor(M, I, J) for J in subs] for I in subs]


def rho_star(M, l: int):
    """det(M) rho_{m-l}(tM)^(-1), expressed through complementary l-minors."""
    m = len(M)
    subs = list(itertools.combinations(range(m), m - l))
    out = []
    for I in subs:
        Ic = [x for x in range(m) if x not in I]
        row = []
        for J in subs:
            Jc = [x for x in range(m) if x not in J]
            sign = -1 if (sum(I) + sum(J)) % 2 else 1
            row.append(_minor(M, Ic, Jc) * sign)
        out.append(row)
    return out


def maass_c(j: int, alpha) -> Fraction:
    """Gamma_j(alpha + kappa_j) / Gamma_j(alpha + kappa_j - 1), kappa_j = (j+1)/2.

    The size of the gamma factor sets kappa; with kappa fixed at (m+1)/2
    the middle terms disagree with the symbolic calculus for m >= 2.
    """
    out = Fraction(1)
    for i in range(j):
        out *= Fraction(alpha) + kappa(j) - 1 - Fraction(i, 2)
    return out


def maass_r1_formula(T: HalfIntegralMatrix, k) -> Poly:
    """sum_l (-1)^(m-l) c_{m-l}(k+1-kappa) tr(t rho_{m-l}(R) rho*_l(T))."""
    m = T.m
    nv = len(r_vars(m))
    Rm = r_matrix(m)
    Tm = T.T
    total = Poly.zero(nv)
    alpha = Fraction(k) + 1 - kappa(m)
    for l in range(m + 1):
        A = rho(Rm, m - l)
        B = rho_star(Tm, l)
        tr = Poly.zero(nv)
        n = len(A)
        for a in range(n):
            for b in range(n):
                if B[a][b]:
                    tr = tr + A[a][b] * B[a][b]
        c = maass_c(m - l, alpha) * (-1) ** (m - l)
        total = total + tr.scale(c)
    return total


# --------------------------------------------------------------------------
# expansions

class SiegelExpansion:
    """sum_T det(R)^s_T P_T(R) q^T over T >= 0 with tr(T) <= trace_bound."""

    __slots__ = ("m", "weight", "character", "trace_bound", "terms")

    def __init__(self, m: int, weight, trace_bound: int, terms=None, character=None):
        self.m = m
        self.weight = weight
        self.character = character or DirichletCharacter.trivial()
        self.trace_bound = trace_bound
        clean = {}
        for T, c in dict(terms or {}).items():
            if not isinstance(T, HalfIntegralMatrix):
                T = HalfIntegralMatrix(T)
            if T.m != m:
                raise PreconditionError("index size does not match the degree")
            if T.trace() > trace_bound:
                raise PreconditionError(f"{T} lies beyond the trace bound {trace_bound}")
            if not isinstance(c, DetPowerCoefficient):
                c = DetPowerCoefficient.constant(m, c)
            if not c.is_zero():
                clean[T] = c
        self.terms = clean

    def __getitem__(self, T) -> DetPowerCoefficient:
        if not isinstance(T, HalfIntegralMatrix):
            T = HalfIntegralMatrix(T)
        if T.trace() > self.trace_bound:
            raise IndexError(f"{T} is beyond the trace bound {self.trace_bound}")
        return self.terms.get(T, DetPowerCoefficient.constant(self.m, 0))

    def is_zero(self) -> bool:
        return not self.terms

    def _with(self, terms, weight="same"):
        return SiegelExpansion(self.m, self.weight if weight == "same" else weight,
                               self.trace_bound, terms, self.character)

    def __add__(self, other):
        B = min(self.trace_bound, other.trace_bound)
        out = {T: c for T, c in self.terms.items() if T.trace() <= B}
        for T, c in other.terms.items():
            if T.trace() <= B:
                out[T] = out[T] + c if T in out else c
        return SiegelExpansion(self.m, self.weight, B, out, self.character)

    def scale(self, c):
        return self._with({T: v.scale(c) for T, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, SiegelExpansion):
            return NotImplemented
        if self.m != other.m:
            return False
        keys = set(self.terms) | set(other.terms)
        return all(self[T] == other[T] for T in keys)

    __hash__ = None

    def __repr__(self):
        return (f"SiegelExpansion(m={self.m}, weight={self.weight}, "
                f"trace_bound={self.trace_bound}, {len(self.terms)} terms)")

    def to_json(self) -> dict:
        terms = []
        for T in sorted(self.terms):
            c = self.terms[T]
            terms.append({"S": [list(r) for r in T.S], "s": encode_value(c.s),
                          "P": [[list(mono), encode_value(v)] for mono, v in c.P.sorted_terms()]})
        return {"kind": "siegel", "m": self.m, "weight": self.weight,
                "trace_bound": self.trace_bound, "terms": terms}

    @classmethod
    def from_json(cls, d: dict) -> "SiegelExpansion":
        m = d["m"]
        nv = len(r_vars(m))
        terms = {}
        for t in d["terms"]:
            P = Poly(nv, {tuple(mono): decode_value(v) for mono, v in t["P"]})
            terms[HalfIntegralMatrix(t["S"])] = DetPowerCoefficient(m, decode_value(t.get("s", 0)), P)
        return cls(m, d.get("weight"), d["trace_bound"], terms)


def shimura_delta_siegel(F: SiegelExpansion, k=None) -> SiegelExpansion:
    """det(R)^(k+1-kappa) Theta_m det(R)^(kappa-1-k) applied termwise."""
    k = F.weight if k is None else k
    out = {}
    for T, c in F.terms.items():
        # the outer det power cancels the inner one, so the exponent stays c.s
        P = theta_det(c.P, c.s + kappa(F.m) - 1 - k, T)
        if c.s != 0:
            raise VerificationError(f"residual det(R)^{c.s} at {T}")
        out[T] = DetPowerCoefficient(F.m, 0, P)
    return SiegelExpansion(F.m, k + 2, F.trace_bound, out, F.character)


# --------------------------------------------------------------------------
# Siegel-Eisenstein coefficients

def _check_eisenstein_range(m: int, k, r: int) -> None:
    if m % 2 == 0:
        raise PreconditionError("Siegel-Eisenstein coefficients need odd degree")
    if not 2 * k > m:
        raise PreconditionError(f"need 2k > m, got k={k}, m={m}")
    if not 0 <= r <= k - kappa(m):
        raise PreconditionError(f"need 0 <= r <= k - kappa, got r={r}")


def siegel_eisenstein_coeff(T: HalfIntegralMatrix, k: int, r: int = 0,
                            psi: DirichletCharacter | None = None, N: int = 1) -> DetPowerCoefficient:
    """prod_l M_l(T, psi(l) l^(2r-k)) det(T)^(k-2r-kappa) Q(R, T; k-2r, r)."""
    from .arith import prime_divisors
    from .siegel_series import evaluate_local, local_siegel_polynomial

    if not isinstance(T, HalfIntegralMatrix):
        T = HalfIntegralMatrix(T)
    m = T.m
    _check_eisenstein_range(m, k, r)
    psi = psi or DirichletCharacter.trivial()
    if not T.is_positive_definite():
        return DetPowerCoefficient.constant(m, 0)
    euler = Fraction(1)
    for ell in prime_divisors(T.det2()):
        if N % ell == 0:
            continue
        x = psi.value(ell) * Fraction(ell) ** (2 * r - k)
        euler *= evaluate_local(local_siegel_polynomial(T, ell), x)
    e = Fraction(k - 2 * r) - kappa(m)
    if e.denominator != 1:
        raise UnsupportedError("non-integral det(T) exponent")
    scalar = euler * T.det() ** int(e)
    Q = universal_q_polynomial(m, k - 2 * r, r, T)
    return DetPowerCoefficient(m, 0, Q.scale(scalar))


def siegel_eisenstein(m: int, k: int, trace_bound: int, r: int = 0,
                      psi: DirichletCharacter | None = None, N: int = 1) -> SiegelExpansion:
    _check_eisenstein_range(m, k, r)
    terms = {T: siegel_eisenstein_coeff(T, k, r, psi, N)
             for T in enumerate_T(m, trace_bound) if T.is_positive_definite()}
    return SiegelExpansion(m, k + 2 * r if r else k, trace_bound, terms, psi)


# --------------------------------------------------------------------------
# twists and restrictions

OFF_DIAGONAL = ((0, 1), (0, 2), (1, 2))


def boecherer_twist(F: SiegelExpansion, chi1, chi2, chi3, p: int | None = None,
                    prec: int | None = None) -> SiegelExpansion:
    """Multiply a(T) by chi1(S12) chi2(S13) chi3(S23), S = 2T."""
    if F.m != 3:
        raise PreconditionError("the twist is defined in degree 3")
    kw = {} if prec is None else {"prec": prec}
    out = {}
    for T, c in F.terms.items():
        f = 1
        for chi, (i, j) in zip((chi1, chi2, chi3), OFF_DIAGONAL):
            v = chi.value(T.S[i][j], p, **kw)
            f = f * v
            if f == 0:
                break
        if f != 0:
            out[T] = c.scale(f)
    return F._with(out)


def _route_diagonal(P: Poly, m: int, slots) -> Poly:
    """R_ii -> R_slots[i], off-diagonal R_ij -> 0."""
    n_out = max(slots) + 1
    images = []
    for a, b in r_vars(m):
        images.append(Poly.var(n_out, slots[a]) if a == b else Poly.zero(n_out))
    return P.substitute(images, n_out)


def ibukiyama_pullback(F: SiegelExpansion, k1: int, k2: int, k3: int, r: int = 0):
    """sum_T (t11 t22 t33)^lam (S12 S13 S23)^mu a(T) q1^t11 q2^t22 q3^t33."""
    from .triple import TripleExpansion

    if F.m != 3:
        raise PreconditionError("the pullback is defined in degree 3")
    if r:
        raise UnsupportedError("the pullback polynomial is only available for r = 0")
    lam, mu = k1 - k3, k1 - k2
    if not lam >= mu >= 0:
        raise PreconditionError(f"need k1-k3 >= k1-k2 >= 0, got {lam}, {mu}")
    out = {}
    for T, c in F.terms.items():
        if c.s != 0:
            raise PreconditionError(f"coefficient at {T} carries det(R)^{c.s}")
        d = tuple(T.S[i][i] // 2 for i in range(3))
        w = (d[0] * d[1] * d[2]) ** lam * (T.S[0][1] * T.S[0][2] * T.S[1][2]) ** mu
        if w == 0:
            continue
        P = _route_diagonal(c.P, 3, (0, 1, 2)).scale(w)
        out[d] = out[d] + P if d in out else P
    N = F.trace_bound // 3
    return TripleExpansion(out, (N, N, N), (k1, k2, k3))


def diagonal_restrict(F: SiegelExpansion, blocks):
    """Sum coefficients over off-block entries.

    Returns (terms, complete) where terms maps the tuple of diagonal-block
    2T matrices to the summed polynomial (off-block R set to zero, block R
    kept) and ``complete`` bounds the block traces for which every
    contributing T lies within the support bound.
    """
    blocks = list(blocks)
    if sum(blocks) != F.m or min(blocks, default=1) < 1:
        raise PreconditionError("block sizes must partition the degree")
    starts = [sum(blocks[:i]) for i in range(len(blocks))]
    block_of = [i for i, b in enumerate(blocks) for _ in range(b)]
    nv = len(r_vars(F.m))
    images = [r_var(F.m, a, b) if block_of[a] == block_of[b] else Poly.zero(nv)
              for a, b in r_vars(F.m)]
    out = {}
    for T, c in F.terms.items():
        key = tuple(tuple(tuple(T.S[a][b] for b in range(s, s + n)) for a in range(s, s + n))
                    for s, n in zip(starts, blocks))
        P = c.P.substitute(images, nv)
        cur = out.get(key)
        out[key] = DetPowerCoefficient(F.m, c.s, P) if cur is None else cur + DetPowerCoefficient(F.m, c.s, P)
    out = {k: v for k, v in out.items() if not v.is_zero()}
    return out, F.trace_bound
