"""Exact coefficient rings.

Rationals are plain :class:`fractions.Fraction`.  p-adic numbers use a
capped relative precision model (:class:`PadicCapped`), and p-adic weight
families are truncated Taylor series around an integer weight
(:class:`FamilyCoefficient`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError, UnsupportedError

INFINITY = math.inf
DEFAULT_PREC = 20
DEFAULT_FAMILY_ORDER = 8
MIN_PRIME = 5


# --------------------------------------------------------------------------
# elementary number theory

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@lru_cache(maxsize=None)
def factorint(n: int) -> tuple:
    """Prime factorization of |n| as a sorted tuple of (prime, exponent)."""
    n = abs(n)
    out = []
    d = 2
    while d * d <= n:
        e = 0
        while n % d == 0:
            n //= d
            e += 1
        if e:
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list:
    return [q for q, _ in factorint(n)]


def divisors(n: int) -> list:
    ds = [1]
    for q, e in factorint(n):
        ds = [d * q**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def sigma(k: int, n: int) -> int:
    return sum(d**k for d in divisors(n))


def euler_phi(n: int) -> int:
    out = n
    for q, _ in factorint(n):
        out = out // q * (q - 1)
    return out


def ord_int(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("ord of zero")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not a rational: {x!r}")


def format_rational(x) -> str:
    x = as_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def check_prime(p: int, minimum: int = MIN_PRIME) -> None:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if p < minimum:
        raise PreconditionError(f"p = {p} < {minimum} is not supported")


# --------------------------------------------------------------------------
# capped p-adics

class PadicCapped:
    """An element p^val * unit of Q_p known to relative precision ``prec``.

    ``unit`` is an integer in [0, p^prec) prime to p.  Zero is the exact
    element with ``val = inf`` and ``unit = 0``.
    """

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p: int, val, unit: int, prec: int = DEFAULT_PREC):
        if prec < 1:
            raise PreconditionError("precision cap must be >= 1")
        self.p = p
        self.prec = prec
        if val == INFINITY or unit % p**prec == 0:
            self.val, self.unit = INFINITY, 0
            return
        unit %= p**prec
        if unit % p == 0:
            w = ord_int(unit, p)
            unit //= p**w
            val += w
            prec -= w
            if prec < 1:
                raise PreconditionError("unit loses all precision")
            self.prec = prec
            unit %= p**prec
        self.val = val
        self.unit = unit

    # construction ---------------------------------------------------------
    @classmethod
    def zero(cls, p, prec=DEFAULT_PREC):
        return cls(p, INFINITY, 0, prec)

    @classmethod
    def from_rational(cls, x, p: int, prec: int = DEFAULT_PREC) -> "PadicCapped":
        x = as_fraction(x)
        if x == 0:
            return cls.zero(p, prec)
        num, den = x.numerator, x.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        mod = p**prec
        return cls(p, v, num * pow(den, -1, mod) % mod, prec)

    def _coerce(self, other):
        if isinstance(other, PadicCapped):
            if other.p != self.p:
                raise PreconditionError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicCapped.from_rational(other, self.p, self.prec)
        return NotImplemented

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return self.val == INFINITY

    @property
    def abs_prec(self):
        return INFINITY if self.is_zero() else self.val + self.prec

    def residue(self, n: int) -> int:
        """The value modulo p^n; requires a p-integral value."""
        if self.is_zero():
            return 0
        if self.val < 0:
            raise PreconditionError("not p-integral")
        if n > self.abs_prec:
            raise PreconditionError("requested residue beyond precision")
        return self.unit * self.p**self.val % self.p**n

    def lift(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def norm(self) -> Fraction:
        """|x|_p as an exact rational."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.p) ** (-self.val)

    # arithmetic -----------------------------------------------------------
    def __neg__(self):
        if self.is_zero():
            return self
        return PadicCapped(self.p, self.val, -self.unit, self.prec)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        v = min(self.val, other.val)
        top = min(self.abs_prec, other.abs_prec)
        mod = self.p ** (top - v)
        s = (self.unit * self.p ** (self.val - v) + other.unit * self.p ** (other.val - v)) % mod
        if s == 0:
            return PadicCapped.zero(self.p, max(self.prec, other.prec))
        w = ord_int(s, self.p)
        return PadicCapped(self.p, v + w, s // self.p**w, top - v - w)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return PadicCapped.zero(self.p, max(self.prec, other.prec))
        prec = min(self.prec, other.prec)
        return PadicCapped(self.p, self.val + other.val, self.unit * other.unit, prec)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("p-adic zero")
        return PadicCapped(self.p, -self.val, pow(self.unit, -1, self.p**self.prec), self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicCapped(self.p, 0, 1, self.prec)
        if self.is_zero():
            return self
        return PadicCapped(self.p, self.val * n, pow(self.unit, n, self.p**self.prec), self.prec)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        diff = self - other
        return diff.is_zero()

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    def __repr__(self):
        if self.is_zero():
            return f"PadicCapped(p={self.p}, 0)"
        return f"PadicCapped(p={self.p}, val={self.val}, unit={self.unit}, prec={self.prec})"

    def to_json(self) -> dict:
        val = None if self.is_zero() else self.val
        return {"p": self.p, "val": val, "unit": self.unit, "prec": self.prec}

    @classmethod
    def from_json(cls, d: dict) -> "PadicCapped":
        val = INFINITY if d["val"] is None else d["val"]
        return cls(d["p"], val, d["unit"], d["prec"])


def padic_valuation(x, p: int):
    """ord_p(x) for an integer, rational or :class:`PadicCapped`; inf at zero."""
    if isinstance(x, PadicCapped):
        if x.p != p:
            raise PreconditionError("prime mismatch")
        return x.val
    if hasattr(x, "valuation"):
        return x.valuation(p)
    x = as_fraction(x)
    if x == 0:
        return INFINITY
    return ord_int(x.numerator, p) - ord_int(x.denominator, p)


def valuation_of(x, p: int):
    """Like :func:`padic_valuation` but also accepts plain zero-like values."""
    if isinstance(x, (int, Fraction)) or isinstance(x, PadicCapped):
        return padic_valuation(x, p)
    return padic_valuation(x, p)


# --------------------------------------------------------------------------
# roots of unity and logarithms

def teichmuller(a: int, p: int, prec: int = DEFAULT_PREC) -> PadicCapped:
    """The (p-1)-st root of unity congruent to a mod p."""
    check_prime(p)
    if a % p == 0:
        raise PreconditionError("Teichmuller lift of a non-unit")
    mod = p**prec
    x = a % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            return PadicCapped(p, 0, x, prec)
        x = y


@lru_cache(maxsize=None)
def primitive_root(n: int) -> int:
    """Smallest generator of (Z/nZ)^*, for n = 2, 4, q^e, 2q^e."""
    phi = euler_phi(n)
    qs = prime_divisors(phi)
    for g in range(1, n):
        if math.gcd(g, n) != 1:
            continue
        if all(pow(g, phi // q, n) != 1 for q in qs):
            return g
    if n <= 2:
        return 1
    raise PreconditionError(f"(Z/{n})^* is not cyclic")


def root_of_unity(d: int, p: int, prec: int = DEFAULT_PREC) -> PadicCapped:
    """The fixed primitive d-th root of unity of Z_p, omega(g)^((p-1)/d)."""
    check_prime(p)
    if (p - 1) % d:
        raise UnsupportedError(f"order {d} does not divide p - 1 = {p - 1}")
    return teichmuller(primitive_root(p), p, prec) ** ((p - 1) // d)


def teichmuller_embed(e: int, d: int, p: int, prec: int = DEFAULT_PREC) -> PadicCapped:
    """Embed zeta_d^e into Z_p (requires d | p - 1)."""
    return root_of_unity(d, p, prec) ** (e % d)


def padic_log(x, p: int | None = None, prec: int = DEFAULT_PREC) -> PadicCapped:
    """Truncated series log(1 + u) for x = 1 + u, u divisible by p."""
    if not isinstance(x, PadicCapped):
        if p is None:
            raise PreconditionError("prime required")
        x = PadicCapped.from_rational(x, p, prec)
    p = x.p
    check_prime(p)
    if x.is_zero() or x.val != 0 or x.unit % p != 1:
        raise PreconditionError("padic_log needs x = 1 mod p")
    prec = x.prec
    u = x - 1
    if u.is_zero():
        return PadicCapped.zero(p, prec)
    # v(u^j / j) >= j - log_p(j) exceeds prec for j past this bound
    total = PadicCapped.zero(p, prec)
    power = PadicCapped(p, 0, 1, prec + 8)
    u_hi = PadicCapped(p, u.val, u.unit, prec + 8)
    j = 1
    while True:
        power = power * u_hi
        if j * u.val - math.log(j, p) > prec + 1 and j > 1:
            break
        term = power / j
        total = total + (term if j % 2 else -term)
        j += 1
    return PadicCapped(p, total.val, total.unit, min(total.prec, prec)) if not total.is_zero() else total


def padic_exp(x: PadicCapped, prec: int | None = None) -> PadicCapped:
    """exp(x) for v(x) >= 1 (p odd)."""
    p = x.p
    prec = prec or x.prec
    one = PadicCapped(p, 0, 1, prec)
    if x.is_zero():
        return one
    if x.val < 1:
        raise PreconditionError("exp diverges")
    total = one
    term = one
    j = 1
    while True:
        term = term * x / j
        if term.is_zero() or term.val >= prec:
            break
        total = total + term
        j += 1
    return total


# --------------------------------------------------------------------------
# weight families

class FamilyCoefficient:
    """c_0 + c_1 (k - k0) + ... + c_D (k - k0)^D modulo (k - k0)^(D + 1)."""

    __slots__ = ("k0", "coeffs")

    def __init__(self, k0: int, coeffs):
        self.k0 = k0
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise PreconditionError("empty family")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def constant(cls, k0, c, order=DEFAULT_FAMILY_ORDER):
        return cls(k0, [c] + [0] * order)

    @classmethod
    def variable(cls, k0, order=DEFAULT_FAMILY_ORDER):
        """The family k - k0."""
        return cls(k0, [0, 1] + [0] * (order - 1))

    def _coerce(self, other):
        if isinstance(other, FamilyCoefficient):
            if other.k0 != self.k0:
                raise PreconditionError("families with different base points")
            return other
        if isinstance(other, (int, Fraction, PadicCapped)):
            return FamilyCoefficient(self.k0, [other] + [0] * self.order)
        return NotImplemented

    def _trim(self, other):
        D = min(self.order, other.order)
        return D, self.coeffs[: D + 1], other.coeffs[: D + 1]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        D, a, b = self._trim(other)
        return FamilyCoefficient(self.k0, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return FamilyCoefficient(self.k0, [-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicCapped)):
            return FamilyCoefficient(self.k0, [c * other for c in self.coeffs])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        D, a, b = self._trim(other)
        out = [0] * (D + 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j in range(D + 1 - i):
                out[i + j] = out[i + j] + x * b[j]
        return FamilyCoefficient(self.k0, out)

    __rmul__ = __mul__

    def inverse(self):
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("family with vanishing constant term")
        inv0 = 1 / c0 if not isinstance(c0, int) else Fraction(1, c0)
        out = [inv0]
        for n in range(1, self.order + 1):
            s = 0
            for i in range(1, n + 1):
                s = s + self.coeffs[i] * out[n - i]
            out.append(-s * inv0)
        return FamilyCoefficient(self.k0, out)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicCapped)):
            inv = Fraction(1, other) if isinstance(other, int) else 1 / other
            return self * inv
        other = self._coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        out = FamilyCoefficient.constant(self.k0, 1, self.order)
        base = self
        if n < 0:
            base, n = self.inverse(), -n
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        D, a, b = self._trim(other)
        return all(x == y for x, y in zip(a, b))

    __hash__ = None

    def valuation(self, p: int):
        return min(padic_valuation(c, p) for c in self.coeffs)

    def __call__(self, k: int):
        return family_eval(self, k)

    def __repr__(self):
        return f"FamilyCoefficient(k0={self.k0}, {list(self.coeffs)!r})"


def family_eval(f, k: int):
    """Evaluate a family at integer weight k by Horner's rule in (k - k0)."""
    if not isinstance(f, FamilyCoefficient):
        return f
    t = k - f.k0
    acc = f.coeffs[-1]
    for c in reversed(f.coeffs[:-1]):
        acc = acc * t + c
    return acc


def power_family(d: int, k0: int, p: int, order: int = DEFAULT_FAMILY_ORDER,
                 prec: int = DEFAULT_PREC) -> FamilyCoefficient:
    """The family k -> d^(k - 1) for p not dividing d.

    d^(k-1) = omega(d)^(k0-1) <d>^(k0-1) exp((k - k0) log <d>) on the sector
    k = k0 mod (p - 1); the Taylor series is cut at degree ``order``.
    """
    check_prime(p)
    if d % p == 0:
        raise PreconditionError("d must be prime to p")
    base = PadicCapped.from_rational(d, p, prec) ** (k0 - 1)
    w = teichmuller(d, p, prec)
    bracket = PadicCapped.from_rational(d, p, prec) / w
    L = padic_log(bracket)
    coeffs = []
    term = base
    for j in range(order + 1):
        if j:
            term = term * L / j
        coeffs.append(term)
    return FamilyCoefficient(k0, coeffs)


def padic_sqrt(x: PadicCapped) -> PadicCapped:
    """A square root of x in Z_p (p odd), or raise if none exists."""
    p = x.p
    if x.is_zero():
        return x
    if x.val % 2:
        raise PreconditionError("odd valuation: not a square")
    u = x.unit % p
    if pow(u, (p - 1) // 2, p) != 1:
        raise PreconditionError("unit part is not a square mod p")
    r = next(t for t in range(1, p) if t * t % p == u)
    mod = p**x.prec
    y = r
    k = 1
    while k < x.prec:
        k = min(2 * k, x.prec)
        m = p**k
        y = (y - (y * y - x.unit) * pow(2 * y, -1, m)) % m
    return PadicCapped(p, x.val // 2, y % mod, x.prec)


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with the convention B_1 = -1/2."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return B[n]
