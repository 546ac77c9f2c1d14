"""Dirichlet characters stored as exponent tables on fixed generators.

For each odd prime power q^e dividing the modulus the generator is the
smallest primitive root mod q^e; for 2^e (e >= 3) the generators are -1 and
5, for 4 it is -1.  All generators are lifted by CRT to be 1 at the other
prime-power components.  A character is the vector of exponents x_i with
chi(g_i) = zeta_{o_i}^{x_i}, where o_i is the order of g_i.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .arith import (DEFAULT_PREC, PadicCapped, divisors, factorint,
                    primitive_root, teichmuller_embed)
from .errors import PreconditionError, UnsupportedError


class RootOfUnity:
    """exp(2 pi i * e/d), kept as the reduced fraction e/d mod 1."""

    __slots__ = ("frac",)

    def __init__(self, e, d: int = 1):
        f = Fraction(e, d) if not isinstance(e, Fraction) else e / d
        self.frac = f - math.floor(f)

    @property
    def order(self) -> int:
        return self.frac.denominator

    @property
    def exponent(self) -> int:
        return self.frac.numerator

    def __mul__(self, other):
        if isinstance(other, RootOfUnity):
            return RootOfUnity(self.frac + other.frac)
        if other == 0:
            return 0
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int):
        return RootOfUnity(self.frac * n)

    def conj(self):
        return RootOfUnity(-self.frac)

    def as_rational(self) -> Fraction:
        if self.order == 1:
            return Fraction(1)
        if self.order == 2:
            return Fraction(-1)
        raise UnsupportedError(f"root of unity of order {self.order} is not rational")

    def embed(self, p: int, prec: int = DEFAULT_PREC) -> PadicCapped:
        return teichmuller_embed(self.exponent, self.order, p, prec)

    def __eq__(self, other):
        if isinstance(other, RootOfUnity):
            return self.frac == other.frac
        if other in (1, -1):
            return self.order <= 2 and self.as_rational() == other
        return False

    def __hash__(self):
        return hash(("zeta", self.frac))

    def __repr__(self):
        return f"zeta_{self.order}^{self.exponent}"


ONE = RootOfUnity(0)


@lru_cache(maxsize=None)
def unit_generators(n: int) -> tuple:
    """((generator mod n, order), ...) in a fixed deterministic order."""
    if n < 1:
        raise PreconditionError("modulus must be positive")
    gens = []
    for q, e in factorint(n):
        qe = q**e
        rest = n // qe
        local = []
        if q == 2:
            if e == 2:
                local = [(qe - 1, 2)]
            elif e >= 3:
                local = [(qe - 1, 2), (5, 2 ** (e - 2))]
        else:
            local = [(primitive_root(qe), qe // q * (q - 1))]
        for g, o in local:
            # CRT: x = g mod q^e, x = 1 mod rest
            if rest == 1:
                x = g % n
            else:
                x = (g * rest * pow(rest, -1, qe) + qe * pow(qe, -1, rest)) % n
            gens.append((x, o))
    return tuple(gens)


@lru_cache(maxsize=None)
def _log_table(n: int) -> dict:
    """Map each unit mod n to its exponent vector on :func:`unit_generators`."""
    gens = unit_generators(n)
    table = {1 % n: ()}
    for g, o in gens:
        new = {}
        for a, vec in table.items():
            x = a
            for m in range(o):
                new[x] = vec + (m,)
                x = x * g % n
        table = new
    return table


def discrete_log(a: int, n: int) -> tuple:
    if math.gcd(a, n) != 1:
        raise PreconditionError(f"{a} is not a unit mod {n}")
    return _log_table(n)[a % n]


class DirichletCharacter:
    __slots__ = ("modulus", "exponents", "_gens")

    def __init__(self, modulus: int, exponents=None):
        self.modulus = modulus
        self._gens = unit_generators(modulus)
        if exponents is None:
            exponents = [0] * len(self._gens)
        exponents = list(exponents)
        if len(exponents) != len(self._gens):
            raise PreconditionError(
                f"modulus {modulus} has {len(self._gens)} generators, got {len(exponents)} exponents")
        self.exponents = tuple(x % o for x, (_, o) in zip(exponents, self._gens))

    # constructors ---------------------------------------------------------
    @classmethod
    def trivial(cls, modulus: int = 1):
        return cls(modulus)

    @classmethod
    def from_spec(cls, spec: str):
        """Parse "mod:e1,e2,..."; "mod" alone means the trivial character."""
        try:
            mod, _, rest = spec.partition(":")
            modulus = int(mod)
            exps = [int(x) for x in rest.split(",") if x.strip()] if rest else None
        except ValueError as exc:
            raise PreconditionError(f"bad character spec {spec!r}") from exc
        if exps is None:
            return cls(modulus)
        return cls(modulus, exps)

    @classmethod
    def from_function(cls, modulus: int, fn):
        """Build from a function returning a RootOfUnity on the generators."""
        exps = []
        for g, o in unit_generators(modulus):
            z = fn(g)
            if not isinstance(z, RootOfUnity):
                z = RootOfUnity(0 if z == 1 else Fraction(1, 2))
            if (z.frac * o).denominator != 1:
                raise PreconditionError("value is not an o-th root of unity")
            exps.append(int(z.frac * o))
        return cls(modulus, exps)

    @classmethod
    def legendre(cls, p: int):
        """The quadratic character mod an odd prime p."""
        gens = unit_generators(p)
        return cls(p, [o // 2 for _, o in gens])

    # evaluation -----------------------------------------------------------
    def __call__(self, a: int):
        if math.gcd(a, self.modulus) != 1:
            return 0
        logs = discrete_log(a, self.modulus)
        f = sum((Fraction(x * m, o) for x, m, (_, o) in zip(self.exponents, logs, self._gens)),
                Fraction(0))
        return RootOfUnity(f)

    @property
    def order(self) -> int:
        d = 1
        for x, (_, o) in zip(self.exponents, self._gens):
            d = math.lcm(d, o // math.gcd(x, o))
        return d

    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.exponents)

    def value(self, a: int, p: int | None = None, prec: int = DEFAULT_PREC):
        """chi(a) as a rational (order <= 2) or embedded in Z_p."""
        z = self(a)
        if z == 0:
            return Fraction(0) if p is None else PadicCapped.zero(p, prec)
        if p is None:
            return z.as_rational()
        return z.embed(p, prec)

    @property
    def conductor(self) -> int:
        for f in divisors(self.modulus):
            if all(self(a) == ONE for a in range(1, self.modulus, f)
                   if math.gcd(a, self.modulus) == 1):
                return f
        return self.modulus

    def primitive(self):
        f = self.conductor
        return DirichletCharacter.from_function(f, lambda g: self(_lift_unit(g, f, self.modulus)))

    # algebra --------------------------------------------------------------
    def extend(self, modulus: int):
        """The character induced to a multiple of the modulus."""
        if modulus % self.modulus:
            raise PreconditionError(f"{modulus} is not a multiple of {self.modulus}")
        return DirichletCharacter.from_function(modulus, lambda g: self(g % self.modulus))

    def _common(self, other):
        if other.modulus == self.modulus:
            return self, other
        m = math.lcm(self.modulus, other.modulus)
        return self.extend(m), other.extend(m)

    def __mul__(self, other):
        a, b = self._common(other)
        return DirichletCharacter(a.modulus, [x + y for x, y in zip(a.exponents, b.exponents)])

    def conj(self):
        return DirichletCharacter(self.modulus, [-x for x in self.exponents])

    def __pow__(self, n: int):
        return DirichletCharacter(self.modulus, [n * x for x in self.exponents])

    def __eq__(self, other):
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        return self.modulus == other.modulus and self.exponents == other.exponents

    def __hash__(self):
        return hash((self.modulus, self.exponents))

    def __repr__(self):
        return f"DirichletCharacter({self.modulus}, {list(self.exponents)})"

    def spec(self) -> str:
        return f"{self.modulus}:" + ",".join(map(str, self.exponents))

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "exponents": list(self.exponents)}

    @classmethod
    def from_json(cls, d: dict):
        return cls(d["modulus"], d["exponents"])


def _lift_unit(g: int, f: int, n: int) -> int:
    """A unit mod n congruent to g mod f."""
    x = g % f if f > 1 else 1
    while math.gcd(x, n) != 1:
        x += f
    return x


def dirichlet_eval(chi: DirichletCharacter, a: int):
    """chi(a) as a :class:`RootOfUnity`, or the integer 0 when gcd(a, modulus) > 1."""
    return chi(a)


def is_complete(conductor: int, modulus: int) -> bool:
    """Whether the conductor has the same prime divisors as the modulus."""
    return {q for q, _ in factorint(conductor)} == {q for q, _ in factorint(modulus)}
