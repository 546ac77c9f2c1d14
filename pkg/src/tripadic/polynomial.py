"""Sparse multivariate polynomials over a generic coefficient ring."""

from __future__ import annotations

from fractions import Fraction


def _is_zero(c) -> bool:
    return c == 0


class Poly:
    """A polynomial in ``nvars`` variables: dict exponent tuple -> coefficient.

    Coefficients can be ints, Fractions, PadicCapped or FamilyCoefficient;
    only ``+``, ``*`` and ``== 0`` are required of them.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        if terms:
            for mono, c in dict(terms).items():
                mono = tuple(mono)
                if len(mono) != nvars:
                    raise ValueError("monomial length mismatch")
                if not _is_zero(c):
                    clean[mono] = c
        self.terms = clean

    @classmethod
    def constant(cls, nvars: int, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def zero(cls, nvars: int):
        return cls(nvars)

    @classmethod
    def one(cls, nvars: int):
        return cls.constant(nvars, Fraction(1))

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1, c=Fraction(1)):
        mono = [0] * nvars
        mono[i] = power
        return cls(nvars, {tuple(mono): c})

    # queries --------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree(self, i: int) -> int:
        return max((m[i] for m in self.terms), default=-1)

    def coeff(self, mono):
        return self.terms.get(tuple(mono), 0)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def is_constant(self) -> bool:
        return all(sum(m) == 0 for m in self.terms)

    def sorted_terms(self):
        return sorted(self.terms.items())

    # arithmetic -------------------------------------------------------------
    def _lift(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if _is_zero(c):
            return Poly(self.nvars)
        return Poly(self.nvars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        other = self._lift(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                out[m] = out[m] + prod if m in out else prod
        return Poly(self.nvars, out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = Poly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and (self - other).is_zero()
        return (self - Poly.constant(self.nvars, other)).is_zero()

    __hash__ = None

    # calculus and substitution ---------------------------------------------
    def diff(self, i: int):
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return Poly(self.nvars, out)

    def scale_vars(self, factors):
        """Substitute x_i -> factors[i] * x_i."""
        out = {}
        for m, c in self.terms.items():
            f = c
            for e, s in zip(m, factors):
                if e:
                    f = f * s**e
            out[m] = f
        return Poly(self.nvars, out)

    def map_coeffs(self, fn):
        return Poly(self.nvars, {m: fn(c) for m, c in self.terms.items()})

    def evaluate(self, values):
        total = 0
        for m, c in self.terms.items():
            t = c
            for e, x in zip(m, values):
                if e:
                    t = t * x**e
            total = total + t
        return total

    def substitute(self, images, nvars: int):
        """Replace x_i by the Poly images[i] (in ``nvars`` variables)."""
        total = Poly(nvars)
        for m, c in self.terms.items():
            t = Poly.constant(nvars, c)
            for e, img in zip(m, images):
                if e:
                    t = t * img**e
            total = total + t
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*x^{m}" for m, c in self.sorted_terms())


def univariate(coeffs) -> Poly:
    return Poly(1, {(i,): c for i, c in enumerate(coeffs)})


def univariate_coeffs(f: Poly, length: int | None = None) -> list:
    d = f.degree(0)
    n = d + 1 if length is None else length
    return [f.coeff((i,)) for i in range(n)]
