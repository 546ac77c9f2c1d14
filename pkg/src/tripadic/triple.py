"""Expansions in three variables q1, q2, q3 and the triple Atkin operator."""

from __future__ import annotations

import itertools
from fractions import Fraction

from .characters import DirichletCharacter
from .errors import PreconditionError
from .polynomial import Poly
from .qseries import QExpansion, v_operator
from .serialize import decode_value, encode_value, ring_of_all


def _poly3(c) -> Poly:
    if isinstance(c, Poly):
        if c.nvars != 3:
            raise PreconditionError("triple coefficients are polynomials in R1, R2, R3")
        return c
    return Poly.constant(3, c)


class TripleExpansion:
    """sum a(n1, n2, n3; R1, R2, R3) q1^n1 q2^n2 q3^n3, exact up to (N1, N2, N3)."""

    __slots__ = ("trunc", "weights", "characters", "coeffs")

    def __init__(self, coeffs, trunc, weights=None, characters=None):
        trunc = tuple(int(x) for x in trunc)
        if len(trunc) != 3 or min(trunc) < 0:
            raise PreconditionError("need three non-negative truncations")
        self.trunc = trunc
        self.weights = tuple(weights) if weights is not None else None
        self.characters = tuple(characters) if characters else (DirichletCharacter.trivial(),) * 3
        clean = {}
        for n, c in dict(coeffs).items():
            n = tuple(int(x) for x in n)
            if min(n) < 0:
                raise PreconditionError("negative q-exponent")
            if any(a > b for a, b in zip(n, trunc)):
                continue
            c = _poly3(c)
            if not c.is_zero():
                clean[n] = c
        self.coeffs = clean

    def __getitem__(self, n) -> Poly:
        n = tuple(n)
        if any(a > b for a, b in zip(n, self.trunc)):
            raise IndexError(f"{n} is beyond the truncation {self.trunc}")
        return self.coeffs.get(n, Poly.zero(3))

    def a(self, n):
        return self[n].constant_term()

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_holomorphic(self) -> bool:
        return all(c.is_constant() for c in self.coeffs.values())

    def truncate(self, trunc) -> "TripleExpansion":
        t = tuple(min(a, b) for a, b in zip(trunc, self.trunc))
        return TripleExpansion(self.coeffs, t, self.weights, self.characters)

    def __add__(self, other):
        t = tuple(min(a, b) for a, b in zip(self.trunc, other.trunc))
        out = dict(self.coeffs)
        for n, c in other.coeffs.items():
            out[n] = out[n] + c if n in out else c
        return TripleExpansion(out, t, self.weights, self.characters)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return TripleExpansion({n: v.scale(c) for n, v in self.coeffs.items()},
                               self.trunc, self.weights, self.characters)

    def __eq__(self, other):
        if not isinstance(other, TripleExpansion):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        head = ", ".join(f"{n}: {c!r}" for n, c in sorted(self.coeffs.items())[:4])
        return f"TripleExpansion(trunc={self.trunc}, weights={self.weights}, {{{head}}})"

    def ring(self) -> str:
        return ring_of_all(v for c in self.coeffs.values() for v in c.terms.values())

    def to_json(self) -> dict:
        return {
            "kind": "triple",
            "ring": self.ring(),
            "weights": list(self.weights) if self.weights is not None else None,
            "trunc": list(self.trunc),
            "coeffs": [[list(n), [[*m, encode_value(v)] for m, v in c.sorted_terms()]]
                       for n, c in sorted(self.coeffs.items())],
        }

    @classmethod
    def from_json(cls, d: dict) -> "TripleExpansion":
        if d.get("kind") != "triple":
            raise PreconditionError("not a triple document")
        coeffs = {tuple(n): Poly(3, {tuple(t[:3]): decode_value(t[3]) for t in terms})
                  for n, terms in d["coeffs"]}
        return cls(coeffs, d["trunc"], d.get("weights"))


def _embed(c: Poly, slot: int) -> Poly:
    """A polynomial in R moved to R_slot."""
    out = {}
    for (j,), v in c.terms.items():
        mono = [0, 0, 0]
        mono[slot] = j
        out[tuple(mono)] = v
    return Poly(3, out)


def tensor3(f1: QExpansion, f2: QExpansion, f3: QExpansion) -> TripleExpansion:
    fs = (f1, f2, f3)
    parts = [[(n, _embed(c, i)) for n, c in f.coeffs.items()] for i, f in enumerate(fs)]
    out = {}
    for (n1, c1), (n2, c2), (n3, c3) in itertools.product(*parts):
        out[(n1, n2, n3)] = c1 * c2 * c3
    weights = tuple(f.weight for f in fs)
    return TripleExpansion(out, tuple(f.trunc for f in fs),
                           None if None in weights else weights,
                           tuple(f.character for f in fs))


def atkin_u_triple(g: TripleExpansion, p: int) -> TripleExpansion:
    """a(n; R) -> a(p n; p R) in all three variables at once."""
    t = tuple(N // p for N in g.trunc)
    out = {}
    for n, c in g.coeffs.items():
        if all(x % p == 0 for x in n):
            m = tuple(x // p for x in n)
            if all(a <= b for a, b in zip(m, t)):
                out[m] = c.scale_vars([p, p, p])
    return TripleExpansion(out, t, g.weights, g.characters)


def v_triple(g: TripleExpansion, p: int) -> TripleExpansion:
    """Section of :func:`atkin_u_triple`: q_j -> q_j^p, R_j -> R_j / p."""
    inv = Fraction(1, p)
    out = {tuple(p * x for x in n): c.scale_vars([inv] * 3) for n, c in g.coeffs.items()}
    return TripleExpansion(out, tuple(N * p for N in g.trunc), g.weights, g.characters)


def tensor_v(f1, f2, f3, p: int) -> TripleExpansion:
    return tensor3(v_operator(f1, p), v_operator(f2, p), v_operator(f3, p))


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def triple_euler_factor(params1, params2, params3, chi_p=1, s=0):
    """prod over the 8 sign maps of (1 - chi(p) p^-s alpha1 alpha2 alpha3 X).

    Returns coefficients, constant term first.  Each ``params`` is a
    :class:`~tripadic.qseries.HeckeParameters` or a pair of roots.
    """
    roots = []
    for prm in (params1, params2, params3):
        roots.append((prm.alpha1, prm.alpha2) if hasattr(prm, "alpha1") else tuple(prm))
    p = next((prm.p for prm in (params1, params2, params3) if hasattr(prm, "p")), None)
    twist = chi_p
    if s:
        if p is None:
            raise PreconditionError("a shift s needs the prime")
        twist = twist * Fraction(p) ** (-s)
    poly = [1]
    for a1, a2, a3 in itertools.product(*roots):
        poly = _poly_mul(poly, [1, -(a1 * a2 * a3 * twist)])
    return poly
