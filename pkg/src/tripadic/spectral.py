"""Finite-rank models of U-operators and their spectral data.

A model is a basis of expansions together with the exact matrix of an
operator on their span.  Everything downstream (Fredholm determinant,
slopes, the lambda-projector, the linear form l) works on that matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .arith import INFINITY, padic_valuation
from .errors import AmbiguityError, PreconditionError, SpanError, VerificationError
from .serialize import encode_value


def coefficient_vector(f) -> dict:
    """Key -> value over every stored (index, R-monomial) of an expansion."""
    out = {}
    for n, c in f.coeffs.items():
        for mono, v in c.terms.items():
            out[(n, mono)] = v
    return out


def _in_window(key, trunc) -> bool:
    n = key[0]
    if isinstance(n, tuple):
        return all(a <= b for a, b in zip(n, trunc))
    return n <= trunc


@dataclass
class FiniteRankModel:
    basis: list
    matrix: list
    label: str = "U"
    basis_labels: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def to_json(self) -> dict:
        labels = self.basis_labels or [f"b{i}" for i in range(self.dim)]
        return {"basis_labels": labels, "operator": self.label,
                "rows": [[encode_value(x) for x in row] for row in self.matrix]}

    def combine(self, coords):
        """The expansion sum_i coords[i] basis[i]."""
        out = None
        for c, b in zip(coords, self.basis):
            term = b.scale(c)
            out = term if out is None else out + term
        return out


def coordinates(basis, f, trunc=None):
    """Coordinates of ``f`` in ``basis`` compared on indices up to ``trunc``."""
    trunc = f.trunc if trunc is None else trunc
    vecs = [coefficient_vector(b) for b in basis]
    target = coefficient_vector(f)
    keys = sorted({k for v in vecs + [target] for k in v if _in_window(k, trunc)})
    A = [[v.get(k, 0) for v in vecs] for k in keys]
    b = [target.get(k, 0) for k in keys]
    if la.rank(A) < len(basis):
        raise AmbiguityError("the basis is not independent on the compared indices")
    try:
        return la.solve(A, b)
    except SpanError as exc:
        raise SpanError("image leaves the span of the basis",
                        offending=[keys[i] for i in exc.offending]) from None


def operator_matrix(basis, operator, label: str = "U", trunc=None, basis_labels=None):
    """Matrix whose j-th column is operator(basis[j]) in the basis.

    Images are compared with the span on every index inside their own
    truncation (or ``trunc`` if smaller); any leftover coefficient raises
    :class:`SpanError` naming the offending (index, monomial) keys.
    """
    n = len(basis)
    cols = []
    for b in basis:
        img = operator(b)
        t = img.trunc
        if trunc is not None:
            t = min(t, trunc) if not isinstance(t, tuple) else tuple(min(a, c) for a, c in zip(t, trunc))
        cols.append(coordinates(basis, img, t))
    matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
    return FiniteRankModel(list(basis), matrix, label, list(basis_labels or []))


def model_from_matrix(matrix, label: str = "U"):
    return FiniteRankModel([], [list(r) for r in matrix], label)


def _matrix(M):
    return M.matrix if isinstance(M, FiniteRankModel) else M


def fredholm_det(M):
    """det(I - X U) as coefficients, constant term first."""
    return la.one_minus_x_det(_matrix(M))


def newton_polygon_slopes(poly, p: int):
    """Slopes of the lower convex hull of (i, v_p(c_i)), sorted, with multiplicity."""
    pts = [(i, padic_valuation(c, p)) for i, c in enumerate(poly)]
    pts = [(i, v) for i, v in pts if v != INFINITY]
    if not pts:
        raise PreconditionError("zero polynomial has no Newton polygon")
    if pts[0][0] != 0 or pts[0][1] != 0:
        raise PreconditionError("constant term must be a p-adic unit")
    hull = []
    for q in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or above the chord
            if (y2 - y1) * (q[0] - x1) >= (q[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(q)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        s = Fraction(y2 - y1) / (x2 - x1)
        slopes.extend([s] * (x2 - x1))
    return sorted(slopes)


# --------------------------------------------------------------------------
# the lambda-projector

@dataclass
class ProjectionReport:
    lam: object
    projector: list
    dimension: int
    nilpotency_index: int
    block_basis: list
    complement_basis: list
    threshold: dict

    def to_json(self) -> dict:
        return {"lambda": encode_value(self.lam),
                "projector": [[encode_value(x) for x in r] for r in self.projector],
                "dimension": self.dimension, "nilpotency_index": self.nilpotency_index,
                "threshold": self.threshold}


def lambda_projection(M, lam, threshold=None) -> ProjectionReport:
    """Projector onto ker (U - lam)^n along im (U - lam)^n, n = dim."""
    U = _matrix(M)
    n = len(U)
    dom = la.Domain.of(U, threshold=threshold)
    A = la.scalar_shift(U, lam)
    An = la.matpow(A, n)
    K = la.kernel(An, dom)
    Im = la.image(An, dom)
    if len(K) + len(Im) != n:
        raise VerificationError("generalized eigenspace and image do not span")
    if not K:
        P = la.zeros(n)
    else:
        C = la.columns_to_matrix(K + Im, n)
        D = [[Fraction(int(i == j and i < len(K))) for j in range(n)] for i in range(n)]
        P = la.matmul(la.matmul(C, D), la.inverse(C, dom))
    nil = 0
    if K:
        cur = la.columns_to_matrix(K, n)
        while not la.is_zero_matrix(cur, dom):
            cur = la.matmul(A, cur)
            nil += 1
    return ProjectionReport(lam, P, len(K), nil, K, Im, la.valuation_threshold_report(dom))


# --------------------------------------------------------------------------
# the linear form l

@dataclass
class LinearForm:
    row: list

    def __call__(self, v):
        return sum((a * x for a, x in zip(self.row, v)), Fraction(0))

    def on_expansion(self, model: FiniteRankModel, f, trunc=None):
        return self(coordinates(model.basis, f, trunc))

    def as_dual_combination(self, primal_values):
        """beta_j = l(primal_j); then l = sum_j beta_j l^j on the span."""
        return [self(v) for v in primal_values]


def linear_form_ell(M, lam, f0=0, dual=None, threshold=None) -> LinearForm:
    """The f0-coordinate functional on the lambda-block, zero on the rest.

    ``f0`` is a basis index or a coordinate vector; it must be a
    lambda-eigenvector.  ``dual`` may supply the functional on the block
    when that block has dimension > 1 or is not semisimple.
    """
    U = _matrix(M)
    n = len(U)
    dom = la.Domain.of(U, threshold=threshold)
    v0 = [Fraction(int(i == f0)) for i in range(n)] if isinstance(f0, int) else list(f0)
    if not all(dom.is_zero(x) for x in la.matvec(la.scalar_shift(U, lam), v0)):
        raise PreconditionError("f0 is not a lambda-eigenvector")
    rep = lambda_projection(U, lam, threshold)
    P = rep.projector
    if dual is not None:
        w = list(dual)
        w = [sum((w[i] * P[i][j] for i in range(n)), Fraction(0)) for j in range(n)]
        norm = sum((a * b for a, b in zip(w, v0)), Fraction(0))
        if dom.is_zero(norm):
            raise PreconditionError("supplied dual vector vanishes on f0")
        return LinearForm([x / norm for x in w])
    if rep.nilpotency_index > 1:
        raise AmbiguityError("lambda-block is not semisimple; supply a dual vector")
    if rep.dimension > 1:
        raise AmbiguityError("lambda-eigenspace has dimension > 1; supply a dual vector")
    j = next(i for i, x in enumerate(v0) if not dom.is_zero(x))
    return LinearForm([x / v0[j] for x in P[j]])


def representative(E, duals, primal):
    """sum_j l^j(E) primal_j after checking l^j(primal_i) = delta_ij.

    ``duals`` are callables on expansions (typically Fourier coefficient
    extractions); ``primal`` are expansions.  Returns (E~, coordinates).
    """
    n = len(primal)
    if len(duals) != n:
        raise PreconditionError("need as many dual functionals as primal vectors")
    for i, f in enumerate(primal):
        for j, d in enumerate(duals):
            if d(f) != int(i == j):
                raise PreconditionError(f"duality fails at (dual {j}, primal {i})")
    coords = [d(E) for d in duals]
    out = None
    for c, f in zip(coords, primal):
        term = f.scale(c)
        out = term if out is None else out + term
    return out, coords


def iterate_project(h, M, alpha, v: int, threshold=None):
    """U^-v pi_alpha(U^v h) computed on the alpha-block of the model."""
    U = _matrix(M)
    n = len(U)
    dom = la.Domain.of(U, threshold=threshold)
    if dom.is_zero(alpha):
        raise PreconditionError("alpha must be nonzero for U^v to invert on its block")
    rep = lambda_projection(U, alpha, threshold)
    if v == 0:
        return la.matvec(rep.projector, h)
    Uv = la.matpow(U, v)
    y = la.matvec(rep.projector, la.matvec(Uv, h))
    if rep.dimension == 0:
        return y
    K = la.columns_to_matrix(rep.block_basis, n)
    # restrict U^v to the block: U^v K = K B
    cols = [la.solve(K, [row[j] for row in la.matmul(Uv, K)], dom) for j in range(rep.dimension)]
    B = la.columns_to_matrix(cols, rep.dimension)
    if la.rank(B, dom) < rep.dimension:
        raise PreconditionError("U^v is not invertible on the alpha-block")
    c = la.solve(K, y, dom)
    z = la.solve(B, c, dom)
    return la.matvec(K, z)


def sup_norm(f, p: int) -> Fraction:
    """Gauss norm: max |c|_p over every stored coefficient."""
    best = Fraction(0)
    if hasattr(f, "coeffs"):
        vals = [v for c in f.coeffs.values() for v in c.terms.values()]
    elif isinstance(f, (list, tuple)):
        vals = list(f)
    else:
        vals = [f]
    for x in vals:
        v = padic_valuation(x, p)
        if v != INFINITY:
            best = max(best, Fraction(p) ** (-v))
    return best

