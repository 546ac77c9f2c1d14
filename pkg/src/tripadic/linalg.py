"""Dense linear algebra over Q or capped Z_p with explicit zero tests.

Matrices are lists of rows.  Over Q every test is exact.  Over capped
p-adics an entry is treated as zero when its valuation reaches the
``threshold`` of the :class:`Domain`; each such decision is logged in
``Domain.dropped`` so callers can report it.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .arith import DEFAULT_PREC, INFINITY, PadicCapped
from .errors import PreconditionError, SpanError


class Domain:
    def __init__(self, p: int | None = None, threshold=None):
        self.p = p
        self.threshold = threshold
        self.dropped = []

    @classmethod
    def of(cls, *mats, threshold=None):
        for M in mats:
            for row in M:
                for x in row:
                    if isinstance(x, PadicCapped):
                        t = DEFAULT_PREC - 2 if threshold is None else threshold
                        return cls(x.p, t)
        return cls()

    @property
    def exact(self) -> bool:
        return self.p is None

    def is_zero(self, x) -> bool:
        if isinstance(x, PadicCapped):
            if x.is_zero():
                return True
            if self.threshold is not None and x.val >= self.threshold:
                self.dropped.append(x.val)
                return True
            return False
        return x == 0

    def pivot_rank(self, x):
        """Smaller is a better pivot; None for (treated) zero."""
        if self.is_zero(x):
            return None
        if isinstance(x, PadicCapped):
            return x.val
        return 0

    def coerce(self, x):
        if self.p is not None and not isinstance(x, PadicCapped):
            return PadicCapped.from_rational(x, self.p, DEFAULT_PREC)
        return x if isinstance(x, PadicCapped) else Fraction(x)


def zeros(n: int, m: int | None = None):
    return [[Fraction(0)] * (n if m is None else m) for _ in range(n)]


def identity(n: int):
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def matmul(A, B):
    n, k = shape(A)
    k2, m = shape(B)
    if k != k2:
        raise PreconditionError("matrix shapes do not match")
    return [[sum((A[i][t] * B[t][j] for t in range(k)), Fraction(0)) for j in range(m)]
            for i in range(n)]


def matvec(A, v):
    return [sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in A]


def add(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def scalar_shift(A, lam):
    """A - lam I."""
    return [[a - lam if i == j else a for j, a in enumerate(row)] for i, row in enumerate(A)]


def matpow(A, n: int):
    out = identity(len(A))
    for _ in range(n):
        out = matmul(out, A)
    return out


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def is_zero_matrix(A, dom: Domain | None = None) -> bool:
    dom = dom or Domain.of(A)
    return all(dom.is_zero(x) for row in A for x in row)


def rref(A, dom: Domain | None = None):
    """Reduced row echelon form and pivot columns.

    Pivots are chosen deterministically: the first row of least valuation
    in the column (the first nonzero row over Q).
    """
    dom = dom or Domain.of(A)
    M = [list(r) for r in A]
    n, m = shape(M)
    pivots = []
    row = 0
    for col in range(m):
        if row >= n:
            break
        best, best_rank = None, None
        for i in range(row, n):
            rk = dom.pivot_rank(M[i][col])
            if rk is not None and (best_rank is None or rk < best_rank):
                best, best_rank = i, rk
        if best is None:
            continue
        M[row], M[best] = M[best], M[row]
        inv = 1 / M[row][col]
        M[row] = [x * inv for x in M[row]]
        for i in range(n):
            if i != row and not dom.is_zero(M[i][col]):
                f = M[i][col]
                M[i] = [a - f * b for a, b in zip(M[i], M[row])]
        pivots.append(col)
        row += 1
    return M, pivots


def rank(A, dom: Domain | None = None) -> int:
    return len(rref(A, dom)[1])


def kernel(A, dom: Domain | None = None):
    """Basis of {x : A x = 0} as a list of column vectors."""
    n, m = shape(A)
    R, piv = rref(A, dom)
    free = [j for j in range(m) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * m
        v[f] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -R[r][f]
        basis.append(v)
    return basis


def image(A, dom: Domain | None = None):
    """Basis of the column space, taken from pivot columns of A."""
    _, piv = rref(A, dom)
    return [[row[j] for row in A] for j in piv]


def columns_to_matrix(cols, n: int):
    return [[c[i] for c in cols] for i in range(n)]


def solve(A, b, dom: Domain | None = None):
    """x with A x = b; SpanError listing offending rows if inconsistent."""
    dom = dom or Domain.of(A, [b])
    n, m = shape(A)
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    R, piv = rref(aug, dom)
    if m in piv:
        r = piv.index(m)
        raise SpanError("right-hand side is not in the span", offending=[r])
    x = [Fraction(0)] * m
    for r, pc in enumerate(piv):
        x[pc] = R[r][m]
    resid = [bi - yi for bi, yi in zip(b, matvec(A, x))]
    bad = [i for i, e in enumerate(resid) if not dom.is_zero(e)]
    if bad:
        raise SpanError("nonzero residual after solving", offending=bad)
    return x


def inverse(A, dom: Domain | None = None):
    n = len(A)
    aug = [list(A[i]) + identity(n)[i] for i in range(n)]
    R, piv = rref(aug, dom)
    if piv[:n] != list(range(n)):
        raise PreconditionError("matrix is singular")
    return [row[n:] for row in R]


def det(A, dom: Domain | None = None):
    """Determinant by elimination with the same pivot rule as :func:`rref`."""
    dom = dom or Domain.of(A)
    M = [list(r) for r in A]
    n = len(M)
    if n == 0:
        return Fraction(1)
    d = Fraction(1)
    for col in range(n):
        best, best_rank = None, None
        for i in range(col, n):
            rk = dom.pivot_rank(M[i][col])
            if rk is not None and (best_rank is None or rk < best_rank):
                best, best_rank = i, rk
        if best is None:
            return M[0][0] * 0 if dom.exact else PadicCapped.zero(dom.p)
        if best != col:
            M[col], M[best] = M[best], M[col]
            d = -d
        piv = M[col][col]
        d = d * piv
        inv = 1 / piv
        for i in range(col + 1, n):
            f = M[i][col] * inv
            M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    return d


def one_minus_x_det(A, dom: Domain | None = None):
    """Coefficients of det(I - X A), constant term first (principal minors)."""
    n = len(A)
    out = [Fraction(1)]
    for j in range(1, n + 1):
        s = 0
        for I in itertools.combinations(range(n), j):
            s = s + det([[A[a][b] for b in I] for a in I], dom)
        out.append(-s if j % 2 else s)
    return out


def valuation_threshold_report(dom: Domain) -> dict:
    return {"threshold": None if dom.threshold is None else dom.threshold,
            "treated_as_zero": len(dom.dropped),
            "max_valuation_dropped": max(dom.dropped, default=None)
            if all(v != INFINITY for v in dom.dropped) else None}
