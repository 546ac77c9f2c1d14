"""Local Siegel series b_l(T, X) and the polynomial part M_l(T, X).

b_l(T, X) = sum over R in Sym_m(Q_l)/Sym_m(Z_l) of e(tr(TR)) X^(log_l nu(R)),
where nu(R) = [Z^m + R Z^m : Z^m].  Grouping R by the lattice Z^m + R Z^m and
inverting over the lattice poset gives

    b = prod_{i<m} (1 - l^i X) * sum_{L >= Z^m} X^(log_l [L:Z^m]) |A_L| [T _|_ A_L]

with A_L = {R : R Z^m in L}.  Writing L = U diag(l^-a) Z^m, A_L has order
l^(sum_{i<=j} min(a_i, a_j)) and the character R -> e(tr TR) is trivial on it
iff T' = tU T U has l^a_i | T'_ii and l^min(a_i,a_j) | 2T'_ij.  Lattices of
index l^n are enumerated through their duals in Hermite normal form.

For odd m, M_l = b / ((1 - X) prod_{i=1}^{(m-1)/2} (1 - l^(2i) X^2)).
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .arith import is_prime, ord_int
from .errors import OracleFailure, PreconditionError

MAX_ESCALATION = 4


def _val(x: int, ell: int, cap: int) -> int:
    return cap if x == 0 else min(ord_int(x, ell), cap)


def smith_mod(B, ell: int, K: int):
    """l-adic Smith form of an integer matrix modulo l^K.

    Returns (exponents a_i, Pinv) with Pinv * B * Q = diag(l^a_i) mod l^K for
    some Q in GL_m(Z_l); exponents equal to K mean "zero mod l^K".
    """
    mod = ell**K
    m = len(B)
    A = [[x % mod for x in row] for row in B]
    P = [[int(i == j) for j in range(m)] for i in range(m)]
    expo = []
    for t in range(m):
        best = None
        for i in range(t, m):
            for j in range(t, m):
                v = _val(A[i][j], ell, K)
                if best is None or v < best[0]:
                    best = (v, i, j)
        v, i, j = best
        if v >= K:
            expo.extend([K] * (m - t))
            break
        A[t], A[i] = A[i], A[t]
        P[t], P[i] = P[i], P[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        piv = A[t][t]
        unit = piv // ell**v
        inv = pow(unit, -1, mod)
        # normalize the pivot row to l^v
        A[t] = [x * inv % mod for x in A[t]]
        P[t] = [x * inv % mod for x in P[t]]
        for r in range(m):
            if r != t and A[r][t]:
                f = (A[r][t] // ell**v) % mod
                A[r] = [(x - f * y) % mod for x, y in zip(A[r], A[t])]
                P[r] = [(x - f * y) % mod for x, y in zip(P[r], P[t])]
        for c in range(t + 1, m):
            if A[t][c]:
                f = (A[t][c] // ell**v) % mod
                for r in range(m):
                    A[r][c] = (A[r][c] - f * A[r][t]) % mod
        expo.append(v)
    return expo, P


def hnf_sublattices(m: int, ell: int, n: int):
    """Upper-triangular Hermite bases of all sublattices of Z^m of index l^n."""
    for e in itertools.product(range(n + 1), repeat=m):
        if sum(e) != n:
            continue
        d = [ell**x for x in e]
        slots = [(i, j) for i in range(m) for j in range(i + 1, m)]
        ranges = [range(d[i]) for i, _ in slots]
        for vals in itertools.product(*ranges):
            B = [[0] * m for _ in range(m)]
            for i in range(m):
                B[i][i] = d[i]
            for (i, j), x in zip(slots, vals):
                B[i][j] = x
            yield B


@lru_cache(maxsize=None)
def _lattice_data(m: int, ell: int, n: int):
    """Smith data for every lattice L of index l^n, shared by all T.

    Returns (P, diag_mod, off_mod, weight): P stacks the transforms mod
    l^(n+2); T passes for L when (P 2T tP)_ii = 0 mod diag_mod and
    (P 2T tP)_ij = 0 mod off_mod; weight is |A_L|.
    """
    K = n + 2
    extra = 1 if ell == 2 else 0
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    Ps, dmods, omods, weights = [], [], [], []
    for B in hnf_sublattices(m, ell, n):
        a, P = smith_mod(B, ell, K)
        Ps.append(P)
        dmods.append([ell ** (a[i] + extra) for i in range(m)])
        omods.append([ell ** min(a[i], a[j]) for i, j in pairs])
        weights.append(ell ** sum(min(a[i], a[j]) for i in range(m) for j in range(i, m)))
    dtype = np.int64 if ell ** (3 * K) < 2**62 else object
    return (np.array(Ps, dtype=dtype).reshape(-1, m, m),
            np.array(dmods, dtype=dtype).reshape(-1, m),
            np.array(omods, dtype=dtype).reshape(len(Ps), len(pairs)),
            [int(w) for w in weights])


def _lattice_sum(S, ell: int, n: int) -> int:
    """sum over L of index l^n of |A_L| [e(tr TR) trivial on A_L]."""
    m = len(S)
    mod = ell ** (n + 2)
    P, dmod, omod, weights = _lattice_data(m, ell, n)
    S0 = np.array([[x % mod for x in row] for row in S], dtype=P.dtype)
    PS = np.einsum("nik,kj->nij", P, S0) % mod
    S2 = np.einsum("nik,njk->nij", PS, P) % mod
    ok = np.ones(len(weights), dtype=bool)
    for i in range(m):
        ok &= (S2[:, i, i] % dmod[:, i]) == 0
    for c, (i, j) in enumerate((i, j) for i in range(m) for j in range(i + 1, m)):
        ok &= (S2[:, i, j] % omod[:, c]) == 0
    return sum(w for w, good in zip(weights, ok.tolist()) if good)


def hermite_key(B) -> tuple:
    """Upper-triangular Hermite form of the column span of an integer matrix."""
    m = len(B)
    A = [list(map(int, row)) for row in B]

    def colop(dst, src, q):
        for r in range(m):
            A[r][dst] -= q * A[r][src]

    for r in range(m - 1, -1, -1):
        # gcd-combine row r over columns 0..r into column r
        for c in range(r):
            while A[r][c]:
                q = A[r][r] // A[r][c]
                colop(r, c, q)
                for row in A:
                    row[r], row[c] = row[c], row[r]
        if A[r][r] < 0:
            for row in A:
                row[r] = -row[r]
        d = A[r][r]
        for c in range(r + 1, m):
            colop(c, r, A[r][c] // d)
    return tuple(tuple(row) for row in A)


@lru_cache(maxsize=None)
def _subspace_lattices(m: int, ell: int):
    """(H, codim) with H a basis of {v : v mod l in W} for each proper subspace W."""
    out = []
    for d in range(m):
        for piv in itertools.combinations(range(m), d):
            slots = [(i, j) for i, p in enumerate(piv) for j in range(p + 1, m) if j not in piv]
            for vals in itertools.product(range(ell), repeat=len(slots)):
                rows = [[int(j == p) for j in range(m)] for p in piv]
                for (i, j), x in zip(slots, vals):
                    rows[i][j] = x
                cols = rows + [[ell * int(j == c) for j in range(m)] for c in range(m) if c not in piv]
                H = [[cols[c][r] for c in range(m)] for r in range(m)]
                out.append((tuple(map(tuple, H)), m - d))
    return tuple(out)


def _good_weight(S, B, ell: int, n: int):
    """|A_L| if e(tr TR) is trivial on A_L (L dual to span B, index l^n), else 0."""
    m = len(S)
    K = n + 2
    mod = ell**K
    a, P = smith_mod(B, ell, K)
    extra = 1 if ell == 2 else 0
    PS = [[sum(P[i][k] * S[k][j] for k in range(m)) % mod for j in range(m)] for i in range(m)]
    for i in range(m):
        d = sum(PS[i][k] * P[i][k] for k in range(m)) % mod
        if d % ell ** (a[i] + extra):
            return 0
        for j in range(i + 1, m):
            x = sum(PS[i][k] * P[j][k] for k in range(m)) % mod
            if x % ell ** min(a[i], a[j]):
                return 0
    return ell ** sum(min(a[i], a[j]) for i in range(m) for j in range(i, m))


def lattice_sums_pruned(S, ell: int, J: int):
    """sum_{[L:Z^m] = l^n} |A_L| [T _|_ A_L] for n <= J by walking good lattices.

    A_{lL + Z^m} is contained in A_L, so good lattices form a tree under
    L -> lL + Z^m rooted at Z^m; children of L lie between L and l^-1 L.
    Lattices are handled through their duals M (integer bases).
    """
    m = len(S)
    S = [list(r) for r in S]
    ident = tuple(tuple(int(i == j) for j in range(m)) for i in range(m))
    sums = [0] * (J + 1)
    sums[0] = 1
    seen = {ident}
    frontier = [(ident, 0)]
    subs = _subspace_lattices(m, ell)
    while frontier:
        nxt = []
        for B, n in frontier:
            for H, codim in subs:
                if n + codim > J:
                    continue
                C = [[sum(B[i][k] * H[k][j] for k in range(m)) for j in range(m)] for i in range(m)]
                key = hermite_key(C)
                if key in seen:
                    continue
                seen.add(key)
                w = _good_weight(S, key, ell, n + codim)
                if w:
                    sums[n + codim] += w
                    nxt.append((key, n + codim))
        frontier = nxt
    return sums


def _series_mul(a, b, J):
    out = [0] * (J + 1)
    for i, x in enumerate(a[: J + 1]):
        if x:
            for j, y in enumerate(b[: J + 1 - i]):
                out[i + j] += x * y
    return out


def _normalizer(m: int, ell: int, J: int):
    g = [1, -1]
    for i in range(1, (m - 1) // 2 + 1):
        g = _series_mul(g, [1, 0, -(ell ** (2 * i))], J)
    return (g + [0] * (J + 1))[: J + 1]


def _series_div(a, g, J):
    # g has constant term 1
    out = []
    for n in range(J + 1):
        s = a[n] - sum(g[i] * out[n - i] for i in range(1, min(n, len(g) - 1) + 1))
        out.append(s)
    return out


def siegel_series_coeffs(S, ell: int, J: int, method: str = "tree"):
    """Coefficients of b_l(T, X) through X^J, S = 2T.

    ``method`` "tree" walks only lattices that contribute; "hnf" sums over
    every sublattice of each index (slow, kept as a cross-check).
    """
    m = len(S)
    if not is_prime(ell):
        raise PreconditionError(f"{ell} is not prime")
    if method == "tree":
        lattice_sum = lattice_sums_pruned(S, ell, J)
    elif method == "hnf":
        lattice_sum = [_lattice_sum(S, ell, n) for n in range(J + 1)]
    else:
        raise PreconditionError(f"unknown method {method!r}")
    pre = [1]
    for i in range(m):
        pre = _series_mul(pre, [1, -(ell**i)], J)
    return _series_mul(pre + [0] * (J + 1), lattice_sum, J)


def _transform(S, U):
    m = len(S)
    US = [[sum(U[k][i] * S[k][j] for k in range(m)) for j in range(m)] for i in range(m)]
    return [[sum(US[i][k] * U[k][j] for k in range(m)) for j in range(m)] for i in range(m)]


def _reduce(S):
    """Greedy Minkowski-style reduction of a positive definite Gram matrix."""
    m = len(S)
    S = [list(r) for r in S]
    changed = True
    while changed:
        changed = False
        combos = [c for c in itertools.product((-1, 0, 1), repeat=m) if any(c)]
        for k in range(m):
            best = None
            for c in combos:
                if c[k] != 1:
                    continue
                U = [[int(i == j) for j in range(m)] for i in range(m)]
                for i in range(m):
                    U[i][k] = c[i]
                S2 = _transform(S, U)
                if S2[k][k] < S[k][k] and (best is None or S2[k][k] < best[k][k]):
                    best = S2
            if best is not None:
                S, changed = best, True
    return S


@lru_cache(maxsize=65536)
def reduced_key(S) -> tuple:
    """A representative of the GL_m(Z)-class of S used as a memo key.

    Equivalent forms usually, though not always, share it; the memo only
    saves work, so a split class costs time, not correctness.
    """
    m = len(S)
    R = _reduce(S)
    tr = sum(R[i][i] for i in range(m))
    best = None
    for perm in itertools.permutations(range(m)):
        for signs in itertools.product((1, -1), repeat=m):
            key = (tr,) + tuple(signs[i] * signs[j] * R[perm[i]][perm[j]]
                                for i in range(m) for j in range(m))
            if best is None or key < best:
                best = key
    return best


def local_siegel_polynomial(T, ell: int, j_max: int | None = None, escalate: bool = True):
    """M_l(T, X) as a list of integer coefficients (constant term first).

    ``T`` is a :class:`~tripadic.siegel.HalfIntegralMatrix` (or its 2T rows).
    The series is computed through X^j_max, j_max = ord_l(det 2T) + 2 by
    default; the quotient must vanish in its top two computed degrees.
    """
    S = tuple(tuple(r) for r in getattr(T, "S", T))
    key = reduced_key(S) if len(S) > 1 else (S[0][0], S[0][0])
    m = len(S)
    S = tuple(tuple(key[1 + i * m: 1 + (i + 1) * m]) for i in range(m)) if m > 1 else S
    return list(_local_polynomial(S, ell, j_max, escalate))


@lru_cache(maxsize=4096)
def _local_polynomial(S, ell, j_max, escalate):
    # S is already a reduced representative
    S = [list(r) for r in S]
    m = len(S)
    if m % 2 == 0:
        raise PreconditionError("local_siegel_polynomial needs odd degree")
    from .siegel import HalfIntegralMatrix
    H = HalfIntegralMatrix(S)
    if not H.is_positive_definite():
        raise PreconditionError("T must be positive definite")
    base = ord_int(H.det2(), ell) + 2 if j_max is None else j_max
    tries = MAX_ESCALATION + 1 if escalate else 1
    for extra in range(tries):
        J = base + extra
        b = siegel_series_coeffs(S, ell, J)
        F = _series_div(b, _normalizer(m, ell, J), J)
        if F[J] == 0 and F[J - 1] == 0:
            while len(F) > 1 and F[-1] == 0:
                F.pop()
            if F[0] != 1:
                raise OracleFailure(f"constant term {F[0]} != 1 for T={S}, l={ell}")
            return tuple(F)
    raise OracleFailure(f"Siegel series for T={S}, l={ell} did not stabilize by X^{J}")


def evaluate_local(F, x):
    acc = 0
    for c in reversed(F):
        acc = acc * x + c
    return acc


# --------------------------------------------------------------------------
# brute-force oracle

def nu_exponent(A, ell: int, E: int) -> int:
    """log_l nu(R) for R = A / l^E with A an integer symmetric matrix."""
    expo, _ = smith_mod(A, ell, E)
    return sum(E - c for c in expo if c < E)


@lru_cache(maxsize=None)
def _root_table(ell: int, E: int):
    import cmath
    mod = ell**E
    return [cmath.exp(2j * cmath.pi * t / mod) for t in range(mod)]


def siegel_series_bruteforce(S, ell: int, E: int):
    """b_l(T, X) through X^E by summing over all R in Sym(l^-E Z / Z).

    Character sums are accumulated by residue class of tr(TR) mod l^E so
    the total for each exponent is an exact integer combination of roots of
    unity; the result is rounded after verifying it is integral.
    """
    m = len(S)
    mod = ell**E
    pos = [(i, j) for i in range(m) for j in range(i, m)]
    counts = {}
    for vals in itertools.product(range(mod), repeat=len(pos)):
        A = [[0] * m for _ in range(m)]
        for (i, j), x in zip(pos, vals):
            A[i][j] = A[j][i] = x
        # tr(TR) * l^E = sum_i T_ii A_ii + sum_{i<j} S_ij A_ij
        tr = 0
        for (i, j), x in zip(pos, vals):
            tr += (S[i][i] // 2) * x if i == j else S[i][j] * x
        key = (nu_exponent(A, ell, E), tr % mod)
        counts[key] = counts.get(key, 0) + 1
    roots = _root_table(ell, E)
    out = [0] * (E + 1)
    for j in range(E + 1):
        z = sum(c * roots[t] for (e, t), c in counts.items() if e == j)
        r = round(z.real)
        if abs(z.real - r) > 1e-6 or abs(z.imag) > 1e-6:
            raise OracleFailure("brute-force character sum is not an integer")
        out[j] = r
    return out
