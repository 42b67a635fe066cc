"""Linear algebra over the chain rings O_E/pi^m.

These rings are local principal ideal rings; rank and solution-space
computations pivot on minimal-valuation entries instead of nonzero ones.
Vectors and matrices are lists of PadicElement (reduced mod pi^m on
output); "zero" means valuation >= m.
"""

from __future__ import annotations

import itertools

from loccon.padic import DomainError


def _val(x, m):
    v = x.pi_valuation()
    return m if v is None or v >= m else v


# -- matrices ---------------------------------------------------------------


def mat_mul(A, B):
    n, k, c = len(A), len(B), len(B[0])
    return [[sum((A[i][t] * B[t][j] for t in range(1, k)),
                 start=A[i][0] * B[0][j]) for j in range(c)] for i in range(n)]


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in row] for row in A]

def identity_matrix(ctx, d):
    return [[ctx.one() if i == j else ctx.zero() for j in range(d)] for i in range(d)]


def mat_reduce_mod(A, m):
    return [[a.reduce_mod(m) for a in row] for row in A]


def determinant(A):
    """Leibniz expansion; fine for the small dimensions used here."""
    d = len(A)
    ctx = A[0][0].context
    acc = ctx.zero()
    for perm in itertools.permutations(range(d)):
        sign = 1
        seen = list(perm)
        for i in range(d):
            for j in range(i + 1, d):
                if seen[i] > seen[j]:
                    sign = -sign
        term = ctx.from_int(sign)
        for i in range(d):
            term = term * A[i][perm[i]]
        acc = acc + term
    return acc


def mat_inverse(A):
    """Inverse of a matrix with unit determinant, by unit-pivot elimination."""
    d = len(A)
    ctx = A[0][0].context
    work = [row[:] for row in A]
    inv = identity_matrix(ctx, d)
    for col in range(d):
        piv = None
        for r in range(col, d):
            if work[r][col].is_unit():
                piv = r
                break
        if piv is None:
            raise DomainError("matrix is not invertible over the integral ring")
        work[col], work[piv] = work[piv], work[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        pinv = work[col][col].inverse()
        work[col] = [x * pinv for x in work[col]]
        inv[col] = [x * pinv for x in inv[col]]
        for r in range(d):
            if r != col:
                c = work[r][col]
                work[r] = [x - c * y for x, y in zip(work[r], work[col])]
                inv[r] = [x - c * y for x, y in zip(inv[r], inv[col])]
    return inv


def mat_is_zero_mod(A, m):
    return all(_val(a, m) >= m for row in A for a in row)


# -- solution modules -------------------------------------------------------


def nullspace_mod(rows, ctx, m):
    """Generators of {x : M x = 0} over O_E/pi^m for the matrix with the
    given rows.

    Returns a list of (generator vector, s) where the generator is pi^s
    times a unimodular column, so it has additive order pi^{m-s}; the
    solution module is the set of R-combinations of the generators.
    """
    if not rows:
        return []
    n, k = len(rows), len(rows[0])
    M = [[x for x in row] for row in rows]
    # column operations are tracked so solutions can be reconstructed:
    # M V = U D with V the accumulated column transform; x = V z, D z = 0.
    V = identity_matrix(ctx, k)
    diag = []
    r = 0
    while r < min(n, k):
        best = None
        for i in range(r, n):
            for j in range(r, k):
                v = _val(M[i][j], m)
                if v < m and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        a, pi_i, pi_j = best
        M[r], M[pi_i] = M[pi_i], M[r]
        for row in M:
            row[r], row[pi_j] = row[pi_j], row[r]
        for row in V:
            row[r], row[pi_j] = row[pi_j], row[r]
        # pivot = pi^a * unit; normalize the column ops via the unit
        pivot = M[r][r]
        unit_inv = pivot.shift_down(a).inverse()
        # clear the pivot column (row ops, untracked) and row (col ops, tracked)
        for i in range(n):
            if i == r:
                continue
            if _val(M[i][r], m) < m:
                # the pivot has minimal valuation, so the quotient is exact
                q = (M[i][r] * unit_inv).shift_down(a)
                M[i] = [x - q * y for x, y in zip(M[i], M[r])]
        for j in range(k):
            if j == r:
                continue
            if _val(M[r][j], m) < m:
                q = (M[r][j] * unit_inv).shift_down(a)
                for i in range(n):
                    M[i][j] = M[i][j] - q * M[i][r]
                for i in range(k):
                    V[i][j] = V[i][j] - q * V[i][r]
        diag.append(a)
        r += 1
    gens = []
    pw = ctx.pi_power
    for j in range(k):
        if j < len(diag):
            a = diag[j]
            if a == 0:
                continue  # z_j must be 0
            scale = pw(m - a)
            gen = [(V[i][j] * scale).reduce_mod(m) for i in range(k)]
            gens.append((gen, m - a))
        else:
            gen = [V[i][j].reduce_mod(m) for i in range(k)]
            gens.append((gen, 0))
    return gens


# -- span closure -----------------------------------------------------------


class ChainSpan:
    """Incremental span of vectors in (O_E/pi^m)^k, echelon with pi-power
    pivots; supports stabilization detection and fullness tests."""

    def __init__(self, ctx, m, k):
        self.ctx = ctx
        self.m = m
        self.k = k
        self.rows = {}  # pivot column -> (exponent, vector)

    def reduce(self, vec):
        vec = list(vec)
        changed = True
        while changed:
            changed = False
            for j in sorted(self.rows):
                a, row = self.rows[j]
                v = _val(vec[j], self.m)
                if v >= self.m:
                    continue
                if v >= a:
                    q = (vec[j] * row[j].shift_down(a).inverse()).shift_down(a)
                    vec = [x - q * y for x, y in zip(vec, row)]
                    changed = True
        return [x.reduce_mod(self.m) for x in vec]

    def add(self, vec):
        """Insert a vector; returns True when the span grew."""
        vec = self.reduce(vec)
        best = None
        for j in range(self.k):
            v = _val(vec[j], self.m)
            if v < self.m and (best is None or v < best[0]):
                best = (v, j)
        if best is None:
            return False
        a, j = best
        self.rows[j] = (a, vec)
        # re-reduce existing rows against the new one for stability
        for jj in list(self.rows):
            if jj == j:
                continue
            aa, row = self.rows.pop(jj)
            self.add_raw(row)
        return True

    def add_raw(self, vec):
        vec = self.reduce(vec)
        best = None
        for j in range(self.k):
            v = _val(vec[j], self.m)
            if v < self.m and (best is None or v < best[0]):
                best = (v, j)
        if best is None:
            return
        self.rows[best[1]] = (best[0], vec)

    def is_full(self):
        return (len(self.rows) == self.k
                and all(a == 0 for a, _ in self.rows.values()))

    def contains(self, vec):
        red = self.reduce(vec)
        return all(_val(x, self.m) >= self.m for x in red)

    def signature(self):
        """Hashable summary used for stabilization detection."""
        return tuple(sorted((j, a, tuple(tuple(x.coords) for x in (row,))[0])
                            for j, (a, row) in self.rows.items()))
