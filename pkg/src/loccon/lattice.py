"""Integral representations: stable lattices, mod-pi^m reduction, module
isomorphism over chain rings, semisimplification mod pi, and the
trace-congruence isomorphism harness."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from loccon.chainring import (
    ChainSpan,
    determinant,
    identity_matrix,
    mat_inverse,
    mat_mul,
    nullspace_mod,
)
from loccon.padic import DomainError, PadicNumber, PrecisionError


class IntegralRep:
    """d x d matrices over O_E with unit determinant, one per generator."""

    def __init__(self, group, dim, context, gen_images):
        self.group = group
        self.dim = dim
        self.context = context
        self.gen_images = dict(gen_images)
        self._inv_cache = {}
        for name, M in self.gen_images.items():
            if not determinant(M).is_unit():
                raise DomainError(f"generator {name!r} has non-unit determinant")
        if group.kind == "finite":
            self._check_relations()

    def _check_relations(self):
        words = self.group.element_words()
        mats = {el: self.matrix_of_word(w) for el, w in words.items()}
        for el in self.group.elements():
            for gi, gel in enumerate(self.group.gen_elements):
                prod = mat_mul(mats[el], self.gen_images[self.group.generators[gi]])
                target = mats[self.group.multiply(el, gel)]
                for r1, r2 in zip(prod, target):
                    for x, y in zip(r1, r2):
                        if (x - y).pi_valuation() is not None:
                            raise DomainError("matrices violate the group relations")

    def _gen_matrix(self, gi, sign):
        if sign == 1:
            return self.gen_images[self.group.generators[gi]]
        if (gi, -1) not in self._inv_cache:
            self._inv_cache[(gi, -1)] = mat_inverse(
                self.gen_images[self.group.generators[gi]])
        return self._inv_cache[(gi, -1)]

    def matrix_of_word(self, word):
        out = identity_matrix(self.context, self.dim)
        for gi, sign in word:
            out = mat_mul(out, self._gen_matrix(gi, sign))
        return out

    def trace_of_word(self, word):
        M = self.matrix_of_word(word)
        t = self.context.zero()
        for i in range(self.dim):
            t = t + M[i][i]
        return t


class ResidueRep:
    """Generator matrices over the chain ring O_E/pi^m."""

    def __init__(self, group, dim, context, modulus, gen_images):
        self.group = group
        self.dim = dim
        self.context = context
        self.modulus = modulus
        self.gen_images = {
            name: [[x.reduce_mod(modulus) for x in row] for row in M]
            for name, M in gen_images.items()}
        for name, M in self.gen_images.items():
            if not determinant(M).is_unit():
                raise DomainError(f"generator {name!r} is singular mod pi")
        self._inv_cache = {}

    def _gen_matrix(self, gi, sign):
        if sign == 1:
            return self.gen_images[self.group.generators[gi]]
        if (gi, -1) not in self._inv_cache:
            inv = mat_inverse(self.gen_images[self.group.generators[gi]])
            self._inv_cache[(gi, -1)] = [
                [x.reduce_mod(self.modulus) for x in row] for row in inv]
        return self._inv_cache[(gi, -1)]

    def matrix_of_word(self, word):
        out = identity_matrix(self.context, self.dim)
        for gi, sign in word:
            out = mat_mul(out, self._gen_matrix(gi, sign))
        return [[x.reduce_mod(self.modulus) for x in row] for row in out]

    def trace_of_word(self, word):
        M = self.matrix_of_word(word)
        t = self.context.zero()
        for i in range(self.dim):
            t = t + M[i][i]
        return t.reduce_mod(self.modulus)


def reduce_rep_mod(rep, m):
    """Entrywise reduction of an IntegralRep (functorial in products)."""
    if m > min(x.known_precision for M in rep.gen_images.values()
               for row in M for x in row):
        raise PrecisionError("not enough precision for this reduction")
    return ResidueRep(rep.group, rep.dim, rep.context, m, rep.gen_images)


# -- isomorphism over chain rings -------------------------------------------


@dataclass
class IsoResult:
    status: str  # "isomorphic" | "not_isomorphic" | "inconclusive"
    intertwiner: list | None
    certificate: str


def intertwiner_space(a, b):
    """Generators of {X : X a(g) = b(g) X for all g} over O_E/pi^m."""
    if (a.group, a.dim, a.modulus) != (b.group, b.dim, b.modulus) \
            or a.context != b.context:
        raise DomainError("representations are not comparable")
    d, m, ctx = a.dim, a.modulus, a.context
    rows = []
    for name in a.group.generators:
        A = a.gen_images[name]
        B = b.gen_images[name]
        # (X A - B X)[i][j] = 0; unknowns X[r][s] flattened row-major
        for i in range(d):
            for j in range(d):
                row = [ctx.zero()] * (d * d)
                for s in range(d):
                    row[i * d + s] = row[i * d + s] + A[s][j]
                for r in range(d):
                    row[r * d + j] = row[r * d + j] - B[i][r]
                rows.append([x.reduce_mod(m) for x in row])
    return nullspace_mod(rows, ctx, m)


def iso_mod(a, b, word_cap=3, search_cap=1 << 20, rand_budget=2000, seed=0):
    """Module isomorphism test over O_E/pi^m.

    An invertible intertwiner exists iff some residue-field combination of
    the solution-space generators is invertible mod pi, so the search over
    the mod-pi span is a complete decision procedure when it is enumerable.
    """
    gens = intertwiner_space(a, b)
    unit_gens = [g for g, s in gens if s == 0]
    d, m, ctx = a.dim, a.modulus, a.context
    if not unit_gens:
        return IsoResult("not_isomorphic", None,
                         "solution module is contained in pi * M_d")
    q = ctx.residue_field_size
    t = len(unit_gens)
    if q ** t <= search_cap:
        for combo in itertools.product(range(q), repeat=t):
            if not any(combo):
                continue
            X = _combine(unit_gens, combo, ctx, d)
            if determinant(X).is_unit():
                X = [[x.reduce_mod(m) for x in row] for row in X]
                _assert_intertwines(a, b, X)
                return IsoResult("isomorphic", X, "explicit intertwiner")
        return IsoResult("not_isomorphic", None,
                         "no invertible element in the mod-pi solution span "
                         "(exhaustive)")
    rng = random.Random(seed)
    for _ in range(rand_budget):
        combo = [rng.randrange(q) for _ in range(t)]
        if not any(combo):
            continue
        X = _combine(unit_gens, combo, ctx, d)
        if determinant(X).is_unit():
            X = [[x.reduce_mod(m) for x in row] for row in X]
            _assert_intertwines(a, b, X)
            return IsoResult("isomorphic", X, "explicit intertwiner")
    return IsoResult("inconclusive", None,
                     f"randomized search exhausted ({rand_budget} trials) with a "
                     "nonzero solution space")


def _combine(unit_gens, combo, ctx, d):
    X = [[ctx.zero()] * d for _ in range(d)]
    for c, g in zip(combo, unit_gens):
        if c == 0:
            continue
        cc = ctx.from_int(c)
        for i in range(d):
            for j in range(d):
                X[i][j] = X[i][j] + cc * g[i * d + j]
    return X


def _assert_intertwines(a, b, X):
    m = a.modulus
    for name in a.group.generators:
        L = mat_mul(X, a.gen_images[name])
        R = mat_mul(b.gen_images[name], X)
        for r1, r2 in zip(L, R):
            for x, y in zip(r1, r2):
                v = (x - y).pi_valuation()
                assert v is None or v >= m, "intertwiner verification failed"


# -- semisimplification mod pi ----------------------------------------------


def _res_zero(x):
    v = x.pi_valuation()
    return v is None or v >= 1


def _echelon_insert(basis, vec, d):
    """Insert into a residue-field row-echelon basis; True when dim grew."""
    vec = list(vec)
    for piv, row in basis.items():
        if not _res_zero(vec[piv]):
            c = vec[piv] * row[piv].inverse()
            vec = [x - c * y for x, y in zip(vec, row)]
    for j in range(d):
        if not _res_zero(vec[j]):
            basis[j] = vec
            return True
    return False


def _spin(vecs, mats, d):
    basis = {}
    frontier = []
    for v in vecs:
        if _echelon_insert(basis, v, d):
            frontier.append(v)
    while frontier:
        nxt = []
        for v in frontier:
            for M in mats:
                w = [sum((M[i][t] * v[t] for t in range(1, d)),
                         start=M[i][0] * v[0]) for i in range(d)]
                if _echelon_insert(basis, list(w), d):
                    nxt.append(w)
        frontier = nxt
    return basis


def _residue_scalars(ctx):
    for r in ctx.enumerate_residues(1):
        yield r


def _find_proper_submodule(mats, d, ctx, line_budget=300000, rand_budget=200,
                           seed=0):
    q = ctx.residue_field_size
    n_lines = (q ** d - 1) // (q - 1)
    if n_lines <= line_budget:
        # exhaustive over projective representatives: complete decision
        for vec in _projective_vectors(ctx, d):
            basis = _spin([vec], mats, d)
            if 0 < len(basis) < d:
                return basis, True
        return None, True
    rng = random.Random(seed)
    scalars = [r for r in _residue_scalars(ctx)]
    for _ in range(rand_budget):
        vec = [scalars[rng.randrange(q)] for _ in range(d)]
        if all(_res_zero(x) for x in vec):
            continue
        basis = _spin([vec], mats, d)
        if 0 < len(basis) < d:
            return basis, True
    return None, False


def _projective_vectors(ctx, d):
    scalars = list(_residue_scalars(ctx))
    nonzero = [s for s in scalars if not _res_zero(s)]
    one = ctx.one()
    for lead in range(d):
        for tail in itertools.product(scalars, repeat=d - lead - 1):
            yield [ctx.zero()] * lead + [one] + list(tail)


def semisimplify_mod_p(r, word_cap=4, seed=0):
    """Composition factors of a residue representation (modulus 1).

    Returns {"factors": [{dim, traces}], "complete": bool}; traces are the
    residue coordinates of the factor's trace on a fixed word list, which
    distinguishes non-isomorphic factors.
    """
    if r.modulus != 1:
        raise DomainError("semisimplification is defined at modulus 1")
    ctx = r.context
    if r.group.kind == "finite":
        words = list(r.group.element_words().values())
    else:
        words = r.group.words_up_to(word_cap)
    gen_mats = [r._gen_matrix(gi, s) for gi in range(len(r.group.generators))
                for s in (1, -1)]

    factors = []
    complete = True

    def recurse(mats, d):
        nonlocal complete
        if d == 0:
            return
        sub, certain = _find_proper_submodule(mats, d, ctx, seed=seed)
        if sub is None:
            if not certain:
                complete = False
            factors.append(_factor_record(mats, d, r.group, words, ctx))
            return
        sub_rows = [sub[j] for j in sorted(sub)]
        k = len(sub_rows)
        P = _extend_basis(sub_rows, d, ctx)
        Pinv = mat_inverse(P)
        sub_mats, quo_mats = [], []
        for M in mats:
            C = mat_mul(mat_mul(Pinv, M), P)
            sub_mats.append([[C[i][j] for j in range(k)] for i in range(k)])
            quo_mats.append([[C[i][j] for j in range(k, d)] for i in range(k, d)])
        recurse(sub_mats, k)
        recurse(quo_mats, d - k)

    recurse(gen_mats, r.dim)
    factors.sort(key=lambda f: (f["dim"], f["traces"]))
    return {"factors": factors, "complete": complete}


def _extend_basis(rows, d, ctx):
    """Invertible matrix whose first columns are the given row vectors."""
    basis = {}
    cols = []
    for v in rows:
        if _echelon_insert(basis, list(v), d):
            cols.append(list(v))
    for j in range(d):
        e = [ctx.one() if i == j else ctx.zero() for i in range(d)]
        if _echelon_insert(basis, list(e), d):
            cols.append(e)
    # columns of P are the chosen vectors
    return [[cols[j][i] for j in range(d)] for i in range(d)]


def _factor_record(mats, d, group, words, ctx):
    # mats alternate generator, inverse in the order produced above
    gen_lookup = {}
    idx = 0
    for gi in range(len(group.generators)):
        gen_lookup[(gi, 1)] = mats[idx]
        gen_lookup[(gi, -1)] = mats[idx + 1]
        idx += 2
    traces = []
    for w in words:
        M = identity_matrix(ctx, d)
        for let in w:
            M = mat_mul(M, gen_lookup[let])
        t = ctx.zero()
        for i in range(d):
            t = t + M[i][i]
        traces.append(tuple(t.reduce_mod(1).coords))
    return {"dim": d, "traces": tuple(traces)}


# -- stable lattices --------------------------------------------------------


def stable_lattice(group, dim, context, gen_images, rounds_budget=40,
                   denom_budget=60):
    """Basis change making all generator images integral.

    ``gen_images`` maps generators to matrices of PadicNumber (possibly
    non-integral).  Returns (IntegralRep, certificate C) with C^{-1} rho C
    integral, or raises DomainError("unbounded ...") when the orbit lattice
    fails to stabilize within the budget.
    """
    ctx = context
    d = dim
    mats = {}
    for name, M in gen_images.items():
        mats[name] = [[x if isinstance(x, PadicNumber) else PadicNumber(x)
                       for x in row] for row in M]
    inv_mats = {name: _num_mat_inverse(M) for name, M in mats.items()}
    all_mats = list(mats.values()) + list(inv_mats.values())

    basis = [[PadicNumber(ctx.one() if i == j else ctx.zero()) for i in range(d)]
             for j in range(d)]  # list of column vectors
    for _ in range(rounds_budget):
        candidates = list(basis)
        for M in all_mats:
            for v in basis:
                candidates.append(_num_mat_vec(M, v))
        new_basis, denom = _lattice_basis(candidates, ctx, d)
        if denom > denom_budget:
            raise DomainError("unbounded: orbit lattice keeps growing "
                              "(no stable lattice at working precision)")
        if _same_lattice(basis, new_basis, ctx, d):
            basis = new_basis
            break
        basis = new_basis
    else:
        raise DomainError("unbounded: orbit did not stabilize within budget")

    C = [[basis[j][i] for j in range(d)] for i in range(d)]
    Cinv = _num_mat_inverse(C)
    images = {}
    for name, M in mats.items():
        conj = _num_mat_mul(_num_mat_mul(Cinv, M), C)
        images[name] = [[x.to_integral() for x in row] for row in conj]
    return IntegralRep(group, d, ctx, images), C


def _lattice_basis(vectors, ctx, d):
    denom = 0
    for v in vectors:
        for x in v:
            x = x.normalized()
            vv = x.pi_valuation()
            if vv is not None and vv < 0:
                denom = max(denom, -vv)
    scale = ctx.pi_power(denom)
    scaled = [[(x * scale).to_integral() for x in v] for v in vectors]
    M = min([ctx.precision - denom - 1]
            + [x.known_precision for v in scaled for x in v])
    if M < 2:
        raise PrecisionError("not enough precision for lattice computation")
    span = ChainSpan(ctx, M, d)
    for vec in scaled:
        span.add(vec)
    rows = [span.rows[j] for j in sorted(span.rows)]
    if len(rows) != d:
        raise DomainError("orbit does not span; representation is degenerate")
    basis = []
    for a, row in rows:
        basis.append([PadicNumber(x, denom) for x in row])
    return basis, denom


def _same_lattice(b1, b2, ctx, d):
    return _sublattice(b1, b2, ctx, d) and _sublattice(b2, b1, ctx, d)


def _sublattice(b1, b2, ctx, d):
    denom = 0
    for v in b1 + b2:
        for x in v:
            vv = x.normalized().pi_valuation()
            if vv is not None and vv < 0:
                denom = max(denom, -vv)
    scale = ctx.pi_power(denom)
    s2 = [[(x * scale).to_integral() for x in v] for v in b2]
    s1 = [[(x * scale).to_integral() for x in v] for v in b1]
    M = min([ctx.precision - denom - 1]
            + [x.known_precision for v in s1 + s2 for x in v])
    if M < 2:
        raise PrecisionError("not enough precision for lattice comparison")
    span = ChainSpan(ctx, M, d)
    for v in s2:
        span.add(v)
    for v in s1:
        if not span.contains(v):
            return False
    return True


def _num_mat_mul(A, B):
    d = len(A)
    return [[_num_sum([A[i][t] * B[t][j] for t in range(d)]) for j in range(len(B[0]))]
            for i in range(d)]


def _num_mat_vec(A, v):
    d = len(A)
    return [_num_sum([A[i][t] * v[t] for t in range(d)]) for i in range(d)]


def _num_sum(xs):
    acc = xs[0]
    for x in xs[1:]:
        acc = acc + x
    return acc


def _num_mat_inverse(M):
    d = len(M)
    if d == 1:
        return [[M[0][0].inverse()]]
    if d == 2:
        det = M[0][0] * M[1][1] - M[0][1] * M[1][0]
        dinv = det.inverse()
        return [[M[1][1] * dinv, (-M[0][1]) * dinv],
                [(-M[1][0]) * dinv, M[0][0] * dinv]]
    if d == 3:
        det = _num_det3(M)
        dinv = det.inverse()
        out = [[None] * 3 for _ in range(3)]
        for i in range(3):
            for j in range(3):
                minor = [[M[r][c] for c in range(3) if c != j]
                         for r in range(3) if r != i]
                cof = minor[0][0] * minor[1][1] - minor[0][1] * minor[1][0]
                if (i + j) % 2:
                    cof = -cof
                out[j][i] = cof * dinv
        return out
    raise DomainError("matrix inversion over E implemented for d <= 3")


def _num_det3(M):
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


# -- trace-congruence harness ----------------------------------------------


def residually_absolutely_irreducible(rep, word_cap=4, seed=0):
    """Single full-dimension mod-pi factor with scalar endomorphisms."""
    rbar = reduce_rep_mod(rep, 1)
    ss = semisimplify_mod_p(rbar, word_cap=word_cap, seed=seed)
    if len(ss["factors"]) != 1 or ss["factors"][0]["dim"] != rep.dim:
        return False
    endo = intertwiner_space(rbar, rbar)
    dim_endo = sum(1 for _, s in endo if s == 0)
    return dim_endo == 1


def carayol_audit(a, b, n, word_cap=4, seed=0):
    """Trace congruence mod pi^n for residually absolutely irreducible pairs
    forces a mod-pi^n isomorphism; failures under valid preconditions are
    flagged as theorem violations."""
    report = {"n": n, "word_cap": word_cap}
    if a.group.kind == "finite":
        words = list(a.group.element_words().values())
    else:
        words = a.group.words_up_to(word_cap)
    irr_a = residually_absolutely_irreducible(a, word_cap=word_cap, seed=seed)
    irr_b = residually_absolutely_irreducible(b, word_cap=word_cap, seed=seed)
    if not (irr_a and irr_b):
        report["verdict"] = "precondition_failed"
        report["reason"] = "residual absolute irreducibility fails"
        return report
    for w in words:
        diff = a.trace_of_word(w) - b.trace_of_word(w)
        v = diff.pi_valuation()
        if v is not None and v < n:
            report["verdict"] = "precondition_failed"
            report["reason"] = f"traces differ mod pi^{n} on a word of length {len(w)}"
            return report
    res = iso_mod(reduce_rep_mod(a, n), reduce_rep_mod(b, n),
                  word_cap=word_cap, seed=seed)
    if res.status == "isomorphic":
        report["verdict"] = "pass"
        report["intertwiner"] = [[list(x.coords) for x in row]
                                 for row in res.intertwiner]
    elif res.status == "inconclusive":
        report["verdict"] = "inconclusive"
        report["reason"] = res.certificate
    else:
        report["verdict"] = "THEOREM_VIOLATION"
        report["reason"] = res.certificate
    return report
