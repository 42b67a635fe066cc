"""Two-dimensional pseudorepresentation calculus.

A pseudorepresentation here is a trace-like function T with T(1) = 2,
T(gh) = T(hg), and the dimension-2 identity
T(g)T(h) = T(gh) + D(g) T(g^{-1}h) with D(g) = (T(g)^2 - T(g^2))/2.
The coefficient ring must have 2 invertible, so p = 2 is refused.
"""

from __future__ import annotations

import itertools
import random

from loccon.padic import DomainError
from loccon.series import AdicSeries


class PseudoRep2:
    """d = 2 pseudorepresentation on a finite group or a word-capped free
    group; values live in O_E (or a series algebra) with p odd."""

    def __init__(self, group, values, base, word_cap=None):
        if _base_p(base) == 2:
            raise DomainError("pseudorepresentation calculus needs p != 2")
        self.group = group
        self.base = base
        self.word_cap = word_cap
        if group.kind == "finite":
            self.values = {el: values[el] for el in group.elements()}
        else:
            if word_cap is None:
                raise DomainError("free-group pseudorepresentations need a word cap")
            self.values = {group.reduce_word(w): v for w, v in values.items()}

    # -- evaluation --------------------------------------------------------

    def value(self, x):
        if self.group.kind == "finite":
            return self.values[x]
        w = self.group.reduce_word(x)
        if w not in self.values:
            raise DomainError(f"value not available for word of length {len(w)}")
        return self.values[w]

    def _mul(self, x, y):
        if self.group.kind == "finite":
            return self.group.multiply(x, y)
        return self.group.reduce_word(tuple(x) + tuple(y))

    def _inv(self, x):
        if self.group.kind == "finite":
            return self.group.inverse_element(x)
        return self.group.invert_word(x)

    def _identity(self):
        return self.group.identity if self.group.kind == "finite" else ()

    def _elements(self, length=None):
        if self.group.kind == "finite":
            return list(self.group.elements())
        cap = self.word_cap if length is None else length
        return self.group.words_up_to(cap)

    def determinant(self, g):
        """D(g) = (T(g)^2 - T(g^2))/2."""
        t = self.value(g)
        t2 = self.value(self._mul(g, g))
        half = _half(self.base)
        return (t * t - t2) * half

    # -- axioms ------------------------------------------------------------

    def axiom_check(self, pair_budget=200, seed=0):
        """T(1) = 2, symmetry, and the d = 2 identity on sampled pairs plus
        all generator pairs."""
        report = {"verdict": "pass", "violations": []}
        two = _const(self.base, 2)
        if not _eq(self.value(self._identity()), two):
            report["verdict"] = "fail"
            report["violations"].append({"axiom": "T(1)=2"})
            return report
        small = self._elements(2) if self.group.kind == "free" else self._elements()
        rng = random.Random(seed)
        pairs = [(g, h) for g in small for h in small]
        if len(pairs) > pair_budget:
            pairs = rng.sample(pairs, pair_budget)
        checkable = 0
        for g, h in pairs:
            try:
                lhs_sym = self.value(self._mul(g, h))
                rhs_sym = self.value(self._mul(h, g))
                lhs = self.value(g) * self.value(h)
                rhs = self.value(self._mul(g, h)) \
                    + self.determinant(g) * self.value(self._mul(self._inv(g), h))
            except DomainError:
                continue  # word escaped the cap
            checkable += 1
            if not _eq(lhs_sym, rhs_sym):
                report["verdict"] = "fail"
                report["violations"].append({"axiom": "symmetry", "pair": str((g, h))})
            if not _eq(lhs, rhs):
                report["verdict"] = "fail"
                report["violations"].append({"axiom": "d=2 identity", "pair": str((g, h))})
        report["pairs_checked"] = checkable
        return report

    # -- kernel ------------------------------------------------------------

    def kernel(self, m):
        """Generators of the null space of B(x, y) = T(xy) over O/pi^m, for
        finite groups: the algebra kernel {y : T(xy) = 0 for all x}."""
        from loccon.chainring import nullspace_mod
        if self.group.kind != "finite":
            raise DomainError("kernels are computed for finite groups")
        els = list(self.group.elements())
        rows = []
        for x in els:
            rows.append([self.value(self.group.multiply(x, y)).reduce_mod(m)
                         for y in els])
        return nullspace_mod(rows, self.base, m)

    def group_kernel(self, m):
        """The paper's multiplicative condition on group elements:
        {g : T(xg) = T(x) for all x}, a subgroup."""
        if self.group.kind != "finite":
            raise DomainError("kernels are computed for finite groups")
        els = list(self.group.elements())
        out = []
        for g in els:
            if all(_eq_mod(self.value(self.group.multiply(x, g)),
                           self.value(x), m) for x in els):
                out.append(g)
        return out

    # -- multiplicity-freeness --------------------------------------------

    def residually_multiplicity_free(self, word_cap=4, seed=0):
        """Decompose T mod pi as a sum of irreducible traces of the group,
        found on the regular representation; multiplicity-free when no
        factor repeats."""
        from loccon.lattice import IntegralRep, reduce_rep_mod, semisimplify_mod_p
        if self.group.kind != "finite":
            raise DomainError("the exhaustive route needs a finite group")
        if self.group.order > 24:
            raise DomainError("exhaustive route limited to |G| <= 24")
        ctx = self.base
        n = self.group.order
        # regular representation: permutation matrices of left multiplication
        imgs = {}
        for gi, gel in enumerate(self.group.gen_elements):
            M = [[ctx.zero()] * n for _ in range(n)]
            for x in self.group.elements():
                M[self.group.multiply(gel, x)][x] = ctx.one()
            imgs[self.group.generators[gi]] = M
        reg = IntegralRep(self.group, n, ctx, imgs)
        ss = semisimplify_mod_p(reduce_rep_mod(reg, 1), seed=seed)
        # distinct factors with their trace functions on all elements
        words = self.group.element_words()
        uniq = []
        for f in ss["factors"]:
            if f not in uniq:
                uniq.append(f)
        # factor traces are aligned with element_words() iteration order
        tbar = tuple(tuple(self.value(el).reduce_mod(1).coords) for el in words)
        verdict = _decompose_trace(tbar, uniq, ctx)
        out = {"complete": ss["complete"], "factors": uniq}
        if verdict is None:
            out["verdict"] = "no_decomposition"
        else:
            multiplicities = verdict
            out["multiplicities"] = multiplicities
            if all(c <= 1 for c in multiplicities):
                out["verdict"] = "multiplicity_free"
            else:
                out["verdict"] = "not_multiplicity_free"
                out["repeated_factor"] = multiplicities.index(
                    max(multiplicities))
        return out

    # -- constancy over algebras ------------------------------------------

    def constancy_audit(self, domain, n, extensions, samples_per_ext, seed=0):
        """Run the function-level constancy audits on each available value."""
        reports = {}
        verdict = "pass"
        for key, val in self.values.items():
            if not isinstance(val, AdicSeries):
                raise DomainError("constancy audits need series-valued T")
            r = val.pointwise_constancy_audit(domain, n, extensions,
                                              samples_per_ext, seed=seed)
            reports[str(key)] = r
            if r["verdict"] == "fail":
                verdict = "fail"
        return {"verdict": verdict, "per_value": reports}


def from_rep_trace(rep, word_cap=4):
    """T(w) = trace of the word matrix, for d = 2 representations or
    families."""
    if rep.dim != 2:
        raise DomainError("pseudorepresentations are implemented for d = 2")
    group = rep.group
    if group.kind == "finite":
        words = group.element_words()
        values = {el: rep.trace_of_word(w) for el, w in words.items()}
        base = _rep_base(rep)
        return PseudoRep2(group, values, base)
    values = {w: rep.trace_of_word(w) for w in group.words_up_to(word_cap)}
    return PseudoRep2(group, values, _rep_base(rep), word_cap=word_cap)


def _rep_base(rep):
    if hasattr(rep, "model"):
        return rep.model
    return rep.context


def _base_p(base):
    if hasattr(base, "constant"):  # AlgebraModel
        return base.base.p
    return base.p


def _const(base, k):
    if hasattr(base, "constant"):
        return base.constant(k)
    return base.from_int(k)


def _half(base):
    if hasattr(base, "constant"):
        return base.constant(pow(2, -1, base.base.coeff_modulus))
    return base.from_int(2).inverse()


def _eq(a, b):
    diff = a - b
    if isinstance(diff, AdicSeries):
        return all(c.pi_valuation() is None for c in diff.terms.values())
    return diff.pi_valuation() is None


def _eq_mod(a, b, m):
    diff = a - b
    v = diff.pi_valuation()
    return v is None or v >= m


def _decompose_trace(tbar, factors, ctx):
    """Non-negative integer combination of factor traces equal to tbar with
    total dimension 2, by exhaustive search (d = 2 only)."""
    dims = [f["dim"] for f in factors]
    for combo in itertools.product(range(3), repeat=len(factors)):
        if sum(c * d for c, d in zip(dims, combo)) != 2:
            continue
        ok = True
        for pos in range(len(tbar)):
            acc = ctx.zero()
            for c, f in zip(combo, factors):
                if c:
                    acc = acc + ctx.from_int(c) * _coords_to_elem(ctx, f["traces"][pos])
            if tuple(acc.reduce_mod(1).coords) != tbar[pos]:
                ok = False
                break
        if ok:
            return list(combo)
    return None


def _coords_to_elem(ctx, coords):
    return ctx.from_coords(list(coords), precision=1)
