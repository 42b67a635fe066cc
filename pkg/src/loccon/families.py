"""Families of representations over a mixed algebra: matrices of series
attached to group generators, constancy verifiers, and the trace-algebra
fullness test."""

from __future__ import annotations

import itertools
import random

from loccon.chainring import ChainSpan
from loccon.padic import DomainError, gamma_exponent, relative_ramification
from loccon.series import AdicSeries


class RepFamily:
    """d x d matrices of AdicSeries over a model, one per group generator.

    Generator images must be invertible with integral inverse (unit
    determinant in the integral algebra).
    """

    def __init__(self, group, dim, model, gen_images):
        self.group = group
        self.dim = dim
        self.model = model
        self.gen_images = {}
        for name in group.generators:
            if name not in gen_images:
                raise DomainError(f"missing matrix for generator {name!r}")
            M = [[model._coerce(x) if not isinstance(x, AdicSeries) else x
                  for x in row] for row in gen_images[name]]
            if len(M) != dim or any(len(r) != dim for r in M):
                raise DomainError("generator matrices must be d x d")
            self.gen_images[name] = M
        self._inv_cache = {}
        for name, M in self.gen_images.items():
            det = _series_det(M)
            det.inverse()  # raises when the determinant is not a unit
        if group.kind == "finite":
            self._check_relations()

    def _check_relations(self):
        words = self.group.element_words()
        mats = {el: self.matrix_of_word(w) for el, w in words.items()}
        for el, w in words.items():
            for gi, gel in enumerate(self.group.gen_elements):
                prod = _series_mat_mul(mats[el], self.gen_images[self.group.generators[gi]])
                target = mats[self.group.multiply(el, gel)]
                for i in range(self.dim):
                    for j in range(self.dim):
                        if not (prod[i][j] == target[i][j]):
                            raise DomainError(
                                "generator matrices violate the group's relations")

    # -- word calculus -----------------------------------------------------

    def _gen_matrix(self, gi, sign):
        name = self.group.generators[gi]
        if sign == 1:
            return self.gen_images[name]
        if (gi, -1) not in self._inv_cache:
            self._inv_cache[(gi, -1)] = _series_mat_inverse(self.gen_images[name])
        return self._inv_cache[(gi, -1)]

    def matrix_of_word(self, word):
        d = self.dim
        out = [[self.model.constant(1 if i == j else 0) for j in range(d)]
               for i in range(d)]
        for gi, sign in word:
            out = _series_mat_mul(out, self._gen_matrix(gi, sign))
        return out

    def trace_of_word(self, word):
        M = self.matrix_of_word(word)
        t = self.model.zero()
        for i in range(self.dim):
            t = t + M[i][i]
        return t

    # -- specialization ----------------------------------------------------

    def specialize(self, point):
        """Integral representation at a point of the model."""
        from loccon.lattice import IntegralRep
        coords = dict(point.coords)
        images = {}
        for name, M in self.gen_images.items():
            images[name] = [[x.evaluate(coords) for x in row] for row in M]
        return IntegralRep(self.group, self.dim, point.context, images)

    # -- constancy ---------------------------------------------------------

    def strict_constancy_check(self, center, n, scale=None):
        """Whether the family is constant mod pi^n after recentering.

        ``scale`` defaults to n (the affinoid V^(n) coordinates); pass n-1
        for the wide open U^(n) coordinates.  On success returns the constant
        model matrices mod pi^n.
        """
        if scale is None:
            scale = n
        scales = {v: scale for v in self.model.vars}
        centers = dict(center.coords)
        constants = {}
        for name, M in self.gen_images.items():
            const = [[None] * self.dim for _ in range(self.dim)]
            for i in range(self.dim):
                for j in range(self.dim):
                    rc = M[i][j].recenter_rescale(dict(centers), dict(scales))
                    res = rc.is_constant_mod(n)
                    if not res:
                        return False, (name, i, j, res.witness), None
                    const[i][j] = res.constant_value
            constants[name] = const
        return True, None, constants

    def pointwise_constancy_audit(self, domain, n, extensions, samples_per_ext,
                                  seed=0, word_cap=3):
        """Sampled audit: specializations at points of the domain are
        isomorphic mod pi_E^{gamma(n)} to the specialization at the center.
        """
        from loccon.domains import ModelPoint
        from loccon.lattice import iso_mod, reduce_rep_mod
        from loccon.padic import embed
        report = {"n": n, "word_cap": word_cap, "verdict": "pass",
                  "witnesses": [], "extensions": []}
        for idx, ext in enumerate(extensions):
            e_rel = relative_ramification(self.model.base, ext)
            g = gamma_exponent(e_rel, n)
            center_pt = ModelPoint(self.model, {
                v: embed(c, ext) for v, c in domain.center.coords.items()})
            ref = reduce_rep_mod(self.specialize(center_pt), g)
            entry = {"e_rel": e_rel, "gamma": g, "samples": 0, "failures": 0,
                     "inconclusive": 0}
            for pt in domain.sample(ext, samples_per_ext, seed=seed + idx):
                spec = reduce_rep_mod(self.specialize(pt), g)
                res = iso_mod(ref, spec, word_cap=word_cap)
                entry["samples"] += 1
                if res.status == "isomorphic":
                    continue
                if res.status == "inconclusive":
                    entry["inconclusive"] += 1
                    if report["verdict"] == "pass":
                        report["verdict"] = "inconclusive"
                    continue
                entry["failures"] += 1
                report["verdict"] = "fail"
                report["witnesses"].append({
                    "extension_index": idx,
                    "point": pt.to_json(),
                    "certificate": res.certificate,
                })
            report["extensions"].append(entry)
        return report

    # -- trace algebra -----------------------------------------------------

    def trace_algebra_full(self, n, degree_budget=None, word_cap=3,
                           max_rounds=40):
        """Is the closure of the O_L-algebra generated by the matrix entries
        the whole truncated algebra?

        Works on disc models only (monomial basis).  Returns "full",
        "proper", or "inconclusive" together with the stabilized span size.
        """
        model = self.model
        if model.relation is not None:
            raise DomainError("trace-algebra test needs a disc model")
        if degree_budget is None:
            degree_budget = model.degree_cap
        monos = _monomials_up_to(model, degree_budget)
        mono_index = {m: i for i, m in enumerate(monos)}
        k = len(monos)
        ctx = model.base

        def vec(series):
            out = [ctx.zero()] * k
            for mono, c in series.terms.items():
                if mono in mono_index:
                    out[mono_index[mono]] = c
            return out

        entries = []
        for word in self.group.words_up_to(word_cap):
            if not word:
                continue
            M = self.matrix_of_word(word)
            for row in M:
                for x in row:
                    entries.append(x)
        span = ChainSpan(ctx, n, k)
        basis = [model.constant(1)]
        span.add(vec(basis[0]))
        frontier = list(basis)
        rounds = 0
        while frontier and rounds < max_rounds:
            rounds += 1
            new = []
            for b in frontier:
                for e in entries:
                    prod = b * e
                    if span.add(vec(prod)):
                        new.append(prod)
            frontier = new
            if span.is_full():
                return {"verdict": "full", "rounds": rounds,
                        "modulus": n, "degree_budget": degree_budget}
        if frontier:
            return {"verdict": "inconclusive", "rounds": rounds,
                    "modulus": n, "degree_budget": degree_budget}
        return {"verdict": "proper", "rounds": rounds,
                "modulus": n, "degree_budget": degree_budget}


def _monomials_up_to(model, budget):
    nv = len(model.vars)
    open_idx = [model.vars.index(v) for v in model.open_vars]
    out = []
    for combo in itertools.product(range(budget + 1), repeat=nv):
        if sum(combo) <= budget:
            out.append(combo)
    return sorted(out)


def _series_mat_mul(A, B):
    d = len(A)
    return [[sum((A[i][t] * B[t][j] for t in range(1, d)),
                 start=A[i][0] * B[0][j]) for j in range(d)] for i in range(d)]


def _series_det(M):
    d = len(M)
    if d == 1:
        return M[0][0]
    if d == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    acc = None
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        term = M[0][j] * _series_det(minor)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def _series_mat_inverse(M):
    d = len(M)
    det_inv = _series_det(M).inverse()
    if d == 1:
        return [[det_inv]]
    cof = [[None] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(M) if k != i]
            c = _series_det(minor)
            if (i + j) % 2:
                c = -c
            cof[j][i] = c * det_inv
    return cof
