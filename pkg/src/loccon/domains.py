"""Residue neighborhoods of a point on a preset formal model.

For a base point x and a depth n, the wide open neighborhood U^(n) is cut
out by v_p(g(y)) > (n-1)/e for every generator g of the vanishing ideal of
x, and the affinoid neighborhood V^(n) by v_p(g(y)) >= n/e; e is the
ramification index of the base field.  In pi_E-units over an extension E of
relative index e' these thresholds are integral: v(g(y)) >= (n-1)e'+1 for U
and v(g(y)) >= n e' for V.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from loccon.padic import (
    DomainError,
    PrecisionError,
    embed,
    gamma_exponent,
    relative_ramification,
)
from loccon.series import AlgebraModel, _check_point, _point_context


@dataclass(frozen=True)
class ModelPoint:
    """A point of a model over some extension of its base."""

    model: AlgebraModel
    coords: dict

    def __post_init__(self):
        ext = _point_context(self.model, self.coords)
        _check_point(self.model, self.coords, ext)

    @property
    def context(self):
        return _point_context(self.model, self.coords)

    def is_base_point(self):
        return self.context == self.model.base

    def to_json(self):
        return {v: list(c.coords) for v, c in sorted(self.coords.items())}


def ideal_generators(model, x):
    """Generators {var - x_var} of the vanishing ideal of a base point."""
    if not x.is_base_point():
        raise DomainError("vanishing-ideal generators are defined for base points only")
    gens = []
    for name in model.vars:
        gens.append(model.var(name) - model.constant(x.coords[name]))
    return gens


@dataclass(frozen=True)
class ClosedForm:
    """Disc description: v_p(variable - center) vs a rational threshold."""

    variable: str
    threshold: Fraction
    strict: bool

    def to_json(self):
        return {
            "variable": self.variable,
            "threshold": {"num": self.threshold.numerator,
                          "den": self.threshold.denominator},
            "strict": self.strict,
        }


class ResidueDomain:
    """U^(n) (kind 'U') or V^(n) (kind 'V') around a base point."""

    def __init__(self, model, center, n, kind, ideal_gens, closed_form=None):
        self.model = model
        self.center = center
        self.n = n
        self.kind = kind
        self.ideal_gens = ideal_gens
        self.closed_form = closed_form

    # threshold for v_piE(g(y)) over an extension of relative index e_rel
    def pi_threshold(self, e_rel):
        if self.kind == "U":
            return gamma_exponent(e_rel, self.n)
        return self.n * e_rel

    def member(self, y):
        """Membership of a point over a marked extension of the base.

        Raises PrecisionError when a comparison is undecidable at the
        point's working precision.
        """
        ext = y.context
        e_rel = relative_ramification(self.model.base, ext)
        thr = self.pi_threshold(e_rel)
        for g in self.ideal_gens:
            val = g.evaluate(dict(y.coords))
            v = val.pi_valuation()
            if v is None:
                if val.known_precision >= thr:
                    continue
                raise PrecisionError(
                    "membership undecidable: generator value indistinguishable "
                    f"from 0 below the threshold pi^{thr}")
            if v < thr:
                return False
        return True

    def closed_form_member(self, y):
        """Membership via the closed-form disc description, when available."""
        if self.closed_form is None:
            raise DomainError("no closed form for this domain")
        cf = self.closed_form
        ext = y.context
        e_E = ext.e
        delta = y.coords[cf.variable] - embed(self.center.coords[cf.variable], ext)
        v = delta.pi_valuation()
        if v is None:
            lb = Fraction(delta.known_precision, e_E)
            if (lb > cf.threshold) or (not cf.strict and lb >= cf.threshold):
                return True
            raise PrecisionError("closed-form membership undecidable at precision")
        vp = Fraction(v, e_E)
        return vp > cf.threshold if cf.strict else vp >= cf.threshold

    def sample(self, ext, count, seed=0, budget_factor=20):
        """Up to `count` member points over ext, deterministic under seed."""
        rng = random.Random(seed)
        e_rel = relative_ramification(self.model.base, ext)
        thr = self.pi_threshold(e_rel)
        if thr >= ext.precision:
            raise PrecisionError("extension precision too small for this depth")
        out = []
        tries = 0
        while len(out) < count and tries < budget_factor * count:
            tries += 1
            pt = self._sample_one(ext, thr, e_rel, rng)
            if pt is None:
                continue
            try:
                if self.member(pt):
                    out.append(pt)
            except PrecisionError:
                continue
        return out

    def _sample_one(self, ext, thr, e_rel, rng):
        model = self.model
        rel = model.relation
        if rel is None:
            coords = {}
            for name in model.vars:
                c = embed(self.center.coords[name], ext)
                t = rng.randrange(thr, ext.precision)
                if rng.random() < 0.5:
                    t = thr  # favor the boundary
                delta = ext.random_with_pi_valuation(t, rng) \
                    if rng.random() > 0.05 else ext.zero()
                coords[name] = c + delta
            return ModelPoint(model, coords)
        if rel[0] == "annulus":
            z1, z2 = model.bounded_vars
            m = rel[1]
            x1 = embed(self.center.coords[z1], ext)
            v1 = x1.pi_valuation()
            t1 = thr if v1 is None else max(thr, thr - m * e_rel + 2 * v1)
            if t1 >= ext.precision:
                return None
            t = rng.randrange(t1, ext.precision) if rng.random() > 0.5 else t1
            zeta1 = x1 + ext.random_with_pi_valuation(t, rng)
            vz = zeta1.pi_valuation()
            if vz is None or vz > m * e_rel:
                return None
            # zeta2 = pi^m / zeta1, exact
            unit = zeta1.shift_down(vz)
            zeta2 = unit.inverse() * ext.pi_power(m * e_rel - vz)
            try:
                return ModelPoint(model, {z1: zeta1, z2: zeta2})
            except DomainError:
                return None
        # cover: parameterize by the cover variable
        d, yvar, g = rel[1], rel[2], rel[3]
        tvar = [v for v in model.vars if v != yvar][0]
        y0 = embed(self.center.coords[yvar], ext)
        t = rng.randrange(thr, ext.precision) if rng.random() > 0.5 else thr
        y = y0 + ext.random_with_pi_valuation(t, rng)
        (gmono, gc), = g.items()
        gcel = model.base.from_int(gc) if isinstance(gc, int) else gc
        ti = model.vars.index(tvar)
        if gmono[ti] != 1 or sum(gmono) != 1:
            return None
        c = embed(gcel, ext)
        if not c.is_unit():
            return None
        tval = y ** d * c.inverse()
        try:
            return ModelPoint(model, {yvar: y, tvar: tval})
        except DomainError:
            return None

    def to_json(self):
        from loccon.specfile import series_literal
        return {
            "kind": self.kind,
            "n": self.n,
            "center": self.center.to_json(),
            "generators": [series_literal(g) for g in self.ideal_gens],
            "closed_form": self.closed_form.to_json() if self.closed_form else None,
        }


def describe(model, x, n, kind):
    """Build the residue domain U^(n) or V^(n) around a base point."""
    if kind not in ("U", "V"):
        raise DomainError("kind must be 'U' or 'V'")
    if n < 1:
        raise DomainError("n must be >= 1")
    gens = ideal_generators(model, x)
    e = model.base.e
    base_thr = Fraction(n - 1, e) if kind == "U" else Fraction(n, e)
    closed = None
    rel = model.relation
    if rel is None and len(model.vars) == 1:
        closed = ClosedForm(model.vars[0], base_thr, kind == "U")
    elif rel is not None and rel[0] == "annulus":
        z1 = model.bounded_vars[0]
        m = rel[1]
        v1 = x.coords[z1].pi_valuation()
        if v1 is not None:
            # disc at x1 of radius min{p^{-thr}, p^{-thr+m/e}|x1|^2}
            alt = base_thr - Fraction(m, e) + 2 * Fraction(v1, e)
            closed = ClosedForm(z1, max(base_thr, alt), kind == "U")
    elif rel is not None and rel[0] == "cover":
        d, yvar, _ = rel[1], rel[2], rel[3]
        if x.coords[yvar].pi_valuation() is None:
            # at the ramification point: v(t) = d v(y) collapses both
            # generator conditions to the one on the cover variable
            closed = ClosedForm(yvar, base_thr, kind == "U")
    return ResidueDomain(model, x, n, kind, gens, closed)


def sqrt_in_context(a, ext):
    """A square root of a in ext, or None; p odd, exact valuations only."""
    if ext.p == 2:
        raise DomainError("square roots are implemented for odd p only")
    v = a.pi_valuation()
    if v is None:
        return ext.zero()
    if v % 2:
        return None
    u = a.shift_down(v)
    # residue-field square test (cyclic group of order q - 1)
    q = ext.residue_field_size
    r = u.residue_poly()
    if ext.f == 1:
        if pow(r[0], (q - 1) // 2, ext.p) != 1:
            return None
        y0 = _tonelli(r[0], ext.p)
        y = ext.from_int(y0)
    else:
        y = _residue_sqrt_ext(u, ext)
        if y is None:
            return None
    # Newton: y <- (y + u/y)/2
    inv2 = ext.from_int(2).inverse()
    acc = 1
    while acc < ext.precision:
        y = (y + u * y.inverse()) * inv2
        acc *= 2
    return y * ext.pi_power(v // 2)


def _tonelli(n, p):
    n %= p
    if n == 0:
        return 0
    for y in range(1, p):
        if (y * y) % p == n:
            return y
    return None


def _residue_sqrt_ext(u, ext):
    for combo_int in range(1, ext.residue_field_size):
        digits = []
        x = combo_int
        for _ in range(ext.f):
            digits.append(x % ext.p)
            x //= ext.p
        cand = ext.element_from_poly([digits] + [[0] * ext.f] * (ext.e - 1))
        vv = (cand * cand - u).pi_valuation()
        if vv is None or vv >= 1:
            return cand
    return None


def cover_fiber(model, ext, tval):
    """Roots y of y^d = g(t) over ext for the cover preset, d = 2 only."""
    rel = model.relation
    if rel is None or rel[0] != "cover":
        raise DomainError("not a cover model")
    d, yvar, g = rel[1], rel[2], rel[3]
    if d != 2:
        raise DomainError("fiber solving implemented for degree-2 covers only")
    tvar = [v for v in model.vars if v != yvar][0]
    gval = ext.zero()
    for gm, gc in g.items():
        gcel = model.base.from_int(gc) if isinstance(gc, int) else gc
        term = embed(gcel, ext)
        ti = model.vars.index(tvar)
        term = term * tval ** gm[ti]
        gval = gval + term
    root = sqrt_in_context(gval, ext)
    if root is None:
        return []
    if root.pi_valuation() is None:
        return [ModelPoint(model, {yvar: root, tvar: tval})]
    return [ModelPoint(model, {yvar: root, tvar: tval}),
            ModelPoint(model, {yvar: -root, tvar: tval})]


def cover_compare(model, center, n, ext, samples=100, seed=0, n_budget=4):
    """Pushforward containment and preimage-equality search for a cover.

    Checks that points of the upstairs U^(n)/V^(n) map into the downstairs
    neighborhoods of the image point, and searches for the smallest tested
    depth at which the preimage of the downstairs neighborhood equals the
    upstairs one (reported as found/not found within the budget).
    """
    rel = model.relation
    if rel is None or rel[0] != "cover":
        raise DomainError("not a cover model")
    d, yvar, g = rel[1], rel[2], rel[3]
    tvar = [v for v in model.vars if v != yvar][0]
    base = model.base
    down_model = AlgebraModel(base, (), (tvar,), None, model.degree_cap)
    down_center = ModelPoint(down_model, {tvar: center.coords[tvar]})
    report = {"n": n, "containment": {}, "verdict": "pass"}
    for kind in ("U", "V"):
        up = describe(model, center, n, kind)
        down = describe(down_model, down_center, n, kind)
        ok = 0
        bad = []
        for pt in up.sample(ext, samples, seed=seed):
            img = ModelPoint(down_model, {tvar: pt.coords[tvar]})
            if down.member(img):
                ok += 1
            else:
                bad.append(pt.to_json())
                report["verdict"] = "fail"
        report["containment"][kind] = {"checked": ok + len(bad), "failures": bad}
    # preimage equality: exact threshold comparison using v(t - t0) = d v(y - y0)
    # (valid at a ramification center y0 = 0)
    eq = {}
    n0 = None
    e_rel = relative_ramification(base, ext)
    y0_is_zero = center.coords[yvar].pi_valuation() is None
    for nn in range(1, n_budget + 1):
        entry = {}
        for kind in ("U", "V"):
            thr = gamma_exponent(e_rel, nn) if kind == "U" else nn * e_rel
            if y0_is_zero:
                # upstairs: v(y) >= thr; preimage: d v(y) >= thr
                pre_thr = math.ceil(thr / d)
                entry[kind] = (pre_thr == thr)
            else:
                entry[kind] = None  # not certified away from ramification
        eq[nn] = entry
        if n0 is None and all(entry[k] for k in entry):
            n0 = nn
    report["preimage_equality"] = {
        "per_n": {str(k): v for k, v in eq.items()},
        "n0": n0,
        "certificate": (f"v({tvar} - t0) = {d} * v({yvar} - y0) at the "
                        "ramification center" if y0_is_zero else None),
        "budget": n_budget,
    }
    return report
