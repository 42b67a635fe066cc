"""Truncated elements of mixed algebras O_L<zeta>[[xi]] and constancy tests.

An AlgebraModel fixes a base ring, named variables of two kinds (bounded:
|.| <= 1, open: |.| < 1), an optional preset relation, and a degree cap for
the open variables.  AdicSeries are finitely supported coefficient maps in
normal form under the relation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from loccon.padic import (
    DomainError,
    PadicElement,
    PrecisionError,
    embed,
    gamma_exponent,
    relative_ramification,
)


@dataclass(frozen=True)
class AlgebraModel:
    """Shape of a truncated mixed algebra over a p-adic base.

    relation presets:
      ``None``                       — free (disc/polydisc) model
      ``("annulus", m)``             — the first two bounded vars satisfy
                                       zeta1*zeta2 = pi^m
      ``("cover", d, yvar, g)``      — yvar^d = g, with g a coefficient map
                                       (monomial tuple -> int) over the
                                       remaining variables
    """

    base: object
    bounded_vars: tuple = ()
    open_vars: tuple = ()
    relation: tuple | None = None
    degree_cap: int = 8

    def __post_init__(self):
        if set(self.bounded_vars) & set(self.open_vars):
            raise DomainError("a variable cannot be both bounded and open")
        if self.relation is not None:
            kind = self.relation[0]
            if kind == "annulus":
                m = self.relation[1]
                if len(self.bounded_vars) != 2 or m < 1:
                    raise DomainError("annulus preset needs exactly two bounded vars and m >= 1")
            elif kind == "cover":
                d, yvar, g = self.relation[1], self.relation[2], self.relation[3]
                if d < 2 or yvar not in self.vars:
                    raise DomainError("cover preset needs degree >= 2 and a declared cover variable")
                yi = self.vars.index(yvar)
                for mono in g:
                    if mono[yi] != 0:
                        raise DomainError("cover relation right side must not involve the cover variable")
            else:
                raise DomainError(f"unknown relation preset {kind!r}")

    @property
    def vars(self):
        return tuple(self.bounded_vars) + tuple(self.open_vars)

    def var_index(self, name):
        try:
            return self.vars.index(name)
        except ValueError:
            raise DomainError(f"unknown variable {name!r}") from None

    def is_open(self, name):
        return name in self.open_vars

    # -- series constructors ---------------------------------------------

    def _coerce(self, c):
        if isinstance(c, int):
            return self.base.from_int(c)
        return c

    def zero(self):
        return AdicSeries(self, {})

    def constant(self, c):
        c = self._coerce(c)
        return AdicSeries(self, {(0,) * len(self.vars): c})

    def var(self, name):
        i = self.var_index(name)
        mono = tuple(1 if j == i else 0 for j in range(len(self.vars)))
        return AdicSeries(self, {mono: self.base.one()})

    def series(self, terms):
        out = {}
        for mono, c in terms.items():
            out[tuple(mono)] = self._coerce(c)
        return AdicSeries(self, out)

    # -- sampling of coordinate values -----------------------------------

    def random_coordinate(self, name, ext, rng):
        """A coordinate value for one variable: valuation uniform over the
        admissible range, then a uniform unit (boundary-aware sampling)."""
        max_v = ext.precision - 1
        lo = 1 if self.is_open(name) else 0
        v = rng.randrange(lo, max_v + 1)
        if rng.random() < 0.05:
            return ext.zero()
        return ext.random_with_pi_valuation(v, rng)


def _mono_str(model, mono):
    parts = []
    for name, a in zip(model.vars, mono):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts) if parts else "1"


class AdicSeries:
    """Finitely supported coefficient map in normal form.

    Normal form: open-variable total degree <= degree_cap; no monomial mixes
    the two annulus variables; cover-variable degree < d.
    """

    __slots__ = ("model", "terms")

    def __init__(self, model, terms):
        self.model = model
        self.terms = _normalize(model, terms)

    # -- ring structure ---------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, AdicSeries):
            if other.model != self.model:
                raise DomainError("mixed algebra models")
            return other
        return self.model.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out[mono] + c if mono in out else c
        return AdicSeries(self.model, out)

    __radd__ = __add__

    def __neg__(self):
        return AdicSeries(self.model, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                prod = c1 * c2
                out[m] = out[m] + prod if m in out else prod
        return AdicSeries(self.model, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = self.model.constant(1)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c):
        c = self.model._coerce(c)
        return AdicSeries(self.model, {m: coeff * c for m, coeff in self.terms.items()})

    def coefficient(self, mono):
        return self.terms.get(tuple(mono), self.model.base.zero())

    def constant_term(self):
        return self.coefficient((0,) * len(self.model.vars))

    def inverse(self):
        """Inverse in the integral algebra; exists when the constant term is
        a unit and every other monomial is topologically nilpotent."""
        c = self.constant_term()
        if not c.is_unit():
            raise DomainError("series with non-unit constant term is not invertible")
        cinv = c.inverse()
        h = self.model.constant(1) - self.scale(cinv)
        const_mono = (0,) * len(self.model.vars)
        open_idx = [self.model.vars.index(v) for v in self.model.open_vars]
        for mono, coeff in h.terms.items():
            if mono == const_mono:
                continue
            if sum(mono[i] for i in open_idx) >= 1:
                continue
            v = coeff.pi_valuation()
            if v is not None and v < 1:
                raise DomainError(
                    "series is not invertible in the integral algebra "
                    f"(bounded monomial {_mono_str(self.model, mono)} has unit coefficient)")
        acc = self.model.constant(1)
        power = h
        guard = (self.model.degree_cap + 1) * self.model.base.precision + 1
        for _ in range(guard):
            if not power.terms:
                break
            acc = acc + power
            power = power * h
        return acc.scale(cinv)

    def coefficient_precision(self):
        if not self.terms:
            return self.model.base.precision
        return min(c.known_precision for c in self.terms.values())

    def __eq__(self, other):
        other = self._coerce(other)
        diff = self - other
        return all(c.pi_valuation() is None for c in diff.terms.values())

    def __repr__(self):
        if not self.terms:
            return "<0>"
        parts = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            parts.append(f"({c!r})*{_mono_str(self.model, mono)}")
        return "<" + " + ".join(parts) + ">"

    # -- evaluation --------------------------------------------------------

    def evaluate(self, point):
        """Value at a point given as {var: PadicElement over an extension}.

        The returned element carries the guaranteed absolute precision
        min(coefficient precision, (D+1) * min open-var valuation).
        """
        model = self.model
        ext = _point_context(model, point)
        _check_point(model, point, ext)
        acc = ext.zero()
        for mono, c in self.terms.items():
            term = embed(c, ext)
            for name, a in zip(model.vars, mono):
                if a:
                    term = term * point[name] ** a
            acc = acc + term
        guar = self.coefficient_precision() * relative_ramification(model.base, ext)
        if model.open_vars:
            vmin = min(point[v].pi_valuation_lower() for v in model.open_vars)
            guar = min(guar, (model.degree_cap + 1) * vmin)
        guar = min(guar, ext.precision)
        if guar < 1:
            raise PrecisionError("evaluation guarantee fell below one digit")
        return PadicElement(ext, acc.coords, min(acc.known_precision, guar))

    # -- constancy ---------------------------------------------------------

    def is_constant_mod(self, n):
        """Whether the series lies in O_L + pi^n * (integral series).

        Returns a ConstancyResult; the verdict is annotated with the
        precision at which it is rigorous.
        """
        prec = self.coefficient_precision()
        if n > prec:
            raise PrecisionError(f"need {n} digits but only {prec} known")
        const_mono = (0,) * len(self.model.vars)
        for mono in sorted(self.terms):
            if mono == const_mono:
                continue
            v = self.terms[mono].pi_valuation()
            if v is not None and v < n:
                return ConstancyResult(False, _mono_str(self.model, mono), None, prec)
        return ConstancyResult(True, None, self.constant_term().reduce_mod(n), prec)

    def pointwise_constancy_audit(self, domain, n, extensions, samples_per_ext,
                                  seed=0):
        """Sampled check that values over each extension E agree with the
        value at the domain's center mod pi_E^{gamma(n)}.

        ``domain`` must provide .center (a point object with .coords and
        .context) and .sample(ext, count, seed).
        """
        model = self.model
        report = {"n": n, "verdict": "pass", "witnesses": [], "extensions": []}
        for idx, ext in enumerate(extensions):
            e_rel = relative_ramification(model.base, ext)
            g = gamma_exponent(e_rel, n)
            center_pt = {v: embed(c, ext) for v, c in domain.center.coords.items()}
            ref = self.evaluate(center_pt).reduce_mod(g)
            entry = {"e_rel": e_rel, "gamma": g, "samples": 0, "failures": 0}
            pts = domain.sample(ext, samples_per_ext, seed=seed + idx)
            for pt in pts:
                val = self.evaluate({v: c for v, c in pt.coords.items()}).reduce_mod(g)
                entry["samples"] += 1
                if val.coords != ref.coords:
                    entry["failures"] += 1
                    report["verdict"] = "fail"
                    report["witnesses"].append({
                        "extension_index": idx,
                        "point": {v: list(c.coords) for v, c in pt.coords.items()},
                        "value": list(val.coords),
                        "center_value": list(ref.coords),
                    })
            report["extensions"].append(entry)
        return report

    # -- recentering -------------------------------------------------------

    def recenter_rescale(self, center, scales):
        """Substitute var -> center[var] + pi^scales[var] * var.

        ``center`` maps variables to integral base elements; ``scales`` maps
        variables to non-negative integers (pi-units).  Returns a series over
        a relation-free model in the same variable names, where a variable
        scaled by k >= 1 becomes open.  The annulus and cover presets are
        rewritten through their one-parameter closed forms.
        """
        model = self.model
        for v in model.vars:
            center.setdefault(v, model.base.zero())
            scales.setdefault(v, 0)
        for v, k in scales.items():
            if k < 0:
                raise DomainError("scale exponents must be >= 0")
        if model.relation is None:
            return self._recenter_free(center, scales)
        if model.relation[0] == "annulus":
            return self._recenter_annulus(center, scales)
        return self._recenter_cover(center, scales)

    def _recenter_free(self, center, scales):
        model = self.model
        new_open, new_bounded = [], []
        for v in model.vars:
            if scales[v] >= 1 or model.is_open(v):
                new_open.append(v)
            else:
                new_bounded.append(v)
        out_model = AlgebraModel(model.base, tuple(new_bounded), tuple(new_open),
                                 None, model.degree_cap)
        subs = {}
        for v in model.vars:
            s = out_model.var(v).scale(model.base.pi_power(scales[v]))
            subs[v] = s + out_model.constant(center[v])
        return _substitute(self, out_model, subs)

    def _recenter_annulus(self, center, scales):
        model = self.model
        z1, z2 = model.bounded_vars
        m = model.relation[1]
        x1, x2 = center[z1], center[z2]
        if (x1 * x2 - model.base.pi_power(m)).pi_valuation() is not None:
            raise DomainError("annulus center must satisfy zeta1*zeta2 = pi^m")
        k = scales[z1]
        v1 = x1.pi_valuation()
        if v1 is None or k <= v1:
            raise DomainError(
                "annulus recentering needs scale exponent > v(zeta1-coordinate)")
        out_model = AlgebraModel(model.base, (), (z1,), None, model.degree_cap)
        U = out_model.var(z1)
        # zeta1 = x1 + pi^k U ; zeta2 = pi^m/zeta1 = x2 * sum ((-pi^k/x1) U)^i
        t = model.base.pi_power(k - v1) * x1.shift_down(v1).inverse()
        sub1 = out_model.constant(x1) + U.scale(model.base.pi_power(k))
        sub2 = out_model.zero()
        pw = model.base.one()
        for i in range(model.degree_cap + 1):
            sub2 = sub2 + (U ** i).scale(x2 * pw)
            pw = pw * (-t)
        subs = {z1: sub1, z2: sub2}
        return _substitute(self, out_model, subs)

    def _recenter_cover(self, center, scales):
        model = self.model
        d, yvar, g = model.relation[1], model.relation[2], model.relation[3]
        others = [v for v in model.vars if v != yvar]
        # closed form only for y^d = c * t with a single unit constant c
        if len(others) != 1 or len(g) != 1:
            raise DomainError("cover recentering supported only for y^d = c*t")
        tvar = others[0]
        (gmono, gc), = g.items()
        ti = model.vars.index(tvar)
        if gmono[ti] != 1 or sum(gmono) != 1:
            raise DomainError("cover recentering supported only for y^d = c*t")
        c = model.base.from_int(gc) if isinstance(gc, int) else gc
        if not c.is_unit():
            raise DomainError("cover relation constant must be a unit")
        y0, t0 = center[yvar], center[tvar]
        if (y0 ** d - c * t0).pi_valuation() is not None:
            raise DomainError("cover center must satisfy the relation")
        k = scales[yvar]
        out_model = AlgebraModel(model.base, (), (yvar,), None, model.degree_cap)
        W = out_model.var(yvar)
        suby = out_model.constant(y0) + W.scale(model.base.pi_power(k))
        subt = (suby ** d).scale(c.inverse())
        subs = {yvar: suby, tvar: subt}
        return _substitute(self, out_model, subs)


@dataclass(frozen=True)
class ConstancyResult:
    constant: bool
    witness: str | None
    constant_value: object
    precision: int

    def __bool__(self):
        return self.constant


def _normalize(model, terms):
    work = {}
    for mono, c in terms.items():
        work[tuple(mono)] = work[tuple(mono)] + c if tuple(mono) in work else c
    rel = model.relation
    if rel is not None and rel[0] == "annulus":
        m = rel[1]
        i1 = model.vars.index(model.bounded_vars[0])
        i2 = model.vars.index(model.bounded_vars[1])
        changed = True
        while changed:
            changed = False
            for mono in list(work):
                a, b = mono[i1], mono[i2]
                if a and b:
                    k = min(a, b)
                    new = list(mono)
                    new[i1] -= k
                    new[i2] -= k
                    new = tuple(new)
                    c = work.pop(mono) * model.base.pi_power(m * k)
                    work[new] = work[new] + c if new in work else c
                    changed = True
    elif rel is not None and rel[0] == "cover":
        d, yvar, g = rel[1], rel[2], rel[3]
        yi = model.vars.index(yvar)
        changed = True
        while changed:
            changed = False
            for mono in list(work):
                if mono[yi] >= d:
                    c = work.pop(mono)
                    rest = list(mono)
                    rest[yi] -= d
                    for gm, gc in g.items():
                        gcel = model.base.from_int(gc) if isinstance(gc, int) else gc
                        new = tuple(r + q for r, q in zip(rest, gm))
                        add = c * gcel
                        work[new] = work[new] + add if new in work else add
                    changed = True
    # degree cap on open variables, then drop exact zeros
    open_idx = [model.vars.index(v) for v in model.open_vars]
    out = {}
    for mono, c in work.items():
        if sum(mono[i] for i in open_idx) > model.degree_cap:
            continue
        if all(x == 0 for x in c.coords):
            continue
        out[mono] = c
    return out


def _substitute(series, out_model, subs):
    acc = out_model.zero()
    for mono, c in series.terms.items():
        term = out_model.constant(c)
        for name, a in zip(series.model.vars, mono):
            for _ in range(a):
                term = term * subs[name]
        acc = acc + term
    return acc


def _point_context(model, point):
    ctxs = {id(v.context): v.context for v in point.values()}
    if len(ctxs) > 1:
        uniq = list({v.context for v in point.values()})
        if len(uniq) > 1:
            raise DomainError("point coordinates live in different contexts")
        return uniq[0]
    if not point:
        return model.base
    return next(iter(ctxs.values()))


def _check_point(model, point, ext):
    for name in model.vars:
        if name not in point:
            raise DomainError(f"point is missing coordinate {name!r}")
        v = point[name].pi_valuation()
        if model.is_open(name):
            if v is not None and v < 1:
                raise DomainError(f"open variable {name!r} needs v > 0")
        else:
            if v is not None and v < 0:
                raise DomainError(f"bounded variable {name!r} needs v >= 0")
    rel = model.relation
    if rel is None:
        return
    if rel[0] == "annulus":
        z1, z2 = model.bounded_vars
        m = rel[1]
        resid = point[z1] * point[z2] - embed(model.base.pi_power(m), ext)
        if resid.pi_valuation() is not None:
            raise DomainError("point violates the annulus relation")
    else:
        d, yvar, g = rel[1], rel[2], rel[3]
        gval = ext.zero()
        for gm, gc in g.items():
            gcel = model.base.from_int(gc) if isinstance(gc, int) else gc
            term = embed(gcel, ext)
            for name, a in zip(model.vars, gm):
                if a:
                    term = term * point[name] ** a
            gval = gval + term
        resid = point[yvar] ** d - gval
        if resid.pi_valuation() is not None:
            raise DomainError("point violates the cover relation")
