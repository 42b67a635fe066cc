"""Exact arithmetic in finite extensions of Q_p at capped precision.

A context describes an extension E/Q_p as an unramified-then-Eisenstein
tower: E = Q_p(omega)(pi) with omega a root of a monic polynomial that is
irreducible mod p, and pi a root of an Eisenstein polynomial over the
unramified subring W = Z_p[omega].  Elements are coordinate vectors in the
basis {pi^i * omega^j}, stored modulo a power of p derived from the
context's absolute precision cap.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from math import ceil


class PrecisionError(ArithmeticError):
    """An operation needed more pi-adic digits than are known."""


class DomainError(ValueError):
    """An argument violates a valuation or domain constraint."""


def _poly_mul_mod(a, b, modulus):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % modulus
    return out


def _poly_reduce(poly, monic, modulus):
    """Remainder of poly modulo a monic polynomial, coefficients mod modulus."""
    poly = [c % modulus for c in poly]
    d = len(monic) - 1
    while len(poly) > d:
        lead = poly.pop()
        if lead:
            for k in range(d):
                poly[len(poly) - d + k] = (poly[len(poly) - d + k] - lead * monic[k]) % modulus
    poly += [0] * (d - len(poly))
    return poly


def _int_val(n, p, cap):
    """p-adic valuation of an integer known mod p^cap; None if 0 mod p^cap."""
    n %= p ** cap
    if n == 0:
        return None
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicContext:
    """The valuation ring O_E of a finite extension E/Q_p, at finite precision.

    Parameters
    ----------
    p : prime
    f : inertia degree; ``unram_poly`` must be monic of degree f and
        irreducible mod p (checked).
    e : ramification index; ``eis_poly`` must be monic Eisenstein of degree e
        over W, its coefficients given as length-f integer vectors in the
        omega-basis (checked).
    precision : absolute cap N on pi-adic digits.
    """

    def __init__(self, p, f=1, e=1, unram_poly=None, eis_poly=None, precision=20,
                 base=None):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise DomainError(f"p={p} is not prime")
        if f < 1 or e < 1 or precision < 1:
            raise DomainError("f, e and precision must be >= 1")
        self.p = p
        self.f = f
        self.e = e
        self.precision = precision
        self.coeff_digits = ceil(precision / e) + 1
        self.coeff_modulus = p ** self.coeff_digits
        if unram_poly is None:
            unram_poly = _default_unram_poly(p, f)
        if eis_poly is None:
            # x^e - p, the simplest Eisenstein choice
            eis_poly = [[-p] + [0] * (f - 1)] + [[0] * f] * (e - 1) + [[1] + [0] * (f - 1)]
        self.unram_poly = tuple(int(c) for c in unram_poly)
        self.eis_poly = tuple(tuple(int(c) for c in row) for row in eis_poly)
        self._check_unram()
        self._check_eisenstein()
        self.base = base  # marked base context for extension towers
        self._pi_pow_table = self._build_pi_powers()
        self._inv_unit_b0 = None

    # -- validation -------------------------------------------------------

    def _check_unram(self):
        g = self.unram_poly
        if len(g) != self.f + 1 or g[-1] != 1:
            raise DomainError("unram_poly must be monic of degree f")
        if not _is_irreducible_mod_p(list(g), self.p):
            raise DomainError("unram_poly is reducible mod p")

    def _check_eisenstein(self):
        rows = self.eis_poly
        if len(rows) != self.e + 1 or any(len(r) != self.f for r in rows):
            raise DomainError("eis_poly must have e+1 coefficient vectors of length f")
        if list(rows[-1]) != [1] + [0] * (self.f - 1):
            raise DomainError("eis_poly must be monic")
        c0 = [c % self.p ** 2 for c in rows[0]]
        v0 = min((_int_val(c, self.p, 2) for c in c0 if c % self.p ** 2), default=None)
        if v0 != 1:
            raise DomainError("eis_poly constant term must have valuation exactly 1")
        for row in rows[1:-1]:
            if any(c % self.p for c in row):
                raise DomainError("eis_poly middle coefficients must be divisible by p")

    def _build_pi_powers(self):
        """Coordinates of pi^k for k = 0 .. 2e-2, as e x f integer tables."""
        M = self.coeff_modulus
        table = []
        for k in range(self.e):
            rows = [[0] * self.f for _ in range(self.e)]
            rows[k][0] = 1
            table.append(rows)
        # pi^e = -sum_{i<e} b_i pi^i
        for k in range(self.e, 2 * self.e - 1):
            prev = table[k - 1]
            rows = [[0] * self.f for _ in range(self.e)]
            top = prev[self.e - 1]
            for i in range(self.e - 1):
                rows[i + 1] = list(prev[i])
            for i in range(self.e):
                bi = self.eis_poly[i]
                prod = _poly_reduce(_poly_mul_mod(top, list(bi), M), list(self.unram_poly), M)
                for j in range(self.f):
                    rows[i][j] = (rows[i][j] - prod[j]) % M
            table.append(rows)
        return table

    # -- properties -------------------------------------------------------

    @property
    def degree(self):
        return self.e * self.f

    @property
    def residue_field_size(self):
        return self.p ** self.f

    def __repr__(self):
        return f"PadicContext(p={self.p}, f={self.f}, e={self.e}, N={self.precision})"

    def __eq__(self, other):
        return (isinstance(other, PadicContext)
                and (self.p, self.f, self.e, self.unram_poly, self.eis_poly)
                == (other.p, other.f, other.e, other.unram_poly, other.eis_poly))

    def __hash__(self):
        return hash((self.p, self.f, self.e, self.unram_poly, self.eis_poly))

    # -- element constructors --------------------------------------------

    def zero(self):
        return PadicElement(self, (0,) * self.degree)

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        coords = [0] * self.degree
        coords[0] = n % self.coeff_modulus
        return PadicElement(self, tuple(coords))

    def pi(self):
        if self.e == 1:
            return self.from_int(self.p)
        coords = [0] * self.degree
        coords[self.f] = 1
        return PadicElement(self, tuple(coords))

    def omega(self):
        coords = [0] * self.degree
        if self.f == 1:
            coords[0] = 1
        else:
            coords[1] = 1
        return PadicElement(self, tuple(coords))

    def from_coords(self, coords, precision=None):
        coords = [c % self.coeff_modulus for c in coords]
        if len(coords) != self.degree:
            raise DomainError(f"expected {self.degree} coordinates")
        return PadicElement(self, tuple(coords), precision)

    def element_from_poly(self, pi_rows):
        """Element from an e x f table of integers (pi-row, omega-column)."""
        coords = []
        for row in pi_rows:
            coords.extend(c % self.coeff_modulus for c in row)
        return PadicElement(self, tuple(coords))

    # -- sampling ---------------------------------------------------------

    def random_element(self, rng):
        return PadicElement(
            self, tuple(rng.randrange(self.coeff_modulus) for _ in range(self.degree)))

    def random_unit(self, rng):
        while True:
            x = self.random_element(rng)
            if x.pi_valuation() == 0:
                return x

    def random_with_pi_valuation(self, k, rng):
        """A uniform element of valuation exactly k (in pi-units), 0 <= k < N."""
        if not 0 <= k < self.precision:
            raise DomainError("valuation out of range at this precision")
        u = self.random_unit(rng)
        return u * self.pi_power(k)

    def teichmuller(self, a):
        """The root of unity of order dividing q-1 congruent to a mod pi."""
        x = self.from_int(a) if isinstance(a, int) else a
        if not x.is_unit():
            raise DomainError("Teichmuller lift needs a unit")
        q = self.residue_field_size
        for _ in range(self.coeff_digits + 2):
            nxt = x ** q
            if (nxt - x).pi_valuation() is None:
                return nxt
            x = nxt
        return x

    def pi_power(self, k):
        x = self.one()
        piel = self.pi()
        for _ in range(k):
            x = x * piel
        return x

    def enumerate_residues(self, m):
        """All canonical residues of O_E / pi^m (use only for small sizes)."""
        digit_counts = [max(0, ceil((m - i) / self.e)) for i in range(self.e)]
        ranges = []
        for i in range(self.e):
            for _ in range(self.f):
                ranges.append(range(self.p ** digit_counts[i]))
        for combo in itertools.product(*ranges):
            yield self.from_coords(list(combo), precision=m)


def _default_unram_poly(p, f):
    if f == 1:
        return [0, 1]  # placeholder: x, never used since W = Z_p
    for tail in itertools.product(range(p), repeat=f):
        poly = list(tail) + [1]
        if _is_irreducible_mod_p(poly, p):
            return poly
    raise DomainError(f"no irreducible polynomial of degree {f} mod {p} found")


def _is_irreducible_mod_p(poly, p):
    """Irreducibility of a monic polynomial over F_p (degree <= 4: root/factor scan)."""
    d = len(poly) - 1
    if d == 1:
        return True
    # no roots
    for a in range(p):
        if _poly_eval_mod(poly, a, p) == 0:
            return False
    if d <= 3:
        return True
    # degree 4: rule out quadratic factors by trial division
    for b in range(p):
        for c in range(p):
            if _poly_divides([c, b, 1], poly, p):
                return False
    return True


def _poly_eval_mod(poly, a, p):
    acc = 0
    for c in reversed(poly):
        acc = (acc * a + c) % p
    return acc


def _poly_divides(g, h, p):
    r = [c % p for c in h]
    dg = len(g) - 1
    while len(r) - 1 >= dg and any(r):
        while r and r[-1] % p == 0:
            r.pop()
        if len(r) - 1 < dg:
            break
        lead = r[-1]
        shift = len(r) - 1 - dg
        for k in range(dg + 1):
            r[shift + k] = (r[shift + k] - lead * g[k]) % p
        while r and r[-1] % p == 0:
            r.pop()
    return not any(c % p for c in r)


class PadicElement:
    """An element of O_E at known absolute pi-adic precision.

    Immutable.  Coordinates live in the basis {pi^i omega^j} with
    0 <= i < e, 0 <= j < f, flattened row-major (i major).
    """

    __slots__ = ("context", "coords", "known_precision")

    def __init__(self, context, coords, known_precision=None):
        self.context = context
        self.coords = coords
        if known_precision is None:
            known_precision = context.precision
        self.known_precision = min(known_precision, context.precision)
        if self.known_precision < 0:
            raise PrecisionError("element has no known digits left")

    # -- ring operations --------------------------------------------------

    def _check_same(self, other):
        if self.context != other.context:
            raise DomainError("mixed contexts; embed explicitly first")

    def __add__(self, other):
        if isinstance(other, int):
            other = self.context.from_int(other)
        self._check_same(other)
        M = self.context.coeff_modulus
        coords = tuple((a + b) % M for a, b in zip(self.coords, other.coords))
        return PadicElement(self.context, coords,
                            min(self.known_precision, other.known_precision))

    __radd__ = __add__

    def __neg__(self):
        M = self.context.coeff_modulus
        return PadicElement(self.context, tuple((-a) % M for a in self.coords),
                            self.known_precision)

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.context.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = self.context.from_int(other)
        self._check_same(other)
        ctx = self.context
        e, f, M = ctx.e, ctx.f, ctx.coeff_modulus
        a = [list(self.coords[i * f:(i + 1) * f]) for i in range(e)]
        b = [list(other.coords[i * f:(i + 1) * f]) for i in range(e)]
        acc = [[0] * f for _ in range(e)]
        for i in range(e):
            ai = a[i]
            if not any(ai):
                continue
            for k in range(e):
                bk = b[k]
                if not any(bk):
                    continue
                prod = _poly_reduce(_poly_mul_mod(ai, bk, M), list(ctx.unram_poly), M)
                pw = ctx._pi_pow_table[i + k]
                for r in range(e):
                    row = pw[r]
                    if not any(row):
                        continue
                    term = _poly_reduce(_poly_mul_mod(prod, row, M),
                                        list(ctx.unram_poly), M)
                    for j in range(f):
                        acc[r][j] = (acc[r][j] + term[j]) % M
        coords = tuple(acc[r][j] for r in range(e) for j in range(f))
        va = min(self.pi_valuation_lower(), self.known_precision)
        vb = min(other.pi_valuation_lower(), other.known_precision)
        prec = min(ctx.precision, self.known_precision + vb, other.known_precision + va)
        return PadicElement(ctx, coords, prec)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.context.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- valuation and reduction ------------------------------------------

    def pi_valuation(self):
        """Valuation in pi-units, or None when indistinguishable from 0."""
        ctx = self.context
        e, f, p = ctx.e, ctx.f, ctx.p
        best = None
        for i in range(e):
            for j in range(f):
                v = _int_val(self.coords[i * f + j], p, ctx.coeff_digits)
                if v is not None:
                    cand = e * v + i
                    if best is None or cand < best:
                        best = cand
        if best is None or best >= self.known_precision:
            return None
        return best

    def pi_valuation_lower(self):
        v = self.pi_valuation()
        return self.known_precision if v is None else v

    def valuation(self):
        """Valuation object in v_p units (denominator divides e)."""
        if self.known_precision < 1:
            raise PrecisionError("no known digits")
        v = self.pi_valuation()
        e = self.context.e
        if v is None:
            return Valuation(None, Fraction(self.known_precision, e))
        return Valuation(Fraction(v, e), Fraction(v, e))

    def is_unit(self):
        return self.pi_valuation() == 0

    def is_zero_at_precision(self):
        return self.pi_valuation() is None

    def reduce_mod(self, m):
        """Canonical residue mod pi^m, as an element of known precision m."""
        ctx = self.context
        if m > self.known_precision:
            raise PrecisionError(
                f"residue mod pi^{m} requested but only {self.known_precision} digits known")
        if m < 0:
            raise DomainError("modulus must be >= 0")
        e, f, p = ctx.e, ctx.f, ctx.p
        coords = []
        for i in range(e):
            digits = max(0, ceil((m - i) / e))
            mod = p ** digits
            for j in range(f):
                coords.append(self.coords[i * f + j] % mod)
        return PadicElement(ctx, tuple(coords), m)

    def agrees_with(self, other, m):
        """Whether self == other modulo pi^m."""
        diff = self - other
        if m > diff.known_precision:
            raise PrecisionError("not enough precision to compare at this modulus")
        v = diff.pi_valuation()
        return v is None or v >= m

    # -- division ----------------------------------------------------------

    def residue_poly(self):
        """Image in the residue field, as an omega-polynomial mod p."""
        f, p = self.context.f, self.context.p
        return [self.coords[j] % p for j in range(f)]

    def inverse(self):
        """Inverse of a unit, via residue-field inversion and Newton lifting."""
        ctx = self.context
        if self.pi_valuation() != 0:
            raise DomainError("only units are invertible in O_E")
        res = self.residue_poly()
        inv0 = _field_inverse(res, list(ctx.unram_poly), ctx.p)
        y = ctx.element_from_poly([inv0] + [[0] * ctx.f] * (ctx.e - 1))
        # Newton: y <- y(2 - xy), doubling pi-adic accuracy each step
        acc = 1
        while acc < ctx.precision:
            y = y * (ctx.from_int(2) - self * y)
            acc *= 2
        return PadicElement(ctx, y.coords, self.known_precision)

    def shift_down(self, k=1):
        """Divide by pi^k; requires valuation >= k."""
        ctx = self.context
        if k == 0:
            return self
        v = self.pi_valuation_lower()
        if v < k:
            raise DomainError("element is not divisible by pi^k")
        x = self
        for _ in range(k):
            x = x._shift_down_once()
        return x

    def _shift_down_once(self):
        ctx = self.context
        e, f, M, p = ctx.e, ctx.f, ctx.coeff_modulus, ctx.p
        rows = [list(self.coords[i * f:(i + 1) * f]) for i in range(e)]
        a0 = rows[0]
        if any(c % p for c in a0):
            # possible only because higher rows cancel; fall back via unit division
            raise PrecisionError("cannot shift: leading coordinate not divisible by p")
        a0p = [c // p for c in a0]
        out = [list(rows[i + 1]) for i in range(e - 1)] + [[0] * f]
        if any(a0p):
            # a0 / pi = a0p * (p / pi); p u = -b_0 = pi^e + sum_{i>=1} b_i pi^i
            # so p/pi = u^{-1} (pi^{e-1} + sum_{i>=1} b_i pi^{i-1})
            uinv = ctx._eis_unit_inverse()
            coef = _poly_reduce(_poly_mul_mod(a0p, uinv, M), list(ctx.unram_poly), M)
            add_rows = [[0] * f for _ in range(e)]
            for j in range(f):
                add_rows[e - 1][j] = coef[j] % M
            for i in range(1, e):
                bi = list(ctx.eis_poly[i])
                term = _poly_reduce(_poly_mul_mod(coef, bi, M), list(ctx.unram_poly), M)
                for j in range(f):
                    add_rows[i - 1][j] = (add_rows[i - 1][j] + term[j]) % M
            for i in range(e):
                for j in range(f):
                    out[i][j] = (out[i][j] + add_rows[i][j]) % M
        coords = tuple(out[i][j] for i in range(e) for j in range(f))
        return PadicElement(ctx, coords, self.known_precision - 1)

    # -- misc --------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.context.from_int(other)
        if not isinstance(other, PadicElement) or self.context != other.context:
            return NotImplemented
        m = min(self.known_precision, other.known_precision)
        v = (self - other).pi_valuation()
        return v is None or v >= m

    def __hash__(self):
        raise TypeError("PadicElement is not hashable (precision-sensitive equality)")

    def __repr__(self):
        ctx = self.context
        terms = []
        for i in range(ctx.e):
            for j in range(ctx.f):
                c = self.coords[i * ctx.f + j]
                if c:
                    mon = "".join(s for s in (
                        f"pi^{i}" if i else "", f"w^{j}" if j else "") if s)
                    terms.append(f"{c}{'*' + mon if mon else ''}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} + O(pi^{self.known_precision})>"


def _eis_unit_inverse_for(ctx):
    """Inverse in W of the unit u with eis constant term = -p*u (cached)."""
    if ctx._inv_unit_b0 is None:
        p, M, f = ctx.p, ctx.coeff_modulus, ctx.f
        b0 = [(-c) % (M * p) for c in ctx.eis_poly[0]]
        u = [(c // p) % M for c in b0]
        # invert u in W via residue inversion + Newton
        inv0 = _field_inverse([c % p for c in u], list(ctx.unram_poly), p)
        y = inv0
        acc = 1
        while acc < ctx.coeff_digits:
            prod = _poly_reduce(_poly_mul_mod(u, y, M), list(ctx.unram_poly), M)
            two_minus = [(-c) % M for c in prod]
            two_minus[0] = (two_minus[0] + 2) % M
            y = _poly_reduce(_poly_mul_mod(y, two_minus, M), list(ctx.unram_poly), M)
            acc *= 2
        ctx._inv_unit_b0 = y
    return ctx._inv_unit_b0


PadicContext._eis_unit_inverse = _eis_unit_inverse_for


def _field_inverse(a, monic, p):
    """Inverse of a in F_p[y]/(monic) via extended Euclid."""
    if not any(c % p for c in a):
        raise DomainError("zero is not invertible in the residue field")
    f = len(monic) - 1
    if f == 1:
        return [pow(a[0] % p, -1, p)]
    r0, r1 = [c % p for c in monic], [c % p for c in a]
    s0, s1 = [0], [1]
    while True:
        while r1 and r1[-1] % p == 0:
            r1.pop()
        if len(r1) == 1:
            inv = pow(r1[0], -1, p)
            return [(c * inv) % p for c in s1] + [0] * (f - len(s1))
        if not r1:
            raise DomainError("element shares a factor with the modulus")
        q, r = _poly_divmod_field(r0, r1, p)
        s = _poly_sub_mod(s0, _poly_mul_mod(q, s1, p), p)
        r0, r1 = r1, r
        s0, s1 = s1, s


def _poly_divmod_field(num, den, p):
    num = [c % p for c in num]
    den = [c % p for c in den]
    while den and den[-1] == 0:
        den.pop()
    dd = len(den) - 1
    inv_lead = pow(den[-1], -1, p)
    q = [0] * max(1, len(num) - dd)
    r = list(num)
    while len(r) - 1 >= dd and any(r):
        while r and r[-1] == 0:
            r.pop()
        if len(r) - 1 < dd:
            break
        coef = (r[-1] * inv_lead) % p
        shift = len(r) - 1 - dd
        q[shift] = coef
        for k in range(dd + 1):
            r[shift + k] = (r[shift + k] - coef * den[k]) % p
    return q, r


def _poly_sub_mod(a, b, p):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return [(x - y) % p for x, y in zip(a, b)]


@dataclass(frozen=True)
class Valuation:
    """v_p of an element: exact value, or a flagged lower bound at precision."""

    value: Fraction | None
    lower_bound: Fraction

    @property
    def is_exact(self):
        return self.value is not None

    def __repr__(self):
        if self.is_exact:
            return f"v_p = {self.value}"
        return f"v_p >= {self.lower_bound} (indistinguishable from 0)"


# -- gamma calculus --------------------------------------------------------


def gamma_exponent(e_rel, n):
    """Smallest m with O_L/pi_L^n injecting into O_E/pi_E^m: (n-1)e + 1."""
    if e_rel < 1 or n < 1:
        raise DomainError("gamma_exponent needs e_rel >= 1 and n >= 1")
    return (n - 1) * e_rel + 1


def is_extension(ctx_L, ctx_E):
    """Whether we support the embedding O_L -> O_E (same unramified part)."""
    if ctx_L.p != ctx_E.p:
        return False
    if ctx_L == ctx_E:
        return True
    if ctx_L.e != 1:
        return False
    if ctx_L.f == 1:
        return True
    return ctx_L.f == ctx_E.f and ctx_L.unram_poly == ctx_E.unram_poly


def relative_ramification(ctx_L, ctx_E):
    if not is_extension(ctx_L, ctx_E):
        raise DomainError("unsupported extension pair")
    return ctx_E.e // ctx_L.e


def embed(x, ctx_E):
    """Image of x in a marked extension context."""
    ctx_L = x.context
    if ctx_L == ctx_E:
        return x
    if not is_extension(ctx_L, ctx_E):
        raise DomainError("unsupported extension pair")
    e_rel = relative_ramification(ctx_L, ctx_E)
    M = ctx_E.coeff_modulus
    coords = [0] * ctx_E.degree
    if ctx_L.f == 1 and ctx_E.f >= 1:
        coords[0] = x.coords[0] % M
    else:
        for j in range(ctx_L.f):
            coords[j] = x.coords[j] % M
    prec = min(ctx_E.precision, x.known_precision * e_rel)
    return PadicElement(ctx_E, tuple(coords), prec)


def gamma_injectivity_exhaustive(ctx_L, ctx_E, n):
    """Check injectivity of O_L/pi_L^n -> O_E/pi_E^gamma by enumeration.

    Returns (ok, witness) where witness is a colliding pair on failure.
    """
    e_rel = relative_ramification(ctx_L, ctx_E)
    g = gamma_exponent(e_rel, n)
    seen = {}
    for r in ctx_L.enumerate_residues(n):
        key = embed(r, ctx_E).reduce_mod(g).coords
        if key in seen:
            return False, (r, seen[key])
        seen[key] = r
    return True, None


def congruence_transfer_holds(alpha, beta, ctx_L, n):
    """Two-way check: a-b in pi_E^m O_E  <=>  a-b in pi_L^n O_L, m = gamma.

    alpha, beta live in the extension context; alpha-beta must come from O_L.
    Returns (equivalence_ok, lhs, rhs).
    """
    ctx_E = alpha.context
    e_rel = relative_ramification(ctx_L, ctx_E)
    m = gamma_exponent(e_rel, n)
    diff = alpha - beta
    v = diff.pi_valuation()
    lhs = v is None or v >= m
    # alpha - beta comes from O_L, so v_piL = v_piE / e_rel
    rhs = v is None or v >= n * e_rel
    return lhs == rhs, lhs, rhs


def congruence_equiv_audit(ctx_L, ctx_E, n, samples=1000, seed=0):
    """Sampled audit of the two-way congruence transfer at exponent gamma."""
    e_rel = relative_ramification(ctx_L, ctx_E)
    m = gamma_exponent(e_rel, n)
    if n * e_rel + 1 > ctx_E.precision:
        raise PrecisionError("context precision too small for this depth")
    rng = random.Random(seed)
    failures = []
    for _ in range(samples):
        beta = ctx_E.random_element(rng)
        delta_L = ctx_L.random_element(rng)
        alpha = beta + embed(delta_L, ctx_E)
        ok, lhs, rhs = congruence_transfer_holds(alpha, beta, ctx_L, n)
        if not ok:
            failures.append({
                "delta_coords": list(delta_L.coords),
                "lhs": lhs, "rhs": rhs,
            })
    return {
        "p": ctx_L.p, "e_rel": e_rel, "n": n, "gamma": m,
        "samples": samples, "failures": failures,
        "verdict": "pass" if not failures else "fail",
    }


# -- field elements (quotients by powers of pi) ----------------------------


class PadicNumber:
    """An element of E presented as (integral numerator) / pi^denom_pow."""

    __slots__ = ("num", "denom_pow")

    def __init__(self, num, denom_pow=0):
        self.num = num
        self.denom_pow = denom_pow

    @classmethod
    def integral(cls, x):
        return cls(x, 0)

    @property
    def context(self):
        return self.num.context

    def _align(self, other):
        if isinstance(other, PadicElement):
            other = PadicNumber(other)
        if isinstance(other, int):
            other = PadicNumber(self.context.from_int(other))
        k = max(self.denom_pow, other.denom_pow)
        a = self.num * self.context.pi_power(k - self.denom_pow)
        b = other.num * other.context.pi_power(k - other.denom_pow)
        return a, b, k

    def __add__(self, other):
        a, b, k = self._align(other)
        return PadicNumber(a + b, k)

    def __sub__(self, other):
        a, b, k = self._align(other)
        return PadicNumber(a - b, k)

    def __neg__(self):
        return PadicNumber(-self.num, self.denom_pow)

    def __mul__(self, other):
        if isinstance(other, PadicElement):
            other = PadicNumber(other)
        if isinstance(other, int):
            other = PadicNumber(self.context.from_int(other))
        return PadicNumber(self.num * other.num, self.denom_pow + other.denom_pow)

    def inverse(self):
        v = self.num.pi_valuation()
        if v is None:
            raise DomainError("cannot invert an element indistinguishable from 0")
        unit = self.num.shift_down(v)
        # 1 / (u pi^v / pi^d) = u^{-1} pi^{d-v}
        d = self.denom_pow
        if d >= v:
            return PadicNumber(unit.inverse() * self.context.pi_power(d - v), 0)
        return PadicNumber(unit.inverse(), v - d)

    def pi_valuation(self):
        v = self.num.pi_valuation()
        if v is None:
            return None
        return v - self.denom_pow

    def vp(self):
        v = self.pi_valuation()
        if v is None:
            return None
        return Fraction(v, self.context.e)

    def is_integral(self):
        v = self.pi_valuation()
        return v is None or v >= 0

    def to_integral(self):
        """Return the underlying O_E element (requires integrality)."""
        if not self.is_integral():
            raise DomainError("element is not integral")
        if self.denom_pow == 0:
            return self.num
        return self.num.shift_down(self.denom_pow)

    def normalized(self):
        """Clear the denominator as far as the numerator's valuation allows."""
        v = self.num.pi_valuation()
        if v is None or self.denom_pow == 0:
            return self
        k = min(v, self.denom_pow)
        return PadicNumber(self.num.shift_down(k), self.denom_pow - k)

    def __eq__(self, other):
        d = self - other
        v = d.num.pi_valuation()
        return v is None

    def __repr__(self):
        return f"({self.num!r})/pi^{self.denom_pow}"
