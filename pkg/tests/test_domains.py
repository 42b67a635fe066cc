"""Residue domains around base points: membership, closed forms, sampling."""

import random
from fractions import Fraction

import pytest

from loccon.domains import (
    ModelPoint,
    cover_compare,
    cover_fiber,
    describe,
    ideal_generators,
    sqrt_in_context,
)
from loccon.padic import DomainError, PadicContext, PrecisionError
from loccon.series import AlgebraModel

Z5 = PadicContext(5, precision=14)
Z3 = PadicContext(3, precision=14)
RAM2 = PadicContext(5, e=2, precision=14)

DISC = AlgebraModel(Z5, open_vars=("T",), degree_cap=6)
ANN = AlgebraModel(Z5, bounded_vars=("zeta1", "zeta2"),
                   relation=("annulus", 2), degree_cap=6)
COVER = AlgebraModel(Z3, open_vars=("Y", "T"),
                     relation=("cover", 2, "Y", {(0, 1): -1}), degree_cap=6)

ORIGIN = ModelPoint(DISC, {"T": Z5.zero()})


def test_model_point_validation():
    with pytest.raises(DomainError):
        ModelPoint(DISC, {"T": Z5.one()})  # open var needs positive valuation
    with pytest.raises(DomainError):
        ModelPoint(DISC, {})


def test_ideal_generators_are_differences():
    gens = ideal_generators(DISC, ORIGIN)
    assert len(gens) == 1
    assert gens[0] == DISC.var("T")


def test_disc_closed_form_thresholds():
    u = describe(DISC, ORIGIN, 3, "U")
    v = describe(DISC, ORIGIN, 3, "V")
    assert u.closed_form.threshold == Fraction(2) and u.closed_form.strict
    assert v.closed_form.threshold == Fraction(3) and not v.closed_form.strict


def test_disc_membership_oracle():
    dom = describe(DISC, ORIGIN, 2, "U")
    inside = ModelPoint(DISC, {"T": Z5.from_int(25)})
    boundary = ModelPoint(DISC, {"T": Z5.from_int(5)})
    assert dom.member(inside)
    assert not dom.member(boundary)  # v = n-1 sits outside the wide open
    vdom = describe(DISC, ORIGIN, 2, "V")
    assert vdom.member(inside)
    assert not vdom.member(boundary)


def test_membership_over_ramified_extension_uses_gamma():
    dom = describe(DISC, ORIGIN, 2, "U")
    # gamma = (n-1)e + 1 = 3 over e_rel = 2
    rng = random.Random(0)
    y3 = ModelPoint(DISC, {"T": RAM2.random_with_pi_valuation(3, rng)})
    y2 = ModelPoint(DISC, {"T": RAM2.random_with_pi_valuation(2, rng)})
    assert dom.member(y3)
    assert not dom.member(y2)


def test_membership_undecidable_raises():
    dom = describe(DISC, ORIGIN, 6, "V")
    fuzzy = Z5.from_int(0).reduce_mod(3)  # only 3 digits known
    with pytest.raises(PrecisionError):
        dom.member(ModelPoint(DISC, {"T": fuzzy}))


def test_closed_form_agrees_with_generic_membership():
    rng = random.Random(1)
    for n in (1, 2, 3):
        for kind in ("U", "V"):
            dom = describe(DISC, ORIGIN, n, kind)
            for _ in range(20):
                pt = ModelPoint(DISC, {
                    "T": RAM2.random_with_pi_valuation(rng.randrange(1, 9), rng)})
                assert dom.member(pt) == dom.closed_form_member(pt)


def test_annulus_closed_form_radius():
    # center zeta1 = pi (v=1), m = 2: threshold max(thr, thr - m + 2 v(x1)) = thr
    center = ModelPoint(ANN, {"zeta1": Z5.from_int(5), "zeta2": Z5.from_int(5)})
    dom = describe(ANN, center, 4, "U")
    assert dom.closed_form.variable == "zeta1"
    assert dom.closed_form.threshold == Fraction(3)
    # center with v(x1) = 2 pushes the second branch above the first:
    # thr = 3, alt = 3 - 2 + 4 = 5
    c2 = ModelPoint(ANN, {"zeta1": Z5.from_int(25), "zeta2": Z5.one()})
    dom2 = describe(ANN, c2, 4, "U")
    assert dom2.closed_form.threshold == Fraction(5)


def test_annulus_membership_matches_closed_form():
    center = ModelPoint(ANN, {"zeta1": Z5.from_int(5), "zeta2": Z5.from_int(5)})
    rng = random.Random(2)
    for n in (1, 2, 3):
        dom = describe(ANN, center, n, "U")
        for pt in dom.sample(Z5, 10, seed=n):
            assert dom.member(pt)
            assert dom.closed_form_member(pt)


def test_cover_closed_form_at_ramification_point():
    center = ModelPoint(COVER, {"Y": Z3.zero(), "T": Z3.zero()})
    dom = describe(COVER, center, 3, "U")
    assert dom.closed_form.variable == "Y"
    assert dom.closed_form.threshold == Fraction(2)


def test_sample_produces_members():
    rng_exts = [Z5, RAM2, PadicContext(5, e=3, precision=14)]
    for kind in ("U", "V"):
        for n in (1, 2):
            dom = describe(DISC, ORIGIN, n, kind)
            for ext in rng_exts:
                pts = dom.sample(ext, 10, seed=7)
                assert len(pts) == 10
                for pt in pts:
                    assert dom.member(pt)


def test_sample_is_deterministic():
    dom = describe(DISC, ORIGIN, 2, "U")
    a = dom.sample(Z5, 5, seed=3)
    b = dom.sample(Z5, 5, seed=3)
    assert [p.coords["T"].coords for p in a] == [p.coords["T"].coords for p in b]


def test_sample_hits_the_boundary_valuation():
    dom = describe(DISC, ORIGIN, 3, "U")
    vals = {p.coords["T"].pi_valuation() for p in dom.sample(Z5, 40, seed=0)}
    assert dom.pi_threshold(1) in vals  # v = gamma itself occurs


def test_to_json_shape():
    dom = describe(DISC, ORIGIN, 2, "U")
    js = dom.to_json()
    assert js["kind"] == "U" and js["n"] == 2
    assert js["generators"] == ["1*T"]
    assert js["closed_form"]["threshold"] == {"num": 1, "den": 1}


# -- square roots and covers -------------------------------------------------


def test_sqrt_in_context_oracles():
    assert sqrt_in_context(Z5.from_int(4), Z5) is not None
    s = sqrt_in_context(Z5.from_int(4), Z5)
    assert (s * s - Z5.from_int(4)).pi_valuation() is None
    assert sqrt_in_context(Z5.from_int(2), Z5) is None  # 2 is not a QR mod 5
    assert sqrt_in_context(Z5.from_int(5), Z5) is None  # odd valuation
    s25 = sqrt_in_context(Z5.from_int(25), Z5)
    assert s25.pi_valuation() == 1


def test_sqrt_in_unramified_extension():
    un = PadicContext(5, f=2, precision=14)
    s = sqrt_in_context(un.from_int(2), un)
    assert s is not None
    assert (s * s - un.from_int(2)).pi_valuation() is None


def test_cover_fiber():
    pts = cover_fiber(COVER, Z3, Z3.from_int(-9))
    assert len(pts) == 2
    for pt in pts:
        y = pt.coords["Y"]
        assert (y * y - Z3.from_int(9)).pi_valuation() is None


def test_cover_compare_certificate():
    center = ModelPoint(COVER, {"Y": Z3.zero(), "T": Z3.zero()})
    rep = cover_compare(COVER, center, 2, Z3, samples=40, seed=0)
    assert rep["verdict"] == "pass"
    assert rep["preimage_equality"]["n0"] == 1
    assert rep["preimage_equality"]["per_n"]["1"] == {"U": True, "V": True}
    assert rep["preimage_equality"]["per_n"]["2"]["U"] is False
    assert "v(T - t0) = 2 * v(Y - y0)" in rep["preimage_equality"]["certificate"]
