"""Mixed-algebra series: normal forms, inversion, evaluation, recentering."""

import random

import pytest

from loccon.domains import describe, ModelPoint
from loccon.padic import DomainError, PadicContext, PadicNumber, PrecisionError
from loccon.series import AdicSeries, AlgebraModel

Z5 = PadicContext(5, precision=12)
Z3 = PadicContext(3, precision=12)

DISC = AlgebraModel(Z5, open_vars=("T",), degree_cap=8)
POLYDISC = AlgebraModel(Z5, bounded_vars=("z",), open_vars=("T",), degree_cap=6)
ANN = AlgebraModel(Z5, bounded_vars=("zeta1", "zeta2"),
                   relation=("annulus", 2), degree_cap=8)
COVER = AlgebraModel(Z3, open_vars=("Y", "T"),
                     relation=("cover", 2, "Y", {(0, 1): -1}), degree_cap=8)


def same(a, b):
    return (a - b).pi_valuation() is None


# -- model validation --------------------------------------------------------


def test_variable_kinds_disjoint():
    with pytest.raises(DomainError):
        AlgebraModel(Z5, bounded_vars=("T",), open_vars=("T",))


def test_annulus_needs_two_bounded_vars():
    with pytest.raises(DomainError):
        AlgebraModel(Z5, bounded_vars=("z",), relation=("annulus", 1))


def test_cover_relation_must_avoid_cover_variable():
    with pytest.raises(DomainError):
        AlgebraModel(Z3, open_vars=("Y", "T"),
                     relation=("cover", 2, "Y", {(1, 0): 1}))


# -- normal forms ------------------------------------------------------------


def test_annulus_normal_form_eliminates_mixed_monomials():
    z1, z2 = ANN.var("zeta1"), ANN.var("zeta2")
    prod = z1 * z2
    assert prod == ANN.constant(Z5.from_int(25))
    sq = (z1 * z2) * z1
    assert sq == z1.scale(25)


def test_cover_normal_form_reduces_high_powers():
    y, t = COVER.var("Y"), COVER.var("T")
    assert y * y == -t
    assert y ** 3 == -(t * y)


def test_degree_cap_truncates_open_monomials():
    t = DISC.var("T")
    assert t ** (DISC.degree_cap + 1) == DISC.zero()


# -- arithmetic --------------------------------------------------------------


def test_series_ring_axioms_sampled():
    rng = random.Random(0)

    def rand_series(model):
        terms = {}
        for _ in range(4):
            mono = tuple(rng.randrange(0, 3) for _ in model.vars)
            terms[mono] = Z5.random_element(rng)
        return model.series(terms)

    for model in (DISC, POLYDISC):
        for _ in range(10):
            a, b, c = (rand_series(model) for _ in range(3))
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a


def test_inverse_of_one_minus_open_var():
    t = DISC.var("T")
    inv = (DISC.constant(1) - t).inverse()
    expect = DISC.series({(i,): 1 for i in range(DISC.degree_cap + 1)})
    assert inv == expect


def test_inverse_requires_topological_nilpotence():
    z = POLYDISC.var("z")
    with pytest.raises(DomainError):
        (POLYDISC.constant(1) - z).inverse()
    # with a pi factor on the bounded variable the inverse exists
    inv = (POLYDISC.constant(1) - z.scale(5)).inverse()
    assert (POLYDISC.constant(1) - z.scale(5)) * inv == POLYDISC.constant(1)


def test_inverse_round_trip_random():
    rng = random.Random(1)
    for _ in range(5):
        s = DISC.constant(Z5.random_unit(rng)) \
            + DISC.var("T").scale(Z5.random_element(rng))
        assert s * s.inverse() == DISC.constant(1)


# -- evaluation --------------------------------------------------------------


def test_evaluate_polynomial_oracle():
    s = DISC.series({(0,): 2, (1,): 3, (2,): 1})  # 2 + 3T + T^2
    val = s.evaluate({"T": Z5.from_int(5)})
    assert same(val, Z5.from_int(2 + 15 + 25))


def test_evaluate_rejects_points_outside_the_domain():
    s = DISC.var("T")
    with pytest.raises(DomainError):
        s.evaluate({"T": Z5.one()})  # open variable needs v >= 1


def test_evaluate_enforces_cover_relation():
    s = COVER.var("Y")
    with pytest.raises(DomainError):
        s.evaluate({"Y": Z3.from_int(3), "T": Z3.from_int(9)})
    ok = s.evaluate({"Y": Z3.from_int(3), "T": Z3.from_int(-9)})
    assert same(ok, Z3.from_int(3))


def test_evaluate_precision_guarantee():
    s = DISC.series({(i,): 1 for i in range(DISC.degree_cap + 1)})
    val = s.evaluate({"T": Z5.from_int(5)})
    # truncation error is O(T^(D+1)), v(T) = 1
    assert val.known_precision == DISC.degree_cap + 1


def test_evaluate_over_extension():
    ram = PadicContext(5, e=2, precision=12)
    s = DISC.series({(1,): 1})
    val = s.evaluate({"T": ram.pi()})
    assert val.pi_valuation() == 1


# -- constancy ---------------------------------------------------------------


def test_is_constant_mod_oracles():
    s = DISC.constant(7) + DISC.var("T").scale(25)
    assert s.is_constant_mod(2)
    res = s.is_constant_mod(3)
    assert not res
    assert res.witness == "T"
    assert same(s.is_constant_mod(2).constant_value, Z5.from_int(7))


def test_is_constant_mod_needs_precision():
    s = DISC.series({(1,): Z5.from_int(5).reduce_mod(2)})
    with pytest.raises(PrecisionError):
        s.is_constant_mod(10)


def test_pointwise_audit_identity_function_passes():
    dom = describe(DISC, ModelPoint(DISC, {"T": Z5.zero()}), 2, "U")
    ram3 = PadicContext(5, e=3, precision=12)
    rep = AdicSeries(DISC, {(1,): Z5.one()}).pointwise_constancy_audit(
        dom, 2, [Z5, ram3], 15, seed=0)
    assert rep["verdict"] == "pass"


# -- recentering -------------------------------------------------------------


def test_recenter_free_matches_substitution():
    rng = random.Random(2)
    s = DISC.series({(0,): 3, (1,): 7, (2,): 2})
    rc = s.recenter_rescale({"T": Z5.from_int(5)}, {"T": 2})
    for _ in range(5):
        u = Z5.random_with_pi_valuation(1, rng)
        lhs = rc.evaluate({"T": u})
        rhs = s.evaluate({"T": Z5.from_int(5) + Z5.from_int(25) * u})
        assert lhs.reduce_mod(8).coords == rhs.reduce_mod(8).coords


def test_recenter_free_makes_scaled_vars_open():
    s = POLYDISC.var("z")
    rc = s.recenter_rescale({"z": Z5.one()}, {"z": 1})
    assert "z" in rc.model.open_vars


def test_recenter_annulus_matches_exact_substitution():
    rng = random.Random(3)
    s = ANN.var("zeta1").scale(3) + ANN.var("zeta2")
    x1 = Z5.from_int(5)
    x2 = Z5.from_int(5)  # x1 * x2 = pi^2
    rc = s.recenter_rescale({"zeta1": x1, "zeta2": x2}, {"zeta1": 2})
    for _ in range(5):
        u = Z5.random_with_pi_valuation(1, rng)
        z1 = x1 + Z5.from_int(25) * u
        z2 = (PadicNumber(Z5.from_int(25)) * PadicNumber(z1).inverse()).to_integral()
        lhs = rc.evaluate({"zeta1": u})
        rhs = s.evaluate({"zeta1": z1, "zeta2": z2})
        assert lhs.reduce_mod(7).coords == rhs.reduce_mod(7).coords


def test_recenter_annulus_requires_compatible_center():
    s = ANN.var("zeta1")
    with pytest.raises(DomainError):
        s.recenter_rescale({"zeta1": Z5.one(), "zeta2": Z5.one()}, {"zeta1": 1})


def test_recenter_cover_matches_exact_substitution():
    rng = random.Random(4)
    s = COVER.var("T") + COVER.var("Y").scale(2)
    y0, t0 = Z3.from_int(3), Z3.from_int(-9)
    rc = s.recenter_rescale({"Y": y0, "T": t0}, {"Y": 2})
    for _ in range(5):
        w = Z3.random_with_pi_valuation(1, rng)
        y = y0 + Z3.from_int(9) * w
        t = -(y * y)
        lhs = rc.evaluate({"Y": w})
        rhs = s.evaluate({"Y": y, "T": t})
        assert lhs.reduce_mod(7).coords == rhs.reduce_mod(7).coords
