import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ndalg.smoothfn import (
    Constant, Decision, Glued, Interval, SmoothStep, X, add, affine, affine_precompose,
    compose, cutoff_at, diff, evaluate, evaluate_exact, expr_from_json, expr_to_json,
    is_zero_on, make_rho, make_smooth_step, mul, polynomial, scale,
)
from ndalg.smoothfn.io import ExprFormatError

from conftest import step_oracle


# eval ------------------------------------------------------------------------


def test_constant_evaluates_everywhere():
    assert evaluate(Constant(3), 17.2) == 3


def test_rho_zero_at_origin():
    assert evaluate(make_rho(), 0) == 0


def test_rho_transition_value_matches_step_oracle():
    # s(2(|0.75| - 1/2)) = s(1/2), and the oracle's f/(f + f) gives exactly 1/2 there
    expected = step_oracle(2 * (0.75 - 0.5))
    assert expected == 0.5
    assert evaluate(make_rho(), 0.75) == expected
    assert 0 < evaluate(make_rho(), 0.75) < 1


@pytest.mark.parametrize("t", [0.05, 0.2, 0.37, 0.5, 0.81, 0.999])
def test_step_interior_matches_oracle(t):
    assert evaluate(make_smooth_step(), t) == pytest.approx(step_oracle(t), rel=1e-14, abs=1e-300)


def test_flat_values_are_exact_rationals():
    rho = make_rho()
    assert evaluate_exact(rho, Fraction(1, 3)) == 0 and isinstance(evaluate_exact(rho, 0.3),
                                                                   Fraction)
    assert evaluate_exact(rho, -5) == Fraction(1)
    assert isinstance(evaluate_exact(rho, 0.75), float)


# diff ------------------------------------------------------------------------


def test_diff_constant():
    assert diff(Constant(5)) == Constant(0)


def test_diff_square():
    d = diff(X * X)
    for x in (-2.5, 0, 1, 3.25):
        assert evaluate(d, x) == 2 * x


def test_diff_rho_vanishes_on_tail():
    assert evaluate(diff(make_rho()), 2) == 0


def test_diff_of_step_is_higher_order_step():
    assert diff(SmoothStep(0), 3) == SmoothStep(3)


# step ------------------------------------------------------------------------


def test_step_flat_zones():
    s = make_smooth_step()
    assert evaluate(s, -1) == 0
    assert evaluate(s, 2) == 1
    zones = {(z.interval.lo, z.interval.hi, z.value) for z in s.zones}
    assert zones == {(-math.inf, 0, 0), (1, math.inf, 1)}


def test_step_midpoint():
    assert evaluate(make_smooth_step(), Fraction(1, 2)) == 0.5


def test_step_strictly_increasing_inside():
    s = make_smooth_step()
    values = [evaluate(s, Fraction(i, 200)) for i in range(20, 181)]
    assert all(a < b for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("order", [1, 2, 3, 4])
@pytest.mark.parametrize("edge,side", [(0, 1), (1, -1)])
def test_step_derivatives_die_at_edges(order, edge, side):
    d = diff(make_smooth_step(), order)
    near = [abs(evaluate(d, edge + side * 10.0 ** -k)) for k in (1, 2, 3)]
    assert near[1] < 1e-20 and near[2] < 1e-300
    assert evaluate(d, edge) == 0


# rho ---------------------------------------------------------------------------


def test_rho_clauses(rho):
    assert evaluate(rho, 0.25) == 0
    assert evaluate(rho, -3) == 1
    assert evaluate(rho, -0.875) == evaluate(rho, 0.875)
    assert is_zero_on(rho, (-0.5, 0.5)) is Decision.YES
    assert is_zero_on(rho - 1, (1, 40)) is Decision.YES
    assert is_zero_on(rho - 1, (-40, -1)) is Decision.YES


def test_default_rho_is_even():
    rho = make_rho()
    for i in range(1, 200):
        x = Fraction(i, 100)
        assert evaluate(rho, x) == evaluate(rho, -x)


def test_rho_bounded(rho):
    for i in range(-300, 301):
        assert 0 <= evaluate(rho, Fraction(i, 100)) <= 1


# is_zero_on ---------------------------------------------------------------------


def test_zero_expression_is_zero():
    assert is_zero_on(Constant(0), (-5, 5)) is Decision.YES


def test_rho_zero_zone():
    assert is_zero_on(make_rho(), (Fraction(-1, 4), Fraction(1, 4))) is Decision.YES


def test_rho_not_zero_on_zero_two():
    assert is_zero_on(make_rho(), (0, 2)) is Decision.NO


def test_unknown_is_an_honest_refusal():
    # s(t) + s(1 - t) - 1 vanishes identically but not by any structural rule we know
    s = make_smooth_step()
    e = add(s, affine(-1, 1, s), Constant(-1))
    assert is_zero_on(e, (Fraction(1, 4), Fraction(3, 4))) is Decision.UNKNOWN


def test_algebraic_cancellation_is_structural():
    e = (X + 1) * (X + 1) - X * X - 2 * X - 1
    assert is_zero_on(e, (-100, 100)) is Decision.YES


rho_translates = st.lists(
    st.tuples(st.fractions(-3, 3, max_denominator=8), st.integers(1, 6)), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(rho_translates, st.fractions(-4, 4, max_denominator=16),
       st.fractions(0, 2, max_denominator=16))
def test_is_zero_on_soundness(translates, lo, width):
    e = mul(*(cutoff_at(make_rho(), a, k) for a, k in translates))
    interval = Interval(lo, lo + width)
    decision = is_zero_on(e, interval)
    samples = [evaluate(e, x) for x in interval.grid(100)]
    if decision is Decision.YES:
        assert all(v == 0 for v in samples)
    if decision is Decision.NO:
        assert any(v != 0 for v in samples)
    assert is_zero_on(e - e, interval) is Decision.YES
    assert is_zero_on(Constant(0) * e, interval) is Decision.YES


# affine_precompose ---------------------------------------------------------------


def test_affine_into_zero_zone():
    assert evaluate(affine_precompose(make_rho(), 4, 0), Fraction(1, 8)) == 0


def test_affine_identity():
    e = make_rho() * X + polynomial(1, 2)
    same = affine_precompose(e, 1, 0)
    for x in (-1.3, 0.2, 0.6, 2):
        assert evaluate(same, x) == evaluate(e, x)


def test_affine_into_one_zone():
    # 2 * 3/2 - 2 = 1 lands on rho's one zone
    assert evaluate(affine_precompose(make_rho(), 2, -2), Fraction(3, 2)) == 1


def test_affine_rejects_zero_slope():
    with pytest.raises(ValueError):
        affine_precompose(make_rho(), 0, 1)


def test_affine_moves_flat_zones():
    e = affine_precompose(make_rho(), -4, 2)
    zero = [z for z in e.zones if z.value == 0]
    assert zero[0].interval == Interval(Fraction(3, 8), Fraction(5, 8))


# glued ---------------------------------------------------------------------------


def test_glued_needs_certificate():
    with pytest.raises(ValueError, match="not certified zero"):
        Glued(0, X, Constant(0), Interval(-1, 1))
    with pytest.raises(ValueError, match="strictly inside"):
        Glued(1, make_rho(), make_rho(), Interval(-0.5, 0.5))


def _glued_example():
    rho = cutoff_at(make_rho(), Fraction(1, 3), 3)
    dz = Interval(Fraction(1, 3) - Fraction(1, 6), Fraction(1, 3) + Fraction(1, 6))
    return Glued(Fraction(1, 3), rho * polynomial(1, 1, 1), rho * (X - 4), dz)


def test_glued_pieces_agree_on_deadzone():
    g = _glued_example()
    for x in g.deadzone.grid(100):
        assert evaluate_exact(g.left, x) == evaluate_exact(g.right, x) == 0


def test_glued_diff_keeps_certificate():
    g = _glued_example()
    for order in range(1, 4):
        d = diff(g, order)
        assert isinstance(d, Glued) and d.deadzone == g.deadzone
        for x in d.deadzone.grid(100):
            assert evaluate_exact(d.left, x) == evaluate_exact(d.right, x) == 0


# finite differences -------------------------------------------------------------

leaves = st.one_of(
    st.fractions(-3, 3, max_denominator=4).map(Constant),
    st.just(X),
    st.tuples(st.sampled_from([Fraction(1, 2), 1, Fraction(3, 2), 2, -1, -2]),
              st.fractions(-1, 1, max_denominator=4)).map(
        lambda p: affine(p[0], p[1], make_smooth_step())),
    st.tuples(st.sampled_from([1, 2, -1]), st.fractions(-1, 1, max_denominator=4)).map(
        lambda p: affine(p[0], p[1], make_rho())),
)


def _extend(children):
    return st.one_of(
        st.tuples(children, children).map(lambda p: add(*p)),
        st.tuples(children, children).map(lambda p: mul(*p)),
        st.tuples(st.fractions(-2, 2, max_denominator=4), children).map(lambda p: scale(*p)),
        st.tuples(st.sampled_from([make_smooth_step(), make_rho()]),
                  st.tuples(children, children).map(lambda p: add(*p))).map(
            lambda p: compose(p[0], p[1])),
    )


expressions = st.recursive(leaves, _extend, max_leaves=5)


@settings(max_examples=150, deadline=None)
@given(expressions, st.floats(-2, 2))
def test_diff_matches_central_differences(e, x):
    delta = 1e-5
    d = evaluate(diff(e), x)
    fd = (evaluate(e, x + delta) - evaluate(e, x - delta)) / (2 * delta)
    assert abs(d - fd) <= 1e-6 * max(1.0, abs(d))


# json ---------------------------------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(expressions)
def test_json_round_trip(e):
    back = expr_from_json(expr_to_json(e))
    assert back == e


def test_json_shorthands():
    assert expr_from_json("x") == X
    assert expr_from_json("1/3") == Constant(Fraction(1, 3))
    assert expr_from_json({"node": "rho"}) == make_rho()
    assert evaluate(expr_from_json({"node": "poly", "coeffs": [0, -1, 0, 1]}), 2) == 6


def test_json_glued_round_trip():
    g = _glued_example()
    assert expr_from_json(expr_to_json(g)) == g


@pytest.mark.parametrize("bad,path", [
    ({"node": "nope"}, "$.node"),
    ({"node": "scale", "c": "abc", "expr": "x"}, "$.c"),
    ({"node": "sum", "terms": []}, "$.terms"),
    ({"node": "affine", "slope": 0, "offset": 1, "expr": "x"}, "$"),
    ({"node": "product", "factors": ["x", {"node": "step", "order": -1}]}, "$.factors[1].order"),
])
def test_json_errors_name_the_field(bad, path):
    with pytest.raises(ExprFormatError) as info:
        expr_from_json(bad)
    assert info.value.path == path
