import numpy as np
import pytest

from hmnconvex import hfun
from hmnconvex.errors import DomainError, NonPositiveValue, ParseError
from hmnconvex.hfun import eval_h, identity, one, parse_h, power, reciprocal
from hmnconvex.sampling import SamplePlan

PLAN = SamplePlan(grid_per_axis=32, random_count=64)


def test_presets_evaluate():
    t = np.array([0.1, 0.5, 0.9])
    np.testing.assert_allclose(eval_h(identity(), t), t)
    np.testing.assert_allclose(eval_h(power(0.5), t), np.sqrt(t))
    np.testing.assert_allclose(eval_h(one(), t), 1.0)
    np.testing.assert_allclose(eval_h(reciprocal(), t), 1 / t)
    np.testing.assert_allclose(eval_h(parse_h("expr:t*(2-t)"), t), t * (2 - t))


def test_specs_round_trip():
    for spec in ("id", "one", "recip", "pow:0.5", "pow:-1", "expr:(t ^ 2.0)"):
        assert parse_h(parse_h(spec).spec).spec == parse_h(spec).spec


def test_zero_allowed_only_with_finite_limit():
    assert eval_h(power(0.5), 0.0) == 0.0
    with pytest.raises(DomainError):
        eval_h(reciprocal(), 0.0)
    with pytest.raises(DomainError):
        eval_h(identity(), 4.0)


def test_expression_must_stay_positive():
    with pytest.raises(NonPositiveValue):
        eval_h(parse_h("expr:t-0.5"), 0.2)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_h("pow:abc")
    with pytest.raises(ParseError):
        parse_h("expr:x+1")


def test_compose_powers_multiply():
    h = hfun.compose_h(power(2.0), power(0.5))
    assert h.kind == "pow" and h.r == pytest.approx(1.0)
    assert hfun.compose_h(identity(), power(3.0)).spec == "pow:3"
    mixed = hfun.compose_h(parse_h("expr:t*(2-t)"), power(2.0))
    t = np.linspace(0.05, 0.95, 7)
    np.testing.assert_allclose(eval_h(mixed, t), t**2 * (2 - t**2))


def test_scale_max_min():
    t = np.linspace(0.05, 0.95, 9)
    np.testing.assert_allclose(eval_h(hfun.scale_h(3.0, power(0.5)), t), 3 * np.sqrt(t))
    np.testing.assert_allclose(eval_h(hfun.pointwise_max(identity(), power(2.0)), t), np.maximum(t, t**2))
    np.testing.assert_allclose(eval_h(hfun.pointwise_min(identity(), power(2.0)), t), np.minimum(t, t**2))
    assert hfun.pointwise_max(identity(), identity()) == identity()


def test_multiplicativity():
    assert hfun.check_supermultiplicative(power(0.5), PLAN).holds
    assert hfun.check_submultiplicative(power(0.5), PLAN).holds
    h = parse_h("expr:1+t")
    # (1+xy) >= (1+x)(1+y) fails for any x, y > 0
    v = hfun.check_supermultiplicative(h, PLAN)
    assert not v.holds and v.witness is not None
    assert hfun.check_submultiplicative(h, PLAN).holds


def test_identity_domination_and_sum_bound():
    assert hfun.check_dominates_identity(power(0.5), hfun.ABOVE_ID, PLAN).holds
    assert not hfun.check_dominates_identity(power(2.0), hfun.ABOVE_ID, PLAN).holds
    assert hfun.check_symmetric_sum_bound(identity(), 1.0, hfun.AT_MOST, PLAN).holds
    assert not hfun.check_symmetric_sum_bound(power(0.5), 1.0, hfun.AT_MOST, PLAN).holds
    assert hfun.check_symmetric_sum_bound(power(0.5), 1.0, hfun.AT_LEAST, PLAN).holds


def test_control_function():
    assert hfun.check_control_function(power(0.5), PLAN).holds
    assert not hfun.check_control_function(one(), PLAN).holds
    assert not hfun.check_control_function(reciprocal(), PLAN).holds
