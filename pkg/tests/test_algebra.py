import math

import pytest

from hmnconvex import algebra
from hmnconvex.errors import RangeMismatch
from hmnconvex.funcs import builtin, from_expr
from hmnconvex.hfun import identity, power
from hmnconvex.sampling import SamplePlan

PLAN = SamplePlan(grid_per_axis=24, random_count=64)


def test_ordering():
    f = builtin("exp", (0.1, 2))
    assert algebra.check_ordering(f, from_expr("x^2", (0.1, 2)), PLAN).kind == algebra.SIMILAR
    assert algebra.check_ordering(f, builtin("neg_exp", (0.1, 2)), PLAN).kind == algebra.OPPOSITE
    rel = algebra.check_ordering(from_expr("x*(1-x)", (0.1, 0.9)), builtin("exp", (0.1, 0.9)), PLAN)
    assert rel.kind == algebra.NEITHER and rel.witness is not None


def test_closure():
    f, g = from_expr("x^2", (0.1, 2)), builtin("exp", (0.1, 2))
    for op in (algebra.SUM, algebra.MAX):
        assert algebra.closure_check(op, f, g, "AA", identity(), PLAN).convex_ok
    assert algebra.closure_check(algebra.SCALE, f, None, "AA", identity(), PLAN, lam=3.0).convex_ok


def test_compose_rule():
    assert str(algebra.compose_rule("GA", "AG")) == "AA"
    assert algebra.compose_rule("GA", "AA") is None
    assert len(algebra.composition_table()) == 27


def test_no_rule_is_indeterminate():
    v = algebra.verify_composition(builtin("exp"), builtin("exp", (0.1, 1)), "GA", "AA",
                                   identity(), identity(), PLAN)
    assert v.status == "indeterminate" and v.reason == "no rule"


def test_range_mismatch():
    with pytest.raises(RangeMismatch):
        algebra.verify_composition(builtin("exp", (0.1, 1)), builtin("exp", (0.1, 2)), "AA", "AA",
                                   identity(), identity(), PLAN)


def test_functional_families():
    v = algebra.functional_inequality_check("AG", from_expr("exp(x^2)", (0, 1)), power(0.5), plan=PLAN,
                                            simplex_count=64, pair_grid=8)
    assert v.convex_ok and v.details["boundary"]["ok"]
    v = algebra.functional_inequality_check("GA", from_expr("-log(x)", (0, 1)), power(0.5), plan=PLAN,
                                            simplex_count=64, pair_grid=8)
    assert v.convex_ok


def test_functional_sides_brute_force():
    f, h = builtin("exp"), power(0.5)
    x, y, a, b = 0.7, 1.3, 0.2, 0.5
    lhs, rhs = algebra.functional_sides("AG", f, h, x, y, a, b)
    assert lhs == pytest.approx(math.exp(a * x + b * y))
    assert rhs == pytest.approx(math.exp(x) ** math.sqrt(a) * math.exp(y) ** math.sqrt(b))
