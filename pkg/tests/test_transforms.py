import numpy as np
import pytest

from hmnconvex import transforms
from hmnconvex.errors import DomainError
from hmnconvex.funcs import builtin, eval_fn
from hmnconvex.hfun import identity, power
from hmnconvex.sampling import SamplePlan

PLAN = SamplePlan(grid_per_axis=16, random_count=64)


def test_transform_formulas():
    f = builtin("exp", (0.1, 3.0))
    g, d = transforms.transform("GG", f, tau=3.0)
    assert d == transforms.SAME
    u = np.array([0.2, 1.0, 2.0])
    np.testing.assert_allclose(eval_fn(g, u), 3.0 * np.exp(-u), rtol=1e-14)  # log(exp(tau e^-u))
    g, d = transforms.transform("HH", f)
    assert d == transforms.FLIPPED
    np.testing.assert_allclose(eval_fn(g, u + 0.5), np.exp(-1 / (u + 0.5)), rtol=1e-14)
    g, _ = transforms.transform("AA", f)
    assert g is f


def test_spec_for():
    s = transforms.spec_for("GH", tau=2.0)
    assert (s.wrapper, s.reparam, s.target_direction) == ("reciprocal", "exp_decay", "flipped")
    assert transforms.default_tau(builtin("exp")) == PLAN.upper_cap


@pytest.mark.parametrize("label", ["AG", "GA", "GG", "HG", "HH", "AH"])
def test_cross_check_agrees(label):
    cc = transforms.cross_check(label, builtin("cosh", (0.05, 3.0)), power(0.5), plan=PLAN)
    assert cc.agree, cc.to_dict()


def test_tau_must_cover_domain():
    f = builtin("exp", (0.1, 3.0))
    with pytest.raises(DomainError):
        transforms.cross_check("GA", f, identity(), tau=1.0, plan=PLAN)
