"""Tests for the multivariate and classical Gauss hypergeometric series."""

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tubekernels.errors import DomainError, InvalidArgumentError, ParameterError
from tubekernels.hypergeom import HyperParams, euler_transform_check, hyp2f1_classical, hyp2f1_multi


def test_value_one_at_origin():
    params = HyperParams(a=0.5, b=0.5, c=1.0, multiplicity_m=2.0)
    res = hyp2f1_multi(params, (0.0, 0.0))
    assert res.value == 1.0
    assert res.converged


def test_binomial_collapse_b_equals_c():
    # b = c turns the series into prod (1 - x_i)^(-a)
    params = HyperParams(a=0.7, b=1.3, c=1.3, multiplicity_m=2.0, k_max=60, tol=1e-15)
    x = (0.1, 0.2, 0.3)
    res = hyp2f1_multi(params, x)
    exact = float(np.prod([(1.0 - v) ** (-0.7) for v in x]))
    assert abs(res.value - exact) / abs(exact) <= 1e-8
    assert res.converged


def test_rank1_matches_classical():
    params = HyperParams(a=1.3, b=0.8, c=1.9, multiplicity_m=1.0, k_max=200, tol=1e-15)
    got = hyp2f1_multi(params, (0.6,)).value
    want = hyp2f1_classical(1.3, 0.8, 1.9, 0.6)
    assert abs(got - want) / abs(want) <= 1e-10


def test_classical_elliptic_value_against_direct_sum():
    # independent oracle: plain 200-term direct summation
    a = b = 0.5
    c = 1.0
    x = 0.25
    term = 1.0
    total = 1.0
    for k in range(200):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
    got = hyp2f1_classical(a, b, c, x)
    assert got == pytest.approx(total, rel=1e-13)


def test_classical_against_mpmath():
    for a, b, c, x in [
        (0.5, 0.5, 1.0, 0.25),
        (1.7, 0.3, 2.1, -0.8),
        (2.5, 2.5, 0.3, 0.6),
        (0.4 + 0.2j, 1.1, 1.3, 0.5),
    ]:
        got = hyp2f1_classical(a, b, c, x)
        want = complex(mpmath.hyp2f1(a, b, c, x))
        assert abs(got - want) / abs(want) <= 1e-12


def test_classical_binomial_collapse():
    assert hyp2f1_classical(0.9, 1.4, 1.4, 0.37) == pytest.approx((1 - 0.37) ** (-0.9), rel=1e-13)
    assert hyp2f1_classical(1.1, 0.6, 1.9, 0.0) == 1.0


def test_classical_terminating_series_ignores_later_pole():
    # a = -2 terminates at k = 2, before c + k = 0 at k = 5
    got = hyp2f1_classical(-2.0, 1.0, -5.0, 0.3)
    want = complex(mpmath.hyp2f1(-2, 1, -5, 0.3))
    assert got == pytest.approx(want, rel=1e-13)


def test_classical_pole_raises():
    with pytest.raises(ParameterError):
        hyp2f1_classical(0.5, 0.5, -3.0, 0.2)


def test_domain_errors():
    params = HyperParams(a=0.5, b=0.5, c=1.5)
    with pytest.raises(DomainError):
        hyp2f1_multi(params, (1.0, 0.2))
    with pytest.raises(DomainError):
        hyp2f1_classical(0.5, 0.5, 1.5, 1.0)
    with pytest.raises(InvalidArgumentError):
        hyp2f1_multi(params, ())


def test_pole_in_c_names_partition():
    # c = 0 makes (c)_(1) vanish with a contributing term
    params = HyperParams(a=0.5, b=0.7, c=0.0, multiplicity_m=2.0)
    with pytest.raises(ParameterError, match=r"\(1,\)"):
        hyp2f1_multi(params, (0.3, 0.1))


def test_pole_skipped_when_jack_factor_vanishes():
    # c = 1 at alpha = 1 kills (c)_(1,1), but at x = 0 that term is identically 0
    params = HyperParams(a=0.5, b=0.5, c=1.0, multiplicity_m=2.0)
    assert hyp2f1_multi(params, (0.0, 0.0)).value == 1.0
    with pytest.raises(ParameterError, match=r"\(1, 1\)"):
        hyp2f1_multi(params, (0.3, 0.1))


def test_a_b_symmetry_is_bitwise():
    x = (0.21, 0.4)
    p1 = HyperParams(a=0.8 + 0.1j, b=1.7, c=2.2, multiplicity_m=2.0, k_max=40)
    p2 = HyperParams(a=1.7, b=0.8 + 0.1j, c=2.2, multiplicity_m=2.0, k_max=40)
    r1 = hyp2f1_multi(p1, x, collect_shells=True)
    r2 = hyp2f1_multi(p2, x, collect_shells=True)
    assert r1.value == r2.value
    assert r1.shells == r2.shells


def test_permutation_symmetry_in_x():
    params = HyperParams(a=0.9, b=1.4, c=2.0, multiplicity_m=2.0, k_max=50, tol=1e-14)
    v1 = hyp2f1_multi(params, (0.2, 0.45)).value
    v2 = hyp2f1_multi(params, (0.45, 0.2)).value
    assert v1 == pytest.approx(v2, rel=1e-13)
    params3 = HyperParams(a=0.9, b=1.4, c=2.0, multiplicity_m=1.0, k_max=30, tol=1e-14)
    v1 = hyp2f1_multi(params3, (0.1, 0.3, 0.2)).value
    v2 = hyp2f1_multi(params3, (0.3, 0.2, 0.1)).value
    assert v1 == pytest.approx(v2, rel=1e-13)


def test_shell_decay_is_geometric_past_degree_ten():
    # worst corner of the rank-1 acceptance grid
    params = HyperParams(a=2.5, b=2.5, c=0.3, multiplicity_m=2.0, k_max=80, tol=1e-30)
    res = hyp2f1_multi(params, (0.6,), collect_shells=True)
    for k in range(10, len(res.shells) - 1):
        assert res.shells[k + 1] < 0.9 * res.shells[k]
    # rank-2 parameters of the Shilov-integral checks (eta = 2, t <= 0.8)
    params = HyperParams(a=2.35, b=2.35, c=2.0, multiplicity_m=2.0, k_max=60, tol=1e-30)
    res = hyp2f1_multi(params, (0.44, 0.44), collect_shells=True)
    for k in range(10, len(res.shells) - 1):
        assert res.shells[k + 1] < 0.9 * res.shells[k]


def test_non_convergence_is_flagged():
    params = HyperParams(a=0.5, b=0.9, c=1.4, multiplicity_m=2.0, k_max=30)
    res = hyp2f1_multi(params, (0.99,))
    assert not res.converged
    assert res.truncation_degree == 30


def test_fixed_degree_mode_runs_to_kmax():
    params = HyperParams(a=0.5, b=0.9, c=1.4, multiplicity_m=2.0, k_max=25)
    res = hyp2f1_multi(params, (0.05,), early_stop=False)
    assert res.truncation_degree == 25
    assert res.converged


def test_truncation_metadata_consistent():
    params = HyperParams(a=0.5, b=0.9, c=1.4, multiplicity_m=2.0, k_max=40, tol=1e-12)
    res = hyp2f1_multi(params, (0.3, 0.2), collect_shells=True)
    assert res.last_shell == res.shells[res.truncation_degree]
    assert res.converged == (res.last_shell <= 1e-12 * max(1.0, abs(res.value)))


@settings(max_examples=60, deadline=None)
@given(
    a=st.floats(0.1, 2.5),
    b=st.floats(0.1, 2.5),
    c=st.floats(0.3, 3.0),
    x=st.floats(-0.5, 0.5),
    m=st.sampled_from([1.0, 2.0, 4.0]),
)
def test_rank1_reduction_property(a, b, c, x, m):
    params = HyperParams(a=a, b=b, c=c, multiplicity_m=m, k_max=150, tol=1e-15)
    got = hyp2f1_multi(params, (x,)).value
    want = hyp2f1_classical(a, b, c, x)
    assert abs(got - want) <= 1e-11 * max(1.0, abs(want))


def test_euler_transform_trivial_and_small():
    params = HyperParams(a=0.5, b=0.3, c=1.2, multiplicity_m=2.0, k_max=90, tol=1e-14)
    assert euler_transform_check(params, (0.0, 0.0)) <= 1e-15
    params1 = HyperParams(a=0.5, b=0.3, c=1.2, multiplicity_m=1.0, k_max=120, tol=1e-14)
    assert euler_transform_check(params1, (0.4,)) <= 1e-8
    params2 = HyperParams(a=1.1, b=0.6, c=2.0, multiplicity_m=2.0, k_max=90, tol=1e-14)
    assert euler_transform_check(params2, (0.2, 0.35)) <= 1e-7


def test_euler_transform_at_kmax_30_with_truncation_tails():
    # both sides truncated at degree 30; the residual absorbs the tails
    params = HyperParams(a=1.1, b=0.6, c=2.0, multiplicity_m=2.0, k_max=30, tol=1e-12)
    assert euler_transform_check(params, (0.2, 0.35)) <= 1e-7


def test_hyperparams_validation():
    with pytest.raises(InvalidArgumentError):
        HyperParams(a=1, b=1, c=1, multiplicity_m=0.0)
    with pytest.raises(InvalidArgumentError):
        HyperParams(a=1, b=1, c=1, k_max=0)
    with pytest.raises(InvalidArgumentError):
        HyperParams(a=1, b=1, c=1, tol=0.0)
