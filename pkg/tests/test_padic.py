import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from deltaperiod import padic as pa
from deltaperiod.padic import LocallyConstantFn, PAdicPoint, UnramCharacter


def test_additive_character():
    assert pa.additive_character(PAdicPoint(5, 3, 2, 4)) == 1
    assert pa.additive_character(PAdicPoint(5, -1, 2, 1)) == pytest.approx(cmath.exp(2j * math.pi * 2 / 5))
    # {3 * 7 / 49} in Q_7 is 3/7, through u = 3 + 7*... at precision 2
    assert pa.additive_character(PAdicPoint(7, -2, 3 + 7 * 4, 2)) == pytest.approx(
        cmath.exp(2j * math.pi * 31 / 49))
    with pytest.raises(pa.PrecisionError):
        pa.additive_character(PAdicPoint(5, -3, 2, 2))


def test_point_rejects_non_units():
    with pytest.raises(ValueError):
        PAdicPoint(3, 0, 6, 2)


def test_shell_values():
    # outer shells |v| >= 2 are full Ramanujan sums with modulus p^|v|, so vanish
    for p in (2, 3, 5):
        for v in (-4, -3, -2, 2, 3, 4):
            assert abs(pa.shell_contribution(p, v)) < 1e-14
        assert pa.shell_contribution(p, 0) == pytest.approx(1 - 1 / p)
        assert pa.shell_contribution(p, -1) == pytest.approx(-1 / p)
        assert pa.shell_contribution(p, 1) == pytest.approx(-1 / p)


def test_j1_examples():
    assert pa.bessel_j1_oracle(5, 1.0, 1)["value"] == pytest.approx(0.4, abs=1e-14)
    assert pa.bessel_j1_oracle(7, -1.0, 2)["value"] == pytest.approx(8 / 7, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11]), st.floats(0, 2 * math.pi))
def test_j1_matches_closed_form_and_stabilizes(p, theta):
    b = cmath.exp(1j * theta)
    one = pa.bessel_j1_oracle(p, b, 1)["value"]
    three = pa.bessel_j1_oracle(p, b, 3)["value"]
    assert abs(one - pa.bessel_j1_closed(p, b)) < 1e-12
    assert abs(one - three) < 1e-12


def test_j1_closed_form_is_lambda():
    # for b = alpha^2 the closed form is 1 - (1 + s2)/p
    from deltaperiod.localfactors import delta_satake, lambda_p
    d = delta_satake(3)
    a2 = cmath.exp(2j * math.acos(d.t / 2))
    assert pa.bessel_j1_closed(3, a2) == pytest.approx(lambda_p(d), abs=1e-14)


def test_hecke_kernel_measure():
    p = 5
    units = LocallyConstantFn(p, 1, {(0, u): 1 for u in range(1, p)})
    assert pa.whittaker_to_hecke_kernel(units, UnramCharacter(1.0)) == pytest.approx(1 - 1 / p)
    shifted = LocallyConstantFn(p, 1, {(2, 1): 1})
    chi = UnramCharacter(2.0)
    assert pa.whittaker_to_hecke_kernel(shifted, chi) == pytest.approx(0.25 / p)


@pytest.mark.parametrize("p,m", [(2, 1), (2, 3), (3, 2), (5, 1)])
@pytest.mark.parametrize("chi", [1.0, cmath.exp(0.7j), 3 ** 0.25, 0.5 + 0.2j])
def test_compose_returns_f_at_one(p, m, chi):
    for f in pa.basis_indicators(p, m, range(-2, 3)):
        res = pa.kirillov_compose_oracle(f, UnramCharacter(chi), m, check_levels=2)
        assert abs(res["value"] - res["expected"]) < 1e-10
        assert res["drift"] < 1e-10


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 2), st.data())
def test_compose_linear_combinations(p, m, data):
    units = [u for u in range(p**m) if u % p]
    support = {}
    for _ in range(data.draw(st.integers(1, 4))):
        key = (data.draw(st.integers(-2, 2)), data.draw(st.sampled_from(units)))
        support[key] = complex(data.draw(st.floats(-3, 3)), data.draw(st.floats(-3, 3)))
    f = LocallyConstantFn(p, m, support)
    res = pa.kirillov_compose_oracle(f, UnramCharacter(cmath.exp(0.3j)), m)
    assert abs(res["value"] - f.at_one()) < 1e-10


def test_compose_small_ball_is_not_yet_stable():
    # a ball that is too small misses part of the x-integral
    f = LocallyConstantFn(3, 2, {(-2, 1): 1.0, (0, 1): 1.0})
    with pytest.raises(pa.StabilizationError):
        pa.kirillov_compose_oracle(f, UnramCharacter(1.0), -3, check_levels=4)


def test_locally_constant_fn():
    f = LocallyConstantFn(3, 2, {(0, 1): 2.0, (1, 5): 1.0, (0, 2): 0})
    assert f.at_one() == 2.0
    assert f(PAdicPoint(3, 1, 5 + 9, 3)) == 1.0
    assert f.valuations == [0, 1]
    with pytest.raises(pa.PrecisionError):
        f(PAdicPoint(3, 1, 5, 1))
