from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from foldoptics.specfun import (
    AccuracyPolicy,
    airy,
    airy_square_integral,
    fourier_power_integral,
)

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def airy_table():
    with open(DATA / "airy_reference.json") as f:
        return json.load(f)


def test_airy_against_reference_table(airy_table):
    z = np.array([row["z"] for row in airy_table])
    vals = airy(z)
    for field in ("ai", "aip", "bi", "bip"):
        ref = np.array([row[field] for row in airy_table])
        got = {"ai": vals.ai, "aip": vals.ai_prime,
               "bi": vals.bi, "bip": vals.bi_prime}[field]
        rel = np.abs(got - ref) / np.abs(ref)
        assert rel.max() < 1e-10, f"{field}: max rel dev {rel.max():.3e}"


def test_airy_scalar_returns_floats():
    v = airy(1.0)
    assert isinstance(v.ai, float)
    assert math.isclose(v.ai, 0.1352924163128814, rel_tol=1e-12)


def test_airy_preserves_shape():
    z = np.linspace(-4, 2, 12).reshape(3, 4)
    v = airy(z)
    assert v.ai.shape == (3, 4)
    assert v.bi_prime.shape == (3, 4)


@pytest.mark.parametrize("z", [0.0, -1.0, 2.5, -7.9, 7.0, -11.5])
def test_airy_ode_residual(z):
    # Ai'' = z Ai checked with a fourth-order five-point stencil.
    h = 1e-2
    offs = np.array([-2, -1, 0, 1, 2]) * h
    ai = airy(z + offs).ai
    second = (-ai[0] + 16 * ai[1] - 30 * ai[2] + 16 * ai[3] - ai[4]) / (12 * h * h)
    scale = max(abs(z * ai[2]), 1e-2)
    assert abs(second - z * ai[2]) / scale < 1e-6


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-8.0, max_value=4.0))
def test_airy_wronskian(z):
    v = airy(z)
    w = v.ai * v.bi_prime - v.ai_prime * v.bi
    assert abs(w - 1.0 / math.pi) < 1e-10


def test_series_and_asymptotics_agree_in_overlap():
    # The same point evaluated by both branches (forced via the policy
    # switch radius) must agree to the policy guarantee.
    for z, forced_switch in ((-7.6, 7.0), (6.0, 5.5)):
        from_series = airy(z)
        from_asym = airy(z, AccuracyPolicy(series_asymptotic_switch=forced_switch))
        assert abs(from_series.ai - from_asym.ai) / abs(from_series.ai) < 1e-8
        assert abs(from_series.bi - from_asym.bi) / abs(from_series.bi) < 1e-8


def test_airy_rejects_nonfinite():
    with pytest.raises(ValueError):
        airy(np.array([1.0, np.nan]))


def test_policy_validation():
    with pytest.raises(ValueError):
        AccuracyPolicy(abs_tol=0.0)
    with pytest.raises(ValueError):
        AccuracyPolicy(series_asymptotic_switch=-1.0)


@pytest.mark.parametrize(
    "r1,r2,r3",
    [(1.0, 0.0, 0.5), (2.0, 1.0, -0.25), (0.5, -2.0, 1.0)],
)
def test_airy_square_integral_against_quadrature(r1, r2, r3):
    from scipy.integrate import quad
    from scipy.special import airy as sp_airy

    def integrand(k):
        return sp_airy(r1 * k * k + r2 * k + r3)[0]

    # The integrand decays super-exponentially once r1 k^2 dominates.
    num, _ = quad(integrand, -40.0, 40.0, limit=400)
    closed = airy_square_integral(r1, r2, r3)
    assert abs(closed - num) / abs(num) < 1e-8


def test_airy_square_integral_requires_positive_leading():
    with pytest.raises(ValueError):
        airy_square_integral(-1.0, 0.0, 0.0)


def test_fourier_power_integral_known_values():
    # p=1, gamma=0: Abel-regularized half-line Fourier kernel, i/nu.
    assert fourier_power_integral(0.0, 2.0, 1.0) == pytest.approx(0.5j)
    # p=2, gamma=0: Fresnel integral value.
    v = fourier_power_integral(0.0, 1.0, 2.0)
    ref = 0.5 * math.sqrt(math.pi) * complex(math.cos(math.pi / 4),
                                             math.sin(math.pi / 4))
    assert v == pytest.approx(ref, rel=1e-12)


@pytest.mark.filterwarnings("ignore::UserWarning")
@pytest.mark.filterwarnings("ignore:The maximum number")
def test_fourier_power_integral_against_damped_quadrature():
    from scipy.integrate import quad

    gamma, nu, p = 0.5, -3.0, 2.0

    def damped(eta):
        re, _ = quad(lambda t: t**gamma * math.exp(-eta * t * t)
                     * math.cos(nu * t**p), 0, 60, limit=800)
        im, _ = quad(lambda t: t**gamma * math.exp(-eta * t * t)
                     * math.sin(nu * t**p), 0, 60, limit=800)
        return complex(re, im)

    # Richardson extrapolate the Abel regulator to zero.
    a, b = damped(1e-2), damped(5e-3)
    num = 2 * b - a
    closed = fourier_power_integral(gamma, nu, p)
    assert abs(closed - num) / abs(closed) < 1e-3


def test_fourier_power_integral_domain_checks():
    with pytest.raises(ValueError):
        fourier_power_integral(-1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        fourier_power_integral(0.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        fourier_power_integral(0.0, 1.0, 0.5)
