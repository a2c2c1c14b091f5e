import cmath
import logging
import math

import numpy as np
import pytest
from scipy import integrate

from expoapprox import inner
from expoapprox.exceptions import InvalidArgumentsError
from expoapprox.inner import (
    MAX_DEGREE, ExpoPolyTerm, _full_recurrence, _full_series, _switch_point,
    inner_product, integral_full, integral_half
)

SIMPSON_PANELS = 10 ** 5


def simpson_full(m, mu, lo=-math.pi, hi=math.pi, panels=SIMPSON_PANELS):
    x = np.linspace(lo, hi, 2 * panels + 1)
    y = x ** m * np.exp(mu * x)
    value = integrate.simpson(y.real, x=x) + 1j * integrate.simpson(y.imag, x=x)
    return value / (2 * math.pi)


def majorant(m, mu):
    """(1/2pi) * integral |x|^m e^{|mu||x|} dx, an upper bound for |I_m(mu)|."""
    return 2.0 * integral_half(m, abs(mu)).real


def random_mu(rng, radius):
    return cmath.rect(radius * math.sqrt(rng.uniform()), rng.uniform(-math.pi, math.pi))


def test_integral_full_constant():
    assert integral_full(0, 0) == 1


def test_integral_full_odd_monomial_vanishes():
    assert integral_full(1, 0) == 0


def test_integral_full_real_exponent():
    expected = math.sinh(2 * math.pi) / (2 * math.pi)
    assert integral_full(0, 2) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(42.6129, abs=1e-4)
    assert abs(integral_full(0, 2) - simpson_full(0, 2)) < 1e-8


def test_integral_full_even_monomial():
    assert integral_full(2, 0) == pytest.approx(math.pi ** 2 / 3, rel=1e-15)


def test_integral_full_full_period_oscillation():
    assert abs(integral_full(0, -2j)) < 1e-15
    assert abs(simpson_full(0, -2j)) < 1e-12


def test_integral_half_examples():
    assert integral_half(0, 0) == pytest.approx(0.5, rel=1e-15)
    assert integral_half(0, 1) == pytest.approx((math.exp(math.pi) - 1) / (2 * math.pi), rel=1e-14)
    assert integral_half(1, 0) == pytest.approx(math.pi / 4, rel=1e-15)


def test_integral_half_against_quadrature():
    oracle = simpson_full(1, 0.3 - 1.2j, lo=0.0)
    assert abs(integral_half(1, 0.3 - 1.2j) - oracle) < 1e-10


def test_degree_cap():
    integral_full(MAX_DEGREE, 0.1)
    with pytest.raises(InvalidArgumentsError) as excinfo:
        integral_full(MAX_DEGREE + 1, 0.1)
    assert "exceeds the supported maximum" in str(excinfo.value)


def test_negative_degree():
    with pytest.raises(InvalidArgumentsError) as excinfo:
        integral_half(-1, 0.0)
    assert "non-negative" in str(excinfo.value)


def test_non_integer_degree():
    with pytest.raises(InvalidArgumentsError):
        integral_full(1.5, 0.0)
    with pytest.raises(InvalidArgumentsError):
        integral_full("two", 0.0)


def test_non_finite_exponent():
    with pytest.raises(InvalidArgumentsError) as excinfo:
        integral_full(0, complex(float("nan"), 0.0))
    assert "finite" in str(excinfo.value)


def test_overflowing_exponent():
    with pytest.raises(InvalidArgumentsError) as excinfo:
        integral_full(0, 400.0)
    assert "overflows" in str(excinfo.value)


def test_quadrature_oracle():
    rng = np.random.default_rng(20)
    for _ in range(100):
        m = int(rng.integers(0, 5))
        mu = random_mu(rng, 3.0)
        assert abs(integral_full(m, mu) - simpson_full(m, mu)) < 1e-8, (m, mu)


def test_series_and_recurrence_agree_around_switch():
    rng = np.random.default_rng(5)
    for m in range(7):
        switch = _switch_point(m)
        for _ in range(20):
            radius = rng.uniform(0.5 * switch, 2.0 * switch) / math.pi
            mu = cmath.rect(radius, rng.uniform(-math.pi, math.pi))
            series = _full_series(m, mu)
            recurrence = _full_recurrence(m, mu)
            assert abs(series - recurrence) <= 1e-12 * majorant(m, mu), (m, mu)


def test_switch_matches_threshold_for_low_degrees():
    assert _switch_point(0) == 0.5
    assert _switch_point(1) == 0.5
    assert _switch_point(6) == 3.0


def test_splitting_identity():
    rng = np.random.default_rng(11)
    for _ in range(50):
        m = int(rng.integers(0, 7))
        mu = random_mu(rng, 3.0)
        split = integral_half(m, mu) + (-1) ** m * integral_half(m, -mu)
        assert abs(integral_full(m, mu) - split) <= 1e-12 * majorant(m, mu), (m, mu)


def test_term_validation():
    term = ExpoPolyTerm(2, 1 + 1j)
    assert term.degree == 2
    assert term.lam == 1 + 1j
    assert term == ExpoPolyTerm(2.0, complex(1, 1))
    assert term != ExpoPolyTerm(1, 1 + 1j)
    assert len({term, ExpoPolyTerm(2, 1 + 1j)}) == 1

    with pytest.raises(InvalidArgumentsError):
        ExpoPolyTerm(0, complex(float("inf"), 0))
    with pytest.raises(InvalidArgumentsError):
        ExpoPolyTerm(-1, 0)


def test_inner_product_examples():
    one = ExpoPolyTerm(0, 0)
    assert inner_product(one, one) == 1

    plus, minus = ExpoPolyTerm(0, 1j), ExpoPolyTerm(0, -1j)
    assert abs(inner_product(plus, minus)) < 1e-15

    grow = ExpoPolyTerm(0, 1)
    assert inner_product(grow, grow) == pytest.approx(math.sinh(2 * math.pi) / (2 * math.pi), rel=1e-14)


def test_inner_product_conjugate_symmetry_is_exact():
    rng = np.random.default_rng(3)
    for _ in range(100):
        a = ExpoPolyTerm(int(rng.integers(0, 3)), complex(*rng.uniform(-2, 2, 2)))
        b = ExpoPolyTerm(int(rng.integers(0, 3)), complex(*rng.uniform(-2, 2, 2)))
        assert inner_product(a, b) == inner_product(b, a).conjugate()


def test_inner_product_norm_is_real_and_positive():
    rng = np.random.default_rng(4)
    for _ in range(50):
        term = ExpoPolyTerm(int(rng.integers(0, 4)), complex(*rng.uniform(-2, 2, 2)))
        value = inner_product(term, term)
        assert abs(value.imag) <= 1e-14
        assert value.real > 0


def test_combined_degree_cap():
    a = ExpoPolyTerm(30, 0.1)
    with pytest.raises(InvalidArgumentsError):
        inner_product(a, a)


@pytest.fixture
def package_log(caplog):
    logger = logging.getLogger("expoapprox")
    logger.addHandler(caplog.handler)
    caplog.set_level(logging.DEBUG, logger="expoapprox")
    yield caplog
    logger.removeHandler(caplog.handler)


def test_truncated_series_is_logged(monkeypatch, package_log):
    monkeypatch.setattr(inner, "_MAX_SERIES_TERMS", 2)
    integral_full(0, 0.1j)
    integral_half(0, 0.1j)
    assert "Series for I_0" in package_log.text
    assert "Series for J_0" in package_log.text
