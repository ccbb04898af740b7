import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import power_law_family
from tritop import (
    GeneratorSpec,
    HolderExponents,
    InsufficientDataError,
    ValidationError,
    estimate_decay_rate,
    generalized_holder_check,
    generate,
    holder_check,
    pnorm,
    slow_decay_witness,
    young_convolution_check,
    young_product_check,
)

inf = math.inf


class TestPNorm:
    def test_pythagorean(self):
        assert pnorm([3, 4], 2).value == pytest.approx(5, rel=1e-15)

    def test_sup(self):
        assert pnorm([1, -1, 1, -1], inf).value == 1

    def test_harmonic_partial_sum(self):
        # H(10^6) from mpmath
        oracle = float(mpmath.harmonic(10**6))
        assert oracle == pytest.approx(14.392726722865723, rel=1e-15)
        a = generate(GeneratorSpec.power_law(1, 10**6))
        assert pnorm(a, 1).value == pytest.approx(oracle, rel=1e-14)

    def test_invalid_p(self):
        with pytest.raises(ValidationError):
            pnorm([1, 2], 0.5)

    def test_rescaling_guards_range(self):
        big = pnorm([1e200, 1e200], 2)
        assert big.value == pytest.approx(math.sqrt(2) * 1e200) and big.saturated
        tiny = pnorm([1e-200, 1e-200], 3)
        assert tiny.value == pytest.approx(2 ** (1 / 3) * 1e-200) and tiny.saturated
        assert not pnorm([0.5, 0.25], 2).saturated

    def test_zero(self):
        assert pnorm([0.0, 0.0], 2).value == 0


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, st.integers(1, 50), elements=st.floats(-1e3, 1e3)),
       st.floats(1, 8), st.floats(1, 8))
def test_norm_monotonicity(a, p, q):
    p, q = min(p, q), max(p, q)
    assert pnorm(a, p).value >= pnorm(a, q).value * (1 - 1e-13)
    assert pnorm(a, p).value >= pnorm(a, inf).value * (1 - 1e-13)


@settings(max_examples=100, deadline=None)
@given(arrays(np.float64, 20, elements=st.floats(-1e3, 1e3)), arrays(np.float64, 20, elements=st.floats(-1e3, 1e3)),
       st.sampled_from([1, 1.5, 2, 3, inf]))
def test_triangle_inequality(x, y, p):
    lhs = pnorm(x + y, p).value
    assert lhs <= (pnorm(x, p).value + pnorm(y, p).value) * (1 + 1e-13) + 1e-300


class TestDecayRate:
    def test_power_law(self):
        fit = estimate_decay_rate(generate(GeneratorSpec.power_law(0.75, 10**5)))
        assert fit.rate == pytest.approx(0.75, abs=0.01)
        assert fit.window == (317, 99999) and fit.samples >= 32
        assert fit.rms_residual < 1e-3

    @pytest.mark.parametrize("rho", np.round(np.arange(0.1, 2.01, 0.1), 1))
    def test_exact_power_laws(self, rho):
        k = np.arange(10**5, dtype=float)
        s = np.where(k > 0, np.maximum(k, 1) ** -rho, 1.0)
        assert estimate_decay_rate(s).rate == pytest.approx(rho, abs=0.01)

    def test_window(self):
        s = (1.0 + np.arange(1000)) ** -1.25
        fit = estimate_decay_rate(s, (100, 999))
        assert fit.window == (100, 999) and fit.rate == pytest.approx(1.25, abs=0.01)
        with pytest.raises(ValidationError):
            estimate_decay_rate(s, (500, 10))

    def test_insufficient(self):
        with pytest.raises(InsufficientDataError):
            estimate_decay_rate(np.ones(20))
        with pytest.raises(InsufficientDataError):
            estimate_decay_rate(np.zeros(1000))

    def test_excluded_samples_flag(self):
        s = (1.0 + np.arange(10_000)) ** -0.5
        s[5000:] = 0.0
        fit = estimate_decay_rate(s)
        assert fit.excluded > 0 and fit.rms_residual == inf


class TestYoungProduct:
    def test_equality(self):
        assert tuple(young_product_check(1, 1, 2, 2)) == (1, 1, True)

    def test_arithmetic(self):
        assert tuple(young_product_check(2, 3, 2, 2)) == (6, 6.5, True)

    def test_zero_factor(self):
        lhs, rhs, ok = young_product_check(0, 5, 3, 1.5)
        assert lhs == 0 and ok
        assert rhs == pytest.approx(5**1.5 / 1.5, rel=1e-15)

    def test_not_conjugate(self):
        with pytest.raises(ValidationError):
            young_product_check(1, 1, 2, 3)


class TestHolder:
    def test_disjoint(self):
        lhs, rhs, ok = holder_check([1, 0], [0, 1], HolderExponents.conjugate(2, 2))
        assert lhs == 0 and rhs == 1 and ok

    def test_equality(self):
        x = np.array([1, 1]) / math.sqrt(2)
        lhs, rhs, ok = holder_check(x, x, HolderExponents.conjugate(2, 2))
        assert lhs == pytest.approx(1) and rhs == pytest.approx(1) and ok

    def test_endpoint(self):
        assert holder_check([1, -2, 3], [0.5, 0.5, -1], HolderExponents.conjugate(1, inf)).holds

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            holder_check([1, 2], [1], HolderExponents.conjugate(2, 2))

    def test_random(self, rng):
        for p in (1.5, 2, 3):
            q = p / (p - 1)
            for _ in range(50):
                x, y = rng.uniform(-1, 1, (2, 30))
                assert holder_check(x, y, HolderExponents.conjugate(p, q)).holds


class TestGeneralizedHolder:
    def test_single_factor(self):
        lhs, rhs, ok = generalized_holder_check([[1, -2, 3]], [2.5], 2.5)
        assert lhs == pytest.approx(rhs, rel=1e-15) and ok

    def test_three_ones(self):
        lhs, rhs, ok = generalized_holder_check([[1, 1]] * 3, [3, 3, 3], 1)
        assert lhs == 2 and rhs == pytest.approx(2, rel=1e-15) and ok

    def test_bad_exponents(self):
        with pytest.raises(ValidationError):
            generalized_holder_check([[1], [1]], [2, 3], 1)


class TestYoungConvolution:
    def test_case_a(self):
        r, lhs, rhs, ok = young_convolution_check([0.5, 0.5], [0.5, 0.5], 1, 1)
        assert (r, lhs, rhs, ok) == (1, 1, 1, True)

    def test_delta(self, rng):
        y = rng.uniform(-1, 1, 17)
        for q in (1, 1.5, 4):
            r, lhs, rhs, ok = young_convolution_check([1, 0, 0], y, 1, q)
            assert r == pytest.approx(q) and lhs == pytest.approx(rhs, rel=1e-14) and ok

    def test_case_b_gives_sup_norm(self):
        r, lhs, rhs, ok = young_convolution_check([1, 2], [3, 4], 2, 2)
        assert r == inf and lhs == 10 and ok

    def test_no_admissible_r(self):
        with pytest.raises(ValidationError):
            young_convolution_check([1], [1], 3, 3)

    def test_exponent_solver(self):
        assert HolderExponents.convolution(1.5, 1.5).r == pytest.approx(3)
        assert HolderExponents.convolution(1, 1).r == 1
        assert HolderExponents.convolution(1.5, 3).r == inf


class TestSlowDecayWitness:
    @pytest.fixture
    def families(self):
        return {alpha: power_law_family(alpha, 10**6)[::2] for alpha in (0.25, 0.5, 1.0)}

    def test_half(self, families):
        a, u = families[0.5]
        w = slow_decay_witness(a, u, 2, 1.5)
        assert w.a_divergent and w.u_divergent and w.consistent
        assert w.prefixes == (1000, 10_000, 100_000, 1_000_000)
        assert all(np.diff(w.u_partial) > 0)

    def test_harmonic_log_growth(self, families):
        a, u = families[1.0]
        w = slow_decay_witness(a, u, 1, 1.5)
        assert w.a_divergent
        steps = np.diff(w.a_partial)
        np.testing.assert_allclose(steps, math.log(10), rtol=1e-2)

    def test_quarter(self, families):
        a, u = families[0.25]
        w = slow_decay_witness(a, u, 2, 1.2)
        assert w.u_divergent and w.consistent

    def test_convergent_detected(self):
        k = 1.0 + np.arange(10**5)
        w = slow_decay_witness(k**-2.0, k**-2.0, 1, 1.5)
        assert not w.a_divergent and not w.u_divergent and not w.consistent

    def test_exponent_check(self):
        with pytest.raises(ValidationError):
            slow_decay_witness([1] * 10, [1] * 10, 2, 2)
