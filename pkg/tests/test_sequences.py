import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tritop import Decay, DecaySource, GeneratorSpec, RealSeq, ValidationError, classify, generate


class TestGenerate:
    def test_power_law_zero_is_ones(self):
        assert generate(GeneratorSpec.power_law(0, 4)).tolist() == [1, 1, 1, 1]

    def test_power_law_one(self):
        np.testing.assert_array_equal(generate(GeneratorSpec.power_law(1, 4)), [1, 0.5, 1 / 3, 0.25])

    def test_jaffard(self):
        assert generate(GeneratorSpec.jaffard(4)).tolist() == [1, 1, 0, 0]

    def test_constant(self):
        assert generate(GeneratorSpec.constant(2.5, 3)).tolist() == [2.5] * 3

    def test_literal(self):
        assert generate(GeneratorSpec.literal([3, 1, 2])).tolist() == [3, 1, 2]

    @pytest.mark.parametrize("kwargs", [dict(alpha=0.5, n=0), dict(alpha=-0.1, n=3), dict(alpha=float("nan"), n=3)])
    def test_invalid(self, kwargs):
        with pytest.raises(ValidationError):
            GeneratorSpec.power_law(**kwargs)

    def test_pure(self):
        s = GeneratorSpec.power_law(0.37, 1000)
        assert generate(s).values.tobytes() == generate(s).values.tobytes()


def test_realseq_rejects_bad_input():
    with pytest.raises(ValidationError):
        RealSeq([])
    with pytest.raises(ValidationError):
        RealSeq([1.0, np.inf])
    seq = RealSeq([1, 2])
    with pytest.raises(ValueError):
        seq.values[0] = 3


class TestClassify:
    def test_power_law_slow(self):
        spec = GeneratorSpec.power_law(0.5, 100)
        c = classify(generate(spec), spec)
        assert c.monotone_nonincreasing and c.log_convex and c.strictly_at_1
        assert c.decay is Decay.SLOW and c.decay_source is DecaySource.SYMBOLIC

    def test_constant(self):
        spec = GeneratorSpec.constant(1, 10)
        c = classify(generate(spec), spec)
        assert c.monotone_nonincreasing and c.log_convex and not c.strictly_at_1
        assert c.decay is Decay.STAGNATION

    def test_jaffard(self):
        spec = GeneratorSpec.jaffard(8)
        c = classify(generate(spec), spec)
        assert not c.log_convex
        assert c.decay is Decay.FAST

    @pytest.mark.parametrize("alpha,decay", [(0, Decay.STAGNATION), (0.3, Decay.SLOW), (1, Decay.SLOW), (1.5, Decay.FAST)])
    def test_symbolic_trichotomy(self, alpha, decay):
        spec = GeneratorSpec.power_law(alpha, 16)
        assert classify(generate(spec), spec).decay is decay

    @pytest.mark.parametrize("alpha,decay", [(0.4, Decay.SLOW), (1.6, Decay.FAST)])
    def test_empirical_power_law(self, alpha, decay):
        c = classify(generate(GeneratorSpec.power_law(alpha, 10_000)))
        assert c.decay is decay and c.decay_source is DecaySource.EMPIRICAL

    def test_empirical_stagnation_and_unknown(self):
        assert classify(np.full(200, 0.7)).decay is Decay.STAGNATION
        c = classify([1.0, 0.0, 0.0, 0.0])
        assert c.decay is Decay.UNKNOWN and c.decay_source is DecaySource.EMPIRICAL

    def test_log_convex_requires_nonnegative(self):
        assert not classify([1.0, -0.5, 0.25]).log_convex


@settings(max_examples=60, deadline=None)
@given(alpha=st.floats(min_value=1e-3, max_value=4.0), n=st.integers(min_value=1, max_value=3000))
def test_power_law_is_monotone_and_log_convex(alpha, n):
    c = classify(generate(GeneratorSpec.power_law(alpha, n)), GeneratorSpec.power_law(alpha, n))
    assert c.monotone_nonincreasing and c.log_convex


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=0, max_value=10), min_size=3, max_size=40))
def test_log_convex_positivity_remark(values):
    c = classify(values)
    if c.log_convex and values[0] > 0 and values[1] > 0:
        assert min(values) > 0
