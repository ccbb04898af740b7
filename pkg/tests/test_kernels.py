"""Compiled and fallback kernels must agree with each other and with exact arithmetic."""

from fractions import Fraction

import numpy as np
import pytest

from conftest import BACKENDS


def _exact_conv(x, y, k):
    return sum((Fraction(x[j]) * Fraction(y[k - j]) for j in range(len(x)) if 0 <= k - j < len(y)), Fraction(0))


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_conv_at_is_correctly_rounded_or_close(name, rng):
    k = BACKENDS[name]
    x = rng.uniform(-1, 1, 40)
    y = rng.uniform(-1, 1, 25)
    ks = np.arange(64, dtype=np.int64)
    got = k.conv_at(x, y, ks)
    for i in ks:
        exact = float(_exact_conv(x, y, int(i)))
        assert got[i] == pytest.approx(exact, rel=4e-16, abs=1e-300)


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_naive_inverse_matches_rational_recurrence(name):
    a = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.5]
    exact = [Fraction(1)]
    for n in range(1, len(a)):
        exact.append(-sum(Fraction(a[n - j]) * exact[j] for j in range(n)))
    got = BACKENDS[name].naive_inverse(np.array(a), len(a))
    assert got.tolist() == [float(e) for e in exact]


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_prefix_sum_compensates(name):
    x = np.array([1.0, 1e-16, 1e-16, 1e-16, -1.0])
    u = BACKENDS[name].prefix_sum(x)
    assert u[-1] == pytest.approx(3e-16, rel=1e-12)


@pytest.mark.parametrize("compensated", [False, True])
@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_schoolbook_against_numpy(name, compensated, rng):
    x = rng.standard_normal(57)
    y = rng.standard_normal(13)
    for m in (1, 13, 69):
        got = BACKENDS[name].schoolbook(x, y, m, compensated)
        np.testing.assert_allclose(got, np.convolve(x, y)[:m], rtol=0, atol=1e-13)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernels not built")
def test_backends_bitwise_equal_on_inverse():
    a = (1.0 + np.arange(512)) ** -0.3
    np.testing.assert_array_equal(BACKENDS["cython"].naive_inverse(a, 512), BACKENDS["python"].naive_inverse(a, 512))


def test_benchmark_script_runs(capsys):
    import runpy
    import sys
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    old = sys.argv
    sys.argv = [str(script), "--sizes", "64", "--repeat", "1"]
    try:
        runpy.run_path(str(script), run_name="__main__")
    finally:
        sys.argv = old
    out = capsys.readouterr().out
    assert "naive_inverse" in out and "conv_at" in out


def test_env_forces_fallback():
    import os
    import subprocess
    import sys

    code = "import tritop; print(tritop.BACKEND)"
    env = dict(os.environ, TRITOP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env["TRITOP_PURE_PYTHON"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == ("cython" if "cython" in BACKENDS else "python")
