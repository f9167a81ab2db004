"""Series policy: cap, early exit, clamping, divergence reporting."""

import numpy as np
import pytest

from gdrazin import ConvergenceError
from gdrazin.series import NilpotentRun, PowerCache, series_cap, summed


def test_series_cap():
    assert series_cap(3) == 8
    assert series_cap(8) == 18


def test_power_cache():
    a = np.array([[1, 1], [0, 1]], dtype=complex)
    pc = PowerCache(a)
    assert np.array_equal(pc(0), np.eye(2))
    assert np.array_equal(pc(1), a)
    assert np.array_equal(pc(4), np.linalg.matrix_power(a, 4))
    # memoized object is returned, not recomputed
    assert pc(4) is pc(4)


def test_nilpotent_run_clamps_to_exact_zero():
    shift = np.diag(np.ones(2), k=1).astype(complex)  # 3x3, cube is 0
    run = NilpotentRun(np.eye(3, dtype=complex), shift, tiny=1e-12, left=True)
    assert np.array_equal(run.value, np.eye(3))
    run.advance()
    assert np.array_equal(run.value, shift)
    run.advance()
    run.advance()
    assert run.value.dtype == complex
    assert not run.value.any()  # exactly zero, not merely small
    run.advance()  # stays dead
    assert not run.value.any()


def test_nilpotent_run_side():
    start = np.array([[0, 1], [0, 0]], dtype=complex)
    step = np.array([[2, 0], [0, 3]], dtype=complex)
    left = NilpotentRun(start, step, tiny=0.0, left=True)
    right = NilpotentRun(start, step, tiny=0.0, left=False)
    left.advance()
    right.advance()
    assert np.array_equal(left.value, step @ start)
    assert np.array_equal(right.value, start @ step)


def test_summed_early_exit_counts_terms():
    calls = []

    def terms():
        i = 0
        while True:
            calls.append(i)
            yield np.zeros((2, 2)) if i >= 1 else np.eye(2)
            i += 1

    out = summed(terms(), nmax=50, tiny=1e-12, label="t")
    assert np.array_equal(out, np.eye(2))
    # one big term, then two consecutive tiny ones stop the scan
    assert len(calls) == 3


def test_summed_raises_on_divergence():
    def terms():
        while True:
            yield np.ones((2, 2))

    with pytest.raises(ConvergenceError, match="stubborn series"):
        summed(terms(), nmax=6, tiny=1e-12, label="stubborn series")


def test_summed_exhausts_finite_iterator():
    seq = [np.eye(2), 2 * np.eye(2)]
    out = summed(iter(seq), nmax=10, tiny=1e-12, label="t")
    assert np.array_equal(out, 3 * np.eye(2))
