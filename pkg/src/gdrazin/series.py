"""Truncated series evaluation shared by the formula modules.

Every formula in this package sums series that terminate exactly on valid
inputs (a nilpotent running factor dies at the matrix dimension). The policy,
applied uniformly: cap at N_max = 2*dim + 2 terms, exit early once two
consecutive terms fall below eps_tail * scale, and raise ConvergenceError if
the final term at the cap is still above that threshold (reachable only when
a formula is forced outside its hypothesis).
"""

from typing import Iterable, Iterator

import numpy as np

from .errors import ConvergenceError

__all__ = ["PowerCache", "series_cap", "summed", "NilpotentRun"]


def series_cap(dim: int) -> int:
    return 2 * dim + 2


class PowerCache:
    """Memoized nonnegative powers of a fixed square matrix."""

    def __init__(self, m: np.ndarray):
        self._pows = [np.eye(m.shape[0], dtype=complex), np.asarray(m, dtype=complex)]

    def __call__(self, i: int) -> np.ndarray:
        while len(self._pows) <= i:
            self._pows.append(self._pows[-1] @ self._pows[1])
        return self._pows[i]


class NilpotentRun:
    """Running power of a (numerically) nilpotent factor, clamped to exact
    zero once its norm drops below the tail threshold so that later terms
    vanish identically instead of re-growing from rounding noise."""

    def __init__(self, start: np.ndarray, step: np.ndarray, tiny: float, left: bool = True):
        self.value = np.asarray(start, dtype=complex)
        self._step = np.asarray(step, dtype=complex)
        self._tiny = tiny
        self._left = left
        self._dead = False

    def advance(self) -> None:
        if self._dead:
            return
        self.value = (self._step @ self.value) if self._left else (self.value @ self._step)
        if float(np.linalg.norm(self.value)) <= self._tiny:
            self.value = np.zeros_like(self.value)
            self._dead = True


def summed(
    terms: Iterable[np.ndarray] | Iterator[np.ndarray],
    nmax: int,
    tiny: float,
    label: str,
) -> np.ndarray:
    """Sum up to nmax terms with the early-exit/tail policy above."""
    total = None
    last = 0.0
    consecutive_tiny = 0
    it = iter(terms)
    for _ in range(nmax):
        try:
            t = next(it)
        except StopIteration:
            return total
        total = t.copy() if total is None else total + t
        last = float(np.linalg.norm(t))
        consecutive_tiny = consecutive_tiny + 1 if last < tiny else 0
        if consecutive_tiny >= 2:
            return total
    if last > tiny:
        raise ConvergenceError(
            f"{label}: term norm {last:.3e} still above {tiny:.3e} after {nmax} terms"
        )
    return total
