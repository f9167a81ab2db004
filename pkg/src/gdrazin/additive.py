"""Drazin inverses of sums a + b under one-sided power-commutation
hypotheses of the form (left side) = lambda * (right side).

The central routine is ``drazin_sum``: under a b = lambda a^pi b a b^pi the
inverse of the sum is a finite combination of corner inverses and four
terminating series. ``drazin_sum_nilpotent`` handles the sharper hypothesis
with a quasinilpotent enabled; ``nilpotent_sum_closure`` decides closure of
nilpotency under lambda-commutation. ``check_factor_condition`` is the shared
scalar-fit primitive all hypothesis tests reduce to.
"""

from dataclasses import dataclass

import numpy as np

from .drazin import DrazinResult, drazin_oracle, is_quasinilpotent
from .errors import ConvergenceError, PreconditionViolated
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, fro_norm, scale_of
from .series import PowerCache, series_cap, summed

__all__ = [
    "FactorCheck",
    "check_factor_condition",
    "nilpotent_sum_closure",
    "drazin_sum_nilpotent",
    "drazin_sum",
]


@dataclass(frozen=True)
class FactorCheck:
    """Outcome of testing lhs == lambda * rhs_base for some scalar lambda.

    Attributes
    ----------
    condition : str
        Human-readable label of the tested identity.
    holds : bool
        Whether the identity holds at the examined lambda to eps_check.
    lam : complex or None
        The lambda used: the given value, or the least-squares fit. None when
        the check is degenerate (both sides vanish, any lambda works) or when
        no usable scalar exists.
    residual : float
        Frobenius norm of lhs - lambda * rhs_base (of lhs alone when no
        scalar applies).
    degenerate : bool
        True when both sides vanish to eps_check * scale; then holds is True
        and lam is None.
    """

    condition: str
    holds: bool
    lam: complex | None
    residual: float
    degenerate: bool


def check_factor_condition(
    lhs: np.ndarray,
    rhs_base: np.ndarray,
    given_lambda: complex | None = None,
    tol: Tolerance = DEFAULT_TOL,
    condition: str = "lhs = lambda * rhs",
) -> FactorCheck:
    """Test whether lhs equals lambda * rhs_base for a nonzero scalar lambda.

    With ``given_lambda`` the identity is tested at that exact value.
    Otherwise lambda is fitted by least squares over the matrix entries:

        lambda = <vec(rhs_base), vec(lhs)> / ||vec(rhs_base)||^2

    (inner product conjugate-linear in the first slot). A fitted lambda with
    modulus at most eps_check is rejected: the scalar in these hypotheses is
    nonzero by convention, and a vanishing fit means lhs has no component
    along rhs_base.

    When both sides are below eps_check * scale the check is degenerate: it
    holds for every lambda and ``lam`` is reported as None.

    Parameters
    ----------
    lhs, rhs_base : ndarray
        Same-shape matrices.
    given_lambda : complex, optional
        Fixed nonzero scalar to test at. None fits the scalar instead.
    tol : Tolerance
    condition : str
        Label copied into the result.

    Returns
    -------
    FactorCheck
    """
    lhs = as_matrix(lhs)
    rhs_base = as_matrix(rhs_base)
    if lhs.shape != rhs_base.shape:
        raise ValueError(f"shape mismatch: {lhs.shape} vs {rhs_base.shape}")
    if given_lambda is not None and given_lambda == 0:
        raise ValueError("lambda must be nonzero")
    scale = scale_of(lhs, rhs_base)
    band = tol.eps_check * scale
    lhs_small = fro_norm(lhs) <= band
    rhs_small = fro_norm(rhs_base) <= band

    if lhs_small and rhs_small:
        return FactorCheck(condition, True, None, fro_norm(lhs), True)
    if rhs_small:
        # No scalar multiple of a (numerically) zero base can reach lhs.
        return FactorCheck(condition, False, None, fro_norm(lhs), False)

    if given_lambda is not None:
        lam = complex(given_lambda)
    else:
        lam = complex(np.vdot(rhs_base.ravel(), lhs.ravel()) / np.vdot(rhs_base.ravel(), rhs_base.ravel()))
    residual = fro_norm(lhs - lam * rhs_base)
    holds = residual <= band
    if given_lambda is None and abs(lam) <= tol.eps_check:
        holds = False
        lam = None
    return FactorCheck(condition, holds, lam, residual, False)


def nilpotent_sum_closure(
    a: np.ndarray,
    b: np.ndarray,
    tol: Tolerance = DEFAULT_TOL,
    lam: complex | None = None,
) -> bool:
    """Decide whether a + b is quasinilpotent, given that a and b are and
    that a b = lambda * b a for some nonzero scalar.

    Raises
    ------
    PreconditionViolated
        If a or b fails the quasinilpotency test, or a b is not a scalar
        multiple of b a.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"need square matrices of equal shape, got {a.shape} and {b.shape}")
    if not is_quasinilpotent(a, tol):
        raise PreconditionViolated("a is not quasinilpotent")
    if not is_quasinilpotent(b, tol):
        raise PreconditionViolated("b is not quasinilpotent")
    chk = check_factor_condition(a @ b, b @ a, lam, tol, condition="a b = lambda b a")
    if not chk.holds:
        raise PreconditionViolated(
            f"a b is not a scalar multiple of b a (residual {chk.residual:.3e})"
        )
    return is_quasinilpotent(a + b, tol)


def drazin_sum_nilpotent(
    a: np.ndarray,
    b: np.ndarray,
    tol: Tolerance = DEFAULT_TOL,
    lam: complex | None = None,
    force: bool = False,
) -> np.ndarray:
    """Drazin inverse of a + b when a is quasinilpotent and
    a b = lambda * b a b^pi.

    Under the hypothesis the inverse is

        (a + b)^d = b^d + sum_{n >= 0} (b^d)^(n+2) a (a + b)^n.

    Parameters
    ----------
    a, b : ndarray
        Square matrices of equal shape; a quasinilpotent.
    tol : Tolerance
    lam : complex, optional
        Fixed scalar for the hypothesis test; None fits it.
    force : bool
        Evaluate the formula even when the hypothesis fails. The output then
        carries no guarantee; validate it with check_drazin_axioms.

    Returns
    -------
    ndarray

    Raises
    ------
    PreconditionViolated
        If (without force) a is not quasinilpotent or the hypothesis fails.
    ConvergenceError
        If the series fails to terminate within 2 * dim + 2 terms.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"need square matrices of equal shape, got {a.shape} and {b.shape}")
    b_dr = drazin_oracle(b, tol)
    if not force:
        if not is_quasinilpotent(a, tol):
            raise PreconditionViolated("a is not quasinilpotent")
        chk = check_factor_condition(
            a @ b, b @ a @ b_dr.pi, lam, tol, condition="a b = lambda b a b^pi"
        )
        if not chk.holds:
            raise PreconditionViolated(
                f"hypothesis a b = lambda b a b^pi fails (residual {chk.residual:.3e})"
            )
    dim = a.shape[0]
    tiny = tol.eps_tail * scale_of(a, b)
    m_pow = PowerCache(a + b)
    bd_pow = PowerCache(b_dr.d)

    def terms():
        n = 0
        while True:
            yield bd_pow(n + 2) @ a @ m_pow(n)
            n += 1

    s = summed(terms(), series_cap(dim), tiny, "nilpotent-plus-b series")
    return b_dr.d + s


def drazin_sum(
    a: np.ndarray,
    b: np.ndarray,
    tol: Tolerance = DEFAULT_TOL,
    lam: complex | None = None,
    force: bool = False,
    a_dr: DrazinResult | None = None,
    b_dr: DrazinResult | None = None,
    check: bool = True,
) -> np.ndarray:
    """Drazin inverse of a + b under a b = lambda * a^pi b a b^pi.

    The result combines the corner inverses with four terminating series
    (m = a + b throughout):

        (a + b)^d = b^pi a^d + b^d a^pi
                  + sum_n (b^d)^(n+2) a m^n a^pi
                  + sum_n b^pi m^n b (a^d)^(n+2)
                  - sum_n sum_k (b^d)^(k+1) a m^(n+k) b (a^d)^(n+2)
                  - sum_n (b^d)^(n+2) a m^n b a^d

    with every index running from 0. All series obey the shared truncation
    policy (cap 2 * dim + 2, early exit on two consecutive tiny terms).

    Parameters
    ----------
    a, b : ndarray
        Square matrices of equal shape.
    tol : Tolerance
    lam : complex, optional
        Fixed scalar for the hypothesis; None fits it.
    force : bool
        Evaluate despite a failing hypothesis.
    a_dr, b_dr : DrazinResult, optional
        Precomputed inverses to use instead of the oracle. Callers with
        structural knowledge (block splittings) supply these.
    check : bool
        Skip the hypothesis test entirely when False; used by callers that
        have already verified an equivalent condition.

    Returns
    -------
    ndarray

    Raises
    ------
    PreconditionViolated
        If (without force) the hypothesis fails.
    ConvergenceError
        If a series fails to terminate within the cap.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape or a.shape[0] != a.shape[1]:
        raise ValueError(f"need square matrices of equal shape, got {a.shape} and {b.shape}")
    if a_dr is None:
        a_dr = drazin_oracle(a, tol)
    if b_dr is None:
        b_dr = drazin_oracle(b, tol)
    if check and not force:
        chk = check_factor_condition(
            a @ b,
            a_dr.pi @ b @ a @ b_dr.pi,
            lam,
            tol,
            condition="a b = lambda a^pi b a b^pi",
        )
        if not chk.holds:
            raise PreconditionViolated(
                f"hypothesis a b = lambda a^pi b a b^pi fails (residual {chk.residual:.3e})"
            )

    dim = a.shape[0]
    tiny = tol.eps_tail * scale_of(a, b)
    nmax = series_cap(dim)
    m_pow = PowerCache(a + b)
    ad_pow = PowerCache(a_dr.d)
    bd_pow = PowerCache(b_dr.d)
    a_pi, b_pi = a_dr.pi, b_dr.pi

    def s3_terms():
        n = 0
        while True:
            yield bd_pow(n + 2) @ a @ m_pow(n) @ a_pi
            n += 1

    def s4_terms():
        n = 0
        while True:
            yield b_pi @ m_pow(n) @ b @ ad_pow(n + 2)
            n += 1

    def s6_terms():
        n = 0
        while True:
            yield bd_pow(n + 2) @ a @ m_pow(n) @ b @ ad_pow(1)
            n += 1

    s3 = summed(s3_terms(), nmax, tiny, "sum formula series 1")
    s4 = summed(s4_terms(), nmax, tiny, "sum formula series 2")
    s6 = summed(s6_terms(), nmax, tiny, "sum formula series 4")

    # Double series: inner sum over k at fixed n, then the outer loop obeys
    # the same two-consecutive-tiny early exit on the inner totals.
    s5 = np.zeros_like(a)
    consecutive_tiny = 0
    last = 0.0
    for n in range(nmax):
        def inner_terms(n=n):
            k = 0
            while True:
                yield bd_pow(k + 1) @ a @ m_pow(n + k) @ b
                k += 1

        inner = summed(inner_terms(), nmax, tiny, "sum formula series 3 (inner)")
        term = inner @ ad_pow(n + 2)
        s5 = s5 + term
        last = fro_norm(term)
        consecutive_tiny = consecutive_tiny + 1 if last < tiny else 0
        if consecutive_tiny >= 2:
            break
    else:
        if last > tiny:
            raise ConvergenceError(
                f"sum formula series 3: outer term norm {last:.3e} still above "
                f"{tiny:.3e} after {nmax} terms"
            )

    return b_pi @ ad_pow(1) + bd_pow(1) @ a_pi + s3 + s4 - s5 - s6
