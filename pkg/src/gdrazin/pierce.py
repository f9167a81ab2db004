"""Pierce decomposition, triangular-split Drazin inversion, and the
factorization-exchange identity for products.

Given an idempotent p, any square x splits into the four corners
p x p, p x q, q x p, q x q with q = 1 - p. When one off-corner vanishes the
Drazin inverse of x is assembled from the corner inverses plus a coupling
series; that assembly is the workhorse behind the additive and block formulas
elsewhere in this package.
"""

from dataclasses import dataclass

import numpy as np

from .drazin import DrazinResult, drazin_oracle
from .errors import NotIdempotent, NotTriangular
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, fro_norm, scale_of
from .series import NilpotentRun, PowerCache, series_cap, summed

__all__ = ["PierceSplit", "pierce_split", "triangular_drazin", "cline_drazin"]


@dataclass(frozen=True)
class PierceSplit:
    """Corners of x relative to an idempotent p, kept at full size.

    Attributes
    ----------
    p : ndarray
        The idempotent used for the split.
    pp, pq, qp, qq : ndarray
        p x p, p x q, q x p and q x q with q = 1 - p. All four are the same
        shape as x; their sum reconstructs x, and each is absorbed by the
        matching side projections (p @ pp == pp == pp @ p, and so on).
    """

    p: np.ndarray
    pp: np.ndarray
    pq: np.ndarray
    qp: np.ndarray
    qq: np.ndarray


def pierce_split(x: np.ndarray, p: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> PierceSplit:
    """Split x into Pierce corners relative to the idempotent p.

    Raises
    ------
    NotIdempotent
        If ``p @ p`` differs from ``p`` beyond eps_check * scale.
    """
    x = as_matrix(x)
    p = as_matrix(p)
    if x.shape[0] != x.shape[1] or x.shape != p.shape:
        raise ValueError(f"need square x and p of equal shape, got {x.shape} and {p.shape}")
    scale = scale_of(p)
    if fro_norm(p @ p - p) > tol.eps_check * scale:
        raise NotIdempotent(f"p @ p - p has norm {fro_norm(p @ p - p):.3e}")
    q = np.eye(p.shape[0], dtype=complex) - p
    return PierceSplit(p=p, pp=p @ x @ p, pq=p @ x @ q, qp=q @ x @ p, qq=q @ x @ q)


def triangular_drazin(
    x: np.ndarray,
    p: np.ndarray,
    orientation: str = "lower",
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """Drazin inverse of a matrix that is triangular relative to an idempotent.

    For ``orientation="lower"`` the corner p x (1-p) must vanish; the roles are
    a = p x p on the diagonal, b = (1-p) x (1-p), with coupling c = (1-p) x p.
    For ``orientation="upper"`` the corner (1-p) x p must vanish and the roles
    swap: b = p x p, a = (1-p) x (1-p), c = p x (1-p). Either way the result is

        x^d = a^d + b^d + z,
        z = sum_i (b^d)^(i+2) c (a a^pi)^i a^pi
          + sum_i (b b^pi)^i b^pi c (a^d)^(i+2)
          - b^d c a^d.

    Both series terminate: a a^pi and b b^pi are nilpotent, so terms past the
    matrix dimension are identically zero. The running nilpotent powers are
    clamped to exact zero once below eps_tail * scale.

    Parameters
    ----------
    x, p : ndarray
        Square matrix and idempotent of the same shape.
    orientation : {"lower", "upper"}
        Which off-corner is required to vanish.
    tol : Tolerance
        Threshold bundle; eps_check gates the triangularity test, eps_tail
        the series policy.

    Returns
    -------
    ndarray
        The Drazin inverse of x.

    Raises
    ------
    NotTriangular
        If the required off-corner exceeds eps_check * scale.
    NotIdempotent
        If p is not an idempotent.
    ConvergenceError
        If a series fails to terminate within 2 * dim + 2 terms (not
        reachable when the triangularity precondition holds).
    """
    if orientation not in ("lower", "upper"):
        raise ValueError(f"orientation must be 'lower' or 'upper', got {orientation!r}")
    split = pierce_split(x, p, tol)
    scale = scale_of(split.pp, split.qq, x)
    if orientation == "lower":
        off, a, b, c = split.pq, split.pp, split.qq, split.qp
    else:
        off, a, b, c = split.qp, split.qq, split.pp, split.pq
    if fro_norm(off) > tol.eps_check * scale:
        raise NotTriangular(
            f"off-corner norm {fro_norm(off):.3e} exceeds {tol.eps_check * scale:.3e}"
        )

    a_dr = drazin_oracle(a, tol)
    b_dr = drazin_oracle(b, tol)
    return _triangular_assemble(a, a_dr, b, b_dr, c, x.shape[0], tol, scale)


def _triangular_assemble(
    a: np.ndarray,
    a_dr: DrazinResult,
    b: np.ndarray,
    b_dr: DrazinResult,
    c: np.ndarray,
    dim: int,
    tol: Tolerance,
    scale: float,
) -> np.ndarray:
    """z-series assembly shared by both orientations."""
    tiny = tol.eps_tail * scale
    nmax = series_cap(dim)
    ad_pow = PowerCache(a_dr.d)
    bd_pow = PowerCache(b_dr.d)
    # Running (a a^pi)^i a^pi and (b b^pi)^i b^pi, from i = 0.
    a_run = NilpotentRun(a_dr.pi, a @ a_dr.pi, tiny, left=True)
    b_run = NilpotentRun(b_dr.pi, b @ b_dr.pi, tiny, left=True)

    def left_terms():
        i = 0
        while True:
            yield bd_pow(i + 2) @ c @ a_run.value
            a_run.advance()
            i += 1

    def right_terms():
        i = 0
        while True:
            yield b_run.value @ c @ ad_pow(i + 2)
            b_run.advance()
            i += 1

    s1 = summed(left_terms(), nmax, tiny, "triangular coupling series (left)")
    s2 = summed(right_terms(), nmax, tiny, "triangular coupling series (right)")
    z = s1 + s2 - bd_pow(1) @ c @ ad_pow(1)
    return a_dr.d + b_dr.d + z


def cline_drazin(a: np.ndarray, b: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Drazin inverse of a product via the exchange identity.

    (a b)^d = a ((b a)^d)^2 b, valid for any conformable pair, including
    rectangular factors where a b and b a have different sizes.

    Parameters
    ----------
    a : ndarray, shape (m, n)
    b : ndarray, shape (n, m)
    tol : Tolerance

    Returns
    -------
    ndarray, shape (m, m)
        The Drazin inverse of a @ b.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0] or a.shape[0] != b.shape[1]:
        raise ValueError(f"need shapes (m, n) and (n, m), got {a.shape} and {b.shape}")
    ba_d = drazin_oracle(b @ a, tol).d
    return a @ ba_d @ ba_d @ b
