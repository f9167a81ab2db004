"""Independent Drazin-inverse oracle: index, inverse, spectral idempotent.

The oracle is deliberately formula-free with respect to the rest of the
package: a^d = a^k (a^{2k+1})^+ a^k with k the Drazin index. Everything else
in the package is validated against it, so nothing here may depend on the
additive or block-matrix modules.

Numerical strategy: the input is normalized by its largest singular value
before any power is taken. Ranks of powers are decided with the absolute
cutoff eps_rank (a relative cutoff would promote the rounding noise that
powers of a conjugated nilpotent consist of to full rank), and the
pseudoinverse of a^{2k+1} is truncated to the stationary rank found during
index computation (a relative cutoff would invert that noise whenever the
whole power decays). Inputs whose singular values fall too close to the
cutoff, or whose spectral gap at the stationary rank is too thin, are
rejected with AxiomViolation rather than guessed at.
"""

from dataclasses import dataclass

import numpy as np

from .errors import AxiomViolation
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, fro_norm, mat_power

__all__ = [
    "DrazinResult",
    "AxiomReport",
    "drazin_index",
    "drazin_oracle",
    "is_quasinilpotent",
    "check_drazin_axioms",
]

# Singular values within this factor of the rank cutoff make the rank
# decision ambiguous; the gap between kept and dropped singular values of
# a^{2k+1} must exceed GAP_MIN.
AMBIGUITY_BAND = 100.0
GAP_MIN = 1e4


@dataclass(frozen=True)
class DrazinResult:
    """The Drazin inverse d = a^d, spectral idempotent pi = I - a a^d, and index."""

    d: np.ndarray
    pi: np.ndarray
    index: int


@dataclass(frozen=True)
class AxiomReport:
    """Residuals of the three Drazin axioms for a candidate inverse.

    solution  ||cand a cand - cand||
    commute   ||a cand - cand a||
    power     ||a^{k+1} cand - a^k||
    """

    solution: float
    commute: float
    power: float
    ok: bool

    def worst(self) -> float:
        return max(self.solution, self.commute, self.power)


def _require_square(a: np.ndarray) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got {a.shape}")
    return a


def _power_ranks(ah: np.ndarray, eps_rank: float) -> tuple[int, int]:
    """Index and stationary rank from the rank sequence of powers of the
    sigma_max-normalized matrix ``ah``. Absolute cutoff; ambiguity guarded."""
    n = ah.shape[0]
    prev = n
    p = np.eye(n, dtype=complex)
    for j in range(1, n + 2):
        p = p @ ah
        sv = np.linalg.svd(p, compute_uv=False)
        if np.any((sv > eps_rank / AMBIGUITY_BAND) & (sv < eps_rank * AMBIGUITY_BAND)):
            raise AxiomViolation(
                f"rank of power {j} is ambiguous: singular values too close "
                f"to the cutoff {eps_rank:g}"
            )
        r = int(np.count_nonzero(sv > eps_rank))
        if r == prev:
            return j - 1, r
        prev = r
    raise AxiomViolation("rank sequence of powers failed to stabilize")


def drazin_index(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Smallest k >= 0 with rank(a^k) = rank(a^{k+1})."""
    a = _require_square(a)
    s = float(np.linalg.norm(a, 2))
    if s == 0.0:
        return 1 if a.shape[0] > 0 else 0
    k, _ = _power_ranks(a / s, tol.eps_rank)
    return k


def drazin_oracle(a, tol: Tolerance = DEFAULT_TOL) -> DrazinResult:
    """Drazin inverse via a^d = a^k (a^{2k+1})^+ a^k, self-checked.

    The pseudoinverse is truncated to the stationary rank of the power
    sequence; see the module docstring. Raises AxiomViolation if the result
    fails any Drazin axiom beyond eps_match, or if the input's rank structure
    is numerically ambiguous.
    """
    a = _require_square(a)
    n = a.shape[0]
    s = float(np.linalg.norm(a, 2))
    if s == 0.0:
        return DrazinResult(
            d=np.zeros_like(a), pi=np.eye(n, dtype=complex), index=1 if n else 0
        )
    ah = a / s
    k, r = _power_ranks(ah, tol.eps_rank)
    if r == 0:
        # nilpotent: inverse 0, idempotent I
        return DrazinResult(d=np.zeros_like(a), pi=np.eye(n, dtype=complex), index=k)
    m = max(k, 1)
    x = np.linalg.matrix_power(ah, 2 * m + 1)
    u, sv, vh = np.linalg.svd(x)
    if r < sv.size and sv[r] > 0.0 and sv[r - 1] / sv[r] < GAP_MIN:
        raise AxiomViolation(
            f"spectral gap at stationary rank {r} too thin: "
            f"{sv[r - 1]:.3e} vs {sv[r]:.3e}"
        )
    x_pinv = (vh[:r].conj().T / sv[:r]) @ u[:, :r].conj().T
    am = np.linalg.matrix_power(ah, m)
    dh = am @ x_pinv @ am
    # self-check in the normalized domain, where powers cannot overflow
    report = check_drazin_axioms(ah, dh, tol)
    if not report.ok:
        raise AxiomViolation(
            f"oracle output fails Drazin axioms: residuals "
            f"({report.solution:.3e}, {report.commute:.3e}, {report.power:.3e})"
        )
    d = dh / s
    pi = np.eye(n, dtype=complex) - a @ d
    return DrazinResult(d=d, pi=pi, index=k)


def is_quasinilpotent(a, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Nilpotency test: ||a^n|| <= eps_check * max(1, ||a||)^n at n = rows(a)."""
    a = _require_square(a)
    n = a.shape[0]
    bound = tol.eps_check * max(1.0, fro_norm(a)) ** n
    return fro_norm(mat_power(a, n)) <= bound


def check_drazin_axioms(a, cand, tol: Tolerance = DEFAULT_TOL) -> AxiomReport:
    """Residuals of cand as a Drazin inverse of a.

    Verdict: every residual <= eps_match * scale, where scale is max(1,
    largest operand norm) of the corresponding identity.
    """
    a = _require_square(a)
    cand = _require_square(cand)
    if a.shape != cand.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {cand.shape}")
    k = drazin_index(a, tol)
    ak = mat_power(a, k)
    r1 = fro_norm(cand @ a @ cand - cand)
    r2 = fro_norm(a @ cand - cand @ a)
    r3 = fro_norm(mat_power(a, k + 1) @ cand - ak)
    na, nc = fro_norm(a), fro_norm(cand)
    s12 = max(1.0, na, nc)
    s3 = max(1.0, na, nc, fro_norm(ak))
    ok = (
        r1 <= tol.eps_match * s12
        and r2 <= tol.eps_match * s12
        and r3 <= tol.eps_match * s3
    )
    return AxiomReport(solution=r1, commute=r2, power=r3, ok=ok)
