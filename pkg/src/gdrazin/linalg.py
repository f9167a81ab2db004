"""Dense complex-matrix primitives: products, powers, rank, pseudoinverse, norms.

All matrices are 2-D numpy arrays of complex128. ``as_matrix`` is the single
entry point that coerces and validates; everything downstream assumes its
output.
"""

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_matrix",
    "mat_mul",
    "mat_power",
    "rank",
    "pseudo_inverse",
    "fro_norm",
    "scale_of",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds, one knob per pipeline stage.

    eps_rank   relative singular-value cutoff for rank decisions
    eps_check  residual bound for hypothesis checks
    eps_match  bound for formula-vs-oracle and axiom comparisons
    eps_tail   series tail bound
    """

    eps_rank: float = 1e-10
    eps_check: float = 1e-9
    eps_match: float = 1e-8
    eps_tail: float = 1e-12

    def __post_init__(self) -> None:
        for name in ("eps_rank", "eps_check", "eps_match", "eps_tail"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")


DEFAULT_TOL = Tolerance()


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array and reject non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


def mat_mul(a, b) -> np.ndarray:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} x {b.shape}")
    return a @ b


def mat_power(a, n: int) -> np.ndarray:
    """a**n with a**0 = I. Requires a square and n >= 0."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix power needs a square matrix, got {a.shape}")
    if n < 0:
        raise ValueError("exponent must be nonnegative")
    return np.linalg.matrix_power(a, n)


def fro_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def scale_of(*mats) -> float:
    """max(1, largest Frobenius norm among the operands)."""
    s = 1.0
    for m in mats:
        s = max(s, float(np.linalg.norm(m)))
    return s


def rank(a, tol: Tolerance = DEFAULT_TOL) -> int:
    """Numerical rank: singular values above eps_rank * sigma_max."""
    a = as_matrix(a)
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0.0:
        return 0
    return int(np.count_nonzero(sv > tol.eps_rank * sv[0]))


def pseudo_inverse(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Moore-Penrose pseudoinverse via SVD with relative cutoff eps_rank."""
    a = as_matrix(a)
    u, sv, vh = np.linalg.svd(a, full_matrices=False)
    if sv.size == 0 or sv[0] == 0.0:
        return np.zeros((a.shape[1], a.shape[0]), dtype=complex)
    keep = sv > tol.eps_rank * sv[0]
    inv = np.zeros_like(sv)
    inv[keep] = 1.0 / sv[keep]
    return (vh.conj().T * inv) @ u.conj().T
