"""Drazin inverses of 2x2 block matrices under scalar power-commutation
hypotheses on the blocks.

Each supported rule id names one hypothesis set from the catalog below; the
inverse of M = [[A, B], [C, D]] is computed by splitting M into a diagonal
part P and an off-diagonal (or corner-weighted) part Q whose inverses are
known in closed form, then running the additive engine on the pair.

Rule catalog (lambda is one nonzero complex scalar per rule):

    3.1   B D = lambda (B C)^pi A B D^pi   and   C A = lambda (C B)^pi D C A^pi
    3.2   B D = lambda A B D^pi,   C A = lambda D C A^pi,   B C = 0
    3.3   A B = lambda A^pi B D (C B)^pi   and   D C = lambda D^pi C A (B C)^pi
    3.4   A B = lambda A^pi B D,   D C = 0,   B C = 0
    4.1   B D = lambda A^pi A B,   D C = (1/lambda) D^pi C A A^pi,   B C = 0
    4.2   C A = lambda D^pi D C,   A B = (1/lambda) A^pi B D D^pi,   C B = 0
    4.3   A B = lambda A^pi B D,   D C = lambda D^pi C A,   B C = 0

Rules 4.1 and 4.2 pair their two scalars reciprocally; all other two-scalar
rules share a single value. 4.2 is the block-exchange image of 4.1.
"""

from dataclasses import dataclass

import numpy as np

from .additive import FactorCheck, check_factor_condition, drazin_sum
from .drazin import DrazinResult, drazin_index, drazin_oracle
from .errors import AxiomViolation, PreconditionViolated, ReconciliationError
from .linalg import DEFAULT_TOL, Tolerance, as_matrix, fro_norm, scale_of
from .series import PowerCache, series_cap, summed

__all__ = [
    "RULE_IDS",
    "Block2x2",
    "assemble",
    "exchange",
    "check_hypothesis",
    "block_drazin",
    "closed_form_drazin",
]

RULE_IDS = ("3.1", "3.2", "3.3", "3.4", "4.1", "4.2", "4.3")


@dataclass(frozen=True)
class Block2x2:
    """Blocks of M = [[a, b], [c, d]] with a square m x m, d square n x n,
    b of shape m x n and c of shape n x m."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", as_matrix(self.a))
        object.__setattr__(self, "b", as_matrix(self.b))
        object.__setattr__(self, "c", as_matrix(self.c))
        object.__setattr__(self, "d", as_matrix(self.d))
        m, m2 = self.a.shape
        n, n2 = self.d.shape
        if m != m2 or n != n2:
            raise ValueError(f"diagonal blocks must be square, got {self.a.shape} and {self.d.shape}")
        if self.b.shape != (m, n) or self.c.shape != (n, m):
            raise ValueError(
                f"off-diagonal blocks must be {m}x{n} and {n}x{m}, "
                f"got {self.b.shape} and {self.c.shape}"
            )

    @property
    def dims(self) -> tuple[int, int]:
        return self.a.shape[0], self.d.shape[0]


def assemble(blocks: Block2x2) -> np.ndarray:
    """The full matrix [[a, b], [c, d]]."""
    return np.block([[blocks.a, blocks.b], [blocks.c, blocks.d]])


def exchange(blocks: Block2x2) -> Block2x2:
    """Swap the roles of the two diagonal corners: [[d, c], [b, a]].

    The assembled exchange image is similar to the original matrix by the
    permutation that swaps the two index ranges, so Drazin inverses transfer
    by conjugation with that permutation.
    """
    return Block2x2(a=blocks.d, b=blocks.c, c=blocks.b, d=blocks.a)


def _exchange_permutation(m: int, n: int) -> np.ndarray:
    """Permutation p with assemble(blocks) = p @ assemble(exchange(blocks)) @ p.T."""
    top = np.hstack([np.zeros((m, n)), np.eye(m)])
    bot = np.hstack([np.eye(n), np.zeros((n, m))])
    return np.vstack([top, bot]).astype(complex)


def _safe_index(q: np.ndarray, tol: Tolerance) -> int:
    try:
        return drazin_index(q, tol)
    except AxiomViolation:
        return q.shape[0]


def _zero_like(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=complex)


def _conditions(
    blocks: Block2x2,
    rule: str,
    tol: Tolerance,
    a_dr: DrazinResult,
    d_dr: DrazinResult,
) -> list[tuple[str, np.ndarray, np.ndarray, int | None]]:
    """Condition rows (label, lhs, rhs_base, lambda_power) for one rule.

    lambda_power is +1 or -1 for scalar conditions, None for zero conditions
    (whose rhs_base is the zero matrix).
    """
    a, b, c, d = blocks.a, blocks.b, blocks.c, blocks.d
    m, n = blocks.dims
    api, dpi = a_dr.pi, d_dr.pi
    rows: list[tuple[str, np.ndarray, np.ndarray, int | None]] = []

    if rule in ("3.1", "3.3"):
        bc = b @ c
        # a product at rounding-noise level is an exact zero of the
        # hypothesis; handing it to the oracle would invert the noise
        if fro_norm(bc) <= tol.eps_check * scale_of(b, c):
            bc = _zero_like(m, m)
        bc_dr = drazin_oracle(bc, tol)
        bc_pi = np.eye(m, dtype=complex) - bc @ bc_dr.d
        cb_d = c @ bc_dr.d @ bc_dr.d @ b
        cb_pi = np.eye(n, dtype=complex) - (c @ b) @ cb_d

    if rule == "3.1":
        rows.append(("B D = lambda (B C)^pi A B D^pi", b @ d, bc_pi @ a @ b @ dpi, 1))
        rows.append(("C A = lambda (C B)^pi D C A^pi", c @ a, cb_pi @ d @ c @ api, 1))
    elif rule == "3.2":
        rows.append(("B D = lambda A B D^pi", b @ d, a @ b @ dpi, 1))
        rows.append(("C A = lambda D C A^pi", c @ a, d @ c @ api, 1))
        rows.append(("B C = 0", b @ c, _zero_like(m, m), None))
    elif rule == "3.3":
        rows.append(("A B = lambda A^pi B D (C B)^pi", a @ b, api @ b @ d @ cb_pi, 1))
        rows.append(("D C = lambda D^pi C A (B C)^pi", d @ c, dpi @ c @ a @ bc_pi, 1))
    elif rule == "3.4":
        rows.append(("A B = lambda A^pi B D", a @ b, api @ b @ d, 1))
        rows.append(("D C = 0", d @ c, _zero_like(n, m), None))
        rows.append(("B C = 0", b @ c, _zero_like(m, m), None))
    elif rule == "4.1":
        rows.append(("B D = lambda A^pi A B", b @ d, api @ a @ b, 1))
        rows.append(("D C = (1/lambda) D^pi C A A^pi", d @ c, dpi @ c @ a @ api, -1))
        rows.append(("B C = 0", b @ c, _zero_like(m, m), None))
    elif rule == "4.2":
        rows.append(("C A = lambda D^pi D C", c @ a, dpi @ d @ c, 1))
        rows.append(("A B = (1/lambda) A^pi B D D^pi", a @ b, api @ b @ d @ dpi, -1))
        rows.append(("C B = 0", c @ b, _zero_like(n, n), None))
    elif rule == "4.3":
        rows.append(("A B = lambda A^pi B D", a @ b, api @ b @ d, 1))
        rows.append(("D C = lambda D^pi C A", d @ c, dpi @ c @ a, 1))
        rows.append(("B C = 0", b @ c, _zero_like(m, m), None))
    else:
        raise ValueError(f"unknown rule {rule!r}; valid ids: {', '.join(RULE_IDS)}")
    return rows


def check_hypothesis(
    blocks: Block2x2,
    rule: str,
    tol: Tolerance = DEFAULT_TOL,
    lam: complex | None = None,
) -> list[FactorCheck]:
    """Evaluate every hypothesis condition of a rule on the given blocks.

    With ``lam`` each scalar condition is tested at that value (reciprocal
    conditions at 1/lam). Without it each scalar is fitted independently and,
    when at least two conditions produced usable scalars, a final
    "lambda consistency" row reports whether they agree (or multiply to one
    for the reciprocal pairs of rules 4.1 and 4.2).

    Parameters
    ----------
    blocks : Block2x2
    rule : str
        One of RULE_IDS.
    tol : Tolerance
    lam : complex, optional
        Declared scalar; None fits per condition.

    Returns
    -------
    list of FactorCheck
        One entry per condition, in catalog order, plus the consistency row
        in fitted mode.
    """
    if rule not in RULE_IDS:
        raise ValueError(f"unknown rule {rule!r}; valid ids: {', '.join(RULE_IDS)}")
    if lam is not None and lam == 0:
        raise ValueError("lambda must be nonzero")
    a_dr = drazin_oracle(blocks.a, tol)
    d_dr = drazin_oracle(blocks.d, tol)
    return _check_hypothesis(blocks, rule, tol, lam, a_dr, d_dr)


def _check_hypothesis(
    blocks: Block2x2,
    rule: str,
    tol: Tolerance,
    lam: complex | None,
    a_dr: DrazinResult,
    d_dr: DrazinResult,
) -> list[FactorCheck]:
    rows = _conditions(blocks, rule, tol, a_dr, d_dr)
    checks: list[FactorCheck] = []
    fitted: list[complex] = []
    for label, lhs, rhs, power in rows:
        if power is None:
            checks.append(check_factor_condition(lhs, rhs, None, tol, condition=label))
            continue
        given = None
        if lam is not None:
            given = complex(lam) if power == 1 else 1.0 / complex(lam)
        chk = check_factor_condition(lhs, rhs, given, tol, condition=label)
        checks.append(chk)
        if lam is None and chk.holds and not chk.degenerate and chk.lam is not None:
            # Normalize reciprocal scalars to the rule's canonical lambda.
            fitted.append(chk.lam if power == 1 else 1.0 / chk.lam)
    if lam is None and len(fitted) >= 2:
        spread = max(abs(v - fitted[0]) for v in fitted[1:])
        band = tol.eps_check * max(1.0, max(abs(v) for v in fitted))
        checks.append(
            FactorCheck(
                condition="lambda consistency",
                holds=spread <= band,
                lam=None,
                residual=spread,
                degenerate=False,
            )
        )
    return checks


def block_drazin(
    blocks: Block2x2,
    rule: str,
    tol: Tolerance = DEFAULT_TOL,
    lam: complex | None = None,
    force: bool = False,
) -> np.ndarray:
    """Drazin inverse of the assembled block matrix under the named rule.

    Parameters
    ----------
    blocks : Block2x2
    rule : str
        One of RULE_IDS; selects the hypothesis set and splitting.
    tol : Tolerance
    lam : complex, optional
        Declared scalar for the hypothesis test; None fits it.
    force : bool
        Evaluate the rule's formula even when a condition fails. The output
        then carries no guarantee; validate it with check_drazin_axioms.

    Returns
    -------
    ndarray
        Square matrix of size m + n.

    Raises
    ------
    PreconditionViolated
        If (without force) any hypothesis condition fails.
    ConvergenceError
        If a series fails to terminate within the cap (reachable only under
        force).
    """
    if rule not in RULE_IDS:
        raise ValueError(f"unknown rule {rule!r}; valid ids: {', '.join(RULE_IDS)}")
    a_dr = drazin_oracle(blocks.a, tol)
    d_dr = drazin_oracle(blocks.d, tol)
    checks = _check_hypothesis(blocks, rule, tol, lam, a_dr, d_dr)
    failing = [c for c in checks if not c.holds]
    if failing and not force:
        raise PreconditionViolated(
            "hypothesis fails: " + "; ".join(c.condition for c in failing)
        )
    return _dispatch(blocks, rule, tol, a_dr, d_dr)


def _diag_dr(a_dr: DrazinResult, d_dr: DrazinResult, m: int, n: int) -> DrazinResult:
    d = np.block([[a_dr.d, _zero_like(m, n)], [_zero_like(n, m), d_dr.d]])
    pi = np.block([[a_dr.pi, _zero_like(m, n)], [_zero_like(n, m), d_dr.pi]])
    return DrazinResult(d=d, pi=pi, index=max(a_dr.index, d_dr.index))


def _antidiag_dr(blocks: Block2x2, tol: Tolerance, nilpotent: bool) -> tuple[np.ndarray, DrazinResult]:
    """The corner part Q = [[0, B], [C, 0]] and its Drazin data.

    With B C = 0 the cube of Q vanishes, so Q^d = 0. Otherwise Q^d follows
    from the product-exchange identity applied to the corner factors:
    (C B)^d = C ((B C)^d)^2 B and Q^d = [[0, B (C B)^d], [C (B C)^d, 0]].
    """
    m, n = blocks.dims
    b, c = blocks.b, blocks.c
    q = np.block([[_zero_like(m, m), b], [c, _zero_like(n, n)]])
    dim = m + n
    if not nilpotent and fro_norm(b @ c) <= tol.eps_check * scale_of(b, c):
        # B C at noise level makes Q^3 = 0: take the nilpotent route rather
        # than inverting noise
        nilpotent = True
    if nilpotent:
        norm = fro_norm(q)
        if norm == 0.0:
            idx = 1
        elif fro_norm(q @ q) <= tol.eps_rank * max(1.0, norm) ** 2:
            idx = 2
        else:
            idx = 3
        return q, DrazinResult(d=np.zeros((dim, dim), dtype=complex), pi=np.eye(dim, dtype=complex), index=idx)
    bc_dr = drazin_oracle(b @ c, tol)
    cb_d = c @ bc_dr.d @ bc_dr.d @ b
    qd = np.block([[_zero_like(m, m), b @ cb_d], [c @ bc_dr.d, _zero_like(n, n)]])
    qpi = np.eye(dim, dtype=complex) - q @ qd
    return q, DrazinResult(d=qd, pi=qpi, index=_safe_index(q, tol))


def _dispatch(
    blocks: Block2x2,
    rule: str,
    tol: Tolerance,
    a_dr: DrazinResult,
    d_dr: DrazinResult,
) -> np.ndarray:
    m, n = blocks.dims
    if rule == "4.2":
        ex = exchange(blocks)
        inner = _dispatch(ex, "4.1", tol, d_dr, a_dr)
        perm = _exchange_permutation(m, n)
        return perm @ inner @ perm.T

    if rule == "4.1":
        a, b, c, d = blocks.a, blocks.b, blocks.c, blocks.d
        ad, api = a_dr.d, a_dr.pi
        p = np.block([[a @ api, _zero_like(m, n)], [_zero_like(n, m), d]])
        q = np.block([[a @ a @ ad, b], [c, _zero_like(n, n)]])
        p_dr = DrazinResult(
            d=np.block([[_zero_like(m, m), _zero_like(m, n)], [_zero_like(n, m), d_dr.d]]),
            pi=np.block([[np.eye(m, dtype=complex), _zero_like(m, n)], [_zero_like(n, m), d_dr.pi]]),
            index=max(1, a_dr.index, d_dr.index),
        )
        ad2 = ad @ ad
        qd = np.block([[ad, ad2 @ b], [c @ ad2, c @ ad2 @ ad @ b]])
        qpi = np.eye(m + n, dtype=complex) - q @ qd
        q_dr = DrazinResult(d=qd, pi=qpi, index=_safe_index(q, tol))
        return drazin_sum(p, q, tol=tol, check=False, a_dr=p_dr, b_dr=q_dr)

    p = np.block([[blocks.a, _zero_like(m, n)], [_zero_like(n, m), blocks.d]])
    p_dr = _diag_dr(a_dr, d_dr, m, n)
    q, q_dr = _antidiag_dr(blocks, tol, nilpotent=rule in ("3.2", "3.4", "4.3"))
    if rule in ("3.1", "3.2"):
        return drazin_sum(q, p, tol=tol, check=False, a_dr=q_dr, b_dr=p_dr)
    return drazin_sum(p, q, tol=tol, check=False, a_dr=p_dr, b_dr=q_dr)


def closed_form_drazin(
    blocks: Block2x2,
    tol: Tolerance = DEFAULT_TOL,
    lam: complex | None = None,
    force: bool = False,
) -> np.ndarray:
    """Direct closed form for rule 4.1, cross-checked against the engine.

    Under B D = lambda A^pi A B, D C = (1/lambda) D^pi C A A^pi, B C = 0 the
    inverse has explicit corners:

        top-left      A^d
        top-right     (A^d)^2 B + sum_{n >= 0} A^n B (D^d)^(n+2)
        bottom-left   C (A^d)^2
        bottom-right  D^d + C (A^d)^3 B
                      + sum_{n >= 1} sum_{k=1..n} D^(k-1) C A^(n-k) B (D^d)^(n+2)

    The result is compared against the splitting route of ``block_drazin``;
    disagreement beyond eps_match * scale raises ReconciliationError.

    Raises
    ------
    PreconditionViolated
        If (without force) a condition of rule 4.1 fails.
    ReconciliationError
        If the two computation routes disagree.
    """
    a_dr = drazin_oracle(blocks.a, tol)
    d_dr = drazin_oracle(blocks.d, tol)
    checks = _check_hypothesis(blocks, "4.1", tol, lam, a_dr, d_dr)
    failing = [c for c in checks if not c.holds]
    if failing and not force:
        raise PreconditionViolated(
            "hypothesis fails: " + "; ".join(c.condition for c in failing)
        )

    a, b, c, d = blocks.a, blocks.b, blocks.c, blocks.d
    m, n = blocks.dims
    dim = m + n
    scale = scale_of(a, b, c, d)
    tiny = tol.eps_tail * scale
    nmax = series_cap(dim)
    a_pow = PowerCache(a)
    d_pow = PowerCache(d)
    dd_pow = PowerCache(d_dr.d)
    ad = a_dr.d
    ad2 = ad @ ad

    def tr_terms():
        i = 0
        while True:
            yield a_pow(i) @ b @ dd_pow(i + 2)
            i += 1

    def br_terms():
        i = 1
        while True:
            acc = _zero_like(n, m)
            for k in range(1, i + 1):
                acc = acc + d_pow(k - 1) @ c @ a_pow(i - k)
            yield acc @ b @ dd_pow(i + 2)
            i += 1

    tr = ad2 @ b + summed(tr_terms(), nmax, tiny, "closed form corner series")
    br = d_dr.d + c @ ad2 @ ad @ b + summed(br_terms(), nmax, tiny, "closed form tail series")
    closed = np.block([[ad, tr], [c @ ad2, br]])

    general = _dispatch(blocks, "4.1", tol, a_dr, d_dr)
    gap = fro_norm(closed - general)
    if gap > tol.eps_match * scale:
        raise ReconciliationError(
            f"closed form and splitting route disagree: {gap:.3e} "
            f"exceeds {tol.eps_match * scale:.3e}"
        )
    return closed
