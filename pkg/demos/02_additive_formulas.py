#!/usr/bin/env python3
"""Additive formulas for (a + b)^d under scalar-twisted commutation."""

import numpy as np

from gdrazin import (
    PreconditionViolated,
    check_factor_condition,
    drazin_oracle,
    drazin_sum,
    drazin_sum_nilpotent,
    generate,
    CaseSpec,
    nilpotent_sum_closure,
    preset,
)

np.set_printoptions(precision=4, suppress=True, linewidth=120)

# The canonical 3x3 pair: two nilpotent single-subdiagonal matrices
# with a b = (1/2) b a. Both are nilpotent, so a^pi = b^pi = I and the
# rule-2.4 condition a b = lambda a^pi b a b^pi reduces to a b = lambda b a.
case = preset("example-2.5")
a, b = case.pair
print("a =\n", a.real, "\nb =\n", b.real)

fit = check_factor_condition(a @ b, b @ a)
print("fitted lambda:", fit.lam, " residual:", fit.residual)

# The same check with lambda pinned to 1 fails: the pair does not commute.
pinned = check_factor_condition(a @ b, b @ a, given_lambda=1.0)
print("lambda = 1 holds?", pinned.holds, " residual:", pinned.residual)

# a + b is again nilpotent here, so the six-term formula returns the
# zero matrix, and the oracle agrees.
total = drazin_sum(a, b, lam=0.5)
print("formula says zero:", not total.any())
print("oracle gap:", np.linalg.norm(total - drazin_oracle(a + b).d))

# Nilpotent closure (rule 2.2): a, b nilpotent with a b = lambda b a
# forces a + b nilpotent. The generator builds such pairs exactly.
case = generate(CaseSpec("2.2", dim=5, lam=3.0, seed=7))
a, b = case.pair
print("closure holds:", nilpotent_sum_closure(a, b, lam=3.0))

# Rule 2.3 needs only a nilpotent and a b = lambda b a b^pi. A structural
# fact shows up on every valid instance: the coupling terms vanish and
# (a + b)^d equals b^d exactly (to rounding).
case = generate(CaseSpec("2.3", dim=6, lam=-2.0, seed=1))
a, b = case.pair
total = drazin_sum_nilpotent(a, b, lam=-2.0)
bd = drazin_oracle(b).d
print("2.3 instance: || (a+b)^d - b^d || =", np.linalg.norm(total - bd))

# Formulas refuse when the hypothesis fails. negate=True breaks exactly
# one condition of the certificate.
broken = generate(CaseSpec("2.3", dim=5, lam=0.5, seed=2, negate=True))
print("broken condition:", broken.broken)
try:
    drazin_sum_nilpotent(*broken.pair, lam=0.5)
except PreconditionViolated as exc:
    print("refused:", exc)
