"""Block-matrix rules: hypothesis checks, dispatch, exchange, closed form."""

import numpy as np
import pytest

from gdrazin import (
    RULE_IDS,
    Block2x2,
    CaseSpec,
    PreconditionViolated,
    assemble,
    block_drazin,
    check_drazin_axioms,
    check_hypothesis,
    closed_form_drazin,
    drazin_oracle,
    exchange,
    generate,
    preset,
)
from gdrazin.blockmat import _exchange_permutation
from gdrazin.linalg import scale_of

LAMBDAS = (0.5, 3.0, 1j, -2.0)

EXPECTED_LABELS = {
    "3.1": ["B D = lambda (B C)^pi A B D^pi", "C A = lambda (C B)^pi D C A^pi"],
    "3.2": ["B D = lambda A B D^pi", "C A = lambda D C A^pi", "B C = 0"],
    "3.3": ["A B = lambda A^pi B D (C B)^pi", "D C = lambda D^pi C A (B C)^pi"],
    "3.4": ["A B = lambda A^pi B D", "D C = 0", "B C = 0"],
    "4.1": ["B D = lambda A^pi A B", "D C = (1/lambda) D^pi C A A^pi", "B C = 0"],
    "4.2": ["C A = lambda D^pi D C", "A B = (1/lambda) A^pi B D D^pi", "C B = 0"],
    "4.3": ["A B = lambda A^pi B D", "D C = lambda D^pi C A", "B C = 0"],
}


def _case(rule, dim, lam, seed):
    return generate(CaseSpec(target=rule, dim=dim, lam=lam, seed=seed))


class TestBlock2x2:
    def test_conformability_enforced(self):
        with pytest.raises(ValueError):
            Block2x2(a=np.eye(2), b=np.zeros((3, 2)), c=np.zeros((2, 2)), d=np.eye(2))
        with pytest.raises(ValueError):
            Block2x2(a=np.zeros((2, 3)), b=np.zeros((2, 2)), c=np.zeros((2, 2)), d=np.eye(2))

    def test_assemble_layout(self):
        blocks = Block2x2(
            a=np.eye(2), b=np.full((2, 3), 2.0), c=np.full((3, 2), 3.0), d=4 * np.eye(3)
        )
        m = assemble(blocks)
        assert m.shape == (5, 5)
        assert np.array_equal(m[:2, :2], np.eye(2))
        assert np.array_equal(m[:2, 2:], np.full((2, 3), 2.0))
        assert np.array_equal(m[2:, :2], np.full((3, 2), 3.0))
        assert blocks.dims == (2, 3)

    def test_exchange_is_an_involution_and_a_similarity(self):
        rng = np.random.default_rng(0)
        blocks = Block2x2(
            a=rng.normal(size=(2, 2)),
            b=rng.normal(size=(2, 3)),
            c=rng.normal(size=(3, 2)),
            d=rng.normal(size=(3, 3)),
        )
        back = exchange(exchange(blocks))
        assert np.array_equal(back.a, blocks.a)
        assert np.array_equal(back.c, blocks.c)
        perm = _exchange_permutation(2, 3)
        assert np.allclose(perm @ perm.T, np.eye(5))
        assert np.allclose(
            assemble(blocks), perm @ assemble(exchange(blocks)) @ perm.T
        )


class TestHypothesisChecks:
    @pytest.mark.parametrize("rule", RULE_IDS)
    def test_labels_in_catalog_order(self, rule):
        case = _case(rule, 5, 3.0, 0)
        checks = check_hypothesis(case.blocks, rule, lam=3.0)
        assert [c.condition for c in checks] == EXPECTED_LABELS[rule]
        assert all(c.holds for c in checks)

    @pytest.mark.parametrize("rule", RULE_IDS)
    def test_fitted_mode_recovers_lambda(self, rule):
        lam = -2.0
        case = _case(rule, 6, lam, 1)
        checks = check_hypothesis(case.blocks, rule)
        assert all(c.holds for c in checks)
        fitted = [c for c in checks if c.lam is not None]
        # reciprocal conditions fit 1/lambda; normalize before comparing
        seen = set()
        for c in fitted:
            v = complex(c.lam)
            seen.add(round(v.real, 6) + 1j * round(v.imag, 6))
        assert any(abs(v - lam) < 1e-6 or abs(1 / v - lam) < 1e-6 for v in seen)

    def test_lambda_consistency_row_appears(self):
        case = _case("4.3", 6, 0.5, 2)
        checks = check_hypothesis(case.blocks, "4.3")
        assert checks[-1].condition == "lambda consistency"
        assert checks[-1].holds

    def test_wrong_lambda_fails_scalar_rows_only(self):
        case = _case("4.3", 5, 3.0, 0)
        checks = check_hypothesis(case.blocks, "4.3", lam=1.0)
        by_label = {c.condition: c for c in checks}
        assert not by_label["A B = lambda A^pi B D"].holds
        assert by_label["B C = 0"].holds

    def test_unknown_rule_rejected(self):
        case = _case("3.1", 4, 0.5, 0)
        with pytest.raises(ValueError, match="unknown rule"):
            check_hypothesis(case.blocks, "9.9")
        with pytest.raises(ValueError):
            block_drazin(case.blocks, "9.9")

    def test_zero_lambda_rejected(self):
        case = _case("3.1", 4, 0.5, 0)
        with pytest.raises(ValueError):
            check_hypothesis(case.blocks, "3.1", lam=0)


class TestBlockDrazin:
    @pytest.mark.parametrize("rule", RULE_IDS)
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_matches_oracle(self, rule, lam):
        for dim, seed in ((3, 0), (5, 1), (8, 2)):
            case = _case(rule, dim, lam, seed)
            got = block_drazin(case.blocks, rule, lam=lam)
            m = assemble(case.blocks)
            want = drazin_oracle(m).d
            scale = scale_of(*case.matrices.values())
            assert np.linalg.norm(got - want) < 1e-8 * scale, (rule, lam, dim, seed)
            assert check_drazin_axioms(m, got).ok

    @pytest.mark.parametrize("rule", RULE_IDS)
    def test_negated_instance_is_refused_with_named_condition(self, rule):
        case = generate(CaseSpec(target=rule, dim=6, lam=3.0, seed=0, negate=True))
        with pytest.raises(PreconditionViolated) as err:
            block_drazin(case.blocks, rule, lam=3.0)
        assert case.broken in str(err.value)

    def test_zero_product_subsumption(self):
        # an instance of the zero-coupling rule also satisfies the projector
        # variant: with B C = 0 the extra projector factors are identities
        case = _case("3.2", 6, 0.5, 3)
        assert all(c.holds for c in check_hypothesis(case.blocks, "3.1", lam=0.5))
        a31 = block_drazin(case.blocks, "3.1", lam=0.5)
        a32 = block_drazin(case.blocks, "3.2", lam=0.5)
        assert np.allclose(a31, a32, atol=1e-10)

    def test_one_sided_subsumption(self):
        # D C = 0 cases satisfy the two-sided variant degenerately
        case = _case("3.4", 6, 3.0, 5)
        assert all(c.holds for c in check_hypothesis(case.blocks, "3.3", lam=3.0))
        a33 = block_drazin(case.blocks, "3.3", lam=3.0)
        a34 = block_drazin(case.blocks, "3.4", lam=3.0)
        assert np.allclose(a33, a34, atol=1e-10)

    def test_exchange_symmetry(self):
        # the reciprocal-pair rules are exchange images of each other at the
        # same scalar; inverses transfer by the swap permutation
        case = _case("4.1", 6, 0.5, 7)
        ex = exchange(case.blocks)
        checks = check_hypothesis(ex, "4.2", lam=0.5)
        assert all(c.holds for c in checks)
        m, n = case.blocks.dims
        perm = _exchange_permutation(n, m)
        lhs = block_drazin(ex, "4.2", lam=0.5)
        rhs = perm @ block_drazin(case.blocks, "4.1", lam=0.5) @ perm.T
        assert np.allclose(lhs, rhs, atol=1e-10)

    def test_corner_part_cube_vanishes_under_zero_coupling(self):
        # B C = 0 alone forces Q^3 = 0 for Q = [[0, B], [C, 0]]: both corners
        # of the cube carry a B C factor
        case = _case("4.3", 6, 1j, 4)
        b, c = case.blocks.b, case.blocks.c
        m, n = case.blocks.dims
        q = np.block([[np.zeros((m, m)), b], [c, np.zeros((n, n))]])
        assert np.linalg.norm(np.linalg.matrix_power(q, 3)) < 1e-12

    def test_left_column_block_triangular_case(self):
        # M = [[A, 0], [C, 0]]: hypothesis degenerate, series genuinely
        # nonzero, inverse known in closed form [[A^d, 0], [C (A^d)^2, 0]]
        rng = np.random.default_rng(12)
        a = np.diag(rng.uniform(0.8, 1.3, 3)).astype(complex)
        c = (rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3)))
        blocks = Block2x2(a=a, b=np.zeros((3, 2)), c=c, d=np.zeros((2, 2)))
        got = block_drazin(blocks, "3.4", lam=1.0)
        ad = np.linalg.inv(a)
        want = np.block([
            [ad, np.zeros((3, 2))],
            [c @ ad @ ad, np.zeros((2, 2))],
        ])
        assert np.allclose(got, want, atol=1e-10)
        assert np.allclose(drazin_oracle(assemble(blocks)).d, want, atol=1e-10)


class TestClosedForm:
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_reconciles_with_engine_and_oracle(self, lam):
        case = _case("4.1", 6, lam, 11)
        closed = closed_form_drazin(case.blocks, lam=lam)
        want = drazin_oracle(assemble(case.blocks)).d
        scale = scale_of(*case.matrices.values())
        assert np.linalg.norm(closed - want) < 1e-8 * scale

    def test_refuses_negated_instance(self):
        case = generate(CaseSpec(target="4.1", dim=5, lam=0.5, seed=1, negate=True))
        with pytest.raises(PreconditionViolated):
            closed_form_drazin(case.blocks, lam=0.5)

    def test_canonical_preset_regression(self):
        case = preset("example-4.4")
        blocks = case.blocks
        checks = check_hypothesis(blocks, "4.3", lam=3.0)
        assert all(c.holds for c in checks)
        rejected = check_hypothesis(blocks, "4.3", lam=1.0)
        assert not rejected[0].holds  # A B = lambda A^pi B D fails at 1
        got = block_drazin(blocks, "4.3", lam=3.0)
        want = drazin_oracle(assemble(blocks)).d
        assert np.linalg.norm(got - want) < 1e-10
