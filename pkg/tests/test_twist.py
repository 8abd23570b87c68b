import pytest
from gmpy2 import mpq

from yangtwist.chain import ChainSpec, NonGenericSpecError, site_operators
from yangtwist.exact import OperatorPolynomial, TensorOperator, permute_tensor_factors
from yangtwist.permutation import SitePermutation, all_permutations
from yangtwist.twist import (
    check_cocycle,
    check_conjugation,
    check_factorization,
    check_factorization_all,
    check_gauss_decomposition,
    check_triangularity,
    f_matrix,
    f_matrix_right,
    left_partial_equation_sides,
    partial_f_left,
    partial_f_right,
    q_factor_left,
    q_factor_right,
    q_left_truncated,
    q_right_truncated,
    tilde_ops,
)

HALF_HALF = ChainSpec.build([1, 1], [0, 3], 1)


def passed(results):
    bad = [str(r) for r in results if not r.status]
    assert not bad, bad
    return True


def test_single_site_tilde_operators():
    spec = ChainSpec.build([1], [mpq(2, 5)], 3)
    t = tilde_ops(spec)
    sz, sp, sm = site_operators(spec, 0)
    eye = TensorOperator.identity(spec.shape)
    delta = mpq(2, 5)
    assert t.d_tilde == OperatorPolynomial.linear(eye * -delta - sz * 3, eye)
    assert t.b_tilde == OperatorPolynomial.constant(sm * 3)
    assert t.c_tilde == OperatorPolynomial.constant(sp * 3)
    assert t.a_tilde == OperatorPolynomial.linear(eye * -delta + sz * 3, eye)


def test_single_site_f_is_identity():
    spec = ChainSpec.build([3], [1], 1)
    f = f_matrix(spec)
    eye = TensorOperator.identity(spec.shape)
    assert f.op == eye and f.inverse == eye


def test_tilde_b_c_symmetric_under_site_swap():
    spec = ChainSpec.build([1, 2], [0, 3], 1)
    swap = SitePermutation((1, 0))
    t = tilde_ops(spec)
    ts = tilde_ops(spec.permuted(swap))
    for name in "ABCD":
        moved = ts.entry(name).map(lambda c: permute_tensor_factors(c, swap), spec.shape)
        assert moved == t.entry(name)


def test_q_factor_half_half_example():
    # eigenvalue on (m, s2) = (-1/2, +1/2) is (d1 - d2)/(d1 - d2 + eta) = (-3)/(-2)
    q = q_factor_left(HALF_HALF)
    assert q.diagonal_entries() == [1, 1, mpq(3, 2), 1]


@pytest.mark.parametrize("d1,d2,eta", [("0", "3", "1"), ("1/2", "-7/3", "2/3"), ("5", "0", "-1/4")])
def test_q_factor_half_half_symbolic(d1, d2, eta):
    spec = ChainSpec.build([1, 1], [d1, d2], eta)
    a, eta = mpq(d1) - mpq(d2), mpq(eta)
    assert q_factor_left(spec).diagonal_entries() == [1, 1, a / (a + eta), 1]


def test_q_factors_normalised():
    spec = ChainSpec.build([2, 1, 3], ["1/3", 5, "-17/2"], "2/3")
    left, right = q_factor_left(spec), q_factor_right(spec)
    for w, ql, qr in zip(spec.basis_weights(), left.diagonal_entries(), right.diagonal_entries()):
        if w[0] == spec.sites[0].spin:
            assert ql == 1
        if w[-1] == -spec.sites[-1].spin:
            assert qr == 1
    assert left.diagonal_entries()[0] == 1 and right.diagonal_entries()[0] == 1


@pytest.mark.parametrize("two_ls,deltas", [([1, 1], [0, "7/3"]), ([2, 1], [0, "-8/3"]), ([1, 2], ["1/3", "-4/5"])])
def test_q_closed_form_matches_aligned_truncation(two_ls, deltas):
    spec = ChainSpec.build(two_ls, deltas, 1)
    assert q_left_truncated(spec, 40) == q_factor_left(spec)
    assert q_right_truncated(spec, 40) == q_factor_right(spec)
    # the aligned cut is exact at any depth, not just large ones
    assert q_left_truncated(spec, 3) == q_factor_left(spec)


def test_raw_product_on_integer_separation_is_reported():
    with pytest.raises(NonGenericSpecError, match="raw product"):
        q_left_truncated(HALF_HALF, 40)


def test_q_index_truncation_converges_without_being_exact():
    spec = ChainSpec.build([2, 1], [0, "7/3"], 1)
    exact = q_factor_left(spec).diagonal_entries()
    errs = []
    for k in (10, 40, 160):
        approx = q_left_truncated(spec, k, aligned=False).diagonal_entries()
        errs.append(max(abs(a - b) for a, b in zip(approx, exact)))
    assert all(e != 0 for e in errs)
    assert errs[0] > errs[1] > errs[2]


def test_f_half_half_frozen():
    # lower-triangular, F|up up> = |up up>, weight-1 block [[1, 0], [-1/2, 3/2]]
    h = mpq(1, 2)
    expected = TensorOperator(HALF_HALF.shape, [[1, 0, 0, 0], [0, 1, 0, 0], [0, -h, 3 * h, 0], [0, 0, 0, 1]])
    assert f_matrix(HALF_HALF).op == expected


def test_f_half_half_off_diagonal_formula():
    for d1, d2, eta in [("0", "3", "1"), ("1/2", "-7/3", "2/3")]:
        spec = ChainSpec.build([1, 1], [d1, d2], eta)
        a, eta = mpq(d1) - mpq(d2), mpq(eta)
        f = f_matrix(spec).op
        assert f.mat[2, 1] == eta / (a + eta)


def test_partial_inverses(mixed_chain):
    for part in (partial_f_left(mixed_chain), partial_f_right(mixed_chain)):
        assert part.op @ part.inverse == TensorOperator.identity(mixed_chain.shape)


@pytest.mark.parametrize("which", "DBC")
def test_left_partial_solves_its_linear_equation(mixed_chain, which):
    lhs, rhs = left_partial_equation_sides(mixed_chain, which)
    assert lhs == rhs


def test_conjugation(mixed_chain):
    passed(check_conjugation(mixed_chain))


def test_conjugation_reference(reference_chain):
    passed(check_conjugation(reference_chain))


def test_triangularity(mixed_chain):
    passed(check_triangularity(mixed_chain))


def test_factorization_all_perms(mixed_chain):
    passed(check_factorization_all(mixed_chain))


def test_recursion_orders_agree(mixed_chain):
    assert f_matrix(mixed_chain).op == f_matrix_right(mixed_chain).op


def test_cocycle_suite(mixed_chain):
    results = check_cocycle(mixed_chain)
    names = {r.check for r in results}
    assert {"cocycle", "exchange", "recursion-orders", "plain-left-partial", "plain-right-partial"} <= names
    if mixed_chain.n_sites == 3:
        assert {"left-block-symmetry", "right-block-symmetry"} <= names
    passed(results)


@pytest.mark.parametrize("r1,r2", [(1, 1), (1, 3), (3, 2), (2, 2)])
def test_gauss_decomposition(r1, r2):
    assert check_gauss_decomposition(r1, "1/5", r2, "-4", 1).status


def test_identity_permutation_trivial():
    spec = ChainSpec.build([1, 2, 3], [0, 5, 11], 1)
    assert check_factorization(spec, SitePermutation.identity(3)).status


def test_non_generic_rejected():
    with pytest.raises(NonGenericSpecError):
        f_matrix(ChainSpec.build([1, 1], [0, 1], 1))
