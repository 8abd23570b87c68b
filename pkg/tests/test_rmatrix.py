import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from yangtwist.chain import ChainSpec, NonGenericSpecError, monodromy
from yangtwist.exact import TensorOperator, embed_operator
from yangtwist.permutation import SitePermutation, all_permutations
from yangtwist.rmatrix import (
    check_composition_law,
    check_intertwining,
    check_unitarity,
    check_word_independence,
    fundamental_as_operator,
    generalized_r,
    higher_spin_r,
    r0_eigenvalue,
    r0_truncated,
    r_from_word,
)

SPIN_PAIRS = list(itertools.product([1, 2, 3], repeat=2))
Z_PAIRS = [("0", "7/3"), ("1/5", "-4"), ("9", "2/7")]


def weights(two_l):
    return [mpq(two_l - 2 * k, 2) for k in range(two_l + 1)]


@pytest.mark.parametrize("u", ["1", "-1/2", "7/3", "-5/3"])
def test_spin_half_pair_is_fundamental(u):
    assert higher_spin_r(1, u, 1, 0, 1).op == fundamental_as_operator(u, 1)


def test_fundamental_with_nontrivial_eta():
    eta = mpq(3, 4)
    r = higher_spin_r(1, mpq(1, 2), 1, mpq(-1, 3), eta).op
    assert r == fundamental_as_operator(mpq(5, 6), eta)


def test_build_r_at_projector_point():
    # lambda = 1: R(eta) has b = c = 1/2; the diagonal factor has removable 0/0s here
    r = higher_spin_r(1, 1, 1, 0, 1).op
    assert r == fundamental_as_operator(1, 1)


@pytest.mark.parametrize("r1,r2", SPIN_PAIRS)
def test_highest_weight_fixed_and_weight_preserving(r1, r2):
    r = higher_spin_r(r1, "2/5", r2, "-3", 1)
    col0 = [r.op.mat[i, 0] for i in range(r.op.dim)]
    assert col0[0] == 1 and all(x == 0 for x in col0[1:])
    spec = ChainSpec.build([r1, r2], [0, 0])
    total = [sum(w) for w in spec.basis_weights()]
    for i, j in itertools.product(range(r.op.dim), repeat=2):
        if r.op.mat[i, j] != 0:
            assert total[i] == total[j]


@pytest.mark.parametrize("r1,r2", SPIN_PAIRS)
@pytest.mark.parametrize("z1,z2", Z_PAIRS)
def test_unitarity(r1, r2, z1, z2):
    assert check_unitarity(r1, z1, r2, z2, 1).status


def test_unitarity_other_eta():
    assert check_unitarity(2, "1/3", 3, "-5/2", "-4/7").status


def test_r_intertwines_pair_monodromy():
    spec = ChainSpec.build([1, 2], [0, 3], 1)
    swap = SitePermutation((1, 0))
    r = higher_spin_r(1, 0, 2, 3, 1).op
    t, ts = monodromy(spec), monodromy(spec, swap)
    for u in (0, mpq(1, 3), 5):
        for name in "ABCD":
            assert r @ t.entry(name)(u) == ts.entry(name)(u) @ r


@pytest.mark.parametrize("l1,l2", [(mpq(a, 2), mpq(b, 2)) for a, b in SPIN_PAIRS])
@pytest.mark.parametrize("lam", [mpq(7, 3), mpq(-11, 5), mpq(1, 7)])
def test_r0_closed_form_matches_truncated_product(l1, l2, lam):
    for s1 in weights(int(2 * l1)):
        for s2 in weights(int(2 * l2)):
            closed = r0_eigenvalue(lam, l1, l2, s1, s2)
            assert r0_truncated(lam, l1, l2, s1, s2, 50) == closed


def test_r0_index_truncation_only_converges():
    lam, l1, l2, s1, s2 = mpq(7, 3), mpq(1), mpq(1, 2), mpq(-1), mpq(1, 2)
    closed = r0_eigenvalue(lam, l1, l2, s1, s2)
    errs = [abs(r0_truncated(lam, l1, l2, s1, s2, k, aligned=False) - closed) for k in (10, 50, 200)]
    assert all(e != 0 for e in errs)
    assert errs[0] > errs[1] > errs[2]


def test_r0_top_weight_is_one():
    for l1, l2 in [(mpq(1, 2), mpq(1)), (mpq(3, 2), mpq(3, 2))]:
        assert r0_eigenvalue(mpq(2, 9), l1, l2, l1, l2) == 1


def test_generalized_r_identity_and_transposition():
    spec = ChainSpec.build([1, 2], [0, 3], 1)
    assert generalized_r(spec, SitePermutation.identity(2)) == TensorOperator.identity(spec.shape)
    assert generalized_r(spec, SitePermutation((1, 0))) == higher_spin_r(1, 0, 2, 3, 1).op


def test_generalized_r_on_adjacent_pair_of_three_sites():
    spec = ChainSpec.build([1, 2, 3], [0, 5, 11], 1)
    r = generalized_r(spec, SitePermutation.transposition(3, 1))
    assert r == embed_operator(higher_spin_r(2, 5, 3, 11, 1).op, [1, 2], spec.shape)


@pytest.mark.parametrize("two_ls,deltas", [([1, 1, 2], [0, "9/2", "-17/3"]), ([1, 2, 3], [0, 5, 11])])
def test_longest_element_words_agree(two_ls, deltas):
    spec = ChainSpec.build(two_ls, deltas, 1)
    assert r_from_word(spec, [0, 1, 0]) == r_from_word(spec, [1, 0, 1])
    assert all(c.status for c in check_word_independence(spec))


def test_composition_law():
    spec = ChainSpec.build([1, 1, 2], [0, "9/2", "-17/3"], 1)
    assert all(c.status for c in check_composition_law(spec))


def test_intertwining_all_of_s3():
    spec = ChainSpec.build([1, 2, 3], [0, 5, 11], 1)
    for perm in all_permutations(3):
        assert all(c.status for c in check_intertwining(spec, perm))


def test_wrong_r_breaks_intertwining():
    spec = ChainSpec.build([1, 2, 1], [0, 5, "1/2"], 1)
    perm = SitePermutation((1, 0, 2))
    wrong = generalized_r(spec, SitePermutation((0, 2, 1)))
    assert not all(c.status for c in check_intertwining(spec, perm, wrong))


def test_pole_is_reported():
    # lambda = 0: the swap point, where the individual Gauss factors are singular
    with pytest.raises(NonGenericSpecError, match="lambda"):
        higher_spin_r(1, 0, 1, 0, 1)


def test_json_header():
    doc = higher_spin_r(1, 1, 2, 0, "1/2").to_json()
    assert doc["params"] == {"r1": 1, "z1": "1", "r2": 2, "z2": "0", "eta": "1/2"}
    assert doc["matrix"]["shape"] == [2, 3]


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.fractions(max_denominator=9).filter(lambda f: f.denominator > 2))
def test_unitarity_random_spectral_parameter(r1, r2, lam):
    # a denominator above 2 keeps lambda off every half-integer pole
    assert check_unitarity(r1, lam, r2, 0, 1).status
