import pytest
from gmpy2 import mpq

from yangtwist.chain import (
    ChainSpec,
    NonGenericSpecError,
    SpecError,
    check_rtt,
    diagonal_of_d,
    fundamental_r,
    monodromy,
    quantum_determinant,
    site_operators,
)
from yangtwist.exact import OperatorPolynomial, ScalarPolynomial, TensorOperator
from yangtwist.permutation import all_permutations
from yangtwist.spin import SiteSpec


def test_fundamental_r_special_points():
    swap = fundamental_r(0, 1)
    assert swap == [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]
    r = fundamental_r(mpq(2, 3), mpq(2, 3))
    assert r[1][1] == r[1][2] == mpq(1, 2)
    with pytest.raises(ZeroDivisionError):
        fundamental_r(-1, 1)


def test_fundamental_r_unitary():
    a = TensorOperator.identity(ChainSpec.build([1, 1], [0, 0]).shape)
    from yangtwist.rmatrix import fundamental_as_operator

    assert fundamental_as_operator(2, 1) @ fundamental_as_operator(-2, 1) == a


def test_single_site_monodromy():
    spec = ChainSpec.build([1], [mpq(1, 3)], 2)
    t = monodromy(spec)
    sz, sp, sm = site_operators(spec, 0)
    eye = TensorOperator.identity(spec.shape)
    assert t.b == OperatorPolynomial.constant(sm * 2)
    assert t.d == OperatorPolynomial.linear(eye * mpq(-1, 3) - sz * 2, eye)


def test_two_site_d_entry():
    spec = ChainSpec.build([1, 2], [0, 3], 1)
    t = monodromy(spec)
    sz1, _, sm1 = site_operators(spec, 0)
    sz2, sp2, _ = site_operators(spec, 1)
    eye = TensorOperator.identity(spec.shape)
    d1 = OperatorPolynomial.linear(-sz1, eye)
    d2 = OperatorPolynomial.linear(eye * -3 - sz2, eye)
    assert t.d == OperatorPolynomial.constant(sp2 @ sm1) + d2 @ d1


def test_d_leading_coefficient_is_identity(reference_chain):
    d = monodromy(reference_chain).d
    assert d.coefficient(d.degree) == TensorOperator.identity(reference_chain.shape)


def test_quantum_determinant_examples():
    eta = mpq(5, 2)
    spec = ChainSpec.build([1], [0], eta)
    assert quantum_determinant(spec) == ScalarPolynomial([-eta * eta, 0, 1])
    spin_one = ChainSpec.build([2], [0], 1)
    assert quantum_determinant(spin_one) == ScalarPolynomial.from_roots([mpq(3, 2), mpq(-3, 2)])


def test_quantum_determinant_symmetric():
    spec = ChainSpec.build([1, 2, 3], [0, 5, 11], 1)
    base = quantum_determinant(spec)
    for perm in all_permutations(3):
        assert quantum_determinant(spec.permuted(perm)) == base


@pytest.mark.parametrize(
    "two_ls,deltas,u,v",
    [([1], [0], 2, 1), ([1, 2], [0, 3], 5, 7), ([1, 2], [0, 3], "1/3", "1/3"), ([2, 3], ["1/2", -4], "-2/9", 6)],
)
def test_rtt_examples(two_ls, deltas, u, v):
    assert check_rtt(ChainSpec.build(two_ls, deltas, 1), u, v).status


def test_rtt_rejects_pole():
    with pytest.raises(ValueError):
        check_rtt(ChainSpec.build([1], [0], 1), 0, 1)


def test_rtt_with_wrong_r_fails_with_location():
    spec = ChainSpec.build([1, 2], [0, 3], 1)
    wrong = fundamental_r(mpq(7, 2), 1)
    res = check_rtt(spec, 5, 2, r_matrix=wrong)
    assert not res.status and "block_row" in res.first_discrepancy


def test_b_and_c_commute(reference_chain):
    t = monodromy(reference_chain)
    for p in (t.b, t.c):
        for u, v in ((0, 1), (mpq(1, 3), -2)):
            assert p(u) @ p(v) == p(v) @ p(u)


def test_diagonal_of_d(reference_chain):
    d = monodromy(reference_chain).d
    expected = diagonal_of_d(reference_chain)
    for k in range(d.degree + 1):
        assert d.coefficient(k).diagonal_entries() == expected.coefficient(k).diagonal_entries()


def test_permuted_monodromy_is_relabelled():
    from yangtwist.exact import permute_tensor_factors

    spec = ChainSpec.build([1, 2, 1], [0, 3, "1/2"], 1)
    for perm in all_permutations(3):
        direct = monodromy(spec, perm).d
        moved = monodromy(spec.permuted(perm)).d.map(lambda c: permute_tensor_factors(c, perm), spec.shape)
        assert direct == moved


def test_genericity_guard_names_factor():
    spec = ChainSpec.build([1, 1], [0, 1], 1)
    assert not spec.is_generic()
    with pytest.raises(NonGenericSpecError, match=r"delta\[0\] - delta\[1\]"):
        spec.require_generic()
    assert ChainSpec.build([1, 1], [0, "1/2"], 1).is_generic()
    # spins (1/2, 1): differences of lattice points are half-integers up to 3/2
    assert not ChainSpec.build([1, 2], [0, "3/2"], 1).is_generic()
    assert ChainSpec.build([1, 2], [0, 2], 1).is_generic()


def test_spec_json_roundtrip_and_errors():
    spec = ChainSpec.build([1, 2], ["1/3", -4], "2/5")
    again = ChainSpec.from_dict(spec.to_dict())
    assert again == spec
    with pytest.raises(SpecError, match="line 1"):
        ChainSpec.from_json('{"sites": [')
    with pytest.raises(SpecError, match=r"sites\[1\]\.two_l"):
        ChainSpec.from_json('{"sites": [{"two_l": 1, "delta": "0"}, {"two_l": -1}]}')
    with pytest.raises(SpecError, match="delta"):
        ChainSpec.from_json('{"sites": [{"two_l": 1, "delta": "zero"}]}')
    with pytest.raises(SpecError, match="eta"):
        ChainSpec.build([1], [0], 0)


def test_permuted_chain_site_order():
    spec = ChainSpec.build([1, 2, 3], [0, 5, 11], 1)
    from yangtwist.permutation import SitePermutation

    p = SitePermutation((2, 0, 1))
    assert spec.permuted(p).sites == (spec.sites[2], spec.sites[0], spec.sites[1])
    assert spec.with_site(SiteSpec(1, 7), 0).sites[0] == SiteSpec(1, 7)
