from fractions import Fraction

import numpy as np
import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from yangtwist.exact import (
    OperatorPolynomial,
    ScalarPolynomial,
    TensorOperator,
    TensorShape,
    embed_operator,
    format_scalar,
    permute_tensor_factors,
    poly_eval,
    poly_left_substitute,
    scalar,
    tensor_embed,
)
from yangtwist.permutation import SitePermutation

rationals = st.builds(Fraction, st.integers(-99, 99), st.integers(1, 50))


def small_matrix(n):
    return st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)


def test_scalar_parsing():
    assert scalar("3/4") == mpq(3, 4)
    assert scalar(Fraction(-2, 6)) == mpq(-1, 3)
    assert scalar(7) == 7
    assert format_scalar(mpq(6, 4)) == "3/2"
    with pytest.raises(TypeError):
        scalar(0.5)
    with pytest.raises(ValueError):
        scalar("one half")


@given(rationals.filter(lambda f: f != 0))
def test_reciprocal_is_exact(f):
    a = scalar(f)
    assert a * (1 / a) == 1


def test_embed_single_site():
    op = tensor_embed([[5]], 0, TensorShape((1,)))
    assert op.mat[0, 0] == 5


def test_embed_left_and_right_sites():
    sz = [["1/2", 0], [0, "-1/2"]]
    shape = TensorShape((2, 2))
    h = mpq(1, 2)
    assert tensor_embed(sz, 0, shape).diagonal_entries() == [h, h, -h, -h]
    assert tensor_embed(sz, 1, shape).diagonal_entries() == [h, -h, h, -h]


@settings(max_examples=25, deadline=None)
@given(small_matrix(2), small_matrix(3))
def test_embedded_operators_at_distinct_sites_commute(a, b):
    shape = TensorShape((2, 3, 2))
    x = tensor_embed(a, 0, shape)
    y = tensor_embed(b, 1, shape)
    assert x @ y == y @ x


def test_permute_identity_and_swap():
    a = np.array([[1, 2], [3, 4]])
    b = np.array([[0, 5], [-1, 7]])
    shape = TensorShape((2, 2))
    ab = TensorOperator(shape, np.kron(a, b))
    assert permute_tensor_factors(ab, SitePermutation.identity(2)) == ab
    swap = TensorOperator(shape, [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    swapped = permute_tensor_factors(ab, SitePermutation((1, 0)))
    assert swapped == swap @ ab @ swap
    assert swapped == TensorOperator(shape, np.kron(b, a))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=64, max_size=64), st.permutations(range(3)), st.permutations(range(3)))
def test_permute_is_a_group_action(entries, p1, p2):
    shape = TensorShape((2, 2, 2))
    op = TensorOperator(shape, np.array(entries).reshape(8, 8))
    s1, s2 = SitePermutation(tuple(p1)), SitePermutation(tuple(p2))
    twice = permute_tensor_factors(permute_tensor_factors(op, s2), s1)
    assert twice == permute_tensor_factors(op, s1 * s2)
    word = (s1 * s2).reduced_word()
    stepwise = op
    for i in reversed(word):
        stepwise = permute_tensor_factors(stepwise, SitePermutation.transposition(3, i))
    assert stepwise == permute_tensor_factors(op, s1 * s2)


def test_embed_operator_on_nonadjacent_sites():
    shape = TensorShape((2, 3, 2))
    a = [[1, 2], [3, 4]]
    b = [[0, 1], [1, 0]]
    pair = TensorOperator(TensorShape((2, 2)), np.kron(np.array(a), np.array(b)))
    expected = tensor_embed(a, 0, shape) @ tensor_embed(b, 2, shape)
    assert embed_operator(pair, [0, 2], shape) == expected


def test_poly_eval_examples():
    shape = TensorShape((2,))
    eye = TensorOperator.identity(shape)
    zero = TensorOperator.zeros(shape)
    assert poly_eval(OperatorPolynomial.zero(shape), 5) == zero
    assert poly_eval(OperatorPolynomial.linear(-eye, eye), 1) == zero
    eta = mpq(2, 3)
    p = OperatorPolynomial.from_scalar(ScalarPolynomial([-eta * eta, 0, 1]), shape)
    assert poly_eval(p, eta) == zero


@settings(max_examples=30, deadline=None)
@given(st.lists(rationals, min_size=1, max_size=4), st.lists(rationals, min_size=1, max_size=4), rationals)
def test_evaluation_is_a_ring_homomorphism(c1, c2, u):
    p, q = ScalarPolynomial(c1), ScalarPolynomial(c2)
    u = scalar(u)
    assert (p * q)(u) == p(u) * q(u)
    assert (p + q)(u) == p(u) + q(u)
    shape = TensorShape((2,))
    po, qo = OperatorPolynomial.from_scalar(p, shape), OperatorPolynomial.from_scalar(q, shape)
    assert poly_eval(po @ qo, u) == poly_eval(po, u) @ poly_eval(qo, u)


def test_left_substitution_order():
    shape = TensorShape((2,))
    m = TensorOperator(shape, [[0, 1], [0, 0]])
    x = TensorOperator.diagonal(shape, [2, 5])
    const = OperatorPolynomial.constant(m)
    assert poly_left_substitute(const, x) == m
    p = OperatorPolynomial(shape, [TensorOperator.zeros(shape), m])
    assert poly_left_substitute(p, x) == x @ m
    assert poly_left_substitute(p, x) != m @ x


def test_scalar_polynomial_division_and_shift():
    p = ScalarPolynomial.from_roots([1, 2, 3])
    q, r = p.divmod(ScalarPolynomial.from_roots([2]))
    assert r == ScalarPolynomial([])
    assert q == ScalarPolynomial.from_roots([1, 3])
    assert p.shifted(1)(1) == p(2)


def test_inverse_and_json_roundtrip():
    shape = TensorShape((3,))
    op = TensorOperator(shape, [[2, 0, 0], ["1/3", 1, 0], [0, 4, -1]])
    assert op @ op.inverse() == TensorOperator.identity(shape)
    doc = op.to_json()
    assert doc["rows"] == doc["cols"] == 3 and doc["shape"] == [3]
    assert doc["entries"][1][0] == "1/3"
    assert TensorOperator.from_json(doc) == op


def test_first_difference_locates_entry():
    shape = TensorShape((2,))
    a = TensorOperator(shape, [[1, 2], [3, 4]])
    b = TensorOperator(shape, [[1, 2], [3, 5]])
    assert a.first_difference(b)[:2] == (1, 1)
    assert a.first_difference(a) is None


def test_operators_are_read_only():
    op = TensorOperator.identity(TensorShape((2,)))
    with pytest.raises(ValueError):
        op.mat[0, 0] = 3
