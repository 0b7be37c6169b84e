import numpy as np
import pytest
from hypothesis import given, strategies as st

from qpp.permutation import (
    DuplicateValueError,
    OutOfRangeError,
    WordSizeError,
    WrongLengthError,
    apply,
    commutes_with,
    compose,
    from_dense_matrix,
    from_mapping,
    from_xor_key,
    identity,
    invert,
    is_involution,
    to_dense_matrix,
)

from oracles import compose_lists, invert_list

WORKED = [1, 4, 2, 5, 3, 0, 7, 6]
WORKED_INVERSE = [5, 0, 2, 4, 1, 3, 7, 6]

# Reference rows for the XOR-by-3 and worked-example matrices (row i, column map[i]).
XOR3_ROWS = [
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
]
WORKED_ROWS = [
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
]
WORKED_INVERSE_ROWS = [
    [0, 0, 0, 0, 0, 1, 0, 0],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 0, 0, 1, 0],
]


@st.composite
def tables(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(2**n)))
    return from_mapping(n, perm)


@st.composite
def table_pairs(draw, min_n=1, max_n=5):
    n = draw(st.integers(min_n, max_n))
    p = draw(st.permutations(range(2**n)))
    q = draw(st.permutations(range(2**n)))
    return from_mapping(n, p), from_mapping(n, q)


def test_identity():
    assert identity(3).tolist() == list(range(8))
    assert apply(identity(8), 42) == 42


@pytest.mark.parametrize("n", [0, 17, -1])
def test_identity_rejects_word_size(n):
    with pytest.raises(WordSizeError):
        identity(n)


def test_from_mapping_worked_example():
    P = from_mapping(3, WORKED)
    assert P.tolist() == WORKED
    assert apply(P, 3) == 5


def test_from_mapping_errors_are_distinct():
    with pytest.raises(DuplicateValueError, match="duplicate value 2"):
        from_mapping(2, [0, 1, 2, 2])
    with pytest.raises(WrongLengthError):
        from_mapping(2, [0, 1, 2])
    with pytest.raises(OutOfRangeError):
        from_mapping(2, [0, 1, 2, 4])
    with pytest.raises(OutOfRangeError):
        from_mapping(2, [0, 1, 2, -1])


def test_from_xor_key():
    assert from_xor_key(3, 3).tolist() == [3, 2, 1, 0, 7, 6, 5, 4]
    assert apply(from_xor_key(3, 3), 2) == 1
    assert from_xor_key(3, 0) == identity(3)
    with pytest.raises(OutOfRangeError):
        from_xor_key(3, 8)


def test_apply_range_check():
    with pytest.raises(OutOfRangeError):
        apply(identity(3), 8)
    assert apply(identity(3), 6) == 6


def test_invert_worked_example():
    inv = invert(from_mapping(3, WORKED))
    assert inv.tolist() == WORKED_INVERSE == invert_list(WORKED)
    assert apply(inv, 5) == 3
    assert invert(identity(4)) == identity(4)


@pytest.mark.parametrize("n", [1, 3, 8])
def test_xor_tables_are_self_inverse(n):
    for k in range(0, 2**n, max(1, 2**n // 16)):
        X = from_xor_key(n, k)
        assert invert(X) == X
        assert is_involution(X)


def test_compose_xor():
    # Oracle: (i ^ 2) ^ 1 == i ^ 3 for all 8 inputs.
    expected = compose_lists([i ^ 1 for i in range(8)], [i ^ 2 for i in range(8)])
    assert compose(from_xor_key(3, 1), from_xor_key(3, 2)).tolist() == expected
    assert compose(from_xor_key(3, 1), from_xor_key(3, 2)) == from_xor_key(3, 3)


def test_compose_order_is_inner_first():
    outer = from_mapping(2, [1, 0, 2, 3])
    inner = from_mapping(2, [0, 2, 1, 3])
    assert compose(outer, inner).tolist() == compose_lists([1, 0, 2, 3], [0, 2, 1, 3])
    assert compose(outer, inner).tolist() == [1, 2, 0, 3]


def test_compose_size_mismatch():
    with pytest.raises(WordSizeError):
        compose(identity(2), identity(3))
    with pytest.raises(WordSizeError):
        commutes_with(identity(2), identity(3))


def test_commutes_with():
    assert commutes_with(from_xor_key(3, 5), from_xor_key(3, 6))
    assert not commutes_with(from_mapping(2, [1, 0, 2, 3]), from_mapping(2, [0, 2, 1, 3]))
    assert commutes_with(from_mapping(3, WORKED), identity(3))


def test_is_involution():
    assert is_involution(identity(5))
    assert not is_involution(from_mapping(3, WORKED))


def test_dense_matrices_match_reference_rows():
    assert to_dense_matrix(from_xor_key(3, 3)).rows() == XOR3_ROWS
    assert to_dense_matrix(from_mapping(3, WORKED)).rows() == WORKED_ROWS
    assert to_dense_matrix(from_mapping(3, WORKED_INVERSE)).rows() == WORKED_INVERSE_ROWS
    assert to_dense_matrix(identity(2)).rows() == np.eye(4, dtype=int).tolist()


def test_dense_matrix_size_guard():
    to_dense_matrix(identity(10))
    with pytest.raises(WordSizeError):
        to_dense_matrix(identity(11))


def test_tables_are_read_only():
    P = from_mapping(3, WORKED)
    with pytest.raises(ValueError):
        P.map[0] = 7


@given(tables())
def test_bijection_invariant(P):
    assert sorted(P.tolist()) == list(range(P.size))


@given(tables(), st.data())
def test_round_trip(P, data):
    m = data.draw(st.integers(0, P.size - 1))
    assert apply(invert(P), apply(P, m)) == m
    assert compose(P, invert(P)) == identity(P.n)
    assert compose(identity(P.n), P) == P


@given(tables(max_n=5))
def test_transpose_law(P):
    D = to_dense_matrix(P).bits
    assert np.array_equal(to_dense_matrix(invert(P)).bits, D.T)
    # Orthogonal over the integers: D D^T = I.
    assert np.array_equal(D.astype(int) @ D.T.astype(int), np.eye(P.size, dtype=int))
    assert from_dense_matrix(to_dense_matrix(P)) == P


@given(table_pairs(max_n=4))
def test_composition_matches_matrix_product(pair):
    outer, inner = pair
    Do = to_dense_matrix(outer).bits.astype(int)
    Di = to_dense_matrix(inner).bits.astype(int)
    # Row i of a matrix holds the image of i, so products read left to right:
    # D(inner) @ D(outer) sends i to outer(inner(i)).
    assert np.array_equal(to_dense_matrix(compose(outer, inner)).bits, Di @ Do)


@given(tables())
def test_commutes_with_matches_definition(P):
    Q = invert(P)
    assert commutes_with(P, Q)
    assert commutes_with(P, P)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_xor_subgroup(n):
    members = [from_xor_key(n, k) for k in range(2**n)]
    assert len(set(members)) == 2**n
    for a, X in enumerate(members):
        assert is_involution(X)
        for b, Y in enumerate(members):
            assert compose(X, Y) == members[a ^ b]
            assert commutes_with(X, Y)


def test_non_commuting_pair_exists_for_n2():
    from itertools import permutations

    perms = [from_mapping(2, p) for p in permutations(range(4))]
    commuting = sum(commutes_with(p, q) for p in perms for q in perms)
    assert commuting == 120  # oracle: commuting_ordered_pairs(4)
    assert commuting < len(perms) ** 2
