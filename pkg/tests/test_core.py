import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricbouquet import core
from toricbouquet.core import (IntMatrix, SizeLimitExceeded, enumerate_bounded_kernel,
                               enumerate_nonnegative_solutions, is_unimodular, kernel_lattice_basis)

FOUR_BOUQUETS = [
    [1, 1, 1, 0, 0, 0, 0],
    [1, 0, 0, 1, 1, 0, 0],
    [0, 1, 0, 1, 0, 1, 0],
    [0, 0, 1, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 3],
]


def brute_kernel(A, bound):
    """Plain product-space scan; no pruning, no linear algebra."""
    n = len(A[0])
    out = set()
    for u in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(u) and all(sum(a * x for a, x in zip(row, u)) == 0 for row in A):
            if next(x for x in u if x) > 0:
                out.add(u)
    return out


def in_lattice(basis, u):
    """Whether u is an integer combination of the basis vectors."""
    if not basis:
        return not any(u)
    cols = list(zip(*basis))  # n x k
    sol = core.rational_solve([list(r) for r in cols], list(u))
    return sol is not None and all(x.denominator == 1 for x in sol)


matrices = st.integers(1, 3).flatmap(
    lambda m: st.integers(2, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=m, max_size=m)))


def test_matrix_basics():
    A = IntMatrix.from_rows([[1, 2, 3], [4, 5, 6]])
    assert A.shape == (2, 3)
    assert A.column(1) == (2, 5)
    assert A.transpose().tolist() == [[1, 4], [2, 5], [3, 6]]
    assert A.apply((1, 1, 1)) == (6, 15)
    assert IntMatrix.identity(2).tolist() == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        IntMatrix.from_rows([[1, 2], [3]])


def test_signed_vector_parts():
    u = (3, -1, 0, -2)
    assert core.positive_part(u) == (3, 0, 0, 0)
    assert core.negative_part(u) == (0, 1, 0, 2)
    assert core.support(u) == frozenset({0, 1, 3})
    assert core.canonical((0, -2, 1)) == (0, 2, -1)
    assert core.primitive((4, -6, 2)) == (2, -3, 1)


def test_conformal_relations():
    assert core.conformally_below((1, -1, 0), (2, -3, 1))
    assert not core.conformally_below((1, 1, 0), (2, -3, 1))
    # (4,-3,0) = (3,-1,-1) + (1,-2,1) is semiconformal but not conformal
    assert core.is_semiconformal((3, -1, -1), (1, -2, 1))
    assert not core.is_conformal((3, -1, -1), (1, -2, 1))


def test_kernel_of_four_bouquet_example_spans_the_known_lattice():
    L = kernel_lattice_basis(FOUR_BOUQUETS)
    assert L.rank_of_A == 5 and len(L.basis_vectors) == 2
    known = [(1, -1, 0, 0, -1, 1, 0), (1, 0, -1, -1, 0, 1, 0)]
    for u in known:
        assert in_lattice(L.basis_vectors, u)
    for g in L.basis_vectors:
        assert in_lattice(known, g)


def test_kernel_trivial_and_deterministic():
    L = kernel_lattice_basis(IntMatrix.identity(3))
    assert L.basis_vectors == () and L.rank_of_A == 3
    assert kernel_lattice_basis([[3, 4, 5]]) == kernel_lattice_basis([[3, 4, 5]])


def test_kernel_of_all_ones_row_matches_enumeration():
    L = kernel_lattice_basis([[1, 1, 1]])
    assert len(L.basis_vectors) == 2
    for u in enumerate_bounded_kernel([[1, 1, 1]], 3):
        assert in_lattice(L.basis_vectors, u)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_kernel_basis_is_saturated(A):
    L = kernel_lattice_basis(A)
    for g in L.basis_vectors:
        assert not any(IntMatrix.from_rows(A).apply(g))
    for u in brute_kernel(A, 2):
        assert in_lattice(L.basis_vectors, u)


def test_gale_rows_are_basis_rows():
    L = kernel_lattice_basis(FOUR_BOUQUETS)
    G = L.gale_rows()
    assert len(G) == 7 and G[6] == (0, 0)
    assert G[0] == G[5] and G[1] == G[4] and G[2] == G[3]


@pytest.mark.parametrize("A,expected", [
    (IntMatrix.identity(2), True),
    ([[1, 0, 1], [0, 1, 1]], True),
    ([[1, 2]], False),
])
def test_is_unimodular_examples(A, expected):
    assert is_unimodular(A) is expected


def test_is_unimodular_derived_by_minors():
    A = [[1, 0, 1], [0, 1, 1]]
    minors = {abs(core.determinant([[A[0][i], A[0][j]], [A[1][i], A[1][j]]]))
              for i, j in itertools.combinations(range(3), 2)}
    assert minors - {0} == {1}


def test_is_unimodular_size_guard():
    with pytest.raises(SizeLimitExceeded, match="too large"):
        is_unimodular([[1] * 30 + [2]] * 1 + [[k % 3 for k in range(31)]], cap=10)


@settings(max_examples=40, deadline=None)
@given(matrices, st.randoms(use_true_random=False))
def test_unimodular_invariant_under_permutation_and_negation(A, rnd):
    n = len(A[0])
    perm = list(range(n))
    rnd.shuffle(perm)
    signs = [rnd.choice((1, -1)) for _ in range(n)]
    B = [[signs[j] * row[perm[j]] for j in range(n)] for row in A]
    assert is_unimodular(A) == is_unimodular(B)


def test_unimodular_parallel_matches_serial():
    A = [[1, 0, 2, 1, 3, 1, 0, 1, 2, 1, 1, 1, 0, 2, 1, 1, 3, 2, 1, 0, 1, 1],
         [0, 1, 1, 2, 1, 0, 1, 1, 1, 3, 2, 0, 1, 1, 1, 2, 1, 0, 1, 1, 3, 2],
         [1, 1, 0, 1, 1, 1, 2, 0, 1, 1, 1, 2, 1, 0, 2, 1, 1, 1, 0, 1, 1, 1]]
    assert is_unimodular(A, threads=2) == is_unimodular(A, threads=1)


@pytest.mark.parametrize("A,bound,expected", [
    ([[1, 1]], 1, {(1, -1)}),
    ([[3, 4, 5]], 2, {(1, -2, 1), (2, 1, -2)}),
    (IntMatrix.identity(3), 4, set()),
])
def test_enumerate_bounded_kernel_examples(A, bound, expected):
    assert enumerate_bounded_kernel(A, bound) == expected


def test_enumerate_bounded_kernel_against_scan_of_125_points():
    assert enumerate_bounded_kernel([[3, 4, 5]], 2) == brute_kernel([[3, 4, 5]], 2)


@settings(max_examples=80, deadline=None)
@given(matrices, st.integers(0, 2))
def test_enumerate_bounded_kernel_matches_scan(A, bound):
    found = enumerate_bounded_kernel(A, bound)
    assert found == brute_kernel(A, bound)
    for u in found:
        assert not any(IntMatrix.from_rows(A).apply(u))


def test_enumerate_bounded_kernel_guard_and_bad_bound():
    with pytest.raises(SizeLimitExceeded):
        enumerate_bounded_kernel([[1, 1, 1, 1, 1, 1]], 50, cap=1000)
    with pytest.raises(ValueError):
        enumerate_bounded_kernel([[1, 1]], -1)


def test_nonnegative_solutions_examples():
    assert enumerate_nonnegative_solutions([[3, 4, 5]], [12]) == ([(0, 3, 0), (1, 1, 1), (4, 0, 0)], True)
    assert enumerate_nonnegative_solutions(IntMatrix.identity(2), [1, 1]) == ([(1, 1)], True)
    sols, complete = enumerate_nonnegative_solutions([[1, -1]], [0], cap=[3, 3])
    assert sols == [(0, 0), (1, 1), (2, 2), (3, 3)] and complete is False


def test_nonnegative_solutions_scan_for_degree_twelve():
    scan = sorted(x for x in itertools.product(range(5), repeat=3) if 3 * x[0] + 4 * x[1] + 5 * x[2] == 12)
    assert enumerate_nonnegative_solutions([[3, 4, 5]], [12])[0] == scan


@settings(max_examples=80, deadline=None)
@given(matrices, st.data())
def test_nonnegative_solutions_match_scan_in_box(A, data):
    b = data.draw(st.lists(st.integers(-4, 4), min_size=len(A), max_size=len(A)))
    n = len(A[0])
    scan = sorted(x for x in itertools.product(range(4), repeat=n)
                  if all(sum(a * v for a, v in zip(row, x)) == h for row, h in zip(A, b)))
    sols, complete = enumerate_nonnegative_solutions(A, b, cap=3)
    assert sols == scan
    if complete:
        # a finite fiber: nothing beyond the box either
        wider = enumerate_nonnegative_solutions(A, b, cap=6)[0]
        assert wider == scan


def test_positive_functional_and_pointedness():
    y = core.positive_functional(IntMatrix.from_rows([[3, 4, 5]]))
    assert y is not None and all(isinstance(v, Fraction) for v in y)
    assert core.is_pointed([[1, 2]]) and not core.is_pointed([[1, -1]])


def test_rank_and_independent_rows():
    A = [[1, 2], [2, 4], [0, 1]]
    assert core.rank(A) == 2 and core.independent_rows(A) == [0, 2]
    assert core.determinant([[2, 1], [1, 1]]) == 1
