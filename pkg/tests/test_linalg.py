from fractions import Fraction

from hypothesis import given, strategies as st

from fpcone import linalg
import oracle

small = st.integers(-3, 3).map(Fraction)


def matrices(max_rows=5, max_cols=5):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0]))


@given(matrices())
def test_rank_matches_oracle(a):
    assert linalg.rank(a, len(a[0])) == oracle.rank(a, len(a[0]))


@given(matrices())
def test_nullspace_is_kernel_of_right_size(a):
    n = len(a[0])
    ns = linalg.nullspace(a, n)
    assert len(ns) == n - oracle.rank(a, n)
    for v in ns:
        assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in a)
    if ns:
        assert oracle.rank(ns, n) == len(ns)


@given(matrices())
def test_rref_pivots_match_oracle(a):
    red, piv = linalg.rref(a, len(a[0]))
    ored, opiv = oracle.rref(a, len(a[0]))
    assert list(piv) == opiv
    assert red[:len(piv)] == ored


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse(a):
    n = len(a)
    if oracle.rank(a, n) < n:
        return
    inv = linalg.inverse(a)
    ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    assert linalg.matmul(a, inv) == ident


def test_degenerate_shapes():
    assert linalg.rank([], 3) == 0
    assert linalg.nullspace([], 2) == [[1, 0], [0, 1]]
    assert linalg.nullspace([[1, 2]], 0) == []
    assert linalg.pivot_columns([], 3) == ()


def test_pivot_columns_greedy():
    cols = [[1, 0], [2, 0], [0, 1], [1, 1]]
    assert linalg.pivot_columns([[Fraction(x) for x in c] for c in cols], 2) == (0, 2)
