import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steencalc.fplin import (
    FpMatrix,
    NoSolution,
    annihilator,
    block_diag,
    check_odd_prime,
    complement_section,
    hstack,
    image_basis,
    is_prime,
    kernel_basis,
    kron,
    rank,
    rref,
    solve,
    vstack,
)

PRIMES = st.sampled_from([3, 5, 7])


@st.composite
def matrices(draw, max_dim=6):
    p = draw(PRIMES)
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return FpMatrix(p, np.array(entries).reshape(r, c))


def test_primes():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert check_odd_prime(5) == 5
    for bad in (2, 4, 9, 1):
        with pytest.raises(ValueError):
            check_odd_prime(bad)


def test_entries_reduced_mod_p():
    m = FpMatrix.from_rows(3, [[4, -1], [3, 5]])
    assert m.tolist() == [[1, 2], [0, 2]]


def test_rank_examples():
    assert rank(FpMatrix.from_rows(3, [[1, 1], [2, 2]])) == 1
    # singular mod 3 but not over Q
    assert rank(FpMatrix.from_rows(3, [[1, 2], [2, 1]])) == 1
    assert rank(FpMatrix.from_rows(5, [[1, 2], [2, 1]])) == 2


def test_solve_and_no_solution():
    m = FpMatrix.from_rows(5, [[1, 2], [0, 1]])
    t = FpMatrix.from_rows(5, [[3], [4]])
    assert m @ solve(m, t) == t
    with pytest.raises(NoSolution):
        solve(FpMatrix.from_rows(3, [[1], [1]]), FpMatrix.from_rows(3, [[1], [0]]))


def test_stacking_shapes():
    a = FpMatrix.identity(3, 2)
    b = FpMatrix.zeros(3, 2, 1)
    assert hstack([a, b]).shape == (2, 3)
    assert vstack([a, b.T]).shape == (3, 2)
    assert block_diag([a, b], 3).shape == (4, 3)
    assert kron(a, FpMatrix.identity(3, 3)).shape == (6, 6)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    k = kernel_basis(m)
    assert (m @ k).is_zero()
    assert rank(m) + k.cols == m.cols
    assert rank(k) == k.cols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rref_idempotent_and_image(m):
    red, pivots = rref(m)
    again, pivots2 = rref(red)
    assert again == red and pivots == pivots2
    img = image_basis(m)
    assert img.cols == rank(m)
    assert rank(hstack([img, m], m.p, m.rows)) == rank(m)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_recovers_consistent_targets(m, data):
    x = FpMatrix(m.p, np.array(data.draw(st.lists(st.integers(0, m.p - 1), min_size=m.cols, max_size=m.cols))).reshape(-1, 1))
    t = m @ x
    assert m @ solve(m, t) == t


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_annihilator_kernel_is_span(m):
    ann = annihilator(m)
    assert (ann @ m).is_zero()
    assert ann.rows == m.rows - rank(m)
    if ann.rows:
        s = complement_section(ann)
        assert ann @ s == FpMatrix.identity(m.p, ann.rows)
