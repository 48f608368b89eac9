import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steencalc.fplin import FpMatrix
from steencalc.mackey import (
    MackeyMap,
    box,
    box_map,
    check_axioms,
    direct_sum,
    hom_basis,
    is_isomorphic,
    jordan_block,
    norm_matrix,
    standard,
)


def names(p):
    base = ["constant", "coconstant", "Q", "Phi", "zero"]
    return base + [f"{k}({i})" for k in ("L", "underlineL", "tildeL") for i in range(1, p + 1)]


@pytest.mark.parametrize("p", [3, 5])
def test_all_standard_functors_satisfy_axioms(p):
    for name in names(p):
        assert check_axioms(standard(p, name)), name


def test_dims_of_standard_functors():
    assert standard(3, "constant").dims == (1, 1)
    assert standard(3, "Q").dims == (1, 0)
    assert standard(3, "Phi").dims == (0, 1)
    assert standard(3, "L(2)").dims == (2, 0)
    assert standard(3, "underlineL(3)").dims == (3, 1)
    # a full Jordan block has nonzero norm, so L(p) needs a fixed level
    assert not norm_matrix(jordan_block(3, 3)).is_zero()
    assert standard(3, "L(3)").dims == (3, 1)


def test_bad_names():
    with pytest.raises(ValueError):
        standard(3, "L(4)")
    with pytest.raises(ValueError):
        standard(3, "mystery")


@pytest.mark.parametrize("p", [3, 5])
def test_constant_is_the_unit(p):
    c = standard(p, "constant")
    for name in ("Q", "coconstant", "underlineL(2)", "Phi"):
        m = standard(p, name)
        assert is_isomorphic(box(c, m), m), name


@pytest.mark.parametrize("p", [3, 5])
def test_q_box_q_is_coconstant(p):
    out = box(standard(p, "Q"), standard(p, "Q"))
    assert out.dims == (1, 1)
    assert is_isomorphic(out, standard(p, "coconstant"))
    assert not is_isomorphic(out, standard(p, "constant"))


def test_projective_box_q():
    out = box(standard(3, "underlineL(3)"), standard(3, "Q"))
    assert out.dims == (3, 1)
    assert is_isomorphic(out, standard(3, "underlineL(3)"))
    assert is_isomorphic(out, standard(3, "tildeL(3)"))


def test_phi_kills_free_functors():
    assert box(standard(3, "Phi"), standard(3, "Q")).dims == (0, 0)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(names(3)), st.sampled_from(names(3)))
def test_box_commutes_and_satisfies_axioms(a, b):
    m, n = standard(3, a), standard(3, b)
    mn, nm = box(m, n), box(n, m)
    assert check_axioms(mn)
    assert mn.dims == nm.dims
    assert is_isomorphic(mn, nm)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(names(3)), st.sampled_from(names(3)))
def test_box_map_of_identities_is_identity(a, b):
    m, n = standard(3, a), standard(3, b)
    f = box_map(MackeyMap.identity(m), MackeyMap.identity(n))
    assert f.is_valid()
    assert f.free == FpMatrix.identity(3, f.source.free_dim)
    assert f.fixed == FpMatrix.identity(3, f.source.fixed_dim)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(names(3)), st.sampled_from(names(3)))
def test_hom_basis_is_valid(a, b):
    for h in hom_basis(standard(3, a), standard(3, b)):
        assert h.is_valid()


def test_direct_sum_dims():
    s = direct_sum(standard(3, "Q"), standard(3, "constant"))
    assert s.dims == (2, 1)
    assert check_axioms(s)
