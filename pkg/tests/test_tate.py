import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steencalc.grading import RDegree
from steencalc.tate import (
    NotDivisible,
    PrecisionError,
    TateElement,
    b_division_checks,
    check_precision,
    divide_by_b,
    element,
    element_degree,
    eta_r,
    generator_bound,
    mu_numerator,
    parse,
    rho2,
    rho_inverse,
    serialize,
    ubar,
    verify_relations,
)

P, B = 3, 6


@st.composite
def monomials(draw, p=P, prec=B):
    tau = tuple(sorted(draw(st.sets(st.integers(0, 2), max_size=2))))
    return TateElement.monomial(
        p,
        prec,
        a=draw(st.integers(-2, 2)),
        m=draw(st.integers(0, prec - 1)),
        eps=draw(st.integers(0, 1)),
        xi={1: draw(st.integers(0, 3)), 2: draw(st.integers(0, 1))},
        tau=tau,
        coeff=draw(st.integers(1, p - 1)),
    )


@st.composite
def elements(draw):
    out = TateElement.zero(P, B)
    for m in draw(st.lists(monomials(), max_size=3)):
        out = out + m
    return out


def test_documented_expansions():
    assert serialize(eta_r("sigma2", 3, 3, 2)) == "1 * s^2 + 1 * s^6 b^2 xi(1)"
    assert serialize(eta_r("u", 3, 2, 2)) == "1 * u + 1 * s^2 b^1 tau(0)"
    assert serialize(rho_inverse(3, 3)) == "1 * s^-2 + 2 * s^2 b^2 xi(1)"
    assert serialize(element("xi_u(1)", 3, 2)) == "1 * s^2 xi(1)"
    assert eta_r("b", 3, 4, 2) == TateElement.monomial(3, 4, m=1)


def test_trivial_products():
    u = TateElement.monomial(P, B, eps=1)
    assert (u * u).is_zero()
    s2 = TateElement.monomial(P, B, a=1)
    assert s2 * TateElement.monomial(P, B, a=-1) == TateElement.one(P, B)
    assert rho2(3, 8) * rho_inverse(3, 8) == TateElement.one(3, 8)


def test_divide_by_b():
    x = TateElement.monomial(3, 4, a=1, m=1, xi={1: 1})
    assert divide_by_b(x) == TateElement.monomial(3, 3, a=1, xi={1: 1})
    with pytest.raises(NotDivisible):
        divide_by_b(TateElement.monomial(3, 4, a=-1))


def test_precision_bound():
    check_precision(3, 12, 2)
    with pytest.raises(PrecisionError):
        check_precision(3, 12, 1)
    with pytest.raises(PrecisionError):
        check_precision(3, 0, 2)
    assert generator_bound(3, 12) == 2
    assert generator_bound(5, 6) == 1


@pytest.mark.parametrize(
    "name,deg",
    [
        ("xi_u(1)", RDegree(2, 1)),
        ("xi_hat(1)", RDegree(1, 1)),
        ("tau_u(1)", RDegree(3, 1)),
        ("tau_hat(1)", RDegree(2, 1)),
        ("theta_u(1)", RDegree(4, 4)),
        ("mu_u(1)", RDegree(5, 4)),
        ("tau0", RDegree(1, 0)),
        ("xi_u(2)", RDegree(6, 5)),
    ],
)
def test_element_degrees(name, deg):
    assert element_degree(name, 3) == deg
    x = element(name, 3, 6, 2)
    assert x.is_homogeneous()
    if not x.is_zero():
        assert x.degree() == deg


@pytest.mark.parametrize("p,prec,n_max", [(3, 12, 2), (5, 6, 1)])
def test_relations_hold(p, prec, n_max):
    res = verify_relations(p, prec, n_max)
    assert res and all(r.ok for r in res), [r for r in res if not r.ok]


def test_mutated_relation_fails():
    res = verify_relations(3, 12, 2, mutate="xi_hat_rho")
    bad = [r for r in res if not r.ok]
    assert bad and all(r.rid == "xi_hat_rho" and r.residual_terms > 0 for r in bad)


def test_mu_numerator_divides_with_one_sign_only():
    divide_by_b(mu_numerator(3, 13, 1))
    with pytest.raises(NotDivisible):
        divide_by_b(mu_numerator(3, 13, 1, sign=-1))


def test_b_division_spot_checks():
    assert all(v is not None for v in b_division_checks(3, 10).values())


@settings(max_examples=40, deadline=None)
@given(elements())
def test_serialize_roundtrip(x):
    assert parse(serialize(x), P, B) == x


@settings(max_examples=40, deadline=None)
@given(elements(), elements(), elements())
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x
    assert (x - x).is_zero()


@settings(max_examples=40, deadline=None)
@given(monomials(), monomials())
def test_graded_commutativity(x, y):
    kx, ky = x.degree().k, y.degree().k
    sign = -1 if (kx % 2 and ky % 2) else 1
    assert x * y == (y * x).scale(sign)


@settings(max_examples=30, deadline=None)
@given(monomials(), monomials())
def test_products_are_homogeneous_and_stay_in_borel_part(x, y):
    prod = x * y
    assert prod.is_homogeneous()
    assert prod.is_zero() or prod.min_b() >= 0


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 10))
def test_rho_inverse_any_precision(prec):
    assert rho2(3, prec) * rho_inverse(3, prec) == TateElement.one(3, prec)
    assert ubar(3, prec).is_homogeneous()


def test_all_elements_homogeneous_and_borel():
    for name in ("xi_u", "xi_hat", "tau_u", "tau_hat", "theta_u", "mu_u"):
        for n in (1, 2):
            x = element(f"{name}({n})", 3, 12, 2)
            assert x.is_homogeneous(), (name, n)
            assert x.min_b() >= 0
