"""Cartan-Serre style basis of the equivariant dual Steenrod algebra.

A generator is tau_0^e Theta_S times, independently for each index n, one of:
nothing, mu_n (free summand), or a quadruplet type (t, e_n) with
0 <= t <= p-2 contributing xi_n^(t+1) (e_n = 0) or xi_n^t tau_n (e_n = 1).
Generators with at least one quadruplet type start a copy of HM, all
others a copy of HZ/p.

An HM copy is one (y, dy) pair.  For quadruplet indices i_1 < ... < i_k
with pattern E, the canonical y carries tau_hat (if i_1 in E) or xi_hat on
i_1, xi_hat on the other indices of E and xi_u elsewhere, each times
xi_u^t.  It is divisible by b^j with j = #(E minus i_1), and the copy is
based at |dy / b^j| = |y| + 1 + j beta (dividing by b adds beta).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .fplin import check_odd_prime
from .grading import BETA, RDegree, dims
from .tate import element_degree


class QuadType(NamedTuple):
    t: int  # xi_u exponent carried along, 0..p-2
    e: int  # 1 when the tau_u member is used


@dataclass(frozen=True)
class BasisIndex:
    """e: tau_0 exponent; theta: ((n, s_n), ...); mu: (n, ...); quad: ((n, QuadType), ...)."""

    p: int
    e: int = 0
    theta: tuple = ()
    mu: tuple = ()
    quad: tuple = ()

    @property
    def kind(self) -> str:
        return "HM" if self.quad else "free"

    @property
    def R(self):
        """Cartan-Serre exponents r_n of dy = Xi_R T_E."""
        return {n: q.t + 1 - q.e for n, q in self.quad}

    @property
    def E(self):
        return tuple(n for n, q in self.quad if q.e)

    @property
    def max_div(self) -> int:
        if not self.quad:
            return 0
        first = self.quad[0][0]
        return sum(1 for n in self.E if n != first)

    def canonical_y(self):
        """((n, kappa, s), ...) for the hatted partner y of this HM copy."""
        out = []
        for pos, (n, q) in enumerate(self.quad):
            if pos == 0:
                kappa = "tau_hat" if q.e else "xi_hat"
            else:
                kappa = "xi_hat" if q.e else "xi_u"
            out.append((n, kappa, q.t))
        return tuple(out)

    def label(self) -> str:
        parts = []
        if self.e:
            parts.append("tau0")
        parts += [f"theta_u({n})^{s}" if s > 1 else f"theta_u({n})" for n, s in self.theta]
        parts += [f"mu_u({n})" for n in self.mu]
        if self.quad:
            y = []
            for n, kappa, s in self.canonical_y():
                y.append(f"{kappa}({n})")
                if s:
                    y.append(f"xi_u({n})^{s}" if s > 1 else f"xi_u({n})")
            ell = self.max_div
            y_text = " ".join(y) + (f" / b^{ell}" if ell > 1 else (" / b" if ell else ""))
            parts.append(f"HM[d({y_text})]")
        return " ".join(parts) or "1"


def monomial_degree(y, p: int) -> RDegree:
    """Degree of a product of (n, kappa, s) factors kappa_n xi_u(n)^s."""
    total = RDegree(0, 0)
    for n, kappa, s in y:
        total = total + element_degree(f"{kappa}({n})", p) + element_degree(f"xi_u({n})", p).scale(s)
    return total


def admissible(y):
    """(is_admissible, max_div) for y = ((n, kappa, s), ...) over distinct indices."""
    hats = sum(1 for _, kappa, _ in y if kappa in ("xi_hat", "tau_hat"))
    tau_hats = sum(1 for _, kappa, _ in y if kappa == "tau_hat")
    if tau_hats > 1:
        return False, 0
    return True, max(hats - 1, 0)


def degree_of_index(idx: BasisIndex, division: bool = True) -> RDegree:
    """Generator degree of the summand; division=False ignores the b-division (negative control)."""
    p = idx.p
    d = RDegree(idx.e, 0)
    for n, s in idx.theta:
        d = d + element_degree(f"theta_u({n})", p).scale(s)
    for n in idx.mu:
        d = d + element_degree(f"mu_u({n})", p)
    if idx.quad:
        y = idx.canonical_y()
        ok, ell = admissible(y)
        if not ok:
            raise ValueError("canonical partner is not admissible")
        d = d + monomial_degree(y, p) + RDegree(1, 0)
        if division:
            d = d + BETA.scale(ell)
    return d


def quadruplet_degrees(p: int, n: int):
    return {k: element_degree(f"{k}({n})", p) for k in ("xi_hat", "xi_u", "tau_hat", "tau_u")}


# enumeration -------------------------------------------------------------


def _index_options(p, n):
    """Per-index choices (tag, degree); tag is None, 'mu' or a QuadType."""
    opts = [(None, RDegree(0, 0)), ("mu", element_degree(f"mu_u({n})", p))]
    xi = element_degree(f"xi_u({n})", p)
    for t in range(p - 1):
        for e in (0, 1):
            # base contribution |xi^(t+1)| + e; the -1 per non-leading tau index is added later
            opts.append((QuadType(t, e), xi.scale(t + 1) + RDegree(e, 0)))
    return opts


def enumerate_generators(p: int, k_max: int):
    """Every generator whose degree has k <= k_max, in a fixed order.

    Each factor raises k by at least one, so the list is finite.
    """
    check_odd_prime(p)
    indices = []
    n = 1
    while 2 * p ** (n - 1) - 1 <= k_max:
        indices.append(n)
        n += 1
    out = []

    def rec(pos, e0, theta, mu, quad, k_lower):
        if k_lower > k_max:
            return
        if pos == len(indices):
            idx = BasisIndex(p, e0, tuple(theta), tuple(mu), tuple(quad))
            if degree_of_index(idx).k <= k_max:
                out.append(idx)
            return
        n = indices[pos]
        th = element_degree(f"theta_u({n})", p)
        s = 0
        while k_lower + s * th.k <= k_max:
            for tag, deg in _index_options(p, n):
                extra = deg.k
                if isinstance(tag, QuadType) and quad and tag.e:
                    extra -= 1  # beta - 1 from one more b-division
                new_theta = theta + ([(n, s)] if s else [])
                if tag is None:
                    rec(pos + 1, e0, new_theta, mu, quad, k_lower + s * th.k)
                elif tag == "mu":
                    rec(pos + 1, e0, new_theta, mu + [n], quad, k_lower + s * th.k + extra)
                else:
                    rec(pos + 1, e0, new_theta, mu, quad + [(n, tag)], k_lower + s * th.k + extra)
            s += 1

    for e0 in (0, 1):
        rec(0, e0, [], [], [], e0)
    return out


def _needed_k(window) -> int:
    kmin, kmax, lmin, lmax = window
    # good-tail support needs g_k <= k + 1; derived-tail support needs g_k + 2 g_l <= k + 2l
    return max(kmax + 1, kmax + 2 * lmax)


def enumerate_basis(p: int, window):
    """Generators whose summand support can meet the window (kmin, kmax, lmin, lmax)."""
    return enumerate_generators(p, _needed_k(window))


def a_star_dims(p: int, window, generators=None, division: bool = True):
    """{(k, l): dim} of A_star over the window, summing shifted HZ/p and HM supports."""
    kmin, kmax, lmin, lmax = window
    gens = enumerate_basis(p, window) if generators is None else generators
    shifted = [("HM" if g.kind == "HM" else "HZp", degree_of_index(g, division)) for g in gens]
    table = {}
    for l in range(lmin, lmax + 1):
        for k in range(kmin, kmax + 1):
            table[(k, l)] = sum(dims(mod, (k - g.k, l - g.l), p) for mod, g in shifted)
    return table


# consistency checks -------------------------------------------------------


def milnor_count(p: int, degree: int) -> int:
    """Number of Milnor basis monomials of the classical dual Steenrod algebra in a degree."""
    counts = [0] * (degree + 1)
    counts[0] = 1
    # tau_0 and each (xi_n, tau_n)
    gens_odd = [1]
    gens_even = []
    n = 1
    while 2 * p**n - 2 <= degree:
        gens_even.append(2 * p**n - 2)
        gens_odd.append(2 * p**n - 1)
        n += 1
    for g in gens_even:
        for d in range(g, degree + 1):
            counts[d] += counts[d - g]
    for g in gens_odd:
        for d in range(degree, g - 1, -1):
            counts[d] += counts[d - g]
    return counts[degree]


def underlying_count(p: int, degree: int, generators=None) -> int:
    """Generators of underlying degree k + 2l equal to degree (one class per summand)."""
    gens = enumerate_generators(p, degree) if generators is None else generators
    return sum(1 for g in gens if degree_of_index(g).underlying == degree)


class HTRow(NamedTuple):
    k: int
    l: int
    from_basis: int
    from_ht: int


def ht_consistency(p: int, pair=(1, 2), window=(-10, 10, -10, 10), division: bool = True):
    """Compare the four s=0 HM copies of K(m, n) with HT + Sigma^(beta-1) HT.

    Returns (ok, mismatching rows).
    """
    m, n = pair
    if not m < n:
        raise ValueError("need m < n")
    gens = [
        BasisIndex(p, quad=((m, QuadType(0, em)), (n, QuadType(0, en))))
        for em in (0, 1)
        for en in (0, 1)
    ]
    delta = element_degree(f"xi_u({m})", p) + element_degree(f"xi_u({n})", p)
    offsets = [degree_of_index(g, division) for g in gens]
    kmin, kmax, lmin, lmax = window
    bad = []
    for l in range(lmin, lmax + 1):
        for k in range(kmin, kmax + 1):
            lhs = sum(dims("HM", (k - o.k, l - o.l), p) for o in offsets)
            rhs = dims("HT", (k - delta.k, l - delta.l), p) + dims(
                "HT", (k - delta.k + 1, l - delta.l - 1), p
            )
            if lhs != rhs:
                bad.append(HTRow(k, l, lhs, rhs))
    return not bad, bad
