"""Completed tensor powers of the Borel dual Steenrod ring and coproducts.

Tensors are kept in left-normal form: every tensor factor except the first
is a pure Milnor monomial, and all sigma/b/u coefficients sit in the first
factor.  A coefficient c crossing the tensor sign is replaced by eta_R(c)
(1 (x) c m = eta_R(c) (x) m), with eta_R(b) = b.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

from .tate import (
    ONE_MONO,
    MilnorMonomial,
    TateElement,
    element,
    format_term,
    make_mono,
    mono_mul,
    rho2,
    rho_inverse,
    ubar,
    check_precision,
)


def _key_parity(key) -> int:
    return (key[2] + key[3].odd) % 2


def _left_mul(k1, k2, prec):
    """(sign, key) for a product of two single TateElement terms, or None."""
    a1, m1, e1, x1 = k1
    a2, m2, e2, x2 = k2
    m = m1 + m2
    if m >= prec or (e1 and e2):
        return None
    sign = -1 if (e2 and x1.odd) else 1
    s, mono = mono_mul(x1, x2)
    if not s:
        return None
    return sign * s, (a1 + a2, m, e1 + e2, mono)


class Tensor:
    """Sum of terms L (x) M_2 (x) ... (x) M_r keyed by (left key, M_2, ..., M_r)."""

    __slots__ = ("p", "bPrec", "slots", "terms")

    def __init__(self, p, bPrec, slots, terms=None):
        self.p, self.bPrec, self.slots = p, bPrec, slots
        clean = {}
        for key, c in (terms or {}).items():
            c %= p
            if c and key[0][1] < bPrec:
                clean[key] = c
        self.terms = clean

    @classmethod
    def from_left(cls, x: TateElement, slots=2):
        rest = (ONE_MONO,) * (slots - 1)
        return cls(x.p, x.bPrec, slots, {(k,) + rest: c for k, c in x.terms.items()})

    def __add__(self, other):
        if other.slots != self.slots or other.p != self.p:
            raise ValueError("incompatible tensors")
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return Tensor(self.p, min(self.bPrec, other.bPrec), self.slots, out)

    def __neg__(self):
        return Tensor(self.p, self.bPrec, self.slots, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return Tensor(self.p, self.bPrec, self.slots, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if other.slots != self.slots:
            raise ValueError("tensor slot mismatch")
        prec = min(self.bPrec, other.bPrec)
        p = self.p
        out = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                got = _left_mul(k1[0], k2[0], prec)
                if got is None:
                    continue
                sign, left = got
                # move each factor of the second tensor left past the later factors of the first
                par2 = [_key_parity(k2[0])] + [m.odd for m in k2[1:]]
                par1 = [_key_parity(k1[0])] + [m.odd for m in k1[1:]]
                swaps = 0
                for j in range(self.slots):
                    swaps += par2[j] * sum(par1[j + 1 :])
                if swaps % 2:
                    sign = -sign
                monos = []
                for m1, m2 in zip(k1[1:], k2[1:]):
                    s, mono = mono_mul(m1, m2)
                    if not s:
                        break
                    sign *= s
                    monos.append(mono)
                else:
                    key = (left,) + tuple(monos)
                    out[key] = (out.get(key, 0) + sign * c1 * c2) % p
        return Tensor(p, prec, self.slots, out)

    def __pow__(self, n):
        out = Tensor.from_left(TateElement.one(self.p, self.bPrec), self.slots)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.p, self.slots, self.terms) == (other.p, other.slots, other.terms)

    __hash__ = None

    def degrees(self):
        from .tate import term_degree

        out = set()
        for key in self.terms:
            d = term_degree(key[0], self.p)
            extra = sum(m.degree(self.p) for m in key[1:])
            out.add((d[0] + extra, d[1]))
        return out

    def right_counit(self) -> TateElement:
        """Apply the counit to the last factor (drop terms with a nontrivial monomial there)."""
        if self.slots != 2:
            raise ValueError("counit implemented for two-fold tensors")
        return TateElement(self.p, self.bPrec, {k[0]: c for k, c in self.terms.items() if k[1] == ONE_MONO})

    def left_counit(self) -> TateElement:
        """Apply the counit to the first factor: xi, tau -> 0, coefficients kept."""
        if self.slots != 2:
            raise ValueError("counit implemented for two-fold tensors")
        out = {}
        for (left, right), c in self.terms.items():
            a, m, e, mono = left
            if mono != ONE_MONO:
                continue
            key = (a, m, e, right)
            out[key] = (out.get(key, 0) + c) % self.p
        return TateElement(self.p, self.bPrec, out)

    def leading(self, count=3):
        items = sorted(self.terms.items())[:count]
        return [format_term(k[0], c) + " (x) " + " (x) ".join(str(m) or "1" for m in k[1:]) for k, c in items]

    def text(self) -> str:
        """Every term in canonical order, joined by ' + '."""
        return " + ".join(self.leading(len(self.terms))) or "0"

    def __repr__(self):
        return f"Tensor(slots={self.slots}, terms={len(self.terms)})"


# eta_R on coefficients ---------------------------------------------------


@lru_cache(maxsize=None)
def _rho_power(p, B, a):
    if a == 0:
        return TateElement.one(p, B)
    if a > 0:
        return _rho_power(p, B, a - 1) * rho2(p, B)
    return _rho_power(p, B, a + 1) * rho_inverse(p, B)


def eta_right(key, p, B) -> TateElement:
    """eta_R(sigma^{2a} b^m u^eps) = rho^{2a} b^m ubar^eps."""
    a, m, eps, _ = key
    out = _rho_power(p, B, a)
    if m:
        out = out.shift_b(m).truncate(B)
    if eps:
        out = out * ubar(p, B)
    return out


def tensor(x: TateElement, y: TateElement) -> Tensor:
    """x (x) y in left-normal form."""
    p, B = x.p, min(x.bPrec, y.bPrec)
    out = Tensor(p, B, 2)
    for key, c in y.terms.items():
        left = (x * eta_right(key, p, B)).scale(c)
        out = out + Tensor(p, B, 2, {(k, key[3]): v for k, v in left.terms.items()})
    return out


# coproduct ---------------------------------------------------------------


def _pure(p, B, mono_left, mono_right, coeff=1):
    return Tensor(p, B, 2, {((0, 0, 0, mono_left), mono_right): coeff})


def psi_generator(kind: str, n: int, p: int, B: int) -> Tensor:
    """psi(xi_n) = sum xi_{n-i}^{p^i} (x) xi_i, psi(tau_n) = tau_n (x) 1 + sum xi_{n-i}^{p^i} (x) tau_i."""
    out = Tensor(p, B, 2)
    if kind == "tau":
        out = out + _pure(p, B, make_mono(tau=(n,)), ONE_MONO)
    for i in range(n + 1):
        left = make_mono({n - i: p**i}) if n - i else ONE_MONO
        right = make_mono({i: 1}) if (kind == "xi" and i) else (ONE_MONO if kind == "xi" else make_mono(tau=(i,)))
        out = out + _pure(p, B, left, right)
    return out


def _psi_mono(mono: MilnorMonomial, p, B, overrides):
    out = Tensor.from_left(TateElement.one(p, B))
    for idx, k in enumerate(mono.xi):
        if k:
            g = overrides.get(("xi", idx + 1)) or psi_generator("xi", idx + 1, p, B)
            for _ in range(k):
                out = out * g
    for n in mono.tau:
        g = overrides.get(("tau", n)) or psi_generator("tau", n, p, B)
        out = out * g
    return out


@lru_cache(maxsize=None)
def _psi_mono_cached(mono, p, B):
    return _psi_mono(mono, p, B, {})


def coproduct(x: TateElement, overrides=None) -> Tensor:
    """Multiplicative extension of the Milnor coproduct; coefficients c map to c (x) 1.

    overrides maps ("xi"|"tau", n) to a replacement psi of that generator
    (used for negative controls).
    """
    p, B = x.p, x.bPrec
    out = Tensor(p, B, 2)
    for key, c in x.terms.items():
        a, m, e, mono = key
        coeff = Tensor(p, B, 2, {((a, m, e, ONE_MONO), ONE_MONO): c})
        psi_m = _psi_mono(mono, p, B, overrides) if overrides else _psi_mono_cached(mono, p, B)
        out = out + coeff * psi_m
    return out


def reduced_coproduct(x: TateElement) -> Tensor:
    one = TateElement.one(x.p, x.bPrec)
    return coproduct(x) - tensor(x, one) - tensor(one, x)


def _psi_on_left(t: Tensor, overrides=None) -> Tensor:
    """(psi (x) 1) on a two-fold tensor, giving a three-fold one."""
    out = {}
    for (left, right), c in t.terms.items():
        part = coproduct(TateElement(t.p, t.bPrec, {left: c}), overrides)
        for (l2, m2), v in part.terms.items():
            key = (l2, m2, right)
            out[key] = out.get(key, 0) + v
    return Tensor(t.p, t.bPrec, 3, out)


def _psi_on_right(t: Tensor, overrides=None) -> Tensor:
    """(1 (x) psi) on a two-fold tensor; psi of a pure monomial stays pure."""
    out = {}
    for (left, right), c in t.terms.items():
        part = _psi_mono(right, t.p, t.bPrec, overrides or {})
        for (l2, m2), v in part.terms.items():
            # part has coefficient-free pure monomials on both sides
            key = (left, l2[3], m2)
            out[key] = out.get(key, 0) + c * v
    return Tensor(t.p, t.bPrec, 3, out)


class CheckResult(NamedTuple):
    rid: str
    n: int
    ok: bool
    residual_terms: int
    note: str = ""

    def as_dict(self):
        return self._asdict()


def milnor_generator(name: str, p: int, B: int) -> TateElement:
    kind, idx = name.split("_")
    if kind == "xi":
        return TateElement.monomial(p, B, xi={int(idx): 1})
    if kind == "tau":
        return TateElement.monomial(p, B, tau=(int(idx),))
    raise ValueError(f"expected xi_n or tau_n, got {name!r}")


def corrupted_xi2_overrides(p: int, B: int):
    """psi(xi_2) with xi_1^p (x) xi_1 replaced by xi_1^(p-1) (x) xi_1.

    Dropping or rescaling that term stays coassociative, so a control has to
    change an exponent.
    """
    bad = (
        psi_generator("xi", 2, p, B)
        - _pure(p, B, make_mono({1: p}), make_mono({1: 1}))
        + _pure(p, B, make_mono({1: p - 1}), make_mono({1: 1}))
    )
    return {("xi", 2): bad}


def verify_coassoc(p: int, bPrec: int, names, overrides=None):
    """Coassociativity and both counit laws for named Milnor generators (xi_n, tau_n)
    or named equivariant elements (xi_u(n), ...)."""
    results = []
    for name in names:
        try:
            x = milnor_generator(name, p, bPrec)
        except ValueError:
            x = element(name, p, bPrec)
        psi = coproduct(x, overrides)
        lhs = _psi_on_left(psi, overrides)
        rhs = _psi_on_right(psi, overrides)
        diff = lhs - rhs
        results.append(CheckResult("coassoc", 0, diff.is_zero(), len(diff.terms), name))
        rc = psi.right_counit() - x
        lc = psi.left_counit() - x
        results.append(CheckResult("right_counit", 0, rc.is_zero(), len(rc.terms), name))
        results.append(CheckResult("left_counit", 0, lc.is_zero(), len(lc.terms), name))
    return results


# equivariant coproduct formulas ------------------------------------------


def _el(name, n, p, B):
    return element(f"{name}({n})", p, B)


def equivariant_coproduct_rhs(kind: str, n: int, p: int, B: int, variant: str = "verified") -> Tensor:
    """Right-hand sides of the reduced coproduct formulas, sums over i = 1..n-1.

    For tau_u the "uncorrected" variant uses + xi_hat_n (x) xi_1 b^(p-1), which
    is not even homogeneous of the right degree; the "verified" variant
    uses - xi_hat_n (x) xi_1 b^(p-2), the unique fit found by the checker.
    """
    out = Tensor(p, B, 2)
    target = {"xi_u": "xi_u", "theta_u": "theta_u", "xi_hat": "xi_hat", "tau_hat": "tau_hat", "tau_u": "tau_u"}[kind]
    for i in range(1, n):
        e = p ** (n - i) if kind == "theta_u" else p ** (n - i - 1)
        out = out + tensor(_el("theta_u", i, p, B) ** e, _el(target, n - i, p, B))
    tau0 = TateElement.monomial(p, B, tau=(0,))
    tail = tau0 + _el("xi_hat", 1, p, B).shift_b(p - 2).truncate(B)
    if kind == "tau_hat":
        out = out + tensor(_el("xi_hat", n, p, B), tail)
    if kind == "tau_u":
        if variant == "uncorrected":
            out = out + tensor(_el("xi_hat", n, p, B), _el("xi_u", 1, p, B).shift_b(p - 1).truncate(B))
        else:
            out = out - tensor(_el("xi_hat", n, p, B), _el("xi_u", 1, p, B).shift_b(p - 2).truncate(B))
        out = out + tensor(_el("xi_u", n, p, B), tail)
    return out


def verify_equivariant_coproducts(p: int, bPrec: int, n_max: int, kinds=None, variant="verified"):
    """Compare psi~ of each defined element with its closed formula, 1 <= n <= n_max."""
    check_precision(p, bPrec, n_max)
    kinds = kinds or ("xi_u", "theta_u", "xi_hat", "tau_hat", "tau_u")
    out = []
    for kind in kinds:
        for n in range(1, n_max + 1):
            lhs = reduced_coproduct(_el(kind, n, p, bPrec))
            rhs = equivariant_coproduct_rhs(kind, n, p, bPrec, variant)
            diff = lhs - rhs
            homog = len(lhs.degrees() | rhs.degrees()) <= 1
            out.append(CheckResult(f"psi~({kind})", n, diff.is_zero() and homog, len(diff.terms), "sum i=1..n-1"))
    return out


# coaction on Borel cohomology of CP^infty and the lens space -----------------


class TZPoly:
    """Sum of t^i z^j (x) a_ij with a_ij in the Tate ring; z odd, z^2 = 0.

    Coefficients written to the right of a monomial move into the tensor
    factor unchanged.  t-degrees above t_max are discarded.
    """

    __slots__ = ("p", "bPrec", "t_max", "terms")

    def __init__(self, p, bPrec, t_max, terms=None):
        self.p, self.bPrec, self.t_max = p, bPrec, t_max
        self.terms = {k: v for k, v in (terms or {}).items() if k[0] <= t_max and not v.is_zero()}

    @classmethod
    def mono(cls, p, B, t_max, i, j, coeff: TateElement):
        return cls(p, B, t_max, {(i, j): coeff})

    def __add__(self, other):
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return TZPoly(self.p, self.bPrec, self.t_max, out)

    def __neg__(self):
        return TZPoly(self.p, self.bPrec, self.t_max, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        out = {}
        for (i1, j1), a1 in self.terms.items():
            for (i2, j2), a2 in other.terms.items():
                if j1 and j2 or i1 + i2 > self.t_max:
                    continue
                # a1 passes z^j2 on its way right
                left = _parity_twist(a1) if j2 else a1
                key = (i1 + i2, j1 + j2)
                prod = left * a2
                out[key] = out[key] + prod if key in out else prod
        return TZPoly(self.p, self.bPrec, self.t_max, out)

    def __pow__(self, n):
        out = TZPoly.mono(self.p, self.bPrec, self.t_max, 0, 0, TateElement.one(self.p, self.bPrec))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def times_right(self, a: TateElement):
        return TZPoly(self.p, self.bPrec, self.t_max, {k: v * a for k, v in self.terms.items()})

    def tensor_right(self, a: TateElement):
        """self (x) a for self in H(X) (its coefficients already on the right)."""
        return self.times_right(a)

    def coefficient(self, i, j) -> TateElement:
        return self.terms.get((i, j), TateElement.zero(self.p, self.bPrec))

    def diff_report(self, other):
        bad = []
        for k in sorted(set(self.terms) | set(other.terms)):
            d = self.coefficient(*k) - other.coefficient(*k)
            if not d.is_zero():
                bad.append((k, len(d.terms)))
        return bad


def _parity_twist(a: TateElement) -> TateElement:
    return TateElement(a.p, a.bPrec, {k: (-c if _key_parity(k) else c) for k, c in a.terms.items()})


class BorelSpaceModel:
    """Borel cohomology of CP^infty (generator t) or the lens space (adds odd z), with lambda."""

    def __init__(self, p, bPrec, t_max, lens=False):
        self.p, self.B, self.t_max, self.lens = p, bPrec, t_max, lens

    def c(self, **kw):
        return TateElement.monomial(self.p, self.B, **kw)

    def poly(self, i, j, coeff=None):
        return TZPoly.mono(self.p, self.B, self.t_max, i, j, coeff or self.c())

    # generators in H(X)
    def x(self):
        return self.poly(1, 0, self.c(a=-1))

    def y(self):
        p = self.p
        return self.poly(p, 0, self.c(a=1 - p)) - self.poly(1, 0, self.c(m=p - 1))

    def q(self):
        return self.poly(0, 1, self.c(m=1)) - self.poly(1, 0, self.c(a=-1, eps=1))

    def nu(self):
        return self.poly(0, 1, self.c(a=-1))

    def s(self):
        return self.poly(0, 1, self.c(a=-1, eps=1))

    # coaction on the polynomial generators
    def lambda_t(self):
        p = self.p
        out = self.poly(1, 0)
        n = 1
        while p**n <= self.t_max:
            out = out + self.poly(p**n, 0, self.c(xi={n: 1}))
            n += 1
        return out

    def lambda_z(self):
        p = self.p
        out = self.poly(0, 1)
        n = 0
        while p**n <= self.t_max:
            out = out + self.poly(p**n, 0, self.c(tau=(n,)))
            n += 1
        return out


def verify_milnor_coaction(p: int, bPrec: int, n_max: int, space: str = "CP"):
    """Replay the coefficient matching that defines the elements.

    lambda of x, y (and q, nu, s on the lens space) is computed from
    lambda(t), lambda(z) with coefficients moved through eta_R, and compared
    with the closed formulas in t-degrees up to p^n_max.
    """
    check_precision(p, bPrec, n_max)
    if space not in ("CP", "Lens"):
        raise ValueError("space must be CP or Lens")
    B = bPrec
    t_max = p**n_max
    model = BorelSpaceModel(p, B, t_max, lens=(space == "Lens"))
    lt = model.lambda_t()
    ri, r2, ub = rho_inverse(p, B), rho2(p, B), ubar(p, B)
    one = TateElement.one(p, B)
    x, y = model.x(), model.y()

    def el(name, n):
        return element(f"{name}({n})", p, B)

    def ysum(name, shift):
        total = TZPoly(p, B, t_max)
        n = 1
        while p ** (n - 1 + shift) <= t_max:
            total = total + (y ** (p ** (n - 1 + shift))).tensor_right(el(name, n))
            n += 1
        return total

    results = []

    def record(rid, lhs, rhs, note=""):
        bad = lhs.diff_report(rhs)
        results.append(CheckResult(rid, n_max, not bad, sum(c for _, c in bad), note or (str(bad[0][0]) if bad else "")))

    # coefficient of t in lambda(t) through x: (sigma^-2 - b^(p-1) xi_1) rho^2 = 1
    coeff_t = (TateElement.monomial(p, B, a=-1) - el("xi_u", 1).shift_b(p - 1).truncate(B)) * r2
    results.append(CheckResult("t_coefficient", 1, coeff_t.equal_mod(one), len((coeff_t - one).terms), ""))

    lam_x = lt.times_right(ri)
    record("lambda(x)", lam_x, x + ysum("xi_u", 0))
    lam_y = (lt ** p).times_right(ri ** (p - 1)) - lt.times_right(TateElement.monomial(p, B, m=p - 1))
    record("lambda(y)", lam_y, y + ysum("theta_u", 1))
    if space == "Lens":
        lz = model.lambda_z()
        b = TateElement.monomial(p, B, m=1)
        q, nu, s = model.q(), model.nu(), model.s()
        lam_q = lz.times_right(b) - lt.times_right(ri * ub)
        record("lambda(q)", lam_q, q + ysum("xi_hat", 0))
        lam_nu = lz.times_right(ri)
        tau0 = TateElement.monomial(p, B, tau=(0,))
        tail = tau0 + el("xi_hat", 1).shift_b(p - 2).truncate(B)
        rhs_nu = nu - q.tensor_right(el("xi_u", 1).shift_b(p - 2).truncate(B)) + x.tensor_right(tail) + ysum("tau_u", 0)
        record("lambda(nu)", lam_nu, rhs_nu)
        z_coeff = lam_nu.coefficient(0, 1)
        results.append(CheckResult("z_coefficient", 1, z_coeff.equal_mod(ri), len((z_coeff - ri).terms), ""))
        lam_s = lam_nu.times_right(ub)
        rhs_s = s + q.tensor_right(tail) + ysum("tau_hat", 0)
        record("lambda(s)", lam_s, rhs_s)
    return results
