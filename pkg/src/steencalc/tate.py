"""Truncated arithmetic in the completed Borel and Tate dual Steenrod rings.

An element is a finite sum of terms c * sigma^{2a} b^m u^eps * M with M a
Milnor monomial in the xi_n (even) and tau_n (odd).  sigma^2 is a unit, so a
ranges over Z; b is the completion variable and every term with b-exponent
at least the precision bPrec is dropped.  Inverting b (the Tate ring) only
means m may be negative.

A term sits in homological degree (-2a - eps + |M|) + (a - m) beta with
|xi_n| = 2(p^n - 1) and |tau_n| = 2p^n - 1.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import NamedTuple

from .fplin import check_odd_prime
from .grading import RDegree


class PrecisionError(ValueError):
    """The generator bound cannot support the requested b-precision."""


class NotDivisible(ArithmeticError):
    pass


class MilnorMonomial(NamedTuple):
    """xi exponents for n = 1, 2, ... (no trailing zeros) and a sorted tuple of tau indices."""

    xi: tuple = ()
    tau: tuple = ()

    def degree(self, p: int) -> int:
        d = sum(2 * (p ** (n + 1) - 1) * k for n, k in enumerate(self.xi))
        return d + sum(2 * p**n - 1 for n in self.tau)

    @property
    def odd(self) -> int:
        return len(self.tau) % 2

    def __str__(self):
        parts = [f"xi({n + 1})" + (f"^{k}" if k != 1 else "") for n, k in enumerate(self.xi) if k]
        parts += [f"tau({n})" for n in self.tau]
        return " ".join(parts)


ONE_MONO = MilnorMonomial()


def make_mono(xi=None, tau=()) -> MilnorMonomial:
    """Monomial from {n: exponent} and an iterable of distinct tau indices."""
    xi = dict(xi or {})
    top = max((n for n, k in xi.items() if k), default=0)
    exps = tuple(xi.get(n, 0) for n in range(1, top + 1))
    if any(k < 0 for k in exps) or any(n < 1 for n in xi if xi[n]):
        raise ValueError("xi exponents must be non-negative with indices >= 1")
    tau = tuple(tau)
    if len(set(tau)) != len(tau):
        raise ValueError("repeated tau index")
    return MilnorMonomial(exps, tuple(sorted(tau)))


def _sort_sign(seq):
    """Sign of the permutation sorting seq (distinct entries)."""
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def mono_mul(m1: MilnorMonomial, m2: MilnorMonomial):
    """(sign, product) of Milnor monomials, or (0, None) if a tau repeats."""
    if set(m1.tau) & set(m2.tau):
        return 0, None
    if m1.xi and m2.xi:
        n = max(len(m1.xi), len(m2.xi))
        a = m1.xi + (0,) * (n - len(m1.xi))
        b = m2.xi + (0,) * (n - len(m2.xi))
        xi = tuple(x + y for x, y in zip(a, b))
    else:
        xi = m1.xi or m2.xi
    if not m2.tau:
        return 1, MilnorMonomial(xi, m1.tau)
    if not m1.tau:
        return 1, MilnorMonomial(xi, m2.tau)
    joined = m1.tau + m2.tau
    return _sort_sign(joined), MilnorMonomial(xi, tuple(sorted(joined)))


def term_degree(key, p: int) -> RDegree:
    a, m, eps, mono = key
    return RDegree(-2 * a - eps + mono.degree(p), a - m)


class TateElement:
    """Immutable truncated series; terms maps (a, m, eps, mono) to a nonzero residue."""

    __slots__ = ("p", "bPrec", "terms")

    def __init__(self, p: int, bPrec: int, terms=None):
        self.p = p
        self.bPrec = bPrec
        clean = {}
        for key, c in (terms or {}).items():
            c %= p
            if c and key[1] < bPrec:
                clean[key] = c
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, p, bPrec):
        return cls(p, bPrec)

    @classmethod
    def monomial(cls, p, bPrec, a=0, m=0, eps=0, xi=None, tau=(), coeff=1):
        mono = xi if isinstance(xi, MilnorMonomial) else make_mono(xi, tau)
        return cls(p, bPrec, {(a, m, eps, mono): coeff})

    @classmethod
    def one(cls, p, bPrec):
        return cls.monomial(p, bPrec)

    # arithmetic
    def _same(self, other):
        if not isinstance(other, TateElement):
            raise TypeError("expected a TateElement")
        if other.p != self.p:
            raise ValueError("elements over different primes")
        return min(self.bPrec, other.bPrec)

    def __add__(self, other):
        prec = self._same(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, 0) + c
        return TateElement(self.p, prec, out)

    def __neg__(self):
        return TateElement(self.p, self.bPrec, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        return TateElement(self.p, self.bPrec, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        prec = self._same(other)
        p = self.p
        out = {}
        for (a1, m1, e1, x1), c1 in self.terms.items():
            for (a2, m2, e2, x2), c2 in other.terms.items():
                m = m1 + m2
                if m >= prec or (e1 and e2):
                    continue
                # move u^e2 to the left past the monomial x1
                sign = -1 if (e2 and x1.odd) else 1
                s, mono = mono_mul(x1, x2)
                if not s:
                    continue
                key = (a1 + a2, m, e1 + e2, mono)
                out[key] = (out.get(key, 0) + sign * s * c1 * c2) % p
        return TateElement(p, prec, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = TateElement.one(self.p, self.bPrec)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def truncate(self, bPrec: int):
        if bPrec > self.bPrec:
            raise PrecisionError("cannot raise precision by truncation")
        return TateElement(self.p, bPrec, self.terms)

    def shift_b(self, k: int):
        """Multiply by b^k (k may be negative; precision moves with it)."""
        terms = {(a, m + k, e, x): c for (a, m, e, x), c in self.terms.items()}
        return TateElement(self.p, self.bPrec + k, terms)

    def times_sigma2(self, k: int):
        terms = {(a + k, m, e, x): c for (a, m, e, x), c in self.terms.items()}
        return TateElement(self.p, self.bPrec, terms)

    # inspection
    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TateElement):
            return NotImplemented
        return self.p == other.p and self.bPrec == other.bPrec and self.terms == other.terms

    def equal_mod(self, other) -> bool:
        """Equality modulo b^min(precisions)."""
        return (self - other).is_zero()

    __hash__ = None

    def degrees(self):
        return {term_degree(k, self.p) for k in self.terms}

    def degree(self):
        """The common degree of a homogeneous element (None for zero)."""
        ds = self.degrees()
        if not ds:
            return None
        if len(ds) != 1:
            raise ValueError(f"inhomogeneous element with degrees {sorted(ds)}")
        return ds.pop()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def min_b(self):
        return min((k[1] for k in self.terms), default=None)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def leading_terms(self, count=3):
        return [format_term(k, c) for k, c in self.sorted_terms()[:count]]

    def __str__(self):
        return serialize(self)

    def __repr__(self):
        return f"TateElement(p={self.p}, bPrec={self.bPrec}, {serialize(self)})"


def divide_by_b(x: TateElement) -> TateElement:
    """x / b; precision drops by one.  Raises NotDivisible naming offending terms."""
    bad = [k for k in x.terms if k[1] < 1]
    if bad:
        shown = ", ".join(format_term(k, x.terms[k]) for k in sorted(bad)[:5])
        raise NotDivisible(f"not divisible by b: {shown}")
    return x.shift_b(-1)


# canonical text form ----------------------------------------------------


def format_term(key, c) -> str:
    a, m, eps, mono = key
    parts = []
    if a:
        parts.append(f"s^{2 * a}")
    if m:
        parts.append(f"b^{m}")
    if eps:
        parts.append("u")
    ms = str(mono)
    if ms:
        parts.append(ms)
    return f"{c} * " + (" ".join(parts) if parts else "1")


def serialize(x: TateElement) -> str:
    if x.is_zero():
        return "0"
    return " + ".join(format_term(k, c) for k, c in x.sorted_terms())


_FACTOR = re.compile(r"s\^(-?\d+)|b\^(-?\d+)|u|xi\((\d+)\)(?:\^(\d+))?|tau\((\d+)\)|1")


def parse(text: str, p: int, bPrec: int) -> TateElement:
    """Inverse of serialize (terms in the canonical factor order)."""
    out = TateElement.zero(p, bPrec)
    text = text.strip()
    if text == "0":
        return out
    for chunk in text.split(" + "):
        coeff, _, body = chunk.partition(" * ")
        a = m = eps = 0
        xi, tau = {}, []
        for tok in body.split():
            g = _FACTOR.fullmatch(tok)
            if g is None:
                raise ValueError(f"bad factor {tok!r}")
            if g.group(1):
                a = int(g.group(1)) // 2
            elif g.group(2):
                m = int(g.group(2))
            elif tok == "u":
                eps = 1
            elif g.group(3):
                xi[int(g.group(3))] = int(g.group(4) or 1)
            elif g.group(5):
                tau.append(int(g.group(5)))
        out = out + TateElement.monomial(p, bPrec, a, m, eps, xi, tau, int(coeff))
    return out


# the eta_R series and the defined elements -------------------------------


def check_precision(p: int, bPrec: int, n_max: int) -> None:
    """The first omitted generator must fall beyond the precision: p^(N+1) - p^N >= bPrec."""
    check_odd_prime(p)
    if bPrec < 1:
        raise PrecisionError("bPrec must be positive")
    if n_max < 1:
        raise PrecisionError("n_max must be at least 1")
    if p ** (n_max + 1) - p**n_max < bPrec:
        raise PrecisionError(
            f"generator bound {n_max} too small for b-precision {bPrec} at p={p}: "
            f"need p^(n+1) - p^n >= {bPrec}"
        )


def generator_bound(p: int, bPrec: int, need: int = 1) -> int:
    """Smallest N >= need with p^(N+1) - p^N >= bPrec."""
    n = max(need, 1)
    while p ** (n + 1) - p**n < bPrec:
        n += 1
    return n


def _xi(p, B, n, a=0, m=0):
    return TateElement.monomial(p, B, a=a, m=m, xi={n: 1}) if n else TateElement.monomial(p, B, a=a, m=m)


def _tau(p, B, n, a=0, m=0):
    return TateElement.monomial(p, B, a=a, m=m, tau=(n,))


def _indices(p, B, start, exponent):
    """Indices N >= start whose b-exponent exponent(N) is still below B."""
    n = start
    while exponent(n) < B:
        yield n
        n += 1


@lru_cache(maxsize=None)
def rho2(p: int, B: int) -> TateElement:
    """eta_R(sigma^2) = sum_n sigma^{2p^n} b^{p^n - 1} xi_n."""
    out = TateElement.zero(p, B)
    for n in _indices(p, B, 0, lambda n: p**n - 1):
        out = out + _xi(p, B, n, a=p**n, m=p**n - 1)
    return out


@lru_cache(maxsize=None)
def ubar(p: int, B: int) -> TateElement:
    """eta_R(u) = u + sum_n sigma^{2p^n} b^{p^n} tau_n."""
    out = TateElement.monomial(p, B, eps=1)
    for n in _indices(p, B, 0, lambda n: p**n):
        out = out + _tau(p, B, n, a=p**n, m=p**n)
    return out


@lru_cache(maxsize=None)
def rho_inverse(p: int, B: int) -> TateElement:
    """sigma^{-2} sum_j (-w)^j where rho^2 = sigma^2 (1 + w)."""
    w = TateElement.zero(p, B)
    for n in _indices(p, B, 1, lambda n: p**n - 1):
        w = w + _xi(p, B, n, a=p**n - 1, m=p**n - 1)
    total = TateElement.one(p, B)
    power = TateElement.one(p, B)
    while True:
        power = power * (-w)
        if power.is_zero():
            break
        total = total + power
    return total.times_sigma2(-1)


def eta_r(name: str, p: int, bPrec: int, n_max: int) -> TateElement:
    check_precision(p, bPrec, n_max)
    if name == "sigma2":
        return rho2(p, bPrec)
    if name == "u":
        return ubar(p, bPrec)
    if name == "b":
        # assumption: b is the Euler class of a stable sphere and is fixed by eta_R
        return TateElement.monomial(p, bPrec, m=1)
    raise ValueError(f"eta_r is defined for sigma2, u, b; got {name!r}")


@lru_cache(maxsize=None)
def _xi_u(p, B, n):
    out = TateElement.zero(p, B)
    for N in _indices(p, B, n, lambda N: p**N - p**n):
        out = out + _xi(p, B, N, a=p**N - p ** (n - 1), m=p**N - p**n)
    return rho_inverse(p, B) * out


@lru_cache(maxsize=None)
def _tau_u(p, B, n):
    out = TateElement.zero(p, B)
    for N in _indices(p, B, n, lambda N: p**N - p**n):
        out = out + _tau(p, B, N, a=p**N - p ** (n - 1), m=p**N - p**n)
    return rho_inverse(p, B) * out


@lru_cache(maxsize=None)
def _xi_hat(p, B, n):
    ur = ubar(p, B) * rho_inverse(p, B)
    out = TateElement.zero(p, B)
    for N in _indices(p, B, n, lambda N: p**N - p**n):
        inner = _tau(p, B, N, m=1) - ur * _xi(p, B, N)
        out = out + inner.shift_b(p**N - p**n).truncate(B).times_sigma2(p**N - p ** (n - 1))
    return out


@lru_cache(maxsize=None)
def _tau_hat(p, B, n):
    return _tau_u(p, B, n) * ubar(p, B)


@lru_cache(maxsize=None)
def _theta_u(p, B, n):
    b_p1 = TateElement.monomial(p, B, m=p - 1)
    return rho2(p, B) * (_xi_u(p, B, n) ** p - _xi_u(p, B, n + 1) * b_p1)


def mu_numerator(p: int, B: int, n: int, sign: int = 1) -> TateElement:
    """xi_hat_n xi_n^(p-1) + sign * theta_n rho^-2 ubar.

    Since xi_hat_n = -xi_n ubar mod b, only sign = +1 is divisible by b;
    the opposite sign leaves -2 xi_n^p ubar in b-degree 0.
    """
    return _xi_hat(p, B, n) * _xi_u(p, B, n) ** (p - 1) + (
        _theta_u(p, B, n) * rho_inverse(p, B) * ubar(p, B)
    ).scale(sign)


@lru_cache(maxsize=None)
def _mu_u(p, B, n):
    # the numerator is computed one order higher so the quotient keeps precision B
    return divide_by_b(mu_numerator(p, B + 1, n))


_ELEMENT = re.compile(r"^(xi_u|xi_hat|tau_u|tau_hat|theta_u|mu_u)\((\d+)\)$")
_BUILDERS = {
    "xi_u": _xi_u,
    "xi_hat": _xi_hat,
    "tau_u": _tau_u,
    "tau_hat": _tau_hat,
    "theta_u": _theta_u,
    "mu_u": _mu_u,
}


def parse_element_name(name: str):
    if name == "tau0":
        return "tau0", 0
    g = _ELEMENT.match(name)
    if g is None:
        raise ValueError(f"unknown element {name!r}")
    n = int(g.group(2))
    if n < 1:
        raise ValueError("element index must be >= 1")
    return g.group(1), n


def element(name: str, p: int, bPrec: int, n_max: int | None = None) -> TateElement:
    """One of xi_u(n), xi_hat(n), tau_u(n), tau_hat(n), theta_u(n), mu_u(n), tau0.

    Series are summed until their b-exponents pass bPrec, so the result is
    exact modulo b^bPrec.  n_max, if given, bounds the index and is checked
    against the precision.
    """
    kind, n = parse_element_name(name)
    if n_max is not None:
        check_precision(p, bPrec, n_max)
        if n > n_max:
            raise PrecisionError(f"index {n} exceeds n_max={n_max}")
    else:
        check_odd_prime(p)
    if kind == "tau0":
        return _tau(p, bPrec, 0)
    return _BUILDERS[kind](p, bPrec, n)


def element_degree(name: str, p: int) -> RDegree:
    """Stated degree of a named element (independent of any series)."""
    kind, n = parse_element_name(name)
    if kind == "tau0":
        return RDegree(1, 0)
    xi = RDegree(2 * p ** (n - 1), p**n - p ** (n - 1) - 1)
    theta = RDegree(2 * (p**n - 1), (p - 1) * (p**n - 1))
    return {
        "xi_u": xi,
        "xi_hat": xi - (1, 0),
        "tau_u": xi + (1, 0),
        "tau_hat": xi,
        "theta_u": theta,
        "mu_u": theta + (1, 0),
    }[kind]


# relations ---------------------------------------------------------------


class RelationResult(NamedTuple):
    rid: str
    n: int
    ok: bool
    residual_terms: int
    first_offending: str

    def as_dict(self):
        return self._asdict()


def _check(rid, n, lhs, rhs):
    diff = lhs - rhs
    if diff.is_zero():
        return RelationResult(rid, n, True, 0, "")
    k, c = diff.sorted_terms()[0]
    return RelationResult(rid, n, False, len(diff.terms), format_term(k, c))


def relation_residuals(p: int, B: int, n: int, mutate: str | None = None):
    """Both sides of each listed relation at index n."""
    r2, ri, ub = rho2(p, B), rho_inverse(p, B), ubar(p, B)
    one = TateElement.one(p, B)
    b = TateElement.monomial(p, B, m=1)
    b_p1 = TateElement.monomial(p, B, m=p - 1)
    xi, xh = _xi_u(p, B, n), _xi_hat(p, B, n)
    tu, th = _tau_u(p, B, n), _tau_hat(p, B, n)
    sigma_m2 = TateElement.monomial(p, B, a=-1)
    zero = TateElement.zero(p, B)
    sign = -1 if mutate == "xi_hat_rho" else 1
    rels = [
        ("rho_rho_inverse", r2 * ri, one),
        ("rho_inverse", ri, sigma_m2 - _xi_u(p, B, 1) * b_p1),
        ("ubar_rho_inverse", ub * ri,
         TateElement.monomial(p, B, a=-1, eps=1) + b * _tau(p, B, 0) + b_p1 * _xi_hat(p, B, 1)),
        ("xi_hat_rho", xh * ri, (xi * ub * ri).scale(-sign) + b * tu),
        ("tau_hat_rho", th * ri, tu * ub * ri),
        ("b_tau_hat", b * th, xh * ub * ri),
        ("tau_hat_rho_ubar", th * ri * ub, zero),
        ("tau_hat_sq", th * th, zero),
        ("tau_hat_tau_u", th * tu, zero),
        ("tau_hat_xi_hat", th * xh, zero),
        ("xi_hat_sq", xh * xh, zero),
        ("xi_hat_tau_u", xh * tu, xi * th),
        ("theta_rho", _theta_u(p, B, n) * ri, xi**p - _xi_u(p, B, n + 1) * b_p1),
    ]
    return rels


def verify_relations(p: int, bPrec: int, n_max: int, mutate: str | None = None):
    """Evaluate every listed relation for 1 <= n <= n_max; a list of RelationResult."""
    check_precision(p, bPrec, n_max)
    out = []
    for n in range(1, n_max + 1):
        for rid, lhs, rhs in relation_residuals(p, bPrec, n, mutate):
            out.append(_check(rid, n, lhs, rhs))
    return out


def b_division_checks(p: int, bPrec: int):
    """The b-divisible products built from the first two quadruplets, divided by b."""
    xh1, xh2 = _xi_hat(p, bPrec, 1), _xi_hat(p, bPrec, 2)
    xu1, xu2 = _xi_u(p, bPrec, 1), _xi_u(p, bPrec, 2)
    th1, th2 = _tau_hat(p, bPrec, 1), _tau_hat(p, bPrec, 2)
    tu1, tu2 = _tau_u(p, bPrec, 1), _tau_u(p, bPrec, 2)
    results = {}
    for label, num in [
        ("xi_hat1*xi_hat2", xh1 * xh2),
        ("xi_hat1*xi_u2-xi_hat2*xi_u1", xh1 * xu2 - xh2 * xu1),
        ("xi_hat1*tau_hat2", xh1 * th2),
        ("tau_hat1*xi_hat2", th1 * xh2),
        ("xi_hat1*tau_u2-xi_u1*tau_hat2", xh1 * tu2 - xu1 * th2),
    ]:
        try:
            results[label] = divide_by_b(num)
        except NotDivisible:
            results[label] = None
    return results
