"""The reduced grading group Z{1, beta} and coefficient dimension oracles.

All degrees are homological.  A degree ``RDegree(k, l)`` stands for
k + l*beta, where beta is the irreducible complex representation on which
the generator acts by a primitive p-th root of unity.

Dimensions returned here are F_p-dimensions in a single degree; every
module covered is at most one copy of F_p per degree except HT,
HQsmashHQ and the unions built from them.
"""

from __future__ import annotations

from typing import NamedTuple

from .fplin import FpMatrix, check_odd_prime, rank


class RDegree(NamedTuple):
    k: int
    l: int

    def __add__(self, other):
        return RDegree(self.k + other[0], self.l + other[1])

    def __sub__(self, other):
        return RDegree(self.k - other[0], self.l - other[1])

    def __neg__(self):
        return RDegree(-self.k, -self.l)

    def scale(self, n: int) -> "RDegree":
        return RDegree(n * self.k, n * self.l)

    @property
    def underlying(self) -> int:
        """Degree after forgetting the group action (beta has real dimension 2)."""
        return self.k + 2 * self.l

    def __str__(self):
        return format_degree(self)

    @classmethod
    def parse(cls, text: str) -> "RDegree":
        k, l = (int(s) for s in text.split(","))
        return cls(k, l)


ZERO = RDegree(0, 0)
BETA = RDegree(0, 1)

# homological degrees of the Borel coefficient generators
DEG_B = RDegree(0, -1)
DEG_SIGMA2 = RDegree(-2, 1)
DEG_U = RDegree(-1, 0)


def format_degree(d) -> str:
    k, l = d
    if l == 0:
        return str(k)
    lpart = {1: "b", -1: "-b"}.get(l, f"{l}b").replace("b", "β")
    if k == 0:
        return lpart
    sign = "+" if l > 0 else ""
    return f"{k}{sign}{lpart}"


def sign(d1, d2) -> int:
    """Commutation sign (-1)^(k1*k2); beta components never contribute."""
    return -1 if (d1[0] * d2[0]) % 2 else 1


MODULES = ("HZp", "HQ", "HM", "HT", "Phi", "Gamma", "GammaPrime", "HQsmashHQ", "HPhiGeom")


def _hzp(k, l):
    return int(0 <= k <= -2 * l or -2 * l <= k <= -2)


def _hq(k, l):
    return int(1 <= k <= -2 * l or -2 * l <= k <= -1)


def _hm(k, l):
    return _hq(k + 2, l - 1)


def _gamma(k, l):
    # sigma^{-2a} b^m (sigma^{-2}u)^eps sits in degree (2a + eps, -a - m - eps)
    count = 0
    for eps in (0, 1):
        if (k - eps) % 2 or k < eps:
            continue
        a = (k - eps) // 2
        if -l - a - eps >= 0:
            count += 1
    return count


def _phi_geom(k, l):
    # same monomials with m ranging over all of Z
    return int(k >= 0)


def dims(module: str, d, p: int = 3) -> int:
    """Dimension of the named coefficient module in degree d = (k, l)."""
    check_odd_prime(p)
    k, l = d
    if module == "HZp":
        return _hzp(k, l)
    if module == "HQ":
        return _hq(k, l)
    if module == "HM":
        return _hm(k, l)
    if module == "HT":
        return _hm(k, l) + _hm(k - 1, l)
    if module == "Phi":
        return int(k == 0)
    if module == "Gamma":
        return _gamma(k, l)
    if module == "GammaPrime":
        return _hzp(k, l) - _gamma(k, l)
    if module == "HPhiGeom":
        return _phi_geom(k, l)
    if module == "HQsmashHQ":
        return _hq(k - 2, l + 1) + _phi_geom(k - 2, l)
    raise ValueError(f"unknown module {module!r}; expected one of {MODULES}")


def _localized_monomial(k, l, eps, need_a_nonneg, need_m_nonneg):
    """Whether Gamma localized as requested has the eps-monomial in degree (k, l)."""
    if (k - eps) % 2:
        return False
    a = (k - eps) // 2
    m = -l - a - eps
    if need_a_nonneg and a < 0:
        return False
    if need_m_nonneg and m < 0:
        return False
    return True


def cech_h2_dims(p: int, d) -> int:
    """dim H^2_{(sigma^-2, b)}(Gamma)[-1] in degree d via the Cech complex.

    The second local cohomology is the cokernel of
    Gamma[sigma^2] + Gamma[1/b] -> Gamma[sigma^2, 1/b]; each term is
    spanned by monomials, and the map is the difference of the two
    localization maps.  Desuspending by one reads the cokernel at d + 1.
    """
    check_odd_prime(p)
    k, l = d[0] + 1, d[1]
    target = [eps for eps in (0, 1) if _localized_monomial(k, l, eps, False, False)]
    src_sigma = [eps for eps in (0, 1) if _localized_monomial(k, l, eps, False, True)]
    src_b = [eps for eps in (0, 1) if _localized_monomial(k, l, eps, True, False)]
    cols = len(src_sigma) + len(src_b)
    rows = []
    for t in target:
        row = [1 if s == t else 0 for s in src_sigma] + [-1 if s == t else 0 for s in src_b]
        rows.append(row)
    if not target:
        return 0
    mat = FpMatrix.from_rows(p, rows) if cols else FpMatrix.zeros(p, len(target), 0)
    return len(target) - rank(mat)


def window(kmin, kmax, lmin=None, lmax=None):
    if lmin is None:
        lmin, lmax = kmin, kmax
    for l in range(lmax, lmin - 1, -1):
        for k in range(kmin, kmax + 1):
            yield RDegree(k, l)


def dim_table(module: str, win, p: int = 3):
    """Sorted list of (k, l, dim) over a window given as (kmin, kmax, lmin, lmax)."""
    kmin, kmax, lmin, lmax = win
    return [(d.k, d.l, dims(module, d, p)) for d in sorted(window(kmin, kmax, lmin, lmax))]
