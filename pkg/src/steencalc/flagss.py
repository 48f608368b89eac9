"""Flag spectral sequence bookkeeping for the projective and lens spaces.

Degrees are homological.  The regular flag puts the cells of CP at
-2 floor(n/p) - (n - floor(n/p)) beta; the lens space doubles each cell
with a copy one lower.
"""

from __future__ import annotations

from typing import NamedTuple

from .fplin import check_odd_prime
from .grading import RDegree, dims

SPACES = ("CP", "Lens")


class FlagCell(NamedTuple):
    n: int
    degree: RDegree


def _cp_degree(n, p):
    f = n // p
    return RDegree(-2 * f, -(n - f))


def cell_degree(space: str, p: int, n: int) -> RDegree:
    if space == "CP":
        return _cp_degree(n, p)
    if space == "Lens":
        d = _cp_degree(n // 2, p)
        return d if n % 2 == 0 else d - RDegree(1, 0)
    raise ValueError(f"unknown space {space!r}")


def flag_cells(space: str, p: int, count: int):
    check_odd_prime(p)
    return [FlagCell(n, cell_degree(space, p, n)) for n in range(count)]


def cells_needed(space: str, p: int, d) -> int:
    """A cell count past which no cell contributes to degree d.

    Cell n of CP sits at (-2f, -(n-f)) with f = n // p.  The good tail of
    HZ/p needs k + 2l + 2n <= 0 and the derived tail needs k + 2f <= -2.
    """
    k, l = d
    n = max(0, -(k + 2 * l) // 2 + 1, p * ((abs(k) + 2) // 2 + 1))
    return (2 * n + 2 if space == "Lens" else n + 1) + p


def e1_dims(space: str, p: int, d, count: int | None = None) -> int:
    d = RDegree(*d)
    if count is None:
        count = cells_needed(space, p, d)
    return sum(dims("HZp", d - c.degree, p) for c in flag_cells(space, p, count))


X_DEG = RDegree(0, -1)


def y_degree(p: int) -> RDegree:
    return RDegree(-2, -(p - 1))


def collapse_check(p: int) -> bool:
    """E1 vanishes one below the permanent cycles x and y, so nothing can hit or leave them."""
    check_odd_prime(p)
    below_x = X_DEG - RDegree(1, 0)
    below_y = y_degree(p) - RDegree(1, 0)
    return e1_dims("CP", p, below_x) == 0 and e1_dims("CP", p, below_y) == 0


def euler_class(p: int):
    """Expand x (x + b) ... (x + (p-1) b) over F_p; returns {(x_exp, b_exp): coeff}."""
    check_odd_prime(p)
    poly = {(0, 0): 1}
    for i in range(p):
        nxt = {}
        for (a, c), v in poly.items():
            nxt[(a + 1, c)] = (nxt.get((a + 1, c), 0) + v) % p
            if i:
                nxt[(a, c + 1)] = (nxt.get((a, c + 1), 0) + v * i) % p
        poly = {key: v for key, v in nxt.items() if v}
    return poly


def format_polynomial(poly, p: int) -> str:
    out = []
    for (a, c), v in sorted(poly.items(), key=lambda kv: (-kv[0][0], kv[0][1])):
        sign = "-" if v > p // 2 else "+"
        mag = p - v if sign == "-" else v
        factors = []
        if c:
            factors.append("b" if c == 1 else f"b^{c}")
        if a:
            factors.append("x" if a == 1 else f"x^{a}")
        if mag != 1 or not factors:
            factors.insert(0, str(mag))
        body = " ".join(factors)
        if not out:
            out.append(body if sign == "+" else "-" + body)
        else:
            out.append(f"{sign} {body}")
    return " ".join(out) or "0"


def _lens_free_generators(p, j_max):
    omega = RDegree(-1, -(p - 1))
    for j in range(j_max + 1):
        yj = y_degree(p).scale(j)
        yield yj
        yield yj + omega


def _lens_hm_generators(p, j_max):
    nu = RDegree(1, -1)
    for j in range(j_max + 1):
        yj = y_degree(p).scale(j)
        for i in range(1, p):
            base = yj + X_DEG.scale(i - 1)
            yield base + X_DEG
            yield base + nu


def target_dims(space: str, p: int, d) -> int:
    """Dimension of the known answer in degree d.

    CP: free over HZ/p on x^i y^j, i < p.  Lens: free on y^j and y^j omega,
    plus an HM copy on y^j x^(i-1) pi for pi in {x, nu}, 1 <= i <= p-1.
    """
    check_odd_prime(p)
    d = RDegree(*d)
    j_max = cells_needed("CP", p, d) // p + 1
    if space == "CP":
        gens = [y_degree(p).scale(j) + X_DEG.scale(i) for j in range(j_max + 1) for i in range(p)]
        return sum(dims("HZp", d - g, p) for g in gens)
    if space == "Lens":
        free = sum(dims("HZp", d - g, p) for g in _lens_free_generators(p, j_max))
        hm = sum(dims("HM", d - g, p) for g in _lens_hm_generators(p, j_max))
        return free + hm
    raise ValueError(f"unknown space {space!r}")


def z_top_degree(p: int) -> RDegree:
    """Degree of z x^(p-1), z being the odd lens cell one below the unit."""
    return RDegree(-1, 0) + X_DEG.scale(p - 1)


class AuditReport(NamedTuple):
    ok: bool
    deficits: dict  # (k, l) -> e1 - target, nonzero entries only
    pairs: list  # (k, l, count): count differentials from (k, l) to (k-1, l)
    problems: list


def _solve_line(values):
    """Nonnegative a_0..a_n with values[i] = a_i + a_{i+1}; a_0 and a_n leave the window.

    a_i = (+/-) a_0 + const, so the feasible a_0 form an interval.
    """
    n = len(values)
    consts, signs = [0], [1]
    for v in values:
        consts.append(v - consts[-1])
        signs.append(-signs[-1])
    lo, hi = 0, None
    for c, s in zip(consts, signs):
        if s > 0:
            lo = max(lo, -c)
        else:
            hi = c if hi is None else min(hi, c)
    if hi is not None and lo > hi:
        return None
    a0 = lo
    return [c + s * a0 for c, s in zip(consts, signs)][: n + 1]


def lens_differential_audit(p: int, window=(-8, 8, -8, 8)) -> AuditReport:
    kmin, kmax, lmin, lmax = window
    deficits, pairs, problems = {}, [], []
    for l in range(lmin, lmax + 1):
        line = []
        for k in range(kmin, kmax + 1):
            diff = e1_dims("Lens", p, (k, l)) - target_dims("Lens", p, (k, l))
            if diff < 0:
                problems.append(f"negative deficit {diff} at {RDegree(k, l)}")
            if diff:
                deficits[(k, l)] = diff
            line.append(diff)
        sol = _solve_line(line)
        if sol is None:
            problems.append(f"no differential pairing on line l={l}")
            continue
        # sol[i] counts differentials from kmin+i to kmin+i-1
        for i, a in enumerate(sol):
            if a:
                pairs.append((kmin + i, l, a))
    zt = z_top_degree(p)
    if kmin <= zt.k <= kmax and lmin <= zt.l <= lmax and deficits.get((zt.k, zt.l), 0):
        problems.append(f"z x^{p - 1} at {zt} has nonzero deficit")
    return AuditReport(not problems, deficits, pairs, problems)
