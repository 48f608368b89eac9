"""Chain complexes of Mackey functors and of graded B-modules.

The Mackey side builds a projective resolution of Q out of the projectives
L_1 (the constant functor) and the free L_p, boxes it with Q and reads off
Tor.  The B side, B = F_p[t] (x) Lambda[u] with |t| = 2, |u| = 1, resolves
the ideal J = (u, t) by the two-row complex and computes Tor^B(J, J).
"""

from __future__ import annotations

from dataclasses import dataclass

from .fplin import FpMatrix, NoSolution, hstack, kernel_basis, rank, solve
from .grading import dims as coeff_dims
from .mackey import (
    MackeyFunctor,
    MackeyMap,
    box,
    box_map,
    direct_sum,
    is_isomorphic,
    standard,
    subquotient,
)


@dataclass(frozen=True, eq=False)
class MackeyComplex:
    """terms[0] <- terms[1] <- ...; diffs[i] maps terms[i+1] to terms[i].

    augmentation, when present, maps terms[0] onto the resolved functor.
    """

    terms: tuple
    diffs: tuple
    augmentation: MackeyMap | None = None

    def check_dd(self) -> bool:
        maps = ([self.augmentation] if self.augmentation else []) + list(self.diffs)
        for f, g in zip(maps, maps[1:]):
            if not (f @ g).is_zero():
                return False
        return all(m.is_valid() for m in maps)

    def homology(self, i: int) -> MackeyFunctor:
        """H_i with terms[i] the top of its range; the top term has no incoming map."""
        out_map = self.diffs[i - 1] if i > 0 else MackeyMap.zero(self.terms[0], standard(self.terms[0].p, "zero"))
        z_free, z_fixed = kernel_basis(out_map.free), kernel_basis(out_map.fixed)
        if i < len(self.diffs):
            d_in = self.diffs[i]
            b_free, b_fixed = d_in.free, d_in.fixed
        else:
            t = self.terms[i]
            b_free = FpMatrix.zeros(t.p, t.free_dim, 0)
            b_fixed = FpMatrix.zeros(t.p, t.fixed_dim, 0)
        return subquotient(self.terms[i], z_free, z_fixed, b_free, b_fixed, name=f"H_{i}")

    def euler_characteristic(self):
        """Alternating sums (free, fixed) of term dimensions."""
        ef = sum((-1) ** i * t.free_dim for i, t in enumerate(self.terms))
        ex = sum((-1) ** i * t.fixed_dim for i, t in enumerate(self.terms))
        return ef, ex


def _in_span(basis: FpMatrix, v: FpMatrix) -> bool:
    if basis.cols == 0:
        return v.is_zero()
    try:
        solve(basis, v)
    except NoSolution:
        return False
    return True


def projective_cover(target: MackeyFunctor, z_free: FpMatrix, z_fixed: FpMatrix):
    """A map from a sum of L_1's and L_p's onto the sub-functor spanned by (z_free, z_fixed).

    Fixed generators are chosen modulo transfers, free generators modulo
    (gamma - 1) and restrictions of the fixed generators.  Summands are
    ordered L_1's first, then L_p's.
    """
    p = target.p
    ident = FpMatrix.identity(p, target.free_dim)
    # fixed generators
    span = target.tr @ z_free
    fixed_gens = []
    for j in range(z_fixed.cols):
        v = z_fixed.column(j)
        if not _in_span(span, v):
            fixed_gens.append(v)
            span = hstack([span, v])
    # free generators
    span = (target.gamma - ident) @ z_free
    if fixed_gens:
        span = hstack([span] + [target.res @ x for x in fixed_gens])
    free_gens = []
    for j in range(z_free.cols):
        v = z_free.column(j)
        if not _in_span(span, v):
            free_gens.append(v)
            span = hstack([span, v])

    summands, free_cols, fixed_cols = [], [], []
    for x in fixed_gens:
        summands.append(standard(p, "underlineL(1)"))
        free_cols.append(target.res @ x)
        fixed_cols.append(x)
    nil = target.gamma - ident
    for g in free_gens:
        summands.append(standard(p, f"underlineL({p})"))
        # the Jordan basis e_j = (gamma - 1)^(p-1-j) e_{p-1} of L_p
        free_cols.extend((nil ** (p - 1 - j)) @ g for j in range(p))
        fixed_cols.append(target.tr @ g)
    if not summands:
        source = standard(p, "zero")
    elif len(summands) == 1:
        source = summands[0]
    else:
        source = direct_sum(*summands)
    free = hstack(free_cols, p, target.free_dim)
    fixed = hstack(fixed_cols, p, target.fixed_dim)
    cover = MackeyMap(source, target, free, fixed)
    if not cover.is_valid():
        raise ArithmeticError("projective cover is not a Mackey map")
    if rank(free) != rank(z_free) or rank(fixed) != rank(z_fixed):
        raise ArithmeticError("projective cover is not onto the sub-functor")
    return cover


def build_Q_resolution(p: int, length: int) -> MackeyComplex:
    """Projective resolution L_p <- L_1+L_p <- L_1+L_p <- ... of Q with `length` terms.

    Each differential is a projective cover of the previous kernel, so the
    maps come from lifting problems rather than from a transcription.
    """
    if length < 1:
        raise ValueError("length must be at least 1")
    q = standard(p, "Q")
    aug = projective_cover(q, FpMatrix.identity(p, q.free_dim), FpMatrix.identity(p, q.fixed_dim))
    terms = [aug.source]
    diffs = []
    prev = aug
    for _ in range(length - 1):
        kf, kx = kernel_basis(prev.free), kernel_basis(prev.fixed)
        d = projective_cover(prev.source, kf, kx)
        diffs.append(d)
        terms.append(d.source)
        prev = d
    return MackeyComplex(tuple(terms), tuple(diffs), aug)


def resolution_is_exact(res: MackeyComplex) -> bool:
    """Augmentation onto, and kernel = image at every interior spot, both levels."""
    maps = [res.augmentation] + list(res.diffs)
    aug = res.augmentation
    if rank(aug.free) != aug.target.free_dim or rank(aug.fixed) != aug.target.fixed_dim:
        return False
    for out_map, in_map in zip(maps, maps[1:]):
        for level in ("free", "fixed"):
            o, i = getattr(out_map, level), getattr(in_map, level)
            if rank(i) != o.cols - rank(o) or not (o @ i).is_zero():
                return False
    return True


def boxed_with(res: MackeyComplex, n: MackeyFunctor) -> MackeyComplex:
    ident = MackeyMap.identity(n)
    terms = tuple(box(t, n) for t in res.terms)
    diffs = tuple(box_map(d, ident) for d in res.diffs)
    return MackeyComplex(terms, diffs)


def tor_mackey_functors(p: int, n_max: int):
    """Tor_i(Q, Q) as Mackey functors for i = 0..n_max."""
    res = build_Q_resolution(p, n_max + 2)
    boxed = boxed_with(res, standard(p, "Q"))
    return [boxed.homology(i) for i in range(n_max + 1)]


def tor_mackey(p: int, n_max: int):
    """Levelwise dims (free, fixed) of Tor_i(Q, Q) for i = 0..n_max."""
    return [h.dims for h in tor_mackey_functors(p, n_max)]


# graded B-modules --------------------------------------------------------


def _b_dim(s: int, lowest: int) -> int:
    """B and its ideal J are one-dimensional in each degree >= 0 (resp. >= 1)."""
    return 1 if s >= lowest else 0


@dataclass(frozen=True)
class GradedBModule:
    """B itself (lowest=0) or its ideal J = (u, t) (lowest=1).

    Degree s has basis t^(s/2) (s even) or t^((s-1)/2) u (s odd).
    """

    lowest: int

    def dim(self, s: int) -> int:
        return _b_dim(s, self.lowest)

    def act(self, t_exp: int, u_exp: int, s: int):
        """(rows, cols, entry) of multiplication by t^a u^e from degree s."""
        tgt = s + 2 * t_exp + u_exp
        rows, cols = self.dim(tgt), self.dim(s)
        if rows == 0 or cols == 0:
            return (rows, cols, 0)
        coeff = 0 if (u_exp and s % 2) else 1
        return (1, 1, coeff)


B_MODULE = GradedBModule(0)
J_MODULE = GradedBModule(1)


@dataclass(frozen=True)
class FreeBComplex:
    """A complex of free B-modules: gens[i] lists generator degrees of C_i;
    diffs[i] maps C_{i+1} -> C_i as {(target gen, source gen): (coeff, t_exp, u_exp)}."""

    gens: tuple
    diffs: tuple

    def tensor_matrix(self, i: int, module: GradedBModule, s: int, p: int):
        """Matrix of d: (C_{i+1} (x) M)_s -> (C_i (x) M)_s."""
        src, tgt = self.gens[i + 1], self.gens[i]
        col_dims = [module.dim(s - g) for g in src]
        row_dims = [module.dim(s - g) for g in tgt]
        mat = [[0] * sum(col_dims) for _ in range(sum(row_dims))]
        row_off = [sum(row_dims[:a]) for a in range(len(tgt))]
        col_off = [sum(col_dims[:a]) for a in range(len(src))]
        for (a, b), (c, te, ue) in self.diffs[i].items():
            if not col_dims[b] or not row_dims[a]:
                continue
            r, cc, val = module.act(te, ue, s - src[b])
            if r and cc:
                mat[row_off[a]][col_off[b]] = (c * val) % p
        return FpMatrix(p, _as_array(mat, sum(row_dims), sum(col_dims)))

    def homology_dim(self, i: int, module: GradedBModule, s: int, p: int) -> int:
        n = sum(module.dim(s - g) for g in self.gens[i])
        out_rank = rank(self.tensor_matrix(i - 1, module, s, p)) if i > 0 else 0
        in_rank = rank(self.tensor_matrix(i, module, s, p)) if i + 1 < len(self.gens) else 0
        return n - out_rank - in_rank


def _as_array(rows, r, c):
    import numpy as np

    if r == 0 or c == 0:
        return np.zeros((r, c), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def j_resolution(length: int) -> FreeBComplex:
    """C_i = B[i+2] + B[i+1]: top generator -> -u top + t bottom, bottom -> u bottom."""
    gens = tuple((i + 2, i + 1) for i in range(length))
    d = {(0, 0): (-1, 0, 1), (1, 0): (1, 1, 0), (1, 1): (1, 0, 1)}
    return FreeBComplex(gens, tuple(dict(d) for _ in range(length - 1)))


def j_augmentation_ok(res: FreeBComplex, s: int, p: int) -> bool:
    """C_0 -> J (top -> t, bottom -> u) is onto J_s with kernel the image of C_1."""
    row = []
    for g, (te, ue) in zip(res.gens[0], ((1, 0), (0, 1))):
        # generator image is t or u sitting in degree g; B acts on it from degree s - g
        if B_MODULE.dim(s - g):
            mono_deg = s - g
            ok = not (ue and mono_deg % 2)
            row.append(1 if (J_MODULE.dim(s) and ok) else 0)
    aug = FpMatrix(p, _as_array([row], 1, len(row))) if J_MODULE.dim(s) else FpMatrix.zeros(p, 0, len(row))
    d1 = res.tensor_matrix(0, B_MODULE, s, p)
    onto = rank(aug) == J_MODULE.dim(s)
    exact = rank(d1) == aug.cols - rank(aug) and (aug @ d1).is_zero()
    return onto and exact


def tor_B(p: int, i_max: int, degree_window):
    """{i: {s: dim Tor_i^B(J, J)_s}} for i = 0..i_max and s in degree_window (lo, hi)."""
    lo, hi = degree_window
    res = j_resolution(i_max + 2)
    return {
        i: {s: res.homology_dim(i, J_MODULE, s, p) for s in range(lo, hi + 1)}
        for i in range(i_max + 1)
    }


def geometric_smash_dims(p: int, n: int) -> int:
    """Total dimension in degree n of the collapsed Tor^B(J, J) spectral sequence."""
    if n < 0:
        return 0
    table = tor_B(p, max(n, 0), (0, max(n, 0)))
    return sum(table[r].get(n - r, 0) for r in range(n + 1))


# b-inverted consistency --------------------------------------------------


def _deep_line(n: int, depth: int = 0) -> int:
    # far enough down every periodicity line that all dims have stabilized
    return -(abs(n) + depth + 8)


def b_local_dims(module: str, n: int, p: int = 3) -> int:
    """Stable value of dims(module, n + l beta) as l -> -infinity (inverting b)."""
    vals = {coeff_dims(module, (n, _deep_line(n, j)), p) for j in range(3)}
    if len(vals) != 1:
        raise ArithmeticError(f"{module} has not stabilized in degree {n}")
    return vals.pop()


def _phi_level_coefficients(m: MackeyFunctor, r: int, p: int) -> int:
    """b-inverted R-graded coefficient dim in degree r of HM for M a Tor functor."""
    if m.dims == (0, 0):
        return 0
    if is_isomorphic(m, standard(p, "Phi")):
        return b_local_dims("Phi", r, p)
    if is_isomorphic(m, standard(p, "coconstant")):
        # H(co-constant) is the (2 - beta)-fold suspension of HZ/p
        l = _deep_line(r)
        return coeff_dims("HZp", (r - 2, l + 1), p)
    raise ValueError(f"no coefficient oracle for {m!r}")


def mackey_e2_phi_dims(p: int, n: int) -> int:
    """Total E2 dimension in degree n, b inverted, of the Mackey Tor spectral sequence."""
    if n < 0:
        return 0
    tors = tor_mackey_functors(p, n)
    return sum(_phi_level_coefficients(tors[s], n - s, p) for s in range(n + 1))


def b_inverted_consistency(p: int, n_max: int):
    """Compare b-localized HQ smash HQ, the geometric answer and the Mackey E2 term.

    Returns (ok, rows) with rows (n, smash, geometric, e2).  ok requires the
    first two to agree and the E2 excess to be exactly one d2 from degree 2
    to degree 1.
    """
    rows = []
    for n in range(0, n_max + 1):
        rows.append((n, b_local_dims("HQsmashHQ", n, p), geometric_smash_dims(p, n), mackey_e2_phi_dims(p, n)))
    agree = all(s == g for _, s, g, _ in rows)
    excess = {n: e - g for n, _, g, e in rows}
    one_d2 = all(v == (1 if n in (1, 2) else 0) for n, v in excess.items())
    return agree and one_d2, rows
