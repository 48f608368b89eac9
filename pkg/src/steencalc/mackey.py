"""Z/p-Mackey functors over F_p as finite linear-algebra data.

A functor is stored by its free level (an F_p[Z/p]-module given by the
matrix of the generator gamma), its fixed level, restriction
res: fixed -> free and transfer tr: free -> fixed.  Vectors are columns.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass

import numpy as np

from .fplin import (
    FpMatrix,
    NoSolution,
    annihilator,
    block_diag,
    check_odd_prime,
    complement_section,
    hstack,
    kernel_basis,
    kron,
    rank,
    solve,
    vstack,
)


@dataclass(frozen=True, eq=False)
class MackeyFunctor:
    p: int
    gamma: FpMatrix
    res: FpMatrix
    tr: FpMatrix
    name: str = ""

    def __post_init__(self):
        f, g = self.gamma.rows, self.res.cols
        if self.gamma.shape != (f, f) or self.res.shape != (f, g) or self.tr.shape != (g, f):
            raise ValueError(
                f"inconsistent shapes gamma={self.gamma.shape} res={self.res.shape} tr={self.tr.shape}"
            )

    @property
    def free_dim(self) -> int:
        return self.gamma.rows

    @property
    def fixed_dim(self) -> int:
        return self.res.cols

    @property
    def dims(self):
        return (self.free_dim, self.fixed_dim)

    def norm(self) -> FpMatrix:
        return norm_matrix(self.gamma)

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<MackeyFunctor {label}p={self.p} free={self.free_dim} fixed={self.fixed_dim}>"


@dataclass(frozen=True, eq=False)
class MackeyMap:
    source: MackeyFunctor
    target: MackeyFunctor
    free: FpMatrix
    fixed: FpMatrix

    def __post_init__(self):
        if self.free.shape != (self.target.free_dim, self.source.free_dim):
            raise ValueError("free-level matrix has the wrong shape")
        if self.fixed.shape != (self.target.fixed_dim, self.source.fixed_dim):
            raise ValueError("fixed-level matrix has the wrong shape")

    def is_valid(self) -> bool:
        s, t = self.source, self.target
        return (
            self.free @ s.gamma == t.gamma @ self.free
            and self.free @ s.res == t.res @ self.fixed
            and self.fixed @ s.tr == t.tr @ self.free
        )

    def __matmul__(self, other: "MackeyMap") -> "MackeyMap":
        return MackeyMap(other.source, self.target, self.free @ other.free, self.fixed @ other.fixed)

    def is_zero(self) -> bool:
        return self.free.is_zero() and self.fixed.is_zero()

    @classmethod
    def identity(cls, m: MackeyFunctor) -> "MackeyMap":
        return cls(m, m, FpMatrix.identity(m.p, m.free_dim), FpMatrix.identity(m.p, m.fixed_dim))

    @classmethod
    def zero(cls, s: MackeyFunctor, t: MackeyFunctor) -> "MackeyMap":
        return cls(s, t, FpMatrix.zeros(s.p, t.free_dim, s.free_dim), FpMatrix.zeros(s.p, t.fixed_dim, s.fixed_dim))


def norm_matrix(gamma: FpMatrix) -> FpMatrix:
    out = FpMatrix.zeros(gamma.p, gamma.rows, gamma.cols)
    power = FpMatrix.identity(gamma.p, gamma.rows)
    for _ in range(gamma.p):
        out = out + power
        power = power @ gamma
    return out


def jordan_block(p: int, i: int) -> FpMatrix:
    """gamma = 1 + N with N e_j = e_{j-1}; e_0 spans the invariants, e_{i-1} generates."""
    a = np.eye(i, dtype=np.int64)
    for j in range(1, i):
        a[j - 1, j] = 1
    return FpMatrix(p, a)


def check_axioms(m: MackeyFunctor) -> bool:
    p = m.p
    f = m.free_dim
    return (
        m.gamma ** p == FpMatrix.identity(p, f)
        and m.gamma @ m.res == m.res
        and m.tr @ m.gamma == m.tr
        and m.res @ m.tr == m.norm()
    )


def _mk(p, gamma, res, tr, name):
    return MackeyFunctor(p, gamma, res, tr, name)


def _underline(p, gamma, name):
    """The functor V-underline: invariants on the fixed level, res the inclusion."""
    inv = kernel_basis(gamma - FpMatrix.identity(p, gamma.rows))
    tr = solve(inv, norm_matrix(gamma))
    return _mk(p, gamma, inv, tr, name)


_NAME = re.compile(r"^(L|underlineL|tildeL)\((\d+)\)$")


def standard(p: int, name: str) -> MackeyFunctor:
    """Named standard functors: constant, Q, Phi, coconstant, L(i), underlineL(i), tildeL(i)."""
    check_odd_prime(p)
    one = FpMatrix.identity(p, 1)
    zero = FpMatrix.zeros(p, 1, 1)
    if name == "constant":
        return _mk(p, one, one, zero, name)
    if name == "coconstant":
        return _mk(p, one, zero, one, name)
    if name == "Q":
        return _mk(p, one, FpMatrix.zeros(p, 1, 0), FpMatrix.zeros(p, 0, 1), name)
    if name == "Phi":
        return _mk(p, FpMatrix.zeros(p, 0, 0), FpMatrix.zeros(p, 0, 1), FpMatrix.zeros(p, 1, 0), name)
    if name == "zero":
        return _mk(p, FpMatrix.zeros(p, 0, 0), FpMatrix.zeros(p, 0, 0), FpMatrix.zeros(p, 0, 0), name)
    match = _NAME.match(name)
    if match is None:
        raise ValueError(f"unknown Mackey functor {name!r}")
    kind, i = match.group(1), int(match.group(2))
    if not 1 <= i <= p:
        raise ValueError(f"index {i} out of range 1..{p}")
    gamma = jordan_block(p, i)
    if kind == "underlineL" or i == p:
        # on the free module L_p a zero fixed level breaks res tr = norm,
        # so L(p) and tildeL(p) carry the projective structure
        return _underline(p, gamma, name)
    return _mk(p, gamma, FpMatrix.zeros(p, i, 0), FpMatrix.zeros(p, 0, i), name)


def direct_sum(*ms: MackeyFunctor) -> MackeyFunctor:
    p = ms[0].p
    return MackeyFunctor(
        p,
        block_diag([m.gamma for m in ms], p),
        block_diag([m.res for m in ms], p),
        block_diag([m.tr for m in ms], p),
        "+".join(m.name or "?" for m in ms),
    )


# box product ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class _BoxData:
    functor: MackeyFunctor
    proj: FpMatrix  # presentation space V -> fixed level
    section: FpMatrix  # fixed level -> V
    split: int  # V = (fixed (x) fixed) + (free (x) free); split is the first block size


def _box_data(m: MackeyFunctor, n: MackeyFunctor) -> _BoxData:
    if m.p != n.p:
        raise ValueError("box product of functors over different primes")
    p = m.p
    mf, me, nf, ne = m.fixed_dim, m.free_dim, n.fixed_dim, n.free_dim
    gam = kron(m.gamma, n.gamma)
    ff, ee = mf * nf, me * ne
    eye = lambda k: FpMatrix.identity(p, k)  # noqa: E731
    # tr(a) (x) y ~ [a (x) res(y)]
    rel1 = vstack([kron(m.tr, eye(nf)), -kron(eye(me), n.res)], p, me * nf)
    # x (x) tr(b) ~ [res(x) (x) b]
    rel2 = vstack([kron(eye(mf), n.tr), -kron(m.res, eye(ne))], p, mf * ne)
    # gamma-coinvariants on the free part
    coinv = vstack([FpMatrix.zeros(p, ff, ee), eye(ee) - gam], p, ee)
    rels = hstack([rel1, rel2, coinv], p, ff + ee)
    proj = annihilator(rels)
    section = complement_section(proj)
    res_v = hstack([kron(m.res, n.res), norm_matrix(gam)], p, ee)
    if not (res_v @ rels).is_zero():
        raise ArithmeticError("restriction does not descend to the box product")
    res = res_v @ section
    tr = FpMatrix(p, proj.a[:, ff:].copy())
    label = f"({m.name or '?'} box {n.name or '?'})"
    return _BoxData(MackeyFunctor(p, gam, res, tr, label), proj, section, ff)


def box(m: MackeyFunctor, n: MackeyFunctor) -> MackeyFunctor:
    """Box product over the constant Green functor (Frobenius-relation presentation)."""
    return _box_data(m, n).functor


def box_map(f: MackeyMap, g: MackeyMap) -> MackeyMap:
    src = _box_data(f.source, g.source)
    tgt = _box_data(f.target, g.target)
    p = f.free.p
    v_map = block_diag([kron(f.fixed, g.fixed), kron(f.free, g.free)], p)
    fixed = tgt.proj @ v_map @ src.section
    return MackeyMap(src.functor, tgt.functor, kron(f.free, g.free), fixed)


# morphisms and isomorphisms ---------------------------------------------


def _vec_op(a: FpMatrix, b: FpMatrix) -> FpMatrix:
    """Matrix of X -> a X b on row-major vec(X)."""
    return kron(a, b.T)


def hom_basis(m: MackeyFunctor, n: MackeyFunctor):
    """Basis of the F_p-space of Mackey maps m -> n, as MackeyMap instances."""
    p = m.p
    fe, ff = n.free_dim * m.free_dim, n.fixed_dim * m.fixed_dim
    eye = lambda k: FpMatrix.identity(p, k)  # noqa: E731
    # F gm - gn F = 0
    e1 = hstack([_vec_op(eye(n.free_dim), m.gamma) - _vec_op(n.gamma, eye(m.free_dim)),
                 FpMatrix.zeros(p, fe, ff)], p, fe + ff)
    # F resm - resn G = 0
    e2 = hstack([_vec_op(eye(n.free_dim), m.res), -_vec_op(n.res, eye(m.fixed_dim))], p, fe + ff)
    # G trm - trn F = 0
    e3 = hstack([-_vec_op(n.tr, eye(m.free_dim)), _vec_op(eye(n.fixed_dim), m.tr)], p, fe + ff)
    system = vstack([e1, e2, e3], p, fe + ff)
    ker = kernel_basis(system) if system.rows else FpMatrix.identity(p, fe + ff)
    out = []
    for j in range(ker.cols):
        v = ker.a[:, j]
        free = FpMatrix(p, v[:fe].reshape(n.free_dim, m.free_dim))
        fixed = FpMatrix(p, v[fe:].reshape(n.fixed_dim, m.fixed_dim))
        out.append(MackeyMap(m, n, free, fixed))
    return out


def find_isomorphism(m: MackeyFunctor, n: MackeyFunctor, tries: int = 2000, seed: int = 0):
    """An invertible intertwiner m -> n, or None.

    Hom spaces with at most 4096 elements are searched exhaustively;
    larger ones by seeded random combinations.
    """
    if m.p != n.p or m.dims != n.dims:
        return None
    p = m.p
    basis = hom_basis(m, n)
    if not basis:
        if m.dims == (0, 0):
            return MackeyMap.identity(m)
        return None

    def combo(coeffs):
        free = FpMatrix.zeros(p, n.free_dim, m.free_dim)
        fixed = FpMatrix.zeros(p, n.fixed_dim, m.fixed_dim)
        for c, h in zip(coeffs, basis):
            if c:
                free = free + h.free.scale(c)
                fixed = fixed + h.fixed.scale(c)
        return MackeyMap(m, n, free, fixed)

    def invertible(h):
        return rank(h.free) == m.free_dim and rank(h.fixed) == m.fixed_dim

    if p ** len(basis) <= 4096:
        candidates = itertools.product(range(p), repeat=len(basis))
    else:
        rng = random.Random(seed)
        candidates = (tuple(rng.randrange(p) for _ in basis) for _ in range(tries))
    for coeffs in candidates:
        h = combo(coeffs)
        if invertible(h):
            return h
    return None


def is_isomorphic(m: MackeyFunctor, n: MackeyFunctor) -> bool:
    return find_isomorphism(m, n) is not None


# sub-quotients -----------------------------------------------------------


def _induced(op, z_src, sec_src, z_tgt, proj_tgt):
    """Matrix of the operator op induced on sub-quotients Z_src/B_src -> Z_tgt/B_tgt."""
    p = op.p
    if sec_src.cols == 0 or proj_tgt.rows == 0:
        return FpMatrix.zeros(p, proj_tgt.rows, sec_src.cols)
    image = op @ z_src @ sec_src
    coords = solve(z_tgt, image)
    return proj_tgt @ coords


def _level_quotient(p, z, b):
    """(proj, section) for span(z)/span(b) in coordinates of z's columns."""
    if z.cols == 0:
        return FpMatrix.zeros(p, 0, 0), FpMatrix.zeros(p, 0, 0)
    if b.cols:
        coords = solve(z, b)
    else:
        coords = FpMatrix.zeros(p, z.cols, 0)
    proj = annihilator(coords)
    return proj, complement_section(proj) if proj.rows else FpMatrix.zeros(p, z.cols, 0)


def subquotient(m: MackeyFunctor, z_free, z_fixed, b_free, b_fixed, name="") -> MackeyFunctor:
    """The functor Z/B for sub-functors B <= Z <= m given by column bases."""
    p = m.p
    pe, se = _level_quotient(p, z_free, b_free)
    pf, sf = _level_quotient(p, z_fixed, b_fixed)
    gamma = _induced(m.gamma, z_free, se, z_free, pe)
    res = _induced(m.res, z_fixed, sf, z_free, pe)
    tr = _induced(m.tr, z_free, se, z_fixed, pf)
    return MackeyFunctor(p, gamma, res, tr, name)


def kernel_subfunctor(f: MackeyMap):
    return kernel_basis(f.free), kernel_basis(f.fixed)


def image_subfunctor(f: MackeyMap):
    from .fplin import image_basis

    return image_basis(f.free), image_basis(f.fixed)


__all__ = [
    "MackeyFunctor",
    "MackeyMap",
    "NoSolution",
    "box",
    "box_map",
    "check_axioms",
    "direct_sum",
    "find_isomorphism",
    "hom_basis",
    "is_isomorphic",
    "jordan_block",
    "norm_matrix",
    "standard",
    "subquotient",
]
