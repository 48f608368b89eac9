"""The ten acceptance criteria, each printing one PASS/FAIL line.

Run alone with `pytest tests/test_acceptance.py -v -s` or `python tests/test_acceptance.py`.
Caches are cleared before each criterion so timings are cold.
"""

import os
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from steencalc import basis, flagss, grading, homalg, hopf, mackey, tate
from steencalc.grading import RDegree, dims

RESULTS = {}


def _cold():
    for mod in (grading, mackey, homalg, tate, hopf, basis, flagss):
        for obj in vars(mod).values():
            if hasattr(obj, "cache_clear"):
                obj.cache_clear()


def _emit(line):
    sys.__stdout__.write(line + "\n")
    sys.__stdout__.flush()


@contextmanager
def criterion(number, title, limit):
    """Collects named checks; prints one line and fails the test if any check or the time limit fails."""
    _cold()
    checks = {}
    start = time.perf_counter()
    yield checks
    elapsed = time.perf_counter() - start
    failed = [name for name, ok in checks.items() if not ok]
    in_time = limit is None or elapsed < limit
    ok = not failed and in_time and bool(checks)
    limit_text = f" < {limit:g}s" if limit else ""
    status = "PASS" if ok else "FAIL"
    detail = "" if ok else f" failed: {', '.join(failed) or 'time limit'}"
    line = f"criterion {number:2d} {status}  {title}  ({elapsed:.2f}s{limit_text}){detail}"
    RESULTS[number] = line
    _emit(line)
    assert not failed, failed
    assert in_time, f"took {elapsed:.2f}s, limit {limit}s"


def _window(n):
    return [(k, l) for l in range(-n, n + 1) for k in range(-n, n + 1)]


def test_criterion_01_coefficient_oracles():
    with criterion(1, "coefficient oracles", 1.0) as c:
        w = _window(12)
        c["HZp"] = all(dims("HZp", d) == int(0 <= d[0] <= -2 * d[1] or -2 * d[1] <= d[0] <= -2) for d in w)
        c["HQ"] = all(dims("HQ", d) == int(1 <= d[0] <= -2 * d[1] or -2 * d[1] <= d[0] <= -1) for d in w)
        c["HM"] = all(dims("HM", (k, l)) == dims("HQ", (k + 2, l - 1)) for k, l in w)
        c["HT"] = all(dims("HT", (k, l)) == dims("HM", (k, l)) + dims("HM", (k - 1, l)) for k, l in w)
        c["HT on l=0"] = [dims("HT", (k, 0)) for k in (-1, 0, 1)] == [1, 2, 1]
        c["HT elsewhere on l=0"] = all(dims("HT", (k, 0)) == 0 for k in range(-12, 13) if k not in (-1, 0, 1))
        c["Cech = GammaPrime"] = all(grading.cech_h2_dims(3, d) == dims("GammaPrime", d) for d in w)


def test_criterion_02_mackey_tor():
    with criterion(2, "Mackey Tor of Q with itself", 10.0) as c:
        for p in (3, 5):
            res = homalg.build_Q_resolution(p, 7)
            c[f"resolution p={p}"] = res.check_dd() and homalg.resolution_is_exact(res)
            c[f"tor p={p}"] = homalg.tor_mackey(p, 5) == [(1, 1)] + [(0, 1)] * 5


def test_criterion_03_b_module_tor():
    with criterion(3, "B-module Tor and geometric dims", 5.0) as c:
        table = homalg.tor_B(3, 6, (0, 12))
        c["Tor_0 listing"] = [table[0][s] for s in range(8)] == [0, 0, 1, 2, 1, 1, 1, 1] and all(
            table[0][s] == 1 for s in range(4, 13)
        )
        for i in range(1, 7):
            c[f"Tor_{i}"] = {s: d for s, d in table[i].items() if d} == {i + 2: 1, i + 3: 1}
        geo = [homalg.geometric_smash_dims(3, n) for n in range(2, 9)]
        c["geometric dims"] = geo == [1] + [2] * 6


ELEMENT_KINDS = ("xi_u", "xi_hat", "tau_u", "tau_hat", "theta_u", "mu_u")


def test_criterion_04_relation_suite():
    with criterion(4, "relation suite", 60.0) as c:
        for p, prec, n_max in ((3, 12, 2), (5, 6, 1)):
            res = tate.verify_relations(p, prec, n_max)
            c[f"relations p={p}"] = bool(res) and all(r.ok for r in res)
            c[f"xi_hat^2 = 0 p={p}"] = all(r.ok for r in res if r.rid == "xi_hat_sq")
            for kind in ELEMENT_KINDS:
                for n in range(1, n_max + 1):
                    x = tate.element(f"{kind}({n})", p, prec, n_max)
                    c[f"{kind}({n}) homogeneous p={p}"] = x.is_homogeneous()
                    c[f"{kind}({n}) no negative b p={p}"] = x.is_zero() or x.min_b() >= 0
                    if not x.is_zero():
                        c[f"{kind}({n}) degree p={p}"] = x.degree() == tate.element_degree(f"{kind}({n})", p)
        bad = tate.verify_relations(3, 12, 2, mutate="xi_hat_rho")
        c["mutated relation detected"] = any(not r.ok for r in bad)


def test_criterion_05_mu_divisibility():
    with criterion(5, "mu divisibility", 10.0) as c:
        num = tate.mu_numerator(3, 13, 1)
        try:
            q = tate.divide_by_b(num).truncate(12)
            c["numerator divisible by b"] = True
            c["quotient degree 5+4β"] = q.degree() == RDegree(5, 4)
        except tate.NotDivisible:
            c["numerator divisible by b"] = False
        c["element degree 5+4β"] = tate.element_degree("mu_u(1)", 3) == RDegree(5, 4)


def test_criterion_06_coproducts():
    with criterion(6, "coproduct formulas", 120.0) as c:
        res = hopf.verify_equivariant_coproducts(3, 10, 2)
        c["reduced coproducts n<=2 mod b^10"] = len(res) == 10 and all(r.ok for r in res)
        co = hopf.verify_coassoc(3, 10, ["xi_2", "tau_1"])
        c["coassociativity xi_2, tau_1"] = all(r.ok for r in co)
        ctrl = hopf.verify_coassoc(3, 10, ["xi_2"], overrides=hopf.corrupted_xi2_overrides(3, 10))
        c["corrupted psi fails"] = not next(r for r in ctrl if r.rid == "coassoc").ok
        uncorrected = hopf.verify_equivariant_coproducts(3, 10, 2, kinds=["tau_u"], variant="uncorrected")
        c["uncorrected tau formula fails"] = not any(r.ok for r in uncorrected)


def test_criterion_07_coaction():
    with criterion(7, "coaction replay", 60.0) as c:
        for space in ("CP", "Lens"):
            res = hopf.verify_milnor_coaction(3, 12, 2, space)
            c[space] = bool(res) and all(r.ok for r in res)
            if space == "Lens":
                c["lambda(s) checked"] = any(r.rid == "lambda(s)" and r.ok for r in res)


def test_criterion_08_flag_ss():
    with criterion(8, "flag spectral sequence", 5.0) as c:
        cp = [x.degree for x in flagss.flag_cells("CP", 3, 12)]
        c["CP cells"] = cp == [RDegree(-2 * (n // 3), -(n - n // 3)) for n in range(12)] and cp[:6] == [
            RDegree(0, 0), RDegree(0, -1), RDegree(0, -2), RDegree(-2, -2), RDegree(-2, -3), RDegree(-2, -4)
        ]
        lens = [x.degree for x in flagss.flag_cells("Lens", 3, 12)]
        c["Lens cells"] = lens[:4] == [RDegree(0, 0), RDegree(-1, 0), RDegree(0, -1), RDegree(-1, -1)] and all(
            lens[2 * n] == cp[n] and lens[2 * n + 1] == cp[n] - RDegree(1, 0) for n in range(6)
        )
        for p in (3, 5, 7):
            c[f"collapse p={p}"] = flagss.collapse_check(p)
            c[f"euler p={p}"] = flagss.format_polynomial(flagss.euler_class(p), p) == f"x^{p} - b^{p - 1} x"
        c["CP E1 = target"] = all(
            flagss.e1_dims("CP", 3, d) == flagss.target_dims("CP", 3, d) for d in _window(8)
        )
        rep = flagss.lens_differential_audit(3, (-8, 8, -8, 8))
        zt = flagss.z_top_degree(3)
        c["lens pairing"] = rep.ok and bool(rep.pairs)
        c["z x^(p-1) deficit 0"] = rep.deficits.get((zt.k, zt.l), 0) == 0


def test_criterion_09_basis():
    with criterion(9, "basis consistency", 30.0) as c:
        win = (-10, 10, -10, 10)
        for p in (3, 5):
            c[f"HT consistency p={p}"] = basis.ht_consistency(p, (1, 2), win)[0]
        c["HT negative control"] = not basis.ht_consistency(3, (1, 2), win, division=False)[0]
        gens = basis.enumerate_basis(3, win)
        full = basis.a_star_dims(3, win, gens)
        c["order independent"] = basis.a_star_dims(3, win, list(reversed(gens))) == full
        bigger = basis.a_star_dims(3, (-13, 13, -13, 13))
        c["window stable"] = all(bigger[key] == v for key, v in full.items())
        q = basis.quadruplet_degrees(3, 1)
        c["quadruplet degrees"] = sorted(q.values()) == [RDegree(1, 1), RDegree(2, 1), RDegree(2, 1), RDegree(3, 1)]


def _suite_outputs(seed):
    """Concatenated stdout of every golden CLI case in a fresh interpreter."""
    from test_golden import CASES

    script = (
        "import io, sys\n"
        "from steencalc.cli import run\n"
        f"cases = {sorted(CASES.items())!r}\n"
        "for name, argv in cases:\n"
        "    buf = io.StringIO()\n"
        "    code = run(argv, stdout=buf, stderr=sys.stderr)\n"
        "    sys.stdout.write(f'== {name} {code}\\n' + buf.getvalue())\n"
    )
    env = dict(os.environ, PYTHONHASHSEED=seed)
    proc = subprocess.run([sys.executable, "-c", script], capture_output=True, env=env, check=True)
    return proc.stdout


def test_criterion_10_determinism():
    with criterion(10, "determinism", None) as c:
        sys.path.insert(0, str(Path(__file__).parent))
        first, second = _suite_outputs("11"), _suite_outputs("29")
        c["byte-identical runs"] = first == second and len(first) > 1000
        c["matches goldens"] = _matches_goldens(first)


def _matches_goldens(blob):
    gold = Path(__file__).parent / "golden"
    text = blob.decode()
    for chunk in text.split("== ")[1:]:
        header, _, body = chunk.partition("\n")
        name, code = header.split()
        if code != "0" or (gold / name).read_text() != body:
            return False
    return True


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
