"""Command-line front end.

Every subcommand wraps one module operation and renders its result as
JSON (schema-versioned), CSV or an ASCII chart.  Exit code 1 means a
verification failed, 2 means bad arguments or a violated precision bound.
"""

from __future__ import annotations

import argparse
import csv
import difflib
import io
import json
import os
import sys
from pathlib import Path

from . import basis, flagss, grading, homalg, hopf, mackey, tate
from .fplin import check_odd_prime

SCHEMA_VERSION = 1
FORMATS = ("json", "csv", "ascii")
DEFAULTS = {"p": 3, "prec": 12, "n_max": 2, "window": "-6:6", "format": "ascii"}
CONFIG_ENV = "STEENCALC_CONFIG"
COEFF_MODULES = grading.MODULES + ("CechH2",)


class UsageError(Exception):
    """Bad arguments or configuration; exit code 2."""


# parsing helpers ---------------------------------------------------------


def parse_range(text: str):
    lo, sep, hi = text.partition(":")
    if not sep:
        raise UsageError(f"expected lo:hi, got {text!r}")
    try:
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(f"expected integers in {text!r}") from None
    if lo > hi:
        raise UsageError(f"empty range {text!r}")
    return lo, hi


def parse_window(text: str):
    """'kmin:kmax[,lmin:lmax]'; the l-range defaults to the k-range."""
    parts = text.split(",")
    if len(parts) > 2:
        raise UsageError(f"bad window {text!r}")
    kmin, kmax = parse_range(parts[0])
    lmin, lmax = parse_range(parts[1]) if len(parts) == 2 else (kmin, kmax)
    return kmin, kmax, lmin, lmax


def parse_degree(text: str):
    try:
        k, l = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected k,l got {text!r}") from None
    return grading.RDegree(k, l)


def load_config(path):
    """Read 'key = value' lines; unknown keys and bad precision are errors."""
    cfg = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or key not in DEFAULTS:
            raise UsageError(f"{path}:{lineno}: unknown setting {raw.strip()!r}")
        if key in ("p", "prec", "n_max"):
            try:
                value = int(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: {key} must be an integer") from None
        elif key == "window":
            parse_window(value)
        elif key == "format" and value not in FORMATS:
            raise UsageError(f"{path}:{lineno}: format must be one of {FORMATS}")
        cfg[key] = value
    merged = {**DEFAULTS, **cfg}
    try:
        tate.check_precision(merged["p"], merged["prec"], merged["n_max"])
    except (tate.PrecisionError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    return cfg


# rendering ---------------------------------------------------------------


def ascii_chart(table, window):
    """Rows l from top to bottom, columns k; zeros shown as '.'."""
    kmin, kmax, lmin, lmax = window
    values = {(r["k"], r["l"]): r["dim"] for r in table}
    width = max([len(str(v)) for v in values.values()] + [len(str(kmin)), len(str(kmax))]) + 1
    lw = max(len(str(lmin)), len(str(lmax))) + 3
    lines = [" " * lw + "".join(str(k).rjust(width) for k in range(kmin, kmax + 1))]
    for l in range(lmax, lmin - 1, -1):
        cells = []
        for k in range(kmin, kmax + 1):
            v = values.get((k, l), 0)
            cells.append((str(v) if v else ".").rjust(width))
        lines.append(f"l={l}".rjust(lw) + "".join(cells))
    return "\n".join(lines)


def _records_text(records):
    if not records:
        return "(none)"
    keys = list(records[0])
    widths = {k: max(len(k), *(len(str(r[k])) for r in records)) for k in keys}
    lines = ["  ".join(k.ljust(widths[k]) for k in keys).rstrip()]
    for r in records:
        lines.append("  ".join(str(r[k]).ljust(widths[k]) for k in keys).rstrip())
    return "\n".join(lines)


def _csv_text(rows, keys):
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def render(fmt, command, params, payload):
    """payload keys: table, window, records (name -> list), value, text, summary."""
    if fmt == "json":
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "params": params}
        for key in ("summary", "value", "text", "table"):
            if key in payload:
                doc[key] = payload[key]
        for name, rows in payload.get("records", {}).items():
            doc[name] = rows
        return json.dumps(doc, indent=2, ensure_ascii=False)
    sections = []
    if "value" in payload:
        sections.append(str(payload["value"]) if fmt == "ascii" else f"value\n{payload['value']}")
    if "text" in payload:
        sections.append(payload["text"])
    if "table" in payload:
        if fmt == "ascii":
            sections.append(ascii_chart(payload["table"], payload["window"]))
        else:
            sections.append(_csv_text(payload["table"], ["k", "l", "dim"]))
    for name, rows in payload.get("records", {}).items():
        if fmt == "ascii":
            sections.append(f"[{name}]\n" + _records_text(rows))
        elif rows:
            sections.append(_csv_text(rows, list(rows[0])))
    if fmt == "ascii" and "summary" in payload:
        sections.append(" ".join(f"{k}={v}" for k, v in payload["summary"].items()))
    return "\n\n".join(sections)


def _table(window, fn):
    kmin, kmax, lmin, lmax = window
    return [
        {"k": k, "l": l, "dim": fn(grading.RDegree(k, l))}
        for l in range(lmin, lmax + 1)
        for k in range(kmin, kmax + 1)
    ]


# subcommands -------------------------------------------------------------
# each returns (params, payload, ok)


def cmd_coeff(a):
    if a.module == "CechH2":
        fn = lambda d: grading.cech_h2_dims(a.p, d)  # noqa: E731
    else:
        fn = lambda d: grading.dims(a.module, d, a.p)  # noqa: E731
    params = {"module": a.module, "p": a.p}
    if a.at:
        d = parse_degree(a.at)
        params["at"] = [d.k, d.l]
        return params, {"value": fn(d)}, True
    params["window"] = list(a.window)
    return params, {"table": _table(a.window, fn), "window": a.window}, True


def cmd_tor(a):
    if a.length < 0:
        raise UsageError("length must be >= 0")
    rows = [{"i": i, "free": f, "fixed": x} for i, (f, x) in enumerate(homalg.tor_mackey(a.p, a.length))]
    text = ",".join(f"({r['free']},{r['fixed']})" for r in rows)
    return {"p": a.p, "length": a.length}, {"text": text, "records": {"tor": rows}}, True


def _identify(p, m):
    for name in ("zero", "constant", "coconstant", "Q", "Phi") + tuple(
        f"{kind}({i})" for kind in ("underlineL", "L") for i in range(1, p + 1)
    ):
        cand = mackey.standard(p, name)
        if cand.dims == m.dims and mackey.is_isomorphic(cand, m):
            return name
    return ""


def cmd_box(a):
    try:
        left, right = mackey.standard(a.p, a.left), mackey.standard(a.p, a.right)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    m = mackey.box(left, right)
    row = {"left": a.left, "right": a.right, "free": m.dims[0], "fixed": m.dims[1], "iso": _identify(a.p, m)}
    return {"p": a.p, "left": a.left, "right": a.right}, {"records": {"box": [row]}}, True


def cmd_tor_b(a):
    lo, hi = parse_range(a.degrees)
    table = homalg.tor_B(a.p, a.i_max, (lo, hi))
    rows = [{"i": i, "s": s, "dim": d} for i in sorted(table) for s, d in sorted(table[i].items())]
    return {"p": a.p, "i_max": a.i_max, "degrees": [lo, hi]}, {"records": {"tor_b": rows}}, True


def cmd_geom_smash(a):
    ok, rows = homalg.b_inverted_consistency(a.p, a.n_max)
    recs = [{"n": n, "smash": s, "geometric": g, "mackey_e2": e} for n, s, g, e in rows]
    return {"p": a.p, "n_max": a.n_max}, {"records": {"dims": recs}, "summary": {"consistent": ok}}, ok


def _check_prec(a):
    try:
        tate.check_precision(a.p, a.prec, a.n_max)
    except tate.PrecisionError as exc:
        raise UsageError(str(exc)) from None


def cmd_element(a):
    _check_prec(a)
    try:
        x = tate.element(a.name, a.p, a.prec, a.n_max)
        deg = tate.element_degree(a.name, a.p)
    except tate.PrecisionError as exc:
        raise UsageError(str(exc)) from None
    params = {"name": a.name, "p": a.p, "prec": a.prec, "n_max": a.n_max}
    return params, {"text": tate.serialize(x), "summary": {"degree": str(deg), "terms": len(x.terms)}}, True


def _results(rows):
    return [r.as_dict() for r in rows]


def cmd_verify_relations(a):
    _check_prec(a)
    res = tate.verify_relations(a.p, a.prec, a.n_max, mutate=a.mutate)
    ok = all(r.ok for r in res)
    params = {"p": a.p, "prec": a.prec, "n_max": a.n_max, "mutate": a.mutate}
    summary = {"passed": sum(r.ok for r in res), "total": len(res), "ok": ok}
    return params, {"records": {"relations": _results(res)}, "summary": summary}, ok


def cmd_coproduct(a):
    _check_prec(a)
    params = {"p": a.p, "prec": a.prec, "n_max": a.n_max}
    if a.name:
        params["name"] = a.name
        try:
            x = hopf.milnor_generator(a.name, a.p, a.prec)
        except ValueError:
            x = tate.element(a.name, a.p, a.prec, a.n_max)
        t = hopf.reduced_coproduct(x) if a.reduced else hopf.coproduct(x)
        params["reduced"] = a.reduced
        return params, {"text": t.text(), "summary": {"terms": len(t.terms)}}, True
    res = hopf.verify_equivariant_coproducts(a.p, a.prec, a.n_max, variant=a.variant)
    res += hopf.verify_coassoc(a.p, a.prec, ["xi_2", "tau_1"])
    ok = all(r.ok for r in res)
    params["variant"] = a.variant
    summary = {"passed": sum(r.ok for r in res), "total": len(res), "ok": ok}
    return params, {"records": {"checks": _results(res)}, "summary": summary}, ok


def cmd_verify_coaction(a):
    _check_prec(a)
    res = hopf.verify_milnor_coaction(a.p, a.prec, a.n_max, a.space)
    ok = all(r.ok for r in res)
    params = {"space": a.space, "p": a.p, "prec": a.prec, "n_max": a.n_max}
    summary = {"passed": sum(r.ok for r in res), "total": len(res), "ok": ok}
    return params, {"records": {"checks": _results(res)}, "summary": summary}, ok


def cmd_basis(a):
    gens = basis.enumerate_basis(a.p, a.window)
    dimtab = basis.a_star_dims(a.p, a.window, gens)
    table = [{"k": k, "l": l, "dim": dimtab[(k, l)]} for (k, l) in sorted(dimtab, key=lambda kl: (kl[1], kl[0]))]
    listing = []
    for g in gens:
        d = basis.degree_of_index(g)
        listing.append({"k": d.k, "l": d.l, "kind": g.kind, "generator": g.label()})
    listing.sort(key=lambda r: (r["l"], r["k"], r["kind"], r["generator"]))
    params = {"p": a.p, "window": list(a.window)}
    return params, {"table": table, "window": a.window, "records": {"generators": listing}}, True


def cmd_flag_ss(a):
    table = _table(a.window, lambda d: flagss.e1_dims(a.space, a.p, d))
    target = _table(a.window, lambda d: flagss.target_dims(a.space, a.p, d))
    matches = table == target
    summary = {"e1_equals_target": matches}
    ok = True
    if a.space == "CP":
        summary["collapse"] = flagss.collapse_check(a.p)
        ok = matches and summary["collapse"]
    params = {"space": a.space, "p": a.p, "window": list(a.window)}
    return params, {"table": table, "window": a.window, "summary": summary}, ok


def cmd_audit_lens(a):
    rep = flagss.lens_differential_audit(a.p, a.window)
    deficits = [{"k": k, "l": l, "deficit": v} for (k, l), v in sorted(rep.deficits.items(), key=lambda kv: (kv[0][1], kv[0][0]))]
    pairs = [{"from_k": k, "to_k": k - 1, "l": l, "count": c} for k, l, c in rep.pairs]
    problems = [{"problem": s} for s in rep.problems]
    zt = flagss.z_top_degree(a.p)
    summary = {"ok": rep.ok, "z_top_degree": str(zt), "z_top_deficit": rep.deficits.get((zt.k, zt.l), 0)}
    payload = {"records": {"deficits": deficits, "pairs": pairs, "problems": problems}, "summary": summary}
    return {"p": a.p, "window": list(a.window)}, payload, rep.ok


def cmd_euler(a):
    poly = flagss.euler_class(a.p)
    text = flagss.format_polynomial(poly, a.p)
    expected = {(a.p, 0): 1, (1, a.p - 1): a.p - 1}
    return {"p": a.p}, {"text": text, "summary": {"matches_identity": poly == expected}}, poly == expected


COMMANDS = {
    "coeff": cmd_coeff,
    "tor": cmd_tor,
    "box": cmd_box,
    "tor-b": cmd_tor_b,
    "geom-smash": cmd_geom_smash,
    "element": cmd_element,
    "verify-relations": cmd_verify_relations,
    "coproduct": cmd_coproduct,
    "verify-coaction": cmd_verify_coaction,
    "basis": cmd_basis,
    "flag-ss": cmd_flag_ss,
    "audit-lens": cmd_audit_lens,
    "euler": cmd_euler,
}


# argument parser -----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, help="odd prime (default 3)")
    common.add_argument("--format", choices=FORMATS)
    common.add_argument("--config", help=f"key = value settings file (fallback ${CONFIG_ENV})")
    common.add_argument("--golden", help="compare output with this file")
    common.add_argument("--regen", action="store_true", help="rewrite the --golden file")
    prec = _Parser(add_help=False)
    prec.add_argument("--prec", type=int, help="b-adic precision (default 12)")
    prec.add_argument("--n-max", type=int, dest="n_max", help="largest generator index (default 2)")
    win = _Parser(add_help=False)
    win.add_argument("--window", help="kmin:kmax[,lmin:lmax]")

    parser = _Parser(prog="steencalc", description="Z/p-equivariant dual Steenrod algebra calculator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("coeff", parents=[common, win], help="coefficient dimensions")
    s.add_argument("--module", required=True, choices=COEFF_MODULES)
    s.add_argument("--at", help="single degree k,l")
    s = sub.add_parser("tor", parents=[common], help="Tor of Q with itself over Mackey functors")
    s.add_argument("--length", type=int, default=5)
    s = sub.add_parser("box", parents=[common], help="box product of standard Mackey functors")
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)
    s = sub.add_parser("tor-b", parents=[common], help="Tor over B of J with itself")
    s.add_argument("--i-max", type=int, default=6, dest="i_max")
    s.add_argument("--degrees", default="0:10")
    s = sub.add_parser("geom-smash", parents=[common], help="b-inverted dimension comparison")
    s.add_argument("--n-max", type=int, default=6, dest="n_max")
    s = sub.add_parser("element", parents=[common, prec], help="expand a named element")
    s.add_argument("--name", required=True)
    s = sub.add_parser("verify-relations", parents=[common, prec], help="check the relation suite")
    s.add_argument("--mutate", choices=["xi_hat_rho"])
    s = sub.add_parser("coproduct", parents=[common, prec], help="coproducts and their checks")
    s.add_argument("--name", help="xi_n, tau_n or an element name; omit to run the checks")
    s.add_argument("--reduced", action="store_true")
    s.add_argument("--variant", choices=["verified", "uncorrected"], default="verified")
    s = sub.add_parser("verify-coaction", parents=[common, prec], help="replay the Borel coaction")
    s.add_argument("--space", choices=["CP", "Lens"], default="CP")
    sub.add_parser("basis", parents=[common, win], help="A_star dimension table and generators")
    s = sub.add_parser("flag-ss", parents=[common, win], help="flag spectral sequence E1 vs target")
    s.add_argument("--space", choices=flagss.SPACES, default="CP")
    sub.add_parser("audit-lens", parents=[common, win], help="lens differential audit")
    sub.add_parser("euler", parents=[common], help="expand the Euler class product")
    return parser


def _resolve(args):
    path = args.config or os.environ.get(CONFIG_ENV)
    cfg = {**DEFAULTS, **(load_config(path) if path else {})}
    args.p = args.p if args.p is not None else cfg["p"]
    args.format = args.format or cfg["format"]
    if hasattr(args, "prec"):
        args.prec = args.prec if args.prec is not None else cfg["prec"]
    if hasattr(args, "n_max") and args.n_max is None:
        args.n_max = cfg["n_max"]
    if hasattr(args, "window"):
        args.window = parse_window(args.window or cfg["window"])
    try:
        check_odd_prime(args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.regen and not args.golden:
        raise UsageError("--regen needs --golden")
    return args


_VALUE_FLAGS = ("--window", "--at", "--degrees")


def _join_values(argv):
    """Attach values such as '-6:6' to their flag so argparse does not read them as options."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None, stdout=None, stderr=None):
    """Run one command; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = _join_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = _resolve(build_parser().parse_args(argv))
        params, payload, ok = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    out = render(args.format, args.command, params, payload) + "\n"
    if args.golden:
        path = Path(args.golden)
        if args.regen:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(out)
        elif not path.exists():
            print(f"error: golden file {path} missing (use --regen)", file=stderr)
            return 2
        elif path.read_text() != out:
            diff = difflib.unified_diff(path.read_text().splitlines(), out.splitlines(), str(path), "output", lineterm="")
            print("\n".join(diff), file=stderr)
            return 1
    stdout.write(out)
    return 0 if ok else 1


def main(argv=None):
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
