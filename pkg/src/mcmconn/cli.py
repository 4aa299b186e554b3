"""Command-line front end: ``mcmconn <group> <command> ...``.

Reports are canonical JSON on stdout (``--pretty`` for a plain-text
table).  Exit codes: 0 for any mathematical answer, including "no
connection"; 1 for usage errors; 2 for malformed input; 3 when a
resource limit is exceeded.
"""
from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

from . import catalog as cat
from . import gradconn, matfac, semigroup, serial
from .wpoly import NotHomogeneous

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2, 3

FAMILIES = {"An3fold": "A", "Dn3fold": "D"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --------------------------------------------------------------------------
# helpers


def _pmap(fn, items, threads: int) -> list:
    """Ordered map, optionally on worker threads; the result order never depends on timing."""
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


def _matrix_text(m) -> list:
    from .wpoly import format_poly
    return [[format_poly(e) for e in r] for r in m]


def _sg(gens) -> semigroup.NumSemigroup:
    return semigroup.NumSemigroup(gens)


def _expected(name: str):
    text = resources.files("mcmconn").joinpath("data", name).read_text(encoding="utf-8")
    return serial.loads(text)


# --------------------------------------------------------------------------
# semigroup


def cmd_semigroup_info(a):
    return semigroup.info(_sg(a.gens))


def _classify_rows(sg):
    return [{"lambda": r.label, "extra": list(r.extra), "connection": r.connection,
             "klinear": r.klinear, "verdict": r.verdict, "canonical": r.canonical}
            for r in semigroup.classify(sg)]


def cmd_semigroup_classify(a):
    sg = _sg(a.gens)
    return {"generators": list(sg.generators), "symmetric": semigroup.is_symmetric(sg),
            "table": _classify_rows(sg)}


def cmd_semigroup_canonical(a):
    sg = _sg(a.gens)
    lam = semigroup.canonical_lambda(sg)
    w = semigroup.decide_connection(sg, lam)
    out = {"generators": list(sg.generators), "lambda": lam.label, "extra": sorted(lam.extra),
           "admits": w.verdict == semigroup.CONNECTION, "gorenstein": semigroup.is_symmetric(sg)}
    if w.verdict == semigroup.CONNECTION:
        out["f"] = {str(mu): serial.format_coeff(c) for mu, c in sorted(w.f_coefficients.items()) if c}
    else:
        c, l, e = w.obstruction
        out["obstruction"] = {"derivation_exponent": c, "basis_exponent": l, "missing_exponent": e}
    return out


# --------------------------------------------------------------------------
# matrix factorizations


def _load_mf(path):
    data = serial.load_file(path)
    return serial.mf_from_json(data.get("mf", data) if isinstance(data, dict) else data)


def cmd_mf_verify(a):
    mf = _load_mf(a.file)
    return {"size": mf.size, "verified": matfac.verify(mf), "reduced": matfac.is_reduced(mf)}


def _mf_transform(fn):
    def run(a):
        mf = fn(_load_mf(a.file))
        return {"size": mf.size, "verified": matfac.verify(mf), "mf": serial.mf_to_json(mf)}
    return run


# --------------------------------------------------------------------------
# connections


def _connection_report(p, g, klinear: bool, integrability: bool, max_unknowns):
    v = gradconn.exists_connection(p, g, check_klinear=klinear, max_unknowns=max_unknowns)
    out = {"verdict": v.kind, "unknowns": v.unknowns, "equations": v.equations}
    if klinear:
        out["klinear"] = v.klinear
    if v.kind == gradconn.CONNECTION:
        out["relation_completeness_assumed"] = v.relation_completeness_assumed
        out["certificates"] = [{"generator": D.name or f"D{s + 1}", "P": _matrix_text(P)}
                               for s, (D, (P, _, _)) in enumerate(zip(g.generators, v.certificates))]
        if integrability:
            try:
                gb = g if g.brackets is not None else gradconn.derive_brackets(g)
            except ValueError as e:
                out["integrable"] = None
                out["integrability_note"] = str(e)
            else:
                rep = gradconn.curvature(p, gb, v.certificates)
                out["integrable"] = rep.integrable
    else:
        out["obstruction"] = v.obstruction_witness
    return out


def cmd_conn_solve(a):
    p, g = serial.connection_problem_from_json(serial.load_file(a.file))
    return _connection_report(p, g, a.klinear, a.integrability, a.max_unknowns)


# --------------------------------------------------------------------------
# catalog


def cmd_catalog_list(a):
    return {"families": [
        {"family": "An3fold", "n": ">= 1", "equation": "x^2 + y^(n+1) + z*w",
         "weights": "(n+1, 2, n+1, n+1)", "lie": ["standard"]},
        {"family": "Dn3fold", "n": ">= 4", "equation": "x^2*y + y^(n-1) + z*w",
         "weights": "(n-2, 2, n-1, n-1)", "lie": list(cat.LIE_VARIANTS)},
        {"family": "ZeroDim", "n": ">= 1", "equation": "x^(n+1)", "weights": "(1)",
         "lie": ["euler"]},
    ]}


def _family(name):
    if name not in FAMILIES and name != "ZeroDim":
        raise cat.CatalogError(f"unknown family {name!r}; choose from An3fold, Dn3fold, ZeroDim")
    return FAMILIES.get(name)


def _check_threefold(kind, n, rec, max_unknowns, variant=None):
    variants = [variant] if variant else (["standard"] if kind == "A" else ["standard", "exceptional"])
    verdict, used = None, None
    for var in variants:
        g = cat.threefold_lie(kind, n, var)
        v = gradconn.exists_connection(rec.presentation, g, max_unknowns=max_unknowns)
        verdict, used = v, var
        if v.kind != gradconn.CONNECTION:
            break
    # verdict is the joint-system answer; klinear is reported separately
    klinear = gradconn.exists_klinear(rec.presentation, g, max_unknowns)
    out = {"module": rec.ident, "verdict": verdict.kind, "klinear": klinear, "variant": used}
    if verdict.kind != gradconn.CONNECTION:
        out["obstruction"] = verdict.obstruction_witness
    if rec.p0:
        g, idx = cat.lie_for_generator_indices(kind, n, rec.p0.keys())
        checked = rec.checked_p0()
        out["p0_printed"] = {str(s): gradconn.fix_P_check(rec.presentation, g.generators[idx[s]], None, P)
                             for s, P in sorted(rec.p0.items())}
        out["p0_sign_corrected"] = {str(s): gradconn.fix_P_check(rec.presentation, g.generators[idx[s]],
                                                                 None, P)
                                    for s, P in sorted(checked.items())}
    return out


def cmd_catalog_check(a):
    kind = _family(a.family)
    if kind is None:
        g, mods = cat.zero_dim_modules(a.n)
        if a.module:
            mods = [m for m in mods if m.name == a.module]
            if not mods:
                raise cat.CatalogError(f"no module {a.module!r}; use x^i with 1 <= i <= {a.n}")
        rows = []
        for m in mods:
            r = _connection_report(m, g, True, True, a.max_unknowns)
            rows.append({"module": m.name, "verdict": r["verdict"], "klinear": r["klinear"],
                         "integrable": r.get("integrable")})
        return {"family": a.family, "n": a.n, "table": rows}
    if a.module:
        recs = [cat.threefold_module(kind, a.n, a.module)]
    else:
        recs = cat.threefold_modules(kind, a.n)
    rows = _pmap(lambda r: _check_threefold(kind, a.n, r, a.max_unknowns, a.variant), recs, a.threads)
    return {"family": a.family, "n": a.n, "table": rows}


def cmd_catalog_export(a):
    kind = _family(a.family)
    if kind is None:
        g, mods = cat.zero_dim_modules(a.n)
        m = next((m for m in mods if m.name == a.module), None)
        if m is None:
            raise cat.CatalogError(f"no module {a.module!r}")
        return serial.connection_problem_to_json(m, g)
    rec = cat.threefold_module(kind, a.n, a.module)
    g = cat.threefold_lie(kind, a.n, a.variant or "standard")
    return serial.connection_problem_to_json(rec.presentation, g)


# --------------------------------------------------------------------------
# reproduction


def an_threefold_rows(max_n: int, threads: int = 1, max_unknowns=None) -> list:
    jobs = [(n, r) for n in range(1, max_n + 1) for r in cat.threefold_modules("A", n)]

    def run(job):
        n, r = job
        row = _check_threefold("A", n, r, max_unknowns)
        return {"n": n, "module": r.ident, "verdict": row["verdict"], "klinear": row["klinear"]}
    return _pmap(run, jobs, threads)


def dn_threefold_rows(max_n: int, threads: int = 1, max_unknowns=None) -> list:
    jobs = [(n, r) for n in range(4, max_n + 1) for r in cat.threefold_modules("D", n)]

    def run(job):
        n, r = job
        row = _check_threefold("D", n, r, max_unknowns)
        return {"n": n, "module": r.ident, "verdict": row["verdict"], "variant": row["variant"]}
    return _pmap(run, jobs, threads)


MONOMIAL_EXAMPLES = ((3, 4, 5), (3, 5, 7), (4, 5, 6, 7))


def monomial_tables() -> list:
    return [{"generators": list(g), "table": _classify_rows(_sg(g))} for g in MONOMIAL_EXAMPLES]


def _compare(rows, expected_rows, key) -> dict:
    exp = [r for r in expected_rows if key(r)]
    return {"expected_rows": len(exp), "matches_expected": rows == exp}


def cmd_repro_an(a):
    rows = an_threefold_rows(a.max_n, a.threads, a.max_unknowns)
    exp = _expected("an_threefold.json")["table"]
    return {"table": rows, **_compare(rows, exp, lambda r: r["n"] <= a.max_n)}


def cmd_repro_dn(a):
    rows = dn_threefold_rows(a.max_n, a.threads, a.max_unknowns)
    exp = _expected("dn_threefold.json")["table"]
    return {"table": rows, **_compare(rows, exp, lambda r: r["n"] <= a.max_n)}


def cmd_repro_monomial(a):
    tables = monomial_tables()
    exp = _expected("monomial_tables.json")["tables"]
    return {"tables": tables, "matches_expected": tables == exp}


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="plain-text table instead of JSON")
    common.add_argument("--threads", type=int, default=1, help="worker threads for independent checks")
    common.add_argument("--max-unknowns", type=int, default=None,
                        help="abort (exit 3) if a linear system needs more unknowns")
    common.add_argument("--timing", action="store_true",
                        help="add wall-clock seconds to the report (breaks byte-identical output)")

    p = _Parser(prog="mcmconn", description="Connections on MCM modules: exact decision procedures.")
    groups = p.add_subparsers(dest="group", required=True)

    def sub(parent, name, fn, help_):
        sp = parent.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    sg = groups.add_parser("semigroup", help="monomial curves k[[Gamma]]").add_subparsers(dest="cmd", required=True)
    for name, fn, h in (("info", cmd_semigroup_info, "gaps, Frobenius number, symmetry"),
                        ("classify", cmd_semigroup_classify, "verdict for every rank-one module"),
                        ("canonical", cmd_semigroup_canonical, "does the canonical module admit a connection")):
        sub(sg, name, fn, h).add_argument("gens", nargs="+", type=int, metavar="GEN")

    mf = groups.add_parser("mf", help="matrix factorizations").add_subparsers(dest="cmd", required=True)
    for name, fn, h in (("verify", cmd_mf_verify, "check phi*psi = psi*phi = f*I"),
                        ("dual", _mf_transform(matfac.dual), "transpose both matrices"),
                        ("syzygy", _mf_transform(matfac.syzygy), "swap phi and psi"),
                        ("knoerrer", _mf_transform(matfac.knoerrer), "lift to f + u*v")):
        sub(mf, name, fn, h).add_argument("file")

    conn = groups.add_parser("conn", help="graded connections").add_subparsers(dest="cmd", required=True)
    sp = sub(conn, "solve", cmd_conn_solve, "decide existence of a connection")
    sp.add_argument("file")
    sp.add_argument("--klinear", action="store_true", help="refine 'none' to 'klinear_only' when possible")
    sp.add_argument("--integrability", action="store_true", help="test the curvature of the certificate")

    c = groups.add_parser("catalog", help="built-in fixtures").add_subparsers(dest="cmd", required=True)
    sub(c, "list", cmd_catalog_list, "list families")
    for name, fn, h in (("check", cmd_catalog_check, "run the solver on catalog modules"),
                        ("export", cmd_catalog_export, "print a fixture as a conn solve input")):
        sp = sub(c, name, fn, h)
        sp.add_argument("family")
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--module", required=(name == "export"))
        sp.add_argument("--variant", choices=cat.LIE_VARIANTS)

    r = groups.add_parser("repro", help="regenerate the reference tables").add_subparsers(dest="cmd", required=True)
    sub(r, "an-threefold", cmd_repro_an, "A_n 3-fold verdicts").add_argument("--max-n", type=int, default=10)
    sub(r, "dn-threefold", cmd_repro_dn, "D_n 3-fold verdicts").add_argument("--max-n", type=int, default=10)
    sub(r, "monomial-tables", cmd_repro_monomial, "monomial curve tables")
    return p


def _pretty(report) -> str:
    lines = []

    def table(rows):
        keys = list(rows[0].keys())
        cells = [[str(r.get(k)) for k in keys] for r in rows]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        lines.append("  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip())
        for c in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(c, widths)).rstrip())

    for k in sorted(report):
        v = report[k]
        if isinstance(v, list) and v and all(isinstance(r, dict) for r in v) and k in ("table",):
            table(v)
        elif k == "tables":
            for t in v:
                lines.append(f"generators {t['generators']}")
                table(t["table"])
        else:
            lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n"


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "threads", 1) < 1:
            raise UsageError("--threads must be >= 1")
        t0 = time.perf_counter()
        report = args.fn(args)
        report = {"command": " ".join(argv), **report}
        if args.timing:
            report["seconds"] = round(time.perf_counter() - t0, 3)
    except UsageError as e:
        err.write(f"{e}\n")
        return EXIT_USAGE
    except cat.CatalogError as e:
        err.write(f"usage error: {e}\n")
        return EXIT_USAGE
    except gradconn.ResourceLimitExceeded as e:
        err.write(f"resource limit: {e}\n")
        return EXIT_LIMIT
    except (serial.SerializationError, semigroup.SemigroupError, matfac.PresentationError,
            NotHomogeneous, gradconn.GradingError) as e:
        err.write(f"malformed input: {e}\n")
        return EXIT_INPUT
    except SystemExit as e:  # --help
        return EXIT_OK if not e.code else EXIT_USAGE
    out.write(_pretty(report) if args.pretty else serial.dumps(report))
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
