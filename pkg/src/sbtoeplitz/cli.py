"""``sbt``: sequences, identity checks and criterion sweeps from the shell.

    sbt <space> <action> [flags]      spaces: fock, hermite, twisted, group
    sbt verify <check|all> [flags]

Exit codes: 0 success, 1 verification failure (or a quadrature that could
not reach its tolerance), 2 usage or parse error, 3 divergence guard.
Verdicts in computed sequences are data and never change the exit code.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import compact_group as cg
from . import fock, hermite_bergman as hb, suite, twisted as tw
from .core import SpaceParams, make_report, parse_symbol
from .errors import (AccuracyError, ConstraintError, DivergenceError, RangeError,
                     SBTError, SymbolParseError)

log = logging.getLogger("sbtoeplitz.cli")

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DIVERGENCE = 0, 1, 2, 3

SEQUENCE_HEADER = ["k", "value_re", "value_im", "abs"]
GROUP_HEADER = ["lambda", "value", "bound_ratio"]
VERIFY_HEADER = ["check", "pass", "tolerance", "metric", "value"]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# output


def _num(x):
    """Plain JSON-able scalars (numpy scalars and complex included)."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, complex) or isinstance(x, np.complexfloating):
        x = complex(x)
        return float(x.real) if x.imag == 0 else {"re": x.real, "im": x.imag}
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, dict):
        return {str(k): _num(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_num(v) for v in x]
    return x


def _dumps(obj) -> str:
    return json.dumps(_num(obj), sort_keys=True, indent=2, allow_nan=True) + "\n"


def _sequence_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SEQUENCE_HEADER)
    for k, v in report.entries:
        v = complex(v)
        w.writerow([_fmt_k(k), repr(v.real), repr(v.imag), repr(abs(v))])
    return buf.getvalue()


def _fmt_k(k):
    k = float(k)
    return str(int(k)) if k.is_integer() else repr(k)


def _report_json(report, params) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "params": params,
        "entries": [[_fmt_k(k), complex(v)] for k, v in report.entries],
        "verdict": report.verdict,
        "sup_abs": report.sup_abs,
        "tail_ratio": report.tail_ratio,
        "tail_power": report.tail_power,
    }


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _summary(line: str, args):
    # keep stdout clean when it carries the data
    stream = sys.stdout if args.out else sys.stderr
    print(line, file=stream)


def _seq_summary(report) -> str:
    ratio = report.tail_ratio
    rtxt = f"{ratio:.4g}" if math.isfinite(ratio) else "nan"
    return f"verdict={report.verdict} ratio≈{rtxt} sup={report.sup_abs:.6g} n_entries={len(report.entries)}"


def _write_sequence(report, params, args):
    if args.format == "json":
        _emit(_dumps(_report_json(report, params)), args.out)
    else:
        _emit(_sequence_csv(report), args.out)
    _summary(_seq_summary(report), args)
    return EXIT_OK


def _write_record(record: dict, args, summary: str):
    record = {"schema_version": SCHEMA_VERSION, **record}
    _emit(_dumps(record), args.out)
    _summary(summary, args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# helpers


def _symbol(text):
    try:
        return parse_symbol(text)
    except SymbolParseError as exc:
        raise UsageError(f"bad --symbol {text!r}: {exc}") from exc


def _params(args) -> SpaceParams:
    return SpaceParams(args.n, args.t)


def _pool_map(fn, items, threads):
    """Ordered map; ``threads = 0`` means one worker per CPU (executor default)."""
    items = list(items)
    if threads == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads or None) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# fock


def cmd_fock_radial_seq(args):
    g = _symbol(args.symbol)
    fn = fock.radial_seq_direct if args.route == "direct" else fock.radial_seq_heatflow
    rep = fn(g, args.n, args.kmax)
    return _write_sequence(rep, {"n": args.n, "symbol": args.symbol, "kmax": args.kmax,
                                 "route": args.route}, args)


def cmd_fock_multiplier(args):
    g = _symbol(args.symbol)
    xi = np.linspace(-args.xi_max, args.xi_max, args.points)
    r = fock.heat_bergman_multiplier(g, args.t, xi)
    rows = [[float(x[0]), complex(v)] for x, v in zip(r.xi, r.convolution)]
    return _write_record({"action": "fock multiplier",
                          "params": {"t": args.t, "symbol": args.symbol},
                          "xi_values": rows, "route_discrepancy": r.discrepancy},
                         args, f"route_discrepancy={r.discrepancy:.3g}")


def cmd_fock_cor23(args):
    g = _symbol(args.symbol)
    res = fock.cor23_check(g, args.n, args.kmax)
    return _write_record({"action": "fock cor23",
                          "params": {"n": args.n, "symbol": args.symbol, "kmax": args.kmax},
                          "premise_holds": res.premise_holds,
                          "decay_constant": res.decay_constant,
                          "verdict": res.report.verdict, "consistent": res.consistent},
                         args, f"premise={res.premise_holds} verdict={res.report.verdict}")


def cmd_fock_laguerre_exponent(args):
    slope, ks, vals = fock.laguerre_l1_exponent(args.beta, args.n, (args.kmin, args.kmax))
    return _write_record({"action": "fock laguerre-exponent",
                          "params": {"beta": args.beta, "n": args.n,
                                     "k_range": [args.kmin, args.kmax]},
                          "slope": slope, "expected": 0.5 - args.beta / 2,
                          "ks": ks, "integrals": vals},
                         args, f"slope={slope:.4f} expected={0.5 - args.beta / 2:.4f}")


# ---------------------------------------------------------------------------
# hermite


def cmd_hermite_example36(args):
    ex = hb.example36(args.alpha, args.t)
    return _write_record({"action": "hermite example36",
                          "params": {"alpha": args.alpha, "t": args.t},
                          "beta": ex.beta, "lambda": ex.lam, "ratio": ex.ratio,
                          "verdict": ex.verdict, "sign_test": ex.sign_test},
                         args, f"verdict={ex.verdict} ratio={complex(ex.ratio).real:.6g}")


def cmd_hermite_multiplier(args):
    h = _symbol(args.symbol)
    hm = hb.multiplier_from_h(h, _params(args), args.kmax)
    return _write_sequence(hm.report, {"n": args.n, "t": args.t, "symbol": args.symbol,
                                       "kmax": args.kmax}, args)


def cmd_hermite_berezin(args):
    g = _symbol(args.symbol)
    r = hb.berezin(g, _params(args), complex(args.re, args.im))
    return _write_record({"action": "hermite berezin",
                          "params": {"t": args.t, "symbol": args.symbol, "z": [args.re, args.im]},
                          "quadrature": r.quadrature, "heatflow": r.heatflow,
                          "rel_err": r.rel_err}, args, f"rel_err={r.rel_err:.3g}")


# ---------------------------------------------------------------------------
# twisted


def cmd_twisted_diag_seq(args):
    g = _symbol(args.symbol)
    rep = tw.diag_seq(g, _params(args), args.kmax)
    return _write_sequence(rep, {"n": args.n, "t": args.t, "symbol": args.symbol,
                                 "kmax": args.kmax}, args)


def cmd_twisted_identity37(args):
    r = tw.verify_identity_37(_params(args), args.kmax)
    return _write_record({"action": "twisted identity37",
                          "params": {"n": args.n, "t": args.t, "kmax": args.kmax},
                          "kappa": r.kappa.kappa, "max_rel_err": r.max_rel_err},
                         args, f"kappa={r.kappa.kappa:.12g} max_rel_err={r.max_rel_err:.3g}")


def cmd_twisted_lemma43(args):
    r = tw.verify_lemma_43(_params(args), args.k, args.x, args.u)
    return _write_record({"action": "twisted lemma43",
                          "params": {"t": args.t, "k": args.k, "x": args.x, "u": args.u},
                          "lhs": r.lhs, "rhs": r.rhs, "rel_err": r.rel_err},
                         args, f"rel_err={r.rel_err:.3g}")


# ---------------------------------------------------------------------------
# group


def _group_model(args):
    return cg.RankOneModel(args.rho, args.step, args.t)


def _group_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(GROUP_HEADER)
    for lam, val, ratio in rows:
        w.writerow([repr(float(lam)), repr(float(val)), repr(float(ratio))])
    return buf.getvalue()


def _write_group(rows, params, args, summary):
    if args.format == "json":
        _emit(_dumps({"schema_version": SCHEMA_VERSION, "params": params,
                      "rows": [list(r) for r in rows]}), args.out)
    else:
        _emit(_group_csv(rows), args.out)
    _summary(summary, args)
    return EXIT_OK


def cmd_group_criterion(args):
    g = _symbol(args.symbol)
    model = _group_model(args)
    lams = model.lattice(args.count)
    vals = _pool_map(lambda lam: cg.criterion_integral(g, model, float(lam)), lams, args.threads)
    rows = [(lam, v, abs(v) / (lam + model.rho)) for lam, v in zip(lams, vals)]
    rep = make_report(lams, [r[2] for r in rows])
    return _write_group(rows, {"symbol": args.symbol, "rho": args.rho, "step": args.step,
                               "t": args.t, "count": args.count}, args, _seq_summary(rep))


def cmd_group_multiplier(args):
    h = _symbol(args.symbol)
    model = _group_model(args)
    lams = model.lattice(args.count)
    vals = _pool_map(lambda lam: cg.multiplier_a(h, model, float(lam)), lams, args.threads)
    # a(lambda) against the Gaussian envelope e^{2t(lambda+rho)^2}
    rows = [(lam, v, v * math.exp(-2 * model.t * (lam + model.rho) ** 2)) for lam, v in zip(lams, vals)]
    return _write_group(rows, {"symbol": args.symbol, "rho": args.rho, "step": args.step,
                               "t": args.t, "count": args.count}, args,
                        f"a(0)={vals[0]:.6g} a(max)={vals[-1]:.6g}")


def cmd_group_defining(args):
    model = _group_model(args)
    lams = np.arange(1, args.count + 1) * args.step
    d = cg.defining_relation(model, lams)
    rows = [(lam, r, r / d.constant) for lam, r in zip(d.lambdas, d.ratios)]
    return _write_group(rows, {"rho": args.rho, "step": args.step, "t": args.t,
                               "count": args.count}, args, f"spread={d.spread:.3g}")


# ---------------------------------------------------------------------------
# verify


def _flatten(prefix, x):
    x = _num(x)
    if isinstance(x, dict):
        for k in sorted(x):
            yield from _flatten(f"{prefix}.{k}" if prefix else k, x[k])
    elif isinstance(x, list):
        for i, v in enumerate(x):
            yield from _flatten(f"{prefix}[{i}]", v)
    else:
        yield prefix, x


def _verify_csv(results) -> str:
    """One row per measured scalar; nested values get dotted metric names."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(VERIFY_HEADER)
    for r in results:
        for metric, v in _flatten("", r.measured):
            w.writerow([r.check, "true" if r.passed else "false", repr(r.tolerance), metric,
                        repr(v) if isinstance(v, float) else v])
    return buf.getvalue()


def cmd_verify(args):
    if args.check == "all":
        names = list(suite.CHECKS)
    else:
        if args.check not in suite.CHECKS:
            raise UsageError(f"unknown check {args.check!r}; choose from all, "
                             + ", ".join(suite.CHECKS))
        names = [args.check]
    if args.only:
        wanted = [s.strip() for s in args.only.split(",") if s.strip()]
        unknown = [s for s in wanted if s not in suite.CHECKS]
        if unknown:
            raise UsageError(f"unknown check(s) in --only: {', '.join(unknown)}")
        names = [n for n in names if n in wanted] if args.check == "all" else \
            [n for n in wanted]
    overrides = {k: getattr(args, k) for k in ("n", "t", "kmax") if getattr(args, k) is not None}

    def one(name):
        return suite.run_check(name, args.tol, **overrides)

    results = _pool_map(one, names, args.threads)
    failed = [r.check for r in results if not r.passed]
    if len(results) == 1:
        record = results[0].as_dict()
    else:
        record = {"checks": [r.as_dict() for r in results], "pass": not failed, "failed": failed}
    record["schema_version"] = SCHEMA_VERSION
    _emit(_verify_csv(results) if args.format == "csv" else _dumps(record), args.out)
    for r in results:
        _summary(f"{'PASS' if r.passed else 'FAIL'} {r.check}", args)
    if failed:
        _summary(f"failed: {', '.join(failed)}", args)
        return EXIT_FAIL
    _summary(f"all {len(results)} check(s) passed", args)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def _common(p, with_format=True):
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads; 0 means one per CPU (default 1)")
    p.add_argument("--config", help="file of 'key = value' lines giving flag defaults")
    p.add_argument("--out", help="write results here instead of stdout")
    if with_format:
        p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--tol", type=float, default=None, help="tolerance override")


def _space(p, t_default=0.25, need_t=True):
    p.add_argument("--n", type=int, default=1)
    if need_t:
        p.add_argument("--t", type=float, default=t_default)


def build_parser():
    parser = argparse.ArgumentParser(prog="sbt", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    spaces = parser.add_subparsers(dest="space", required=True)
    leaves = {}

    def leaf(sub, name, func, help_, **kw):
        p = sub.add_parser(name, help=help_)
        _common(p, **kw)
        p.set_defaults(func=func)
        return p

    # fock
    fk = spaces.add_parser("fock", help="Fock space").add_subparsers(dest="action", required=True)
    p = leaf(fk, "radial-seq", cmd_fock_radial_seq, "eigenvalues of a radial symbol")
    _space(p, 0.0)  # t is not used by the Fock sequences; accepted for uniformity
    p.add_argument("--symbol", required=True)
    p.add_argument("--kmax", type=int, default=40)
    p.add_argument("--route", choices=["direct", "heatflow"], default="direct")
    leaves["fock", "radial-seq"] = p
    p = leaf(fk, "multiplier", cmd_fock_multiplier, "multiplier of a y-only symbol", with_format=False)
    p.add_argument("--t", type=float, default=0.25)
    p.add_argument("--symbol", required=True)
    p.add_argument("--xi-max", type=float, default=2.0)
    p.add_argument("--points", type=int, default=21)
    leaves["fock", "multiplier"] = p
    p = leaf(fk, "cor23", cmd_fock_cor23, "decay premise and sequence verdict", with_format=False)
    _space(p, need_t=False)
    p.add_argument("--symbol", required=True)
    p.add_argument("--kmax", type=int, default=30)
    leaves["fock", "cor23"] = p
    p = leaf(fk, "laguerre-exponent", cmd_fock_laguerre_exponent,
             "growth exponent of Laguerre L1 integrals", with_format=False)
    _space(p, need_t=False)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--kmin", type=int, default=100)
    p.add_argument("--kmax", type=int, default=800)
    leaves["fock", "laguerre-exponent"] = p

    # hermite
    he = spaces.add_parser("hermite", help="Hermite-Bergman space").add_subparsers(
        dest="action", required=True)
    p = leaf(he, "example36", cmd_hermite_example36, "Gaussian example in closed form",
             with_format=False)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--t", type=float, default=0.25)
    leaves["hermite", "example36"] = p
    p = leaf(he, "multiplier", cmd_hermite_multiplier, "m_t(2k+n) from a profile h")
    _space(p)
    p.add_argument("--symbol", required=True)
    p.add_argument("--kmax", type=int, default=30)
    leaves["hermite", "multiplier"] = p
    p = leaf(he, "berezin", cmd_hermite_berezin, "Berezin transform by two routes",
             with_format=False)
    _space(p)
    p.add_argument("--symbol", required=True)
    p.add_argument("--re", type=float, default=0.0)
    p.add_argument("--im", type=float, default=0.0)
    leaves["hermite", "berezin"] = p

    # twisted
    tws = spaces.add_parser("twisted", help="twisted Bergman space").add_subparsers(
        dest="action", required=True)
    p = leaf(tws, "diag-seq", cmd_twisted_diag_seq, "eigenvalues of a (y,v)-radial symbol")
    _space(p)
    p.add_argument("--symbol", required=True)
    p.add_argument("--kmax", type=int, default=30)
    leaves["twisted", "diag-seq"] = p
    p = leaf(tws, "identity37", cmd_twisted_identity37, "heat kernel against phi_k",
             with_format=False)
    _space(p)
    p.add_argument("--kmax", type=int, default=20)
    leaves["twisted", "identity37"] = p
    p = leaf(tws, "lemma43", cmd_twisted_lemma43, "twisted heat flow of phi_k(i.)",
             with_format=False)
    p.add_argument("--t", type=float, default=0.25)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--x", type=float, default=0.0)
    p.add_argument("--u", type=float, default=0.0)
    leaves["twisted", "lemma43"] = p

    # group
    gr = spaces.add_parser("group", help="rank-one compact group model").add_subparsers(
        dest="action", required=True)
    for name, func, sym, help_ in (
            ("criterion", cmd_group_criterion, True, "Gaussian boundedness criterion over lambda"),
            ("multiplier", cmd_group_multiplier, True, "a(lambda) for a biinvariant h"),
            ("defining", cmd_group_defining, False, "heat-kernel defining relation")):
        p = leaf(gr, name, func, help_)
        p.add_argument("--rho", type=float, default=1.0)
        p.add_argument("--step", type=float, default=1.0)
        p.add_argument("--t", type=float, default=0.25)
        p.add_argument("--count", type=int, default=16)
        if sym:
            p.add_argument("--symbol", required=True)
        leaves["group", name] = p

    # verify
    vp = spaces.add_parser("verify", help="identity checks")
    vp.add_argument("check", help="check name or 'all'")
    vp.add_argument("--only", help="comma-separated subset of checks")
    vp.add_argument("--n", type=int, default=None)
    vp.add_argument("--t", type=float, default=None)
    vp.add_argument("--kmax", type=int, default=None)
    _common(vp)
    vp.set_defaults(func=cmd_verify, format="json")
    leaves["verify", None] = vp
    return parser, leaves


def _read_config(path):
    out = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path!r}: {exc}") from exc
    for i, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if not eq or not key:
            raise UsageError(f"{path}:{i}: expected 'key = value', got {raw!r}")
        out.append((key.replace("_", "-"), val))
    return out


def _apply_config(argv, leaves):
    """Insert config values as flags right after the subcommand so explicit flags win."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    pos = [a for a in argv if not a.startswith("-")]
    if len(pos) < 2:
        return argv
    key = (pos[0], None) if pos[0] == "verify" else (pos[0], pos[1])
    p = leaves.get(key)
    if p is None:
        return argv
    flags = p._option_string_actions
    extra = []
    for k, v in _read_config(known.config):
        opt = f"--{k}"
        if opt not in flags or opt == "--config":
            log.warning("config key %r is not a flag of this command; ignored", k)
            continue
        extra += [opt, v]
    cut = argv.index(pos[1]) + 1
    return argv[:cut] + extra + argv[cut:]


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, leaves = build_parser()
    try:
        argv = _apply_config(argv, leaves)
    except UsageError as exc:
        print(f"sbt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.threads < 0:
        print("sbt: error: --threads must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, SymbolParseError, ConstraintError, RangeError, ValueError) as exc:
        print(f"sbt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DivergenceError as exc:
        print(f"sbt: divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGENCE
    except AccuracyError as exc:
        print(f"sbt: accuracy: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except SBTError as exc:
        print(f"sbt: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
