"""Command-line front end.

Tables go to stdout (CSV or JSON), human-readable reports to stderr.
Exit codes: 0 pass, 1 violation, 2 inconclusive or non-converged, 3 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import random
import sys
from fractions import Fraction

from . import __version__
from .errors import (
    ConvergenceError,
    DomainError,
    GraphFormatError,
    IntegralityError,
    QMismatchError,
    StabilizerViolationError,
    ValidationError,
)
from .graph import load_graph, require_valid, validate
from .lab import (
    Verdict,
    check_conjugation_invariance,
    combine,
    compare_spectra,
    random_monomial,
)
from .oracle import DEFAULT_MAX_LENGTH, census
from .zeta import (
    DEFAULT_ORDER,
    DEFAULT_QUAD_CAP,
    DEFAULT_TOL,
    functional_equation_residual,
    log_zeta_series,
    omega_q_contains,
    pl_from_series,
)

PASS, VIOLATION, INCONCLUSIVE, INPUT_ERROR = 0, 1, 2, 3
DEFAULT_U = (2.0, 3.0, 5.0, -2.0)

log = logging.getLogger("periodic_zeta")


class _Out:
    def __init__(self, args, stdout, stderr):
        self.args = args
        self.stdout = stdout
        self.stderr = stderr

    def config(self) -> dict:
        skip = {"func"}
        cfg = {k: v for k, v in sorted(vars(self.args).items()) if k not in skip}
        return {"tool": "periodic-zeta", "version": __version__, **cfg}

    def table(self, columns, rows, extra=None):
        if self.args.format == "json":
            doc = {"config": self.config()}
            doc.update(extra or {})
            doc["rows"] = [dict(zip(columns, r)) for r in rows]
            self.stdout.write(json.dumps(doc, indent=2, default=str) + "\n")
            return
        buf = io.StringIO()
        for k, v in self.config().items():
            buf.write(f"# {k}={v}\n")
        for k, v in (extra or {}).items():
            buf.write(f"# {k}={json.dumps(v, default=str)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        w.writerows(rows)
        self.stdout.write(buf.getvalue())

    def report(self, line: str):
        self.stderr.write(line + "\n")


def _frac(c) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def cmd_validate(args, out: _Out) -> int:
    g = load_graph(args.path)
    rep = validate(g)
    rows = [(c.name, "pass" if c.passed else "fail", c.witness) for c in rep.checks]
    out.table(["check", "result", "witness"], rows)
    for c in rep.checks:
        out.report(f"{c.name:22s} {'pass' if c.passed else 'FAIL'} {c.witness}".rstrip())
    return PASS if rep.ok else VIOLATION


def cmd_spectrum(args, out: _Out) -> int:
    g = require_valid(load_graph(args.path))
    N = args.max_length
    pl_oracle = l_oracle = pl_zeta = None
    if args.method in ("oracle", "both"):
        spec = census(g, N)
        pl_oracle, l_oracle = spec.pl, spec.l
    if args.method in ("zeta", "both"):
        pl_zeta = pl_from_series(log_zeta_series(g, N))
    pl = pl_oracle if pl_oracle is not None else pl_zeta
    if l_oracle is None:
        l_oracle = {n: sum(pl[d] for d in range(1, n + 1) if n % d == 0) for n in range(1, N + 1)}
    rows = [(n, pl[n], l_oracle[n]) for n in range(1, N + 1)]
    out.table(["n", "PL", "L"], rows)
    if args.method == "both" and pl_oracle != pl_zeta:
        bad = [n for n in range(1, N + 1) if pl_oracle[n] != pl_zeta[n]]
        out.report(f"MISMATCH between oracle and zeta series at n = {bad}")
        for n in bad:
            out.report(f"  n={n}: oracle {pl_oracle[n]}, series {pl_zeta[n]}")
        return VIOLATION
    out.report(f"{g}: spectrum through n = {N} by {args.method}" + (" (methods agree)" if args.method == "both" else ""))
    return PASS


def cmd_zeta(args, out: _Out) -> int:
    g = require_valid(load_graph(args.path))
    s = log_zeta_series(g, args.order)
    counts = s.rooted_counts()
    pl = pl_from_series(s)
    rows = [(m, _frac(s.log_coeffs[m]), counts[m], pl[m]) for m in range(1, args.order + 1)]
    out.table(["m", "log_zeta_coeff", "N_m", "PL"], rows)
    out.report(f"{g}: log-zeta series through u^{args.order}")
    return PASS


def cmd_xi_check(args, out: _Out) -> int:
    g = require_valid(load_graph(args.path))
    if not args.u:
        args.u = list(DEFAULT_U)
    us = args.u
    for u in us:
        if not omega_q_contains(u, g.q):
            out.report(f"u = {u} rejected: not in Omega_{g.q}")
            return INPUT_ERROR
        if abs(u) <= 1:
            out.report(f"u = {u} rejected: xi checks need real |u| > 1")
            return INPUT_ERROR
    rows = []
    worst = 0.0
    for u in us:
        chk = functional_equation_residual(g, u, args.quad_tol, args.quad_cap)
        dual = 1 / (g.q * u)
        rows.append((u, repr(chk.xi_u.real), dual, repr(chk.xi_dual.real), f"{chk.residual:.3e}",
                     "pass" if chk.residual < args.tol else "fail"))
        worst = max(worst, chk.residual)
        out.report(f"u={u}: xi(u)={chk.xi_u.real:.12g} xi(1/(qu))={chk.xi_dual.real:.12g} residual={chk.residual:.3e}")
    out.table(["u", "xi_u", "dual_u", "xi_dual", "residual", "result"], rows)
    return PASS if worst < args.tol else VIOLATION


def _write_report(out: _Out, rep, label=None):
    rows = [(r.n, r.pl1, r.pl2, r.l1, r.l2, "yes" if r.agree else "no") for r in rep.rows]
    extra = {
        "graphs": list(rep.graphs),
        "vertex_counts": list(rep.vertex_counts),
        "verdicts": {k: v.value for k, v in rep.verdicts.items()},
    }
    if rep.series_equal is not None:
        extra["series_equal"] = rep.series_equal
    if label:
        extra["trial"] = label
    out.table(["n", "PL_1", "PL_2", "L_1", "L_2", "agree"], rows, extra)


def cmd_compare(args, out: _Out) -> int:
    g1 = require_valid(load_graph(args.path_a))
    g2 = require_valid(load_graph(args.path_b))
    rep = compare_spectra(g1, g2, args.max_length, args.window)
    _write_report(out, rep)
    for k, v in rep.verdicts.items():
        out.report(f"{k}: {v.value}")
    for note in rep.notes:
        out.report(note)
    return rep.overall.exit_code


def cmd_conjugate(args, out: _Out) -> int:
    g = require_valid(load_graph(args.path))
    rng = random.Random(args.seed)
    base = census(g, args.max_length, orientation=False)
    verdicts = []
    rows = []
    for trial in range(args.count):
        p = random_monomial(g.group, g.n, rng)
        rep = check_conjugation_invariance(g, p, args.max_length, spectrum=base)
        v = rep.verdicts["conjugation-invariance"]
        verdicts.append(v)
        desc = f"perm={list(p.perm)} scales={[str(x) for x in p.scales]}"
        rows.append((trial, desc, rep.series_equal, rep.first_disagreement or "", v.value))
        if v is not Verdict.CONSISTENT:
            out.report(f"trial {trial}: {v.value} ({desc})")
    out.table(["trial", "monomial", "series_equal", "first_disagreement", "verdict"], rows)
    overall = combine(verdicts)
    out.report(f"{g}: {args.count} random monomial conjugations, {overall.value}")
    return overall.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv", help="stdout format (default csv)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="periodic-zeta", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check the standing hypotheses")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("spectrum", parents=[common], help="primitive and full length spectra")
    s.add_argument("path")
    s.add_argument("--max-length", type=int, default=DEFAULT_MAX_LENGTH)
    s.add_argument("--method", choices=["oracle", "zeta", "both"], default="both")
    s.set_defaults(func=cmd_spectrum)

    s = sub.add_parser("zeta", parents=[common], help="exact log-zeta series, N_m and PL")
    s.add_argument("path")
    s.add_argument("--order", type=int, default=DEFAULT_ORDER)
    s.set_defaults(func=cmd_zeta)

    s = sub.add_parser("xi-check", parents=[common], help="functional-equation residuals")
    s.add_argument("path")
    s.add_argument("--u", type=float, action="append", help="real point with |u| > 1 (repeatable)")
    s.add_argument("--tol", type=float, default=1e-6, help="pass threshold on the relative residual")
    s.add_argument("--quad-tol", type=float, default=DEFAULT_TOL)
    s.add_argument("--quad-cap", type=int, default=DEFAULT_QUAD_CAP)
    s.set_defaults(func=cmd_xi_check)

    s = sub.add_parser("compare", parents=[common], help="compare two length spectra")
    s.add_argument("path_a")
    s.add_argument("path_b")
    s.add_argument("--max-length", type=int, default=DEFAULT_MAX_LENGTH)
    s.add_argument("--window", type=int, default=10, help="minimum N for a corollary verdict")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("conjugate", parents=[common], help="random monomial conjugation checks")
    s.add_argument("path")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--count", type=int, default=20)
    s.add_argument("--max-length", type=int, default=10)
    s.set_defaults(func=cmd_conjugate)
    return p


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else PASS
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, stream=stderr)
    out = _Out(args, stdout, stderr)
    try:
        return args.func(args, out)
    except GraphFormatError as exc:
        out.report(f"input error: {exc}")
        return INPUT_ERROR
    except QMismatchError as exc:
        out.report(f"input error: {exc}")
        return INPUT_ERROR
    except ValidationError as exc:
        out.report(f"validation failed: {exc}")
        return VIOLATION
    except StabilizerViolationError as exc:
        out.report(f"stabilizer violation: {exc}")
        return VIOLATION
    except IntegralityError as exc:
        out.report(f"integrality violation: {exc}")
        return VIOLATION
    except ConvergenceError as exc:
        out.report(f"not converged: {exc}")
        return INCONCLUSIVE
    except DomainError as exc:
        out.report(f"input error: {exc}")
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
