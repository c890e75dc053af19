"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` to see the lines inline;
they are also repeated in the terminal summary of any run.
"""

import itertools
import random
import time

from sympy import divisors

from periodic_zeta import corpus
from periodic_zeta.graph import adjacency_matrix
from periodic_zeta.group_ring import GroupRingMatrix, parse_element
from periodic_zeta.lab import Verdict, check_conjugation_invariance, compare_spectra, random_monomial
from periodic_zeta.oracle import census
from periodic_zeta.zeta import (
    euler_characteristic,
    functional_equation_residual,
    log_zeta_series,
    normalized_trace_of_identity,
    pl_from_series,
)


def test_c1_example_matrix_and_euler_characteristic(record_criterion):
    start = time.perf_counter()
    g = corpus.load("example")
    grp = g.group
    P = lambda s: parse_element(s, grp)
    expected = GroupRingMatrix(grp, [[P("t + t^-1"), P("1 + t")], [P("1 + t^-1"), P("t + t^-1")]])
    same = adjacency_matrix(g) == expected
    chi_closed = g.n * (1 - g.q) // 2
    chi_direct = g.n - len(g.edges)
    chi_ok = chi_closed == chi_direct == euler_characteristic(g) == -2 and len(g.edges) == 4
    elapsed = time.perf_counter() - start
    ok = record_criterion(
        "1 example adjacency matrix and chi = -2",
        same and chi_ok and elapsed < 1,
        f"matrix {'exact' if same else 'differs'}, chi {chi_closed}/{chi_direct}, {elapsed:.3f}s",
    )
    assert ok


def test_c2_oracle_equals_series(record_criterion):
    start = time.perf_counter()
    graphs = corpus.load_corpus()
    bad = []
    for name, g in graphs.items():
        oracle = census(g, 12, orientation=False).pl
        series = pl_from_series(log_zeta_series(g, 12))
        bad += [(name, n, oracle[n], series[n]) for n in range(1, 13) if oracle[n] != series[n]]
    elapsed = time.perf_counter() - start
    kinds = {
        "has Z^2 4-regular": any(g.group.free_rank == 2 and g.q == 3 for g in graphs.values()),
        "has Z x Z_m": any(g.group.torsion for g in graphs.values()),
    }
    ok = record_criterion(
        f"2 oracle PL == series PL, n <= 12, {len(graphs)} graphs",
        not bad and elapsed < 60 and len(graphs) >= 5 and all(kinds.values()),
        f"{elapsed:.1f}s, mismatches {bad[:3]}" if bad else f"{elapsed:.1f}s",
    )
    assert ok


def test_c3_functional_equation(record_criterion):
    start = time.perf_counter()
    g = corpus.load("example")
    residuals = {u: functional_equation_residual(g, u).residual for u in (2.0, 3.0, 5.0, -2.0)}
    elapsed = time.perf_counter() - start
    worst = max(residuals.values())
    ok = record_criterion(
        "3 xi(u) = xi(1/(qu)) on example at u in {2, 3, 5, -2}",
        worst < 1e-6 and elapsed < 30,
        f"max residual {worst:.2e}, {elapsed:.1f}s",
    )
    assert ok


def test_c4_divisor_identity(record_criterion, spectra15):
    bad = []
    for name, spec in spectra15.items():
        for n in range(1, 16):
            if spec.l[n] != sum(spec.pl[n // d] for d in divisors(n)):
                bad.append((name, n))
    ok = record_criterion("4 L(n) = sum_{d|n} PL(n/d), n <= 15", not bad, f"failures {bad}" if bad else "")
    assert ok


def test_c5_conjugation_invariance(record_criterion):
    rng = random.Random(20261016)
    failures = []
    trials = 0
    for name, g in corpus.load_corpus().items():
        base = census(g, 10, orientation=False)
        for _ in range(20):
            p = random_monomial(g.group, g.n, rng)
            rep = check_conjugation_invariance(g, p, 10, spectrum=base)
            trials += 1
            if rep.overall is not Verdict.CONSISTENT:
                failures.append((name, p))
    ok = record_criterion(
        "5 monomial conjugation leaves series (<= 10) and spectra (<= 10) unchanged",
        not failures,
        f"{trials} trials, {len(failures)} failures",
    )
    assert ok


def test_c6_multiplicity_one_corollary(record_criterion, graphs, spectra15):
    agreeing = []
    violations = []
    for a, b in itertools.combinations(sorted(graphs), 2):
        ga, gb = graphs[a], graphs[b]
        if ga.q != gb.q:
            continue
        rep = compare_spectra(ga, gb, 15, spectra=(spectra15[a], spectra15[b]))
        if rep.pl_agree:
            agreeing.append((a, b))
            if rep.verdicts["vertex-count-corollary"] is Verdict.VIOLATED:
                violations.append((a, b, ga.n, gb.n))
    ok = record_criterion(
        "6 PL agreement through 15 only between equal |V(B)|",
        not violations,
        f"agreeing pairs {agreeing}" + (f", violations {violations}" if violations else ""),
    )
    assert ok


def test_c7_integrality_and_positivity(record_criterion, graphs, spectra15):
    problems = []
    for name, g in graphs.items():
        s = log_zeta_series(g, 12)
        counts = s.rooted_counts()  # raises unless non-negative integers
        girth = spectra15[name].girth or 13
        problems += [(name, "N", m) for m in range(1, min(girth, 13)) if counts[m] != 0]
        pl = pl_from_series(s)
        problems += [(name, "PL", n) for n, v in pl.items() if not (isinstance(v, int) and v >= 0)]
    ok = record_criterion("7 N_m and PL(n) non-negative integers, N_m = 0 below girth", not problems, str(problems or ""))
    assert ok


def test_c8_tree_degeneracy(record_criterion):
    s = log_zeta_series(corpus.load("path"), 12)
    ok = record_criterion(
        "8 bi-infinite path has Z = 1 through u^12",
        s.zeta_coeffs() == (1,) + (0,) * 12 and all(c == 0 for c in s.log_coeffs),
    )
    assert ok


def test_c9_trace_normalisation(record_criterion, graphs):
    errs = {name: abs(normalized_trace_of_identity(g) - g.n) for name, g in graphs.items()}
    worst = max(errs.values())
    ok = record_criterion("9 averaged tr(I) equals |V(B)|", worst < 1e-12, f"max error {worst:.1e}")
    assert ok
