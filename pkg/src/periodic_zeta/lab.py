"""Comparison experiments: conjugation invariance and multiplicity-one checks.

Every verdict is one of ``consistent``, ``violated`` or ``inconclusive``.
No finite window can establish agreement for all but finitely many lengths,
so the multiplicity-one corollary is only ever tested on what a finite
census can see.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field

from .errors import PeriodicZetaError, QMismatchError
from .graph import Edge, VoltageGraph, adjacency_matrix, validate
from .group_ring import GroupRingElement, GroupRingMatrix, GroupSpec
from .oracle import LengthSpectrum, census
from .zeta import log_zeta_from_matrix, log_zeta_series


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    VIOLATED = "violated"
    INCONCLUSIVE = "inconclusive"

    @property
    def exit_code(self) -> int:
        return {"consistent": 0, "violated": 1, "inconclusive": 2}[self.value]


def combine(verdicts) -> Verdict:
    verdicts = list(verdicts)
    if Verdict.VIOLATED in verdicts:
        return Verdict.VIOLATED
    if Verdict.INCONCLUSIVE in verdicts:
        return Verdict.INCONCLUSIVE
    return Verdict.CONSISTENT


@dataclass(frozen=True)
class MonomialMatrix:
    """P with P[i, perm[i]] = scales[i] and zeros elsewhere."""

    perm: tuple
    scales: tuple

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")
        if len(self.scales) != len(self.perm):
            raise ValueError("one scale per row is required")

    @classmethod
    def identity(cls, group: GroupSpec, n: int) -> "MonomialMatrix":
        return cls(tuple(range(n)), tuple(group.identity() for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def to_matrix(self, group: GroupSpec) -> GroupRingMatrix:
        zero = GroupRingElement.zero(group)
        rows = [[zero] * self.n for _ in range(self.n)]
        for i, (j, g) in enumerate(zip(self.perm, self.scales)):
            rows[i][j] = GroupRingElement.monomial(g)
        return GroupRingMatrix(group, rows)

    def inverse_matrix(self, group: GroupSpec) -> GroupRingMatrix:
        return self.to_matrix(group).star_transpose()


def random_monomial(group: GroupSpec, n: int, rng: random.Random, spread: int = 3) -> MonomialMatrix:
    perm = list(range(n))
    rng.shuffle(perm)
    scales = []
    for _ in range(n):
        free = [rng.randint(-spread, spread) for _ in range(group.free_rank)]
        tors = [rng.randrange(m) for m in group.torsion]
        scales.append(group.element(free, tors))
    return MonomialMatrix(tuple(perm), tuple(scales))


def conjugate_presentation(g: VoltageGraph, p: MonomialMatrix) -> VoltageGraph:
    """Re-present g so that its adjacency matrix becomes P A P^-1.

    New vertex i is old vertex perm[i] with its orbit representative moved
    by scales[i].
    """
    if p.n != g.n:
        raise ValueError("monomial matrix size does not match the graph")
    where = {old: new for new, old in enumerate(p.perm)}
    edges = []
    for e in g.edges:
        i, j = where[e.tail], where[e.head]
        edges.append(Edge(i, j, p.scales[i] + e.voltage - p.scales[j]))
    names = tuple(g.vertex_names[old] for old in p.perm)
    out = VoltageGraph(g.group, names, tuple(edges), g.q, name=f"{g.name or 'graph'}^P")
    report = validate(out)
    if not report.ok:
        raise PeriodicZetaError(f"conjugation broke validity: {report.failures()}")
    expected = p.to_matrix(g.group) @ adjacency_matrix(g) @ p.inverse_matrix(g.group)
    if adjacency_matrix(out) != expected:
        raise PeriodicZetaError("re-presented graph does not realise P A P^-1")
    return out


def random_elementary(group: GroupSpec, n: int, rng: random.Random, spread: int = 2):
    """A random elementary matrix I + c E_ij over the group ring and its inverse."""
    if n < 2:
        raise ValueError("elementary matrices need n >= 2")
    i, j = rng.sample(range(n), 2)
    c = GroupRingElement.zero(group)
    for _ in range(rng.randint(1, 3)):
        free = [rng.randint(-spread, spread) for _ in range(group.free_rank)]
        tors = [rng.randrange(m) for m in group.torsion]
        c = c + GroupRingElement.monomial(group.element(free, tors), rng.choice([-2, -1, 1, 2]))
    eye = GroupRingMatrix.identity(group, n)
    zero = GroupRingElement.zero(group)
    e_ij = GroupRingMatrix(group, [[c if (a, b) == (i, j) else zero for b in range(n)] for a in range(n)])
    return eye + e_ij, eye + e_ij.scale(-1)


def matrix_conjugation_series_equal(g: VoltageGraph, P, P_inv, order: int) -> bool:
    """Exact log-zeta series of A and P A P^-1, for P not realisable as a graph."""
    A = adjacency_matrix(g)
    B = P @ A @ P_inv
    return log_zeta_from_matrix(A, g.q, order) == log_zeta_from_matrix(B, g.q, order)


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    pl1: int
    pl2: int
    l1: int
    l2: int

    @property
    def agree(self) -> bool:
        return self.pl1 == self.pl2 and self.l1 == self.l2


@dataclass(frozen=True)
class ComparisonReport:
    kind: str
    graphs: tuple
    max_length: int
    rows: tuple
    verdicts: dict
    vertex_counts: tuple = ()
    series_equal: bool = None
    first_disagreement: int = None
    notes: tuple = field(default=())

    @property
    def overall(self) -> Verdict:
        return combine(self.verdicts.values())

    @property
    def pl_agree(self) -> bool:
        return all(r.pl1 == r.pl2 for r in self.rows)


def _rows(s1: LengthSpectrum, s2: LengthSpectrum, N: int) -> tuple:
    return tuple(
        ComparisonRow(n, s1.pl.get(n, 0), s2.pl.get(n, 0), s1.l.get(n, 0), s2.l.get(n, 0))
        for n in range(1, N + 1)
    )


def check_conjugation_invariance(
    g: VoltageGraph, p: MonomialMatrix, N: int = 10, spectrum: LengthSpectrum = None
) -> ComparisonReport:
    """Series to order N and census to length N agree between g and its conjugate."""
    h = conjugate_presentation(g, p)
    s1 = spectrum if spectrum is not None and spectrum.max_length >= N else census(g, N, orientation=False)
    s2 = census(h, N, orientation=False)
    series_equal = log_zeta_series(g, N) == log_zeta_series(h, N)
    rows = _rows(s1, s2, N)
    same = series_equal and all(r.agree for r in rows)
    first = next((r.n for r in rows if not r.agree), None)
    return ComparisonReport(
        kind="conjugation",
        graphs=(str(g), str(h)),
        max_length=N,
        rows=rows,
        verdicts={"conjugation-invariance": Verdict.CONSISTENT if same else Verdict.VIOLATED},
        vertex_counts=(g.n, h.n),
        series_equal=series_equal,
        first_disagreement=first,
    )


def compare_spectra(
    g1: VoltageGraph,
    g2: VoltageGraph,
    N: int = 15,
    window: int = 10,
    spectra: tuple = None,
) -> ComparisonReport:
    """Tabulate PL/L agreement up to N and apply the vertex-count corollary.

    With full agreement through N >= window, unequal quotient sizes are
    reported as a violation of the corollary.  A finite disagreement is
    consistent with multiplicity one (which then predicts infinitely many
    disagreements, not observable here).  Agreement below the window is
    inconclusive.
    """
    if g1.q != g2.q:
        raise QMismatchError(f"cannot compare q = {g1.q} with q = {g2.q}")
    if spectra is None:
        spectra = (census(g1, N, orientation=False), census(g2, N, orientation=False))
    rows = _rows(spectra[0], spectra[1], N)
    first = next((r.n for r in rows if r.pl1 != r.pl2), None)
    notes = []
    if first is not None:
        mult_one = Verdict.CONSISTENT
        corollary = Verdict.CONSISTENT
        notes.append(f"primitive spectra first differ at n = {first}")
    elif N < window:
        mult_one = corollary = Verdict.INCONCLUSIVE
        notes.append(f"agreement through {N} is below the confidence window {window}")
    else:
        mult_one = Verdict.CONSISTENT
        corollary = Verdict.CONSISTENT if g1.n == g2.n else Verdict.VIOLATED
        notes.append(f"primitive spectra agree through n = {N}; agreement beyond is not observable")
    return ComparisonReport(
        kind="comparison",
        graphs=(str(g1), str(g2)),
        max_length=N,
        rows=rows,
        verdicts={"multiplicity-one": mult_one, "vertex-count-corollary": corollary},
        vertex_counts=(g1.n, g2.n),
        first_disagreement=first,
        notes=tuple(notes),
    )

