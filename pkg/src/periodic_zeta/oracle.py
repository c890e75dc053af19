"""Brute-force census of reduced cycles in the cover, up to translation.

A closed walk in the quotient with total voltage g lifts to a path from x
to g.x, so it closes in the cover exactly when g is the identity.  Classes
of reduced cycles in the cover, up to the group action, are therefore the
identity-voltage cyclically reduced closed walks in the quotient, up to
rotation.  Each class is emitted once, from its lexicographically least
rotation (steps ordered by index).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from sympy import divisors

from .errors import StabilizerViolationError
from .graph import VoltageGraph

log = logging.getLogger(__name__)

DEFAULT_MAX_LENGTH = 15


@dataclass(frozen=True)
class CycleClass:
    """Canonical (least) rotation of a reduced identity-voltage closed walk."""

    steps: tuple
    primitive: bool

    @property
    def length(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class LengthSpectrum:
    """Counts of primitive (``pl``) and all (``l``) reduced cycle classes by length."""

    max_length: int
    pl: dict
    l: dict
    self_reverse: dict = field(default_factory=dict)
    classes: tuple = ()

    @property
    def girth(self):
        for n in range(1, self.max_length + 1):
            if self.l.get(n, 0):
                return n
        return None

    def divisor_identity_failures(self) -> list:
        """Lengths n where L(n) differs from the sum of PL(n/d) over d | n."""
        bad = []
        for n in range(1, self.max_length + 1):
            if self.l.get(n, 0) != sum(self.pl.get(n // d, 0) for d in divisors(n)):
                bad.append(n)
        return bad

    def rows(self):
        for n in range(1, self.max_length + 1):
            yield n, self.pl.get(n, 0), self.l.get(n, 0)


class _VoltageBall:
    """Group elements within ``radius`` step-voltages of the identity, indexed."""

    def __init__(self, group, step_keys, radius):
        ident = group.identity_key
        self.elements = [ident]
        self.index = {ident: 0}
        distinct = sorted(set(step_keys))
        frontier = [0]
        for _ in range(radius):
            nxt = []
            for i in frontier:
                for sk in distinct:
                    k = group.add(self.elements[i], sk)
                    if k not in self.index:
                        self.index[k] = len(self.elements)
                        self.elements.append(k)
                        nxt.append(self.index[k])
            frontier = nxt
        self.shift = [
            [self.index.get(group.add(el, sk), -1) for sk in step_keys]
            for el in self.elements
        ]


def tail_length(seq) -> int:
    """Largest k with seq[-j] the reverse of seq[j - 1] for j = 1..k (0 if none).

    ``seq`` is a sequence of step indices; a closed path has a tail iff this
    is positive.
    """
    m = len(seq)
    k = 0
    while k < m // 2 and seq[m - 1 - k] == seq[k] ^ 1:
        k += 1
    return k


def is_reduced(g: VoltageGraph, seq) -> bool:
    """Closed in the quotient, proper, and tail-less."""
    if not seq:
        return False
    steps = g.steps()
    closed = all(steps[a].head == steps[b].tail for a, b in zip(seq, list(seq[1:]) + [seq[0]]))
    proper = all(b != a ^ 1 for a, b in zip(seq, seq[1:]))
    return closed and proper and tail_length(seq) == 0


def _walk_string(g: VoltageGraph, seq) -> str:
    steps = g.steps()
    parts = []
    for s in seq:
        st = steps[s]
        parts.append(f"{g.vertex_names[st.tail]}->{g.vertex_names[st.head]}[{st.voltage}]")
    return " ".join(parts)


def _census_counts(g: VoltageGraph, N: int, first_steps, keep_classes: bool, orientation: bool):
    steps = g.steps()
    S = len(steps)
    tail = [s.tail for s in steps]
    head = [s.head for s in steps]
    ball = _VoltageBall(g.group, [s.voltage.key for s in steps], N)
    shift = ball.shift
    ID = 0
    follow = [[t for t in range(S) if tail[t] == head[s] and t != s ^ 1] for s in range(S)]

    pl = [0] * (N + 1)
    total = [0] * (N + 1)
    selfrev = [0] * (N + 1)
    kept = []
    violations = []

    for s0 in first_steps:
        base = tail[s0]
        fol = [[t for t in follow[s] if t >= s0] for s in range(S)]
        closable = [s >= s0 and head[s] == base and s != s0 ^ 1 for s in range(S)]
        # ok[m][s]: prefix voltages that m further steps after s can bring home
        ok = [[({ID} if closable[s] else set()) for s in range(S)]]
        for m in range(1, N):
            prev = ok[-1]
            cur = []
            for s in range(S):
                acc = set()
                for t in fol[s]:
                    r = t ^ 1
                    acc.update(x for x in (shift[p][r] for p in prev[t]) if x >= 0)
                cur.append(acc)
            ok.append(cur)
        okany = [ok[0]]
        for m in range(1, N):
            okany.append([okany[-1][s] | ok[m][s] for s in range(S)])

        seq = [s0]
        pref = [shift[ID][s0]]

        def emit(k):
            walk = tuple(seq)
            for i in range(1, k):
                if walk[i] == s0 and walk[i:] + walk[:i] < walk:
                    return
            period = k
            for d in divisors(k):
                if d < k and walk[d:] + walk[:d] == walk:
                    period = d
                    break
            primitive = period == k
            if not primitive and pref[period - 1] != ID:
                if not violations or k < len(violations[0][0]):
                    violations[:] = [(walk, ball.elements[pref[period - 1]])]
                return
            total[k] += 1
            if primitive:
                pl[k] += 1
            if orientation:
                rev = tuple(x ^ 1 for x in reversed(walk))
                if min(rev[i:] + rev[:i] for i in range(k)) == walk:
                    selfrev[k] += 1
            if keep_classes:
                kept.append(CycleClass(walk, primitive))

        def dfs(k, s, p):
            if p == ID and closable[s]:
                emit(k)
            if k == N:
                return
            reach = okany[N - k - 1]
            row = shift[p]
            for t in fol[s]:
                p2 = row[t]
                if p2 >= 0 and p2 in reach[t]:
                    seq.append(t)
                    pref.append(p2)
                    dfs(k + 1, t, p2)
                    seq.pop()
                    pref.pop()

        if pref[0] in okany[N - 1][s0]:
            dfs(1, s0, pref[0])

    if violations:
        walk, block = violations[0]
        period = next(d for d in divisors(len(walk)) if walk[d:] + walk[:d] == walk)
        raise StabilizerViolationError(
            f"closed walk of length {len(walk)} is a {len(walk) // period}-fold repetition of a "
            f"block with voltage {g.group.render_key(block)}: {_walk_string(g, walk)}",
            witness=walk,
            block_voltage=block,
        )
    return pl, total, selfrev, kept


def census(
    g: VoltageGraph,
    N: int = DEFAULT_MAX_LENGTH,
    keep_classes: bool = False,
    orientation: bool = True,
) -> LengthSpectrum:
    """Enumerate reduced cycle classes of length <= N.

    Raises ``StabilizerViolationError`` if some identity-voltage walk is a
    repetition of a block whose own voltage is a non-trivial torsion
    element: its lift is a cycle fixed by that element.
    """
    if N < 1:
        raise ValueError("N must be positive")
    S = 2 * len(g.edges)
    pl, total, selfrev, kept = _census_counts(g, N, range(S), keep_classes, orientation)
    spec = LengthSpectrum(
        max_length=N,
        pl={n: pl[n] for n in range(1, N + 1)},
        l={n: total[n] for n in range(1, N + 1)},
        self_reverse={n: selfrev[n] for n in range(1, N + 1)} if orientation else {},
        classes=tuple(sorted(kept, key=lambda c: (c.length, c.steps))),
    )
    log.debug("census %s N=%d: PL=%s", g, N, spec.pl)
    return spec


def rooted_count(g: VoltageGraph, m: int, spectrum: LengthSpectrum = None) -> int:
    """N_m = sum over d | m of d * PL(d)."""
    if spectrum is None or spectrum.max_length < m:
        spectrum = census(g, m, orientation=False)
    return sum(d * spectrum.pl.get(d, 0) for d in divisors(m))


def count_based_walks(g: VoltageGraph, m: int) -> int:
    """Directly count based, cyclically reduced, identity-voltage closed walks of length m."""
    steps = g.steps()
    grp = g.group
    ident = grp.identity_key
    follow = [[t for t in steps if t.tail == s.head and t.index != s.index ^ 1] for s in steps]
    count = 0
    for s0 in steps:
        states = {(s0.index, s0.voltage.key): 1}
        for _ in range(m - 1):
            nxt = {}
            for (s, key), c in states.items():
                for t in follow[s]:
                    k = (t.index, grp.add(key, t.voltage.key))
                    nxt[k] = nxt.get(k, 0) + c
            states = nxt
        for (s, key), c in states.items():
            if key == ident and steps[s].head == s0.tail and s != s0.index ^ 1:
                count += c
    return count
