"""Voltage graphs: finite quotients whose derived cover is a periodic graph."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx

from .errors import GraphFormatError, ValidationError
from .group_ring import (
    GroupElement,
    GroupRingElement,
    GroupRingMatrix,
    GroupSpec,
    subgroup_generated,
)


@dataclass(frozen=True)
class Edge:
    tail: int
    head: int
    voltage: GroupElement

    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class OrientedStep:
    """One traversal direction of a quotient edge.

    Steps are numbered ``2 * edge`` (forward) and ``2 * edge + 1`` (reverse),
    so ``index ^ 1`` is always the reverse step.
    """

    edge: int
    forward: bool
    tail: int
    head: int
    voltage: GroupElement

    @property
    def index(self) -> int:
        return 2 * self.edge + (0 if self.forward else 1)

    def reverse(self) -> "OrientedStep":
        return OrientedStep(self.edge, not self.forward, self.head, self.tail, -self.voltage)


def _canonical_edge(e: Edge) -> Edge:
    if e.tail > e.head:
        return Edge(e.head, e.tail, -e.voltage)
    if e.is_loop():
        inv = -e.voltage
        if inv.key > e.voltage.key:
            return Edge(e.tail, e.head, inv)
    return e


@dataclass(frozen=True)
class VoltageGraph:
    """Quotient graph B with voltages; the cover has vertices B x Gamma.

    Edge ``(i, j, g)`` stands for the orbit of cover edges
    ``{(i, a), (j, a + g)}``.  Edges are stored in a canonical orientation
    and order, so two presentations of the same edge multiset compare equal.
    """

    group: GroupSpec
    vertex_names: tuple
    edges: tuple
    q: int
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertex_names", tuple(self.vertex_names))
        n = len(self.vertex_names)
        edges = []
        for e in self.edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            if not (0 <= e.tail < n and 0 <= e.head < n):
                raise GraphFormatError(f"edge endpoint out of range: {e}")
            if e.voltage.group != self.group:
                raise GraphFormatError(f"voltage {e.voltage} is not in {self.group}")
            edges.append(_canonical_edge(e))
        edges.sort(key=lambda e: (e.tail, e.head, e.voltage.key))
        object.__setattr__(self, "edges", tuple(edges))

    @property
    def n(self) -> int:
        return len(self.vertex_names)

    def steps(self) -> list:
        out = []
        for idx, e in enumerate(self.edges):
            fwd = OrientedStep(idx, True, e.tail, e.head, e.voltage)
            out.extend([fwd, fwd.reverse()])
        return out

    def degree(self, v: int) -> int:
        return sum((e.tail == v) + (e.head == v) for e in self.edges)

    def euler_characteristic(self) -> int:
        return self.n - len(self.edges)

    def __str__(self):
        return self.name or f"VoltageGraph(n={self.n}, q={self.q}, group={self.group})"


# -- validation --------------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    witness: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


def _induced_voltages(g: VoltageGraph) -> dict:
    """Map (i, j) -> list of voltages g with v_i ~ g.v_j in the cover."""
    out = {}
    for e in g.edges:
        out.setdefault((e.tail, e.head), []).append(e.voltage)
        out.setdefault((e.head, e.tail), []).append(-e.voltage)
    return out


def _spanning_tree_potentials(g: VoltageGraph):
    """BFS potentials on B; returns (potential per reached vertex, chord edge indices)."""
    adj = {v: [] for v in range(g.n)}
    for idx, e in enumerate(g.edges):
        adj[e.tail].append((idx, e.head, e.voltage))
        if not e.is_loop():
            adj[e.head].append((idx, e.tail, -e.voltage))
    pot = {0: g.group.identity()} if g.n else {}
    tree = set()
    queue = deque([0]) if g.n else deque()
    while queue:
        v = queue.popleft()
        for idx, w, volt in adj[v]:
            if w not in pot:
                pot[w] = pot[v] + volt
                tree.add(idx)
                queue.append(w)
    chords = [idx for idx in range(len(g.edges)) if idx not in tree]
    return pot, chords


def fundamental_cycle_voltages(g: VoltageGraph) -> list:
    pot, chords = _spanning_tree_potentials(g)
    out = []
    for idx in chords:
        e = g.edges[idx]
        if e.tail in pot and e.head in pot:
            out.append(pot[e.tail] + e.voltage - pot[e.head])
    return out


def validate(g: VoltageGraph) -> ValidationReport:
    """Check every standing hypothesis; never raises."""
    checks = []
    grp = g.group

    checks.append(Check(
        "infinite-group", grp.free_rank >= 1,
        "" if grp.free_rank >= 1 else "free rank is 0, so the cover is finite",
    ))

    bad_loops = [e for e in g.edges if e.is_loop() and e.voltage.is_identity()]
    dup = []
    for (i, j), volts in _induced_voltages(g).items():
        if i <= j:
            seen = set()
            for vlt in volts:
                if vlt.key in seen:
                    dup.append(f"v{i}~{vlt}.v{j} induced twice")
                seen.add(vlt.key)
    witness = "; ".join(
        [f"loop at vertex {e.tail} with identity voltage" for e in bad_loops] + dup
    )
    checks.append(Check("simple", not bad_loops and not dup, witness))

    inverted = [e for e in g.edges if e.is_loop() and e.voltage.order() == 2]
    checks.append(Check(
        "no-inversions", not inverted,
        "; ".join(f"loop at vertex {e.tail} has voltage {e.voltage} of order 2" for e in inverted),
    ))

    bad_deg = [(v, g.degree(v)) for v in range(g.n) if g.degree(v) != g.q + 1]
    checks.append(Check(
        "regular", g.n > 0 and not bad_deg,
        "; ".join(f"vertex {g.vertex_names[v]} has degree {d}, expected {g.q + 1}" for v, d in bad_deg)
        or ("" if g.n else "no vertices"),
    ))

    pot, _ = _spanning_tree_potentials(g)
    connected_b = len(pot) == g.n and g.n > 0
    sub = subgroup_generated(grp, [v.key for v in fundamental_cycle_voltages(g)])
    if not connected_b:
        witness = f"quotient graph is disconnected ({len(pot)} of {g.n} vertices reachable)"
    elif not sub.full:
        witness = f"cycle voltages generate a proper subgroup, quotient invariants {sub.quotient}"
    else:
        witness = ""
    checks.append(Check("connected", connected_b and sub.full, witness))

    chi_closed = g.n * (1 - g.q)
    chi_direct = 2 * g.euler_characteristic()
    checks.append(Check(
        "euler-characteristic", chi_closed == chi_direct,
        "" if chi_closed == chi_direct
        else f"|V|-|E| = {g.euler_characteristic()} but |V|(1-q)/2 = {chi_closed / 2}",
    ))
    return ValidationReport(tuple(checks))


def require_valid(g: VoltageGraph) -> VoltageGraph:
    report = validate(g)
    if not report.ok:
        msg = "; ".join(f"{c.name}: {c.witness}" for c in report.failures())
        raise ValidationError(f"{g}: {msg}", report)
    return g


# -- derived objects -------------------------------------------------------------------


def adjacency_matrix(g: VoltageGraph) -> GroupRingMatrix:
    """A_ij = sum of g over cover adjacencies v_i ~ g.v_j."""
    zero = GroupRingElement.zero(g.group)
    rows = [[zero] * g.n for _ in range(g.n)]
    for (i, j), volts in _induced_voltages(g).items():
        rows[i][j] = GroupRingElement(g.group, {v.key: 1 for v in volts})
    return GroupRingMatrix(g.group, rows)


def cover_ball(g: VoltageGraph, center, radius: int) -> nx.Graph:
    """Induced subgraph of the cover on the ball of given radius.

    Nodes are ``(vertex index, GroupElement)`` pairs.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    v0, a0 = center
    if not isinstance(a0, GroupElement):
        a0 = g.group.element(free=tuple(a0))
    steps = g.steps()
    out = {}
    for s in steps:
        out.setdefault(s.tail, []).append(s)
    ball = nx.Graph()
    start = (v0, a0)
    ball.add_node(start, dist=0)
    frontier = [start]
    for d in range(1, radius + 1):
        nxt = []
        for (v, a) in frontier:
            for s in out.get(v, ()):
                w = (s.head, a + s.voltage)
                if w not in ball:
                    ball.add_node(w, dist=d)
                    nxt.append(w)
        frontier = nxt
    for (v, a) in list(ball.nodes):
        for s in out.get(v, ()):
            w = (s.head, a + s.voltage)
            if w in ball:
                ball.add_edge((v, a), w)
    return ball


# -- file format -----------------------------------------------------------------------


def graph_from_dict(data: dict, name: str = "") -> VoltageGraph:
    try:
        q = data["q"]
        grp = data["group"]
        group = GroupSpec(int(grp.get("free_rank", 0)), tuple(grp.get("torsion", [])))
        vertices = list(data["vertices"])
        raw_edges = data["edges"]
    except (KeyError, TypeError, AttributeError) as exc:
        raise GraphFormatError(f"missing or malformed field: {exc}") from exc
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc
    if not isinstance(q, int) or q < 1:
        raise GraphFormatError(f"q must be a positive integer, got {q!r}")
    edges = []
    for k, e in enumerate(raw_edges):
        try:
            tail, head = e["from"], e["to"]
            volt = e.get("voltage", {})
            free = list(volt.get("free", [0] * group.free_rank))
            tors = list(volt.get("torsion", [0] * len(group.torsion)))
        except (KeyError, TypeError, AttributeError) as exc:
            raise GraphFormatError(f"edge {k}: malformed ({exc})") from exc
        if len(free) != group.free_rank or len(tors) != len(group.torsion):
            raise GraphFormatError(
                f"edge {k}: voltage has {len(free)} free / {len(tors)} torsion entries, "
                f"group needs {group.free_rank} / {len(group.torsion)}"
            )
        if not all(isinstance(x, int) for x in free + tors + [tail, head]):
            raise GraphFormatError(f"edge {k}: indices and exponents must be integers")
        edges.append(Edge(tail, head, GroupElement(group, group.normalize(free + tors))))
    return VoltageGraph(group, tuple(vertices), tuple(edges), q, name=name or data.get("name", ""))


def graph_to_dict(g: VoltageGraph) -> dict:
    r = g.group.free_rank
    out = {}
    if g.name:
        out["name"] = g.name
    out.update({
        "q": g.q,
        "group": {"free_rank": r, "torsion": list(g.group.torsion)},
        "vertices": list(g.vertex_names),
        "edges": [
            {
                "from": e.tail,
                "to": e.head,
                "voltage": {"free": list(e.voltage.key[:r]), "torsion": list(e.voltage.key[r:])},
            }
            for e in g.edges
        ],
    })
    return out


def load_graph(path) -> VoltageGraph:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise GraphFormatError(f"{path}: top level must be an object")
    return graph_from_dict(data, name=data.get("name", path.stem))


def dump_graph(g: VoltageGraph) -> str:
    return json.dumps(graph_to_dict(g), indent=2) + "\n"
