import random

import pytest
from sympy import mobius, divisors

from periodic_zeta import corpus
from periodic_zeta.errors import StabilizerViolationError
from periodic_zeta.graph import cover_ball
from periodic_zeta.oracle import (
    census,
    count_based_walks,
    is_reduced,
    rooted_count,
    tail_length,
)
from periodic_zeta.zeta import log_zeta_series


def cover_rooted_walks(g, m):
    """Count based closed non-backtracking, tail-less walks of length m in the cover.

    Walks start at the lifts (v, identity) of the quotient vertices, so each
    translation class of rooted walks is counted once.  Works on an explicit
    networkx ball, independent of voltage bookkeeping in the census.
    """
    total = 0
    for v in range(g.n):
        start = (v, g.group.identity())
        ball = cover_ball(g, start, m // 2 + 1)
        adj = {x: list(ball.neighbors(x)) for x in ball.nodes}

        def walk(path):
            nonlocal total
            x = path[-1]
            if len(path) == m + 1:
                if x == start and path[-2] != path[1]:
                    total += 1
                return
            for y in adj[x]:
                if len(path) >= 2 and y == path[-2]:
                    continue
                walk(path + [y])

        walk([start])
    return total


SMALL = ["example", "square_grid", "honeycomb", "ladder", "twisted_z13", "path"]


@pytest.mark.parametrize("name", SMALL)
def test_rooted_counts_match_walks_in_the_cover(name):
    g = corpus.load(name)
    spec = census(g, 8)
    for m in range(1, 9):
        n_m = cover_rooted_walks(g, m)
        assert rooted_count(g, m, spec) == n_m, m
        assert count_based_walks(g, m) == n_m, m


def test_example_triangles():
    g = corpus.load("example")
    spec = census(g, 3)
    assert spec.pl[1] == spec.pl[2] == 0
    assert spec.pl[3] == 4
    assert rooted_count(g, 3) == 12
    assert cover_rooted_walks(g, 3) == 12


def test_example_length_six_divisor_relation():
    spec = census(corpus.load("example"), 6)
    assert spec.l[6] == spec.pl[6] + spec.pl[3] + spec.pl[2] + spec.pl[1]
    assert spec.l[6] == spec.pl[6] + spec.pl[3]


def test_primitive_counts_by_mobius_from_the_cover():
    # PL(m) = (1/m) sum_{d|m} mu(m/d) N_d, with N_d counted in the cover.
    g = corpus.load("example")
    spec = census(g, 7)
    counts = {d: cover_rooted_walks(g, d) for d in range(1, 8)}
    for m in range(1, 8):
        assert sum(mobius(m // d) * counts[d] for d in divisors(m)) == m * spec.pl[m]


def test_path_has_no_cycles():
    spec = census(corpus.load("path"), 15)
    assert all(v == 0 for v in spec.pl.values())
    assert spec.girth is None


def test_divisor_identity_holds(spectra15):
    for name, spec in spectra15.items():
        assert spec.divisor_identity_failures() == [], name


def test_orientation_pairing(spectra15):
    for name, spec in spectra15.items():
        if any(spec.self_reverse.values()):
            continue
        assert all(spec.pl[n] % 2 == 0 for n in range(3, 16)), name


def test_classes_are_canonical_reduced_and_lift_to_cycles():
    for name in ["example", "honeycomb", "twisted_z13"]:
        g = corpus.load(name)
        steps = g.steps()
        spec = census(g, 8, keep_classes=True)
        seen = set()
        for c in spec.classes:
            w = c.steps
            assert is_reduced(g, w)
            rotations = {w[i:] + w[:i] for i in range(len(w))}
            assert min(rotations) == w
            assert not (rotations & seen)
            seen |= rotations
            # lift from the identity lift of the start vertex and return
            x = (steps[w[0]].tail, g.group.identity())
            ball = cover_ball(g, x, len(w))
            pos = x
            for s in w:
                nxt = (steps[s].head, pos[1] + steps[s].voltage)
                assert ball.has_edge(pos, nxt)
                pos = nxt
            assert pos == x
        assert sum(1 for c in spec.classes if c.primitive and c.length == 8) == spec.pl[8]


def test_canonicalization_is_rotation_invariant():
    g = corpus.load("example")
    spec = census(g, 7, keep_classes=True)
    canon = {c.steps for c in spec.classes}
    rng = random.Random(0)
    for c in rng.sample(spec.classes, 30):
        j = rng.randrange(c.length)
        rot = c.steps[j:] + c.steps[:j]
        assert min(rot[i:] + rot[:i] for i in range(len(rot))) in canon


def test_tail_example_from_the_definition():
    # v -> w, loop at w twice, then w -> v back along the first edge.
    g = corpus.load("example")
    walk = (2, 6, 6, 3)
    assert tail_length(walk) == 1
    assert not is_reduced(g, walk)
    assert is_reduced(g, (2, 6, 5))


def test_tail_equals_wraparound_backtrack():
    rng = random.Random(5)
    g = corpus.load("example")
    steps = g.steps()
    for _ in range(500):
        m = rng.randint(2, 8)
        seq = [rng.randrange(len(steps))]
        while len(seq) < m:
            opts = [t.index for t in steps if t.tail == steps[seq[-1]].head and t.index != seq[-1] ^ 1]
            seq.append(rng.choice(opts))
        assert (tail_length(seq) > 0) == (seq[-1] == seq[0] ^ 1)


def test_stabilizer_violation_reports_shortest_witness():
    g = corpus.load("stabilizer_z2")
    with pytest.raises(StabilizerViolationError) as info:
        census(g, 8)
    err = info.value
    assert len(err.witness) == 4
    assert g.group.order(err.block_voltage) == 2


def test_twisted_torsion_graph_is_clean_within_the_window():
    census(corpus.load("twisted_z13"), 15)


def test_oracle_matches_series_on_example():
    g = corpus.load("example")
    spec = census(g, 10)
    counts = log_zeta_series(g, 10).rooted_counts()
    for m in range(1, 11):
        assert counts[m] == rooted_count(g, m, spec)


def test_census_rejects_nonpositive_length():
    with pytest.raises(ValueError):
        census(corpus.load("example"), 0)
