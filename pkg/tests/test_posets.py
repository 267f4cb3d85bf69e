import itertools
import math
import random

import networkx as nx
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kmcomb.posets import (
    FinPoset,
    PosetError,
    PosetMap,
    PosetSizeError,
    beat_points,
    certify,
    comma_fiber,
    dismantle_core,
    elementary_divisors,
    is_acyclic,
    reduced_homology,
    transport,
)


def random_poset(n, density, seed):
    rng = random.Random(seed)
    pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < density]
    return FinPoset(range(n), pairs)


def face_poset(facets):
    faces = set()
    for f in facets:
        for k in range(1, len(f) + 1):
            faces.update(frozenset(c) for c in itertools.combinations(sorted(f), k))
    return FinPoset(sorted(faces, key=lambda s: (len(s), sorted(s))), lambda a, b: a <= b)


def homology_summary(P, max_dim=3):
    return {g.dim: (g.rank, g.torsion) for g in reduced_homology(P, max_dim) if not g.trivial}


def hasse_graph(P):
    G = nx.DiGraph()
    G.add_nodes_from(range(len(P)))
    G.add_edges_from((P.index[a], P.index[b]) for a, b in P.covers())
    return G


# -- homology examples --------------------------------------------------------


def test_point_and_empty():
    assert homology_summary(FinPoset(["x"])) == {}
    assert homology_summary(FinPoset([])) == {-1: (1, ())}


def test_antichain():
    assert homology_summary(FinPoset("abcd")) == {0: (3, ())}


def test_circle_crown():
    crown = FinPoset(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    assert homology_summary(crown) == {1: (1, ())}
    assert len(dismantle_core(crown)) == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_boundary_of_simplex_is_sphere(n):
    facets = [c for c in itertools.combinations(range(n + 1), n)]
    assert homology_summary(face_poset(facets)) == {n - 1: (1, ())}


def test_projective_plane_has_two_torsion():
    rp2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6), (2, 3, 5),
           (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)]
    assert homology_summary(face_poset(rp2)) == {1: (0, (2,))}


def test_size_limit_is_reported():
    P = face_poset([tuple(range(6))])
    with pytest.raises(PosetSizeError):
        reduced_homology(P, 3, max_nonzeros=50)


# -- Smith normal form oracle -------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_elementary_divisors_match_sympy(nrows, ncols, data):
    cells = data.draw(st.lists(st.integers(-4, 4), min_size=nrows * ncols, max_size=nrows * ncols))
    entries = {(r, c): cells[r * ncols + c] for r in range(nrows) for c in range(ncols)}
    ours = sorted(elementary_divisors(entries, nrows, ncols))
    M = sympy.Matrix(nrows, ncols, cells)
    # determinantal divisors: d_k = gcd of all k x k minors
    theirs, prev = [], 1
    for k in range(1, min(nrows, ncols) + 1):
        g = 0
        for rs in itertools.combinations(range(nrows), k):
            for cs in itertools.combinations(range(ncols), k):
                g = math.gcd(g, int(M.extract(list(rs), list(cs)).det()))
        if g == 0:
            break
        theirs.append(g // prev)
        prev = g
    assert ours == theirs


# -- dismantling ----------------------------------------------------------------


def all_cores(P):
    """Every core reachable by some removal order (independent beat-point test)."""
    elements = list(P)

    def is_beat(x, alive):
        above = [y for y in alive if y != x and P.leq(x, y)]
        below = [y for y in alive if y != x and P.leq(y, x)]
        up_min = above and any(all(P.leq(m, y) for y in above) for m in above)
        down_max = below and any(all(P.leq(y, m) for y in below) for m in below)
        return bool(up_min or down_max)

    seen, cores = set(), set()
    stack = [frozenset(elements)]
    while stack:
        alive = stack.pop()
        if alive in seen:
            continue
        seen.add(alive)
        beats = [x for x in alive if is_beat(x, alive)]
        if not beats:
            cores.add(alive)
        for x in beats:
            stack.append(alive - {x})
    return cores


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.floats(0.1, 0.6), st.integers(0, 10**6))
def test_dismantling_is_confluent_up_to_isomorphism(n, density, seed):
    P = random_poset(n, density, seed)
    ours = hasse_graph(dismantle_core(P))
    for alive in all_cores(P):
        assert nx.is_isomorphic(hasse_graph(P.subposet(alive)), ours)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), st.floats(0.1, 0.6), st.integers(0, 10**6), st.integers(0, 10**6))
def test_core_independent_of_scan_order(n, density, seed, seed2):
    P = random_poset(n, density, seed)
    order = list(range(n))
    random.Random(seed2).shuffle(order)
    assert nx.is_isomorphic(hasse_graph(dismantle_core(P)), hasse_graph(dismantle_core(P, order)))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.floats(0.1, 0.7), st.integers(0, 10**6))
def test_core_preserves_homology(n, density, seed):
    P = random_poset(n, density, seed)
    core = dismantle_core(P)
    assert homology_summary(P) == homology_summary(core)
    assert not beat_points(core)
    cert = certify(P)
    if cert.dismantlable:
        assert cert.acyclic and cert.passed


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.floats(0.1, 0.7), st.integers(0, 10**6))
def test_opposite_poset_has_same_homology(n, density, seed):
    P = random_poset(n, density, seed)
    assert homology_summary(P) == homology_summary(P.opposite())


def test_cone_is_dismantlable():
    P = FinPoset(["a", "b", "c", "top"], [("a", "top"), ("b", "top"), ("c", "top")])
    assert len(dismantle_core(P)) == 1
    assert certify(P).to_json()["pass"]


# -- order validation, maps, fibers, transport ---------------------------------


def test_invalid_orders_rejected():
    with pytest.raises(PosetError):
        FinPoset([1, 2], lambda a, b: True)  # not antisymmetric
    with pytest.raises(PosetError):
        FinPoset([1, 1])


def test_poset_map_must_be_monotone():
    chain = FinPoset([0, 1], [(0, 1)])
    with pytest.raises(PosetError):
        PosetMap(chain, chain, {0: 1, 1: 0})
    F = PosetMap.identity(chain)
    assert list(comma_fiber(F, 1)) == [1]
    assert list(comma_fiber(F, 0)) == [0, 1]


def test_transport_checks_functoriality():
    chain = FinPoset([0, 1, 2], [(0, 1), (1, 2)])
    T = transport(chain, lambda p: ["a", "b"], lambda p, q, x: x)
    assert len(T) == 6 and len(T.minimal()) == 2
    with pytest.raises(PosetError):
        transport(chain, lambda p: ["a", "b"], lambda p, q, x: "b" if (p, q) == (0, 2) else x)


def test_chains_and_dot_export():
    P = FinPoset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert P.is_chain(["a", "c"])
    assert [len(g) for g in P.chains()] == [3, 3, 1]
    dot = P.to_dot()
    assert dot.count("->") == 2 and dot.startswith("digraph")
    assert is_acyclic(reduced_homology(P))
