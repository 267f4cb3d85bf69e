import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import AFFINE_A2, FINITE_A2, FINITE_B2, M12_INF, RANK3_INF, SWEEP_SYSTEMS
from kmcomb.coxeter import coset_reps, finite_type_subsets, min_coset_rep, system_for, weak_leq
from kmcomb.davis import (
    DavisNode,
    check_combin,
    check_pullback,
    check_pullback_ball,
    check_pullback_interval,
    davis_leq,
    davis_poset,
    functor_L,
    functor_LI,
    interval,
    longest_element_map,
    longest_is_monotone,
    lower_interval,
    node_of,
    preimage_nodes,
    sweep_combin,
)
from kmcomb.posets import FinPoset, PosetMap, certify, comma_fiber, dismantle_core, transport


def hasse(P):
    G = nx.DiGraph()
    G.add_nodes_from(range(len(P)))
    G.add_edges_from((P.index[a], P.index[b]) for a, b in P.covers())
    return G


def test_radius_zero_lists_cosets_of_identity():
    for C in (M12_INF, AFFINE_A2, FINITE_A2):
        D = davis_poset(C, 0)
        assert {n.I for n in D} == set(finite_type_subsets(C))
        assert all(n.min_rep.word == () for n in D)


def test_finite_a2_davis_poset():
    D = davis_poset(FINITE_A2, 3)
    assert len(D) == 13
    assert str(D.greatest()) == "eW{1,2}"
    assert len(dismantle_core(D)) == 1


def test_infinite_dihedral_radius_one():
    assert len(davis_poset(M12_INF, 1)) == 7
    D = davis_poset(M12_INF, 1, by="closed")
    assert len(D) == 9
    assert {str(n) for n in D} == {"eW{}", "s1W{}", "s2W{}", "s1s2W{}", "s2s1W{}",
                                   "eW{1}", "eW{2}", "s1W{2}", "s2W{1}"}


def test_longest_element_functor_examples():
    S = system_for(M12_INF)
    assert functor_L(DavisNode(S.identity, frozenset())).word == ()
    assert functor_L(DavisNode(S.element([1]), frozenset({2}))).word == (1, 2)
    assert functor_L(DavisNode(S.identity, frozenset({1}))).word == (1,)
    assert functor_LI(S.element([1, 2, 1]), {2}).word == ()
    with pytest.raises(ValueError):
        DavisNode(S.element([1]), frozenset({1}))


@pytest.mark.parametrize("name", sorted(SWEEP_SYSTEMS))
def test_longest_element_is_monotone(name):
    assert longest_is_monotone(davis_poset(SWEEP_SYSTEMS[name], 3))


@pytest.mark.parametrize("C", [FINITE_A2, FINITE_B2], ids=["A2", "B2"])
def test_transport_of_coset_functor_is_davis_poset(C):
    S = system_for(C)
    subsets = finite_type_subsets(C)
    W = S.ball(100)
    T = transport(
        subsets,
        lambda I: sorted({min_coset_rep(w, I) for w in W}, key=lambda x: x.word),
        lambda I, J, x: min_coset_rep(x, J),
    )
    D = davis_poset(C, 100)
    assert len(T) == len(D)
    assert nx.is_isomorphic(hasse(T), hasse(D))


@pytest.mark.parametrize("name", sorted(SWEEP_SYSTEMS))
def test_preimage_against_davis_enumeration(name):
    """L^{-1}[v, w] equals the closed Davis ball filtered by the longest element."""
    C = SWEEP_SYSTEMS[name]
    S = system_for(C)
    D = davis_poset(C, 4, by="closed")
    for w in S.ball(3):
        for v in lower_interval(w):
            want = {n for n in D if weak_leq(v, functor_L(n)) and weak_leq(functor_L(n), w)}
            assert set(preimage_nodes(v, w)) == want


@pytest.mark.parametrize("name", sorted(SWEEP_SYSTEMS))
@settings(max_examples=25, deadline=None)
@given(data=st.data())
def test_davis_order_matches_coset_containment(name, data):
    C = SWEEP_SYSTEMS[name]
    S = system_for(C)
    subsets = list(finite_type_subsets(C))
    x = S.element(data.draw(st.lists(st.integers(1, C.n), max_size=5)))
    I = data.draw(st.sampled_from(subsets))
    J = data.draw(st.sampled_from(subsets))
    a, b = node_of(x, I), node_of(x, J)
    # two cosets through a common element are nested exactly when I is inside J
    assert davis_leq(a, b) == (I <= J)
    low, high = coset_reps(x, I)
    assert a.min_rep == low and a.longest == high


def test_check_combin_examples():
    S = system_for(M12_INF)
    rep = check_combin(S, S.identity, S.element([1, 2]))
    assert rep.passed and rep.certificate.core_size == 1
    A = system_for(AFFINE_A2)
    for w in A.ball(4):
        if len(w) == 4:
            assert check_combin(A, A.identity, w).passed
    for w in S.ball(3):
        assert check_combin(S, w, w).passed
    with pytest.raises(ValueError):
        check_combin(S, S.element([2]), S.element([1, 2]))


def test_terminal_object_for_v_equals_w():
    S = system_for(RANK3_INF)
    w = S.element([1, 2, 3])
    P = FinPoset(preimage_nodes(w, w), davis_leq)
    assert P.greatest() == node_of(w, w.right_descents())


@pytest.mark.parametrize("name", sorted(SWEEP_SYSTEMS))
def test_small_sweep(name):
    reports = sweep_combin(SWEEP_SYSTEMS[name], 4)
    assert reports and all(r.passed for r in reports)


def test_pullback_examples():
    chain = FinPoset(["bot", "mid", "top"], [("bot", "mid"), ("mid", "top")])
    assert check_pullback(PosetMap.identity(chain)).passed
    anti = FinPoset(["a", "b"])
    F = PosetMap(anti, chain, {"a": "bot", "b": "bot"})
    rep = check_pullback(F)
    assert not rep.passed and "top" in rep.failures
    assert check_pullback_ball(M12_INF, 3).passed


def test_comma_fiber_of_longest_element_functor():
    S = system_for(M12_INF)
    F = longest_element_map(davis_poset(M12_INF, 3))
    fiber = comma_fiber(F, S.element([1]))
    assert len(fiber) > 0 and len(dismantle_core(fiber)) == 1


@pytest.mark.parametrize("name", sorted(SWEEP_SYSTEMS))
def test_interval_pullback(name):
    S = system_for(SWEEP_SYSTEMS[name])
    for w in S.ball(3):
        assert check_pullback_interval(S, S.identity, w).passed
        assert set(interval(S.identity, w)) == set(lower_interval(w))


def test_restriction_functor_pulls_back():
    """Comma fibers of w -> w(I) are contractible on a weak-order ball."""
    S = system_for(RANK3_INF)
    ball = S.ball(3)
    source = FinPoset(sorted(ball, key=lambda x: (len(x), x.word)), weak_leq)
    I = {1, 2}
    images = sorted({functor_LI(w, I) for w in ball}, key=lambda x: (len(x), x.word))
    target = FinPoset(images, weak_leq)
    F = PosetMap(source, target, {w: functor_LI(w, I) for w in ball})
    assert check_pullback(F).passed
    assert certify(source).passed
