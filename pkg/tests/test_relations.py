import itertools

import pytest
from hypothesis import given, settings

from isolift.corpus_graphs import complete_graph, pinned
from isolift.graph import Graph, to0
from isolift.oracle import automorphisms, enumerate_iso, orbit_partition
from isolift.partition import OrderedPartition, finer, pair_refines, refine_round, trivial_partition
from isolift.relations import (
    NOT_ISOMORPHIC,
    UNDECIDED,
    ContractViolation,
    Kind,
    aut_run,
    equiv_check,
    fixpoint,
    implication_chain_check,
    iso_run,
    joint,
    rho_nu_correspondence_check,
    sig_fn,
    signature,
    wl_columns,
)

from .conftest import cells1, graph_and_perm, graphs

KINDS = (Kind.WL, Kind.DELTA, Kind.BIG_DELTA)

# frozen cells of the first 2-dim WL round on the example: diagonal, edges, non-edges
ROUND1 = [
    [(1, 1), (2, 2), (3, 3), (4, 4)],
    [(1, 2), (2, 1), (2, 3), (3, 2), (2, 4), (4, 2), (3, 4), (4, 3)],
    [(1, 3), (3, 1), (1, 4), (4, 1)],
]


def test_wl_columns_of_diagonal_match_listing(example):
    first = refine_round(sig_fn(Kind.WL), example, trivial_partition(4, 2))
    # translate engine cell numbers into the frozen numbering
    listing = {to0(u): s + 1 for s, c in enumerate(ROUND1) for u in c}
    ours_to_listing = {first.index[u]: listing[u] for u in listing}
    expected = {
        (1, 1): ((1, 1), (2, 2), (3, 3), (3, 3)),
        (2, 2): ((1, 1), (2, 2), (2, 2), (2, 2)),
        (3, 3): ((1, 1), (2, 2), (2, 2), (3, 3)),
        (4, 4): ((1, 1), (2, 2), (2, 2), (3, 3)),
    }
    for u1, cols in expected.items():
        ours = wl_columns(example, first, to0(u1))
        translated = tuple(sorted(tuple(ours_to_listing[c] for c in col) for col in ours))
        assert translated == cols


def test_signature_layout(example):
    p = trivial_partition(4, 2)
    s = signature(Kind.BIG_DELTA, example, p, (0, 1))
    # cell, S part (2), C part (4), Delta counts (2 positions x 1 cell)
    assert s == (1, 1, 1, 0, 1, 1, 0, 4, 4)
    d = signature(Kind.DELTA, example, trivial_partition(4, 1), (1,))
    assert d == (1, 3)
    assert signature(Kind.C, example, p, (0, 0)) == (1, 0, 0, 0, 0)


def test_k1_signature_has_no_s_or_c(example):
    p = trivial_partition(4, 1)
    assert signature(Kind.BIG_DELTA, example, p, (2,)) == (1, 4)
    assert signature(Kind.WL, example, p, (2,)) == (1, 1, 1, 1, 1)


def test_aut_run_examples(example):
    r = aut_run(Kind.WL, example, 2)
    assert len(r.partition) == 10 and not r.complete
    p4 = pinned("p4")
    r = aut_run(Kind.DELTA, p4, 1)
    assert cells1(r.partition.cells) == {frozenset({(1,), (4,)}), frozenset({(2,), (3,)})}
    assert not r.complete


def test_asymmetric_graph_is_complete():
    g = pinned("asym6")
    assert len(automorphisms(g)) == 1
    assert aut_run(Kind.WL, g, 2).complete


def test_iso_run_examples(c6, two_k3, example):
    assert iso_run(Kind.DELTA, c6, two_k3, 1).verdict == UNDECIDED
    assert iso_run(Kind.WL, c6, two_k3, 2).verdict == NOT_ISOMORPHIC
    assert iso_run(Kind.WL, example, example, 2).verdict == UNDECIDED
    assert iso_run(Kind.WL, example, c6, 2).verdict == NOT_ISOMORPHIC


def test_iso_run_unbalanced_start(example):
    p0 = trivial_partition(4, 1)
    q0 = OrderedPartition.from_cells(4, 1, [[(0,)], [(1,), (2,), (3,)]])
    assert iso_run(Kind.DELTA, example, example, 1, p0, q0).verdict == NOT_ISOMORPHIC


def test_equiv_check_examples(c6, two_k3, example):
    p = fixpoint(Kind.DELTA, c6, trivial_partition(6, 1))
    q = fixpoint(Kind.DELTA, two_k3, trivial_partition(6, 1))
    assert equiv_check(Kind.DELTA, c6, p, two_k3, q)
    p = fixpoint(Kind.WL, c6, trivial_partition(6, 2))
    q = fixpoint(Kind.WL, two_k3, trivial_partition(6, 2))
    assert not equiv_check(Kind.WL, c6, p, two_k3, q)
    assert not enumerate_iso(c6, two_k3)
    s = fixpoint(Kind.WL, example, trivial_partition(4, 2))
    assert equiv_check(Kind.WL, example, s, example, s)


def test_equiv_check_rejects_unstable(example):
    with pytest.raises(ContractViolation):
        equiv_check(Kind.WL, example, trivial_partition(4, 2), example, trivial_partition(4, 2))


@settings(max_examples=30, deadline=None)
@given(graph_and_perm(max_n=5))
def test_isomorphism_invariance(gp):
    g, perm = gp
    h = g.relabel(perm)
    for kind in KINDS:
        jr = joint(kind, g, h, 2)
        assert jr.matched
        for u in itertools.product(range(g.n), repeat=2):
            v = tuple(perm[x] for x in u)
            assert jr.left.index[u] == jr.right.index[v]


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5), graphs(max_n=5))
def test_joint_verdict_agrees_with_separate_fixpoints(g, h):
    if g.n != h.n:
        return
    for kind in KINDS:
        for k in (1, 2):
            jr = joint(kind, g, h, k)
            p = fixpoint(kind, g, trivial_partition(g.n, k))
            q = fixpoint(kind, h, trivial_partition(h.n, k))
            assert jr.matched == equiv_check(kind, g, p, h, q)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=5), graphs(max_n=5))
def test_refinement_is_sound(g, h):
    if g.n != h.n:
        return
    for kind in KINDS:
        if iso_run(kind, g, h, 2).verdict == NOT_ISOMORPHIC:
            assert not enumerate_iso(g, h)


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=4))
def test_orbits_never_split(g):
    orb = orbit_partition(g, 2)
    for kind in KINDS:
        p = trivial_partition(g.n, 2)
        while True:
            for o in orb:
                assert len({p.index[u] for u in o}) == 1
            q = refine_round(sig_fn(kind), g, p)
            if len(q) == len(p):
                break
            p = q


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=4))
def test_orbit_partition_is_stable(g):
    orb = orbit_partition(g, 2)
    p = OrderedPartition.from_cells(g.n, 2, sorted(sorted(c) for c in orb))
    for kind in KINDS:
        assert len(refine_round(sig_fn(kind), g, p)) == len(p)


@settings(max_examples=25, deadline=None)
@given(graphs(max_n=4))
def test_fixpoint_chain(g):
    p0 = trivial_partition(g.n, 2)
    wl, de, bd = (fixpoint(kd, g, p0) for kd in KINDS)
    orb = OrderedPartition.from_cells(g.n, 2, sorted(sorted(c) for c in orbit_partition(g, 2)))
    assert finer(orb, wl) and finer(wl, de) and finer(de, bd)


def test_implication_chain_examples(example, c6, two_k3):
    r = implication_chain_check(example, example, 2)
    assert not r["violations"]
    assert r["cells"]["wl"] == 10 >= r["cells"]["delta"] >= r["cells"]["Delta"]
    r = implication_chain_check(c6, two_k3, 2)
    assert not r["equiv"]["wl"] and not r["violations"]
    k3 = complete_graph(3)
    r = implication_chain_check(k3, k3, 1)
    assert all(r["equiv"].values())


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=5), graphs(max_n=5))
def test_implication_chain_random(g, h):
    if g.n == h.n:
        assert not implication_chain_check(g, h, 2)["violations"]


@pytest.mark.parametrize("g", [pinned("example"), complete_graph(4), Graph.from_edges(1, [])])
def test_rho_nu_correspondence(g):
    assert rho_nu_correspondence_check(g, 2)["equal"]


def test_rho_nu_rejects_k1(example):
    with pytest.raises(ValueError):
        rho_nu_correspondence_check(example, 1)


@settings(max_examples=30, deadline=None)
@given(graph_and_perm(max_n=4))
def test_pair_refinement_after_relabel(gp):
    g, perm = gp
    h = g.relabel(perm)
    wl = joint(Kind.WL, g, h, 2)
    de = joint(Kind.DELTA, g, h, 2)
    assert pair_refines(wl.left, wl.right, de.left, de.right)
