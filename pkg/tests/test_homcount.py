from __future__ import annotations

import itertools
import random
from fractions import Fraction

import mpmath
import pytest

from sidocert.graphs import Hypergraph, TargetGraph, complete_graph, cycle_graph, path_graph, single_edge
from sidocert.homcount import (
    all_targets,
    count_hom,
    d_tau,
    density,
    edge_density,
    enumerate_hom,
    random_targets,
    sidorenko_check,
    sweep,
    sweep_targets,
)
from sidocert.measures import SupportError
from sidocert.setfun import SizeCapError

from oracles import naive_hom_count

PATH3 = TargetGraph.of(path_graph(3))


def test_count_examples():
    e = single_edge(2)
    assert count_hom(e, TargetGraph.of(e)) == 2
    assert count_hom(cycle_graph(4), PATH3) == 8
    assert density(cycle_graph(4), PATH3) == Fraction(8, 81)
    assert edge_density(PATH3) == Fraction(4, 9)
    lone = Hypergraph((1,), frozenset())
    assert density(lone, PATH3) == 1


def test_enumerate_matches_count_and_is_valid():
    H = cycle_graph(4)
    homs = enumerate_hom(H, PATH3)
    assert len(homs) == 8 and len(set(homs.maps)) == 8
    idx = {v: i for i, v in enumerate(H.vertices)}
    for img in homs.maps:
        for e in H.edges:
            assert frozenset(img[idx[v]] for v in e) in PATH3.edges


def test_count_matches_naive_oracle():
    rng = random.Random(9)
    for _ in range(150):
        n = rng.randint(1, 5)
        H = Hypergraph.from_edges(
            [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1) if rng.random() < 0.5],
            vertices=range(1, n + 1),
        )
        m = rng.randint(2, 4)
        G = rng.choice(list(all_targets(m)))
        assert count_hom(H, G) == naive_hom_count(H.vertices, H.edges, G.vertices, G.edges)


def test_count_3_uniform_matches_oracle():
    H = Hypergraph.from_edges([(1, 2, 3), (2, 3, 4)])
    for G in all_targets(4, 3):
        assert count_hom(H, G) == naive_hom_count(H.vertices, H.edges, G.vertices, G.edges)


def test_count_is_multiplicative_over_disjoint_unions():
    A, B = path_graph(3), cycle_graph(4)
    U = A.disjoint_union(B)
    for G in itertools.islice(all_targets(4), 0, 63, 9):
        assert count_hom(U, G) == count_hom(A, G) * count_hom(B, G)


def test_arity_mismatch_and_caps():
    with pytest.raises(ValueError):
        count_hom(single_edge(3), PATH3)
    with pytest.raises(SizeCapError):
        enumerate_hom(path_graph(8), TargetGraph.of(complete_graph(10)), cap=1000)


def test_d_tau_values():
    assert abs(d_tau(single_edge(2), TargetGraph.of(single_edge(2))).value - mpmath.log(2)) < 1e-15
    assert abs(d_tau(cycle_graph(4), PATH3).value - mpmath.log(mpmath.mpf(81) / 8)) < 1e-15
    tri = complete_graph(3)
    with pytest.raises(SupportError):
        d_tau(tri, PATH3)


def test_target_generators():
    assert len(list(all_targets(4))) == 63
    assert len(list(all_targets(4, 3))) == 15
    a = random_targets(5, 20, seed=3)
    assert a == random_targets(5, 20, seed=3) and all(G.edges for G in a)
    with pytest.raises(ValueError):
        random_targets(2, 1, k=3)


def test_sidorenko_examples():
    r = sidorenko_check(cycle_graph(4), PATH3)
    assert r.ok and r.t_H == Fraction(8, 81) and r.bound == Fraction(256, 6561)
    tri = complete_graph(3)
    bad = sidorenko_check(tri, PATH3)
    assert not bad and bad.t_H == 0


def test_sweep_examples():
    rep = sweep_targets(cycle_graph(4), 4)
    assert rep.ok and rep.checked == 63
    tri = sweep_targets(complete_graph(3), 4)
    assert not tri.ok and tri.violations
    hyper = sweep_targets(Hypergraph.from_edges([(1, 2, 3), (2, 3, 4)]), 4)
    assert hyper.ok and hyper.checked == 15


def test_sweep_workers_agree():
    targets = list(all_targets(4))
    one = sweep(complete_graph(3), targets, workers=1, keep_results=True)
    two = sweep(complete_graph(3), targets, workers=2, keep_results=True)
    assert [r.t_H for r in one.results] == [r.t_H for r in two.results]
    assert len(one.violations) == len(two.violations)
