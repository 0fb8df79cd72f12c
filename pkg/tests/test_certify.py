from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest

from sidocert.catalog import (
    even_cycle_complex,
    subdivide,
    tight_path,
    tree_box_edge_complex,
    tree_complex,
)
from sidocert.certify import (
    FarkasRefutation,
    Inconclusive,
    MalformedCertificateError,
    MembershipCertificate,
    MembershipProblem,
    NotInClassError,
    PreconditionError,
    certificate_from_trace,
    certificate_transport_subdivision,
    decide_membership,
    disjoint_edges_certificate,
    forest_certificate,
    general_certificate,
    in_class_C,
    in_class_Ck,
    is_thick,
    is_weakly_thick,
    t_gen,
    thickness_problem,
    verify_certificate,
    verify_refutation,
    weak_from_thick,
)
from sidocert.complex import from_trace, reflect, trivial
from sidocert.graphs import Hypergraph, path_graph
from sidocert.setfun import ArityError, GroundSet, SetFunction, SizeCapError, h_vector, indicator, s_vector

from helpers import random_complex
from oracles import h_dict, is_supermodular_nonneg, recombine_certificate, s_dict, setfun_as_dict

C4_TRACE = [({1, 2}, {1}), ({1, 2, 3}, {2, 3})]


def C4():
    return from_trace(2, C4_TRACE)


def test_zero_target_gives_empty_certificate():
    g = GroundSet((1, 2))
    c = decide_membership(MembershipProblem(g, SetFunction(g)))
    assert isinstance(c, MembershipCertificate)
    assert not c.cone_coeffs and not c.subspace_coeffs and c.line_coeff == 0


def test_negative_singleton_is_refuted():
    g = GroundSet((1,))
    p = MembershipProblem(g, indicator(g, {1}) * -1)
    r = decide_membership(p, "full")
    assert isinstance(r, FarkasRefutation)
    assert verify_refutation(p, r)
    y = setfun_as_dict(r.functional)
    assert is_supermodular_nonneg(y, [1])
    assert y == {frozenset({1}): y[frozenset({1})]} and y[frozenset({1})] > 0


def test_negative_h_of_path_is_in_cone():
    H = path_graph(3)
    g = GroundSet(H.vertices)
    p = MembershipProblem(g, h_vector(H, H.vertices, g) * -1)
    c = decide_membership(p, "full")
    assert verify_certificate(p, c)
    assert verify_certificate(p, forest_certificate(H, H.vertices))


def test_tampered_certificates_fail():
    M = C4()
    p = thickness_problem(M)
    c = certificate_from_trace(M)
    assert verify_certificate(p, c)
    bad = c.copy()
    g = next(iter(bad.cone_coeffs))
    bad.cone_coeffs[g] = -bad.cone_coeffs[g]
    assert not verify_certificate(p, bad)
    shifted = MembershipProblem(p.ground, p.target + indicator(p.ground, set()), p.subspace)
    assert not verify_certificate(shifted, c)


def test_foreign_generators_are_malformed():
    M = C4()
    p = thickness_problem(M)
    c = certificate_from_trace(M)
    c.add_subspace(t_gen({1}, {4}), 1)
    with pytest.raises(MalformedCertificateError):
        verify_certificate(p, c)
    c = certificate_from_trace(M)
    c.cone_coeffs[("iso", frozenset({1}), frozenset({2}))] = Fraction(1)
    with pytest.raises(MalformedCertificateError):
        verify_certificate(p, c)


def test_certificate_recombination_matches_oracle():
    M = even_cycle_complex(6)
    c = is_thick(M)
    H = M.frame()
    assert recombine_certificate(c) == h_dict(H.edges, M.vertices)


def test_certificate_json_round_trip():
    M = C4()
    p = thickness_problem(M)
    c = is_thick(M, mode="full")
    data = json.loads(json.dumps(c.to_json(p)))
    assert all(isinstance(r["coeff"], str) for r in data["cone"])
    back = MembershipCertificate.from_json(data)
    assert verify_certificate(p, back)
    with pytest.raises(MalformedCertificateError):
        MembershipCertificate.from_json({"cone": [{"gen": {"kind": "bogus"}, "coeff": "1/1"}]})


def test_is_thick_examples():
    assert verify_certificate(thickness_problem(trivial(2)), is_thick(trivial(2)))
    for M in (C4(), even_cycle_complex(6)):
        p = thickness_problem(M)
        for mode in ("auto", "full", "lp", "restricted"):
            c = is_thick(M, mode=mode)
            assert isinstance(c, MembershipCertificate), mode
            assert verify_certificate(p, c)
    with pytest.raises(ArityError):
        is_thick(trivial(3))


def test_is_weakly_thick_examples():
    for M in (trivial(3), tight_path(3, 4), C4()):
        p = thickness_problem(M, weak=True)
        assert verify_certificate(p, is_weakly_thick(M))
        assert verify_certificate(p, is_weakly_thick(M, mode="lp"))


def test_thick_implies_weakly_thick():
    rng = random.Random(4)
    for _ in range(30):
        M = random_complex(2, rng, max_vertices=7)
        if not in_class_C(M):
            continue
        c = certificate_from_trace(M)
        if any(d == 0 for d in M.frame().degrees().values()):
            continue
        assert verify_certificate(thickness_problem(M, weak=True), weak_from_thick(M, c))


def test_in_class_examples():
    assert in_class_C(tree_complex(path_graph(5)))
    assert in_class_C(C4())
    M = reflect(C4(), {1, 2, 3, 4}, {1, 2, 3, 4})
    rep = in_class_C(M)
    assert not rep and rep.failing()[0].index == 2
    assert in_class_Ck(tight_path(3, 4))
    assert in_class_Ck(reflect(trivial(3), {1, 2, 3}, {1, 2, 3}))
    bad = reflect(tight_path(3, 4), {1, 2, 3, 4}, {1, 2, 3, 4})
    assert not in_class_Ck(bad)
    with pytest.raises(NotInClassError):
        certificate_from_trace(bad)


def test_constructive_and_lp_agree_on_small_class_C_traces():
    rng = random.Random(8)
    seen = 0
    while seen < 25:
        M = random_complex(2, rng, max_vertices=6)
        if not in_class_C(M):
            continue
        p = thickness_problem(M)
        assert verify_certificate(p, certificate_from_trace(M))
        lp = decide_membership(p, "full")
        assert isinstance(lp, MembershipCertificate)
        seen += 1


def test_k_uniform_trace_certificates():
    rng = random.Random(12)
    seen = 0
    while seen < 25:
        M = random_complex(3, rng, max_vertices=7)
        if not in_class_Ck(M):
            continue
        c = certificate_from_trace(M, weak=True)
        p = thickness_problem(M, weak=True)
        assert verify_certificate(p, c)
        assert recombine_certificate(c) == s_dict(M.frame().edges, M.vertices)
        seen += 1


def test_disjoint_edges_certificate():
    H = Hypergraph.from_edges([(1, 2, 3), (4, 5, 6)], vertices=range(1, 8))
    g = GroundSet(H.vertices)
    X = {1, 2, 3, 4, 5, 6, 7}
    p = MembershipProblem(g, s_vector(H, X, g) * -1)
    assert verify_certificate(p, disjoint_edges_certificate(H, X))
    with pytest.raises(PreconditionError):
        disjoint_edges_certificate(Hypergraph.from_edges([(1, 2, 3), (3, 4, 5)]), {1, 2, 3, 4, 5})


def test_general_certificate_examples():
    g = GroundSet((1, 2))
    H = path_graph(2)
    assert isinstance(general_certificate(g, H, {1, 2}), MembershipCertificate)
    M = C4()
    g = GroundSet(M.vertices)
    c = general_certificate(g, M.frame(), M.vertices, ci_pairs=M.relation)
    assert isinstance(c, MembershipCertificate)
    c2 = general_certificate(g, M.frame(), M.vertices, ci_pairs=M.relation, is_pairs=[({1}, {1})])
    assert isinstance(c2, MembershipCertificate)
    # without relations the 4-cycle density vector is not in the cone
    r = general_certificate(g, M.frame(), M.vertices)
    assert isinstance(r, FarkasRefutation)


def test_restricted_failure_is_inconclusive():
    g = GroundSet((1, 2))
    p = MembershipProblem(g, indicator(g, {1}) * -1, hint_sets=({1, 2},))
    assert isinstance(decide_membership(p, "restricted"), Inconclusive)


def test_size_cap():
    g = GroundSet(tuple(range(11)))
    with pytest.raises(SizeCapError):
        decide_membership(MembershipProblem(g, indicator(g, {1})), "full")


def test_transport_identity_subdivision():
    M = C4()
    sub = subdivide(M, trivial(2), {1}, {2})
    assert sub.complex == M
    cM = certificate_from_trace(M)
    c = certificate_transport_subdivision(cM, MembershipCertificate(), sub)
    assert verify_certificate(thickness_problem(sub.complex), c)
    assert recombine_certificate(c) == recombine_certificate(cM)


def test_transport_box_with_edge():
    box = tree_box_edge_complex(path_graph(2))
    for host in (C4(), tree_complex(path_graph(3))):
        sub = subdivide(host, box.complex, box.J1, box.J2)
        c = certificate_transport_subdivision(certificate_from_trace(host), certificate_from_trace(box.complex), sub)
        assert verify_certificate(thickness_problem(sub.complex), c)


def test_transport_gamma_of_relation_pairs():
    box = tree_box_edge_complex(path_graph(3))
    host = C4()
    sub = subdivide(host, box.complex, box.J1, box.J2)
    rel = sub.complex.relation
    from sidocert.complex import pair

    for a, b in host.relation:
        assert pair(sub.gamma(a), sub.gamma(b)) in rel


def test_transport_precondition():
    # J1 spanning a 4-cycle of the insert is rejected
    N = C4()
    sub = subdivide(trivial(2), N, {1, 2, 3, 4}, set())
    with pytest.raises(PreconditionError):
        certificate_transport_subdivision(MembershipCertificate(), certificate_from_trace(N), sub)
