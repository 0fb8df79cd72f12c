"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

from __future__ import annotations

import itertools
import json
import random
import time
from fractions import Fraction

import mpmath

from sidocert.catalog import (
    bipartite_3side,
    complete_k_partite,
    even_cycle_complex,
    hypercube_complex,
    reflection_tree,
    star_complex,
    tight_path,
    tree_arrangeable_complex,
    tree_complex,
)
from sidocert.certify import (
    FarkasRefutation,
    MembershipCertificate,
    MembershipProblem,
    decide_membership,
    in_class_Ck,
    is_weakly_thick,
    thickness_problem,
    verify_certificate,
    verify_refutation,
)
from sidocert.cli import EXIT_PASS, main
from sidocert.complex import frame, from_trace, is_k_reducible, reflect_step, trivial
from sidocert.graphs import Hypergraph, TargetGraph, complete_graph, path_graph, star_graph
from sidocert.homcount import all_targets, count_hom, d_tau, random_targets, sweep, sweep_targets
from sidocert.measures import (
    D_e,
    DistTable,
    ci_coupling,
    entropy_D,
    evaluate_scheme,
    forest_bound_check,
    kappa,
    marginal,
    relative_entropy,
    supermodularity_probe,
    uniform_edge,
    witness_check,
)
from sidocert.setfun import GroundSet, SetFunction, h_vector, indicator, t_vector

from acceptance_log import record
from helpers import random_trace_steps
from oracles import (
    is_supermodular_nonneg,
    marginal_dict,
    naive_hom_count,
    random_forest_edges,
    random_positive_table,
    random_tree_edges,
    recombine_certificate,
    setfun_as_dict,
)

TOL = 1e-9
C4_TRACE = [({1, 2}, {1}), ({1, 2, 3}, {2, 3})]
PATH3 = TargetGraph.of(path_graph(3))


def corpus():
    return {
        "single edge": trivial(2),
        "P3": tree_complex(path_graph(3)),
        "star K1,3": star_complex(3),
        "C4": from_trace(2, C4_TRACE),
        "C6": even_cycle_complex(6),
        "reflection tree": reflection_tree(star_graph(3), [({1, 2, 3, 4}, {2, 3, 4})]),
        "tree-arrangeable": tree_arrangeable_complex([("op1", 1), ("op1", 2), ("op2", 1, {2, 3})]),
        "3side(1,1,1)": bipartite_3side((1, 1, 1)),
        "3side(2,1,1)": bipartite_3side((2, 1, 1)),
        "Q3": hypercube_complex(3),
    }


def test_criterion_1_certification_corpus(tmp_path):
    failures = []
    slowest = 0.0
    full_runs = 0
    for name, M in corpus().items():
        src = tmp_path / "complex.json"
        src.write_text(json.dumps(M.to_json()))
        modes = ["auto"] + (["full"] if len(M.vertices) <= 6 else [])
        for mode in modes:
            cert = tmp_path / f"cert-{mode}.json"
            t0 = time.perf_counter()
            code = main(["certify", str(src), "--mode", mode, "--out", str(cert)])
            slowest = max(slowest, time.perf_counter() - t0)
            if code != EXIT_PASS or main(["verify-cert", str(src), str(cert)]) != EXIT_PASS:
                failures.append(f"{name}/{mode}")
                continue
            # independent recomputation of the certified combination
            data = json.loads(cert.read_text())
            c = MembershipCertificate.from_json(data)
            p = thickness_problem(M)
            if recombine_certificate(c) != setfun_as_dict(p.target) or not verify_certificate(p, c):
                failures.append(f"{name}/{mode} recombination")
            full_runs += mode == "full"
    ok = not failures and slowest <= 600
    record(1, ok, f"10 complexes certified and verified, {full_runs} full-LP runs, slowest {slowest:.2f}s, failures {failures}")
    assert ok


def test_criterion_2_sidorenko_sweeps():
    targets = list(all_targets(4)) + random_targets(5, 200, seed=2024)
    assert len(targets) == 263
    violations = {}
    checked = 0
    for name, M in corpus().items():
        H = M.frame()
        assert len(H.vertices) <= 8
        rep = sweep(H, targets)
        checked += rep.checked
        violations[name] = len(rep.violations)
    # spot check the fast counter against brute force
    rng = random.Random(1)
    F = corpus()["C6"].frame()
    for G in rng.sample(targets, 10):
        assert count_hom(F, G) == naive_hom_count(F.vertices, F.edges, G.vertices, G.edges)
    control = sweep(complete_graph(3), targets)
    ok = sum(violations.values()) == 0 and not control.ok
    record(
        2,
        ok,
        f"{checked} checks over 10 frames, {sum(violations.values())} violations; triangle control: {len(control.violations)} violations",
    )
    assert ok


def test_criterion_3_c4_scheme_on_path():
    M = from_trace(2, C4_TRACE)
    H = M.frame()
    mu = evaluate_scheme(M, PATH3)
    homs = {
        img
        for img in itertools.product(PATH3.vertices, repeat=4)
        if all(frozenset(img[v - 1] for v in e) in PATH3.edges for e in H.edges)
    }
    support_ok = set(mu.probs) <= homs and len(homs) == 8
    tau = uniform_edge(PATH3).probs
    edges_ok = all(
        marginal_dict(mu.probs, [min(e) - 1, max(e) - 1]) == tau and marginal(mu, sorted(e)).probs == tau for e in H.edges
    )
    kap = kappa(PATH3).probs
    verts_ok = all(marginal_dict(mu.probs, [v - 1]) == kap for v in H.vertices)
    w = witness_check(mu, H, PATH3, TOL)
    with mpmath.workprec(160):
        Dtau = d_tau(H, PATH3).value
        Df = entropy_D(mu).value
        tau_ok = abs(Dtau - mpmath.log(mpmath.mpf(81) / 8)) <= TOL and Dtau <= Df + TOL
        bound_ok = Df <= 4 * D_e(PATH3) + TOL
    ok = support_ok and edges_ok and verts_ok and w.ok and bound_ok and tau_ok
    record(
        3,
        ok,
        f"support {len(mu)}/8 homs, edge marginals {edges_ok}, vertex marginals {verts_ok}, "
        f"D(f)={float(Df):.6f} <= 4D_e={float(4 * D_e(PATH3)):.6f}, D(tau)={float(Dtau):.6f}",
    )
    assert ok


def _random_pair(rng, G):
    """Two positive tables on coordinates (1,2) sharing the marginal of coordinate 1."""
    keys = list(itertools.product(G.vertices, repeat=2))
    mu1 = DistTable(G, (1, 2), random_positive_table(keys, rng))
    m = marginal(mu1, [1]).probs
    probs = {}
    for (x,), px in m.items():
        ws = [rng.randint(1, 9) for _ in G.vertices]
        for y, wy in zip(G.vertices, ws):
            probs[(x, y)] = px * Fraction(wy, sum(ws))
    return mu1, DistTable(G, (1, 2), probs)


def _transport_coupling(rng, mu1, mu2, G):
    """A coupling of mu1 and mu2 over coordinate 1 built by north-west corner transport in shuffled order."""
    m = marginal(mu1, [1]).probs
    out = {}
    for (x,), px in m.items():
        a = [(y, mu1.probs.get((x, y), 0) / px) for y in G.vertices]
        b = [(z, mu2.probs.get((x, z), 0) / px) for z in G.vertices]
        rng.shuffle(a)
        rng.shuffle(b)
        i = j = 0
        ra, rb = a[0][1], b[0][1]
        while i < len(a) and j < len(b):
            q = min(ra, rb)
            if q:
                key = (x, a[i][0], b[j][0])
                out[key] = out.get(key, 0) + px * q
            ra -= q
            rb -= q
            if ra == 0:
                i += 1
                ra = a[i][1] if i < len(a) else 0
            if rb == 0:
                j += 1
                rb = b[j][1] if j < len(b) else 0
    return DistTable(G, (1, 2, 3), out)


def test_criterion_4_entropy_identities():
    rng = random.Random(404)
    G = TargetGraph.of(complete_graph(3))
    beta = {"f": 1}
    worst_ci = 0.0
    for _ in range(100):
        mu1, mu2 = _random_pair(rng, G)
        nu1, nu2 = _random_pair(rng, G)
        mu4, nu4 = ci_coupling(mu1, mu2, beta, beta), ci_coupling(nu1, nu2, beta, beta)
        mu3, nu3 = marginal(mu1, [1]), marginal(nu1, [1])
        with mpmath.workprec(160):
            lhs = relative_entropy(mu4, nu4).value
            rhs = relative_entropy(mu1, nu1).value + relative_entropy(mu2, nu2).value - relative_entropy(mu3, nu3).value
            worst_ci = max(worst_ci, float(abs(lhs - rhs)))
    ci_ok = worst_ci <= TOL

    worst_gap = float("inf")
    for _ in range(100):
        mu1, mu2 = _random_pair(rng, G)
        ci = ci_coupling(mu1, mu2, beta, beta)
        other = _transport_coupling(rng, mu1, mu2, G)
        assert marginal(other, [1, 2]) == mu1 and marginal(other, {1: 1, 2: 3}).probs == mu2.probs
        lam = Fraction(rng.randint(0, 10), 10)
        keys = set(ci.probs) | set(other.probs)
        mix = DistTable(G, (1, 2, 3), {k: lam * ci.probs.get(k, 0) + (1 - lam) * other.probs.get(k, 0) for k in keys})
        with mpmath.workprec(160):
            gap = entropy_D(mix).value - entropy_D(ci).value
        worst_gap = min(worst_gap, float(gap))
    mixture_ok = worst_gap >= -TOL

    forest_ok = True
    checks = 0
    for _ in range(20):
        n = rng.randint(2, 6)
        T = Hypergraph.from_edges(random_tree_edges(n, rng), vertices=range(1, n + 1))
        M = tree_complex(T)
        for G2 in (random_targets(rng.randint(2, 4), 1, seed=rng.randrange(10**6))[0] for _ in range(10)):
            r = forest_bound_check(evaluate_scheme(M, G2), M.frame(), TOL)
            forest_ok &= r.ok
            checks += 1
    ok = ci_ok and mixture_ok and forest_ok
    record(
        4,
        ok,
        f"CI identity worst error {worst_ci:.2e}; mixture gap min {worst_gap:.3e}; forest bound {checks} checks {'ok' if forest_ok else 'FAILED'}",
    )
    assert ok


def _frame_identity_holds(step) -> bool:
    N = step.before.base.sub(step.L)
    k = step.before.arity
    t2 = step.tau2
    expected = set(frame(step.before.base, k).edges) | {frozenset(t2[v] for v in e) for e in frame(N, k).edges}
    return set(step.after.frame().edges) == expected


def test_criterion_5_structural_identities():
    rng = random.Random(505)
    reducible = frame_ok = steps = 0
    for i in range(1000):
        k = 2 if i % 2 == 0 else 3
        M = trivial(k)
        good = True
        for L, X in random_trace_steps(k, rng, max_vertices=8):
            st = reflect_step(M, L, X)
            good &= _frame_identity_holds(st)
            steps += 1
            M = st.after
        frame_ok += good
        reducible += bool(is_k_reducible(M, k))

    inclusion = 0
    for _ in range(1000):
        n = rng.randint(1, 8)
        V = list(range(1, n + 1))
        A1 = frozenset(v for v in V if rng.random() < 0.6)
        A2 = frozenset(v for v in V if rng.random() < 0.6)
        cand = [(a, b) for a, b in itertools.combinations(V, 2) if {a, b} <= A1 or {a, b} <= A2 or not {a, b} <= A1 | A2]
        H = Hypergraph.from_edges([e for e in cand if rng.random() < 0.5], vertices=V)
        g = GroundSet(tuple(V))
        lhs = h_vector(H, A1 | A2, g)
        rhs = h_vector(H, A1, g) + h_vector(H, A2, g) - h_vector(H, A1 & A2, g) - t_vector(g, A1, A2)
        inclusion += lhs == rhs

    forests = 0
    for _ in range(50):
        n = rng.randint(1, 6)
        F = Hypergraph.from_edges(random_forest_edges(n, rng), vertices=range(1, n + 1))
        g = GroundSet(F.vertices)
        p = MembershipProblem(g, h_vector(F, F.vertices, g) * -1)
        c = decide_membership(p, "full")
        forests += isinstance(c, MembershipCertificate) and verify_certificate(p, c)
    ok = reducible == 1000 and frame_ok == 1000 and inclusion == 1000 and forests == 50
    record(
        5,
        ok,
        f"reducible {reducible}/1000, frame identity on {steps} steps ({frame_ok}/1000 traces), "
        f"inclusion identity {inclusion}/1000, forests in cone {forests}/50",
    )
    assert ok


def _bh_isomorphism(MA, MB):
    for perm in itertools.permutations(MA.vertices):
        m = dict(zip(MB.vertices, perm))
        if MB.base.relabel(m) == MA.base:
            return m
    return None


def test_criterion_6_uniqueness():
    MA = from_trace(2, C4_TRACE)
    MB = from_trace(2, [({1, 2}, {2}), ({1, 2, 3}, {1, 3})])
    assert MA.trace != MB.trace
    m = _bh_isomorphism(MA, MB)
    assert m is not None and m != {v: v for v in MB.vertices}
    identical = []
    for G in (PATH3, TargetGraph.of(path_graph(2))):
        a = evaluate_scheme(MA, G).relabel({v: v for v in MA.vertices})
        b = evaluate_scheme(MB, G).relabel(m)
        same = a.coords == b.coords and a.probs == b.probs
        same &= json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)
        identical.append(same)
    ok = all(identical)
    record(6, ok, f"two C4 traces related by {m}: identical tables on path-3 {identical[0]}, on K2 {identical[1]}")
    assert ok


def test_criterion_7_hypergraphs():
    results = []
    for n in (4, 5):
        M = tight_path(3, n)
        cls = bool(in_class_Ck(M))
        p = thickness_problem(M, weak=True)
        c = is_weakly_thick(M)
        cert = isinstance(c, MembershipCertificate) and verify_certificate(p, c)
        sw = sweep_targets(M.frame(), 4, arity=3)
        results.append((f"tight path n={n}", cls and cert and sw.ok and sw.checked == 15))
    K = complete_k_partite(2, 2, 2)
    p = thickness_problem(K, weak=True)
    c = is_weakly_thick(K)
    results.append(("octahedron faces", isinstance(c, MembershipCertificate) and verify_certificate(p, c)))
    ok = all(r for _, r in results)
    record(7, ok, ", ".join(f"{name} {'ok' if r else 'FAILED'}" for name, r in results) + "; 15 targets each")
    assert ok


def _random_problem(rng):
    n = rng.randint(1, 5)
    V = tuple(range(1, n + 1))
    g = GroundSet(V)
    subs = [frozenset(s) for r in range(n + 1) for s in itertools.combinations(V, r)]
    pairs = [(A, B) for A in subs for B in subs if not A <= B and not B <= A]
    sub = tuple(("t", A, B) for A, B in rng.sample(pairs, min(len(pairs), rng.randint(0, 3))))
    if rng.random() < 0.5:
        # a member: nonnegative combination of cone generators plus subspace terms
        f = SetFunction(g)
        for _ in range(rng.randint(1, 4)):
            if pairs and rng.random() < 0.5:
                A, B = rng.choice(pairs)
                f = f + t_vector(g, A, B) * rng.randint(1, 3)
            else:
                f = f + indicator(g, rng.choice(subs)) * rng.randint(1, 3)
        for _, A, B in sub:
            f = f + t_vector(g, A, B) * rng.randint(-3, 3)
        f = f + indicator(g, set()) * rng.randint(-2, 2)
    else:
        f = SetFunction(g, {rng.randrange(1 << n): Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(1, 4))})
    return MembershipProblem(g, f, sub)


def test_criterion_8_duality_soundness():
    rng = random.Random(808)
    certs = refs = bad = 0
    for _ in range(50):
        p = _random_problem(rng)
        r = decide_membership(p, "full")
        if isinstance(r, MembershipCertificate):
            certs += verify_certificate(p, r) and recombine_certificate(r) == setfun_as_dict(p.target)
        elif isinstance(r, FarkasRefutation):
            y = setfun_as_dict(r.functional)
            refs += verify_refutation(p, r) and is_supermodular_nonneg(y, p.ground.vertices)
        else:
            bad += 1
    g = GroundSet((1,))
    p = MembershipProblem(g, indicator(g, {1}) * -1)
    neg = decide_membership(p, "full")
    neg_ok = isinstance(neg, FarkasRefutation) and verify_refutation(p, neg)
    ok = certs + refs == 50 and bad == 0 and neg_ok
    record(8, ok, f"50 problems: {certs} certificates, {refs} refutations, {bad} other; -1_{{1}} refuted {neg_ok}")
    assert ok


def test_criterion_9_supermodularity_probe():
    r = supermodularity_probe(from_trace(2, C4_TRACE), PATH3, samples=200, seed=9, tol=TOL)
    ok = r.ok and r.relation_max_abs <= TOL and r.sampled_min >= -TOL and r.s_inner >= -TOL and r.sampled_pairs == 200
    record(
        9,
        ok,
        f"relation pairs {r.relation_pairs} max |<g,t>| {float(r.relation_max_abs):.2e}, "
        f"{r.sampled_pairs} sampled min {float(r.sampled_min):.3e}, <g,s_H(V)> {float(r.s_inner):.4f}",
    )
    assert ok
