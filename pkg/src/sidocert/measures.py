"""Exact distributions on ``V(G)^S``, conditionally independent couplings and entropies.

Probabilities are kept as :class:`fractions.Fraction` so that marginal and
conditional-independence identities can be checked exactly.  Relative
entropies involve logarithms and are evaluated with mpmath at 160 bits.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import mpmath

from .complex import ReflectionComplex
from .graphs import GraphError, Hypergraph
from .setfun import SizeCapError

log = logging.getLogger(__name__)

ENTROPY_PREC = 160
DEFAULT_TOL = 1e-9
DEFAULT_MAX_STATE = 10**7


class MeasureError(ValueError):
    pass


class JointFactorMismatchError(MeasureError):
    pass


class SupportError(MeasureError):
    pass


class NotAHomomorphismMeasureError(MeasureError):
    pass


class MarginalMismatchError(MeasureError):
    pass


class NotAForestError(MeasureError):
    pass


class DistTable:
    """Probability distribution on tuples indexed by ``coords`` with values in ``V(G)``."""

    __slots__ = ("target", "coords", "probs", "_index")

    def __init__(self, target: Hypergraph, coords: Sequence, probs: Mapping[tuple, Fraction], check: bool = True):
        self.target = target
        self.coords = tuple(coords)
        if len(set(self.coords)) != len(self.coords):
            raise MeasureError("duplicate coordinates")
        self.probs = {x: Fraction(p) for x, p in probs.items() if p}
        self._index = {c: i for i, c in enumerate(self.coords)}
        if check:
            if sum(self.probs.values(), Fraction(0)) != 1:
                raise MeasureError("probabilities do not sum to 1")
            verts = set(target.vertices)
            for x, p in self.probs.items():
                if p < 0:
                    raise MeasureError("negative probability")
                if len(x) != len(self.coords) or not set(x) <= verts:
                    raise MeasureError(f"tuple {x} is not in V(G)^S")

    def __eq__(self, other):
        if not isinstance(other, DistTable):
            return NotImplemented
        return self.coords == other.coords and self.probs == other.probs

    def __len__(self):
        return len(self.probs)

    def __repr__(self):
        return f"DistTable(coords={list(self.coords)}, support={len(self.probs)})"

    def support(self) -> set:
        return set(self.probs)

    def position(self, c) -> int:
        return self._index[c]

    def reorder(self, coords: Sequence) -> "DistTable":
        idx = [self._index[c] for c in coords]
        if sorted(idx) != list(range(len(self.coords))):
            raise MeasureError("reorder needs a permutation of the coordinates")
        return DistTable(self.target, coords, {tuple(x[i] for i in idx): p for x, p in self.probs.items()}, check=False)

    def relabel(self, mapping: Mapping) -> "DistTable":
        """Rename coordinates, then sort them so equal measures compare equal."""
        renamed = [mapping[c] for c in self.coords]
        order = sorted(range(len(renamed)), key=lambda i: renamed[i])
        probs = {tuple(x[i] for i in order): p for x, p in self.probs.items()}
        return DistTable(self.target, [renamed[i] for i in order], probs, check=False)

    def to_json(self) -> dict:
        return {
            "coords": list(self.coords),
            "table": [
                {"tuple": list(x), "prob": f"{p.numerator}/{p.denominator}"}
                for x, p in sorted(self.probs.items(), key=lambda kv: tuple(map(str, kv[0])))
            ],
        }


def _ordered_edges(G: Hypergraph):
    for e in sorted(G.edges, key=lambda e: sorted(map(str, e))):
        yield from itertools.permutations(sorted(e, key=str))


def uniform_edge(G: Hypergraph, coords: Sequence | None = None) -> DistTable:
    """Uniform distribution on ordered edges (all k! orderings of each edge)."""
    if not G.edges:
        raise GraphError("target graphs must have at least one edge")
    coords = tuple(range(1, G.arity + 1)) if coords is None else tuple(coords)
    tuples = list(_ordered_edges(G))
    p = Fraction(1, len(tuples))
    return DistTable(G, coords, {x: p for x in tuples}, check=False)


def kappa(G: Hypergraph, coord=1) -> DistTable:
    """Degree-proportional vertex distribution, the endpoint law of a random edge."""
    return marginal(uniform_edge(G), {coord: 1})


def _normalize_beta(mu: DistTable, beta) -> dict:
    if isinstance(beta, Mapping):
        beta = dict(beta)
    else:
        beta = {c: c for c in beta}
    img = list(beta.values())
    if len(set(img)) != len(img):
        raise MeasureError("labeling is not injective")
    for c in img:
        if c not in mu._index:
            raise MeasureError(f"{c!r} is not a coordinate")
    return beta


def marginal(mu: DistTable, beta) -> DistTable:
    """Vertex factor along ``beta``: a map ``label -> coordinate`` or an iterable of coordinates."""
    beta = _normalize_beta(mu, beta)
    labels = list(beta)
    idx = [mu._index[beta[l]] for l in labels]
    out: dict = {}
    for x, p in mu.probs.items():
        key = tuple(x[i] for i in idx)
        out[key] = out.get(key, 0) + p
    return DistTable(mu.target, labels, out, check=False)


def _fresh_names(existing: Sequence, needed: Sequence) -> dict:
    if all(isinstance(c, int) for c in list(existing) + list(needed)):
        nxt = max(existing, default=0) + 1
        out = {}
        for c in sorted(needed):
            out[c] = nxt
            nxt += 1
        return out
    return {c: ("copy", c) for c in needed}


def ci_coupling_maps(mu1: DistTable, mu2: DistTable, beta1, beta2, names: Mapping | None = None):
    """Conditionally independent coupling over the joint vertex factor given by the labelings.

    Returns the coupled table and the coordinate map applied to ``mu2``.
    """
    beta1 = _normalize_beta(mu1, beta1)
    beta2 = _normalize_beta(mu2, beta2)
    if set(beta1) != set(beta2):
        raise MeasureError("labelings must share one label set")
    labels = sorted(beta1, key=str)
    m1 = marginal(mu1, {l: beta1[l] for l in labels})
    m2 = marginal(mu2, {l: beta2[l] for l in labels})
    if m1.probs != m2.probs:
        raise JointFactorMismatchError("beta1 and beta2 do not define a joint vertex factor")
    glued2 = {beta2[l]: beta1[l] for l in labels}
    rest = [c for c in mu2.coords if c not in glued2]
    fresh = dict(names) if names is not None else _fresh_names(mu1.coords, rest)
    tau2 = dict(glued2)
    tau2.update({c: fresh[c] for c in rest})
    if set(fresh[c] for c in rest) & set(mu1.coords):
        raise MeasureError("fresh coordinate names collide with existing ones")

    key1 = [mu1._index[beta1[l]] for l in labels]
    key2 = [mu2._index[beta2[l]] for l in labels]
    rest_idx = [mu2._index[c] for c in rest]
    groups: dict = {}
    for x2, p2 in mu2.probs.items():
        groups.setdefault(tuple(x2[i] for i in key2), []).append((tuple(x2[i] for i in rest_idx), p2))
    shared = m1.probs
    out: dict = {}
    for x1, p1 in mu1.probs.items():
        k = tuple(x1[i] for i in key1)
        p3 = shared[k]
        for tail, p2 in groups.get(k, ()):
            out[x1 + tail] = p1 * p2 / p3
    coords = mu1.coords + tuple(fresh[c] for c in rest)
    return DistTable(mu1.target, coords, out, check=False), tau2


def ci_coupling(mu1: DistTable, mu2: DistTable, beta1, beta2, names: Mapping | None = None) -> DistTable:
    return ci_coupling_maps(mu1, mu2, beta1, beta2, names)[0]


@dataclass
class EntropyReport:
    value: mpmath.mpf
    terms: int

    def __float__(self):
        return float(self.value)


def _log_frac(p: Fraction):
    return mpmath.log(mpmath.mpf(p.numerator)) - mpmath.log(mpmath.mpf(p.denominator))


def relative_entropy(mu: DistTable, nu: DistTable) -> EntropyReport:
    if mu.coords != nu.coords:
        nu = nu.reorder(mu.coords)
    with mpmath.workprec(ENTROPY_PREC):
        total = mpmath.mpf(0)
        for x in sorted(mu.probs, key=lambda t: tuple(map(str, t))):
            p = mu.probs[x]
            q = nu.probs.get(x)
            if not q:
                raise SupportError(f"{x} has positive mass but zero reference mass")
            total += p * (_log_frac(p) - _log_frac(q))
        return EntropyReport(+total, len(mu.probs))


def entropy_D(mu: DistTable) -> EntropyReport:
    """Relative entropy against the uniform distribution on ``V(G)^S``."""
    n = len(mu.target.vertices)
    with mpmath.workprec(ENTROPY_PREC):
        total = mpmath.mpf(0)
        for x in sorted(mu.probs, key=lambda t: tuple(map(str, t))):
            p = mu.probs[x]
            total += p * _log_frac(p)
        total += len(mu.coords) * mpmath.log(n)
        return EntropyReport(+total, len(mu.probs))


def D_e(G: Hypergraph) -> mpmath.mpf:
    return entropy_D(uniform_edge(G)).value


def D_v(G: Hypergraph) -> mpmath.mpf:
    return entropy_D(kappa(G)).value


def evaluate_scheme(M: ReflectionComplex, G: Hypergraph, max_state: int = DEFAULT_MAX_STATE) -> DistTable:
    """The coupling-structure measure of ``M`` evaluated in ``G``.

    Starts from a uniform random edge on the trivial complex and, for each
    trace step ``(L, X)``, couples the current table with a copy of its
    marginal on ``L`` over the marginal on ``X``.
    """
    if G.arity != M.arity:
        raise MeasureError("target arity differs from the complex arity")
    n = len(G.vertices)
    if n ** len(M.vertices) > max_state:
        raise SizeCapError(f"|V(G)|^|V(M)| = {n}^{len(M.vertices)} exceeds the state cap {max_state}")
    mu = uniform_edge(G, range(1, M.arity + 1))
    for step in M.steps():
        L = sorted(step.L)
        copy = marginal(mu, L)
        X = sorted(step.X)
        names = {c: step.tau2[c] for c in L if c not in step.X}
        mu = ci_coupling(mu, copy, {x: x for x in X}, {x: x for x in X}, names)
    return mu.reorder(M.vertices)


def check_ci_pair(mu: DistTable, A: Iterable, B: Iterable) -> bool:
    """Exact test that the marginals on A and B are conditionally independent over A & B."""
    A, B = frozenset(A), frozenset(B)
    for c in A | B:
        if c not in mu._index:
            raise MeasureError(f"{c!r} is not a coordinate")
    U = sorted(A | B, key=str)
    I = sorted(A & B, key=str)
    As = sorted(A, key=str)
    Bs = sorted(B, key=str)
    mU = marginal(mu, U).probs
    mI = marginal(mu, I).probs
    mA = marginal(mu, As).probs
    mB = marginal(mu, Bs).probs
    # enumerate tuples on U that have positive mass on both A and B parts
    byI_A: dict = {}
    for xa, pa in mA.items():
        loc = {c: xa[i] for i, c in enumerate(As)}
        byI_A.setdefault(tuple(loc[c] for c in I), []).append((loc, pa))
    byI_B: dict = {}
    for xb, pb in mB.items():
        loc = {c: xb[i] for i, c in enumerate(Bs)}
        byI_B.setdefault(tuple(loc[c] for c in I), []).append((loc, pb))
    for k, pI in mI.items():
        for la, pa in byI_A.get(k, ()):
            for lb, pb in byI_B.get(k, ()):
                full = dict(la)
                full.update(lb)
                x = tuple(full[c] for c in U)
                if mU.get(x, 0) * pI != pa * pb:
                    return False
    return True


def _is_hom(x: tuple, pos: dict, H: Hypergraph, G_edges: frozenset) -> bool:
    for e in H.edges:
        img = frozenset(x[pos[v]] for v in e)
        if len(img) != len(e) or img not in G_edges:
            return False
    return True


@dataclass
class WitnessReport:
    ok: bool
    D: mpmath.mpf
    bound: mpmath.mpf
    D_e: mpmath.mpf
    D_v: mpmath.mpf
    n_edges: int

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "D": mpmath.nstr(self.D, 20),
            "bound": mpmath.nstr(self.bound, 20),
            "D_e": mpmath.nstr(self.D_e, 20),
            "D_v": mpmath.nstr(self.D_v, 20),
            "edges": self.n_edges,
        }


def witness_check(mu: DistTable, H: Hypergraph, G: Hypergraph, tol: float = DEFAULT_TOL) -> WitnessReport:
    if set(mu.coords) != set(H.vertices):
        raise MeasureError("coordinates of the measure must be the vertices of H")
    pos = mu._index
    for x in mu.probs:
        if not _is_hom(x, pos, H, G.edges):
            raise NotAHomomorphismMeasureError(f"{x} is not a homomorphism")
    with mpmath.workprec(ENTROPY_PREC):
        D = entropy_D(mu).value
        de, dv = D_e(G), D_v(G)
        bound = H.n_edges * de
        ok = bool(D <= bound + tol)
    return WitnessReport(ok, D, bound, de, dv, H.n_edges)


@dataclass
class ForestBoundReport:
    ok: bool
    D: mpmath.mpf
    bound: mpmath.mpf

    def __bool__(self):
        return self.ok


def forest_bound_check(mu: DistTable, H: Hypergraph, tol: float = DEFAULT_TOL) -> ForestBoundReport:
    """``D(mu) >= D_e |E| - D_v (2|E| - |V|)`` for measures with edge and vertex marginals of a random edge."""
    if not H.is_forest():
        raise NotAForestError("frame is not a forest")
    G = mu.target
    tau = uniform_edge(G)
    kap = kappa(G)
    for e in H.edges:
        a, b = sorted(e, key=str)
        if marginal(mu, {1: a, 2: b}).probs != tau.probs:
            raise MarginalMismatchError(f"edge marginal on {sorted(e, key=str)} is not a uniform random edge")
    for v in H.vertices:
        if marginal(mu, {1: v}).probs != kap.probs:
            raise MarginalMismatchError(f"vertex marginal on {v} is not the degree distribution")
    m, n = H.n_edges, len(H.vertices)
    with mpmath.workprec(ENTROPY_PREC):
        D = entropy_D(mu).value
        bound = D_e(G) * m - D_v(G) * (2 * m - n)
        ok = bool(D >= bound - tol)
    return ForestBoundReport(ok, D, bound)


@dataclass
class ProbeReport:
    relation_max_abs: float
    sampled_min: float
    s_inner: float
    relation_pairs: int
    sampled_pairs: int
    tol: float
    ok: bool = field(init=False)

    def __post_init__(self):
        self.ok = (
            self.relation_max_abs <= self.tol
            and self.sampled_min >= -self.tol
            and self.s_inner >= -self.tol
        )

    def __bool__(self):
        return self.ok


def supermodularity_probe(
    M: ReflectionComplex,
    G: Hypergraph,
    samples: int = 200,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    max_state: int = DEFAULT_MAX_STATE,
) -> ProbeReport:
    """Check the entropy set function ``g(B) = D(f_B(G))`` against t-vectors and ``s_H(V)``."""
    mu = evaluate_scheme(M, G, max_state)
    cache: dict = {frozenset(): mpmath.mpf(0)}

    def g(B: frozenset):
        if B not in cache:
            cache[B] = entropy_D(marginal(mu, sorted(B))).value
        return cache[B]

    def inner_t(A, B):
        A, B = frozenset(A), frozenset(B)
        return g(A | B) - g(A) - g(B) + g(A & B)

    with mpmath.workprec(ENTROPY_PREC):
        rel = [abs(inner_t(a, b)) for a, b in M.relation]
        rng = random.Random(seed)
        V = list(M.vertices)
        vals = []
        for _ in range(samples):
            A = frozenset(v for v in V if rng.random() < 0.5)
            B = frozenset(v for v in V if rng.random() < 0.5)
            vals.append(inner_t(A, B))
        H = M.frame()
        s_inner = -g(frozenset(V)) + sum((g(frozenset(e)) for e in H.edges), mpmath.mpf(0))
    return ProbeReport(
        float(max(rel, default=0)),
        float(min(vals, default=0)),
        float(s_inner),
        len(rel),
        len(vals),
        tol,
    )
