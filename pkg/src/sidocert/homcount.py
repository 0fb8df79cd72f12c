"""Homomorphism enumeration, exact densities and direct Sidorenko checks."""

from __future__ import annotations

import itertools
import logging
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .graphs import Hypergraph, TargetGraph, sorted_vertices
from .measures import ENTROPY_PREC, EntropyReport, SupportError
from .setfun import SizeCapError

log = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = 10**7
DEFAULT_COUNT_CAP = 10**12


@dataclass
class HomomorphismSet:
    source: Hypergraph
    target: Hypergraph
    maps: list  # tuples indexed like source.vertices

    def __len__(self):
        return len(self.maps)


def _vertex_order(H: Hypergraph) -> list:
    """Decreasing degree, preferring vertices adjacent to ones already placed."""
    deg = H.degrees()
    nbrs = {v: set() for v in H.vertices}
    for e in H.edges:
        for v in e:
            nbrs[v] |= e - {v}
    order: list = []
    placed: set = set()
    rest = list(H.vertices)
    while rest:
        best = max(
            rest,
            key=lambda v: (len(nbrs[v] & placed), deg[v], -H.vertices.index(v)),
        )
        order.append(best)
        placed.add(best)
        rest.remove(best)
    return order


class _Searcher:
    def __init__(self, H: Hypergraph, G: Hypergraph):
        if H.arity != G.arity:
            raise ValueError("source and target arities differ")
        self.H, self.G = H, G
        self.order = _vertex_order(H)
        pos = {v: i for i, v in enumerate(self.order)}
        # edges become checkable once their last vertex (in order) is placed
        self.closing: list[list[tuple]] = [[] for _ in self.order]
        self.partial: list[list[tuple]] = [[] for _ in self.order]
        for e in H.edges:
            idx = sorted(pos[v] for v in e)
            self.closing[idx[-1]].append(tuple(idx))
            for j in idx[1:-1]:
                self.partial[j].append(tuple(i for i in idx if i <= j))
        self.gedges = G.edges
        # all subsets of target edges, used to prune partially placed hyperedges
        self.gparts: set = set()
        if G.arity > 2:
            for e in G.edges:
                for r in range(2, G.arity):
                    self.gparts.update(frozenset(c) for c in itertools.combinations(e, r))
        self.gverts = list(G.vertices)
        self.adj = {v: [] for v in G.vertices}
        for e in G.edges:
            for v in e:
                self.adj[v].extend(w for w in e if w != v)
        for v in self.adj:
            self.adj[v] = sorted_vertices(set(self.adj[v]))
        # a vertex that shares an edge with an earlier vertex takes candidates from that neighbor
        self.anchor: list = []
        for i, v in enumerate(self.order):
            a = None
            for e in H.edges:
                if v in e:
                    for w in e:
                        if w != v and pos[w] < i and (a is None or pos[w] < a):
                            a = pos[w]
            self.anchor.append(a)

    def _ok(self, i: int, img: list) -> bool:
        for idx in self.closing[i]:
            s = frozenset(img[j] for j in idx)
            if len(s) != len(idx) or s not in self.gedges:
                return False
        for idx in self.partial[i]:
            s = frozenset(img[j] for j in idx)
            if len(s) != len(idx) or s not in self.gparts:
                return False
        return True

    def _candidates(self, i: int, img: list):
        a = self.anchor[i]
        return self.gverts if a is None else self.adj[img[a]]

    def run(self, i: int, img: list):
        n = len(self.order)
        if i == n:
            yield tuple(img)
            return
        for c in self._candidates(i, img):
            img.append(c)
            if self._ok(i, img):
                yield from self.run(i + 1, img)
            img.pop()

    def count(self, i: int, img: list) -> int:
        n = len(self.order)
        if i == n:
            return 1
        total = 0
        last = i == n - 1
        for c in self._candidates(i, img):
            img.append(c)
            if self._ok(i, img):
                total += 1 if last else self.count(i + 1, img)
            img.pop()
        return total


def enumerate_hom(H: Hypergraph, G: Hypergraph, cap: int = DEFAULT_ENUM_CAP) -> HomomorphismSet:
    """All maps ``V(H) -> V(G)`` sending edges to edges, as tuples in ``H.vertices`` order."""
    if len(G.vertices) ** len(H.vertices) > cap:
        raise SizeCapError(f"|V(G)|^|V(H)| exceeds the enumeration cap {cap}")
    s = _Searcher(H, G)
    back = [s.order.index(v) for v in H.vertices]
    maps = [tuple(m[j] for j in back) for m in s.run(0, [])]
    maps.sort(key=lambda t: tuple(map(str, t)))
    return HomomorphismSet(H, G, maps)


def count_hom(H: Hypergraph, G: Hypergraph, cap: int = DEFAULT_COUNT_CAP) -> int:
    if len(G.vertices) ** len(H.vertices) > cap:
        raise SizeCapError(f"|V(G)|^|V(H)| exceeds the counting cap {cap}")
    if not H.vertices:
        return 1
    return _Searcher(H, G).count(0, [])


def density(H: Hypergraph, G: Hypergraph) -> Fraction:
    """``t(H, G) = |Hom(H,G)| / |V(G)|^|V(H)|``."""
    return Fraction(count_hom(H, G), len(G.vertices) ** len(H.vertices))


def edge_density(G: Hypergraph) -> Fraction:
    """``t(e, G)``; each edge contributes its k! orderings."""
    n = len(G.vertices)
    return Fraction(math.factorial(G.arity) * G.n_edges, n**G.arity)


@dataclass
class SidorenkoReport:
    ok: bool
    t_H: Fraction
    bound: Fraction
    target: Hypergraph

    @property
    def margin(self) -> Fraction:
        return self.t_H - self.bound

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        f = lambda q: f"{q.numerator}/{q.denominator}"  # noqa: E731
        return {"ok": self.ok, "t_H": f(self.t_H), "t_e_pow": f(self.bound), "target": self.target.to_json()}


def sidorenko_check(H: Hypergraph, G: Hypergraph) -> SidorenkoReport:
    G = TargetGraph.of(G) if not isinstance(G, TargetGraph) else G
    tH = density(H, G)
    bound = edge_density(G) ** H.n_edges
    return SidorenkoReport(tH >= bound, tH, bound, G)


def d_tau(H: Hypergraph, G: Hypergraph) -> EntropyReport:
    """``D(tau(H,G)) = -log t(H,G)``."""
    c = count_hom(H, G)
    if c == 0:
        raise SupportError("Hom(H,G) is empty")
    t = Fraction(c, len(G.vertices) ** len(H.vertices))
    with mpmath.workprec(ENTROPY_PREC):
        v = mpmath.log(mpmath.mpf(t.denominator)) - mpmath.log(mpmath.mpf(t.numerator))
        return EntropyReport(+v, c)


def all_targets(n: int, k: int = 2) -> Iterable[TargetGraph]:
    """Every labeled k-uniform hypergraph on ``{1..n}`` with at least one edge."""
    slots = list(itertools.combinations(range(1, n + 1), k))
    V = tuple(range(1, n + 1))
    for mask in range(1, 1 << len(slots)):
        edges = frozenset(frozenset(slots[i]) for i in range(len(slots)) if mask >> i & 1)
        yield TargetGraph(V, edges, k)


def random_targets(n: int, count: int, seed: int = 0, k: int = 2) -> list[TargetGraph]:
    """Seeded random labeled nonempty targets, each slot present with probability 1/2."""
    rng = random.Random(seed)
    slots = list(itertools.combinations(range(1, n + 1), k))
    if not slots:
        raise ValueError(f"no {k}-edges fit on {n} vertices")
    V = tuple(range(1, n + 1))
    out = []
    while len(out) < count:
        edges = frozenset(frozenset(s) for s in slots if rng.random() < 0.5)
        if edges:
            out.append(TargetGraph(V, edges, k))
    return out


@dataclass
class SweepReport:
    source: Hypergraph
    checked: int = 0
    violations: list = field(default_factory=list)
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "source": self.source.to_json(),
            "checked": self.checked,
            "violations": [r.to_json() for r in self.violations],
            "results": [r.to_json() for r in self.results],
        }


def _check_one(args):
    H, G = args
    return sidorenko_check(H, G)


def sweep(H: Hypergraph, targets: Sequence[Hypergraph], workers: int = 1, keep_results: bool = False) -> SweepReport:
    report = SweepReport(H)
    jobs = [(H, G) for G in targets]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_check_one, jobs, chunksize=8))
    else:
        results = [_check_one(j) for j in jobs]
    for r in results:
        report.checked += 1
        if not r.ok:
            report.violations.append(r)
        if keep_results:
            report.results.append(r)
    return report


def sweep_targets(
    H: Hypergraph,
    max_vertices: int,
    arity: int | None = None,
    random_count: int = 0,
    random_vertices: int | None = None,
    seed: int = 0,
    workers: int = 1,
    keep_results: bool = False,
) -> SweepReport:
    """Check every labeled nonempty target on ``max_vertices`` vertices, plus optional random ones."""
    k = H.arity if arity is None else arity
    targets: list = list(all_targets(max_vertices, k))
    if random_count:
        targets += random_targets(random_vertices or max_vertices + 1, random_count, seed, k)
    return sweep(H, targets, workers, keep_results)
