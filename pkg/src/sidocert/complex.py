"""b-hypergraphs, the two gluing operations, reflections and reflection complexes.

Vertices of complexes are positive integers.  Gluing keeps the identifiers of
the first operand; vertices of the second operand that are not identified get
fresh consecutive identifiers after the current maximum, assigned in
ascending order of their source identifiers.  This makes every trace replay
bit-identically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .graphs import Hypergraph, sorted_vertices
from .setfun import ArityError


class ComplexError(ValueError):
    pass


class InvalidMapError(ComplexError):
    pass


class NotAnEdgeError(ComplexError):
    pass


class InvalidSubsetError(ComplexError):
    pass


def set_key(A) -> tuple:
    return (len(A), sorted_vertices(A))


def pair(A, B) -> tuple:
    """Canonical unordered pair of vertex sets."""
    A, B = frozenset(A), frozenset(B)
    return (A, B) if set_key(A) <= set_key(B) else (B, A)


def fmt_set(A) -> str:
    return "{" + ",".join(map(str, sorted_vertices(A))) + "}"


@dataclass(frozen=True, eq=False)
class BHypergraph:
    """Hypergraph with a symmetric relation on vertex subsets.

    ``second_edges`` / ``second_relation`` record which members were added as
    second-type items by a star-gluing; they do not take part in equality.
    """

    vertices: tuple
    edges: frozenset
    relation: frozenset = frozenset()
    second_edges: frozenset = field(default=frozenset())
    second_relation: frozenset = field(default=frozenset())

    def __post_init__(self):
        vs = tuple(sorted_vertices(self.vertices))
        vset = frozenset(vs)
        es = frozenset(frozenset(e) for e in self.edges)
        rel = frozenset(pair(a, b) for a, b in self.relation)
        for e in es:
            if not e <= vset:
                raise ComplexError(f"edge {fmt_set(e)} is not a subset of the vertex set")
        for a, b in rel:
            if not (a <= vset and b <= vset):
                raise ComplexError("relation members must be vertex subsets")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)
        object.__setattr__(self, "relation", rel)

    def __eq__(self, other):
        if not isinstance(other, BHypergraph):
            return NotImplemented
        return (self.vertices, self.edges, self.relation) == (other.vertices, other.edges, other.relation)

    def __hash__(self):
        return hash((self.vertices, self.edges, self.relation))

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def sub(self, W) -> "BHypergraph":
        """Sub-b-hypergraph spanned on ``W``."""
        W = frozenset(W)
        return BHypergraph(
            tuple(v for v in self.vertices if v in W),
            frozenset(e for e in self.edges if e <= W),
            frozenset(p for p in self.relation if p[0] <= W and p[1] <= W),
        )

    def relabel(self, mapping: Mapping) -> "BHypergraph":
        f = lambda S: frozenset(mapping[v] for v in S)  # noqa: E731
        return BHypergraph(
            tuple(mapping[v] for v in self.vertices),
            frozenset(f(e) for e in self.edges),
            frozenset(pair(f(a), f(b)) for a, b in self.relation),
            frozenset(f(e) for e in self.second_edges),
            frozenset(pair(f(a), f(b)) for a, b in self.second_relation),
        )

    def __repr__(self):
        return (
            f"BHypergraph(V={list(self.vertices)}, |E|={len(self.edges)}, |B|={len(self.relation)})"
        )


def _check_map(phi: Mapping, verts: frozenset, name: str):
    img = list(phi.values())
    if len(set(img)) != len(img):
        raise InvalidMapError(f"{name} is not injective")
    if not set(img) <= verts:
        raise InvalidMapError(f"{name} maps outside the vertex set")


def glue_maps(M1: BHypergraph, M2: BHypergraph, phi1: Mapping, phi2: Mapping, star: bool = False):
    """Glue ``M1`` and ``M2`` along the label maps; return ``(M, tau1, tau2)``."""
    phi1, phi2 = dict(phi1), dict(phi2)
    if set(phi1) != set(phi2):
        raise InvalidMapError("phi1 and phi2 must share one domain")
    _check_map(phi1, M1.vertex_set, "phi1")
    _check_map(phi2, M2.vertex_set, "phi2")
    if not all(isinstance(v, int) for v in M1.vertices + M2.vertices):
        raise ComplexError("gluing requires integer vertex identifiers")
    tau1 = {v: v for v in M1.vertices}
    tau2 = {phi2[f]: phi1[f] for f in phi1}
    nxt = max(M1.vertices, default=0) + 1
    for v in M2.vertices:
        if v not in tau2:
            tau2[v] = nxt
            nxt += 1
    t1 = lambda S: frozenset(tau1[v] for v in S)  # noqa: E731
    t2 = lambda S: frozenset(tau2[v] for v in S)  # noqa: E731
    edges = {t1(e) for e in M1.edges} | {t2(e) for e in M2.edges}
    rel = {pair(t1(a), t1(b)) for a, b in M1.relation} | {pair(t2(a), t2(b)) for a, b in M2.relation}
    second_e: set = set()
    second_r: set = set()
    if star:
        F1 = frozenset(phi1.values())
        F2 = frozenset(phi2.values())
        K1s = [t1(K) for K in M1.edges if F1 <= K]
        K2s = [t2(K) for K in M2.edges if F2 <= K]
        for K1 in K1s:
            for K2 in K2s:
                e = K1 | K2
                if e not in edges:
                    second_e.add(e)
                p = pair(K1, K2)
                if p not in rel:
                    second_r.add(p)
        edges |= second_e
        rel |= second_r
    V = tuple(sorted(set(tau1.values()) | set(tau2.values())))
    M = BHypergraph(V, frozenset(edges), frozenset(rel), frozenset(second_e), frozenset(second_r))
    return M, tau1, tau2


def glue(M1: BHypergraph, M2: BHypergraph, phi1: Mapping, phi2: Mapping) -> BHypergraph:
    return glue_maps(M1, M2, phi1, phi2)[0]


def glue_star(M1: BHypergraph, M2: BHypergraph, phi1: Mapping, phi2: Mapping) -> BHypergraph:
    return glue_maps(M1, M2, phi1, phi2, star=True)[0]


def frame(M, k: int | None = None) -> Hypergraph:
    """The size-``k`` edges of ``M`` as a k-uniform hypergraph on ``V(M)``."""
    if isinstance(M, ReflectionComplex):
        k = M.arity if k is None else k
        M = M.base
    if k is None:
        k = 2
    return Hypergraph(M.vertices, frozenset(e for e in M.edges if len(e) == k), k)


@dataclass(frozen=True)
class ReflectStep:
    """Everything one reflection produced; used by certificate replays."""

    before: "ReflectionComplex"
    after: "ReflectionComplex"
    L: frozenset
    X: frozenset
    tau2: dict


@dataclass(frozen=True, eq=False)
class ReflectionComplex:
    base: BHypergraph
    arity: int
    trace: tuple = ()

    def __eq__(self, other):
        if not isinstance(other, ReflectionComplex):
            return NotImplemented
        return self.arity == other.arity and self.base == other.base

    def __hash__(self):
        return hash((self.arity, self.base))

    @property
    def vertices(self) -> tuple:
        return self.base.vertices

    @property
    def edges(self) -> frozenset:
        return self.base.edges

    @property
    def relation(self) -> frozenset:
        return self.base.relation

    def frame(self) -> Hypergraph:
        return frame(self.base, self.arity)

    def reflect(self, L, X) -> "ReflectionComplex":
        return reflect(self, L, X)

    def steps(self):
        """Replay the trace from the trivial complex, yielding each step."""
        M = trivial(self.arity)
        for L, X in self.trace:
            step = reflect_step(M, L, X)
            yield step
            M = step.after

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "trace": [{"L": sorted(L), "X": sorted(X)} for L, X in self.trace],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReflectionComplex":
        try:
            k = int(data["arity"])
            trace = [(step["L"], step["X"]) for step in data["trace"]]
        except (KeyError, TypeError) as exc:
            raise ComplexError(f"malformed complex file: {exc}") from None
        return from_trace(k, trace)

    def __repr__(self):
        return f"ReflectionComplex(k={self.arity}, |V|={len(self.vertices)}, steps={len(self.trace)})"


def trivial(k: int = 2) -> ReflectionComplex:
    if k < 2:
        raise ArityError("arity must be at least 2")
    V = tuple(range(1, k + 1))
    return ReflectionComplex(BHypergraph(V, frozenset([frozenset(V)]), frozenset()), k, ())


def reflect_step(M: ReflectionComplex, L, X) -> ReflectStep:
    L, X = frozenset(L), frozenset(X)
    if L not in M.base.edges:
        raise NotAnEdgeError(f"{fmt_set(L)} is not an edge of the complex")
    if not X <= L:
        raise InvalidSubsetError(f"{fmt_set(X)} is not a subset of {fmt_set(L)}")
    N = M.base.sub(L)
    ident = {x: x for x in X}
    out, _, tau2 = glue_maps(M.base, N, ident, ident, star=True)
    after = ReflectionComplex(out, M.arity, M.trace + ((L, X),))
    return ReflectStep(M, after, L, X, tau2)


def reflect(M: ReflectionComplex, L, X) -> ReflectionComplex:
    return reflect_step(M, L, X).after


def from_trace(k: int, trace: Iterable) -> ReflectionComplex:
    M = trivial(k)
    for L, X in trace:
        M = reflect(M, L, X)
    return M


def relabel_complex(M: ReflectionComplex, mapping: Mapping) -> BHypergraph:
    return M.base.relabel(mapping)


@dataclass(frozen=True)
class Decomposition:
    """Proper decomposition tree of an edge; leaves have size at most k."""

    edge: frozenset
    left: "Decomposition | None" = None
    right: "Decomposition | None" = None

    def __bool__(self):
        return True

    def leaves(self) -> list[frozenset]:
        if self.left is None:
            return [self.edge]
        return self.left.leaves() + self.right.leaves()


@dataclass(frozen=True)
class ReducibilityFailure:
    edge: frozenset

    def __bool__(self):
        return False


def is_k_reducible(M, k: int | None = None):
    """Return a decomposition tree of ``V(M)`` or the first edge without a proper split."""
    if isinstance(M, ReflectionComplex):
        k = M.arity if k is None else k
        M = M.base
    if k is None:
        k = 2
    edges = M.edges
    V = M.vertex_set
    if V not in edges:
        return ReducibilityFailure(V)
    splits: dict = {}
    for a, b in M.relation:
        if a in edges and b in edges:
            u = a | b
            if len(a) < len(u) and len(b) < len(u):
                splits.setdefault(u, []).append((a, b))

    for T in sorted(edges, key=set_key):
        if len(T) > k and T not in splits:
            return ReducibilityFailure(T)

    @lru_cache(maxsize=None)
    def tree(T: frozenset) -> Decomposition:
        if len(T) <= k:
            return Decomposition(T)
        a, b = min(splits[T], key=lambda p: (set_key(p[0]), set_key(p[1])))
        return Decomposition(T, tree(a), tree(b))

    return tree(V)
