"""Plain uniform hypergraphs used as frames (sources) and targets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import networkx as nx


class GraphError(ValueError):
    pass


class EmptyTargetError(GraphError):
    pass


def _sort_key(v):
    return (type(v).__name__, v) if not isinstance(v, tuple) else ("tuple", tuple(map(str, v)))


def sorted_vertices(vs: Iterable) -> tuple:
    vs = list(vs)
    try:
        return tuple(sorted(vs))
    except TypeError:
        return tuple(sorted(vs, key=_sort_key))


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph; with ``arity == 2`` it is a simple graph."""

    vertices: tuple
    edges: frozenset
    arity: int = 2

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(set(vs)) != len(vs):
            raise GraphError("duplicate vertices")
        es = frozenset(frozenset(e) for e in self.edges)
        vset = set(vs)
        for e in es:
            if len(e) != self.arity:
                raise GraphError(f"edge {sorted_vertices(e)} does not have {self.arity} vertices")
            if not e <= vset:
                raise GraphError(f"edge {sorted_vertices(e)} uses unknown vertices")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", es)

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable], vertices: Iterable | None = None, arity: int | None = None):
        edges = [frozenset(e) for e in edges]
        if arity is None:
            arity = len(edges[0]) if edges else 2
        vs = set().union(*edges) if edges else set()
        if vertices is not None:
            vertices = list(vertices)
            vs = vs | set(vertices)
            order = list(dict.fromkeys(vertices)) + list(sorted_vertices(vs - set(vertices)))
        else:
            order = sorted_vertices(vs)
        return cls(tuple(order), frozenset(edges), arity)

    def __len__(self):
        return len(self.vertices)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degree(self, v) -> int:
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> dict:
        deg = {v: 0 for v in self.vertices}
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg

    def spanned(self, X) -> "Hypergraph":
        X = frozenset(X)
        return Hypergraph(
            tuple(v for v in self.vertices if v in X),
            frozenset(e for e in self.edges if e <= X),
            self.arity,
        )

    def relabel(self, mapping) -> "Hypergraph":
        return Hypergraph(
            tuple(mapping[v] for v in self.vertices),
            frozenset(frozenset(mapping[v] for v in e) for e in self.edges),
            self.arity,
        )

    def edge_list(self) -> list[list]:
        return sorted(sorted_vertices(e) for e in self.edges)

    def to_networkx(self) -> nx.Graph:
        if self.arity != 2:
            raise GraphError("only 2-uniform graphs convert to networkx graphs")
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(tuple(e) for e in self.edges)
        return g

    def components(self) -> list[frozenset]:
        parent = {v: v for v in self.vertices}

        def find(v):
            while parent[v] != v:
                parent[v] = parent[parent[v]]
                v = parent[v]
            return v

        for e in self.edges:
            it = iter(e)
            r = find(next(it))
            for w in it:
                parent[find(w)] = r
        comps: dict = {}
        for v in self.vertices:
            comps.setdefault(find(v), []).append(v)
        return [frozenset(c) for c in comps.values()]

    def is_forest(self) -> bool:
        if self.arity != 2:
            return False
        return len(self.edges) == len(self.vertices) - len(self.components())

    def is_tree(self) -> bool:
        return bool(self.vertices) and self.is_forest() and len(self.components()) == 1

    def is_disjoint_edges(self) -> bool:
        """True iff the edges are pairwise disjoint (isolated points allowed)."""
        seen: set = set()
        for e in self.edges:
            if seen & e:
                return False
            seen |= e
        return True

    def is_isomorphic(self, other: "Hypergraph") -> bool:
        if self.arity != other.arity or len(self) != len(other) or self.n_edges != other.n_edges:
            return False
        return nx.is_isomorphic(_incidence_graph(self), _incidence_graph(other), node_match=_same_kind)

    def disjoint_union(self, other: "Hypergraph") -> "Hypergraph":
        a = {v: (0, v) for v in self.vertices}
        b = {v: (1, v) for v in other.vertices}
        left, right = self.relabel(a), other.relabel(b)
        return Hypergraph(left.vertices + right.vertices, left.edges | right.edges, self.arity)

    def to_json(self) -> dict:
        return {"arity": self.arity, "vertices": list(self.vertices), "edges": [list(e) for e in self.edge_list()]}

    @classmethod
    def from_json(cls, data: dict) -> "Hypergraph":
        edges = [frozenset(_hashable(v) for v in e) for e in data["edges"]]
        verts = [_hashable(v) for v in data.get("vertices", [])]
        arity = data.get("arity") or (len(edges[0]) if edges else 2)
        return cls.from_edges(edges, verts, arity)


def _hashable(v):
    return tuple(_hashable(x) for x in v) if isinstance(v, list) else v


def _same_kind(a, b):
    return a["kind"] == b["kind"]


def _incidence_graph(H: Hypergraph) -> nx.Graph:
    g = nx.Graph()
    for v in H.vertices:
        g.add_node(("v", v), kind="v")
    for i, e in enumerate(H.edge_list()):
        g.add_node(("e", i), kind="e")
        for v in e:
            g.add_edge(("e", i), ("v", v))
    return g


class TargetGraph(Hypergraph):
    """Target structure G; at least one edge is required."""

    def __post_init__(self):
        super().__post_init__()
        if not self.edges:
            raise EmptyTargetError("target graphs must have at least one edge")

    @classmethod
    def of(cls, H: Hypergraph) -> "TargetGraph":
        return cls(H.vertices, H.edges, H.arity)


FrameGraph = Hypergraph


def single_edge(k: int = 2) -> Hypergraph:
    return Hypergraph(tuple(range(1, k + 1)), frozenset([frozenset(range(1, k + 1))]), k)


def path_graph(n: int) -> Hypergraph:
    return Hypergraph.from_edges([(i, i + 1) for i in range(1, n)], range(1, n + 1))


def cycle_graph(n: int) -> Hypergraph:
    return Hypergraph.from_edges([(i, i % n + 1) for i in range(1, n + 1)], range(1, n + 1))


def star_graph(leaves: int) -> Hypergraph:
    return Hypergraph.from_edges([(1, i) for i in range(2, leaves + 2)], range(1, leaves + 2))


def complete_graph(n: int) -> Hypergraph:
    return Hypergraph.from_edges([(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)], range(1, n + 1))
