"""Built-in reflection complexes and graph constructions.

Every constructor returns a :class:`ReflectionComplex` whose trace replays to
the same b-hypergraph, so each entry can be re-checked by ``certify`` and
``measures``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .complex import (
    ComplexError,
    NotAnEdgeError,
    ReflectionComplex,
    fmt_set,
    reflect_step,
    trivial,
)
from .graphs import Hypergraph, sorted_vertices
from .setfun import ArityError


class CatalogError(ValueError):
    pass


class NotATreeError(CatalogError):
    pass


class ParameterError(CatalogError):
    pass


class BipartitionError(CatalogError):
    pass


class DisjointnessError(CatalogError):
    pass


class UnsupportedError(CatalogError):
    pass


# ---------------------------------------------------------------------------
# trees and their relatives


def _tree_order(T: Hypergraph):
    """Root edge plus the remaining edges in BFS order as (known, new) pairs."""
    if T.arity != 2 or not T.is_tree() or not T.edges:
        raise NotATreeError("input must be a tree with at least one edge")
    root = min((sorted_vertices(e) for e in T.edges))
    adj = {v: [] for v in T.vertices}
    for e in T.edges:
        a, b = tuple(e)
        adj[a].append(b)
        adj[b].append(a)
    for v in adj:
        adj[v] = sorted_vertices(adj[v])
    seen = set(root)
    order = []
    queue = deque(root)
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                order.append((u, w))
                queue.append(w)
    return tuple(root), order


def tree_complex_with_map(T: Hypergraph) -> tuple[ReflectionComplex, dict]:
    """Build ``T`` by repeatedly hanging a leaf off an existing edge; also return tree-vertex ids."""
    (a, b), order = _tree_order(T)
    M = trivial(2)
    ids = {a: 1, b: 2}
    parent_edge = {a: (a, b), b: (a, b)}
    for u, w in order:
        p, q = parent_edge[u]
        other = q if p == u else p
        L = {ids[u], ids[other]}
        step = reflect_step(M, L, {ids[u]})
        M = step.after
        ids[w] = step.tau2[ids[other]]
        parent_edge[w] = (u, w)
    return M, ids


def tree_complex(T: Hypergraph) -> ReflectionComplex:
    return tree_complex_with_map(T)[0]


def reflection_tree(T: Hypergraph, steps: Iterable = ()) -> ReflectionComplex:
    """Apply ``r_{E_i, X_i}`` to ``tree_complex(T)``; ids are those of the tree complex."""
    M = tree_complex(T)
    for E, X in steps:
        M = reflect_step(M, E, X).after
    return M


def tree_arrangeable_complex(build: Sequence) -> ReflectionComplex:
    """Replay ``("op1", v)`` and ``("op2", v, S)`` steps starting from a single edge.

    ``op1`` hangs a new leaf on ``v`` via ``r_{{v,w},{v}}`` with ``w`` the
    smallest frame neighbour of ``v``; ``op2`` adds a twin of ``v`` adjacent to
    ``S`` via ``r_{{v} | S, S}``.
    """
    M = trivial(2)
    for op in build:
        kind = op[0]
        if kind == "op1":
            v = op[1]
            nbrs = sorted(w for e in M.frame().edges if v in e for w in e if w != v)
            if not nbrs:
                raise NotAnEdgeError(f"vertex {v} has no frame edge")
            M = reflect_step(M, {v, nbrs[0]}, {v}).after
        elif kind == "op2":
            v, S = op[1], frozenset(op[2])
            M = reflect_step(M, S | {v}, S).after
        else:
            raise ParameterError(f"unknown operation {kind!r}")
    return M


def even_cycle_complex(n: int) -> ReflectionComplex:
    """``C_n`` for even ``n >= 4``: a path on ``n/2 + 1`` vertices reflected along its ends."""
    if n < 4 or n % 2:
        raise ParameterError("even cycles need an even length of at least 4")
    m = n // 2 + 1
    P = Hypergraph.from_edges([(i, i + 1) for i in range(1, m)], range(1, m + 1))
    M, ids = tree_complex_with_map(P)
    return reflect_step(M, set(M.vertices), {ids[1], ids[m]}).after


def star_complex(leaves: int) -> ReflectionComplex:
    if leaves < 1:
        raise ParameterError("a star needs at least one leaf")
    return tree_arrangeable_complex([("op1", 1)] * (leaves - 1))


# ---------------------------------------------------------------------------
# products and subdivisions


def box_product(H1: Hypergraph, H2: Hypergraph) -> Hypergraph:
    if H1.arity != 2 or H2.arity != 2:
        raise ArityError("box products are defined for graphs")
    V = [(a, b) for a in H1.vertices for b in H2.vertices]
    E = [frozenset({(a, x), (a, y)}) for a in H1.vertices for x, y in map(tuple, H2.edges)]
    E += [frozenset({(x, b), (y, b)}) for b in H2.vertices for x, y in map(tuple, H1.edges)]
    return Hypergraph(tuple(V), frozenset(E), 2)


@dataclass
class BoxEdge:
    """``T box e`` as a complex; ``rungs[v]`` is the pair of ids replacing tree vertex ``v``."""

    complex: ReflectionComplex
    rungs: dict
    J1: frozenset
    J2: frozenset


def tree_box_edge_complex(T: Hypergraph) -> BoxEdge:
    """Glue squares along rungs, following a BFS of the tree.

    The layer ``T x {1}`` becomes ``J1`` and ``T x {2}`` becomes ``J2``.
    """
    (a, b), order = _tree_order(T)
    # e box e is the 4-cycle 1-2-4-3 with rungs {1,2} and {3,4}
    M = trivial(2)
    M = reflect_step(M, {1, 2}, {1}).after
    M = reflect_step(M, {1, 2, 3}, {2, 3}).after
    rungs = {a: (1, 2), b: (3, 4)}
    square = {a: frozenset({1, 2, 3, 4}), b: frozenset({1, 2, 3, 4})}
    for u, w in order:
        S = square[u]
        (p, q) = rungs[u]
        st = reflect_step(M, S, {p, q})
        M = st.after
        other = [v for v in S if v not in (p, q)]
        # the rung opposite to u inside S
        o1 = next(v for v in other if frozenset({p, v}) in M.edges)
        o2 = next(v for v in other if v != o1)
        rungs[w] = (st.tau2[o1], st.tau2[o2])
        square[w] = frozenset(st.tau2[v] for v in S)
    J1 = frozenset(r[0] for r in rungs.values())
    J2 = frozenset(r[1] for r in rungs.values())
    return BoxEdge(M, rungs, J1, J2)


@dataclass
class SubdivisionData:
    """A subdivided complex together with the subset transport ``gamma``.

    ``blowup[v]`` is the copy of ``J1`` or ``J2`` replacing host vertex ``v``;
    ``interior[e]`` holds the remaining insert vertices of host frame edge
    ``e``; ``edge_maps[e]`` embeds the insert into the subdivided complex.
    """

    host: ReflectionComplex
    insert: ReflectionComplex
    J1: frozenset
    J2: frozenset
    complex: ReflectionComplex
    coloring: dict
    blowup: dict = field(default_factory=dict)
    interior: dict = field(default_factory=dict)
    edge_maps: dict = field(default_factory=dict)

    def gamma(self, S) -> frozenset:
        S = frozenset(S)
        out = set()
        for v in S:
            out |= self.blowup[v]
        for e, inner in self.interior.items():
            if e <= S:
                out |= inner
        return frozenset(out)


def _trace_coloring(host: ReflectionComplex) -> dict:
    col = {1: 1, 2: 2}
    for st in host.steps():
        for v, w in st.tau2.items():
            if w not in col:
                col[w] = col[v]
    return col


def subdivide(
    host: ReflectionComplex,
    insert: ReflectionComplex,
    J1,
    J2,
    bipartition: Mapping | None = None,
    swap: bool = False,
) -> SubdivisionData:
    """Replay the host trace on top of the insert.

    Host vertex 1 starts as ``J1`` and vertex 2 as ``J2`` (``swap`` exchanges
    them).  A given ``bipartition`` must be one of these two colorings.
    """
    if host.arity != 2 or insert.arity != 2:
        raise ArityError("subdivision is defined for graphs")
    J1, J2 = frozenset(J1), frozenset(J2)
    if J1 & J2:
        raise DisjointnessError("J1 and J2 must be disjoint")
    if not (J1 | J2) <= insert.base.vertex_set:
        raise ComplexError("J1 and J2 must be vertex sets of the insert")
    col = _trace_coloring(host)
    if bipartition is not None:
        bip = dict(bipartition)
        swapped = {v: 3 - c for v, c in col.items()}
        if bip == swapped:
            swap = True
        elif bip != col:
            F = host.frame()
            if any(bip.get(a) == bip.get(b) for a, b in map(tuple, F.edges)):
                raise BipartitionError("bipartition is not proper for the host frame")
            raise BipartitionError("only the two colorings induced by the host trace are supported")
    if swap:
        col = {v: 3 - c for v, c in col.items()}
    J = {1: J1, 2: J2}
    if swap:
        J = {1: J2, 2: J1}
    VN = frozenset(insert.vertices)
    base_edge = frozenset({1, 2})
    blowup = {1: J[1], 2: J[2]}
    interior = {base_edge: VN - J1 - J2}
    edge_maps = {base_edge: {v: v for v in insert.vertices}}
    data = SubdivisionData(host, insert, J1, J2, insert, col, blowup, interior, edge_maps)
    Mh = insert
    for st in host.steps():
        Lh = data.gamma(st.L)
        Xh = data.gamma(st.X)
        hs = reflect_step(Mh, Lh, Xh)
        Mh = hs.after
        t2 = hs.tau2
        for v in st.L - st.X:
            blowup[st.tau2[v]] = frozenset(t2[x] for x in blowup[v])
        for e in list(interior):
            if e <= st.L and not e <= st.X:
                ne = frozenset(st.tau2[v] for v in e)
                interior[ne] = frozenset(t2[x] for x in interior[e])
                edge_maps[ne] = {x: t2[y] for x, y in edge_maps[e].items()}
    data.complex = Mh
    return data


def graph_subdivision(host: Hypergraph, insert: Hypergraph, J1, J2, coloring: Mapping) -> Hypergraph:
    """Graph-level subdivision: blow up vertices into ``J1``/``J2`` copies and edges into inserts."""
    J1, J2 = frozenset(J1), frozenset(J2)
    inner = [x for x in insert.vertices if x not in J1 and x not in J2]
    edges = set()
    verts: list = []
    for v in host.vertices:
        verts += [("v", v, x) for x in sorted_vertices(J1 if coloring[v] == 1 else J2)]
    for e in host.edges:
        a, b = sorted_vertices(e)
        if coloring[a] == coloring[b]:
            raise BipartitionError("coloring is not proper")
        if coloring[a] == 2:
            a, b = b, a
        key = frozenset(e)
        name = {}
        for x in insert.vertices:
            if x in J1:
                name[x] = ("v", a, x)
            elif x in J2:
                name[x] = ("v", b, x)
            else:
                name[x] = ("e", tuple(sorted_vertices(key)), x)
        verts += [name[x] for x in inner]
        for f in insert.edges:
            edges.add(frozenset(name[x] for x in f))
    return Hypergraph(tuple(verts), frozenset(edges), 2)


def grid_complex(paths: Sequence[int]) -> ReflectionComplex:
    """Complex whose frame is the grid ``P_{a_1} box ... box P_{a_m}``.

    The last factor is built as a tree; every earlier factor ``P_a`` is
    added by subdividing with the ladder ``P_a box e``.
    """
    return grid_data(paths)[0]


def grid_data(paths: Sequence[int]) -> tuple[ReflectionComplex, list]:
    paths = list(paths)
    if not paths or any(a < 2 for a in paths):
        raise ParameterError("grid factors must be paths with at least 2 vertices")
    M = tree_complex(_path(paths[-1]))
    subs = []
    for a in reversed(paths[:-1]):
        box = tree_box_edge_complex(_path(a))
        sub = subdivide(M, box.complex, box.J1, box.J2)
        subs.append((sub, box))
        M = sub.complex
    return M, subs


def hypercube_complex(n: int) -> ReflectionComplex:
    if n < 1:
        raise ParameterError("dimension must be at least 1")
    return grid_complex([2] * n)


def _path(n: int) -> Hypergraph:
    return Hypergraph.from_edges([(i, i + 1) for i in range(1, n)], range(1, n + 1))


# ---------------------------------------------------------------------------
# bipartite gadgets and hypergraphs

BIPARTITE_3SIDE_LABELS = {1: "1", 2: "z2", 3: "3", 4: "z1", 5: "z3", 6: "2"}
_Z_ID = {1: 4, 2: 2, 3: 5}


def bipartite_3side(v: Sequence[int]) -> ReflectionComplex:
    """Left side ``{1,2,3}``; ``v_j`` right vertices adjacent to the two left vertices other than ``j``.

    The 6-cycle ``1-z2-3-z1-2-z3`` is a 4-path reflected along its ends; each
    further right vertex of type ``j`` comes from ``r_{W, W - {z_j}}`` with
    ``W`` the vertex set of the 6-cycle.
    """
    v = tuple(v)
    if len(v) != 3 or any(not isinstance(x, int) or x < 1 for x in v):
        raise ParameterError("bipartite_3side needs three positive integers")
    M = even_cycle_complex(6)
    W = frozenset(range(1, 7))
    for j in (1, 2, 3):
        for _ in range(v[j - 1] - 1):
            M = reflect_step(M, W, W - {_Z_ID[j]}).after
    return M


def bipartite_4side(*args):
    raise UnsupportedError("the four-on-one-side case is not implemented")


def k_forest(k: int, gluings: Iterable = ()) -> ReflectionComplex:
    """Start from one k-edge and glue fresh k-edges along subsets of existing k-edges."""
    if k < 2:
        raise ArityError("arity must be at least 2")
    M = trivial(k)
    for L, X in gluings:
        L, X = frozenset(L), frozenset(X)
        if len(L) != k:
            raise ParameterError(f"{fmt_set(L)} is not a {k}-edge")
        M = reflect_step(M, L, X).after
    return M


def tight_path(k: int, n: int) -> ReflectionComplex:
    if k < 2 or n < k:
        raise ParameterError("tight paths need k >= 2 and n >= k")
    steps = [(range(i, i + k), range(i + 1, i + k)) for i in range(1, n - k + 1)]
    return k_forest(k, steps)


def complete_k_partite(*parts: int) -> ReflectionComplex:
    """``K_{a_1..a_k}``: grow part ``j`` one vertex at a time by ``r_{(V - P_j) | {j}, V - P_j}``."""
    if len(parts) == 1 and isinstance(parts[0], (tuple, list)):
        parts = tuple(parts[0])
    k = len(parts)
    if k < 2 or any(not isinstance(a, int) or a < 1 for a in parts):
        raise ParameterError("complete_k_partite needs at least two positive part sizes")
    M = trivial(k)
    P = {j: {j} for j in range(1, k + 1)}
    for j in range(1, k + 1):
        for _ in range(parts[j - 1] - 1):
            V = frozenset(M.vertices)
            X = V - P[j]
            st = reflect_step(M, X | {j}, X)
            M = st.after
            P[j].add(st.tau2[j])
    return M


# ---------------------------------------------------------------------------
# registry used by the command line


@dataclass(frozen=True)
class Entry:
    name: str
    params: str
    build: Callable[..., ReflectionComplex]
    doc: str


def _reflection_tree_example() -> ReflectionComplex:
    # K_{2,3}: a 3-leaf star reflected along its leaves
    return reflection_tree(Hypergraph.from_edges([(1, 2), (1, 3), (1, 4)]), [({1, 2, 3, 4}, {2, 3, 4})])


def _tree_arrangeable_example() -> ReflectionComplex:
    return tree_arrangeable_complex([("op1", 1), ("op1", 2), ("op2", 1, {2, 3})])


def _int_args(args, n=None):
    try:
        vals = [int(a) for a in args]
    except ValueError:
        raise ParameterError(f"integer parameters expected, got {list(args)}") from None
    if n is not None and len(vals) != n:
        raise ParameterError(f"expected {n} parameters, got {len(vals)}")
    return vals


CATALOG: dict[str, Entry] = {}


def _register(name, params, doc):
    def deco(fn):
        CATALOG[name] = Entry(name, params, fn, doc)
        return fn

    return deco


@_register("single-edge", "[k]", "one k-edge")
def _e(*a):
    return trivial(*(_int_args(a) or [2]))


@_register("path", "n", "path on n vertices")
def _p(*a):
    (n,) = _int_args(a, 1)
    return tree_complex(_path(n))


@_register("star", "leaves", "star K_{1,leaves}")
def _s(*a):
    (n,) = _int_args(a, 1)
    return star_complex(n)


@_register("even-cycle", "n", "cycle C_n for even n")
def _c(*a):
    (n,) = _int_args(a, 1)
    return even_cycle_complex(n)


@_register("reflection-tree", "", "K_{2,3} as a reflected star")
def _rt(*a):
    return _reflection_tree_example()


@_register("tree-arrangeable", "", "a small tree-arrangeable graph")
def _ta(*a):
    return _tree_arrangeable_example()


@_register("bipartite-3side", "v1 v2 v3", "3 left vertices, v_j right vertices missing left vertex j")
def _b3(*a):
    return bipartite_3side(_int_args(a, 3))


@_register("bipartite-4side", "...", "unsupported")
def _b4(*a):
    return bipartite_4side(*a)


@_register("hypercube", "n", "n-dimensional cube")
def _q(*a):
    (n,) = _int_args(a, 1)
    return hypercube_complex(n)


@_register("grid", "a1 a2 ...", "grid P_a1 x P_a2 x ...")
def _g(*a):
    return grid_complex(_int_args(a))


@_register("tight-path", "k n", "k-uniform tight path on n vertices")
def _tp(*a):
    k, n = _int_args(a, 2)
    return tight_path(k, n)


@_register("complete-k-partite", "a1 ... ak", "complete k-partite k-uniform hypergraph")
def _kp(*a):
    return complete_k_partite(*_int_args(a))


def build(name: str, *params) -> ReflectionComplex:
    try:
        entry = CATALOG[name]
    except KeyError:
        raise CatalogError(f"unknown catalog entry {name!r}") from None
    return entry.build(*params)
