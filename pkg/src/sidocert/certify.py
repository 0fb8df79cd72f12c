"""Membership of set functions in ``W + Q_V``: LP decisions and constructive certificates.

``Q_V`` is the cone spanned by every ``t_{A,B}`` and every indicator ``1_A``
plus the line through ``1_{}``; ``W`` is the span of explicitly listed
generators (``t`` vectors of related pairs and ``1_A - 1_B`` differences of
isomorphic pairs).  Certificates name their generators by subsets, never by
position, so any implementation can re-check them.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .complex import ReflectionComplex, fmt_set, pair, set_key
from .graphs import Hypergraph, sorted_vertices
from .lp import phase_one
from .setfun import (
    ArityError,
    GroundSet,
    SetFunction,
    SizeCapError,
    as_fraction,
    fmt_fraction,
    h_vector,
    indicator,
    iso_vector,
    s_vector,
    t_vector,
)

log = logging.getLogger(__name__)

FULL_CAP = 10
RESTRICTED_CAP = 16
RESTRICTED_HINT_MAX = 6


class CertificateError(ValueError):
    pass


class MalformedCertificateError(CertificateError):
    pass


class NotInClassError(CertificateError):
    pass


class PreconditionError(CertificateError):
    pass


def t_gen(A, B) -> tuple:
    a, b = pair(A, B)
    return ("t", a, b)


def iso_gen(A, B) -> tuple:
    a, b = pair(A, B)
    return ("iso", a, b)


def ind_gen(A) -> tuple:
    return ("indicator", frozenset(A))


def gen_vector(ground: GroundSet, gen: tuple) -> SetFunction:
    kind = gen[0]
    if kind == "t":
        return t_vector(ground, gen[1], gen[2])
    if kind == "iso":
        return iso_vector(ground, gen[1], gen[2])
    if kind == "indicator":
        return indicator(ground, gen[1])
    raise MalformedCertificateError(f"unknown generator kind {kind!r}")


def _gen_is_zero(gen: tuple) -> bool:
    if gen[0] == "t":
        a, b = gen[1], gen[2]
        return a <= b or b <= a
    if gen[0] == "iso":
        return gen[1] == gen[2]
    return False


def _gen_key(gen):
    return (gen[0],) + tuple(set_key(s) for s in gen[1:])


def gen_to_json(gen: tuple) -> dict:
    if gen[0] == "indicator":
        return {"kind": "indicator", "A": list(sorted_vertices(gen[1]))}
    return {"kind": gen[0], "A": list(sorted_vertices(gen[1])), "B": list(sorted_vertices(gen[2]))}


def gen_from_json(d: Mapping) -> tuple:
    kind = d.get("kind")
    if kind == "indicator":
        return ind_gen(d["A"])
    if kind == "t":
        return t_gen(d["A"], d["B"])
    if kind == "iso":
        return iso_gen(d["A"], d["B"])
    raise MalformedCertificateError(f"unknown generator kind {kind!r}")


@dataclass
class MembershipProblem:
    ground: GroundSet
    target: SetFunction
    subspace: tuple = ()
    hint_sets: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.target.ground != self.ground:
            raise CertificateError("target lives on a different ground set")
        gens = []
        seen = set()
        for g in self.subspace:
            g = t_gen(g[1], g[2]) if g[0] == "t" else iso_gen(g[1], g[2]) if g[0] == "iso" else g
            if g[0] not in ("t", "iso"):
                raise CertificateError(f"subspace generators must be 't' or 'iso', got {g[0]!r}")
            for s in g[1:]:
                self.ground.mask(s)
            if g not in seen:
                seen.add(g)
                gens.append(g)
        self.subspace = tuple(sorted(gens, key=_gen_key))
        self._subspace_set = frozenset(self.subspace)

    def allows(self, gen: tuple) -> bool:
        return gen in self._subspace_set


def _add(d: dict, key, c):
    v = d.get(key, 0) + c
    if v:
        d[key] = v
    else:
        d.pop(key, None)


@dataclass
class MembershipCertificate:
    """``target = sum subspace + line * 1_{} + sum cone`` with cone coefficients >= 0."""

    subspace_coeffs: dict = field(default_factory=dict)
    line_coeff: Fraction = Fraction(0)
    cone_coeffs: dict = field(default_factory=dict)

    def __bool__(self):
        return True

    @property
    def is_certificate(self) -> bool:
        return True

    def copy(self) -> "MembershipCertificate":
        return MembershipCertificate(dict(self.subspace_coeffs), self.line_coeff, dict(self.cone_coeffs))

    def add(self, other: "MembershipCertificate", scale=1) -> "MembershipCertificate":
        scale = as_fraction(scale)
        for g, c in other.subspace_coeffs.items():
            _add(self.subspace_coeffs, g, scale * c)
        for g, c in other.cone_coeffs.items():
            _add(self.cone_coeffs, g, scale * c)
        self.line_coeff += scale * other.line_coeff
        return self

    def add_subspace(self, gen, c):
        if not _gen_is_zero(gen):
            _add(self.subspace_coeffs, gen, as_fraction(c))

    def add_cone(self, gen, c):
        if not _gen_is_zero(gen):
            _add(self.cone_coeffs, gen, as_fraction(c))

    def relabel(self, mapping: Mapping) -> "MembershipCertificate":
        f = lambda S: frozenset(mapping[v] for v in S)  # noqa: E731

        def mg(g):
            if g[0] == "indicator":
                return ind_gen(f(g[1]))
            return (t_gen if g[0] == "t" else iso_gen)(f(g[1]), f(g[2]))

        out = MembershipCertificate(line_coeff=self.line_coeff)
        for g, c in self.subspace_coeffs.items():
            _add(out.subspace_coeffs, mg(g), c)
        for g, c in self.cone_coeffs.items():
            _add(out.cone_coeffs, mg(g), c)
        return out

    def combination(self, ground: GroundSet) -> SetFunction:
        acc: dict[int, Fraction] = {}
        if self.line_coeff:
            acc[0] = self.line_coeff
        for coeffs in (self.subspace_coeffs, self.cone_coeffs):
            for g, c in coeffs.items():
                for m, v in gen_vector(ground, g).items():
                    acc[m] = acc.get(m, 0) + c * v
        return SetFunction(ground, acc)

    def to_json(self, problem: MembershipProblem | None = None) -> dict:
        out: dict = {"kind": "certificate"}
        if problem is not None:
            out["ground"] = list(problem.ground.vertices)
            out["target"] = problem.target.to_records()
            if problem.label:
                out["problem"] = problem.label
        out["subspace"] = [
            {"gen": gen_to_json(g), "coeff": fmt_fraction(self.subspace_coeffs[g])}
            for g in sorted(self.subspace_coeffs, key=_gen_key)
        ]
        out["line"] = fmt_fraction(Fraction(self.line_coeff))
        out["cone"] = [
            {"gen": gen_to_json(g), "coeff": fmt_fraction(self.cone_coeffs[g])}
            for g in sorted(self.cone_coeffs, key=_gen_key)
        ]
        return out

    @classmethod
    def from_json(cls, data: Mapping) -> "MembershipCertificate":
        try:
            out = cls(line_coeff=as_fraction(data.get("line", "0")))
            for rec in data.get("subspace", []):
                _add(out.subspace_coeffs, gen_from_json(rec["gen"]), as_fraction(rec["coeff"]))
            for rec in data.get("cone", []):
                _add(out.cone_coeffs, gen_from_json(rec["gen"]), as_fraction(rec["coeff"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, MalformedCertificateError):
                raise
            raise MalformedCertificateError(f"malformed certificate: {exc}") from None
        return out

    def __repr__(self):
        return (
            f"MembershipCertificate(subspace={len(self.subspace_coeffs)}, "
            f"line={self.line_coeff}, cone={len(self.cone_coeffs)})"
        )


@dataclass
class FarkasRefutation:
    functional: SetFunction

    def __bool__(self):
        return False

    is_certificate = False

    def to_json(self, problem: MembershipProblem | None = None) -> dict:
        out: dict = {"kind": "refutation"}
        if problem is not None:
            out["ground"] = list(problem.ground.vertices)
            out["target"] = problem.target.to_records()
            if problem.label:
                out["problem"] = problem.label
        out["functional"] = self.functional.to_records()
        return out


@dataclass
class Inconclusive:
    reason: str

    def __bool__(self):
        return False

    is_certificate = False

    def to_json(self, problem: MembershipProblem | None = None) -> dict:
        return {"kind": "inconclusive", "reason": self.reason}


def verify_certificate(p: MembershipProblem, c: MembershipCertificate) -> bool:
    ground = p.ground
    for g in c.subspace_coeffs:
        if g[0] not in ("t", "iso") or not p.allows(g):
            raise MalformedCertificateError(f"subspace generator {_fmt_gen(g)} is not part of the problem")
    for g, coeff in c.cone_coeffs.items():
        if g[0] not in ("t", "indicator"):
            raise MalformedCertificateError(f"{_fmt_gen(g)} is not a generator of the cone")
        for s in g[1:]:
            try:
                ground.mask(s)
            except ValueError:
                raise MalformedCertificateError(f"{_fmt_gen(g)} uses vertices outside the ground set") from None
    if any(coeff < 0 for coeff in c.cone_coeffs.values()):
        return False
    return c.combination(ground) == p.target


def verify_refutation(p: MembershipProblem, r: FarkasRefutation) -> bool:
    y = r.functional
    if y.ground != p.ground:
        return False
    if y[0] != 0:
        return False
    vals = dict(y.items())
    n = len(p.ground)
    get = vals.get
    for S in range(1, 1 << n):
        if get(S, 0) < 0:
            return False
    # <y, t_{A,B}> >= 0 for all pairs is equivalent to the local exchange inequalities
    for S in range(1 << n):
        for i in range(n):
            if S >> i & 1:
                continue
            for j in range(i + 1, n):
                if S >> j & 1:
                    continue
                a, b = S | 1 << i, S | 1 << j
                if get(a | b, 0) - get(a, 0) - get(b, 0) + get(S, 0) < 0:
                    return False
    for g in p.subspace:
        if y.dot(gen_vector(p.ground, g)) != 0:
            return False
    return y.dot(p.target) < 0


def _fmt_gen(g) -> str:
    return g[0] + "(" + ",".join(fmt_set(s) for s in g[1:]) + ")"


def _all_t_pairs(n: int):
    for a in range(1 << n):
        for b in range(a + 1, 1 << n):
            ab = a & b
            if ab != a and ab != b:
                yield a, b


def _hint_pairs(ground: GroundSet, hint_sets: Iterable) -> list:
    seen = set()
    for S in hint_sets:
        S = frozenset(S)
        if len(S) > RESTRICTED_HINT_MAX:
            continue
        sm = ground.mask(S)
        subs = [m for m in range(sm + 1) if m & sm == m]
        for i, a in enumerate(subs):
            for b in subs[i + 1:]:
                ab = a & b
                if ab != a and ab != b:
                    seen.add((a, b) if a < b else (b, a))
    return sorted(seen)


def decide_membership(
    p: MembershipProblem,
    mode: str = "full",
    max_ground: int | None = None,
):
    """Certificate, Farkas refutation, or (restricted mode only) Inconclusive."""
    if mode not in ("full", "restricted"):
        raise ValueError(f"unknown mode {mode!r}")
    n = len(p.ground)
    cap = max_ground if max_ground is not None else (FULL_CAP if mode == "full" else RESTRICTED_CAP)
    if n > cap:
        raise SizeCapError(f"ground set of {n} vertices exceeds the {mode}-mode cap of {cap}")
    ground = p.ground

    if p.target.is_zero():
        return MembershipCertificate()

    if mode == "full":
        tpairs = list(_all_t_pairs(n))
    else:
        tpairs = _hint_pairs(ground, p.hint_sets)

    sub_vecs = [(g, gen_vector(ground, g)) for g in p.subspace if not _gen_is_zero(g)]
    sub_vecs = [(g, v) for g, v in sub_vecs if not v.is_zero()]

    rows_used = {m for m, _ in p.target.items()}
    for a, b in tpairs:
        rows_used.update((a, b, a | b, a & b))
    for _, v in sub_vecs:
        rows_used.update(m for m, _ in v.items())
    rows_used.discard(0)
    rows = sorted(rows_used)
    row_of = {m: i for i, m in enumerate(rows)}

    columns: list[dict] = []
    meta: list[tuple] = []
    for m in rows:
        columns.append({row_of[m]: 1})
        meta.append(("indicator", m))
    for a, b in tpairs:
        col: dict = {}
        for m, c in ((a | b, 1), (a, -1), (b, -1), (a & b, 1)):
            if m:
                col[row_of[m]] = col.get(row_of[m], 0) + c
        columns.append(col)
        meta.append(("t", a, b))
    for g, v in sub_vecs:
        col = {row_of[m]: c for m, c in v.items() if m}
        if not col:
            continue
        columns.append(col)
        meta.append(("sub", g, 1))
        columns.append({i: -c for i, c in col.items()})
        meta.append(("sub", g, -1))

    b = [p.target[m] for m in rows]
    log.debug("membership LP: %d rows, %d columns (%s mode)", len(rows), len(columns), mode)
    res = phase_one(columns, b)

    if res.feasible:
        cert = MembershipCertificate()
        at_empty = Fraction(0)
        for j, val in res.x.items():
            info = meta[j]
            if info[0] == "indicator":
                cert.add_cone(ind_gen(ground.subset(info[1])), val)
            elif info[0] == "t":
                cert.add_cone(t_gen(ground.subset(info[1]), ground.subset(info[2])), val)
                if info[1] & info[2] == 0:
                    at_empty += val
            else:
                g, sign = info[1], info[2]
                cert.add_subspace(g, sign * val)
                at_empty += sign * val * dict(sub_vecs)[g][0]
        cert.line_coeff = p.target[0] - at_empty
        if not verify_certificate(p, cert):
            raise RuntimeError("LP produced a certificate that does not verify")
        return cert

    if mode == "restricted":
        return Inconclusive("restricted generator set does not contain the target")
    y = SetFunction(ground, {rows[i]: v for i, v in enumerate(res.farkas) if v})
    ref = FarkasRefutation(y)
    if not verify_refutation(p, ref):
        raise RuntimeError("LP produced a refutation that does not verify")
    return ref


# ---------------------------------------------------------------------------
# problems attached to reflection complexes


def complex_ground(M: ReflectionComplex, cap: int | None = None) -> GroundSet:
    n = len(M.vertices)
    return GroundSet(M.vertices, cap=max(RESTRICTED_CAP, n) if cap is None else cap)


def _complex_hints(M: ReflectionComplex) -> tuple:
    H = M.frame()
    return tuple(X for _, X in M.trace) + tuple(H.edges)


def thickness_problem(M: ReflectionComplex, weak: bool = False) -> MembershipProblem:
    ground = complex_ground(M)
    H = M.frame()
    V = M.vertices
    target = s_vector(H, V, ground) if weak else h_vector(H, V, ground)
    subspace = [t_gen(a, b) for a, b in M.relation]
    return MembershipProblem(
        ground,
        target,
        tuple(subspace),
        _complex_hints(M),
        "weakly-thick" if weak else "thick",
    )


def _class_check(M: ReflectionComplex, ok_span) -> "ClassReport":
    steps = []
    final = M.frame()
    for i, (L, X) in enumerate(M.trace):
        F = final.spanned(X)
        steps.append(StepReport(i, L, X, F, ok_span(F)))
    return ClassReport(all(s.ok for s in steps), steps)


@dataclass
class StepReport:
    index: int
    L: frozenset
    X: frozenset
    spanned: Hypergraph
    ok: bool


@dataclass
class ClassReport:
    ok: bool
    steps: list

    def __bool__(self):
        return self.ok

    def failing(self) -> list:
        return [s for s in self.steps if not s.ok]


def in_class_C(M: ReflectionComplex) -> ClassReport:
    """Every gluing set spans a forest in the frame at its step."""
    if M.arity != 2:
        raise ArityError("class C is defined for arity-2 complexes")
    # frames only gain edges at new vertices, so spans inside old vertex sets never change
    return _class_check(M, lambda F: F.is_forest())


def in_class_Ck(M: ReflectionComplex) -> ClassReport:
    """Every gluing set spans pairwise disjoint k-edges plus isolated points."""
    return _class_check(M, lambda F: F.is_disjoint_edges())


def forest_certificate(H: Hypergraph, X) -> MembershipCertificate:
    """Cone decomposition of ``-h_H(X)`` for ``X`` spanning a forest."""
    F = H.spanned(X)
    if not F.is_forest():
        raise PreconditionError(f"{fmt_set(X)} does not span a forest")
    cert = MembershipCertificate()
    if not F.vertices:
        cert.line_coeff = Fraction(1)
        return cert
    comps = sorted(F.components(), key=set_key)
    for comp in comps:
        T = F.spanned(comp)
        verts = set(comp)
        adj = {v: set() for v in verts}
        for e in T.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        while len(verts) > 2:
            leaf = min((v for v in verts if len(adj[v]) == 1), key=lambda v: set_key({v}))
            (par,) = adj[leaf]
            cert.add_cone(t_gen({leaf, par}, verts - {leaf}), 1)
            adj[par].discard(leaf)
            verts.discard(leaf)
            del adj[leaf]
    _chain_parts(cert, comps)
    return cert


def disjoint_edges_certificate(H: Hypergraph, X) -> MembershipCertificate:
    """Cone decomposition of ``-s_H(X)`` for ``X`` spanning disjoint k-edges and points."""
    F = H.spanned(X)
    if not F.is_disjoint_edges():
        raise PreconditionError(f"{fmt_set(X)} spans intersecting edges")
    cert = MembershipCertificate()
    if not F.vertices:
        cert.line_coeff = Fraction(1)
        return cert
    covered = set().union(*F.edges) if F.edges else set()
    parts = list(F.edges) + [frozenset({v}) for v in F.vertices if v not in covered]
    parts.sort(key=set_key)
    for part in parts:
        if len(part) == 1:
            cert.add_cone(ind_gen(part), 1)
    _chain_parts(cert, parts)
    return cert


def _chain_parts(cert: MembershipCertificate, parts: list):
    for i in range(len(parts) - 1):
        rest = frozenset().union(*parts[i + 1:])
        cert.add_cone(t_gen(parts[i], rest), 1)
        cert.line_coeff -= 1


def _provenance(M: ReflectionComplex) -> dict:
    origin: dict = {}
    steps = list(M.steps())
    base = frozenset(range(1, M.arity + 1))
    origin[base] = ("base",)
    for st in steps:
        tau2 = st.tau2
        N = st.before.base.sub(st.L)
        t2 = lambda S: frozenset(tau2[v] for v in S)  # noqa: E731
        for K2 in sorted(N.edges, key=set_key):
            e = t2(K2)
            if e not in origin:
                origin[e] = ("copy", K2, tau2)
        K1s = sorted((K for K in st.before.edges if st.X <= K), key=set_key)
        K2s = sorted((K for K in N.edges if st.X <= K), key=set_key)
        for K1 in K1s:
            for K2 in K2s:
                e = K1 | t2(K2)
                if e not in origin:
                    origin[e] = ("glue", K1, K2, tau2, st.X)
    return origin


def certificate_from_trace(M: ReflectionComplex, weak: bool | None = None) -> MembershipCertificate:
    """Replay the inductive thickness proof along the trace of ``M``.

    Arity-2 complexes in class C get a certificate for ``h_H(V)`` (thickness);
    complexes whose gluing sets span disjoint k-edges get one for ``s_H(V)``.
    With ``weak=True`` an arity-2 thickness certificate is converted to a weak
    one by adding the nonnegative degree excess at every vertex.
    """
    H = M.frame()
    if M.arity == 2 and in_class_C(M):
        cert = _trace_certificate(M, H, lambda X: forest_certificate(H, X))
        if weak:
            deg = H.degrees()
            for v in M.vertices:
                cert.add_cone(ind_gen({v}), deg[v] - 1)
        return cert
    if in_class_Ck(M):
        if weak is False:
            raise NotInClassError("arity-k complexes only carry weak thickness certificates")
        return _trace_certificate(M, H, lambda X: disjoint_edges_certificate(H, X))
    raise NotInClassError("trace has a gluing set outside the constructive class")


def _trace_certificate(M: ReflectionComplex, H: Hypergraph, glue_part) -> MembershipCertificate:
    origin = _provenance(M)
    memo: dict = {}

    def cert(e: frozenset) -> MembershipCertificate:
        if e in memo:
            return memo[e]
        info = origin[e]
        if info[0] == "base":
            out = MembershipCertificate()
        elif info[0] == "copy":
            out = cert(info[1]).relabel(info[2])
        else:
            _, K1, K2, tau2, X = info
            K2c = frozenset(tau2[v] for v in K2)
            out = cert(K1).copy()
            out.add(cert(K2).relabel(tau2))
            out.add(glue_part(X))
            out.add_subspace(t_gen(K1, K2c), -1)
        memo[e] = out
        return out

    return cert(frozenset(M.vertices)).copy()


def _lp_route(problem: MembershipProblem, mode: str, n: int, max_ground: int | None):
    if mode in ("auto", "restricted") and n <= (max_ground or RESTRICTED_CAP):
        res = decide_membership(problem, "restricted", max_ground=max_ground)
        if res or mode == "restricted":
            return res
    if mode == "restricted":
        return Inconclusive(f"{n} vertices exceed the restricted-mode cap")
    cap = max_ground or FULL_CAP
    if n > cap:
        return Inconclusive(f"{n} vertices exceed the full-mode cap of {cap}")
    return decide_membership(problem, "full", max_ground=max_ground)


def is_thick(M: ReflectionComplex, mode: str = "auto", max_ground: int | None = None):
    if M.arity != 2:
        raise ArityError("thickness is defined for arity 2; use is_weakly_thick")
    problem = thickness_problem(M)
    if mode != "lp" and in_class_C(M):
        cert = certificate_from_trace(M)
        if verify_certificate(problem, cert):
            return cert
        log.warning("constructive certificate failed verification; falling back to LP")
    return _lp_route(problem, "auto" if mode == "lp" else mode, len(M.vertices), max_ground)


def is_weakly_thick(M: ReflectionComplex, mode: str = "auto", max_ground: int | None = None):
    problem = thickness_problem(M, weak=True)
    if mode != "lp":
        cert = None
        if M.arity == 2 and in_class_C(M):
            cert = certificate_from_trace(M, weak=True)
        elif in_class_Ck(M):
            cert = certificate_from_trace(M, weak=True)
        if cert is not None and verify_certificate(problem, cert):
            return cert
    return _lp_route(problem, "auto" if mode == "lp" else mode, len(M.vertices), max_ground)


def weak_from_thick(M: ReflectionComplex, cert: MembershipCertificate) -> MembershipCertificate:
    """Shift a thickness certificate by ``s_H(V) - h_H(V)``, which has nonnegative entries."""
    H = M.frame()
    out = cert.copy()
    for v, d in H.degrees().items():
        if d < 1:
            raise PreconditionError(f"vertex {v} is isolated in the frame")
        out.add_cone(ind_gen({v}), d - 1)
    return out


def general_problem(ground: GroundSet, H: Hypergraph, A, ci_pairs=(), is_pairs=()) -> MembershipProblem:
    target = s_vector(H, A, ground)
    subspace = [t_gen(a, b) for a, b in ci_pairs] + [iso_gen(a, b) for a, b in is_pairs]
    hints = [frozenset(a) for a, _ in ci_pairs] + [frozenset(b) for _, b in ci_pairs] + list(H.edges)
    return MembershipProblem(ground, target, tuple(subspace), tuple(hints), "general")


def general_certificate(ground: GroundSet, H: Hypergraph, A, ci_pairs=(), is_pairs=(), mode: str = "full"):
    """Decide ``s_H(A)`` in ``C_f + I_f + Q_V`` for the given CI and isomorphic pairs."""
    p = general_problem(ground, H, A, ci_pairs, is_pairs)
    if mode == "full" and len(ground) > FULL_CAP:
        mode = "restricted"
    return decide_membership(p, mode)


def certificate_transport_subdivision(
    cert_M: MembershipCertificate,
    cert_N: MembershipCertificate,
    sub,
) -> MembershipCertificate:
    """Push a host thickness certificate through a subdivision.

    ``sub`` is a :class:`sidocert.catalog.SubdivisionData`.  Each related
    ``t`` generator maps to the ``t`` of the images; each cone ``t``
    generator expands into cone members of the subdivided complex; every
    host frame edge contributes a relabelled copy of ``cert_N`` and every
    host vertex ``v`` contributes ``deg(v) - 1`` forest decompositions of its
    blown-up vertex set.
    """
    FN = sub.insert.frame()
    for J in (sub.J1, sub.J2):
        if not FN.spanned(J).is_forest():
            raise PreconditionError(f"{fmt_set(J)} does not span a forest in the insert frame")
    H = sub.complex.frame()
    gamma = sub.gamma
    out = MembershipCertificate(line_coeff=cert_M.line_coeff)
    for g, c in cert_M.subspace_coeffs.items():
        if g[0] != "t":
            raise PreconditionError("only t generators can be transported")
        out.add_subspace(t_gen(gamma(g[1]), gamma(g[2])), c)
    for g, c in cert_M.cone_coeffs.items():
        if g[0] == "indicator":
            out.add_cone(ind_gen(gamma(g[1])), c)
            continue
        A1, A2 = gamma(g[1]), gamma(g[2])
        union = A1 | A2
        C = gamma(g[1] | g[2]) - union
        out.add_cone(t_gen(A1, A2), c)
        if C:
            out.add_cone(t_gen(C, union), c)
            out.add_cone(ind_gen(C), c)
            out.line_coeff -= c
    for A, sigma in sub.edge_maps.items():
        out.add(cert_N.relabel(sigma))
    deg = sub.host.frame().degrees()
    for v, d in deg.items():
        if d > 1:
            out.add(forest_certificate(H, gamma(frozenset({v}))), d - 1)
    return out
