"""Exact rational set functions on the subsets of a small ground set.

Subsets are encoded as bitmasks against the fixed vertex order of a
:class:`GroundSet`.  A :class:`SetFunction` stores only its nonzero values,
so equality of set functions is equality of their entry maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping

DEFAULT_GROUND_CAP = 16


class SetFunctionError(ValueError):
    pass


class InvalidSubsetError(SetFunctionError):
    pass


class GroundMismatchError(SetFunctionError):
    pass


class SizeCapError(SetFunctionError):
    pass


class ArityError(ValueError):
    pass


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction or 'p/q'")
    return Fraction(x)


def fmt_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class GroundSet:
    vertices: tuple
    cap: int = DEFAULT_GROUND_CAP
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(set(vs)) != len(vs):
            raise SetFunctionError(f"duplicate vertex identifiers in {vs!r}")
        if len(vs) > self.cap:
            raise SizeCapError(
                f"ground set has {len(vs)} vertices, cap is {self.cap}; pass a larger cap to override"
            )
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(vs)})

    def __eq__(self, other):
        return isinstance(other, GroundSet) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __contains__(self, v):
        return v in self._index

    @property
    def full(self) -> int:
        return (1 << len(self.vertices)) - 1

    def mask(self, subset: Iterable[Hashable] | int) -> int:
        if isinstance(subset, int) and not isinstance(subset, bool):
            if subset < 0 or subset > self.full:
                raise InvalidSubsetError(f"bitmask {subset} outside ground set")
            return subset
        m = 0
        for v in subset:
            try:
                m |= 1 << self._index[v]
            except KeyError:
                raise InvalidSubsetError(f"{v!r} is not in the ground set") from None
        return m

    def subset(self, mask: int) -> frozenset:
        return frozenset(self.vertices[i] for i in range(len(self.vertices)) if mask >> i & 1)

    def sorted_list(self, mask: int) -> list:
        return [self.vertices[i] for i in range(len(self.vertices)) if mask >> i & 1]


class SetFunction:
    """Sparse rational vector in the space of set functions on ``ground``."""

    __slots__ = ("ground", "_entries", "_hash")

    def __init__(self, ground: GroundSet, entries: Mapping[int, Fraction] | None = None):
        self.ground = ground
        clean = {}
        if entries:
            full = ground.full
            for m, v in entries.items():
                if m < 0 or m > full:
                    raise InvalidSubsetError(f"bitmask {m} outside ground set")
                v = as_fraction(v)
                if v:
                    clean[m] = v
        self._entries = clean
        self._hash = None

    @classmethod
    def zero(cls, ground: GroundSet) -> "SetFunction":
        return cls(ground)

    @property
    def entries(self) -> Mapping[int, Fraction]:
        return dict(self._entries)

    def items(self):
        return self._entries.items()

    def __getitem__(self, subset) -> Fraction:
        return self._entries.get(self.ground.mask(subset), Fraction(0))

    def __len__(self):
        return len(self._entries)

    def is_zero(self) -> bool:
        return not self._entries

    def __eq__(self, other):
        if not isinstance(other, SetFunction):
            return NotImplemented
        return self.ground == other.ground and self._entries == other._entries

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ground, frozenset(self._entries.items())))
        return self._hash

    def _check(self, other: "SetFunction"):
        if self.ground != other.ground:
            raise GroundMismatchError("set functions live on different ground sets")

    def __add__(self, other: "SetFunction") -> "SetFunction":
        self._check(other)
        out = dict(self._entries)
        for m, v in other._entries.items():
            out[m] = out.get(m, 0) + v
        return SetFunction(self.ground, out)

    def __neg__(self) -> "SetFunction":
        return SetFunction(self.ground, {m: -v for m, v in self._entries.items()})

    def __sub__(self, other: "SetFunction") -> "SetFunction":
        return self + (-other)

    def __mul__(self, c) -> "SetFunction":
        c = as_fraction(c)
        return SetFunction(self.ground, {m: c * v for m, v in self._entries.items()})

    __rmul__ = __mul__

    def dot(self, other: "SetFunction") -> Fraction:
        self._check(other)
        a, b = self._entries, other._entries
        if len(a) > len(b):
            a, b = b, a
        return sum((v * b[m] for m, v in a.items() if m in b), Fraction(0))

    def pushforward(self, ground: GroundSet, set_map) -> "SetFunction":
        """Linear extension of ``1_A -> 1_{set_map(A)}`` into ``ground``."""
        out: dict[int, Fraction] = {}
        for m, v in self._entries.items():
            img = ground.mask(set_map(self.ground.subset(m)))
            out[img] = out.get(img, 0) + v
        return SetFunction(ground, out)

    def to_records(self) -> list[dict]:
        order = sorted(self._entries, key=lambda m: (bin(m).count("1"), self.ground.sorted_list(m)))
        return [
            {"subset": self.ground.sorted_list(m), "value": fmt_fraction(self._entries[m])}
            for m in order
        ]

    @classmethod
    def from_records(cls, ground: GroundSet, records: Iterable[Mapping]) -> "SetFunction":
        out: dict[int, Fraction] = {}
        for rec in records:
            m = ground.mask(rec["subset"])
            out[m] = out.get(m, 0) + as_fraction(rec["value"])
        return cls(ground, out)

    def __repr__(self):
        body = ", ".join(
            "{" + ",".join(map(str, r["subset"])) + "}:" + r["value"] for r in self.to_records()
        )
        return f"SetFunction({body})"


def indicator(ground: GroundSet, S) -> SetFunction:
    return SetFunction(ground, {ground.mask(S): 1})


def t_vector(ground: GroundSet, A, B) -> SetFunction:
    """``1_{A|B} - 1_A - 1_B + 1_{A&B}``; zero exactly when A and B are comparable."""
    a, b = ground.mask(A), ground.mask(B)
    out: dict[int, int] = {}
    for m, c in ((a | b, 1), (a, -1), (b, -1), (a & b, 1)):
        out[m] = out.get(m, 0) + c
    return SetFunction(ground, out)


def iso_vector(ground: GroundSet, A, B) -> SetFunction:
    a, b = ground.mask(A), ground.mask(B)
    if a == b:
        return SetFunction(ground)
    return SetFunction(ground, {a: 1, b: -1})


def _edges_inside(H, mask: int, ground: GroundSet) -> list[int]:
    out = []
    for e in H.edges:
        em = ground.mask(e)
        if em & mask == em:
            out.append(em)
    return out


def _ground_for(H, ground: GroundSet | None) -> GroundSet:
    if ground is not None:
        return ground
    return GroundSet(tuple(H.vertices), cap=max(DEFAULT_GROUND_CAP, len(H.vertices)))


def s_vector(H, A, ground: GroundSet | None = None) -> SetFunction:
    """``-1_A + sum of 1_e`` over the edges of ``H`` lying inside ``A``."""
    ground = _ground_for(H, ground)
    a = ground.mask(A)
    out: dict[int, int] = {a: -1}
    for em in _edges_inside(H, a, ground):
        out[em] = out.get(em, 0) + 1
    return SetFunction(ground, out)


def h_vector(H, X, ground: GroundSet | None = None) -> SetFunction:
    """Degree-corrected density vector of the graph spanned on ``X``.

    ``-1_X + sum_e 1_e - sum_v (deg(v) - 1) 1_{v}`` with degrees taken in the
    spanned graph, so isolated vertices of the span contribute ``+1_{v}``.
    """
    if getattr(H, "arity", 2) != 2:
        raise ArityError("h_vector is defined for 2-uniform graphs only")
    ground = _ground_for(H, ground)
    x = ground.mask(X)
    out: dict[int, int] = {x: -1}
    deg: dict[int, int] = {}
    for em in _edges_inside(H, x, ground):
        if bin(em).count("1") != 2:
            raise ArityError("h_vector is defined for 2-uniform graphs only")
        out[em] = out.get(em, 0) + 1
        for i in range(len(ground)):
            if em >> i & 1:
                deg[i] = deg.get(i, 0) + 1
    for i in range(len(ground)):
        if x >> i & 1:
            c = -(deg.get(i, 0) - 1)
            if c:
                out[1 << i] = out.get(1 << i, 0) + c
    return SetFunction(ground, out)


def linear_combine(terms: Iterable[tuple]) -> SetFunction:
    terms = list(terms)
    if not terms:
        raise SetFunctionError("linear_combine needs at least one term to fix the ground set")
    ground = terms[0][1].ground
    out: dict[int, Fraction] = {}
    for c, f in terms:
        if f.ground != ground:
            raise GroundMismatchError("set functions live on different ground sets")
        c = as_fraction(c)
        if not c:
            continue
        for m, v in f.items():
            out[m] = out.get(m, 0) + c * v
    return SetFunction(ground, out)
