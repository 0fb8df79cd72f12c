"""Phase-one revised simplex over exact rationals.

Decides feasibility of ``A x = b, x >= 0`` for a sparse column list ``A``.
On success the primal solution is returned; otherwise the phase-one duals
give a Farkas vector ``z`` with ``z.A_j >= 0`` for every column and
``z.b < 0``.  Pivoting follows Bland's rule, so the method terminates.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

log = logging.getLogger(__name__)

ZERO = Fraction(0)
ONE = Fraction(1)


class PivotLimitError(RuntimeError):
    pass


@dataclass
class PhaseOneResult:
    feasible: bool
    x: dict            # column index -> positive value
    farkas: list | None  # row-indexed Fractions when infeasible
    pivots: int


def phase_one(
    columns: Sequence[Mapping[int, Fraction]],
    b: Sequence[Fraction],
    max_pivots: int | None = None,
) -> PhaseOneResult:
    m = len(b)
    n = len(columns)
    b = [Fraction(v) for v in b]
    cols = [{i: Fraction(v) for i, v in c.items() if v} for c in columns]

    unit_for_row: dict[int, int] = {}
    for j, c in enumerate(cols):
        if len(c) == 1:
            (i, v), = c.items()
            if v == 1 and i not in unit_for_row:
                unit_for_row[i] = j

    # artificial for row i has index n + i and column sign*e_i
    basis: list[int] = []
    art_sign: dict[int, int] = {}
    for i in range(m):
        if b[i] >= 0 and i in unit_for_row:
            basis.append(unit_for_row[i])
        else:
            s = 1 if b[i] >= 0 else -1
            art_sign[i] = s
            basis.append(n + i)
    binv = [[ZERO] * m for _ in range(m)]
    for i in range(m):
        binv[i][i] = Fraction(art_sign.get(i, 1))
    xb = [abs(b[i]) for i in range(m)]

    def is_art(j: int) -> bool:
        return j >= n

    pivots = 0
    while True:
        objective = sum((xb[r] for r in range(m) if is_art(basis[r])), ZERO)
        if objective == 0:
            x = {}
            for r, j in enumerate(basis):
                if not is_art(j) and xb[r]:
                    x[j] = xb[r]
            return PhaseOneResult(True, x, None, pivots)

        y = [ZERO] * m
        for r in range(m):
            if is_art(basis[r]):
                row = binv[r]
                for i in range(m):
                    if row[i]:
                        y[i] += row[i]

        in_basis = set(basis)
        entering = -1
        for j in range(n):
            if j in in_basis:
                continue
            s = ZERO
            for i, a in cols[j].items():
                yi = y[i]
                if yi:
                    s += yi * a
            if s > 0:
                entering = j
                break
        if entering < 0:
            return PhaseOneResult(False, {}, [-v for v in y], pivots)

        col = cols[entering]
        u = [ZERO] * m
        for r in range(m):
            row = binv[r]
            s = ZERO
            for i, a in col.items():
                if row[i]:
                    s += row[i] * a
            u[r] = s

        leave = -1
        best = None
        for r in range(m):
            if u[r] > 0:
                ratio = xb[r] / u[r]
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    best, leave = ratio, r
        if leave < 0:
            raise RuntimeError("phase-one problem reported unbounded; this cannot happen")

        piv = u[leave]
        prow = binv[leave]
        nz = [i for i in range(m) if prow[i]]
        for i in nz:
            prow[i] /= piv
        xb[leave] /= piv
        for r in range(m):
            if r != leave and u[r]:
                f = u[r]
                row = binv[r]
                for i in nz:
                    row[i] -= f * prow[i]
                xb[r] -= f * xb[leave]
        basis[leave] = entering
        pivots += 1
        if max_pivots is not None and pivots > max_pivots:
            raise PivotLimitError(f"exceeded {max_pivots} pivots")
