"""Small dense exact-rational simplex solver.

Solves  maximize c.x  subject to linear equality/inequality constraints with
*free* (sign-unrestricted) variables, entirely in :class:`fractions.Fraction`
arithmetic.  Free variables are split into nonnegative pairs internally, a
two-phase tableau method handles infeasible starts, and Bland's rule
guarantees termination.  Built for gate-synthesis programs with tens of
variables and constraints; no sparsity, no floats, no scaling heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Constraint:
    coeffs: tuple[Fraction, ...]
    sense: str  # "<=", ">=", or "="
    rhs: Fraction


@dataclass(frozen=True)
class SimplexResult:
    status: str
    x: tuple[Fraction, ...] | None
    value: Fraction | None


def constraint(coeffs: Sequence, sense: str, rhs) -> Constraint:
    if sense not in ("<=", ">=", "="):
        raise ValueError(f"bad sense {sense!r}")
    return Constraint(tuple(Fraction(c) for c in coeffs), sense, Fraction(rhs))


class _Tableau:
    def __init__(self, rows, basis, ncols):
        self.rows = rows  # each row: list of ncols coeffs + rhs appended
        self.basis = basis  # basic variable index per row
        self.ncols = ncols

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        inv = _ONE / row[c]
        if inv != 1:
            self.rows[r] = row = [v * inv for v in row]
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                self.rows[i] = [a - f * b for a, b in zip(other, row)]
        self.basis[r] = c

    def run(self, obj: list[Fraction], allowed: Sequence[bool]) -> tuple[str, list[Fraction]]:
        """Maximize with reduced-cost row ``obj`` (index -1 holds the value)."""
        rows, basis = self.rows, self.basis
        while True:
            col = -1
            for j in range(self.ncols):
                if allowed[j] and obj[j] > 0:
                    col = j
                    break
            if col < 0:
                return OPTIMAL, obj
            best_r = -1
            best_ratio = None
            for r, row in enumerate(rows):
                a = row[col]
                if a > 0:
                    ratio = row[-1] / a
                    if (
                        best_r < 0
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[r] < basis[best_r])
                    ):
                        best_r, best_ratio = r, ratio
            if best_r < 0:
                return UNBOUNDED, obj
            self.pivot(best_r, col)
            prow = rows[best_r]
            f = obj[col]
            if f:
                for j in range(self.ncols + 1):
                    obj[j] -= f * prow[j]


def solve(objective: Sequence, constraints: Sequence[Constraint]) -> SimplexResult:
    """Maximize ``objective . x`` over free variables subject to ``constraints``."""
    n = len(objective)
    objective = [Fraction(c) for c in objective]
    nsplit = 2 * n  # x_j = u_j - v_j with u, v >= 0

    rows: list[list[Fraction]] = []
    senses: list[str] = []
    for con in constraints:
        if len(con.coeffs) != n:
            raise ValueError("constraint arity mismatch")
        coeffs, sense, rhs = list(con.coeffs), con.sense, con.rhs
        if sense == ">=":
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            sense = "<="
        if rhs < 0:
            coeffs = [-c for c in coeffs]
            rhs = -rhs
            sense = {"<=": ">=", "=": "="}[sense]
        split = [_ZERO] * nsplit
        for j, c in enumerate(coeffs):
            if c:
                split[2 * j] = c
                split[2 * j + 1] = -c
        rows.append((split, sense, rhs))
        senses.append(sense)

    m = len(rows)
    nslack = sum(1 for s in senses if s != "=")
    nart = sum(1 for s in senses if s != "<=")
    ncols = nsplit + nslack + nart

    tab_rows: list[list[Fraction]] = []
    basis: list[int] = []
    art_cols: list[int] = []
    si = nsplit
    ai = nsplit + nslack
    for split, sense, rhs in rows:
        row = split + [_ZERO] * (nslack + nart) + [rhs]
        if sense == "<=":
            row[si] = _ONE
            basis.append(si)
            si += 1
        elif sense == ">=":
            row[si] = Fraction(-1)
            si += 1
            row[ai] = _ONE
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        else:
            row[ai] = _ONE
            basis.append(ai)
            art_cols.append(ai)
            ai += 1
        tab_rows.append(row)

    tab = _Tableau(tab_rows, basis, ncols)
    allowed = [True] * ncols

    if art_cols:
        # phase 1: maximize -sum(artificials); feasible iff optimum is 0
        obj = [_ZERO] * (ncols + 1)
        for r, b in enumerate(tab.basis):
            if b in art_cols:
                row = tab.rows[r]
                for j in range(ncols + 1):
                    obj[j] += row[j]
        for j in art_cols:
            obj[j] = _ZERO
        status, obj = tab.run(obj, allowed)
        assert status == OPTIMAL  # phase-1 objective is bounded by 0
        if obj[-1] != 0:
            return SimplexResult(INFEASIBLE, None, None)
        # drive any degenerate artificial out of the basis
        for r in range(m - 1, -1, -1):
            if tab.basis[r] in art_cols:
                row = tab.rows[r]
                col = next(
                    (j for j in range(nsplit + nslack) if row[j] != 0),
                    -1,
                )
                if col >= 0:
                    tab.pivot(r, col)
                else:
                    del tab.rows[r]
                    del tab.basis[r]
        for j in art_cols:
            allowed[j] = False

    # phase 2: reduced costs of the real objective under the current basis
    cost = [_ZERO] * ncols
    for j in range(n):
        cost[2 * j] = objective[j]
        cost[2 * j + 1] = -objective[j]
    obj = cost + [_ZERO]
    for r, b in enumerate(tab.basis):
        cb = cost[b]
        if cb:
            row = tab.rows[r]
            for j in range(ncols + 1):
                obj[j] -= cb * row[j]
    status, obj = tab.run(obj, allowed)
    if status == UNBOUNDED:
        return SimplexResult(UNBOUNDED, None, None)

    xsplit = [_ZERO] * ncols
    for r, b in enumerate(tab.basis):
        xsplit[b] = tab.rows[r][-1]
    x = tuple(xsplit[2 * j] - xsplit[2 * j + 1] for j in range(n))
    value = sum((objective[j] * x[j] for j in range(n)), _ZERO)
    return SimplexResult(OPTIMAL, x, value)
