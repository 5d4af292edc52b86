"""Dense two-phase simplex over exact rational arithmetic.

Every tableau entry is a Fraction, so there is no tolerance tuning
anywhere: feasibility, optimality, and unboundedness are decided
exactly.  Pivot selection uses Bland's rule, which rules out cycling.
Inputs given as floats are converted to the exact rationals they
represent, so the solver accepts mixed data without losing precision.

Intended for small instances (tens of variables): the coordinate-range
and lifted-radius programs of the runtime-bound estimator, and LP
subproblems of mixed integer/continuous solves.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import ShapeMismatchError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Optional[Fraction]
    x: Optional[tuple[Fraction, ...]]


def lp_solve(
    c: Sequence,
    A: Sequence[Sequence],
    b: Sequence,
    sense: str = "min",
    lower: Optional[Sequence] = None,
    upper: Optional[Sequence] = None,
) -> LPResult:
    """Optimize c.x subject to A x <= b plus optional per-variable bounds.

    Variables are free unless a lower/upper entry is given (None keeps a
    side unbounded).  Returns an exact vertex optimum, or a result with
    status "infeasible" / "unbounded".
    """
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    n = len(c)
    cost = [Fraction(v) for v in c]
    rows = [[Fraction(v) for v in row] for row in A]
    rhs = [Fraction(v) for v in b]
    for row in rows:
        if len(row) != n:
            raise ShapeMismatchError(f"constraint row has {len(row)} entries, expected {n}")
    if len(rows) != len(rhs):
        raise ShapeMismatchError("A and b disagree on the number of constraints")
    lo = _bound_list(lower, n)
    hi = _bound_list(upper, n)
    for j in range(n):
        if lo[j] is not None and hi[j] is not None and lo[j] > hi[j]:
            return LPResult(INFEASIBLE, None, None)
    if sense == "max":
        cost = [-v for v in cost]

    # Substitute every variable by nonnegative ones:
    #   lower bound L present:        x = L + z
    #   only an upper bound U:        x = U - z
    #   free:                         x = z_pos - z_neg
    # Upper bounds of shifted variables become extra <= rows.
    subs: list[tuple] = []
    num_z = 0
    extra_rows: list[tuple[int, Fraction]] = []  # (z column, bound)
    for j in range(n):
        if lo[j] is not None:
            subs.append(("shift_lo", lo[j], num_z))
            if hi[j] is not None:
                extra_rows.append((num_z, hi[j] - lo[j]))
            num_z += 1
        elif hi[j] is not None:
            subs.append(("shift_hi", hi[j], num_z))
            num_z += 1
        else:
            subs.append(("split", num_z, num_z + 1))
            num_z += 2

    def expand(row: Sequence[Fraction]) -> list[Fraction]:
        out = [_ZERO] * num_z
        for j, coef in enumerate(row):
            if coef == 0:
                continue
            sub = subs[j]
            if sub[0] == "shift_lo":
                out[sub[2]] += coef
            elif sub[0] == "shift_hi":
                out[sub[2]] -= coef
            else:
                out[sub[1]] += coef
                out[sub[2]] -= coef
        return out

    def constant_part(row: Sequence[Fraction]) -> Fraction:
        total = _ZERO
        for j, coef in enumerate(row):
            sub = subs[j]
            if sub[0] == "shift_lo":
                total += coef * sub[1]
            elif sub[0] == "shift_hi":
                total += coef * sub[1]
        return total

    std_rows = []
    std_rhs = []
    for row, beta in zip(rows, rhs):
        std_rows.append(expand(row))
        std_rhs.append(beta - constant_part(row))
    for col, bound in extra_rows:
        row = [_ZERO] * num_z
        row[col] = _ONE
        std_rows.append(row)
        std_rhs.append(bound)
    std_cost = expand(cost)
    cost_shift = constant_part(cost)

    status, z, value = _solve_leq_form(std_cost, std_rows, std_rhs)
    if status != OPTIMAL:
        return LPResult(status, None, None)

    x = []
    for j in range(n):
        sub = subs[j]
        if sub[0] == "shift_lo":
            x.append(sub[1] + z[sub[2]])
        elif sub[0] == "shift_hi":
            x.append(sub[1] - z[sub[2]])
        else:
            x.append(z[sub[1]] - z[sub[2]])
    objective = value + cost_shift
    if sense == "max":
        objective = -objective
    return LPResult(OPTIMAL, objective, tuple(x))


def _bound_list(bounds: Optional[Sequence], n: int) -> list[Optional[Fraction]]:
    if bounds is None:
        return [None] * n
    if len(bounds) != n:
        raise ShapeMismatchError(f"bound vector has {len(bounds)} entries, expected {n}")
    return [None if v is None else Fraction(v) for v in bounds]


def _solve_leq_form(
    cost: list[Fraction],
    rows: list[list[Fraction]],
    rhs: list[Fraction],
) -> tuple[str, list[Fraction], Fraction]:
    """min cost.z subject to rows.z <= rhs, z >= 0, via two-phase simplex."""
    m = len(rows)
    nz = len(cost)
    # Slack variables turn rows into equalities; rows with negative rhs
    # are negated (slack coefficient -1) and get an artificial variable.
    neg = [i for i in range(m) if rhs[i] < 0]
    num_art = len(neg)
    width = nz + m + num_art
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    art_col = {}
    for k, i in enumerate(neg):
        art_col[i] = nz + m + k
    for i in range(m):
        row = [_ZERO] * (width + 1)
        flip = rhs[i] < 0
        sgn = -1 if flip else 1
        for j in range(nz):
            if rows[i][j]:
                row[j] = sgn * rows[i][j]
        row[nz + i] = Fraction(sgn)
        row[width] = sgn * rhs[i]
        if flip:
            row[art_col[i]] = _ONE
            basis.append(art_col[i])
        else:
            basis.append(nz + i)
        tableau.append(row)

    if num_art:
        # Phase 1: drive the artificial total to zero.
        phase_cost = [_ZERO] * width
        for i in neg:
            phase_cost[art_col[i]] = _ONE
        red, value = _reduced_costs(tableau, basis, phase_cost, width)
        status = _pivot_until_optimal(tableau, basis, red, width)
        if status == UNBOUNDED:  # cannot happen: phase-1 objective >= 0
            return INFEASIBLE, [], _ZERO
        if -red[width] != 0:  # minimized artificial sum stayed positive
            return INFEASIBLE, [], _ZERO
        _evict_artificials(tableau, basis, nz + m, width)

    artificial_floor = nz + m
    red, _ = _reduced_costs(tableau, basis, cost + [_ZERO] * (m + num_art), width)
    status = _pivot_until_optimal(tableau, basis, red, width, forbidden_floor=artificial_floor)
    if status == UNBOUNDED:
        return UNBOUNDED, [], _ZERO
    z = [_ZERO] * nz
    for i, var in enumerate(basis):
        if var < nz:
            z[var] = tableau[i][width]
    value = sum(cost[j] * z[j] for j in range(nz))
    return OPTIMAL, z, value


def _reduced_costs(
    tableau: list[list[Fraction]],
    basis: list[int],
    cost: list[Fraction],
    width: int,
) -> tuple[list[Fraction], Fraction]:
    """Row of reduced costs c_j - c_B . B^-1 A_j, with -objective in the rhs slot."""
    red = list(cost) + [_ZERO]
    for i, var in enumerate(basis):
        cb = cost[var]
        if cb == 0:
            continue
        row = tableau[i]
        for j in range(width + 1):
            if row[j]:
                red[j] -= cb * row[j]
    return red, -red[width]


def _pivot_until_optimal(
    tableau: list[list[Fraction]],
    basis: list[int],
    red: list[Fraction],
    width: int,
    forbidden_floor: int | None = None,
) -> str:
    """Bland-rule pivoting until no negative reduced cost remains."""
    m = len(tableau)
    limit = width if forbidden_floor is None else forbidden_floor
    while True:
        enter = -1
        for j in range(limit):
            if red[j] < 0:
                enter = j
                break
        if enter < 0:
            return OPTIMAL
        leave = -1
        best_ratio: Fraction | None = None
        for i in range(m):
            coef = tableau[i][enter]
            if coef > 0:
                ratio = tableau[i][width] / coef
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leave])
                ):
                    best_ratio = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED
        _pivot(tableau, red, leave, enter, width)
        basis[leave] = enter


def _pivot(
    tableau: list[list[Fraction]],
    red: list[Fraction],
    row: int,
    col: int,
    width: int,
) -> None:
    pivot_row = tableau[row]
    inv = _ONE / pivot_row[col]
    if inv != 1:
        for j in range(width + 1):
            if pivot_row[j]:
                pivot_row[j] *= inv
    for target in tableau:
        if target is pivot_row:
            continue
        factor = target[col]
        if factor:
            for j in range(width + 1):
                if pivot_row[j]:
                    target[j] -= factor * pivot_row[j]
    factor = red[col]
    if factor:
        for j in range(width + 1):
            if pivot_row[j]:
                red[j] -= factor * pivot_row[j]


def _evict_artificials(
    tableau: list[list[Fraction]],
    basis: list[int],
    artificial_floor: int,
    width: int,
) -> None:
    """Pivot basic artificial variables out on any usable column.

    After phase 1 an artificial can linger in the basis at value zero;
    pivoting on any nonzero structural coefficient in its row removes
    it.  A row with no such coefficient is a redundant constraint and is
    harmless to keep, since its artificial stays pinned at zero and the
    column is excluded from phase-2 pivoting.
    """
    for i, var in enumerate(basis):
        if var < artificial_floor:
            continue
        row = tableau[i]
        for j in range(artificial_floor):
            if row[j] != 0:
                dummy = [_ZERO] * (width + 1)
                _pivot(tableau, dummy, i, j, width)
                basis[i] = j
                break
