"""Exact solver for nonlinear integer programs over a scaled l1 ball.

The solver is deliberately free of pruning: it walks every integer
point of the ball in the canonical enumeration order, evaluates the
objective and all constraints jointly (one oracle step per point), and
keeps the first strict improvement.  Combined with the pinned order
this makes the returned optimum the one with the smallest canonical
ordinal, in serial and parallel runs alike.

Arithmetic is either exact rational (Fraction coefficients, zero
feasibility tolerance) or float (absolute per-constraint tolerance).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable, Optional, Sequence

from .counting import Real, floor_radius
from .errors import InvalidDimensionError, InvalidWeightsError, ShapeMismatchError
from .lattice import EnumerationPartition, canonical_ordinal, enumeration_partitions, iter_l1_points

RATIONAL = "rational"
FLOAT = "float"

DEFAULT_FLOAT_TOLERANCE = 1e-9

Objective = Callable[[Sequence], object]
Constraints = Callable[[Sequence], Sequence]


@dataclass(frozen=True)
class QuadraticConstraint:
    """x'Ax + b'x + c <= 0; A may be None for a purely linear row."""

    A: Optional[tuple[tuple, ...]]
    b: tuple
    c: object


@dataclass(frozen=True)
class LinearPayload:
    c: tuple
    A: tuple[tuple, ...]
    b: tuple


@dataclass(frozen=True)
class QuadraticPayload:
    Q: tuple[tuple, ...]
    c: tuple
    constraints: tuple[QuadraticConstraint, ...]


@dataclass(frozen=True)
class WeightedL1Spec:
    """Constraint sum_i weights_i * |x_i| <= radius with positive weights."""

    weights: tuple
    radius: Real

    def __post_init__(self) -> None:
        for i, w in enumerate(self.weights):
            if w <= 0:
                raise InvalidWeightsError(f"weights[{i}] = {w} is not positive")


@dataclass(frozen=True)
class SolveOptions:
    # parallel > 1 scans first-entry slices on worker threads and merges
    # by (value, ordinal); oracles must be pure for that mode.  Serial
    # runs place no purity requirement on oracles.
    tolerance: Optional[float] = None  # float mode only; rational mode is exact
    parallel: int = 1
    stop_below: Optional[object] = None  # early exit once a feasible value reaches this


@dataclass(frozen=True)
class Solution:
    status: str  # "optimal" | "infeasible"
    x: Optional[tuple]
    objective: Optional[object]
    oracle_calls: int
    points_enumerated: int


@dataclass(frozen=True)
class ProblemInstance:
    """Objective and constraint oracles plus the declared arithmetic mode.

    ``objective`` maps a point to a value; ``constraints`` maps a point
    to the vector of constraint values, feasible when every entry is at
    most the tolerance.  One solver oracle step evaluates both.
    """

    n: int
    objective: Objective
    constraints: Constraints
    arithmetic: str = RATIONAL
    payload: object = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidDimensionError("dimension must be >= 1")
        if self.arithmetic not in (RATIONAL, FLOAT):
            raise ValueError(f"unknown arithmetic mode {self.arithmetic!r}")

    def evaluate(self, x: Sequence) -> tuple[object, tuple]:
        return self.objective(x), tuple(self.constraints(x))

    @classmethod
    def linear(cls, c, A, b, arithmetic: str = RATIONAL) -> "ProblemInstance":
        c, A, b = _convert_linear(c, A, b, arithmetic)
        objective, constraints = make_linear_oracle(c, A, b)
        return cls(
            n=len(c),
            objective=objective,
            constraints=constraints,
            arithmetic=arithmetic,
            payload=LinearPayload(c=c, A=A, b=b),
        )

    @classmethod
    def quadratic(
        cls,
        Q,
        c,
        constraints: Sequence[QuadraticConstraint],
        arithmetic: str = RATIONAL,
    ) -> "ProblemInstance":
        Q, c, rows = _convert_quadratic(Q, c, constraints, arithmetic)
        objective, constraint_fn = make_quadratic_oracle(Q, c, rows)
        return cls(
            n=len(c),
            objective=objective,
            constraints=constraint_fn,
            arithmetic=arithmetic,
            payload=QuadraticPayload(Q=Q, c=c, constraints=rows),
        )


def make_linear_oracle(c: Sequence, A: Sequence[Sequence], b: Sequence):
    """Oracles for f(x) = c.x and g(x) = A x - b."""
    n = len(c)
    for row in A:
        if len(row) != n:
            raise ShapeMismatchError(f"constraint row has {len(row)} entries, expected {n}")
    if len(A) != len(b):
        raise ShapeMismatchError("A and b disagree on the number of constraints")

    def objective(x: Sequence):
        return _dot(c, x)

    def constraints(x: Sequence):
        return tuple(_dot(row, x) - beta for row, beta in zip(A, b))

    return objective, constraints


def make_quadratic_oracle(Q: Sequence[Sequence], c: Sequence, rows: Sequence[QuadraticConstraint]):
    """Oracles for f(x) = x'Qx + c.x and quadratic constraint rows."""
    n = len(c)
    _check_square(Q, n, "Q")
    for k, row in enumerate(rows):
        if row.A is not None:
            _check_square(row.A, n, f"constraints[{k}].A")
        if len(row.b) != n:
            raise ShapeMismatchError(f"constraints[{k}].b has {len(row.b)} entries, expected {n}")

    def objective(x: Sequence):
        return _quad_form(Q, x) + _dot(c, x)

    def constraints(x: Sequence):
        values = []
        for row in rows:
            value = _dot(row.b, x) + row.c
            if row.A is not None:
                value += _quad_form(row.A, x)
            values.append(value)
        return tuple(values)

    return objective, constraints


def solve_l1_ip(
    problem: ProblemInstance,
    radius: Real,
    options: Optional[SolveOptions] = None,
) -> Solution:
    """Global optimum of the problem over the radius-scaled l1 ball.

    Enumerates every integer point of the ball exactly once; among
    multiple optima the one with the smallest canonical ordinal wins.
    ``oracle_calls`` equals ``points_enumerated`` unless an early-stop
    threshold cut the run short.
    """
    opts = options or SolveOptions()
    tol = _feasibility_tolerance(problem, opts)

    def scan(partition: Optional[EnumerationPartition]):
        best = None
        calls = 0
        points = 0
        for point in iter_l1_points(problem.n, radius, partition):
            points += 1
            value, residuals = problem.evaluate(point.x)
            calls += 1
            if all(g <= tol for g in residuals) and (best is None or value < best[0]):
                best = (value, point.ordinal, point.x)
                if opts.stop_below is not None and value <= opts.stop_below:
                    break
        return best, calls, points

    best, calls, points = _run_partitioned(problem.n, radius, scan, opts.parallel)
    return _solution_from(best, calls, points)


def solve_weighted_l1_ip(
    problem: ProblemInstance,
    weighted: WeightedL1Spec,
    options: Optional[SolveOptions] = None,
) -> Solution:
    """Optimum under a weighted l1 constraint, by reduction to the plain ball.

    Coordinates whose weight exceeds the radius are pinned to zero; the
    rest are enumerated inside a ball of effective radius
    radius / min(weights) and re-checked against the exact weighted
    constraint before the oracle is consulted.  The minimum is taken
    over all weights, not just the surviving ones, trading a slightly
    larger enumeration for a direct match with the reduction as stated.
    ``points_enumerated`` counts enumerated candidates; ``oracle_calls``
    counts the candidates that passed the weighted re-check.
    """
    if len(weighted.weights) != problem.n:
        raise ShapeMismatchError(
            f"weights has {len(weighted.weights)} entries, expected {problem.n}"
        )
    opts = options or SolveOptions()
    tol = _feasibility_tolerance(problem, opts)
    exact = problem.arithmetic == RATIONAL
    weights = tuple(Fraction(w) for w in weighted.weights) if exact else tuple(
        float(w) for w in weighted.weights
    )
    radius = Fraction(weighted.radius) if exact else float(weighted.radius)
    weight_tol = 0 if exact else _float_tolerance(opts)

    kept = [i for i, w in enumerate(weights) if w <= radius]
    if not kept:
        zero = (0,) * problem.n
        value, residuals = problem.evaluate(zero)
        if all(g <= tol for g in residuals):
            return Solution("optimal", zero, value, oracle_calls=1, points_enumerated=1)
        return Solution("infeasible", None, None, oracle_calls=1, points_enumerated=1)

    effective_radius = radius / min(weights)

    def embed(y: Sequence[int]) -> tuple:
        x = [0] * problem.n
        for j, i in enumerate(kept):
            x[i] = y[j]
        return tuple(x)

    def scan(partition: Optional[EnumerationPartition]):
        best = None
        calls = 0
        points = 0
        for point in iter_l1_points(len(kept), effective_radius, partition):
            points += 1
            x = embed(point.x)
            weighted_norm = sum(w * abs(v) for w, v in zip(weights, x))
            if weighted_norm > radius + weight_tol:
                continue
            value, residuals = problem.evaluate(x)
            calls += 1
            if all(g <= tol for g in residuals) and (best is None or value < best[0]):
                best = (value, point.ordinal, x)
                if opts.stop_below is not None and value <= opts.stop_below:
                    break
        return best, calls, points

    best, calls, points = _run_partitioned(len(kept), effective_radius, scan, opts.parallel)
    return _solution_from(best, calls, points)


def brute_force_box_solve(
    problem: ProblemInstance,
    box: Sequence[tuple[int, int]],
    extra_l1: Optional[Real] = None,
    options: Optional[SolveOptions] = None,
) -> Solution:
    """Independent cross-validation solver scanning an integer box.

    Applies the same feasibility rule as the ball solver.  Ties break to
    the smallest canonical ordinal when ``extra_l1`` restricts the scan
    to a ball, and to the lexicographically smallest optimum otherwise.
    """
    if len(box) != problem.n:
        raise ShapeMismatchError(f"box has {len(box)} ranges, expected {problem.n}")
    opts = options or SolveOptions()
    tol = _feasibility_tolerance(problem, opts)
    rho = None if extra_l1 is None else floor_radius(extra_l1)
    best = None
    calls = 0
    points = 0
    for x in product(*(range(lo, hi + 1) for lo, hi in box)):
        if rho is not None and sum(abs(v) for v in x) > rho:
            continue
        points += 1
        value, residuals = problem.evaluate(x)
        calls += 1
        if not all(g <= tol for g in residuals):
            continue
        key = (value, canonical_ordinal(x, rho)) if rho is not None else (value,)
        # Scan order over the box is lexicographic, so a strict compare
        # on the value alone already keeps the lexicographic minimum.
        if best is None or key < best[0]:
            best = (key, x)
    if best is None:
        return Solution("infeasible", None, None, calls, points)
    return Solution("optimal", best[1], best[0][0], calls, points)


def _run_partitioned(n: int, radius: Real, scan, parallel: int):
    if parallel <= 1:
        return scan(None)
    partitions = enumeration_partitions(n, radius)
    with ThreadPoolExecutor(max_workers=parallel) as pool:
        results = list(pool.map(scan, partitions))
    best = None
    calls = 0
    points = 0
    for part_best, part_calls, part_points in results:
        calls += part_calls
        points += part_points
        if part_best is not None and (best is None or part_best[:2] < best[:2]):
            best = part_best
    return best, calls, points


def _solution_from(best, calls: int, points: int) -> Solution:
    if best is None:
        return Solution("infeasible", None, None, calls, points)
    value, _, x = best
    return Solution("optimal", tuple(x), value, calls, points)


def _feasibility_tolerance(problem: ProblemInstance, opts: SolveOptions):
    if problem.arithmetic == RATIONAL:
        return 0
    return _float_tolerance(opts)


def _float_tolerance(opts: SolveOptions) -> float:
    return DEFAULT_FLOAT_TOLERANCE if opts.tolerance is None else float(opts.tolerance)


def _dot(a: Sequence, x: Sequence):
    total = 0
    for ai, xi in zip(a, x):
        if ai:
            total += ai * xi
    return total


def _quad_form(M: Sequence[Sequence], x: Sequence):
    total = 0
    for i, row in enumerate(M):
        xi = x[i]
        if xi:
            total += xi * _dot(row, x)
    return total


def _check_square(M: Sequence[Sequence], n: int, name: str) -> None:
    if len(M) != n or any(len(row) != n for row in M):
        raise ShapeMismatchError(f"{name} must be {n}x{n}")


def _convert_linear(c, A, b, arithmetic: str):
    conv = Fraction if arithmetic == RATIONAL else float
    return (
        tuple(conv(v) for v in c),
        tuple(tuple(conv(v) for v in row) for row in A),
        tuple(conv(v) for v in b),
    )


def _convert_quadratic(Q, c, constraints, arithmetic: str):
    conv = Fraction if arithmetic == RATIONAL else float
    rows = tuple(
        QuadraticConstraint(
            A=None if row.A is None else tuple(tuple(conv(v) for v in r) for r in row.A),
            b=tuple(conv(v) for v in row.b),
            c=conv(row.c),
        )
        for row in constraints
    )
    return (
        tuple(tuple(conv(v) for v in row) for row in Q),
        tuple(conv(v) for v in c),
        rows,
    )
