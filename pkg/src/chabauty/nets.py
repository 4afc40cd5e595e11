"""Metric-space diagonal form of the iterated limit theorem.

Every space handled here has countable neighborhood bases, so the full
subnet over the product of all row index sets can be replaced by a diagonal
subsequence: pick, in row i, the least column j(i) whose member is within
tol(i) of the row limit.  When the row limits converge and the tolerances
shrink, the diagonal converges to the iterated limit with the reported
deviations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .lab.exactmath import ExactDistance, frac_sqrt_upper
from .lab.groups import ConcreteGroup, metric_sq_between
from .lab.neighborhoods import (
    Borderline,
    NeighborhoodSpec,
    in_U,
    neighborhood,
    test_points,
    trivial_limit_check,
)
from .lab.subgroups import ClosedSubgroupRep, canonicalize, dist_point


class RowDivergent(ValueError):
    def __init__(self, row: int, j_max: int):
        self.row = row
        super().__init__(f"row {row} never reached its tolerance within j <= {j_max}")


@dataclass(frozen=True)
class DoubleSequence:
    eval: Callable[[int, int], object]
    row_limits: Callable[[int], object] | None = None


@dataclass(frozen=True)
class DiagonalRow:
    i: int
    j: int
    row_deviation: ExactDistance
    overall_deviation: ExactDistance | None

    def to_json(self) -> dict:
        return {
            "i": self.i,
            "j": self.j,
            "rowDeviation": str(self.row_deviation),
            "overallDeviation": (
                None if self.overall_deviation is None else str(self.overall_deviation)
            ),
        }


@dataclass(frozen=True)
class DiagonalReport:
    rows: tuple[DiagonalRow, ...]

    def pairs(self) -> list[tuple[int, int]]:
        return [(r.i, r.j) for r in self.rows]

    def to_json(self) -> dict:
        return {"rows": [r.to_json() for r in self.rows]}


def subgroup_pseudo_distance(g: ConcreteGroup, nbhd: NeighborhoodSpec):
    """Two-sided sampled sup-distance between subgroups at a fixed scale:
    the largest distance from a tested point of either subgroup inside the
    compact set to the other subgroup.  A pseudo-metric adapted to the
    neighborhood: small values certify mutual approximation at this scale.

    The returned callable takes (a, b, cutoff=None); with a cutoff it gives
    up and returns None as soon as some tested point exceeds it."""
    from .lab.groups import metric_sq_between as _msq
    from .lab.neighborhoods import Ball, _cached_test_points

    delta = nbhd.identity.radius / 4
    # subgroups contain 0, so any tested point is within the compact set's
    # own radius of every subgroup
    if isinstance(nbhd.compact, Ball):
        cap = nbhd.compact.radius + 1
    else:
        zero = tuple(Fraction(0) for _ in range(g.dim))
        cap = 1 + max(
            (frac_sqrt_upper(_msq(g, p.coords, zero)) for p in nbhd.compact.points),
            default=Fraction(1),
        )

    def dist(a: ClosedSubgroupRep, b: ClosedSubgroupRep, cutoff=None) -> ExactDistance | None:
        worst = ExactDistance(Fraction(0))
        # the second argument is typically the limit candidate: points of it
        # missing the first argument are the common failure, so test that
        # side first and bail out cheaply under a cutoff
        for left, right in ((b, a), (a, b)):
            right = canonicalize(right)
            for x in _cached_test_points(canonicalize(left), nbhd.compact, g, delta):
                if cutoff is not None:
                    d = dist_point(x, right, g, bound=Fraction(cutoff))
                    if d is None:
                        return None
                else:
                    # grow the search bound until the point is resolved; a
                    # value under the running sup cannot change it and may
                    # be reported lazily
                    good = frac_sqrt_upper(worst.sq)
                    bound = max(nbhd.identity.radius, good)
                    d = None
                    while d is None and bound <= cap:
                        d = dist_point(x, right, g, bound=bound, good_enough=good)
                        bound *= 4
                    if d is None:
                        d = ExactDistance(cap * cap)
                if worst < d:
                    worst = d
        return worst

    return dist


def vector_distance(g: ConcreteGroup):
    def dist(a, b, cutoff=None) -> ExactDistance | None:
        d = ExactDistance(
            metric_sq_between(g, tuple(map(Fraction, a)), tuple(map(Fraction, b)))
        )
        if cutoff is not None and d > Fraction(cutoff):
            return None
        return d

    return dist


def diagonal_subsequence(
    ds: DoubleSequence,
    tol_schedule: Callable[[int], Fraction],
    i_max: int,
    j_max: int,
    dist,
    overall=None,
) -> DiagonalReport:
    """j(i) = least j with dist(eval(i, j), rowLimit(i)) <= tol(i); reports
    each row deviation and, when an overall limit is supplied, the deviation
    of the diagonal member from it.  Raises RowDivergent when a row never
    meets its tolerance."""
    if ds.row_limits is None:
        raise ValueError("diagonal selection needs row limits")
    rows: list[DiagonalRow] = []
    for i in range(1, i_max + 1):
        tol = Fraction(tol_schedule(i))
        limit = ds.row_limits(i)
        chosen: tuple[int, ExactDistance] | None = None
        for j in range(1, j_max + 1):
            d = dist(ds.eval(i, j), limit, tol)
            if d is not None and d <= tol:
                chosen = (j, d)
                break
        if chosen is None:
            raise RowDivergent(i, j_max)
        overall_dev = None
        if overall is not None:
            overall_dev = dist(ds.eval(i, chosen[0]), overall, None)
        rows.append(DiagonalRow(i, chosen[0], chosen[1], overall_dev))
    return DiagonalReport(tuple(rows))


@dataclass(frozen=True)
class EquivalenceReport:
    scales: tuple[NeighborhoodSpec, ...]
    reports: tuple
    pointwise_null: bool
    summary: str

    def to_json(self) -> dict:
        return {
            "reports": [r.to_json() for r in self.reports],
            "pointwiseNull": self.pointwise_null,
            "summary": self.summary,
        }


def trivial_limit_equivalence(
    seq, g: ConcreteGroup, scales: list[NeighborhoodSpec], n_max: int
) -> EquivalenceReport:
    """Compare convergence to the trivial subgroup against the pointwise
    condition that every clustering family of nonzero points has the
    identity as its limit, at each supplied scale."""
    reports = tuple(trivial_limit_check(seq, nbhd, g, n_max) for nbhd in scales)
    nonzero_limits = [
        w for r in reports for w in r.clusters if not w.is_identity
    ]
    pointwise_null = not nonzero_limits
    converges = all(r.verdict == "converges-to-trivial" for r in reports)
    if converges and pointwise_null:
        summary = "limit is trivial and every clustering family vanishes: (a) and (b) agree"
    elif not converges and not pointwise_null:
        summary = (
            "not a trivial limit, witnessed by a clustering family with nonzero limit "
            + nonzero_limits[0].limit.describe()
        )
    elif not converges and pointwise_null:
        summary = (
            "no clustering family with nonzero limit was found although the trivial "
            "limit fails; the sequence is divergent (full-index selections see only "
            "part of the picture)"
        )
    else:
        summary = "trivial limit holds; clustering families all vanish at these scales"
    return EquivalenceReport(tuple(scales), reports, pointwise_null, summary)


@dataclass(frozen=True)
class CorollaryDemo:
    diagonal: DiagonalReport
    tail_outcomes: dict[int, str]
    entered_at: int | None

    def to_json(self) -> dict:
        return {
            "diagonal": self.diagonal.to_json(),
            "tailOutcomes": {str(i): o for i, o in sorted(self.tail_outcomes.items())},
            "enteredAt": self.entered_at,
        }


def corollary_demo(rho, eps, i_max: int, j_max: int = 1024) -> CorollaryDemo:
    """Real subgroups that are themselves limits of cyclic subgroups admit a
    single cyclic sequence converging to the whole group: the slope-i lines
    in R x T are approximated by the cyclic groups generated by (1/j, i/j),
    and the diagonal with tolerances eps/i enters the whole-group
    neighborhood at scale (rho, eps) and stays."""
    from .lab.sequences import builtin_sequence
    from .lab.subgroups import cyclic_subgroup, whole_group

    g = ConcreteGroup(reals=1, tori=1)
    scale = neighborhood(rho, eps)
    lines = builtin_sequence("rn", g)
    pdist = subgroup_pseudo_distance(g, scale)

    def eval_cell(i: int, j: int) -> ClosedSubgroupRep:
        return cyclic_subgroup(g, [Fraction(1, j), Fraction(i, j)])

    ds = DoubleSequence(eval=eval_cell, row_limits=lines)
    eps_f = Fraction(eps)
    whole = whole_group(g)
    report = diagonal_subsequence(
        ds,
        tol_schedule=lambda i: eps_f / i,
        i_max=i_max,
        j_max=j_max,
        dist=pdist,
        overall=whole,
    )
    outcomes: dict[int, str] = {}
    for row in report.rows:
        member = eval_cell(row.i, row.j)
        try:
            outcomes[row.i] = "yes" if in_U(member, whole, scale, g) else "no"
        except Borderline:
            outcomes[row.i] = "borderline"
    entered = None
    for i in range(i_max, 0, -1):
        if outcomes.get(i) != "yes":
            break
        entered = i
    return CorollaryDemo(report, outcomes, entered)
