"""Exact representations of closed subgroups of the concrete groups.

A closed subgroup of R^d x T^t x Z^z x F is stored by its lift to
R^(d+t) x Z^(z+k): a rational subspace V supported on the continuous
coordinates (the connected directions) plus a lattice of rational lift
vectors.  The lift of a subgroup always contains the unit lattice (Z per
torus coordinate, m_i Z per finite coordinate), which is added implicitly.

Canonical form: V in reduced row echelon form, and the lattice generators
reduced modulo V (zero at the V pivot columns) and put in Hermite normal
form over a common denominator.  Two subgroups are equal exactly when their
canonical data agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .exactmath import (
    ExactDistance,
    Vec,
    dot,
    hnf_rational,
    lattice_points_in_box,
    linf_minimize,
    projection_distance_sq,
    rref,
    solve_linear,
)
from .groups import ConcreteGroup, ConcretePoint

INFINITY = math.inf


class BoundTooSmall(ValueError):
    """No subgroup element inside the requested search bound."""


class UnsupportedGeometry(ValueError):
    """Exact distance with >= 2 real coordinates mixed into torus directions
    is outside the desk-scale engine (the optimum is no longer sqrt-rational)."""


@dataclass(frozen=True)
class ClosedSubgroupRep:
    group: ConcreteGroup
    continuous_basis: tuple[Vec, ...]
    discrete_gens: tuple[Vec, ...]
    canonical: bool = False

    def __post_init__(self):
        g = self.group
        cont = set(g.continuous_coords)
        for v in self.continuous_basis:
            if len(v) != g.dim:
                raise ValueError("continuous basis vector has wrong length")
            if any(v[c] != 0 for c in range(g.dim) if c not in cont):
                raise ValueError("continuous directions must live on the R and T coordinates")
        for w in self.discrete_gens:
            if len(w) != g.dim:
                raise ValueError("lattice generator has wrong length")
            for c in list(g.free_coords) + list(g.finite_coords):
                if Fraction(w[c]).denominator != 1:
                    raise ValueError("lattice generators must be integral on discrete coordinates")

    def describe(self) -> str:
        parts = []
        if self.continuous_basis:
            parts.append("span{" + ", ".join(_fmt(v) for v in self.continuous_basis) + "}")
        if self.discrete_gens:
            parts.append("lattice{" + ", ".join(_fmt(v) for v in self.discrete_gens) + "}")
        return " + ".join(parts) if parts else "{0}"


def _fmt(v: Vec) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def _unit_lattice(g: ConcreteGroup) -> list[Vec]:
    out = []
    for c in g.torus_coords:
        out.append(tuple(Fraction(1 if i == c else 0) for i in range(g.dim)))
    for c in g.finite_coords:
        m = g.modulus_of(c)
        out.append(tuple(Fraction(m if i == c else 0) for i in range(g.dim)))
    return out


def subgroup(group: ConcreteGroup, continuous=(), gens=()) -> ClosedSubgroupRep:
    """Raw (non-canonical) representation from rational data."""
    cb = tuple(tuple(Fraction(x) for x in v) for v in continuous)
    dg = tuple(tuple(Fraction(x) for x in v) for v in gens)
    return ClosedSubgroupRep(group, cb, dg, canonical=False)


def make_subgroup(group: ConcreteGroup, continuous=(), gens=()) -> ClosedSubgroupRep:
    """Canonical representation from rational data."""
    return canonicalize(subgroup(group, continuous, gens))


def trivial_subgroup(group: ConcreteGroup) -> ClosedSubgroupRep:
    return make_subgroup(group)


def whole_group(group: ConcreteGroup) -> ClosedSubgroupRep:
    cont = []
    gens = []
    for c in group.continuous_coords:
        cont.append([Fraction(1 if i == c else 0) for i in range(group.dim)])
    for c in list(group.free_coords) + list(group.finite_coords):
        gens.append([Fraction(1 if i == c else 0) for i in range(group.dim)])
    return make_subgroup(group, cont, gens)


def cyclic_subgroup(group: ConcreteGroup, generator) -> ClosedSubgroupRep:
    return make_subgroup(group, gens=[list(map(Fraction, generator))])


def line_subgroup(group: ConcreteGroup, direction) -> ClosedSubgroupRep:
    return make_subgroup(group, continuous=[list(map(Fraction, direction))])


def canonicalize(h: ClosedSubgroupRep) -> ClosedSubgroupRep:
    """Unique representation: RREF continuous basis, lattice generators (with
    the implicit unit lattice) reduced modulo the continuous subspace and put
    in Hermite normal form.  Idempotent; membership-equivalent to the input."""
    if h.canonical:
        return h
    g = h.group
    vrows, pivots = rref(h.continuous_basis, g.dim)
    gens = [list(map(Fraction, w)) for w in h.discrete_gens]
    gens.extend(list(v) for v in _unit_lattice(g))
    for w in gens:
        for row, pc in zip(vrows, pivots):
            if w[pc]:
                f = w[pc]
                for i in range(g.dim):
                    w[i] -= f * row[i]
    lattice = hnf_rational(gens, g.dim)
    return ClosedSubgroupRep(g, tuple(vrows), tuple(lattice), canonical=True)


def _v_pivots(h: ClosedSubgroupRep) -> list[int]:
    return [next(j for j, a in enumerate(row) if a) for row in h.continuous_basis]


def _reduce_mod_v(h: ClosedSubgroupRep, vec) -> list[Fraction]:
    w = list(map(Fraction, vec))
    for row, pc in zip(h.continuous_basis, _v_pivots(h)):
        if w[pc]:
            f = w[pc]
            for i in range(len(w)):
                w[i] -= f * row[i]
    return w


def _member_lift(h: ClosedSubgroupRep, vec) -> bool:
    """Is the lift vector in V + lattice? h canonical."""
    w = _reduce_mod_v(h, vec)
    for row in h.discrete_gens:
        pc = next(j for j, a in enumerate(row) if a)
        if w[pc]:
            coeff = w[pc] / row[pc]
            if coeff.denominator != 1:
                return False
            for i in range(len(w)):
                w[i] -= coeff * row[i]
    return all(a == 0 for a in w)


def member(h: ClosedSubgroupRep, x: ConcretePoint, group: ConcreteGroup) -> bool:
    """Exact membership of a reduced point in the subgroup."""
    h = canonicalize(h)
    if h.group != group:
        raise ValueError("point group and subgroup group differ")
    return _member_lift(h, x.coords)


def subgroup_leq(h1: ClosedSubgroupRep, h2: ClosedSubgroupRep) -> bool:
    """Is h1 contained in h2?"""
    h1, h2 = canonicalize(h1), canonicalize(h2)
    for v in h1.continuous_basis:
        rows = [[h2.continuous_basis[i][c] for i in range(len(h2.continuous_basis))]
                for c in range(h1.group.dim)]
        if solve_linear(rows, list(v)) is None:
            return False
    return all(_member_lift(h2, w) for w in h1.discrete_gens)


def subgroup_order(h: ClosedSubgroupRep) -> int:
    """Order of a subgroup of a finite group."""
    h = canonicalize(h)
    g = h.group
    total = g.order()
    if total is None:
        raise ValueError("subgroup order is defined for finite groups only")
    det = Fraction(1)
    for row in h.discrete_gens:
        det *= row[next(j for j, a in enumerate(row) if a)]
    order = Fraction(total) / det  # |H| = det(unit lattice) / det(lift of H)
    assert order.denominator == 1
    return int(order)


# --- exact distance -----------------------------------------------------------


def _minimax_1d(slopes: list[Fraction], targets: list[Fraction]) -> Fraction:
    """min_c max_k |slopes[k] c - targets[k]| (convex piecewise linear)."""
    candidates: set[Fraction] = {Fraction(0)}
    n = len(slopes)
    for k in range(n):
        if slopes[k]:
            candidates.add(targets[k] / slopes[k])
        for j in range(k + 1, n):
            if slopes[k] != slopes[j]:
                candidates.add((targets[k] - targets[j]) / (slopes[k] - slopes[j]))
            if slopes[k] != -slopes[j]:
                candidates.add((targets[k] + targets[j]) / (slopes[k] + slopes[j]))
    return min(
        max(abs(a * c - b) for a, b in zip(slopes, targets)) for c in candidates
    )


def _linf_over_span(vbasis: tuple[Vec, ...], coords: list[int], w: list[Fraction]) -> Fraction:
    if len(vbasis) == 1:
        return _minimax_1d([vbasis[0][c] for c in coords], [w[c] for c in coords])
    t, _ = linf_minimize([[v[c] for v in vbasis] for c in coords], [w[c] for c in coords])
    return t


def _babai_residual(h: ClosedSubgroupRep, center: list[Fraction]) -> list[Fraction]:
    """Residual of the center after rounding to a nearby lattice point
    (triangular Babai step along the echelon rows)."""
    w = list(center)
    for row in h.discrete_gens:
        pc = next(j for j, a in enumerate(row) if a)
        coeff = Fraction(math.floor(w[pc] / row[pc] + Fraction(1, 2)))
        if coeff:
            for i in range(len(w)):
                w[i] -= coeff * row[i]
    return w


def _coset_distance(h: ClosedSubgroupRep, w: list[Fraction]) -> ExactDistance:
    """Distance from the lift difference w to the subspace V, in the max
    metric (w is zero on discrete coordinates)."""
    g = h.group
    reals = list(g.real_coords)
    tori = list(g.torus_coords)
    vbasis = h.continuous_basis
    if not vbasis:
        sq = dot([w[c] for c in reals], [w[c] for c in reals])
        for c in tori:
            sq = max(sq, w[c] * w[c])
        return ExactDistance(sq)
    if len(vbasis) == len(reals) + len(tori):
        return ExactDistance(Fraction(0))  # V is the whole continuous block
    torus_support = any(v[c] != 0 for v in vbasis for c in tori)
    if not torus_support:
        sq = projection_distance_sq([w[c] for c in reals], [tuple(v[c] for c in reals) for v in vbasis])
        for c in tori:
            sq = max(sq, w[c] * w[c])
        return ExactDistance(sq)
    real_support = any(v[c] != 0 for v in vbasis for c in reals)
    if not real_support:
        fixed = dot([w[c] for c in reals], [w[c] for c in reals])
        t = _linf_over_span(vbasis, tori, w)
        return ExactDistance(max(fixed, t * t))
    if len(reals) <= 1:
        t = _linf_over_span(vbasis, reals + tori, w)
        return ExactDistance(t * t)
    raise UnsupportedGeometry(
        "exact distance with a >= 2 dimensional R block mixed into torus "
        "directions is not supported"
    )


def _candidate_boxes(h: ClosedSubgroupRep, x: Vec, bound: Fraction):
    # within the bound, the V coefficient at pivot jj is x[jj] +- bound, so
    # candidate boxes are centered on x reduced modulo V
    g = h.group
    pivots = _v_pivots(h)
    center = _reduce_mod_v(h, x)
    boxes: list[tuple[Fraction, Fraction]] = []
    for c in range(g.dim):
        if c in pivots:
            boxes.append((Fraction(0), Fraction(0)))
        elif c in g.continuous_coords:
            halfwidth = bound * (
                1 + sum(abs(row[c]) for row in h.continuous_basis)
            )
            boxes.append((center[c] - halfwidth, center[c] + halfwidth))
        else:
            boxes.append((x[c], x[c]))
    return boxes


def _project_continuous(h: ClosedSubgroupRep) -> tuple[ClosedSubgroupRep, ConcreteGroup]:
    """Image of the subgroup under the projection killing all discrete
    coordinates (a closed subgroup of R^d x T^t)."""
    g = h.group
    cg = ConcreteGroup(g.reals, g.tori)
    take = list(g.continuous_coords)
    cont = [tuple(v[c] for c in take) for v in h.continuous_basis]
    gens = [tuple(w[c] for c in take) for w in h.discrete_gens]
    return make_subgroup(cg, cont, gens), cg


def _dist_lattice_scaled(
    h: ClosedSubgroupRep, x: Vec, bound: Fraction, good_enough: Fraction | None
) -> Fraction | None:
    """Min squared distance from x to the lattice (no connected directions),
    on integer-scaled data; may return early with any value <= good_enough^2.
    None means every candidate exceeds the bound."""
    g = h.group
    q = 1
    for row in h.discrete_gens:
        for a in row:
            q = q * a.denominator // math.gcd(q, a.denominator)
    for a in x:
        q = q * a.denominator // math.gcd(q, a.denominator)
    q *= bound.denominator
    rows = [[int(a * q) for a in row] for row in h.discrete_gens]
    xi = [int(a * q) for a in x]
    b_scaled = int(bound * q)
    bound_sq = b_scaled * b_scaled
    good_sq = None if good_enough is None else (good_enough * q) ** 2
    lo = [0] * g.dim
    hi = [0] * g.dim
    for c in range(g.dim):
        if c in g.continuous_coords:
            lo[c], hi[c] = xi[c] - b_scaled, xi[c] + b_scaled
        else:
            lo[c], hi[c] = xi[c], xi[c]
    pivots = [next(j for j, a in enumerate(row) if a) for row in rows]
    reals = list(g.real_coords)
    tori = list(g.torus_coords)
    best: int | None = None

    def rec(i: int, acc: list[int]):
        nonlocal best
        if i == len(rows):
            rsq = 0
            for c in reals:
                d = xi[c] - acc[c]
                rsq += d * d
            msq = rsq
            for c in tori:
                d = xi[c] - acc[c]
                msq = max(msq, d * d)
            if msq <= bound_sq and (best is None or msq < best):
                best = msq
            return
        pc = pivots[i]
        pv = rows[i][pc]
        k_lo = -((acc[pc] - lo[pc]) // pv)
        k_hi = (hi[pc] - acc[pc]) // pv
        if k_lo > k_hi:
            return
        cur = [a + k_lo * b for a, b in zip(acc, rows[i])]
        for k in range(k_lo, k_hi + 1):
            rec(i + 1, cur)
            if good_sq is not None and best is not None and best <= good_sq:
                return
            if k < k_hi:
                cur = [a + b for a, b in zip(cur, rows[i])]

    rec(0, [0] * g.dim)
    if best is None:
        return None
    return Fraction(best, q * q)


def dist_point(
    x: ConcretePoint,
    h: ClosedSubgroupRep,
    group: ConcreteGroup,
    bound,
    good_enough=None,
) -> ExactDistance | None:
    """Max-metric distance from x to the subgroup if it is <= bound, else
    None ("> bound").  Enumeration over lattice cosets with a provable
    coefficient box; within a coset the continuous directions are minimized
    exactly (projection or sup-norm vertex LP).

    When good_enough is given the search may stop at any witness distance
    <= good_enough (the returned value still bounds the true distance from
    above); with good_enough=None the value is the exact minimum."""
    h = canonicalize(h)
    if h.group != group:
        raise ValueError("point group and subgroup group differ")
    bound = Fraction(bound)
    if bound <= 0:
        raise BoundTooSmall("search bound must be positive")
    good = None if good_enough is None else Fraction(good_enough)
    g = group
    best: ExactDistance | None = None
    if not h.continuous_basis:
        sq = _dist_lattice_scaled(h, x.coords, bound, good)
        if sq is not None:
            best = ExactDistance(sq)
    else:
        center = _reduce_mod_v(h, x.coords)
        discretes = list(g.free_coords) + list(g.finite_coords)
        if good is not None:
            # Babai rounding usually lands on the witness coset directly
            w = _babai_residual(h, center)
            if all(w[c] == 0 for c in discretes):
                d = _coset_distance(h, w)
                if d <= good:
                    return d if d <= bound else None
        boxes = _candidate_boxes(h, x.coords, bound)
        cont = list(g.continuous_coords)
        scored = []
        for r in lattice_points_in_box(h.discrete_gens, boxes):
            w = _reduce_mod_v(h, [a - b for a, b in zip(x.coords, r)])
            proxy = max((abs(w[c]) for c in cont), default=Fraction(0))
            scored.append((proxy, w))
        # evaluate promising cosets first so a good_enough witness ends early
        scored.sort(key=lambda t: t[0])
        for _, w in scored:
            d = _coset_distance(h, w)
            if best is None or d < best:
                best = d
            if good is not None and best <= good:
                break
    has_discrete = g.frees or g.moduli
    if bound >= 1 and has_discrete and (best is None or best > 1):
        # mismatching the discrete coordinates costs exactly 1; beyond that
        # only the projection to the continuous block matters
        proj, cg = _project_continuous(h)
        xc = ConcretePoint.make(cg, [x.coords[c] for c in g.continuous_coords])
        dproj = dist_point(xc, proj, cg, bound, good)
        if dproj is not None:
            d = ExactDistance(max(Fraction(1), dproj.sq))
            if best is None or d < best:
                best = d
    if best is None or best > bound:
        return None
    return best


def phi_R(r) -> ClosedSubgroupRep:
    """The closed subgroups of the real line: 0 -> {0}, inf -> R, r -> (1/r)Z."""
    g = ConcreteGroup(reals=1)
    if r == INFINITY or r == "inf":
        return whole_group(g)
    r = Fraction(r)
    if r < 0:
        raise ValueError("parameter must be nonnegative or inf")
    if r == 0:
        return trivial_subgroup(g)
    return cyclic_subgroup(g, [1 / r])
