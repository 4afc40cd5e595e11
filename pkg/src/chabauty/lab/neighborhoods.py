"""Chabauty basic neighborhoods with margin semantics.

A subgroup L lies in the basic neighborhood of H given by a compact set K and
an identity ball W of radius eps when L&K lies within distance eps of H and
H&K within eps of L.  The decision procedure answers only when stable under a
delta = eps/4 perturbation: points of the left subgroup inside K are
enumerated exactly when it has no connected directions and otherwise sampled
on a delta-net; Yes requires every tested distance <= eps - delta, No
requires some tested distance >= eps + delta, and anything in between raises
Borderline rather than guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exactmath import ExactDistance, frac_sqrt_upper, lattice_points_in_box
from .groups import ConcreteGroup, ConcretePoint, metric_sq_between
from .subgroups import (
    ClosedSubgroupRep,
    UnsupportedGeometry,
    canonicalize,
    dist_point,
    member,
    whole_group,
)


@dataclass(frozen=True)
class Ball:
    radius: Fraction

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")


@dataclass(frozen=True)
class FiniteSet:
    points: tuple[ConcretePoint, ...]


@dataclass(frozen=True)
class NeighborhoodSpec:
    compact: Ball | FiniteSet
    identity: Ball

    def __post_init__(self):
        if self.identity.radius >= 1:
            raise ValueError(
                "identity ball must have radius < 1 so discrete coordinates pin exactly"
            )


def neighborhood(rho, eps) -> NeighborhoodSpec:
    return NeighborhoodSpec(Ball(Fraction(rho)), Ball(Fraction(eps)))


class Borderline(Exception):
    """A tested distance landed inside the margin band (eps-delta, eps+delta)."""

    def __init__(self, point: ConcretePoint, distance: ExactDistance, eps: Fraction):
        self.point = point
        self.distance = distance
        self.eps = eps
        super().__init__(
            f"distance {distance} at {point.describe()} is inside the margin band "
            f"around eps = {eps}"
        )


def _metric_norm_upper(g: ConcreteGroup, v) -> Fraction:
    sq = Fraction(0)
    for c in g.real_coords:
        sq += v[c] * v[c]
    bound = frac_sqrt_upper(sq) if sq else Fraction(0)
    for c in g.torus_coords:
        bound = max(bound, abs(v[c]))
    return bound


def test_points(
    h: ClosedSubgroupRep, compact: Ball | FiniteSet, g: ConcreteGroup, delta: Fraction
) -> list[ConcretePoint]:
    """Points of h inside the compact set: exact for lattice-only h, a
    delta-net along the connected directions otherwise.  Every returned point
    is an exact member of h."""
    h = canonicalize(h)
    if isinstance(compact, FiniteSet):
        return [p for p in compact.points if member(h, p, g)]
    rho = compact.radius
    vbasis = h.continuous_basis
    pivots = [next(j for j, a in enumerate(row) if a) for row in vbasis]
    coeff_bounds = [rho if pc in g.real_coords else min(rho, Fraction(1, 2)) for pc in pivots]
    boxes: list[tuple[Fraction, Fraction] | None] = []
    for c in range(g.dim):
        if c in g.real_coords:
            spread = sum(
                (b * abs(v[c]) for b, v in zip(coeff_bounds, vbasis)), Fraction(0)
            )
            boxes.append((-rho - spread, rho + spread))
        elif c in g.torus_coords:
            # lattice representatives only matter modulo the unit lattice:
            # the sampled points are reduced afterwards anyway
            boxes.append((Fraction(0), Fraction(1)))
        elif rho < 1:
            boxes.append((Fraction(0), Fraction(0)))
        elif c in g.finite_coords:
            boxes.append((Fraction(0), Fraction(g.modulus_of(c) - 1)))
        else:
            boxes.append(None)  # unconstrained Z coordinate
    lattice_pivots = [next(j for j, a in enumerate(row) if a) for row in h.discrete_gens]
    for pc in lattice_pivots:
        if boxes[pc] is None:
            raise UnsupportedGeometry(
                "a metric ball of radius >= 1 meets an unbounded Z direction of the "
                "subgroup; use a finite compact set instead"
            )
    supports = [frozenset(c for c in range(g.dim) if v[c]) for v in vbasis]
    disjoint = all(
        not (supports[i] & supports[j])
        for i in range(len(vbasis))
        for j in range(i + 1, len(vbasis))
    )
    # a delta-net needs combined displacement <= delta; for disjoint supports
    # the combined max-metric displacement is the largest single one
    share = 1 if disjoint else max(1, len(vbasis))
    steps = []
    for v, b in zip(vbasis, coeff_bounds):
        norm = _metric_norm_upper(g, v)
        denom = max(1, math.ceil(share * norm / delta)) if norm else 1
        steps.append((Fraction(1, denom), math.ceil(b * denom)))
    origin = tuple(Fraction(0) for _ in range(g.dim))
    seen: set = set()
    out: list[ConcretePoint] = []
    for rep in lattice_points_in_box(h.discrete_gens, boxes):
        stack = [(0, list(rep))]
        while stack:
            i, acc = stack.pop()
            if i == len(vbasis):
                if metric_sq_between(g, tuple(acc), origin) <= rho * rho:
                    pt = ConcretePoint.make(g, acc)
                    if pt.coords not in seen:
                        seen.add(pt.coords)
                        out.append(pt)
                continue
            step, k_max = steps[i]
            for k in range(-k_max, k_max + 1):
                coeff = k * step
                nxt = [a + coeff * b for a, b in zip(acc, vbasis[i])]
                stack.append((i + 1, nxt))
    out.sort(key=lambda p: p.coords)
    return out


def _cached_test_points(
    h: ClosedSubgroupRep, compact, g: ConcreteGroup, delta: Fraction
) -> tuple:
    key = (h, compact, g, delta)
    hit = _POINT_CACHE.get(key)
    if hit is None:
        hit = tuple(test_points(h, compact, g, delta))
        if len(_POINT_CACHE) > 64:
            _POINT_CACHE.clear()
        _POINT_CACHE[key] = hit
    return hit


_POINT_CACHE: dict = {}


def in_U(
    l: ClosedSubgroupRep,
    h: ClosedSubgroupRep,
    nbhd: NeighborhoodSpec,
    g: ConcreteGroup,
) -> bool:
    """Margin-semantics membership of l in the basic neighborhood of h.

    A single tested point at distance >= eps + delta settles No outright, so
    No takes precedence over Borderline."""
    eps = nbhd.identity.radius
    delta = eps / 4
    borderline: Borderline | None = None
    whole = whole_group(g)
    for a, b in ((l, h), (h, l)):
        a, b = canonicalize(a), canonicalize(b)
        if b == whole:
            continue  # members of a are members of b, distance identically 0
        for x in _cached_test_points(a, nbhd.compact, g, delta):
            d = dist_point(x, b, g, bound=eps + delta, good_enough=eps - delta)
            if d is None or d >= eps + delta:
                return False
            if d > eps - delta and borderline is None:
                borderline = Borderline(x, d, eps)
    if borderline is not None:
        raise borderline
    return True


@dataclass(frozen=True)
class ThresholdReport:
    found_at: int | None
    n_max: int
    outcomes: dict[int, str] = field(compare=False)

    @property
    def found(self) -> bool:
        return self.found_at is not None

    def to_json(self) -> dict:
        return {
            "foundAt": self.found_at,
            "nMax": self.n_max,
            "outcomes": {str(n): o for n, o in sorted(self.outcomes.items())},
        }


def limit_threshold(seq, target: ClosedSubgroupRep, nbhd: NeighborhoodSpec,
                    g: ConcreteGroup, n_max: int) -> ThresholdReport:
    """Least n0 <= n_max with in_U(seq(n), target) = Yes for all n in
    [n0, n_max], by walking down from n_max; NotFound (found_at None) when
    even n_max fails.  A Borderline answer ends the Yes run without raising:
    it is recorded in the outcomes, and the certified range never contains
    borderline indices by construction."""
    target = canonicalize(target)
    outcomes: dict[int, str] = {}
    n0: int | None = None
    for n in range(n_max, 0, -1):
        try:
            ok = in_U(canonicalize(seq(n)), target, nbhd, g)
            outcomes[n] = "yes" if ok else "no"
        except Borderline:
            outcomes[n] = "borderline"
            ok = False
        if not ok:
            break
        n0 = n
    return ThresholdReport(n0, n_max, outcomes)


@dataclass(frozen=True)
class ClusterWitness:
    limit: ConcretePoint
    is_identity: bool
    indices: tuple[int, ...]
    final_distance: ExactDistance

    def to_json(self) -> dict:
        return {
            "limit": self.limit.describe(),
            "isIdentity": self.is_identity,
            "indices": list(self.indices),
            "finalDistance": str(self.final_distance),
        }


@dataclass(frozen=True)
class TrivialLimitReport:
    outcomes: dict[int, str] = field(compare=False)
    verdict: str = "inconclusive"
    clusters: tuple[ClusterWitness, ...] = ()
    summary: str = ""

    def to_json(self) -> dict:
        return {
            "outcomes": {str(n): o for n, o in sorted(self.outcomes.items())},
            "verdict": self.verdict,
            "clusters": [c.to_json() for c in self.clusters],
            "summary": self.summary,
        }


def _tail(ns: list[int]) -> list[int]:
    return ns[-max(1, len(ns) // 4):]


def trivial_limit_check(seq, nbhd: NeighborhoodSpec, g: ConcreteGroup,
                        n_max: int) -> TrivialLimitReport:
    """Convergence to the trivial subgroup, plus a hunt for families of
    nonzero points clustering at a limit (witnesses for or against the
    pointwise-null condition)."""
    from .subgroups import trivial_subgroup

    eps = nbhd.identity.radius
    delta = eps / 4
    triv = trivial_subgroup(g)
    outcomes: dict[int, str] = {}
    point_sets: dict[int, list[ConcretePoint]] = {}
    for n in range(1, n_max + 1):
        sub = canonicalize(seq(n))
        try:
            outcomes[n] = "yes" if in_U(sub, triv, nbhd, g) else "no"
        except Borderline:
            outcomes[n] = "borderline"
        point_sets[n] = [p for p in test_points(sub, nbhd.compact, g, delta) if not p.is_zero()]

    ns = sorted(outcomes)
    tail = _tail(ns)
    evens = [n for n in ns if n % 2 == 0]
    odds = [n for n in ns if n % 2 == 1]
    if all(outcomes[n] == "yes" for n in tail):
        verdict = "converges-to-trivial"
        summary = f"in_U against the trivial subgroup holds for all n in [{tail[0]}, {n_max}]"
    elif all(outcomes[n] == "no" for n in tail):
        verdict = "diverges-from-trivial"
        first_no = next(n for n in ns if all(outcomes[m] == "no" for m in ns if m >= n))
        summary = f"in_U against the trivial subgroup fails for all n >= {first_no}"
    elif (all(outcomes[n] == "yes" for n in _tail(evens))
          and all(outcomes[n] != "yes" for n in _tail(odds))):
        verdict = "divergent-oscillating"
        odd_whole = _tail_goes_to_whole(seq, odds, nbhd, g)
        summary = (
            "divergent: even subsequence -> trivial subgroup, odd subsequence -> "
            + ("whole group" if odd_whole else "not the trivial subgroup")
        )
    elif (all(outcomes[n] == "yes" for n in _tail(odds))
          and all(outcomes[n] != "yes" for n in _tail(evens))):
        verdict = "divergent-oscillating"
        even_whole = _tail_goes_to_whole(seq, evens, nbhd, g)
        summary = (
            "divergent: odd subsequence -> trivial subgroup, even subsequence -> "
            + ("whole group" if even_whole else "not the trivial subgroup")
        )
    else:
        verdict = "inconclusive"
        summary = "no stable tail behavior up to n_max"

    clusters = _hunt_clusters(point_sets, eps, g)
    return TrivialLimitReport(outcomes, verdict, clusters, summary)


def _tail_goes_to_whole(seq, indices: list[int], nbhd: NeighborhoodSpec,
                        g: ConcreteGroup) -> bool:
    whole = whole_group(g)
    for n in _tail(indices):
        try:
            if not in_U(canonicalize(seq(n)), whole, nbhd, g):
                return False
        except Borderline:
            return False
    return True


def _hunt_clusters(point_sets: dict[int, list[ConcretePoint]], eps: Fraction,
                   g: ConcreteGroup) -> tuple[ClusterWitness, ...]:
    ns = sorted(point_sets)
    window = [n for n in ns[len(ns) // 2:] if point_sets[n]]
    if len(window) < 2:
        return ()
    zero = ConcretePoint.make(g, [0] * g.dim)
    discretes = list(g.free_coords) + list(g.finite_coords)
    # candidate limits: the identity, one zero-continuous anchor per discrete
    # residue class seen in the final set, and the nearest raw points
    candidates: list[ConcretePoint] = [zero]
    last_pts = sorted(
        point_sets[window[-1]],
        key=lambda p: metric_sq_between(g, p.coords, zero.coords),
    )
    residues_seen = set()
    for p in last_pts:
        residue = tuple(p.coords[c] for c in discretes)
        if residue not in residues_seen:
            residues_seen.add(residue)
            snapped = [Fraction(0)] * g.dim
            for c, v in zip(discretes, residue):
                snapped[c] = v
            candidates.append(ConcretePoint.make(g, snapped))
    candidates.extend(last_pts[:6])
    witnesses = []
    seen = set()
    for c in candidates:
        if c.coords in seen:
            continue
        dists = []
        for n in window:
            best = min(
                ExactDistance(metric_sq_between(g, p.coords, c.coords))
                for p in point_sets[n]
            )
            dists.append(best)
        if dists[-1] <= dists[0] and all(d <= eps for d in dists[-2:]):
            seen.add(c.coords)
            witnesses.append(ClusterWitness(
                limit=c,
                is_identity=c.is_zero(),
                indices=tuple(window),
                final_distance=dists[-1],
            ))
        if len(witnesses) >= 4:
            break
    return tuple(witnesses)
