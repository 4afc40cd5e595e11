"""Desk-scale concrete groups R^d x T^t x Z^z x (finite abelian part).

Points are exact rational coordinate vectors in the lifted space R^(d+t) x
Z^(z+k): circle coordinates are carried by representatives in [0, 1) whose
full preimage contains the unit lattice, finite coordinates by residues in
[0, m_i).  The metric is the maximum of the Euclidean distance on the R
block, the circle distance per T coordinate, and the 0/1 discrete metric per
Z and finite coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmath import ExactDistance, Vec

MAX_DIM = 6


@dataclass(frozen=True)
class ConcreteGroup:
    reals: int = 0
    tori: int = 0
    frees: int = 0
    moduli: tuple[int, ...] = ()

    def __post_init__(self):
        if min(self.reals, self.tori, self.frees, 0) < 0:
            raise ValueError("coordinate counts must be nonnegative")
        if any(m < 2 for m in self.moduli):
            raise ValueError("finite moduli must be >= 2")
        if self.dim > MAX_DIM:
            raise ValueError(f"group dimension {self.dim} exceeds the desk-scale cap {MAX_DIM}")

    @property
    def dim(self) -> int:
        return self.reals + self.tori + self.frees + len(self.moduli)

    @property
    def continuous_coords(self) -> range:
        return range(self.reals + self.tori)

    @property
    def real_coords(self) -> range:
        return range(self.reals)

    @property
    def torus_coords(self) -> range:
        return range(self.reals, self.reals + self.tori)

    @property
    def free_coords(self) -> range:
        return range(self.reals + self.tori, self.reals + self.tori + self.frees)

    @property
    def finite_coords(self) -> range:
        return range(self.reals + self.tori + self.frees, self.dim)

    def modulus_of(self, coord: int) -> int:
        return self.moduli[coord - (self.reals + self.tori + self.frees)]

    def order(self) -> int | None:
        """The order when the group is finite, else None."""
        if self.reals or self.tori or self.frees:
            return None
        out = 1
        for m in self.moduli:
            out *= m
        return out

    def dual(self) -> "ConcreteGroup":
        """Character group: R and the finite part self-paired, T and Z swapped."""
        return ConcreteGroup(self.reals, self.frees, self.tori, self.moduli)

    def describe(self) -> str:
        parts = ["R"] * self.reals + ["T"] * self.tori + ["Z"] * self.frees
        parts += [f"Z({m})" for m in self.moduli]
        return " x ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ConcretePoint:
    coords: Vec

    @classmethod
    def make(cls, group: ConcreteGroup, raw) -> "ConcretePoint":
        coords = [Fraction(x) for x in raw]
        if len(coords) != group.dim:
            raise ValueError(f"expected {group.dim} coordinates, got {len(coords)}")
        for c in group.torus_coords:
            coords[c] %= 1
        for c in group.free_coords:
            if coords[c].denominator != 1:
                raise ValueError(f"coordinate {c} of a Z block must be an integer")
        for c in group.finite_coords:
            if coords[c].denominator != 1:
                raise ValueError(f"coordinate {c} of a finite block must be an integer")
            coords[c] %= group.modulus_of(c)
        return cls(tuple(coords))

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def describe(self) -> str:
        return "(" + ", ".join(str(x) for x in self.coords) + ")"


def reduce_coords(group: ConcreteGroup, raw) -> Vec:
    return ConcretePoint.make(group, raw).coords


def metric_sq_between(group: ConcreteGroup, x: Vec, y: Vec) -> Fraction:
    """Square of the max-metric distance between two reduced points."""
    worst = Fraction(0)
    euclid = Fraction(0)
    for c in group.real_coords:
        d = x[c] - y[c]
        euclid += d * d
    worst = max(worst, euclid)
    for c in group.torus_coords:
        d = (x[c] - y[c]) % 1
        d = min(d, 1 - d)
        worst = max(worst, d * d)
    for c in group.free_coords:
        if x[c] != y[c]:
            worst = max(worst, Fraction(1))
    for c in group.finite_coords:
        if (x[c] - y[c]) % group.modulus_of(c):
            worst = max(worst, Fraction(1))
    return worst


def metric(group: ConcreteGroup, x: ConcretePoint, y: ConcretePoint) -> ExactDistance:
    return ExactDistance(metric_sq_between(group, x.coords, y.coords))


def lift_metric_sq(group: ConcreteGroup, v: Vec) -> Fraction:
    """Squared max-metric length of a *lift* vector (no circle wrapping):
    used for net-step estimates where v is a difference of nearby lifts."""
    worst = Fraction(0)
    euclid = Fraction(0)
    for c in group.real_coords:
        euclid += v[c] * v[c]
    worst = max(worst, euclid)
    for c in group.torus_coords:
        worst = max(worst, v[c] * v[c])
    for c in range(group.reals + group.tori, group.dim):
        if v[c]:
            worst = max(worst, Fraction(1))
    return worst
