"""Direct witness search in R x F and the rank-two obstruction certificate."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product


from .groups import ConcreteGroup


class EpsilonTooLarge(ValueError):
    """The obstruction certificate needs a ball of radius < 1/2."""


@dataclass(frozen=True)
class ProbeWitness:
    slope: Fraction           # the R coordinate a of the generator (a, f)
    generator: tuple[int, ...]
    order: int
    step: Fraction            # spacing order * slope of the covering progression

    def to_json(self) -> dict:
        return {
            "slope": str(self.slope),
            "generator": list(self.generator),
            "order": self.order,
            "step": str(self.step),
        }


@dataclass(frozen=True)
class ProbeReport:
    witness: ProbeWitness | None
    candidates_tried: int

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "witness": self.witness.to_json() if self.witness else None,
            "candidatesTried": self.candidates_tried,
        }


def _element_order(f: tuple[int, ...], moduli: tuple[int, ...]) -> int:
    order = 1
    for x, m in zip(f, moduli):
        order = math.lcm(order, m // math.gcd(x, m))
    return order


def probe_integral(g: ConcreteGroup, rho, eps, denom_bound: int) -> ProbeReport:
    """Search for a cyclic subgroup Z.(a, f) of R x F whose translates of the
    identity ball cover [-rho, rho] x F.

    A candidate covers exactly when f generates F and the arithmetic
    progression {k a : k = k0 mod order(f)} hitting each residue is
    eps-dense, i.e. its step order(f) * a is at most 2 eps.  Candidates run
    over reduced fractions a = p/q with 0 < p <= q <= denom_bound (ascending
    q, then p) and generators in lexicographic order.
    """
    if g.reals != 1 or g.tori or g.frees:
        raise ValueError("the probe needs a group of the form R x F")
    eps = Fraction(eps)
    rho = Fraction(rho)
    if eps <= 0 or rho <= 0:
        raise ValueError("rho and eps must be positive")
    total = 1
    for m in g.moduli:
        total *= m
    tried = 0
    for q in range(1, denom_bound + 1):
        for p in range(1, q + 1):
            if math.gcd(p, q) != 1:
                continue
            a = Fraction(p, q)
            tried += 1
            if total * a > 2 * eps:
                continue  # even a generator leaves gaps wider than the ball
            for f in product(*(range(m) for m in g.moduli)):
                if _element_order(f, g.moduli) != total:
                    continue
                return ProbeReport(
                    ProbeWitness(a, f, total, total * a), tried
                )
    return ProbeReport(None, tried)


@dataclass(frozen=True)
class IndependenceCertificate:
    epsilon: Fraction
    det_lower_bound: Fraction

    def statement(self) -> str:
        return (
            f"any s1, s2 within {self.epsilon} of the unit vectors e1, e2 have "
            f"|det(s1, s2)| >= {self.det_lower_bound} > 0, so they are linearly "
            "independent and no cyclic subgroup of R^2 meets the neighborhood "
            f"U(R^2; {{e1, e2}}, Ball({self.epsilon}))"
        )

    def to_json(self) -> dict:
        return {
            "epsilon": str(self.epsilon),
            "detLowerBound": str(self.det_lower_bound),
            "statement": self.statement(),
        }


def independence_obstruction(eps) -> IndependenceCertificate:
    """Exact determinant bound (1-eps)^2 - eps^2 refuting cyclic approximants
    of R^2 at scale eps < 1/2."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("epsilon must be positive")
    if eps >= Fraction(1, 2):
        raise EpsilonTooLarge(f"epsilon = {eps} >= 1/2 gives no positive bound")
    bound = (1 - eps) ** 2 - eps**2
    return IndependenceCertificate(eps, bound)
