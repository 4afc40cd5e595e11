"""Exact annihilators and finite-scale duality checks.

The character group of R^d x T^t x Z^z x F is R^d x T^z x Z^t x F; the
pairing is the coordinate-wise product, weighted 1/m_i on the finite part,
taken mod 1.  The annihilator of a closed subgroup is computed exactly by a
Smith-normal-form solve of the integrality constraints on the lifted pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .exactmath import Vec, kernel_basis, snf
from .groups import ConcreteGroup
from .neighborhoods import NeighborhoodSpec, ThresholdReport, limit_threshold
from .subgroups import ClosedSubgroupRep, canonicalize, make_subgroup


class TooLarge(ValueError):
    """Finite enumeration beyond the desk-scale cap."""


class NotAHomomorphism(ValueError):
    """The matrix does not define a homomorphism of the given finite groups."""


def _pairing_map(g: ConcreteGroup) -> list[tuple[int, int, Fraction]]:
    """Triples (original coord, dual coord, weight) of the pairing."""
    gd = g.dual()
    out = []
    for i in range(g.reals):
        out.append((i, i, Fraction(1)))
    for j in range(g.tori):
        out.append((g.reals + j, gd.reals + gd.tori + j, Fraction(1)))
    for i in range(g.frees):
        out.append((g.reals + g.tori + i, gd.reals + i, Fraction(1)))
    for i, m in enumerate(g.moduli):
        out.append((
            g.reals + g.tori + g.frees + i,
            gd.reals + gd.tori + gd.frees + i,
            Fraction(1, m),
        ))
    return out


def pairing(g: ConcreteGroup, x: Vec, chi: Vec) -> Fraction:
    """Lifted pairing value; the character value is this taken mod 1."""
    return sum((w * x[oc] * chi[dc] for oc, dc, w in _pairing_map(g)), Fraction(0))


def _pair_row(g: ConcreteGroup, vec: Vec) -> list[Fraction]:
    row = [Fraction(0)] * g.dim
    for oc, dc, w in _pairing_map(g):
        row[dc] = w * vec[oc]
    return row


def annihilator(h: ClosedSubgroupRep, g: ConcreteGroup) -> ClosedSubgroupRep:
    """The subgroup of characters of g vanishing on h, canonical in g.dual().

    Characters must vanish identically on the connected directions of h (a
    real linear condition) and take integer lifted values on its lattice; the
    solution set is cut out by a Smith normal form over the rational kernel
    of the continuous constraints.
    """
    h = canonicalize(h)
    if h.group != g:
        raise ValueError("subgroup group mismatch")
    gd = g.dual()
    dim = g.dim
    v_rows = [_pair_row(g, v) for v in h.continuous_basis]
    basis = kernel_basis(v_rows, dim) if v_rows else [
        tuple(Fraction(1 if i == c else 0) for i in range(dim)) for c in range(dim)
    ]
    nu = len(basis)
    if nu == 0:
        return make_subgroup(gd)
    cond_rows: list[list[Fraction]] = [_pair_row(g, w) for w in h.discrete_gens]
    for c in list(gd.free_coords) + list(gd.finite_coords):
        cond_rows.append([Fraction(1 if i == c else 0) for i in range(dim)])
    amat = [[sum(row[c] * b[c] for c in range(dim)) for b in basis] for row in cond_rows]
    if not amat:
        return make_subgroup(gd, continuous=basis)
    q = 1
    for row in amat:
        for a in row:
            q = q * a.denominator // math.gcd(q, a.denominator)
    a_int = [[int(a * q) for a in row] for row in amat]
    d, _, w = snf(a_int)
    diag = [d[i][i] if i < len(d) and i < len(d[0]) else 0 for i in range(nu)]
    cont: list[Vec] = []
    gens: list[Vec] = []
    for i in range(nu):
        direction = tuple(
            sum(basis[j][c] * w[j][i] for j in range(nu)) for c in range(dim)
        )
        if diag[i] == 0:
            cont.append(direction)
        else:
            scale = Fraction(q, diag[i])
            gens.append(tuple(scale * x for x in direction))
    return make_subgroup(gd, continuous=cont, gens=gens)


@dataclass(frozen=True)
class ConsistencyReport:
    primal: ThresholdReport
    dual: ThresholdReport

    @property
    def consistent(self) -> bool:
        return self.primal.found == self.dual.found

    def to_json(self) -> dict:
        return {
            "primal": self.primal.to_json(),
            "dual": self.dual.to_json(),
            "consistent": self.consistent,
        }


def duality_limit_consistency(
    seq,
    target: ClosedSubgroupRep,
    nbhd: NeighborhoodSpec,
    dual_nbhd: NeighborhoodSpec,
    g: ConcreteGroup,
    n_max: int,
) -> ConsistencyReport:
    """The annihilator map is a homeomorphism, so a sequence converges to the
    target exactly when the annihilator sequence converges to the target's
    annihilator; this checks both thresholds at the supplied scales."""
    primal = limit_threshold(seq, target, nbhd, g, n_max)
    dual_target = annihilator(target, g)
    dual_report = limit_threshold(
        lambda n: annihilator(canonicalize(seq(n)), g), dual_target, dual_nbhd, g.dual(), n_max
    )
    return ConsistencyReport(primal, dual_report)


# --- finite groups -------------------------------------------------------------


def subgroup_lattice_finite(g: ConcreteGroup) -> list[ClosedSubgroupRep]:
    """All subgroups of a finite group (canonical, deduplicated).

    Subgroups correspond to integer lattices between the unit lattice
    diag(moduli) and Z^k; these are enumerated through their Hermite normal
    forms, built bottom row first so containment of each m_i e_i prunes early.
    """
    order = g.order()
    if order is None:
        raise ValueError("subgroup enumeration needs a finite group")
    if order > 1024:
        raise TooLarge(f"group of order {order} exceeds the enumeration cap 1024")
    k = len(g.moduli)
    if k == 0:
        return [make_subgroup(g)]

    def divisors(n: int) -> list[int]:
        return [d for d in range(1, n + 1) if n % d == 0]

    results: list[ClosedSubgroupRep] = []
    rows: list[list[int] | None] = [None] * k

    def contains(vec: list[int], start: int) -> bool:
        v = vec[:]
        for i in range(start, k):
            row = rows[i]
            assert row is not None
            if v[i] % row[i]:
                return False
            c = v[i] // row[i]
            if c:
                for j in range(i, k):
                    v[j] -= c * row[j]
        return all(a == 0 for a in v)

    def build(i: int) -> None:
        if i < 0:
            gens = [tuple(Fraction(a) for a in row) for row in rows]  # type: ignore[union-attr]
            results.append(make_subgroup(g, gens=gens))
            return
        m = g.moduli[i]
        for d in divisors(m):
            tail_ranges = [range(rows[j][j]) for j in range(i + 1, k)]  # type: ignore[index]
            for offs in product(*tail_ranges):
                row = [0] * k
                row[i] = d
                for j, o in zip(range(i + 1, k), offs):
                    row[j] = o
                rows[i] = row
                target = [0] * k
                target[i] = m
                if contains(target, i):
                    build(i - 1)
        rows[i] = None

    build(k - 1)
    return results


def hom_matrix_is_valid(matrix: list[list[int]], dom: ConcreteGroup, cod: ConcreteGroup) -> bool:
    ka, kb = len(dom.moduli), len(cod.moduli)
    if len(matrix) != kb or any(len(r) != ka for r in matrix):
        return False
    for j in range(kb):
        for i in range(ka):
            if (matrix[j][i] * dom.moduli[i]) % cod.moduli[j]:
                return False
    return True


def graph_adjoint_check(matrix: list[list[int]], dom: ConcreteGroup, cod: ConcreteGroup) -> bool:
    """Annihilator of the graph of f equals the graph of the adjoint of f.

    matrix[j][i] is the j-th coordinate of the image of the i-th generator.
    Under the product pairing (with no sign split) the annihilator of the
    graph of f is the set {(-adjoint(chi), chi)}, and that is the subgroup
    compared here against the Smith-normal-form annihilator.
    """
    if not (dom.order() and cod.order()):
        raise ValueError("graph check needs finite groups")
    if not hom_matrix_is_valid(matrix, dom, cod):
        raise NotAHomomorphism("matrix columns do not respect the coordinate orders")
    ka, kb = len(dom.moduli), len(cod.moduli)
    prod_group = ConcreteGroup(moduli=dom.moduli + cod.moduli)
    graph_gens = []
    for i in range(ka):
        vec = [0] * ka
        vec[i] = 1
        graph_gens.append(tuple(Fraction(x) for x in vec + [matrix[j][i] for j in range(kb)]))
    graph = make_subgroup(prod_group, gens=graph_gens)
    computed = annihilator(graph, prod_group)

    adjoint = [[dom.moduli[i] * matrix[j][i] // cod.moduli[j] for j in range(kb)]
               for i in range(ka)]
    adjoint_gens = []
    for j in range(kb):
        chi = [0] * kb
        chi[j] = 1
        adjoint_gens.append(tuple(
            Fraction(x) for x in [-adjoint[i][j] for i in range(ka)] + chi
        ))
    direct = make_subgroup(prod_group.dual(), gens=adjoint_gens)
    return computed == direct
