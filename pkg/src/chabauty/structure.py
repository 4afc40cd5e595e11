"""Structural invariants: identity component, comp part, vector splitting,
flags, and the monothetic / inductively monothetic deciders.

comp(G) denotes the union of all compact subgroups.  For every atom of the
grammar the values below are classical facts; products and local products are
handled componentwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .grammar import (
    BohrR,
    BohrZ,
    BohrZComponent,
    Circle,
    Cyclic,
    GroupExpr,
    Integers,
    LocalProduct,
    PadicInt,
    PadicRat,
    ProfiniteZ,
    Product,
    Prufer,
    QSubgroup,
    Rationals,
    Real,
    Solenoid,
    Trivial,
    normalize,
    product_factors,
    render,
)
from .primes import prime_power
from .verdict import TraceStep, Verdict


class NotCompact(ValueError):
    """The monothetic test only applies to compact groups."""


@dataclass(frozen=True)
class StructureReport:
    vector_rank: int
    identity_component: GroupExpr
    comp_part: GroupExpr
    quotient_mod_g0: GroupExpr
    compact: bool
    discrete: bool
    connected: bool
    totally_disconnected: bool
    periodic: bool
    compact_free: bool
    torsion_free_discrete: bool

    def to_json(self) -> dict:
        return {
            "vectorRank": self.vector_rank,
            "identityComponent": render(self.identity_component),
            "compPart": render(self.comp_part),
            "quotientModG0": render(self.quotient_mod_g0),
            "flags": {
                "compact": self.compact,
                "discrete": self.discrete,
                "connected": self.connected,
                "totallyDisconnected": self.totally_disconnected,
                "periodic": self.periodic,
                "compactFree": self.compact_free,
                "torsionFreeDiscrete": self.torsion_free_discrete,
            },
        }


# Per-atom rows: (G0, comp, G/G0, compact, discrete, connected, tot.disc.,
# periodic, compact-free, torsion-free-discrete).  Parametrized atoms are
# handled in _atom_row.
_TRIV = Trivial()

_FIXED_ROWS = {
    Trivial: (_TRIV, _TRIV, _TRIV, True, True, True, True, True, True, True),
    Real: (Real(), _TRIV, _TRIV, False, False, True, False, False, True, False),
    Circle: (Circle(), Circle(), _TRIV, True, False, True, False, False, False, False),
    Integers: (_TRIV, _TRIV, Integers(), False, True, False, True, False, True, True),
    Rationals: (_TRIV, _TRIV, Rationals(), False, True, False, True, False, True, True),
    BohrZ: (
        BohrZComponent(), BohrZ(), ProfiniteZ(),
        True, False, False, False, False, False, False,
    ),
    BohrR: (BohrR(), BohrR(), _TRIV, True, False, True, False, False, False, False),
    BohrZComponent: (
        BohrZComponent(), BohrZComponent(), _TRIV,
        True, False, True, False, False, False, False,
    ),
    ProfiniteZ: (
        _TRIV, ProfiniteZ(), ProfiniteZ(),
        True, False, False, True, True, False, False,
    ),
}


def _atom_row(g: GroupExpr) -> tuple:
    row = _FIXED_ROWS.get(type(g))
    if row is not None:
        return row
    if isinstance(g, Cyclic):
        return (_TRIV, g, g, True, True, False, True, True, False, False)
    if isinstance(g, Prufer):
        return (_TRIV, g, g, False, True, False, True, True, False, False)
    if isinstance(g, PadicInt):
        return (_TRIV, g, g, True, False, False, True, True, False, False)
    if isinstance(g, PadicRat):
        return (_TRIV, g, g, False, False, False, True, True, False, False)
    if isinstance(g, QSubgroup):
        return (_TRIV, _TRIV, g, False, True, False, True, False, True, True)
    if isinstance(g, Solenoid):
        return (g, g, _TRIV, True, False, True, False, False, False, False)
    if isinstance(g, LocalProduct):
        if not g.entries:
            return _FIXED_ROWS[Trivial]
        compact = all(_atom_row(c)[3] for _, c in g.entries)
        discrete = all(_atom_row(c)[4] for _, c in g.entries)
        return (_TRIV, g, g, compact, discrete, False, True, True, False, False)
    raise TypeError(f"not a normalizable atom: {g!r}")


def identity_component(g: GroupExpr) -> GroupExpr:
    """Connected component of the identity."""
    g = normalize(g)
    return normalize(Product(tuple(_atom_row(f)[0] for f in product_factors(g)))
                     if isinstance(g, Product) else _atom_row(g)[0])


def comp_part(g: GroupExpr) -> GroupExpr:
    """Union of all compact subgroups (closed for every grammar expression)."""
    g = normalize(g)
    return normalize(Product(tuple(_atom_row(f)[1] for f in product_factors(g)))
                     if isinstance(g, Product) else _atom_row(g)[1])


def vector_split(g: GroupExpr) -> tuple[int, GroupExpr]:
    """(n, h) with g isomorphic to R^n x h and h free of vector factors."""
    g = normalize(g)
    factors = product_factors(g)
    rest = tuple(f for f in factors if not isinstance(f, Real))
    n = len(factors) - len(rest)
    if not rest:
        return n, Trivial()
    if len(rest) == 1:
        return n, rest[0]
    return n, Product(rest)


@lru_cache(maxsize=None)
def flags(g: GroupExpr) -> StructureReport:
    """Full structure report for a (normalized internally) expression."""
    g = normalize(g)
    factors = product_factors(g)
    rows = [_atom_row(f) for f in factors]
    g0 = normalize(Product(tuple(r[0] for r in rows)))
    comp = normalize(Product(tuple(r[1] for r in rows)))
    quot = normalize(Product(tuple(r[2] for r in rows)))
    agg = [all(r[i] for r in rows) for i in range(3, 10)]
    return StructureReport(
        vector_rank=sum(1 for f in factors if isinstance(f, Real)),
        identity_component=g0,
        comp_part=comp,
        quotient_mod_g0=quot,
        compact=agg[0],
        discrete=agg[1],
        connected=agg[2],
        totally_disconnected=agg[3],
        periodic=agg[4],
        compact_free=agg[5],
        torsion_free_discrete=agg[6],
    )


# --- monothetic tests --------------------------------------------------------


def _torsion_rank_contribution(f: GroupExpr) -> tuple[dict[int, int], int]:
    """p-ranks of the torsion part of the character group of a compact atom.

    Returns (ranks at individual primes, rank contributed at every prime).
    """
    if isinstance(f, Cyclic):
        p, _ = prime_power(f.modulus)  # compact factors are normalized
        return {p: 1}, 0
    if isinstance(f, PadicInt):
        return {f.prime: 1}, 0
    if isinstance(f, (Circle, Solenoid, BohrR, BohrZComponent, Trivial)):
        return {}, 0
    if isinstance(f, (BohrZ, ProfiniteZ)):
        return {}, 1
    if isinstance(f, LocalProduct):
        ranks: dict[int, int] = {}
        for p, _ in f.entries:
            ranks[p] = ranks.get(p, 0) + 1
        return ranks, 0
    raise NotCompact(f"{render(f)} is not a compact atom")


def is_monothetic_compact(g: GroupExpr) -> bool:
    """Whether a compact group is topologically generated by one element.

    A compact abelian group is monothetic exactly when its character group
    embeds into the discrete circle, i.e. when the torsion part of the dual
    has p-rank at most 1 at every prime.
    """
    g = normalize(g)
    if not flags(g).compact:
        raise NotCompact(f"{render(g)} is not compact")
    ranks: dict[int, int] = {}
    everywhere = 0
    for f in product_factors(g):
        r, e = _torsion_rank_contribution(f)
        everywhere += e
        for p, k in r.items():
            ranks[p] = ranks.get(p, 0) + k
    if everywhere > 1:
        return False
    worst = max(ranks.values(), default=0)
    return worst + everywhere <= 1


CLAUSE_TRIVIAL = "trivial"
CLAUSE_COMPACT_CONNECTED = "one-dimensional-compact-connected"
CLAUSE_RATIONAL_SUBGROUP = "rational-subgroup"
CLAUSE_LOCAL_PRODUCT = "periodic-local-product"


def _local_product_primes(factors: tuple[GroupExpr, ...]) -> tuple[dict[int, int], int] | None:
    """Prime multiplicities of a would-be local product, or None if some
    factor is not p-primary.  Second component counts all-primes factors."""
    counts: dict[int, int] = {}
    everywhere = 0
    for f in factors:
        if isinstance(f, Cyclic):
            pk = prime_power(f.modulus)
            if pk is None:
                return None
            counts[pk[0]] = counts.get(pk[0], 0) + 1
        elif isinstance(f, (Prufer, PadicInt, PadicRat)):
            counts[f.prime] = counts.get(f.prime, 0) + 1
        elif isinstance(f, ProfiniteZ):
            everywhere += 1
        elif isinstance(f, LocalProduct):
            for p, _ in f.entries:
                counts[p] = counts.get(p, 0) + 1
        else:
            return None
    return counts, everywhere


def is_inductively_monothetic(g: GroupExpr) -> Verdict:
    """Whether every finitely generated closed subgroup is monothetic.

    Decided by matching the normalized expression against the three classes
    of inductively monothetic locally compact groups; the verdict carries the
    matched clause or a counter-reason.
    """
    g = normalize(g)
    cite = "inductively-monothetic-classes"

    def yes(clause: str, detail: str) -> Verdict:
        return Verdict(
            True,
            (TraceStep("inductively-monothetic", cite, detail),),
            clause=clause,
        )

    def no(detail: str) -> Verdict:
        return Verdict(False, (TraceStep("inductively-monothetic", cite, detail),))

    if isinstance(g, Trivial):
        return yes(CLAUSE_TRIVIAL, "trivial group (empty local product)")
    if isinstance(g, (Circle, Solenoid)):
        return yes(CLAUSE_COMPACT_CONNECTED, f"{render(g)} is one-dimensional compact connected")
    if isinstance(g, (Integers, Rationals, QSubgroup)):
        return yes(CLAUSE_RATIONAL_SUBGROUP, f"{render(g)} is a discrete subgroup of Q")
    counted = _local_product_primes(product_factors(g))
    if counted is None:
        return no(f"{render(g)} has a factor that is not p-primary")
    counts, everywhere = counted
    if everywhere > 1:
        return no("two components supported at every prime")
    for p, k in counts.items():
        if k + everywhere > 1:
            return no(f"two {p}-primary components")
    return yes(CLAUSE_LOCAL_PRODUCT, "local product with one p-primary component per prime")
