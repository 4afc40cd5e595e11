"""Symbolic character groups for the expression grammar.

The atom table pairs R with itself, T with Z, finite cyclic groups with
themselves, Prufer groups with p-adic integers, Qp with itself, and subgroups
of Q with solenoids of the same height function.  Products dualize
componentwise; local products dualize entry-wise, the canonical compact open
subgroup of each dual entry being the annihilator of the original one.
"""

from __future__ import annotations

from .grammar import (
    INF,
    BohrR,
    BohrZ,
    BohrZComponent,
    Circle,
    Cyclic,
    GroupExpr,
    Heights,
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
    render,
)


class DualUnrepresentable(ValueError):
    """The character group falls outside the expression grammar."""


def dual(g: GroupExpr) -> GroupExpr:
    """Character group of g, normalized. Raises DualUnrepresentable for the
    Bohr atoms, whose duals are discrete groups the grammar cannot express."""
    return normalize(_dual(g))


def _dual(g: GroupExpr) -> GroupExpr:
    if isinstance(g, Real):
        return Real()
    if isinstance(g, Circle):
        return Integers()
    if isinstance(g, Integers):
        return Circle()
    if isinstance(g, Rationals):
        return Solenoid(Heights.of({}, INF))
    if isinstance(g, Trivial):
        return Trivial()
    if isinstance(g, Cyclic):
        return Cyclic(g.modulus)
    if isinstance(g, Prufer):
        return PadicInt(g.prime)
    if isinstance(g, PadicInt):
        return Prufer(g.prime)
    if isinstance(g, PadicRat):
        return PadicRat(g.prime)
    if isinstance(g, QSubgroup):
        return Solenoid(g.heights)
    if isinstance(g, Solenoid):
        return QSubgroup(g.heights)
    if isinstance(g, Product):
        return Product(tuple(_dual(f) for f in g.factors))
    if isinstance(g, LocalProduct):
        return LocalProduct(tuple((p, _dual(c)) for p, c in g.entries))
    if isinstance(g, (BohrZ, BohrR, BohrZComponent, ProfiniteZ)):
        raise DualUnrepresentable(
            f"the character group of {render(g)} is not expressible in the grammar"
        )
    raise TypeError(f"not a group expression: {g!r}")


def dual_defined(g: GroupExpr) -> bool:
    """True when dual(g) would not raise."""
    if isinstance(g, Product):
        return all(dual_defined(f) for f in g.factors)
    if isinstance(g, LocalProduct):
        return all(dual_defined(c) for _, c in g.entries)
    return not isinstance(g, (BohrZ, BohrR, BohrZComponent, ProfiniteZ))
