"""Named subgroup sequences used by the convergence checks and the CLI."""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .groups import ConcreteGroup
from .subgroups import ClosedSubgroupRep, cyclic_subgroup, make_subgroup

SEQUENCE_NAMES = ("inv-lattice", "lattice", "alternating", "zn", "rn", "qsub-chain")


def _require(cond: bool, name: str, shape: str) -> None:
    if not cond:
        raise ValueError(f"sequence {name!r} needs a group of the form {shape}")


def builtin_sequence(name: str, group: ConcreteGroup):
    """n -> ClosedSubgroupRep for one of the named families (memoized)."""
    line = group == ConcreteGroup(reals=1)
    cache: dict[int, ClosedSubgroupRep] = {}

    if name == "inv-lattice":
        _require(line, name, "R")
        fn = lambda n: cyclic_subgroup(group, [Fraction(1, n)])
    elif name == "lattice":
        _require(line, name, "R")
        fn = lambda n: cyclic_subgroup(group, [n])
    elif name == "alternating":
        _require(line, name, "R")
        fn = lambda n: cyclic_subgroup(group, [n if n % 2 == 0 else Fraction(1, n)])
    elif name == "qsub-chain":
        _require(line, name, "R")
        fn = lambda n: cyclic_subgroup(group, [Fraction(1, factorial(n))])
    elif name == "zn":
        _require(
            group.reals == 1 and not group.tori and not group.frees and len(group.moduli) == 1,
            name, "R x Z(m)",
        )
        fn = lambda n: cyclic_subgroup(group, [Fraction(1, n), 1])
    elif name == "rn":
        _require(group == ConcreteGroup(reals=1, tori=1), name, "R x T")
        fn = lambda n: make_subgroup(group, continuous=[[Fraction(1), Fraction(n)]])
    else:
        raise ValueError(f"unknown sequence {name!r}; choose one of {SEQUENCE_NAMES}")

    def seq(n: int) -> ClosedSubgroupRep:
        if n < 1:
            raise ValueError("sequence index starts at 1")
        if n not in cache:
            cache[n] = fn(n)
        return cache[n]

    return seq
