"""Verdicts with machine-readable traces, and witness-plan trees.

Every trace step cites a key from CITATIONS, a fixed registry of the
mathematical facts the deciders rely on, each named by what it states.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

CITATIONS: dict[str, str] = {
    "chabauty-basic-neighborhood": (
        "closed subgroups H have neighborhood bases given by a compact set K and "
        "an identity neighborhood W via the two inclusions L&K within WH and H&K within WL"
    ),
    "whole-group-neighborhood": (
        "neighborhoods of the whole group reduce to the single inclusion K within WL"
    ),
    "trivial-subgroup-neighborhood": (
        "neighborhoods of the trivial subgroup reduce to the single inclusion L&K within W"
    ),
    "real-line-lattice-family": (
        "the map r -> (1/r)Z, 0 -> {0}, inf -> R is a homeomorphism onto the closed "
        "subgroup space of R; in particular R is a limit of integer lattices"
    ),
    "vector-rank-obstruction": (
        "R^n is approximable by integer-lattice subgroups only for n = 1: two unit "
        "vectors caught in small balls around e1, e2 are linearly independent"
    ),
    "rationals-chain": (
        "Q is the increasing union of the subgroups (1/n!)Z and hence their limit"
    ),
    "elementary-square-obstruction": (
        "R x Z(p)^n with n >= 2 is not approximable: a cyclic subgroup meets at most "
        "one line of the GF(p)-vector space Z(p)^n"
    ),
    "integer-factor-obstruction": (
        "if A x Z is approximable by integer subgroups then A is the trivial group"
    ),
    "closure-operations": (
        "approximability is preserved by open nonsingleton subgroups (OS), quotients "
        "modulo compact subgroups (QG), torsion-free quotients modulo open subgroups "
        "(QO), directed unions (DU), and strict projective limits of quotients (PL)"
    ),
    "compact-identity-discreteness": (
        "an integrally approximable group with compact identity component is discrete"
    ),
    "inductively-monothetic-classes": (
        "a group is inductively monothetic when it is a one-dimensional compact "
        "connected group, a discrete subgroup of Q, or a local product over primes of "
        "p-primary components Z(p^k), Prufer(p), Zp(p), or Qp(p)"
    ),
    "discrete-classification": (
        "a group with compact identity component is integrally approximable exactly "
        "when it is discrete and isomorphic to a nonsingleton subgroup of Q"
    ),
    "approximable-not-singleton": (
        "an approximable group has a subgroup isomorphic to Z or R, so it is not the "
        "singleton group"
    ),
    "abelian-closure": (
        "the closed abelian subgroups form a closed subspace, so every approximable "
        "group is abelian"
    ),
    "annihilator-homeomorphism": (
        "the annihilator map is a homeomorphism between the closed subgroup spaces of "
        "a group and of its character group"
    ),
    "vector-splitting": (
        "every locally compact abelian group splits as R^n plus a subgroup with a "
        "compact open subgroup"
    ),
    "nondiscrete-necessity": (
        "a nondiscrete integrally approximable group is isomorphic to R times the "
        "union of its compact subgroups"
    ),
    "quotient-component-monothetic": (
        "for a nondiscrete integrally approximable group, the quotient modulo the "
        "identity component is periodic inductively monothetic"
    ),
    "integral-sufficiency": (
        "R times H is integrally approximable whenever H is the union of its compact "
        "subgroups and H modulo its identity component is inductively monothetic"
    ),
    "compact-lie-reduction": (
        "a compact abelian Lie group with cyclic component group is a torus times a "
        "finite cyclic group, hence monothetic"
    ),
    "universal-monothetic-reduction": (
        "R x H for compact monothetic H is approximable exactly when R times the "
        "universal compact monothetic group is"
    ),
    "integral-key-sequence": (
        "the cyclic subgroups generated by (1/n, canonical generator) converge to the "
        "whole of R times the universal compact monothetic group"
    ),
    "trivial-limit-criterion": (
        "a sequence of closed subgroups converges to the trivial subgroup exactly when "
        "every convergent selection along a subnet has the identity as its limit"
    ),
    "annihilator-null-sequence": (
        "the annihilators of the key cyclic subgroups converge to the trivial subgroup"
    ),
    "integral-classification": (
        "a group is integrally approximable exactly when it is discrete and a "
        "nonsingleton subgroup of Q, or abelian of the form R times the union of its "
        "compact subgroups with periodic inductively monothetic component quotient"
    ),
    "compact-free-characterization": (
        "a group is compact-free and integrally approximable exactly when it is R or a "
        "nonsingleton subgroup of discrete Q"
    ),
    "numeral-necessity": (
        "a group approximable by real subgroups is connected and abelian, and splits "
        "as R times its compact connected comp part"
    ),
    "eventual-inclusion-limit": (
        "if two convergent nets of closed subgroups satisfy an eventual inclusion, the "
        "limits satisfy the same inclusion"
    ),
    "numeral-sufficiency": (
        "R times any compact connected abelian group is approximable by real subgroups"
    ),
    "universal-connected-reduction": (
        "every compact connected abelian group is a directed union of quotients of the "
        "universal compact connected monothetic group"
    ),
    "numeral-key-sequence": (
        "the graphs of the multiples of the canonical one-parameter subgroup converge "
        "to the whole of R times the universal compact connected monothetic group"
    ),
    "graph-annihilator-adjoint": (
        "the annihilator of the graph of a morphism is the graph of its adjoint"
    ),
    "numeral-implies-integral": (
        "every group approximable by real subgroups is approximable by integer "
        "subgroups"
    ),
    "iterated-limit-diagonal": (
        "an iterated limit of a doubly indexed net is the limit of a subnet; in metric "
        "spaces a diagonal subsequence with summable tolerances realizes it"
    ),
}


@dataclass(frozen=True)
class TraceStep:
    step: str
    cite: str
    detail: str

    def __post_init__(self):
        if self.cite not in CITATIONS:
            raise ValueError(f"unknown citation key {self.cite!r}")

    def to_json(self) -> dict:
        return {"step": self.step, "cite": self.cite, "detail": self.detail}


@dataclass(frozen=True)
class DirectedUnionOfCyclics:
    """Witness by the increasing chain (1/d_n)Z of cyclic subgroups."""

    rule: str
    denominators: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "kind": "DirectedUnionOfCyclics",
            "rule": self.rule,
            "denominators": list(self.denominators),
        }


@dataclass(frozen=True)
class ZnRecipe:
    """Witness sequence generated by (1/n, 1 mod m) in R x Z(m)."""

    modulus: int

    def to_json(self) -> dict:
        return {"kind": "ZnRecipe", "modulus": self.modulus}


@dataclass(frozen=True)
class RnRecipe:
    """Witness sequence of slope-n graph lines in R x T^t."""

    torus_rank: int

    def to_json(self) -> dict:
        return {"kind": "RnRecipe", "torusRank": self.torus_rank}


@dataclass(frozen=True)
class KeyLemmaReference:
    """Leaf deferring to one of the two key convergence sequences."""

    sequence: str  # a CITATIONS key

    def __post_init__(self):
        if self.sequence not in CITATIONS:
            raise ValueError(f"unknown citation key {self.sequence!r}")

    def to_json(self) -> dict:
        return {"kind": "KeyLemmaReference", "sequence": self.sequence}


REDUCTION_OPS = ("OS", "QG", "QO", "DU", "PL")


@dataclass(frozen=True)
class ReductionNode:
    op: str
    detail: str
    children: tuple["CertificatePlan", ...]

    def __post_init__(self):
        if self.op not in REDUCTION_OPS:
            raise ValueError(f"reduction tag must be one of {REDUCTION_OPS}, got {self.op!r}")
        if not self.children:
            raise ValueError("reduction node needs at least one child")

    def to_json(self) -> dict:
        return {
            "kind": "ReductionNode",
            "op": self.op,
            "detail": self.detail,
            "children": [c.to_json() for c in self.children],
        }


CertificatePlan = Union[
    DirectedUnionOfCyclics, ZnRecipe, RnRecipe, KeyLemmaReference, ReductionNode
]


def plan_leaves(plan: CertificatePlan) -> list[CertificatePlan]:
    if isinstance(plan, ReductionNode):
        out: list[CertificatePlan] = []
        for c in plan.children:
            out.extend(plan_leaves(c))
        return out
    return [plan]


def render_plan(plan: CertificatePlan, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(plan, ReductionNode):
        lines = [f"{pad}{plan.op}: {plan.detail}"]
        for c in plan.children:
            lines.append(render_plan(c, indent + 1))
        return "\n".join(lines)
    if isinstance(plan, DirectedUnionOfCyclics):
        shown = ", ".join(str(d) for d in plan.denominators[:6])
        return f"{pad}directed union of (1/d_n)Z, d_n = {plan.rule}: {shown}, ..."
    if isinstance(plan, ZnRecipe):
        return f"{pad}cyclic sequence generated by (1/n, 1 mod {plan.modulus}) in R x Z({plan.modulus})"
    if isinstance(plan, RnRecipe):
        return f"{pad}slope-n graph lines in R x T^{plan.torus_rank}"
    if isinstance(plan, KeyLemmaReference):
        return f"{pad}key sequence: {CITATIONS[plan.sequence]}"
    raise TypeError(f"not a plan node: {plan!r}")


@dataclass(frozen=True)
class Verdict:
    answer: bool
    trace: tuple[TraceStep, ...]
    witness_plan: CertificatePlan | None = None
    clause: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.trace:
            raise ValueError("verdict trace must be nonempty")

    def to_json(self) -> dict:
        out: dict = {
            "answer": self.answer,
            "trace": [s.to_json() for s in self.trace],
        }
        if self.witness_plan is not None:
            out["witnessPlan"] = self.witness_plan.to_json()
        if self.clause is not None:
            out["clause"] = self.clause
        return out
