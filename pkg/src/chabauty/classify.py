"""Deciders for approximability by integer and by real subgroups.

A group expression is integrally approximable exactly when it is discrete and
a nonsingleton subgroup of Q, or of the form R x H with H the union of its
compact subgroups and H modulo its identity component inductively monothetic
(necessarily of the periodic local-product kind).  It is numerally
approximable exactly when it is R x C for a compact connected C.  Verdicts
carry a trace of the clauses fired; witness recipes mirror the reduction
chain down to concrete generator sequences.
"""

from __future__ import annotations

from math import factorial

from .grammar import (
    INF,
    BohrR,
    BohrZ,
    Circle,
    Cyclic,
    GroupExpr,
    Integers,
    LocalProduct,
    PadicInt,
    PadicRat,
    Product,
    Prufer,
    QSubgroup,
    Rationals,
    Real,
    Trivial,
    normalize,
    product_factors,
    render,
)
from .primes import first_primes
from .structure import (
    CLAUSE_LOCAL_PRODUCT,
    CLAUSE_TRIVIAL,
    comp_part,
    flags,
    is_inductively_monothetic,
    vector_split,
)
from .verdict import (
    CertificatePlan,
    DirectedUnionOfCyclics,
    KeyLemmaReference,
    ReductionNode,
    RnRecipe,
    TraceStep,
    Verdict,
    ZnRecipe,
)


class InternalInconsistency(RuntimeError):
    """Two independent decision paths disagreed; signals a decider bug."""


class NotApproximable(ValueError):
    """Witness recipes exist only for approximable groups."""


def _step(step: str, cite: str, detail: str) -> TraceStep:
    return TraceStep(step, cite, detail)


def classify_integral(g: GroupExpr) -> Verdict:
    """Is g a limit of its subgroups isomorphic to discrete Z?"""
    g = normalize(g)
    fl = flags(g)
    trace: list[TraceStep] = []
    if fl.discrete:
        trace.append(_step("discreteness", "discrete-classification", f"{render(g)} is discrete"))
        if isinstance(g, Trivial):
            trace.append(_step(
                "conclusion", "approximable-not-singleton", "the singleton group is not approximable"
            ))
            return Verdict(False, tuple(trace))
        if isinstance(g, (Integers, Rationals, QSubgroup)):
            trace.append(_step(
                "conclusion", "discrete-classification",
                f"{render(g)} is a nonsingleton subgroup of Q",
            ))
            return Verdict(True, tuple(trace))
        factors = product_factors(g)
        if any(isinstance(f, Integers) for f in factors) and len(factors) > 1:
            trace.append(_step(
                "conclusion", "integer-factor-obstruction",
                f"{render(g)} splits as A x Z with A nonsingleton",
            ))
            return Verdict(False, tuple(trace))
        trace.append(_step(
            "conclusion", "discrete-classification",
            f"{render(g)} is not isomorphic to a subgroup of Q",
        ))
        return Verdict(False, tuple(trace))

    n, h = vector_split(g)
    trace.append(_step("vector-split", "vector-splitting", f"{render(g)} = R^{n} x {render(h)}"))
    if n == 0:
        trace.append(_step(
            "conclusion", "compact-identity-discreteness",
            "identity component is compact but the group is not discrete",
        ))
        return Verdict(False, tuple(trace))
    if n >= 2:
        trace.append(_step("conclusion", "vector-rank-obstruction", f"vectorRank={n}"))
        return Verdict(False, tuple(trace))
    comp = comp_part(h)
    if comp != h:
        trace.append(_step(
            "conclusion", "nondiscrete-necessity",
            f"comp({render(h)}) = {render(comp)} is a proper subgroup",
        ))
        return Verdict(False, tuple(trace))
    quotient = flags(h).quotient_mod_g0
    trace.append(_step(
        "quotient-mod-identity", "quotient-component-monothetic",
        f"G/G0 = {render(quotient)}",
    ))
    imv = is_inductively_monothetic(quotient)
    trace.extend(imv.trace)
    if imv.answer and imv.clause in (CLAUSE_TRIVIAL, CLAUSE_LOCAL_PRODUCT):
        trace.append(_step(
            "conclusion", "integral-classification",
            "R x comp(G) with periodic inductively monothetic component quotient",
        ))
        return Verdict(True, tuple(trace))
    if _is_elementary_square(quotient):
        trace.append(_step(
            "conclusion", "elementary-square-obstruction",
            f"G/G0 = {render(quotient)} maps onto Z(p) x Z(p)",
        ))
        return Verdict(False, tuple(trace))
    trace.append(_step(
        "conclusion", "integral-classification",
        "component quotient is not periodic inductively monothetic",
    ))
    return Verdict(False, tuple(trace))


def _is_elementary_square(q: GroupExpr) -> bool:
    """Does q have two p-primary factors at a common prime (for some p)?"""
    primes: dict[int, int] = {}
    for f in product_factors(q):
        if isinstance(f, Cyclic):
            p = min(p for p in range(2, f.modulus + 1) if f.modulus % p == 0)
        elif isinstance(f, (Prufer, PadicInt, PadicRat)):
            p = f.prime
        else:
            continue
        primes[p] = primes.get(p, 0) + 1
    return any(k >= 2 for k in primes.values())


def classify_numeral(g: GroupExpr) -> Verdict:
    """Is g a limit of its subgroups isomorphic to R?"""
    g = normalize(g)
    n, c = vector_split(g)
    trace = [_step("vector-split", "vector-splitting", f"{render(g)} = R^{n} x {render(c)}")]
    if n != 1:
        trace.append(_step("conclusion", "numeral-necessity", f"vectorRank={n}, need exactly 1"))
        return Verdict(False, tuple(trace))
    fc = flags(c)
    if not fc.compact:
        trace.append(_step(
            "conclusion", "numeral-necessity", f"comp factor {render(c)} is not compact"
        ))
        return Verdict(False, tuple(trace))
    if not fc.connected:
        trace.append(_step(
            "conclusion", "numeral-necessity", f"comp factor {render(c)} is not connected"
        ))
        return Verdict(False, tuple(trace))
    trace.append(_step(
        "conclusion", "numeral-sufficiency",
        f"{render(g)} = R x C with C = {render(c)} compact connected",
    ))
    return Verdict(True, tuple(trace))


def classify_compact_free(g: GroupExpr) -> Verdict:
    """Is g compact-free and integrally approximable?

    Decided twice: by combining the flags with the integral decider, and by
    the closed-form answer (R, or a nonsingleton subgroup of discrete Q).
    Disagreement raises InternalInconsistency.
    """
    g = normalize(g)
    integral = classify_integral(g)
    by_deciders = flags(g).compact_free and integral.answer
    by_form = isinstance(g, (Real, Integers, Rationals, QSubgroup))
    if by_deciders != by_form:
        raise InternalInconsistency(
            f"compact-free paths disagree on {render(g)}: "
            f"deciders={by_deciders}, closed form={by_form}"
        )
    trace = list(integral.trace)
    trace.append(_step(
        "conclusion", "compact-free-characterization",
        f"{render(g)} {'is' if by_form else 'is not'} R or a nonsingleton subgroup of Q; "
        "both decision paths agree",
    ))
    return Verdict(by_deciders, tuple(trace))


# --- witness recipes ---------------------------------------------------------

_SCHEDULE_LENGTH = 8


def _qsub_denominators(heights) -> tuple[str, tuple[int, ...]]:
    rule = "product of p^min(n, height(p)) over the first n primes"
    out = []
    for n in range(1, _SCHEDULE_LENGTH + 1):
        d = 1
        for p in first_primes(n):
            h = heights.height(p)
            e = n if h == INF else min(n, int(h))
            d *= p**e
        out.append(d)
    return rule, tuple(out)


def _finite_cyclic_order(factors: tuple[GroupExpr, ...]) -> int | None:
    """Order of a product of cyclic factors if it is cyclic, else None."""
    order = 1
    primes = set()
    for f in factors:
        if not isinstance(f, Cyclic):
            return None
        p = min(p for p in range(2, f.modulus + 1) if f.modulus % p == 0)
        if p in primes:
            return None
        primes.add(p)
        order *= f.modulus
    return order


def witness_recipe(g: GroupExpr) -> CertificatePlan:
    """Certificate plan for an approximable g; raises NotApproximable else."""
    g = normalize(g)
    if not (classify_integral(g).answer or classify_numeral(g).answer):
        raise NotApproximable(f"{render(g)} is not approximable")
    return _plan(g)


def _plan(g: GroupExpr) -> CertificatePlan:
    if flags(g).discrete:
        if isinstance(g, Rationals):
            denoms = tuple(factorial(n) for n in range(1, _SCHEDULE_LENGTH + 1))
            return DirectedUnionOfCyclics("n!", denoms)
        if isinstance(g, Integers):
            return DirectedUnionOfCyclics("1 (constant chain Z)", (1,) * _SCHEDULE_LENGTH)
        assert isinstance(g, QSubgroup)
        rule, denoms = _qsub_denominators(g.heights)
        return DirectedUnionOfCyclics(rule, denoms)

    n, h = vector_split(g)
    assert n == 1
    factors = product_factors(h)
    if isinstance(h, Trivial):
        return ZnRecipe(1)
    cyclic_order = _finite_cyclic_order(factors)
    if cyclic_order is not None:
        return ZnRecipe(cyclic_order)
    if all(isinstance(f, Circle) for f in factors):
        return RnRecipe(len(factors))
    if isinstance(h, BohrZ):
        return ReductionNode(
            "PL",
            "R x BohrZ is the strict projective limit of the quotients R x Z(m)",
            (ZnRecipe(2), ZnRecipe(3), ZnRecipe(4), ZnRecipe(6),
             KeyLemmaReference("integral-key-sequence")),
        )
    if isinstance(h, BohrR):
        return ReductionNode(
            "PL",
            "R x BohrR is the strict projective limit of the toral quotients R x T^t",
            (RnRecipe(1), KeyLemmaReference("numeral-key-sequence")),
        )
    fh = flags(h)
    if fh.compact and fh.connected:
        return ReductionNode(
            "QG",
            f"{render(h)} is a quotient of the universal compact connected "
            "monothetic group modulo a compact subgroup",
            (_plan(normalize(Product((Real(), BohrR())))),),
        )
    if fh.compact:
        return ReductionNode(
            "QG",
            f"{render(h)} is monothetic, hence a quotient of the universal "
            "compact monothetic group modulo a compact subgroup",
            (_plan(normalize(Product((Real(), BohrZ())))),),
        )
    truncated = normalize(Product(tuple(_compact_truncation(f) for f in factors)))
    return ReductionNode(
        "DU",
        f"{render(h)} is the directed union of compact subgroups; "
        f"representative member {render(truncated)}",
        (_plan(normalize(Product((Real(), truncated)))),),
    )


def _compact_truncation(f: GroupExpr) -> GroupExpr:
    """A canonical compact subgroup from the exhausting directed family."""
    if isinstance(f, PadicRat):
        return PadicInt(f.prime)
    if isinstance(f, Prufer):
        return Cyclic(f.prime)
    if isinstance(f, LocalProduct):
        return normalize(Product(tuple(_compact_truncation(c) for _, c in f.entries)))
    return f
