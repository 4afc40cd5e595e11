"""Symbolic language of locally compact abelian groups.

The expression grammar covers the vector line R, the circle T, the discrete
groups Z, Q and the subgroups of Q given by a height function, finite cyclic
groups, Prufer groups, p-adic integers and rationals, solenoids, the two Bohr
compactifications as opaque atoms, finite products, and local (restricted)
products indexed by primes.

Published EBNF (also shown by ``chabauty --help``)::

    expr     := term ( "x" term )* ;
    term     := atom ( "^" nat )? ;
    atom     := "R" | "T" | "Z" | "Q" | "Z(" nat ")" | "Prufer(" prime ")"
              | "Zp(" prime ")" | "Qp(" prime ")" | "QSub{" heights "}"
              | "Sol{" heights "}" | "BohrZ" | "BohrR" | "LP[" lpentries "]" ;
    heights  := (prime ":" (nat|"inf")) ("," prime ":" (nat|"inf"))*
                ("; default" ("0"|"inf"))?
              | "default" ("0"|"inf") ;
    lpentries := (prime ":" atom) ("," prime ":" atom)* .

Extensions beyond the published grammar, produced by structure computations
and accepted back by the parser so every value renders round-trip: "0" for
the trivial group, "Zhat" for the full product of all p-adic integer groups,
and "Bohr0" for the identity component of BohrZ.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .primes import factorize, is_prime, prime_power

INF = math.inf

Height = int | float  # a nonnegative int, or INF


class ParseError(ValueError):
    """Malformed expression text; carries the byte offset of the defect."""

    def __init__(self, message: str, offset: int | None = None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class PrimeError(ParseError):
    """A composite number occupies a slot that requires a prime."""


class GroupExpr:
    """Base class for all group expressions. Values are immutable."""

    __slots__ = ()


@dataclass(frozen=True)
class Real(GroupExpr):
    pass


@dataclass(frozen=True)
class Circle(GroupExpr):
    pass


@dataclass(frozen=True)
class Integers(GroupExpr):
    pass


@dataclass(frozen=True)
class Rationals(GroupExpr):
    pass


@dataclass(frozen=True)
class Trivial(GroupExpr):
    pass


@dataclass(frozen=True)
class Cyclic(GroupExpr):
    modulus: int

    def __post_init__(self):
        if self.modulus < 2:
            raise ValueError(f"cyclic modulus must be >= 2, got {self.modulus}")


@dataclass(frozen=True)
class Prufer(GroupExpr):
    prime: int

    def __post_init__(self):
        _require_prime(self.prime)


@dataclass(frozen=True)
class PadicInt(GroupExpr):
    prime: int

    def __post_init__(self):
        _require_prime(self.prime)


@dataclass(frozen=True)
class PadicRat(GroupExpr):
    prime: int

    def __post_init__(self):
        _require_prime(self.prime)


@dataclass(frozen=True)
class Heights:
    """Height function on primes: finitely many explicit values plus a default.

    Minimal form: explicit entries are sorted by prime and never equal the
    default, so equal functions have equal encodings.
    """

    entries: tuple[tuple[int, Height], ...]
    default: Height

    def __post_init__(self):
        if self.default not in (0, INF):
            raise ValueError("default height must be 0 or inf")
        seen = set()
        for p, h in self.entries:
            _require_prime(p)
            if p in seen:
                raise ValueError(f"duplicate prime {p} in height function")
            seen.add(p)
            if h == self.default:
                raise ValueError(f"explicit height at {p} equals the default")
            if h != INF and (not isinstance(h, int) or h < 0):
                raise ValueError(f"height must be a nonnegative integer or inf, got {h!r}")
        if list(self.entries) != sorted(self.entries, key=lambda e: e[0]):
            raise ValueError("height entries must be sorted by prime")

    @classmethod
    def of(cls, explicit: dict[int, Height] | None = None, default: Height = 0) -> "Heights":
        explicit = explicit or {}
        entries = tuple(sorted((p, h) for p, h in explicit.items() if h != default))
        return cls(entries, default)

    def height(self, p: int) -> Height:
        for q, h in self.entries:
            if q == p:
                return h
        return self.default


@dataclass(frozen=True)
class QSubgroup(GroupExpr):
    """Discrete subgroup of Q containing Z, with p-height heights.height(p)."""

    heights: Heights


@dataclass(frozen=True)
class Solenoid(GroupExpr):
    """Compact connected character group of the matching QSubgroup."""

    heights: Heights


@dataclass(frozen=True)
class BohrZ(GroupExpr):
    pass


@dataclass(frozen=True)
class BohrR(GroupExpr):
    pass


@dataclass(frozen=True)
class BohrZComponent(GroupExpr):
    """Identity component of BohrZ; opaque, never recursed into."""


@dataclass(frozen=True)
class ProfiniteZ(GroupExpr):
    """Product of the p-adic integers over all primes (lazy local product)."""


LOCAL_COMPONENT_TYPES = (Cyclic, Prufer, PadicInt, PadicRat)


@dataclass(frozen=True)
class Product(GroupExpr):
    factors: tuple[GroupExpr, ...]

    def __post_init__(self):
        if not self.factors:
            raise ValueError("product needs at least one factor")


@dataclass(frozen=True)
class LocalProduct(GroupExpr):
    """Restricted product over primes; each entry is p-primary for its key."""

    entries: tuple[tuple[int, GroupExpr], ...]

    def __post_init__(self):
        seen = set()
        for p, comp in self.entries:
            _require_prime(p)
            if p in seen:
                raise ValueError(f"duplicate prime {p} in local product")
            seen.add(p)
            _require_local_component(p, comp)


def _require_prime(p: int) -> None:
    if not is_prime(p):
        raise PrimeError(f"{p} is not prime")


def _require_local_component(p: int, comp: GroupExpr) -> None:
    if not isinstance(comp, LOCAL_COMPONENT_TYPES):
        raise ValueError(f"local product component {render(comp)} is not a p-primary atom")
    if isinstance(comp, Cyclic):
        pk = prime_power(comp.modulus)
        if pk is None or pk[0] != p:
            raise ValueError(
                f"local product entry at prime {p} holds Z({comp.modulus}), "
                f"which is not a power of {p}"
            )
    elif comp.prime != p:
        raise ValueError(
            f"local product entry at prime {p} holds a {comp.prime}-primary component"
        )


# --- parsing ---------------------------------------------------------------

# longest keyword first so "RxZp(2)" lexes as R, x, Zp and "Zhat" beats "Z"
_TOKEN_RE = re.compile(
    r"\s*(Prufer|BohrZ|BohrR|Bohr0|default|QSub|Zhat|inf|Sol|LP|Zp|Qp"
    r"|R|T|Z|Q|x|[0-9]+|[(){}\[\]:,;^])"
)


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            if text[pos:].strip() == "":
                break
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad)
        tokens.append((m.group(1), m.start(1)))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def offset(self) -> int:
        if self.i < len(self.tokens):
            return self.tokens[self.i][1]
        return len(self.text)

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.offset())
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.peek()
        if got != tok:
            raise ParseError(f"expected {tok!r}, found {got!r}", self.offset())
        self.i += 1

    def nat(self) -> int:
        off = self.offset()
        tok = self.take()
        if not tok.isdigit():
            raise ParseError(f"expected a number, found {tok!r}", off)
        return int(tok)

    def prime(self) -> int:
        off = self.offset()
        n = self.nat()
        if not is_prime(n):
            raise PrimeError(f"{n} is not prime", off)
        return n

    def expr(self) -> GroupExpr:
        factors = [self.term()]
        while self.peek() == "x":
            self.take()
            factors.append(self.term())
        flat: list[GroupExpr] = []
        for f in factors:
            if isinstance(f, Product):
                flat.extend(f.factors)
            else:
                flat.append(f)
        if len(flat) == 1:
            return flat[0]
        return Product(tuple(flat))

    def term(self) -> GroupExpr:
        a = self.atom()
        if self.peek() == "^":
            self.take()
            n = self.nat()
            if n == 0:
                return Trivial()
            if n == 1:
                return a
            return Product((a,) * n)
        return a

    def atom(self) -> GroupExpr:
        off = self.offset()
        tok = self.take()
        if tok == "R":
            return Real()
        if tok == "T":
            return Circle()
        if tok == "Z":
            if self.peek() == "(":
                self.take()
                n_off = self.offset()
                n = self.nat()
                self.expect(")")
                if n < 2:
                    raise ParseError(f"cyclic modulus must be >= 2, got {n}", n_off)
                return Cyclic(n)
            return Integers()
        if tok == "Q":
            return Rationals()
        if tok == "Prufer":
            self.expect("(")
            p = self.prime()
            self.expect(")")
            return Prufer(p)
        if tok == "Zp":
            self.expect("(")
            p = self.prime()
            self.expect(")")
            return PadicInt(p)
        if tok == "Qp":
            self.expect("(")
            p = self.prime()
            self.expect(")")
            return PadicRat(p)
        if tok == "QSub":
            return QSubgroup(self._heights())
        if tok == "Sol":
            return Solenoid(self._heights())
        if tok == "BohrZ":
            return BohrZ()
        if tok == "BohrR":
            return BohrR()
        if tok == "LP":
            return self._local_product()
        if tok == "0":
            return Trivial()
        if tok == "Zhat":
            return ProfiniteZ()
        if tok == "Bohr0":
            return BohrZComponent()
        raise ParseError(f"unknown atom {tok!r}", off)

    def _height_value(self) -> Height:
        off = self.offset()
        tok = self.take()
        if tok == "inf":
            return INF
        if tok.isdigit():
            return int(tok)
        raise ParseError(f"expected a height (number or 'inf'), found {tok!r}", off)

    def _heights(self) -> Heights:
        self.expect("{")
        explicit: dict[int, Height] = {}
        default: Height = 0
        if self.peek() == "default":
            self.take()
            default = self._height_value()
        else:
            while True:
                off = self.offset()
                p = self.prime()
                if p in explicit:
                    raise ParseError(f"duplicate prime {p} in heights", off)
                self.expect(":")
                explicit[p] = self._height_value()
                if self.peek() == ",":
                    self.take()
                    continue
                break
            if self.peek() == ";":
                self.take()
                self.expect("default")
                default = self._height_value()
        self.expect("}")
        return Heights.of(explicit, default)

    def _local_product(self) -> GroupExpr:
        self.expect("[")
        entries: list[tuple[int, GroupExpr]] = []
        while True:
            off = self.offset()
            p = self.prime()
            self.expect(":")
            comp_off = self.offset()
            comp = self.atom()
            try:
                _require_local_component(p, comp)
            except ValueError as exc:
                raise ParseError(str(exc), comp_off) from None
            if any(q == p for q, _ in entries):
                raise ParseError(f"duplicate prime {p} in local product", off)
            entries.append((p, comp))
            if self.peek() == ",":
                self.take()
                continue
            break
        self.expect("]")
        return LocalProduct(tuple(entries))


def parse(text: str) -> GroupExpr:
    """Parse an expression; raises ParseError/PrimeError with a byte offset."""
    p = _Parser(text)
    if p.peek() is None:
        raise ParseError("empty expression", 0)
    e = p.expr()
    if p.peek() is not None:
        raise ParseError(f"trailing input {p.peek()!r}", p.offset())
    return e


# --- rendering ---------------------------------------------------------------


def _render_height(h: Height) -> str:
    return "inf" if h == INF else str(h)


def _render_heights(hs: Heights) -> str:
    if not hs.entries:
        return f"default {_render_height(hs.default)}"
    body = ", ".join(f"{p}:{_render_height(h)}" for p, h in hs.entries)
    if hs.default == INF:
        body += "; default inf"
    return body


def render(g: GroupExpr) -> str:
    """Canonical text for an expression; parse(render(g)) == g for normalized g."""
    if isinstance(g, Real):
        return "R"
    if isinstance(g, Circle):
        return "T"
    if isinstance(g, Integers):
        return "Z"
    if isinstance(g, Rationals):
        return "Q"
    if isinstance(g, Trivial):
        return "0"
    if isinstance(g, Cyclic):
        return f"Z({g.modulus})"
    if isinstance(g, Prufer):
        return f"Prufer({g.prime})"
    if isinstance(g, PadicInt):
        return f"Zp({g.prime})"
    if isinstance(g, PadicRat):
        return f"Qp({g.prime})"
    if isinstance(g, QSubgroup):
        return "QSub{" + _render_heights(g.heights) + "}"
    if isinstance(g, Solenoid):
        return "Sol{" + _render_heights(g.heights) + "}"
    if isinstance(g, BohrZ):
        return "BohrZ"
    if isinstance(g, BohrR):
        return "BohrR"
    if isinstance(g, BohrZComponent):
        return "Bohr0"
    if isinstance(g, ProfiniteZ):
        return "Zhat"
    if isinstance(g, Product):
        return " x ".join(render(f) for f in g.factors)
    if isinstance(g, LocalProduct):
        return "LP[" + ", ".join(f"{p}:{render(c)}" for p, c in g.entries) + "]"
    raise TypeError(f"not a group expression: {g!r}")


# --- normal form -------------------------------------------------------------

_ATOM_RANK = {
    Real: 0,
    Circle: 1,
    Integers: 2,
    Rationals: 3,
    QSubgroup: 4,
    Solenoid: 5,
    Cyclic: 6,
    Prufer: 7,
    PadicInt: 8,
    PadicRat: 9,
    BohrZ: 10,
    BohrR: 11,
    BohrZComponent: 12,
    ProfiniteZ: 13,
    LocalProduct: 14,
}


def _heights_key(hs: Heights) -> tuple:
    return (float(hs.default), tuple((p, float(h)) for p, h in hs.entries))


def _sort_key(g: GroupExpr) -> tuple:
    rank = _ATOM_RANK[type(g)]
    if isinstance(g, Cyclic):
        pk = prime_power(g.modulus)
        p, k = pk if pk is not None else (g.modulus, 1)
        return (rank, p, k)
    if isinstance(g, (Prufer, PadicInt, PadicRat)):
        return (rank, g.prime)
    if isinstance(g, (QSubgroup, Solenoid)):
        return (rank,) + _heights_key(g.heights)
    if isinstance(g, LocalProduct):
        return (rank, tuple((p, _sort_key(c)) for p, c in g.entries))
    return (rank,)


def _normalize_atom(g: GroupExpr) -> list[GroupExpr]:
    """Normal-form factors of a non-product expression."""
    if isinstance(g, Trivial):
        return []
    if isinstance(g, Cyclic):
        return [Cyclic(p**k) for p, k in sorted(factorize(g.modulus).items())]
    if isinstance(g, QSubgroup):
        if not g.heights.entries:
            return [Integers() if g.heights.default == 0 else Rationals()]
        return [g]
    if isinstance(g, Solenoid):
        if not g.heights.entries and g.heights.default == 0:
            return [Circle()]
        return [g]
    if isinstance(g, LocalProduct):
        if not g.entries:
            return []
        return [LocalProduct(tuple(sorted(g.entries)))]
    return [g]


def normalize(g: GroupExpr) -> GroupExpr:
    """Canonical form: flattened, CRT-split, sorted, minimal. Idempotent.

    Within this grammar two expressions denote isomorphic groups exactly when
    their normal forms are equal, except that a one-entry local product is
    kept distinct from the bare product of its components.
    """
    factors: list[GroupExpr] = []
    stack = [g]
    while stack:
        e = stack.pop()
        if isinstance(e, Product):
            stack.extend(e.factors)
        else:
            factors.extend(_normalize_atom(e))
    factors.sort(key=_sort_key)
    if not factors:
        return Trivial()
    if len(factors) == 1:
        return factors[0]
    return Product(tuple(factors))


def product_factors(g: GroupExpr) -> tuple[GroupExpr, ...]:
    """Factors of a normalized expression (a single factor for atoms)."""
    if isinstance(g, Product):
        return g.factors
    return (g,)
