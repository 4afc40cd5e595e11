"""Exact integer and rational linear algebra for the concrete engine.

Everything here is Fraction/int arithmetic: Hermite and Smith normal forms,
reduced row echelon form, lattice point enumeration in boxes, Euclidean
projection, and exact Chebyshev (sup-norm) minimization over affine families
by vertex enumeration.  Squared distances are carried in ExactDistance so
max-metric values mixing Euclidean blocks with per-coordinate distances stay
representable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator, Sequence

Vec = tuple[Fraction, ...]


@dataclass(frozen=True)
class ExactDistance:
    """A nonnegative distance stored as its exact square."""

    sq: Fraction

    def __post_init__(self):
        if self.sq < 0:
            raise ValueError("squared distance must be nonnegative")

    @classmethod
    def from_value(cls, v) -> "ExactDistance":
        v = Fraction(v)
        return cls(v * v)

    @staticmethod
    def _other_sq(other) -> Fraction:
        if isinstance(other, ExactDistance):
            return other.sq
        v = Fraction(other)
        if v < 0:
            return Fraction(-1)  # any distance exceeds a negative number
        return v * v

    def __le__(self, other) -> bool:
        return self.sq <= self._other_sq(other)

    def __lt__(self, other) -> bool:
        return self.sq < self._other_sq(other)

    def __ge__(self, other) -> bool:
        return self.sq >= self._other_sq(other)

    def __gt__(self, other) -> bool:
        return self.sq > self._other_sq(other)

    def exact_root(self) -> Fraction | None:
        """The distance as a Fraction when the square is a perfect square."""
        n, d = self.sq.numerator, self.sq.denominator
        rn, rd = math.isqrt(n), math.isqrt(d)
        if rn * rn == n and rd * rd == d:
            return Fraction(rn, rd)
        return None

    def to_float(self) -> float:
        return math.sqrt(self.sq)

    def __str__(self) -> str:
        r = self.exact_root()
        return str(r) if r is not None else f"sqrt({self.sq})"


def frac_sqrt_upper(q: Fraction) -> Fraction:
    """A rational upper bound for sqrt(q), exact on perfect squares."""
    if q < 0:
        raise ValueError("negative radicand")
    n, d = q.numerator, q.denominator
    r = math.isqrt(n * d)
    if r * r == n * d:
        return Fraction(r, d)
    return Fraction(r + 1, d)


# --- rational Gaussian elimination -------------------------------------------


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple[list[Vec], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [a / pv for a in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def solve_linear(mat: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of mat @ x = rhs, or None when inconsistent/singular."""
    n = len(mat)
    if n == 0:
        return []
    cols = len(mat[0])
    aug = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(mat, rhs)]
    reduced, pivots = rref(aug, cols + 1)
    if cols in pivots:
        return None  # inconsistent row 0 ... 0 | 1
    x = [Fraction(0)] * cols
    for row, c in zip(reduced, pivots):
        x[c] = row[cols]
    # verify (rectangular systems may be singular in the free directions)
    for row, v in zip(mat, rhs):
        if sum(a * b for a, b in zip(row, x)) != v:
            return None
    return x


def kernel_basis(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[Vec]:
    """Basis of the rational kernel of the row matrix."""
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for row, pc in zip(reduced, pivots):
            v[pc] = -row[fc]
        basis.append(tuple(v))
    return basis


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


# --- integer normal forms -----------------------------------------------------


def hnf(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Row-style Hermite normal form of the integer row space.

    Canonical: rows with strictly increasing pivot columns, positive pivots,
    and the entries above each pivot reduced into [0, pivot).
    """
    m = [list(r) for r in rows if any(r)]
    if not m:
        return []
    nc = len(m[0])
    r = 0
    for c in range(nc):
        while True:
            nz = [i for i in range(r, len(m)) if m[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(m[i][c]))
            m[r], m[i0] = m[i0], m[r]
            clean = True
            for i in range(r + 1, len(m)):
                if m[i][c] != 0:
                    q = m[i][c] // m[r][c]
                    m[i] = [a - q * b for a, b in zip(m[i], m[r])]
                    if m[i][c] != 0:
                        clean = False
            if clean:
                break
        if any(m[i][c] != 0 for i in range(r, len(m))):
            if m[r][c] < 0:
                m[r] = [-a for a in m[r]]
            r += 1
            if r == len(m):
                break
    m = [row for row in m[:r]]
    pivots = [next(j for j, a in enumerate(row) if a) for row in m]
    for i, pc in enumerate(pivots):
        p = m[i][pc]
        for k in range(i):
            q = m[k][pc] // p
            if q:
                m[k] = [a - q * b for a, b in zip(m[k], m[i])]
    return [tuple(row) for row in m]


def _identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def snf(mat: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form with transforms: returns (d, u, v), u @ mat @ v = d,
    u and v unimodular, d diagonal with d[i] | d[i+1]."""
    a = [list(r) for r in mat]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = _identity(nr)
    v = _identity(nc)
    t = 0
    while t < min(nr, nc):
        # move a minimal nonzero entry of the trailing block to (t, t)
        entries = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        u[t], u[pi] = u[pi], u[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        for row in v:
            row[t], row[pj] = row[pj], row[t]
        dirty = False
        for i in range(t + 1, nr):
            if a[i][t]:
                q = a[i][t] // a[t][t]
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t]:
                    dirty = True
        for j in range(t + 1, nc):
            if a[t][j]:
                q = a[t][j] // a[t][t]
                for row in a:
                    row[j] -= q * row[t]
                for row in v:
                    row[j] -= q * row[t]
                if a[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the trailing block by a[t][t]
        culprit = None
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t]:
                    culprit = i
                    break
            if culprit is not None:
                break
        if culprit is not None:
            a[t] = [x + y for x, y in zip(a[t], a[culprit])]
            u[t] = [x + y for x, y in zip(u[t], u[culprit])]
            continue
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def det_int(mat: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(mat)
    if n == 0:
        return 1
    m = [list(r) for r in mat]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


# --- lattice point enumeration -------------------------------------------------


def scale_to_integer(rows: Iterable[Sequence[Fraction]]) -> tuple[list[list[int]], int]:
    """(integer rows, q) with rows == integer rows / q."""
    rows = [list(map(Fraction, r)) for r in rows]
    q = 1
    for r in rows:
        for a in r:
            q = q * a.denominator // math.gcd(q, a.denominator)
    return [[int(a * q) for a in r] for r in rows], q


def hnf_rational(rows: Iterable[Sequence[Fraction]], ncols: int) -> list[Vec]:
    """Canonical basis of the group generated by rational rows (HNF / common
    denominator)."""
    rows = [list(map(Fraction, r)) for r in rows]
    if not rows:
        return []
    assert all(len(r) == ncols for r in rows)
    scaled, q = scale_to_integer(rows)
    return [tuple(Fraction(a, q) for a in row) for row in hnf(scaled)]


def lattice_points_in_box(
    basis: Sequence[Vec], bounds: Sequence[tuple[Fraction, Fraction] | None]
) -> Iterator[Vec]:
    """All integer combinations of echelon basis rows inside the closed box
    (a None bound leaves that coordinate unconstrained).

    The basis must be in echelon form (strictly increasing pivot columns with
    positive pivots), as produced by hnf_rational; pivot coordinates must be
    bounded since they determine the coefficient ranges, making the
    enumeration finite and complete.
    """
    def inside(c: int, val: Fraction) -> bool:
        box = bounds[c]
        return box is None or box[0] <= val <= box[1]

    if not basis:
        point = tuple(Fraction(0) for _ in bounds)
        if all(inside(c, x) for c, x in enumerate(point)):
            yield point
        return
    ncols = len(basis[0])
    pivots = [next(j for j, a in enumerate(row) if a) for row in basis]
    for pc in pivots:
        if bounds[pc] is None:
            raise ValueError("pivot coordinate of the lattice basis is unbounded")
    acc = [Fraction(0)] * ncols

    def rec(i: int) -> Iterator[Vec]:
        if i == len(basis):
            if all(inside(c, acc[c]) for c in range(ncols)):
                yield tuple(acc)
            return
        pc = pivots[i]
        pv = basis[i][pc]
        lo = math.ceil((bounds[pc][0] - acc[pc]) / pv)
        hi = math.floor((bounds[pc][1] - acc[pc]) / pv)
        for coeff in range(lo, hi + 1):
            if coeff:
                for c in range(ncols):
                    acc[c] += coeff * basis[i][c]
            yield from rec(i + 1)
            if coeff:
                for c in range(ncols):
                    acc[c] -= coeff * basis[i][c]

    yield from rec(0)


# --- exact minimization --------------------------------------------------------


def projection_distance_sq(w: Sequence[Fraction], basis: Sequence[Vec]) -> Fraction:
    """Squared Euclidean distance from w to the span of the basis rows."""
    w = list(map(Fraction, w))
    wsq = dot(w, w)
    rows, _ = rref(basis, len(w))
    if not rows:
        return wsq
    gram = [[dot(a, b) for b in rows] for a in rows]
    rhs = [dot(a, w) for a in rows]
    coef = solve_linear(gram, rhs)
    assert coef is not None  # rref rows are independent
    return wsq - dot(coef, rhs)


def linf_minimize(
    mat: Sequence[Sequence[Fraction]], target: Sequence[Fraction]
) -> tuple[Fraction, list[Fraction]]:
    """Exact min over c of max_k |(mat @ c - target)_k|, with a minimizer.

    Solved as the linear program min t subject to |mat@c - target| <= t by
    enumerating candidate vertices (subsets of active constraints); exact
    rational arithmetic throughout.
    """
    nrows = len(mat)
    if nrows == 0:
        return Fraction(0), []
    ncols = len(mat[0])
    target = list(map(Fraction, target))
    if ncols == 0 or all(all(a == 0 for a in row) for row in mat):
        return max((abs(b) for b in target), default=Fraction(0)), [Fraction(0)] * ncols
    # restrict to an independent set of columns (kernel directions are free)
    col_rows = [[mat[k][j] for k in range(nrows)] for j in range(ncols)]
    indep_cols: list[int] = []
    seen_rows: list[list[Fraction]] = []
    for j in range(ncols):
        trial = seen_rows + [list(map(Fraction, col_rows[j]))]
        rr, _ = rref(trial, nrows)
        if len(rr) == len(trial):
            indep_cols.append(j)
            seen_rows = trial
    s = len(indep_cols)
    if s == 1:
        return _linf_minimize_1d(
            [mat[k][indep_cols[0]] for k in range(nrows)], target, ncols, indep_cols[0]
        )
    signed: list[tuple[list[Fraction], Fraction]] = []
    for k in range(nrows):
        for sg in (1, -1):
            signed.append(([sg * mat[k][j] for j in indep_cols], sg * target[k]))
    best: tuple[Fraction, list[Fraction]] | None = None
    for subset in combinations(range(len(signed)), s + 1):
        rows = [signed[i][0] + [Fraction(-1)] for i in subset]
        rhs = [signed[i][1] for i in subset]
        sol = solve_linear(rows, rhs)
        if sol is None:
            continue
        c, t = sol[:s], sol[s]
        if t < 0:
            continue
        residuals = [
            abs(sum(mat[k][j] * c[i] for i, j in enumerate(indep_cols)) - target[k])
            for k in range(nrows)
        ]
        if max(residuals) > t:
            continue
        if best is None or t < best[0]:
            full = [Fraction(0)] * ncols
            for i, j in enumerate(indep_cols):
                full[j] = c[i]
            best = (t, full)
    assert best is not None, "sup-norm LP has a vertex optimum"
    return best


def _linf_minimize_1d(
    slopes: list[Fraction], target: list[Fraction], ncols: int, col: int
) -> tuple[Fraction, list[Fraction]]:
    """min_c max_k |slopes[k] c - target[k]|: the optimum of a convex
    piecewise-linear function, attained at a zero or a pairwise crossing."""
    candidates: set[Fraction] = set()
    n = len(slopes)
    for k in range(n):
        if slopes[k]:
            candidates.add(target[k] / slopes[k])
        for j in range(k + 1, n):
            if slopes[k] != slopes[j]:
                candidates.add((target[k] - target[j]) / (slopes[k] - slopes[j]))
            if slopes[k] != -slopes[j]:
                candidates.add((target[k] + target[j]) / (slopes[k] + slopes[j]))
    if not candidates:
        candidates.add(Fraction(0))
    best_c = None
    best_t = None
    for c in candidates:
        t = max(abs(a * c - b) for a, b in zip(slopes, target))
        if best_t is None or t < best_t:
            best_t, best_c = t, c
    full = [Fraction(0)] * ncols
    full[col] = best_c
    return best_t, full
