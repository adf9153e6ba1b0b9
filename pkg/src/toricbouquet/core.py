"""Exact integer linear algebra: kernels, rank, minors and enumeration oracles."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, islice
from typing import Iterable, Sequence

Vector = tuple[int, ...]

DEFAULT_MINOR_CAP = 2_000_000
DEFAULT_SEARCH_CAP = 10**8


class ToricError(Exception):
    """Base class for every error raised by this package."""


class SizeLimitExceeded(ToricError):
    pass


class Inconclusive(ToricError):
    """A bounded search was truncated, so no definite answer is available."""


class Cancelled(ToricError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix stored as a tuple of row tuples."""

    data: tuple[Vector, ...]

    def __post_init__(self):
        if not self.data or not self.data[0]:
            raise ValueError("matrix must have at least one row and one column")
        width = len(self.data[0])
        for row in self.data:
            if len(row) != width:
                raise ValueError("ragged matrix rows")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(_as_int(x) for x in row) for row in rows))

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> "IntMatrix":
        return cls.from_rows(zip(*cols))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls.from_rows([int(i == j) for j in range(n)] for i in range(n))

    @property
    def rows(self) -> int:
        return len(self.data)

    @property
    def cols(self) -> int:
        return len(self.data[0])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def entries(self) -> tuple[int, ...]:
        return tuple(x for row in self.data for x in row)

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[Vector]:
        return [tuple(c) for c in zip(*self.data)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.data)))

    def select_columns(self, idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(tuple(tuple(row[j] for j in idx) for row in self.data))

    def apply(self, u: Sequence[int]) -> Vector:
        if len(u) != self.cols:
            raise ValueError(f"vector of length {len(u)} does not match {self.cols} columns")
        return tuple(sum(a * x for a, x in zip(row, u) if x) for row in self.data)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.data]

    def __iter__(self):
        return iter(self.data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]


def _as_int(x) -> int:
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    if hasattr(x, "__index__"):
        return x.__index__()
    raise TypeError(f"expected an integer entry, got {x!r}")


def as_matrix(A) -> IntMatrix:
    if isinstance(A, IntMatrix):
        return A
    return IntMatrix.from_rows(A)


# signed vectors

def positive_part(u: Sequence[int]) -> Vector:
    return tuple(x if x > 0 else 0 for x in u)


def negative_part(u: Sequence[int]) -> Vector:
    return tuple(-x if x < 0 else 0 for x in u)


def support(u: Sequence[int]) -> frozenset[int]:
    return frozenset(i for i, x in enumerate(u) if x)


def canonical(u: Sequence[int]) -> Vector:
    """Return u or -u, whichever has a positive first nonzero coordinate."""
    for x in u:
        if x:
            return tuple(u) if x > 0 else tuple(-y for y in u)
    return tuple(u)


def primitive(u: Sequence[int]) -> Vector:
    g = math.gcd(*u)
    return tuple(x // g for x in u) if g > 1 else tuple(u)


def conformally_below(v: Sequence[int], u: Sequence[int]) -> bool:
    """v ⊑ u: same sign pattern where v is nonzero and |v_i| <= |u_i|."""
    for a, b in zip(v, u):
        if a > 0:
            if b < a:
                return False
        elif a < 0:
            if b > a:
                return False
    return True


def is_conformal(v: Sequence[int], w: Sequence[int]) -> bool:
    return all(a * b >= 0 for a, b in zip(v, w))


def is_semiconformal(v: Sequence[int], w: Sequence[int]) -> bool:
    """v_i > 0 implies w_i >= 0, and w_i < 0 implies v_i <= 0."""
    return all(not (a > 0 and b < 0) for a, b in zip(v, w))


# Hermite normal forms and kernels

def _column_echelon(rows: list[list[int]], n: int) -> tuple[list[list[int]], list[list[int]], int]:
    """Column-reduce rows (m x n) with a unimodular U; returns (H, U, rank).

    Pivot rule: in each row, the smallest nonzero absolute value among the
    not-yet-pivoted columns (lowest index on ties) becomes the pivot.
    """
    H = [list(r) for r in rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    m = len(H)

    def swap(a, b):
        for M in (H, U):
            for r in M:
                r[a], r[b] = r[b], r[a]

    def addmul(dst, src, q):
        # column dst -= q * column src
        for M in (H, U):
            for r in M:
                if r[src]:
                    r[dst] -= q * r[src]

    k = 0
    for i in range(m):
        if k == n:
            break
        row = H[i]
        while True:
            nz = [j for j in range(k, n) if row[j]]
            if not nz:
                break
            p = min(nz, key=lambda j: (abs(row[j]), j))
            if p != k:
                swap(p, k)
            done = True
            for j in range(k + 1, n):
                if row[j]:
                    addmul(j, k, row[j] // row[k])
                    if row[j]:
                        done = False
            if done:
                break
        if any(row[j] for j in range(k, n)):
            if row[k] < 0:
                for M in (H, U):
                    for r in M:
                        r[k] = -r[k]
            k += 1
    return H, U, k


def hermite_rows(vectors: Sequence[Sequence[int]]) -> list[Vector]:
    """Row-style Hermite normal form of the lattice spanned by the vectors.

    Positive pivots, entries above each pivot reduced into [0, pivot).
    """
    if not vectors:
        return []
    n = len(vectors[0])
    cols = [list(c) for c in zip(*vectors)]  # transpose: columns become rows
    H, _, r = _column_echelon(cols, len(vectors))
    basis = [tuple(H[i][k] for i in range(n)) for k in range(r)]
    # reduce above pivots
    pivots = []
    for b in basis:
        pivots.append(next(i for i, x in enumerate(b) if x))
    basis = [list(b) for b in basis]
    for k in range(len(basis)):
        p = pivots[k]
        for j in range(k):
            q = basis[j][p] // basis[k][p]
            if q:
                basis[j] = [a - q * c for a, c in zip(basis[j], basis[k])]
    return [tuple(b) for b in basis]


@dataclass(frozen=True)
class LatticeBasis:
    ambient_dim: int
    basis_vectors: tuple[Vector, ...]
    rank_of_A: int

    @property
    def corank(self) -> int:
        return len(self.basis_vectors)

    def gale_rows(self) -> list[Vector]:
        """Rows of the n x (n - r) kernel matrix, i.e. the Gale transform."""
        return [tuple(g[i] for g in self.basis_vectors) for i in range(self.ambient_dim)]


def kernel_lattice_basis(A) -> LatticeBasis:
    A = as_matrix(A)
    _, U, r = _column_echelon([list(row) for row in A], A.cols)
    raw = [tuple(U[i][k] for i in range(A.cols)) for k in range(r, A.cols)]
    return LatticeBasis(A.cols, tuple(hermite_rows(raw)), r)


def rank(A) -> int:
    A = as_matrix(A)
    return _column_echelon([list(row) for row in A], A.cols)[2]


def independent_rows(A) -> list[int]:
    """Indices of the first maximal set of linearly independent rows."""
    A = as_matrix(A)
    chosen: list[int] = []
    current = 0
    for i in range(A.rows):
        trial = [A.data[j] for j in chosen + [i]]
        r = _column_echelon([list(x) for x in trial], A.cols)[2]
        if r > current:
            chosen.append(i)
            current = r
    return chosen


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    a = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _minor_values(rows: tuple[Vector, ...], combos: list[tuple[int, ...]]) -> set[int]:
    seen: set[int] = set()
    for cols in combos:
        d = abs(determinant([[row[j] for j in cols] for row in rows]))
        if d:
            seen.add(d)
            if len(seen) > 1:
                break
    return seen


def is_unimodular(A, cap: int = DEFAULT_MINOR_CAP, threads: int = 1) -> bool:
    """All nonzero r x r minors (r = rank) share one absolute value.

    Minors are taken on a maximal independent set of rows; any other choice
    rescales every minor by the same factor.  The rank-0 matrix is treated
    as unimodular (its only maximal minor is the empty one).
    """
    A = as_matrix(A)
    sel = independent_rows(A)
    r = len(sel)
    if r == 0:
        return True
    total = math.comb(A.cols, r)
    if total > cap:
        raise SizeLimitExceeded(
            f"instance too large for exact minor enumeration: {total} minors > cap {cap}")
    rows = tuple(A.data[i] for i in sel)
    combos = combinations(range(A.cols), r)
    if threads <= 1 or total < 5000:
        return len(_minor_values(rows, list(combos))) <= 1
    chunk = max(1000, total // (threads * 4))
    values: set[int] = set()
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = []
        while True:
            block = list(islice(combos, chunk))
            if not block:
                break
            futures.append(pool.submit(_minor_values, rows, block))
        for f in futures:
            values |= f.result()
    return len(values) <= 1


# bounded searches

def _bounds_for_coordinate(residual, col, rest_lo, rest_hi, lo, hi):
    """Tighten [lo, hi] for x so that residual - col*x stays reachable."""
    for k, a in enumerate(col):
        if not a:
            continue
        # need a*x in [bot, top]
        top = residual[k] - rest_lo[k]
        bot = residual[k] - rest_hi[k]
        if a > 0:
            lo = max(lo, -(-bot // a))
            hi = min(hi, top // a)
        else:
            lo = max(lo, -(-top // a))
            hi = min(hi, bot // a)
        if lo > hi:
            return lo, hi
    return lo, hi


def _integer_inverse(M: list[list[int]]) -> tuple[list[list[int]], int]:
    """(adj, det) with M adj = det I for a nonsingular square M."""
    r = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == k)) for k in range(r)]
         for i, row in enumerate(M)]
    for c in range(r):
        pr = next(i for i in range(c, r) if a[i][c])
        a[c], a[pr] = a[pr], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for i in range(r):
            if i != c and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    det = determinant(M)
    adj = [[int(x * det) for x in row[r:]] for row in a]
    return adj, det


def _split_order(A: IntMatrix, order: list[int]) -> tuple[list[int], list[int]]:
    """Pick independent columns from the back of ``order`` to be solved for."""
    r = rank(A)
    dep: list[int] = []
    for j in reversed(order):
        if len(dep) == r:
            break
        if rank(A.select_columns(dep + [j])) == len(dep) + 1:
            dep.append(j)
    depset = set(dep)
    return [j for j in order if j not in depset], [j for j in order if j in depset]


def _box_search(A: IntMatrix, b: Sequence[int], lower: Sequence[int], upper: Sequence[int],
                order: Sequence[int] | None = None, limit: int | None = None,
                first_nonzero_positive: bool = False, cancel=None) -> list[Vector]:
    """All integer x with A x = b and lower <= x <= upper.

    A set of rank(A) independent columns (taken from the back of ``order``)
    is solved for exactly; the remaining coordinates are searched depth-first,
    each range cut down by interval arithmetic on every row.  With
    ``first_nonzero_positive`` only vectors whose first nonzero entry, in
    ``order``, is positive are kept.
    """
    n = A.cols
    m = A.rows
    order = list(range(n)) if order is None else list(order)
    rank_of = {j: p for p, j in enumerate(order)}
    free, dep = _split_order(A, order)
    seq = free + dep
    f = len(free)
    first_dep = min((rank_of[j] for j in dep), default=n)
    rows_sel = independent_rows(A)
    # equivalent system adj(A_J) A x = adj(A_J) b: each dependent coordinate
    # then sits in a row of its own, which makes the interval cuts effective
    if dep:
        adj, det = _integer_inverse([[A.data[k][j] for j in dep] for k in rows_sel])
        sys_rows = [[sum(adj[t][s] * A.data[k][j] for s, k in enumerate(rows_sel)) for j in range(n)]
                    for t in range(len(dep))]
        sys_rhs = [sum(adj[t][s] * b[k] for s, k in enumerate(rows_sel)) for t in range(len(dep))]
    else:
        det, sys_rows, sys_rhs = 1, [], []
    m = len(sys_rows)
    cols = [tuple(row[j] for row in sys_rows) for j in seq]
    lo_b = [lower[j] for j in seq]
    hi_b = [upper[j] for j in seq]
    # rest_lo[d][k] / rest_hi[d][k]: range of the row-k sum over positions >= d
    rest_lo = [[0] * m for _ in range(n + 1)]
    rest_hi = [[0] * m for _ in range(n + 1)]
    for d in range(n - 1, -1, -1):
        c = cols[d]
        for k in range(m):
            a = c[k]
            x1, x2 = a * lo_b[d], a * hi_b[d]
            rest_lo[d][k] = rest_lo[d + 1][k] + min(x1, x2)
            rest_hi[d][k] = rest_hi[d + 1][k] + max(x1, x2)
    out: list[Vector] = []
    x = [0] * n
    residual = list(sys_rhs)
    counter = [0]
    r = len(dep)

    def leaf() -> bool:
        for t in range(r):
            if residual[t] % det:
                return False
            v = residual[t] // det
            if v < lo_b[f + t] or v > hi_b[f + t]:
                return False
            x[f + t] = v
        vec = [0] * n
        for pos, j in enumerate(seq):
            vec[j] = x[pos]
        if A.apply(vec) != tuple(b):
            return False
        if first_nonzero_positive:
            lead = next((vec[j] for j in order if vec[j]), 0)
            if lead <= 0:
                return False
        out.append(tuple(vec))
        return limit is not None and len(out) >= limit

    def rec(d: int, seen_nonzero: bool) -> bool:
        if d == f:
            return leaf()
        counter[0] += 1
        if cancel is not None and counter[0] & 0xFFF == 0 and cancel.is_set():
            raise Cancelled("search cancelled")
        lo, hi = lo_b[d], hi_b[d]
        if first_nonzero_positive and not seen_nonzero and rank_of[seq[d]] < first_dep:
            lo = max(lo, 0)
        c = cols[d]
        lo, hi = _bounds_for_coordinate(residual, c, rest_lo[d + 1], rest_hi[d + 1], lo, hi)
        for v in range(lo, hi + 1):
            x[d] = v
            if v:
                for k in range(m):
                    if c[k]:
                        residual[k] -= c[k] * v
            stop = rec(d + 1, seen_nonzero or v != 0)
            if v:
                for k in range(m):
                    if c[k]:
                        residual[k] += c[k] * v
            if stop:
                x[d] = 0
                return True
        x[d] = 0
        return False

    if any(lo > hi for lo, hi in zip(lo_b, hi_b)):
        return out
    rec(0, False)
    return out


def enumerate_bounded_kernel(A, bound: int, cap: int = DEFAULT_SEARCH_CAP) -> set[Vector]:
    """Nonzero kernel vectors with every |u_i| <= bound, canonical sign."""
    A = as_matrix(A)
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    # only the coordinates outside an independent column set are searched
    space = (2 * bound + 1) ** (A.cols - rank(A))
    if space > cap:
        raise SizeLimitExceeded(f"search space {space} exceeds cap {cap}")
    n = A.cols
    found = _box_search(A, (0,) * A.rows, [-bound] * n, [bound] * n, first_nonzero_positive=True)
    return {u for u in found if any(u)}


# exact linear programming (used to bound fibers)

def _simplex_feasible(M: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """A point x >= 0 with M x = rhs, or None; phase-one simplex, Bland's rule."""
    p = len(M)
    q = len(M[0]) if M else 0
    rows = []
    for i in range(p):
        r = list(M[i])
        h = rhs[i]
        if h < 0:
            r = [-a for a in r]
            h = -h
        rows.append(r + [Fraction(int(i == k)) for k in range(p)] + [h])
    basis = [q + i for i in range(p)]
    width = q + p
    # objective: minimise sum of artificials -> reduced costs
    cost = [Fraction(0)] * (width + 1)
    for r in rows:
        for j in range(q):
            cost[j] -= r[j]
        cost[width] -= r[width]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i, r in enumerate(rows):
            if r[enter] > 0:
                ratio = r[width] / r[enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            break  # unbounded phase-one cannot happen; defensive
        i = best[1]
        piv = rows[i][enter]
        rows[i] = [a / piv for a in rows[i]]
        for k in range(p):
            if k != i and rows[k][enter]:
                f = rows[k][enter]
                rows[k] = [a - f * b for a, b in zip(rows[k], rows[i])]
        if cost[enter]:
            f = cost[enter]
            cost = [a - f * b for a, b in zip(cost, rows[i])]
        basis[i] = enter
    if cost[width] != 0:
        return None
    x = [Fraction(0)] * q
    for i, j in enumerate(basis):
        if j < q:
            x[j] = rows[i][width]
    return x


@lru_cache(maxsize=4096)
def positive_functional(A: IntMatrix, coords: frozenset[int] | None = None) -> tuple[Fraction, ...] | None:
    """Rational y with (yA)_i >= 1 for every i in coords (default: all), if any."""
    coords = frozenset(range(A.cols)) if coords is None else coords
    if not coords:
        return tuple(Fraction(0) for _ in range(A.rows))
    idx = sorted(coords)
    m = A.rows
    M = []
    for i in idx:
        col = A.column(i)
        # variables: y+ (m), y- (m), slack_i
        row = [Fraction(c) for c in col] + [Fraction(-c) for c in col]
        row += [Fraction(-1) if k == i else Fraction(0) for k in idx]
        M.append(row)
    sol = _simplex_feasible(M, [Fraction(1)] * len(idx))
    if sol is None:
        return None
    y = tuple(sol[k] - sol[m + k] for k in range(m))
    yA = [sum(y[k] * A.data[k][i] for k in range(m)) for i in idx]
    assert all(v >= 1 for v in yA)
    return y


def is_pointed(A) -> bool:
    """True iff the only nonnegative kernel vector is zero."""
    return positive_functional(as_matrix(A)) is not None


def search_bounds(A: IntMatrix, b: Sequence[int], caps: Sequence[int | None],
                  fallback: int) -> tuple[list[int], bool]:
    """Upper bounds for nonnegative solutions of A x = b.

    Coordinates with a cap keep it; the others are bounded through a
    positive functional when one exists (exact), else by ``fallback``.
    The flag says whether the bounds are provably exhaustive.
    """
    free = frozenset(i for i, c in enumerate(caps) if c is None)
    y = positive_functional(A, free) if free else ()
    if free and y is None:
        return [fallback if c is None else c for c in caps], False
    upper = list(caps)
    if free:
        yA = [sum(y[k] * A.data[k][i] for k in range(A.rows)) for i in range(A.cols)]
        total = sum(y[k] * b[k] for k in range(A.rows))
        total += sum(max(Fraction(0), -yA[j]) * caps[j] for j in range(A.cols) if caps[j] is not None)
        for i in free:
            upper[i] = max(-1, math.floor(total / yA[i]))
    return upper, True


def enumerate_nonnegative_solutions(A, b: Sequence[int], cap=None, limit: int | None = None,
                                    cancel=None) -> tuple[list[Vector], bool]:
    """Nonnegative integer solutions of A x = b, plus a completeness flag.

    ``cap`` is an optional per-coordinate bound (int or sequence).  The flag
    is True when the returned list is provably the whole fiber.  Without a
    cap on a fiber that may be infinite, the box defaults to ten times the
    largest entry of b.
    """
    A = as_matrix(A)
    b = tuple(b)
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, expected {A.rows}")
    n = A.cols
    if cap is not None and not isinstance(cap, Sequence):
        cap = [cap] * n
    natural, finite = search_bounds(A, b, [None] * n, 0)
    if finite:
        if cap is None:
            upper = natural
            complete = True
        else:
            upper = [min(c, u) for c, u in zip(cap, natural)]
            complete = all(c >= u for c, u in zip(cap, natural))
    else:
        upper = list(cap) if cap is not None else [10 * max(1, *map(abs, b))] * n
        complete = False
    if any(u < 0 for u in upper):
        return [], complete
    sols = _box_search(A, b, [0] * n, upper, limit=limit, cancel=cancel)
    if limit is not None and len(sols) >= limit:
        complete = False
    return sorted(sols), complete


def rational_solve(M: Sequence[Sequence[int]], rhs: Sequence[int]) -> list[Fraction] | None:
    """One rational solution of M x = rhs (Gauss-Jordan), or None."""
    p = len(M)
    q = len(M[0]) if p else 0
    a = [[Fraction(x) for x in row] + [Fraction(h)] for row, h in zip(M, rhs)]
    piv_cols = []
    r = 0
    for c in range(q):
        pr = next((i for i in range(r, p) if a[i][c]), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(p):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    if any(a[i][q] for i in range(r, p)):
        return None
    x = [Fraction(0)] * q
    for i, c in enumerate(piv_cols):
        x[c] = a[i][q]
    return x
