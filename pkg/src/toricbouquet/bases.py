"""Graver bases, circuits, fibers, Markov bases and the Lawrence-type conditions."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .bouquets import BouquetDecomposition, compute_bouquets, lift_vector
from .core import (Cancelled, IntMatrix, Inconclusive, SizeLimitExceeded, ToricError, Vector,
                   _box_search, as_matrix, canonical, conformally_below, enumerate_bounded_kernel,
                   enumerate_nonnegative_solutions,
                   is_conformal, is_semiconformal, kernel_lattice_basis, negative_part,
                   positive_functional, positive_part, search_bounds, support)

DEFAULT_GRAVER_CAP = 100_000


class GraverCapExceeded(SizeLimitExceeded):
    pass


class NotPositivelyGraded(ToricError):
    pass


class NotStable(ToricError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class TheoremViolation(ToricError):
    """Two quantities that must agree did not; always a bug or bad input."""


def _sort_key(u: Vector):
    return (sum(map(abs, u)), tuple(-x for x in u))


@dataclass(frozen=True)
class GraverBasis:
    matrix: IntMatrix
    elements: tuple[Vector, ...]

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __contains__(self, u):
        return canonical(tuple(u)) in set(self.elements)

    def max_norm(self) -> int:
        return max((max(map(abs, u)) for u in self.elements), default=0)


# completion procedure

class _Completion:
    """Completion of a symmetric lattice generating set w.r.t. ⊑ on `coords`."""

    def __init__(self, coords: Sequence[int], cap: int, max_norm: int | None, cancel):
        self.coords = list(coords)
        self.cap = cap
        self.max_norm = max_norm
        self.cancel = cancel
        self.items: list[tuple[Vector, int, int]] = []

    def masks(self, v: Vector) -> tuple[int, int]:
        pos = neg = 0
        for i in self.coords:
            x = v[i]
            if x > 0:
                pos |= 1 << i
            elif x < 0:
                neg |= 1 << i
        return pos, neg

    def reduce(self, s: Vector) -> Vector:
        coords = self.coords
        while True:
            pos, neg = self.masks(s)
            if not pos and not neg:
                return s
            for g, gp, gn in self.items:
                if gp & ~pos or gn & ~neg:
                    continue
                k = None
                for i in coords:
                    gi = g[i]
                    if gi:
                        q = s[i] // gi
                        if q < 1:
                            k = 0
                            break
                        if k is None or q < k:
                            k = q
                if k:
                    s = tuple(a - k * b for a, b in zip(s, g))
                    break
            else:
                return s

    def norm(self, v: Vector) -> int:
        return sum(abs(v[i]) for i in self.coords)

    def run(self, generators: Iterable[Vector]) -> list[Vector]:
        heap: list = []
        seen: set[Vector] = set()

        def push(v: Vector):
            v = canonical(v)
            if v not in seen and any(v[i] for i in self.coords):
                seen.add(v)
                heapq.heappush(heap, (self.norm(v), v))

        for g in generators:
            push(g)
        steps = 0
        while heap:
            steps += 1
            if self.cancel is not None and steps % 256 == 0 and self.cancel.is_set():
                raise Cancelled("Graver computation cancelled")
            _, s = heapq.heappop(heap)
            f = self.reduce(s)
            if not any(f[i] for i in self.coords):
                continue
            if self.max_norm is not None and max(abs(x) for x in f) > self.max_norm:
                raise GraverCapExceeded(f"Graver computation exceeded cap: norm above {self.max_norm}")
            new = []
            for h in (f, tuple(-x for x in f)):
                hp, hn = self.masks(h)
                new.append((h, hp, hn))
            fp, fn = new[0][1], new[0][2]
            for g, gp, gn in self.items:
                # sums of sign-compatible vectors reduce to zero
                if (fp & gn) or (fn & gp):
                    push(tuple(a + b for a, b in zip(f, g)))
            self.items.extend(new)
            if len(self.items) > 2 * self.cap:
                raise GraverCapExceeded(
                    f"Graver computation exceeded cap: more than {self.cap} elements")
        return self.minimal()

    def minimal(self) -> list[Vector]:
        out = []
        items = self.items
        for g, gp, gn in items:
            if not _is_canonical(g):
                continue
            for h, hp, hn in items:
                if h is g or (hp & ~gp) or (hn & ~gn):
                    continue
                if h != g and all(abs(h[i]) <= abs(g[i]) for i in self.coords):
                    break
            else:
                out.append(g)
        return out


def _is_canonical(v: Vector) -> bool:
    for x in v:
        if x:
            return x > 0
    return True


def graver_basis(A, cap: int = DEFAULT_GRAVER_CAP, max_norm: int | None = None,
                 cancel=None) -> GraverBasis:
    """Graver basis by project-and-lift completion.

    The lattice is first projected onto the pivot coordinates of its
    Hermite basis (an injective projection); coordinates are then added back
    one at a time, each stage seeded by the previous stage's Graver basis.
    """
    A = as_matrix(A)
    basis = kernel_lattice_basis(A).basis_vectors
    if not basis:
        return GraverBasis(A, ())
    pivots = [next(i for i, x in enumerate(b) if x) for b in basis]
    coords = list(pivots)
    rest = [i for i in range(A.cols) if i not in set(pivots)]
    current = list(basis)
    stages = [list(coords)]
    for i in rest:
        coords = coords + [i]
        stages.append(list(coords))
    for stage in stages:
        comp = _Completion(sorted(stage), cap, max_norm, cancel)
        current = comp.run(current)
    return GraverBasis(A, tuple(sorted(current, key=_sort_key)))


def circuits(A, graver: GraverBasis | None = None) -> list[Vector]:
    """Graver elements with inclusion-minimal support."""
    gr = graver if graver is not None else graver_basis(A)
    supports = [(u, support(u)) for u in gr]
    out = []
    for u, s in supports:
        if not any(t < s for _, t in supports):
            out.append(u)
    return sorted(out, key=_sort_key)


def is_positively_graded(A, graver: GraverBasis | None = None) -> bool:
    gr = graver if graver is not None else graver_basis(A)
    return not any(all(x >= 0 for x in u) for u in gr)


# fibers

@dataclass(frozen=True)
class Fiber:
    degree: Vector
    elements: tuple[Vector, ...]
    complete: bool

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def fiber_of(A, x: Sequence[int], caps=None, limit: int | None = None) -> Fiber:
    A = as_matrix(A)
    if any(v < 0 for v in x):
        raise ValueError("fiber_of needs a nonnegative point")
    b = A.apply(x)
    if caps is None and not _pointed(A):
        caps = 10 * max(1, *x)
    elems, complete = enumerate_nonnegative_solutions(A, b, caps, limit=limit)
    return Fiber(b, tuple(elems), complete)


_FIBERS: dict[tuple[IntMatrix, Vector], Fiber] = {}


def _complete_fiber(A: IntMatrix, point: Vector) -> Fiber:
    """fiber_of(A, point) with the default box, memoised by degree."""
    key = (A, A.apply(point))
    f = _FIBERS.get(key)
    if f is None:
        if len(_FIBERS) > 4096:
            _FIBERS.clear()
        f = _FIBERS[key] = fiber_of(A, point)
    return f


def _pointed(A: IntMatrix) -> bool:
    return positive_functional(A) is not None


def indispensable_binomials(A, graver: GraverBasis | None = None) -> list[Vector]:
    """Graver elements u whose fiber of u⁺ is exactly {u⁺, u⁻}."""
    A = as_matrix(A)
    gr = graver if graver is not None else graver_basis(A)
    if not len(gr) or not is_positively_graded(A, gr):
        return []
    out = []
    for u in gr:
        f = fiber_of(A, positive_part(u), limit=3)
        if len(f) == 2:
            out.append(u)
    return out


# Markov bases

def _degree_order(A: IntMatrix, degrees: Iterable[Vector]) -> list[Vector]:
    # a positive functional is strictly increasing along the NA order
    y = positive_functional(A)
    return sorted(set(degrees), key=lambda b: (sum(yk * bk for yk, bk in zip(y, b)), b))


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            if ry < rx:
                rx, ry = ry, rx
            self.parent[ry] = rx


def _support_components(fiber: Sequence[Vector]) -> list[list[Vector]]:
    """Components of the fiber under moves of strictly smaller degree.

    Two points sharing a support coordinate are joined through the smaller
    fiber obtained by removing that coordinate, and a smaller-degree move
    never leaves the support of the point it starts from empty, so these are
    the components of the shares-a-coordinate graph.
    """
    uf = _UnionFind(range(len(fiber)))
    first: dict[int, int] = {}
    for k, t in enumerate(fiber):
        for i, x in enumerate(t):
            if x:
                if i in first:
                    uf.union(first[i], k)
                else:
                    first[i] = k
    comps: dict[int, list[Vector]] = {}
    for k in sorted(range(len(fiber)), key=lambda k: fiber[k]):
        comps.setdefault(uf.find(k), []).append(fiber[k])
    return sorted(comps.values(), key=lambda c: c[0])


@dataclass
class _MarkovStep:
    degree: Vector
    fiber: tuple[Vector, ...]
    components: list[list[Vector]]
    moves: list[Vector]


def _markov_steps(A: IntMatrix, graver: GraverBasis) -> list[_MarkovStep]:
    """Per Graver degree, the fiber components and the star of moves joining
    the first component's smallest point to the smallest point of each other one."""
    degrees = _degree_order(A, (A.apply(positive_part(u)) for u in graver))
    points = {}
    for u in graver:
        points.setdefault(A.apply(positive_part(u)), positive_part(u))
    steps = []
    for b in degrees:
        f = _complete_fiber(A, points[b])
        if not f.complete:
            raise Inconclusive(f"fiber of degree {b} could not be exhausted")
        comps = _support_components(f.elements)
        new = [canonical(tuple(p - q for p, q in zip(comps[0][0], c[0]))) for c in comps[1:]]
        steps.append(_MarkovStep(b, f.elements, comps, new))
    return steps


@dataclass(frozen=True)
class MarkovBasis:
    elements: tuple[Vector, ...]
    minimal: bool = True

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def minimal_markov_basis(A, graver: GraverBasis | None = None) -> MarkovBasis:
    A = as_matrix(A)
    gr = graver if graver is not None else graver_basis(A)
    if not is_positively_graded(A, gr):
        raise NotPositivelyGraded("not positively graded")
    moves = [m for step in _markov_steps(A, gr) for m in step.moves]
    return MarkovBasis(tuple(moves), True)


def _move_components(fiber: Sequence[Vector], moves: Sequence[Vector]) -> _UnionFind:
    members = set(fiber)
    uf = _UnionFind(fiber)
    signed = [m for mv in moves for m in (mv, tuple(-x for x in mv))]
    for t in fiber:
        for mv in signed:
            if all(ti >= mi for ti, mi in zip(t, mv) if mi > 0):
                s = tuple(ti - mi for ti, mi in zip(t, mv))
                if s in members:
                    uf.union(t, s)
    return uf


def connects(A, moves: Sequence[Vector], start: Vector, goal: Vector) -> bool:
    """Whether the moves join start to goal inside their (finite) fiber."""
    A = as_matrix(A)
    start, goal = tuple(start), tuple(goal)
    if A.apply(start) != A.apply(goal):
        return False
    f = _complete_fiber(A, start)
    if not f.complete:
        raise Inconclusive("fiber is not finite")
    uf = _move_components(f.elements, list(moves))
    return uf.find(start) == uf.find(goal)


def is_markov_basis(A, moves: Sequence[Vector], graver: GraverBasis | None = None) -> bool:
    """Checks that every Graver move u⁺ -> u⁻ can be simulated by the moves."""
    A = as_matrix(A)
    gr = graver if graver is not None else graver_basis(A)
    by_degree: dict[Vector, list[Vector]] = {}
    for u in gr:
        by_degree.setdefault(A.apply(positive_part(u)), []).append(u)
    moves = list(moves)
    for us in by_degree.values():
        f = _complete_fiber(A, positive_part(us[0]))
        if not f.complete:
            raise Inconclusive("fiber is not finite")
        uf = _move_components(f.elements, moves)
        if any(uf.find(positive_part(u)) != uf.find(negative_part(u)) for u in us):
            return False
    return True


def is_generic(A, graver: GraverBasis | None = None) -> bool:
    """Some minimal Markov basis consists of full-support moves only."""
    A = as_matrix(A)
    gr = graver if graver is not None else graver_basis(A)
    if not is_positively_graded(A, gr):
        raise NotPositivelyGraded("not positively graded")
    if not len(gr):
        return False
    n = A.cols
    for step in _markov_steps(A, gr):
        comps = step.components
        if len(comps) < 2:
            continue
        # component graph: edge when some pair of members differs on every coordinate
        uf = _UnionFind(range(len(comps)))
        for p in range(len(comps)):
            for q in range(p + 1, len(comps)):
                if any(len(support(s) | support(t)) == n for s in comps[p] for t in comps[q]):
                    uf.union(p, q)
        if len({uf.find(k) for k in range(len(comps))}) > 1:
            return False
    return True


# semiconformal decompositions and S-Lawrence

def _residual_cap(u: Sequence[int], residual_cap: int | None) -> int:
    return residual_cap if residual_cap is not None else 10 * max(1, *map(abs, u))


def _third_fiber_elements(A: IntMatrix, u: Vector, S: Iterable[int], residual_cap: int | None):
    """Fiber points of u⁺ other than u⁺, u⁻ whose S-part lies in the box
    w_i <= max(u⁺_i, u⁻_i).  Yields candidates; returns the exhaustive flag
    through the generator's return value."""
    S = set(S)
    up, um = positive_part(u), negative_part(u)
    caps = [max(up[i], um[i]) if i in S else None for i in range(A.cols)]
    b = A.apply(up)
    upper, exhaustive = search_bounds(A, b, caps, _residual_cap(u, residual_cap))
    order = sorted(S) + [i for i in range(A.cols) if i not in S]
    # two known points plus one more are enough
    sols = _box_search(A, b, [0] * A.cols, upper, order=order, limit=3) \
        if all(x >= 0 for x in upper) else []
    others = [w for w in sols if w != up and w != um]
    return others, exhaustive or len(sols) >= 3


def find_semiconformal_decomposition(A, u: Sequence[int], conformal_on: Iterable[int] = (),
                                     residual_cap: int | None = None):
    """A pair (v, w) of nonzero kernel vectors, u = v + w, semiconformal and
    conformal on the given coordinates; None when none exists.

    Raises Inconclusive when the fiber of u⁺ is infinite and the search box
    was not enough to decide.
    """
    A = as_matrix(A)
    u = tuple(u)
    S = set(conformal_on)
    if not any(u):
        return None
    others, exhaustive = _third_fiber_elements(A, u, S, residual_cap)
    up, um = positive_part(u), negative_part(u)
    for z in others:
        v = tuple(a - b for a, b in zip(up, z))
        w = tuple(a - b for a, b in zip(z, um))
        assert is_semiconformal(v, w) and is_conformal([v[i] for i in S], [w[i] for i in S])
        return v, w
    if not exhaustive:
        raise Inconclusive("inconclusive: fiber search was truncated")
    return None


def is_s_lawrence(A, S: Iterable[int], graver: GraverBasis | None = None,
                  residual_cap: int | None = None) -> bool | None:
    """True / False, or None when a truncated search left it undecided."""
    A = as_matrix(A)
    S = set(S)
    gr = graver if graver is not None else graver_basis(A)
    undecided = False
    for u in gr:
        up, um = positive_part(u), negative_part(u)
        others, exhaustive = _third_fiber_elements(A, u, S, residual_cap)
        for w in others:
            if all(w[i] <= max(up[i], um[i]) for i in S):
                return False
        if not exhaustive:
            undecided = True
    return None if undecided else True


@dataclass(frozen=True)
class LawrenceReport:
    cond_a: bool | None
    cond_b: bool | None
    cond_c: bool | None
    S: tuple[int, ...]  # 0-based columns of A_B
    witness: tuple[Vector, Vector, Vector] | None = None  # (u, v, w) refuting (a)

    @property
    def conclusive(self) -> bool:
        return None not in (self.cond_a, self.cond_b, self.cond_c)


def empty_set_lawrence(A, graver: GraverBasis | None = None) -> bool:
    """Positively graded and every Graver element is indispensable."""
    A = as_matrix(A)
    gr = graver if graver is not None else graver_basis(A)
    if not is_positively_graded(A, gr):
        return False
    return len(indispensable_binomials(A, gr)) == len(gr)


def classify_lawrence(A, residual_cap: int | None = None) -> LawrenceReport:
    A = as_matrix(A)
    dec = compute_bouquets(A)
    AB = dec.bouquet_matrix
    S = dec.mixed_indices
    grB = graver_basis(AB)

    cond_a: bool | None = True
    witness = None
    for u in grB:
        try:
            found = find_semiconformal_decomposition(AB, u, S, residual_cap)
        except Inconclusive:
            cond_a = None
            continue
        if found is not None:
            cond_a = False
            witness = (u, *found)
            break

    cond_b = empty_set_lawrence(A)
    cond_c = is_s_lawrence(AB, S, grB, residual_cap)
    report = LawrenceReport(cond_a, cond_b, cond_c, tuple(S), witness)
    if report.conclusive and not (cond_a == cond_b == cond_c):
        raise TheoremViolation(f"Lawrence conditions disagree: {report}")
    return report


# transport along the bouquet bijection

@dataclass
class TransportReport:
    stable: bool
    graver: tuple[int, int]
    circuits: tuple[int, int]
    indispensable: tuple[int, int] | None = None
    markov: tuple[int, int] | None = None
    generic: tuple[bool, bool] | None = None
    notes: list[str] = field(default_factory=list)


def _lift_set(dec: BouquetDecomposition, vectors: Iterable[Vector]) -> set[Vector]:
    return {canonical(lift_vector(dec, u)) for u in vectors}


def check_stable_transport(A, decomposition: BouquetDecomposition | None = None) -> TransportReport:
    """Compares Graver, circuit, indispensable, Markov and genericity data of
    A and A_B through the lift.  Disagreement raises TheoremViolation."""
    A = as_matrix(A)
    dec = decomposition or compute_bouquets(A)
    AB = dec.bouquet_matrix
    same = AB == A  # then every quantity of A_B is the one of A

    def both(fn, *args):
        left = fn(A, *(a[0] for a in args))
        return left, left if same else fn(AB, *(a[1] for a in args))

    gr, grB = both(graver_basis)
    if _lift_set(dec, grB) != set(gr):
        raise TheoremViolation("lift does not map Gr(A_B) onto Gr(A)")
    ci, ciB = both(circuits, (gr, grB))
    if _lift_set(dec, ciB) != set(ci):
        raise TheoremViolation("lift does not map C(A_B) onto C(A)")
    stable = not dec.mixed_indices
    report = TransportReport(stable, (len(gr), len(grB)), (len(ci), len(ciB)))
    if not stable:
        raise NotStable("not stable", report)

    ind, indB = both(indispensable_binomials, (gr, grB))
    if _lift_set(dec, indB) != set(ind):
        raise TheoremViolation("lift does not map S(A_B) onto S(A)")
    report.indispensable = (len(ind), len(indB))

    pg = is_positively_graded(A, gr)
    if pg != is_positively_graded(AB, grB):
        raise TheoremViolation("positive grading differs between A and A_B")
    if not pg:
        report.notes.append("not positively graded: Markov and genericity legs skipped")
        return report
    mk, mkB = both(minimal_markov_basis, (gr, grB))
    lifted = sorted(_lift_set(dec, mkB))
    if len(mk) != len(mkB) or not is_markov_basis(A, lifted, gr):
        raise TheoremViolation("minimal Markov bases do not correspond")
    report.markov = (len(mk), len(mkB))
    gen, genB = both(is_generic, (gr, grB))
    if gen != genB:
        raise TheoremViolation("genericity differs between A and A_B")
    report.generic = (gen, genB)
    return report


# bounded-enumeration cross-check

def _pattern(v: Sequence[int]) -> tuple[int, int]:
    pos = neg = 0
    for i, x in enumerate(v):
        if x > 0:
            pos |= 1 << i
        elif x < 0:
            neg |= 1 << i
    return pos, neg


@dataclass(frozen=True)
class OracleReport:
    bound: int
    enumerated: int
    graver_in_box: int
    minimal_in_box: int
    agree: bool
    box_covers_graver: bool
    mismatches: tuple[Vector, ...] = ()


def graver_oracle(A, bound: int, graver: GraverBasis | None = None) -> OracleReport:
    """Compare the Graver elements inside the box [-bound, bound]^n with the
    conformally minimal vectors of a plain enumeration of that box.

    Anything conformally below a box vector is again in the box, so the two
    sets must coincide.  Graver elements only serve as candidate witnesses
    of non-minimality; a vector without one is checked against the whole
    enumeration, so the verdict does not depend on the Graver basis being right.
    """
    A = as_matrix(A)
    gr = graver if graver is not None else graver_basis(A)
    box = enumerate_bounded_kernel(A, bound)
    groups: dict[tuple[int, int], list[Vector]] = {}
    for u in box:
        groups.setdefault(_pattern(u), []).append(u)
        neg = tuple(-x for x in u)
        groups.setdefault(_pattern(neg), []).append(neg)
    witnesses = [(g, *_pattern(g)) for g in gr] + [(tuple(-x for x in g), *_pattern(g)[::-1]) for g in gr]

    def has_proper_below(u, pool) -> bool:
        pu, nu = _pattern(u)
        for v, pv, nv in pool:
            if not (pv & ~pu or nv & ~nu) and v != u and conformally_below(v, u):
                return True
        return False

    def exhaustive_below(u) -> bool:
        pu, nu = _pattern(u)
        for (pv, nv), vs in groups.items():
            if pv & ~pu or nv & ~nu:
                continue
            if any(v != u and conformally_below(v, u) for v in vs):
                return True
        return False

    gset = set(gr)
    minimal = set()
    for u in box:
        if u not in gset and has_proper_below(u, witnesses):
            continue
        if not exhaustive_below(u):
            minimal.add(u)
    inside = {g for g in gr if max(map(abs, g)) <= bound}
    return OracleReport(bound, len(box), len(inside), len(minimal), inside == minimal,
                        gr.max_norm() <= bound, tuple(sorted(inside ^ minimal)))
