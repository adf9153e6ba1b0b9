"""Matrix and hypergraph constructions with prescribed bouquet structure."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bouquets import subbouquet_decomposition
from .core import IntMatrix, ToricError, Vector, as_matrix
from .hypergraphs import Hypergraph


class ConstructionError(ToricError):
    pass


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def bezout_coefficients(c: Sequence[int]) -> Vector:
    """λ with sum λ_k c_k = gcd(c), folding the extended Euclid left to right."""
    g, lam = c[0], [1]
    if g < 0:
        g, lam = -g, [-1]
    for x in c[1:]:
        if x % g == 0:
            lam.append(0)
            continue
        g2, s, t = _ext_gcd(g, x)
        lam = [s * v for v in lam] + [t]
        g = g2
    return tuple(lam)


@dataclass(frozen=True)
class LawrenceSpec:
    a_list: tuple[Vector, ...]
    c_list: tuple[Vector, ...]
    lambda_list: tuple[Vector, ...] | None = None

    def __post_init__(self):
        a_list = tuple(tuple(a) for a in self.a_list)
        c_list = tuple(tuple(c) for c in self.c_list)
        if len(a_list) != len(c_list) or not a_list:
            raise ConstructionError("a_list and c_list must be nonempty and of equal length")
        if len({len(a) for a in a_list}) != 1:
            raise ConstructionError("all a_i must have the same length")
        for c in c_list:
            if not c or not all(c):
                raise ConstructionError(f"c not full support: {c}")
            if c[0] <= 0:
                raise ConstructionError(f"leading coordinate not positive: {c}")
            if math.gcd(*c) != 1:
                raise ConstructionError(f"c not primitive: {c}")
        lams = self.lambda_list
        if lams is None:
            lams = tuple(bezout_coefficients(c) for c in c_list)
        lams = tuple(tuple(l) for l in lams)
        for c, l in zip(c_list, lams):
            if len(l) != len(c) or sum(x * y for x, y in zip(c, l)) != 1:
                raise ConstructionError(f"Bezout identity fails for c={c}, lambda={l}")
        object.__setattr__(self, "a_list", a_list)
        object.__setattr__(self, "c_list", c_list)
        object.__setattr__(self, "lambda_list", lams)

    def blocks(self) -> list[tuple[int, ...]]:
        out, start = [], 0
        for c in self.c_list:
            out.append(tuple(range(start, start + len(c))))
            start += len(c)
        return out


def generalized_lawrence(spec: LawrenceSpec, verify: bool = True) -> IntMatrix:
    m = len(spec.a_list[0])
    sizes = [len(c) for c in spec.c_list]
    q = sum(sizes)
    rows = [[0] * q for _ in range(m)]
    offset = 0
    for a, lam, size in zip(spec.a_list, spec.lambda_list, sizes):
        for k in range(size):
            for r in range(m):
                rows[r][offset + k] = lam[k] * a[r]
        offset += size
    offset = 0
    for c, size in zip(spec.c_list, sizes):
        for k in range(1, size):
            row = [0] * q
            row[offset] = -c[k]
            row[offset + k] = c[0]
            rows.append(row)
        offset += size
    A = IntMatrix.from_rows(rows)
    if verify:
        _verify_lawrence(A, spec)
    return A


def _verify_lawrence(A: IntMatrix, spec: LawrenceSpec):
    blocks = spec.blocks()
    free = dict(zip(blocks, spec.c_list))
    dec = subbouquet_decomposition(A, blocks, free_vectors=free)
    pad = A.rows - len(spec.a_list[0])
    for B, a, c, blk in zip(dec.bouquets, spec.a_list, spec.c_list, blocks):
        if B.a != tuple(a) + (0,) * pad or tuple(B.c[i] for i in blk) != c:
            raise ConstructionError(f"decomposition does not recover a={a}, c={c}")


def second_lawrence(D) -> IntMatrix:
    """[[D, 0], [I, I]]."""
    D = as_matrix(D)
    n = D.cols
    rows = [list(r) + [0] * n for r in D]
    rows += [[int(j == i) for j in range(n)] * 2 for i in range(n)]
    return IntMatrix.from_rows(rows)


# almost 3-uniform encoding of an arbitrary matrix

def _sunflower_layout(A: IntMatrix):
    """Vertices and edges of the sunflower encoding, with per-column blocks."""
    m, n = A.shape
    next_vertex = m + 1
    edges: list[tuple[int, ...]] = []
    blocks: list[tuple[int, ...]] = []
    coeffs: list[int] = []
    for j in range(n):
        start = len(edges)
        cycle: list[int] = []
        for i in range(m):
            a = A.data[i][j]
            if not a:
                continue
            base = i + 1
            if a < 0:
                hub = next_vertex
                next_vertex += 1
            else:
                hub = base
            petals = list(range(next_vertex, next_vertex + 2 * abs(a)))
            next_vertex += 2 * abs(a)
            for s in range(abs(a)):
                edges.append((hub, petals[2 * s], petals[2 * s + 1]))
                coeffs.append(1)
            if a < 0:
                edges.append((base, hub))
                coeffs.append(a)
            cycle.extend(petals)
        for t in range(1, len(cycle), 2):
            edges.append((cycle[t], cycle[(t + 1) % len(cycle)]))
            coeffs.append(-1)
        blocks.append(tuple(range(start, len(edges))))
    return next_vertex - 1, edges, blocks, coeffs


def hypergraph_from_matrix(A) -> Hypergraph:
    """Sunflower hypergraph whose column blocks are mixed subbouquets with
    a-vectors (a_j, 0, ..., 0).  The blocks are recorded on the result."""
    A = as_matrix(A)
    if any(not any(r) for r in A.data):
        raise ConstructionError("zero row: every row needs a nonzero entry")
    if any(not any(c) for c in A.columns()):
        raise ConstructionError("zero column: every column needs a nonzero entry")
    nv, edges, blocks, _ = _sunflower_layout(A)
    return Hypergraph(nv, tuple(edges), tuple(blocks))


def sunflower_encoding_vectors(A) -> list[Vector]:
    """The encoding vector c of each column block of hypergraph_from_matrix(A)."""
    A = as_matrix(A)
    _, edges, blocks, coeffs = _sunflower_layout(A)
    out = []
    for blk in blocks:
        c = [0] * len(edges)
        for e in blk:
            c[e] = coeffs[e]
        out.append(tuple(c))
    return out


# 0/1 stable encoding

@dataclass(frozen=True)
class Encoding01Spec:
    D: IntMatrix
    delta_i: tuple[int, ...]
    j_i: tuple[int, ...]  # 0-based row attaining the column maximum first
    delta: int
    l: int

    def column_blocks(self) -> list[tuple[int, ...]]:
        out, start = [], 0
        for d in self.delta_i:
            out.append(tuple(range(start, start + d + 1)))
            start += d + 1
        return out


def encoding01_spec(D) -> Encoding01Spec:
    D = as_matrix(D)
    if any(x < 0 for x in D.entries):
        raise ConstructionError("negative entry")
    cols = D.columns()
    if any(not any(c) for c in cols):
        raise ConstructionError("zero column")
    deltas = tuple(max(c) for c in cols)
    js = tuple(c.index(max(c)) for c in cols)
    free_rows = [k for k in range(D.rows) if k not in set(js)]
    return Encoding01Spec(D, deltas, js, sum(d + 1 for d in deltas), len(free_rows))


def _eps(k: int, n: int) -> list[int]:
    return [1] * k + [0] * (n - k)


def encode01_stable(D) -> IntMatrix:
    spec = encoding01_spec(D)
    D = spec.D
    n = D.cols
    rows = []
    for k in range(D.rows):
        for i in range(n):
            if spec.j_i[i] != k:
                continue
            size = spec.delta_i[i] + 1
            for r in range(size):
                row = []
                for l in range(n):
                    if l == i:
                        row += [int(t != r) for t in range(size)]
                    else:
                        row += _eps(D.data[k][l], spec.delta_i[l] + 1)
                rows.append(row)
    for k in range(D.rows):
        if k in spec.j_i:
            continue
        row = []
        for l in range(n):
            row += _eps(D.data[k][l], spec.delta_i[l] + 1)
        rows.append(row)
    return IntMatrix.from_rows(rows)


# sunflower families and the complete uniform witness

def build_sunflower_family(cores: Sequence, petal_counts: Sequence[int], matching="cyclic",
                           petal_size: int = 3) -> Hypergraph:
    """Single-core sunflowers glued along equal core labels, plus a matching.

    Core vertices come first (one per distinct label, in order of first
    appearance), then each sunflower's petal vertices.  ``matching`` is
    "cyclic" (pair each sunflower's petal vertices around a cycle) or an
    explicit list of edges (1-based vertices) covering every non-core vertex
    exactly once.  Blocks record the edges of each connected piece left after
    deleting the cores.
    """
    if len(cores) != len(petal_counts):
        raise ConstructionError("one core per sunflower")
    if any(t < 1 for t in petal_counts):
        raise ConstructionError("petal counts must be at least 1")
    if petal_size < 2:
        raise ConstructionError("petals need at least one non-core vertex")
    labels: dict = {}
    for c in cores:
        labels.setdefault(c, len(labels) + 1)
    nxt = len(labels) + 1
    edges: list[tuple[int, ...]] = []
    cycles: list[list[int]] = []
    for core, t in zip(cores, petal_counts):
        cycle = []
        for _ in range(t):
            petal = list(range(nxt, nxt + petal_size - 1))
            nxt += petal_size - 1
            edges.append((labels[core], *petal))
            cycle.extend(petal)
        if matching == "cyclic":
            if len(cycle) % 2:
                raise ConstructionError("matching not perfect: odd number of petal vertices")
            for s in range(1, len(cycle), 2):
                edges.append((cycle[s], cycle[(s + 1) % len(cycle)]))
        cycles.append(cycle)
    nv = nxt - 1
    noncore = set(range(len(labels) + 1, nv + 1))
    if matching != "cyclic":
        covered: list[int] = []
        for e in matching:
            e = tuple(e)
            if not e or not set(e) <= noncore:
                raise ConstructionError(f"matching not perfect: edge {e} leaves the petal vertices")
            covered.extend(e)
            edges.append(e)
        if sorted(covered) != sorted(noncore):
            raise ConstructionError("matching not perfect: petal vertices must be covered exactly once")
    return Hypergraph(nv, tuple(edges), _noncore_blocks(edges, noncore))


def _noncore_blocks(edges, noncore) -> tuple[tuple[int, ...], ...]:
    parent = {v: v for v in noncore}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in edges:
        vs = [v for v in e if v in noncore]
        for v in vs[1:]:
            a, b = find(vs[0]), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for j, e in enumerate(edges):
        root = find(next(v for v in e if v in noncore))
        groups.setdefault(root, []).append(j)
    return tuple(tuple(g) for g in sorted(groups.values(), key=lambda g: g[0]))


def build_complete_uniform_witness(d: int) -> tuple[Hypergraph, Vector]:
    """The hypergraph on (d+1)^2 vertices v_ij with edges E_ij, E_j, and the
    canonical vector of the binomial prod_{i, j != 1} E_ij - prod_i E_i E_i1^(d-1)."""
    if d < 2:
        raise ConstructionError("d must be at least 2")
    size = d + 1

    def v(i, j):  # 1-based, first column first
        return (j - 1) * size + i

    edges = []
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            edges.append(tuple(v(i, k) for k in range(1, size + 1) if k != j))
    for j in range(1, size + 1):
        edges.append(tuple(v(k, 1) for k in range(1, size + 1) if k != j))
    blocks = [tuple(range(i * size, (i + 1) * size)) for i in range(size)]
    blocks += [(size * size + j,) for j in range(size)]
    witness = []
    for i in range(size):
        witness += [d - 1] + [-1] * d
    witness += [1] * size
    return Hypergraph(size * size, tuple(edges), tuple(blocks)), tuple(witness)
