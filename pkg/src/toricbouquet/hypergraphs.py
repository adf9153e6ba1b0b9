"""Hypergraphs, their incidence matrices, bouquets with basis and monomial walks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import IntMatrix, Vector, canonical, kernel_lattice_basis, primitive


@dataclass(frozen=True)
class Hypergraph:
    """Vertices are 1..vertex_count; edges are sorted tuples of vertices.

    ``blocks`` optionally records groups of edge positions (0-based) chosen
    by the constructor that built the hypergraph; it is not part of the
    hypergraph's identity.
    """

    vertex_count: int
    edges: tuple[tuple[int, ...], ...]
    blocks: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        edges = tuple(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        for e in edges:
            if not e:
                raise ValueError("edges must be nonempty")
            if e[0] < 1 or e[-1] > self.vertex_count:
                raise ValueError(f"edge {e} uses a vertex outside 1..{self.vertex_count}")

    @property
    def edge_count(self) -> int:
        return len(self.edges)


def incidence_matrix(H: Hypergraph) -> IntMatrix:
    rows = [[0] * H.edge_count for _ in range(H.vertex_count)]
    for j, e in enumerate(H.edges):
        for v in e:
            rows[v - 1][j] = 1
    return IntMatrix.from_rows(rows)


@dataclass(frozen=True)
class BouquetWithBasis:
    edges: tuple[int, ...]  # 0-based positions of the edges meeting U
    c: Vector  # over those edges
    a: Vector  # vertex vector

    def c_full(self, edge_count: int) -> Vector:
        out = [0] * edge_count
        for j, x in zip(self.edges, self.c):
            out[j] = x
        return tuple(out)


def check_bouquet_with_basis(H: Hypergraph, U: Iterable[int]) -> BouquetWithBasis | None:
    """The encoding data of E_U when U is the basis of a bouquet, else None."""
    U = sorted(set(U))
    if not U:
        raise ValueError("U must be nonempty")
    uset = set(U)
    meeting = [j for j, e in enumerate(H.edges) if uset.intersection(e)]
    if not meeting:
        return None
    restricted = IntMatrix.from_rows(
        [[int(v in H.edges[j]) for j in meeting] for v in U])
    basis = kernel_lattice_basis(restricted).basis_vectors
    if len(basis) != 1 or not all(basis[0]):
        return None
    c = canonical(primitive(basis[0]))
    a = [0] * H.vertex_count
    for j, x in zip(meeting, c):
        for v in H.edges[j]:
            a[v - 1] += x
    return BouquetWithBasis(tuple(meeting), c, tuple(a))


@dataclass(frozen=True)
class MonomialWalk:
    blue: tuple[tuple[int, int], ...]  # (edge position, multiplicity)
    red: tuple[tuple[int, int], ...]

    def to_text(self) -> str:
        def side(items):
            return " ".join(f"e{j + 1}^{m}" for j, m in items)
        return f"blue: {side(self.blue)}\nred: {side(self.red)}\n"

    @classmethod
    def from_text(cls, text: str) -> "MonomialWalk":
        sides = {"blue": (), "red": ()}
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            name, _, rest = line.partition(":")
            name = name.strip()
            if name not in sides:
                raise ValueError(f"line {lineno}: expected 'blue:' or 'red:'")
            items = []
            for tok in rest.split():
                base, _, mult = tok.partition("^")
                if not base.startswith("e") or not base[1:].isdigit():
                    raise ValueError(f"line {lineno}: bad edge token {tok!r}")
                items.append((int(base[1:]) - 1, int(mult) if mult else 1))
            sides[name] = tuple(items)
        return cls(sides["blue"], sides["red"])


def walk_from_vector(H: Hypergraph, u: Sequence[int]) -> tuple[MonomialWalk, bool]:
    """The walk of u and whether it is balanced (u in the incidence kernel)."""
    if len(u) != H.edge_count:
        raise ValueError(f"expected {H.edge_count} coordinates, got {len(u)}")
    blue = tuple((j, x) for j, x in enumerate(u) if x > 0)
    red = tuple((j, -x) for j, x in enumerate(u) if x < 0)
    w = MonomialWalk(blue, red)
    return w, not any(imbalance_vector(H, w))


def imbalance_vector(H: Hypergraph, walk: MonomialWalk) -> Vector:
    out = [0] * H.vertex_count
    for items, sign in ((walk.blue, 1), (walk.red, -1)):
        for j, mult in items:
            for v in H.edges[j]:
                out[v - 1] += sign * mult
    return tuple(out)


def parse_hypergraph(text: str) -> Hypergraph:
    lines = [(k, ln.split()) for k, ln in enumerate(text.splitlines(), 1) if ln.strip()]
    if not lines:
        raise ValueError("empty hypergraph file")
    k, head = lines[0]
    if len(head) != 2 or not all(t.isdigit() for t in head):
        raise ValueError(f"line {k}: header must be 'V E'")
    nv, ne = map(int, head)
    body = lines[1:]
    if len(body) != ne:
        raise ValueError(f"expected {ne} edge lines, found {len(body)}")
    edges = []
    for k, toks in body:
        try:
            edges.append(tuple(int(t) for t in toks))
        except ValueError:
            raise ValueError(f"line {k}: non-integer vertex index") from None
    return Hypergraph(nv, tuple(edges))


def format_hypergraph(H: Hypergraph) -> str:
    out = [f"{H.vertex_count} {H.edge_count}"]
    out += [" ".join(map(str, e)) for e in H.edges]
    return "\n".join(out) + "\n"
