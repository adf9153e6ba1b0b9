"""Bouquet decompositions, encoding vectors and the lifting bijection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .core import (IntMatrix, LatticeBasis, ToricError, Vector, as_matrix, canonical,
                   is_unimodular, kernel_lattice_basis)


class NotSubbouquet(ToricError):
    pass


class NotInImage(ToricError):
    pass


class Kind(str, Enum):
    FREE = "Free"
    MIXED = "Mixed"
    NON_MIXED = "NonMixed"


@dataclass(frozen=True)
class Bouquet:
    column_indices: tuple[int, ...]  # 0-based
    kind: Kind
    c: Vector  # length n
    a: Vector  # length m

    @property
    def is_mixed(self) -> bool:
        return self.kind is Kind.MIXED

    @property
    def is_free(self) -> bool:
        return self.kind is Kind.FREE


@dataclass(frozen=True)
class BouquetDecomposition:
    source: IntMatrix
    bouquets: tuple[Bouquet, ...]
    bouquet_matrix: IntMatrix

    def __len__(self):
        return len(self.bouquets)

    @property
    def mixed_indices(self) -> tuple[int, ...]:
        """0-based positions (columns of A_B) of the mixed bouquets."""
        return tuple(k for k, B in enumerate(self.bouquets) if B.is_mixed)

    @property
    def parts(self) -> list[tuple[int, ...]]:
        return [B.column_indices for B in self.bouquets]

    def to_json(self) -> dict:
        return {
            "bouquets": [
                {"indices": [i + 1 for i in B.column_indices], "kind": B.kind.value,
                 "c": list(B.c), "a": list(B.a)}
                for B in self.bouquets
            ],
            "A_B": self.bouquet_matrix.tolist(),
        }


def _direction(row: Vector) -> Vector:
    """Primitive representative of the line through a nonzero Gale row."""
    g = math.gcd(*row)
    return canonical(tuple(x // g for x in row))


def _proportional(x: Vector, y: Vector) -> bool:
    # cross-multiplication, no division
    return all(x[i] * y[j] == x[j] * y[i] for i in range(len(x)) for j in range(i + 1, len(x))) \
        and all((a == 0) == (b == 0) for a, b in zip(x, y))


def _build(A: IntMatrix, gale: list[Vector], part: Sequence[int],
           free_vector: Sequence[int] | None = None) -> Bouquet:
    part = tuple(sorted(part))
    n = A.cols
    rows = [gale[i] for i in part]
    zero = [not any(r) for r in rows]
    if all(zero):
        if free_vector is None:
            coeffs = [1] * len(part)
        else:
            coeffs = list(free_vector)
            if len(coeffs) != len(part) or not all(coeffs) or coeffs[0] <= 0:
                raise ValueError("free vector must have full support and a positive first entry")
        kind = Kind.FREE
    else:
        if any(zero) or not all(_proportional(rows[0], r) for r in rows[1:]):
            raise NotSubbouquet(f"not a subbouquet: columns {[i + 1 for i in part]} have "
                                "non-proportional Gale rows")
        j = next(k for k, x in enumerate(rows[0]) if x)
        g = math.gcd(*(r[j] for r in rows))
        sign = 1 if rows[0][j] > 0 else -1
        coeffs = [sign * r[j] // g for r in rows]
        kind = Kind.MIXED if any(x < 0 for x in coeffs) else Kind.NON_MIXED
    c = [0] * n
    for i, x in zip(part, coeffs):
        c[i] = x
    a = A.apply(c)
    return Bouquet(part, kind, tuple(c), a)


def _assemble(A: IntMatrix, gale: list[Vector], parts, free_vectors=None) -> BouquetDecomposition:
    parts = sorted((tuple(sorted(p)) for p in parts), key=lambda p: p[0])
    free_vectors = free_vectors or {}
    bouquets = tuple(_build(A, gale, p, free_vectors.get(p)) for p in parts)
    AB = IntMatrix.from_columns([B.a for B in bouquets])
    return BouquetDecomposition(A, bouquets, AB)


def bouquet_partition(A, kernel: LatticeBasis | None = None) -> list[tuple[int, ...]]:
    """Free columns in one part; the rest grouped by Gale direction."""
    A = as_matrix(A)
    kernel = kernel or kernel_lattice_basis(A)
    gale = kernel.gale_rows()
    free: list[int] = []
    groups: dict[Vector, list[int]] = {}
    for i, row in enumerate(gale):
        if any(row):
            groups.setdefault(_direction(row), []).append(i)
        else:
            free.append(i)
    parts = list(groups.values())
    if free:
        parts.append(free)
    return sorted((tuple(p) for p in parts), key=lambda p: p[0])


def compute_bouquets(A, kernel: LatticeBasis | None = None) -> BouquetDecomposition:
    """The bouquet decomposition of A.

    ``kernel`` may supply any lattice basis of the kernel; the result does
    not depend on it.
    """
    A = as_matrix(A)
    kernel = kernel or kernel_lattice_basis(A)
    gale = kernel.gale_rows()
    return _assemble(A, gale, bouquet_partition(A, kernel))


def _check_partition(parts, n: int):
    flat = sorted(i for p in parts for i in p)
    if flat != list(range(n)):
        raise ValueError("parts must partition the column indices")
    if any(not p for p in parts):
        raise ValueError("parts must be nonempty")


def subbouquet_decomposition(A, parts: Sequence[Sequence[int]],
                             free_vectors: dict | None = None) -> BouquetDecomposition:
    """Decomposition along a user-supplied partition into subbouquets.

    ``parts`` use 0-based column indices.  ``free_vectors`` optionally maps a
    free part (as a sorted tuple) to its encoding coefficients, replacing
    the all-ones default.
    """
    A = as_matrix(A)
    _check_partition(parts, A.cols)
    gale = kernel_lattice_basis(A).gale_rows()
    return _assemble(A, gale, parts, free_vectors)


def canonical_stable_decomposition(A) -> BouquetDecomposition:
    """Split each mixed bouquet into its positive and negative halves."""
    A = as_matrix(A)
    gale = kernel_lattice_basis(A).gale_rows()
    dec = compute_bouquets(A)
    parts = []
    for B in dec.bouquets:
        if B.is_mixed:
            parts.append([i for i in B.column_indices if B.c[i] > 0])
            parts.append([i for i in B.column_indices if B.c[i] < 0])
        else:
            parts.append(list(B.column_indices))
    return _assemble(A, gale, parts)


def is_stable(A) -> bool:
    return not any(B.is_mixed for B in compute_bouquets(A).bouquets)


def lift_vector(dec: BouquetDecomposition, u: Sequence[int]) -> Vector:
    """B(u) = sum_k u_k c_{B_k}."""
    if len(u) != len(dec.bouquets):
        raise ValueError(f"expected a vector of length {len(dec.bouquets)}, got {len(u)}")
    v = [0] * dec.source.cols
    for x, B in zip(u, dec.bouquets):
        if x:
            for i in B.column_indices:
                v[i] += x * B.c[i]
    return tuple(v)


def unlift_vector(dec: BouquetDecomposition, v: Sequence[int]) -> Vector:
    if len(v) != dec.source.cols:
        raise ValueError(f"expected a vector of length {dec.source.cols}, got {len(v)}")
    u = []
    for B in dec.bouquets:
        i0 = B.column_indices[0]
        t, r = divmod(v[i0], B.c[i0])
        if r or any(v[i] != t * B.c[i] for i in B.column_indices):
            raise NotInImage(f"not in image: vector is not a multiple of c on columns "
                             f"{[i + 1 for i in B.column_indices]}")
        u.append(t)
    return tuple(u)


@dataclass(frozen=True)
class UnimodularCheck:
    uni_A: bool
    uni_AB: bool
    all_c_unit: bool

    @property
    def equivalence_holds(self) -> bool:
        return self.uni_A == (self.uni_AB and self.all_c_unit)


def check_unimodular_correspondence(A, cap: int | None = None, threads: int = 1) -> UnimodularCheck:
    A = as_matrix(A)
    kw = {"threads": threads}
    if cap is not None:
        kw["cap"] = cap
    dec = compute_bouquets(A)
    unit = all(abs(x) == 1 for B in dec.bouquets for x in B.c if x)
    return UnimodularCheck(is_unimodular(A, **kw), is_unimodular(dec.bouquet_matrix, **kw), unit)
