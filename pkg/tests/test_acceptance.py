"""Acceptance criteria, one function each.

Run under pytest, or directly with ``python3 tests/test_acceptance.py`` to
get one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import random
import sys
import time

import pytest

from toricbouquet import bouquets, constructors, core
from toricbouquet.bases import (NotStable, check_stable_transport, circuits, classify_lawrence,
                                graver_basis, graver_oracle, indispensable_binomials,
                                minimal_markov_basis)
from toricbouquet.bouquets import Kind, compute_bouquets, lift_vector, unlift_vector
from toricbouquet.hypergraphs import Hypergraph, incidence_matrix

# shared data

EX_FOUR_BOUQUETS = [
    [1, 1, 1, 0, 0, 0, 0],
    [1, 0, 0, 1, 1, 0, 0],
    [0, 1, 0, 1, 0, 1, 0],
    [0, 0, 1, 0, 1, 1, 0],
    [0, 0, 0, 0, 0, 0, 3],
]

EX_MIXED_SPLIT = [
    [3, 0, 0, 0, 4, 5, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 1, 0, 1, 0],
    [-1, 1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, -1, 1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, -1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, -1, 1],
]

# hypergraph on x, v1..v14 (x = vertex 1) plus a column (5, 0, ..., 0)
SUNFLOWER_EDGES = [[0, 1, 2], [0, 3, 4], [0, 5, 6], [1, 3, 5], [2, 4, 6], [0, 7, 8], [0, 9, 10],
                   [0, 11, 12], [0, 13, 14], [7, 8, 9], [10, 11, 13], [12, 14]]

GRAPH_EDGES = [(1, 2), (2, 3), (3, 4), (1, 4), (1, 3), (1, 5), (5, 6), (6, 7), (1, 7), (1, 6),
               (1, 8), (8, 9), (9, 10), (1, 10), (1, 9)]

ENCODING_D = [[1, 3, 2, 0, 1], [3, 2, 1, 3, 2], [3, 0, 2, 2, 1]]

ENCODING_ROWS = """
100001111100000100
100010111100000100
100011011100000100
100011101100000100
100011100110000100
100011101010000100
100011101100000100
011111001001110110
101111001001110110
110111001001110110
111011001001110110
111011001000111110
111011001001011110
111011001001101110
111011001001110110
111011001001110011
111011001001110101
111011001001110110
111000001101100100
""".split()


def sunflower_matrix() -> core.IntMatrix:
    H = Hypergraph(15, tuple(tuple(v + 1 for v in e) for e in SUNFLOWER_EDGES))
    rows = [list(r) + [5 if k == 0 else 0] for k, r in enumerate(incidence_matrix(H).data)]
    return core.IntMatrix.from_rows(rows)


def graph_matrix() -> core.IntMatrix:
    return incidence_matrix(Hypergraph(10, tuple(GRAPH_EDGES)))


# criteria

def criterion_1():
    A = core.IntMatrix.from_rows(EX_FOUR_BOUQUETS)
    dec = compute_bouquets(A)
    assert [tuple(i + 1 for i in b.column_indices) for b in dec.bouquets] == [(1, 6), (2, 5), (3, 4), (7,)]
    assert [b.kind for b in dec.bouquets] == [Kind.NON_MIXED] * 3 + [Kind.FREE]
    assert dec.bouquets[0].c == (1, 0, 0, 0, 0, 1, 0)
    assert all(b.a == (1, 1, 1, 1, 0) for b in dec.bouquets[:3])
    grB = graver_basis(dec.bouquet_matrix)
    assert set(grB) == {(1, -1, 0, 0), (0, 1, -1, 0), (1, 0, -1, 0)}
    gr = graver_basis(A)
    expected = {(1, -1, 0, 0, -1, 1, 0), (0, 1, -1, -1, 1, 0, 0), (1, 0, -1, -1, 0, 1, 0)}
    assert set(gr) == expected and set(circuits(A, gr)) == expected
    return "bouquets, c, a, Gr(A_B) and Gr(A) = C(A) exact"


def criterion_2():
    A = [[3, 4, 5]]
    gr = graver_basis(A)
    assert set(gr) == {(1, -2, 1), (3, -1, -1), (2, 1, -2), (4, -3, 0), (1, 3, -3), (5, 0, -3), (0, 5, -4)}
    assert set(circuits(A, gr)) == {(4, -3, 0), (5, 0, -3), (0, 5, -4)}
    ind = set(indispensable_binomials(A, gr))
    assert ind == {(3, -1, -1), (1, -2, 1), (2, 1, -2)}
    # independent oracle: fibers of u+ by plain enumeration of the simplex 3x+4y+5z = d
    for u in gr:
        up = core.positive_part(u)
        d = 3 * up[0] + 4 * up[1] + 5 * up[2]
        fiber = [(x, y, z) for x in range(d // 3 + 1) for y in range(d // 4 + 1) for z in range(d // 5 + 1)
                 if 3 * x + 4 * y + 5 * z == d]
        assert (len(fiber) == 2) == (u in ind)
    assert len(minimal_markov_basis(A, gr)) == 3
    return "7 Graver, 3 circuits, 3 indispensable (fiber oracle), Markov 3"


def criterion_3():
    A = core.IntMatrix.from_rows(EX_MIXED_SPLIT)
    assert len(minimal_markov_basis(A)) == 6
    dec = compute_bouquets(A)
    assert len(minimal_markov_basis(dec.bouquet_matrix)) == 3
    stable = bouquets.canonical_stable_decomposition(A)
    assert [tuple(i + 1 for i in b.column_indices) for b in stable.bouquets] == \
        [(1, 2), (3, 4), (5,), (6, 7), (8, 9)]
    assert [b.c for b in stable.bouquets] == [
        (1, 1, 0, 0, 0, 0, 0, 0, 0), (0, 0, 1, 1, 0, 0, 0, 0, 0), (0, 0, 0, 0, 1, 0, 0, 0, 0),
        (0, 0, 0, 0, 0, 1, 1, 0, 0), (0, 0, 0, 0, 0, 0, 0, 1, 1)]
    expected = [[3, 0, 4, 5, 0], [1, 1, 0, 0, 0], [0, 0, 0, 1, 1]] + [[0] * 5] * 4
    assert stable.bouquet_matrix.tolist() == expected
    return "Markov 6 vs 3, five subbouquets, A'_B 7x5 exact"


def _random_small(rng, rows, cols, lo, hi):
    while True:
        D = [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]
        if all(any(D[k][j] for k in range(rows)) for j in range(cols)):
            return D


def criterion_4():
    A = sunflower_matrix()
    rep = classify_lawrence(A)
    assert (rep.cond_a, rep.cond_b, rep.cond_c) == (False, False, False)
    assert rep.S == (0, 1)
    assert compute_bouquets(A).bouquet_matrix.tolist()[0] == [3, 4, 5]
    assert rep.witness == ((4, -3, 0), (3, -1, -1), (1, -2, 1))
    G = graph_matrix()
    rep = classify_lawrence(G)
    assert (rep.cond_a, rep.cond_b, rep.cond_c) == (True, True, True)
    assert len(graver_basis(compute_bouquets(G).bouquet_matrix)) == 15
    rng = random.Random(7)
    for _ in range(5):
        D = _random_small(rng, 2, 3, -2, 2)
        rep = classify_lawrence(constructors.second_lawrence(D))
        assert (rep.cond_a, rep.cond_b, rep.cond_c) == (True, True, True), D
    return "sunflower example all false with witness; graph all true, |Gr(A_B)| = 15; 5 second liftings all true"


def criterion_5():
    A = [[-1, -1, 2, 2], [-2, 2, -1, 0]]
    H = constructors.hypergraph_from_matrix(A)
    assert (H.vertex_count, H.edge_count) == (28, 26)
    M = incidence_matrix(H)
    dec = bouquets.subbouquet_decomposition(M, H.blocks)
    pad = (0,) * 26
    assert [b.a for b in dec.bouquets] == [(-1, -2) + pad, (-1, 2) + pad, (2, -1) + pad, (2, 0) + pad]
    grA, grH = graver_basis(A), graver_basis(M)
    assert len(grA) == len(grH) == 7
    lifted = lift_vector(dec, (1, 3, 4, -2))
    expected = (1, -1, 1, 1, -2, -1, -1, -1, 3, -3, 3, 3, -3, -3, -3, 4, 4, 4, -4, -4, -4, -4,
                -2, -2, 2, 2)
    assert lifted == expected
    # flipping the sign of the last block leaves the kernel
    flipped = expected[:22] + (2, 2, -2, -2)
    assert any(M.apply(flipped)) and not any(M.apply(lifted))
    assert {core.canonical(lift_vector(dec, u)) for u in grA} == set(grH)
    assert classify_lawrence(M).cond_b is True
    return "28 vertices, 26 edges, four a-vectors, |Gr| = 7 both sides, lift exact, cond_b true"


def criterion_6():
    E = constructors.encode01_stable(ENCODING_D)
    assert ["".join(map(str, r)) for r in E.data] == ENCODING_ROWS
    assert bouquets.is_stable(E)
    dec = compute_bouquets(E)
    D = core.IntMatrix.from_rows(ENCODING_D)
    assert core.enumerate_bounded_kernel(dec.bouquet_matrix, 6) == core.enumerate_bounded_kernel(D, 6)
    grD, grE = graver_basis(D), graver_basis(E)
    counts = {
        "graver": (len(grD), len(grE)),
        "circuits": (len(circuits(D, grD)), len(circuits(E, grE))),
        "indispensable": (len(indispensable_binomials(D, grD)), len(indispensable_binomials(E, grE))),
        "markov": (len(minimal_markov_basis(D, grD)), len(minimal_markov_basis(E, grE))),
    }
    assert all(a == b for a, b in counts.values()), counts
    return "19x18 bit-exact, stable, kernels equal to bound 6, counts " + \
        ", ".join(f"{k}={v[0]}" for k, v in counts.items())


def random_suite_instances(count=200, seed=2024):
    """Random matrices up to 4x6 with entries in [-3, 3] (kernel rank at most 3)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        m = rng.randint(1, 4)
        n = rng.randint(max(2, m + 1), min(6, m + 3))
        A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(m)]
        if any(map(any, A)):
            out.append(A)
    return out


def check_random_instance(A) -> dict:
    A = core.IntMatrix.from_rows(A)
    stats = {"conclusive": False, "stable": False}
    gr = graver_basis(A)
    K = gr.max_norm()
    # (i) Graver against bounded enumeration with the conformal-minimality filter
    rep = graver_oracle(A, K + 1, gr)
    assert rep.agree and rep.box_covers_graver, (A, rep)
    dec = compute_bouquets(A)
    AB = dec.bouquet_matrix
    # (ii) lift is a bijection Ker(A_B) -> Ker(A), checked on boxes
    for u in core.enumerate_bounded_kernel(AB, 2):
        v = lift_vector(dec, u)
        assert not any(A.apply(v)) and unlift_vector(dec, v) == u
    for v in core.enumerate_bounded_kernel(A, 2):
        assert lift_vector(dec, unlift_vector(dec, v)) == v
    # (iii) and (vi): transport of Graver, circuits, and for stable instances
    # indispensables, Markov counts and genericity
    try:
        check_stable_transport(A, dec)
        stats["stable"] = True
    except NotStable as exc:
        assert exc.report is not None and exc.report.graver[0] == len(gr)
    # (iv) unimodularity of A, A_B and unit encoding vectors
    assert bouquets.check_unimodular_correspondence(A).equivalence_holds
    # (v) the bouquet data (a_i, c_i) rebuilt by the generalized Lawrence construction
    spec = constructors.LawrenceSpec(
        [b.a for b in dec.bouquets],
        [tuple(b.c[i] for i in b.column_indices) for b in dec.bouquets])
    constructors.generalized_lawrence(spec, verify=True)
    # (vii) classify_lawrence raises TheoremViolation on a conclusive disagreement
    stats["conclusive"] = classify_lawrence(A).conclusive
    return stats


def criterion_7():
    instances = random_suite_instances()
    conclusive = stable = 0
    for A in instances:
        stats = check_random_instance(A)
        conclusive += stats["conclusive"]
        stable += stats["stable"]
    return f"{len(instances)} matrices, {stable} stable, {conclusive} conclusive, 0 failures"


def criterion_8():
    for d in (2, 3):
        H, w = constructors.build_complete_uniform_witness(d)
        assert H.vertex_count == (d + 1) ** 2 and H.edge_count == (d + 2) * (d + 1)
        M = incidence_matrix(H)
        assert not any(M.apply(w))
        dec = bouquets.subbouquet_decomposition(M, H.blocks)
        assert dec.bouquet_matrix.cols == 2 * (d + 1)
        u = unlift_vector(dec, w)
        assert u in graver_basis(dec.bouquet_matrix)
    return "H_3 and H_4 sizes, witness in Gr via the 2(d+1)-column bouquet matrix"


CRITERIA = [
    (1, "four-bouquet golden example", criterion_1),
    (2, "monomial curve (3 4 5)", criterion_2),
    (3, "mixed bouquets split into a stable decomposition", criterion_3),
    (4, "three Lawrence conditions agree", criterion_4),
    (5, "sunflower hypergraph of a 2x4 matrix", criterion_5),
    (6, "0/1 stable encoding", criterion_6),
    (7, "randomized property suite", criterion_7),
    (8, "complete uniform witness", criterion_8),
]

EXCLUDED = ("N/A criterion 9: resolutions, reduced and universal Groebner data and robustness classes "
            "are excluded; they enter only through the empty-set Lawrence equivalence of criterion 4")

RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn):
    try:
        detail = fn()
    except BaseException as exc:
        RESULTS[number] = (False, f"{type(exc).__name__}: {exc}"[:300])
        raise
    RESULTS[number] = (True, detail)


def main() -> int:
    failed = 0
    for number, title, fn in CRITERIA:
        start = time.time()
        try:
            detail, ok = fn(), True
        except Exception as exc:
            detail, ok = f"{type(exc).__name__}: {exc}"[:300], False
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail} [{time.time() - start:.1f}s]",
              flush=True)
    print(EXCLUDED)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
