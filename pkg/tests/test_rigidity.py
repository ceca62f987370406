import random
from fractions import Fraction

import numpy as np
import pytest

from linerig import (
    det_expansion_check,
    framework,
    infinitesimally_rigid,
    partitioned_graph,
    random_generic_framework,
    rigidity_matrix_full,
    rigidity_matrix_reduced,
)
from linerig.pgraph import components
from linerig.randgen import random_general_lines, random_graph, random_parallel_lines
from linerig.rigidity import (
    DegenerateEdge,
    MissingLine,
    NotUnicyclic,
    kernel_dimension,
    measurement,
    nullspace_exact,
    positions,
    rank_exact,
)

from _fixtures import FOUR_CYCLE, THETA, general_lines


def test_framework_factory_validation():
    ls = general_lines(2)
    with pytest.raises(MissingLine):
        framework(partitioned_graph(2, (0, 5), [(0, 1)]), ls, (0, 0))
    with pytest.raises(ValueError):
        framework(THETA, ls, (0, 0))  # wrong length
    fw = framework(THETA, ls, (1, 2, 3, 4))
    assert fw.exact and all(isinstance(t, Fraction) for t in fw.t)
    fl = framework(THETA, ls, (1.0, 2, 3, 4))
    assert not fl.exact and all(isinstance(t, float) for t in fl.t)


def test_positions_lie_on_the_assigned_lines():
    ls = general_lines(2, seed=8)
    fw = framework(THETA, ls, (1, -2, Fraction(3, 7), 0))
    for v, p in enumerate(positions(fw)):
        l = ls[THETA.part[v]]
        t = fw.t[v]
        assert p == tuple(b + t * u for b, u in zip(l.base, l.direction))


def test_matrix_shapes():
    ls = general_lines(2, seed=1)
    fw = framework(THETA, ls, (1, 2, 3, 4))
    d, n, m = 2, THETA.n, len(THETA.edges)
    full = rigidity_matrix_full(fw)
    assert len(full) == m + (d - 1) * n
    assert all(len(row) == d * n for row in full)
    red = rigidity_matrix_reduced(fw)
    assert len(red) == m and all(len(row) == n for row in red)


def test_full_and_reduced_kernels_match_on_random_instances():
    """dim ker R == dim ker R' (exact), 150 random instances."""
    rng = random.Random(4)
    for i in range(150):
        n = rng.randrange(1, 8)
        k = rng.randrange(1, 4)
        d = rng.choice((2, 3))
        g = random_graph(n, k, rng, require_crossing=False)
        ls = random_general_lines(k, d, rng)
        fw = random_generic_framework(g, ls, seed=i, mode="exact")
        full = kernel_dimension(rigidity_matrix_full(fw), mode="exact")
        reduced_rows = rigidity_matrix_reduced(fw)
        red = n if not reduced_rows else kernel_dimension(reduced_rows, mode="exact")
        assert full == red, (i, full, red)


def test_exact_rank_matches_float_svd_rank():
    """Generic rank is placement-independent: exact integer placement vs a
    float placement of modest size (the huge integer draws are too badly
    conditioned for a naive SVD threshold)."""
    rng = random.Random(5)
    for i in range(100):
        n = rng.randrange(2, 8)
        k = rng.randrange(1, 4)
        g = random_graph(n, k, rng, require_crossing=False)
        ls = random_general_lines(k, 2, rng)
        exact = rank_exact(rigidity_matrix_full(random_generic_framework(g, ls, seed=1000 + i, mode="exact")))
        rows = rigidity_matrix_full(random_generic_framework(g, ls, seed=1000 + i, mode="float"))
        arr = np.array([[float(x) for x in row] for row in rows])
        svals = np.linalg.svd(arr, compute_uv=False) if arr.size else np.array([])
        float_rank = int(np.sum(svals > 1e-8 * (svals[0] if svals.size else 1.0)))
        assert exact == float_rank


def test_nullspace_exact_annihilates():
    ls = general_lines(2, seed=2)
    fw = random_generic_framework(FOUR_CYCLE, ls, seed=0, mode="exact")
    rows = rigidity_matrix_full(fw)
    basis = nullspace_exact(rows, ncols=len(rows[0]))
    assert len(basis) == kernel_dimension(rows, mode="exact")
    for vec in basis:
        for row in rows:
            assert sum(a * b for a, b in zip(row, vec)) == 0


def test_rigidity_verdicts_on_fixtures():
    ls = general_lines(2, seed=3)
    assert infinitesimally_rigid(THETA, ls).rigid
    rep = infinitesimally_rigid(FOUR_CYCLE, ls)
    assert rep.rigid and rep.kernel_dim == 0  # C4 crossing two lines is rigid
    tree = partitioned_graph(3, (0, 1, 0), [(0, 1), (1, 2)])
    assert not infinitesimally_rigid(tree, ls).rigid


def test_parallel_regime_kernel_is_one_for_connected_graphs():
    rng = random.Random(6)
    ls = random_parallel_lines(2, 2, rng)
    path = partitioned_graph(3, (0, 1, 0), [(0, 1), (1, 2)])
    rep = infinitesimally_rigid(path, ls)
    assert rep.parallel_regime and rep.rigid and rep.kernel_dim == 1
    split = partitioned_graph(4, (0, 1, 0, 1), [(0, 1), (2, 3)])
    rep = infinitesimally_rigid(split, ls)
    assert rep.parallel_regime and not rep.rigid and rep.kernel_dim == 2


def test_parallel_regime_reduced_rank_is_graphic():
    """rank R' = n - #components over a single parallel class."""
    rng = random.Random(7)
    for i in range(30):
        k = 1 + rng.randrange(3)
        ls = random_parallel_lines(k, 2 + (i % 2), rng)
        n = 2 + rng.randrange(6)
        g = random_graph(n, k, rng, require_crossing=False)
        fw = random_generic_framework(g, ls, seed=i, mode="exact")
        assert rank_exact(rigidity_matrix_reduced(fw)) == n - len(components(g))


def test_measurement_and_degenerate_edges():
    ls = general_lines(2, seed=5)
    fw = framework(THETA, ls, (1, 2, 3, 4))
    m = measurement(fw)
    assert len(m) == len(THETA.edges) and all(x > 0 for x in m)
    # coincident endpoints: both endpoints at the two lines' intersection
    from linerig.linegeom import closest_pair, line_parameter

    x, _ = closest_pair(ls[0], ls[1])
    t0 = line_parameter(ls[0], x)
    t1 = line_parameter(ls[1], x)
    g = partitioned_graph(2, (0, 1), [(0, 1)])
    bad = framework(g, ls, (float(t0), float(t1)))
    with pytest.raises(DegenerateEdge):
        rigidity_matrix_reduced(bad)


def test_det_expansion_on_unicyclic_graphs():
    rng = random.Random(8)
    done = 0
    while done < 30:
        n = 3 + rng.randrange(5)
        verts = list(range(n))
        rng.shuffle(verts)
        edges = {tuple(sorted((verts[a], verts[rng.randrange(a)]))) for a in range(1, n)}
        u, v = rng.randrange(n), rng.randrange(n)
        if u == v or tuple(sorted((u, v))) in edges:
            continue
        edges.add(tuple(sorted((u, v))))
        k = 2 + rng.randrange(2)
        g = partitioned_graph(n, tuple(rng.randrange(k) for _ in range(n)), edges)
        ls = random_general_lines(k, 2, rng)
        fe = random_generic_framework(g, ls, seed=done, mode="exact")
        det_e, exp_e = det_expansion_check(fe, mode="exact")
        assert det_e == exp_e
        ff = random_generic_framework(g, ls, seed=done, mode="float")
        det_f, exp_f = det_expansion_check(ff, mode="float")
        assert abs(det_f - exp_f) <= 1e-8 * max(1.0, abs(det_f))
        done += 1


def test_det_expansion_rejects_non_unicyclic():
    ls = general_lines(2, seed=9)
    fw = random_generic_framework(THETA, ls, seed=0, mode="exact")
    with pytest.raises(NotUnicyclic):
        det_expansion_check(fw, mode="exact")
    tree = partitioned_graph(3, (0, 1, 0), [(0, 1), (1, 2)])
    with pytest.raises(NotUnicyclic):
        det_expansion_check(random_generic_framework(tree, ls, seed=0, mode="exact"))


def test_random_generic_framework_is_deterministic():
    ls = general_lines(2, seed=10)
    a = random_generic_framework(THETA, ls, seed=42, mode="exact")
    b = random_generic_framework(THETA, ls, seed=42, mode="exact")
    assert a.t == b.t
    c = random_generic_framework(THETA, ls, seed=43, mode="exact")
    assert a.t != c.t
