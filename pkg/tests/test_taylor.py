from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from momentangle.complex import CapExceeded, Complex, popcount
from momentangle.constructions import catalog, path, polygon
from momentangle.hochster import bigraded_betti
from momentangle.linalg import GF2, GF3, QQ
from momentangle.ring import BHRing, graded_power_dims
from momentangle.taylor import TaylorComplex, build_taylor, taylor_power_dims, taylor_product, tor_dims_via_taylor

from _support import complexes


def test_triangle_boundary_complex():
    T = build_taylor(catalog("simplex_boundary(2)"), GF2)
    assert T.size == 2
    assert all(not np.any(T.differential(J, q)) for J, b in T.blocks.items() for q in b.basis if q - 1 in b.basis)


def test_square_has_zero_differential():
    T = build_taylor(polygon(4), GF3)
    assert T.size == 4
    for J, blk in T.blocks.items():
        for q in blk.basis:
            if q - 1 in blk.basis:
                assert not np.any(T.differential(J, q))
    counts = {}
    for J, blk in T.blocks.items():
        for q, us in blk.basis.items():
            counts[q] = counts.get(q, 0) + len(us)
    assert counts == {0: 1, 1: 2, 2: 1}


def test_path_three_vertices():
    K = path(3)
    assert K.missing_faces == (0b101,)
    t = tor_dims_via_taylor(K, GF2)
    assert t.nonzero() == {(0, 0): 1, (1, 2): 1}


def test_nonzero_differential_is_exercised():
    # path 1-2-3-4: missing faces 13, 14, 24; u = {13, 24} and {13, 14, 24} share support
    T = build_taylor(path(4), GF3)
    assert any(np.any(T.differential(J, q)) for J, b in T.blocks.items() for q in b.basis if q - 1 in b.basis)


def test_square_and_octahedron_tables():
    assert tor_dims_via_taylor(polygon(4)).nonzero() == bigraded_betti(polygon(4)).nonzero()
    t = tor_dims_via_taylor(catalog("O6"), GF2)
    assert t.nonzero() == {(0, 0): 1, (1, 2): 3, (2, 4): 3, (3, 6): 1}
    assert tor_dims_via_taylor(polygon(5)).nonzero() == bigraded_betti(polygon(5)).nonzero()


def test_taylor_cap():
    with pytest.raises(CapExceeded):
        TaylorComplex(catalog("I12"), GF2, mode="taylor")
    T = TaylorComplex(catalog("I12"), GF2, mode="auto")
    assert T.mode == "lyubeznik"


def test_products_on_square_and_octahedron():
    T = build_taylor(polygon(4), GF2)
    a = (0b0101, 1, np.array([1]))
    b = (0b1010, 1, np.array([1]))
    J, q, c = taylor_product(T, a, b)
    assert (J, q) == (0b1111, 2) and c.tolist() == [1]
    assert not np.any(taylor_product(T, a, a)[2])
    T = build_taylor(catalog("O6"), GF3)
    gens = [(w, 1, np.array([1])) for w in catalog("O6").missing_faces]
    x = taylor_product(T, taylor_product(T, gens[0], gens[1]), gens[2])
    assert x[0] == 0b111111 and np.any(x[2])


def test_product_requires_full_complex():
    T = TaylorComplex(polygon(4), GF2, mode="lyubeznik")
    with pytest.raises(ValueError):
        T.product(0b0101, 1, np.array([1]), 0b1010, 1, np.array([1]))


@settings(max_examples=50, deadline=None)
@given(complexes(max_m=7))
def test_d_squared_and_rank_agreement(K):
    if len(K.missing_faces) > 12:
        return
    for f in (GF2, GF3):
        T = TaylorComplex(K, f)
        assert T.check_d_squared()
        L = TaylorComplex(K, f, mode="lyubeznik")
        assert T.tor_table(True).multigraded == L.tor_table(True).multigraded
        assert T.tor_table().nonzero() == bigraded_betti(K, f).nonzero()


@settings(max_examples=30, deadline=None)
@given(complexes(max_m=7))
def test_degree_one_counts_missing_faces(K):
    t = tor_dims_via_taylor(K, GF2)
    by_size = {}
    for w in K.missing_faces:
        by_size[popcount(w)] = by_size.get(popcount(w), 0) + 1
    assert {j: v for (i, j), v in t.nonzero().items() if i == 1} == by_size


@pytest.mark.parametrize("name", ["c(4)", "c(5)", "c(6)", "O6", "b(6)", "b(7)", "path(4)", "simplex_boundary(3)"])
def test_power_filtration_agrees_with_bhr(name):
    K = catalog(name)
    for f in (GF2, GF3):
        assert taylor_power_dims(build_taylor(K, f)) == graded_power_dims(BHRing(K, f)).dims


@settings(max_examples=30, deadline=None)
@given(complexes(max_m=7))
def test_sparse_ranks_match_dense_elimination(K):
    from momentangle.linalg import rank

    if len(K.missing_faces) > 11:
        return
    T = TaylorComplex(K, GF3)
    for J, blk in T.blocks.items():
        sparse = T._sparse_ranks(J)
        for q in blk.basis:
            dense = rank(T.differential(J, q), GF3) if q - 1 in blk.basis else 0
            assert sparse[q] == dense
