from __future__ import annotations

from math import factorial

import numpy as np
import pytest

from momentangle.complex import Complex, ComplexError, are_isomorphic, bits, popcount, simplex, to_mask
from momentangle.constructions import (
    PolytopeBoundary,
    PuzzleMoveSpec,
    barycentric_subdivision,
    catalog,
    construct_ep,
    dual_complex,
    flag_puzzle_candidates,
    induced_four_circuits,
    polygon,
    puzzle_move,
    square_disk_sphere,
    xi1,
    xi2,
)
from momentangle.hochster import bigraded_betti
from momentangle.homology import is_generalized_homology_sphere
from momentangle.linalg import GF2
from momentangle.properties import class_q_membership, is_flag, is_gorenstein_star
from momentangle.ring import fingerprint


def test_catalog_examples():
    assert catalog("polygon(4)") == polygon(4)
    assert are_isomorphic(catalog("b(6)"), catalog("O6"))[0]
    assert catalog("I12").f_vector == (12, 30, 20)
    assert isinstance(catalog("C8"), PolytopeBoundary)
    with pytest.raises(ComplexError):
        catalog("nonsense")


def test_barycentric_examples():
    K, faces = barycentric_subdivision(catalog("simplex_boundary(2)"))
    assert are_isomorphic(K, polygon(6))[0]
    K, faces = barycentric_subdivision(simplex(1))
    assert are_isomorphic(K, catalog("path(3)"))[0]
    K, faces = barycentric_subdivision(catalog("simplex_boundary(3)"))
    assert K.m == 14 and len(faces) == 14
    assert len(K.facets) == factorial(3) * 4
    assert class_q_membership(K)


def test_barycentric_faces_label_vertices():
    T = catalog("simplex_boundary(3)")
    K, faces = barycentric_subdivision(T)
    for f in K.facets:
        chain = sorted((faces[v] for v in bits(f)), key=popcount)
        assert all(a & b == a for a, b in zip(chain, chain[1:]))


@pytest.mark.parametrize("name", ["O6", "I12", "simplex_boundary(3)"])
def test_barycentric_of_spheres_are_flag_spheres(name):
    K, _ = barycentric_subdivision(catalog(name))
    assert is_flag(K) and is_generalized_homology_sphere(K, GF2)
    assert len(K.facets) == 6 * len(catalog(name).facets)


def test_xi_vertex_counts():
    C8, D20 = catalog("C8"), catalog("D20")
    assert xi1(C8).m == 14
    assert xi2(C8).m == 26
    assert xi1(D20).m == 32
    assert xi2(D20).m == 62


@pytest.mark.parametrize("lattice", ["C8", "D20", "tetrahedron"])
def test_xi_outputs_are_flag_spheres_in_q(lattice):
    G = catalog(lattice)
    assert is_flag(xi2(G)) and is_generalized_homology_sphere(xi2(G), GF2)
    assert class_q_membership(xi2(G))
    X = xi1(G)
    assert is_generalized_homology_sphere(X, GF2)
    if lattice == "tetrahedron":
        assert not is_flag(X)  # the boundary of each triangular face is an empty triangle
    else:
        assert is_flag(X) and class_q_membership(X)


def test_dual_complex_of_cube_is_octahedron():
    assert are_isomorphic(dual_complex(catalog("C8")), catalog("O6"))[0]
    assert are_isomorphic(dual_complex(catalog("D20")), catalog("I12"))[0]


def test_ep_of_icosahedron():
    P = catalog("I12")
    E = construct_ep(P)
    assert E.m == 46 == 2 * P.m + len(P.facets) + 2
    assert E.f_vector == (46, 246, 400, 200)
    assert is_flag(E) and is_generalized_homology_sphere(E, GF2)


def test_ep_of_octahedron_is_still_a_sphere():
    P = catalog("O6")
    E = construct_ep(P)
    assert E.m == 2 * 6 + 8 + 2
    assert is_generalized_homology_sphere(E, GF2)


def test_ep_refuses_higher_dimensions():
    with pytest.raises(ComplexError):
        construct_ep(catalog("simplex_boundary(4)"))


def _b8_spec(K):
    # apexes 6, 7 span Γ; equator vertices 0 and 3 are swapped
    return PuzzleMoveSpec(K, (0, 3), (6, 7), {0: 3, 3: 0})


def test_puzzle_identity_is_trivial():
    K = catalog("b(8)")
    out = puzzle_move(PuzzleMoveSpec(K, (0, 3), (6, 7), {0: 0, 3: 3}))
    assert out == K


def test_puzzle_on_b8_preserves_betti_table():
    K = catalog("b(8)")
    out = puzzle_move(_b8_spec(K))
    assert is_generalized_homology_sphere(out, GF2) and is_flag(out)
    assert bigraded_betti(out).nonzero() == bigraded_betti(K).nonzero()
    assert fingerprint(out) == fingerprint(K)


def test_puzzle_along_a_vertex_link_gives_the_same_sphere():
    X = xi1(catalog("C8"))
    c = next(v for v in range(X.m) if popcount(X.neighbors[v]) == 4)
    a, x, b, y = next(cyc for cyc in induced_four_circuits(X) if to_mask(cyc) == X.neighbors[c])
    out = puzzle_move(PuzzleMoveSpec(X, (a, b), (x, y), {a: b, b: a}))
    assert are_isomorphic(out, X)[0]


def test_puzzle_on_glued_disks():
    K = square_disk_sphere(2, 3)
    assert is_flag(K) and is_gorenstein_star(K)
    specs = flag_puzzle_candidates(K)
    assert specs
    for spec in specs:
        out = puzzle_move(spec)
        assert is_generalized_homology_sphere(out, GF2)
        assert fingerprint(out) == fingerprint(K)


def test_puzzle_rejects_bad_specs():
    K = catalog("b(8)")
    with pytest.raises(ComplexError):
        puzzle_move(PuzzleMoveSpec(K, (0, 3), (6, 7), {0: 6, 3: 0}))
    with pytest.raises(ComplexError):
        puzzle_move(PuzzleMoveSpec(K, (0, 2), (1, 7), {0: 2, 2: 0}))
