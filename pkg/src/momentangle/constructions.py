"""Catalog complexes and sphere constructions.

Includes the Platonic boundary spheres, bipyramids, barycentric subdivision,
the face-coning constructions ``xi1``/``xi2`` on 3-polytope face lattices, the
doubling construction ``construct_ep`` that produces flag 3-spheres from flag
2-spheres, and puzzle-moves along separating spheres of the form ∂Δ^k * Γ.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field

from .complex import (
    Complex,
    ComplexError,
    bits,
    join,
    popcount,
    simplex,
    simplex_boundary,
    suspension,
    to_mask,
)


# basic families ---------------------------------------------------------

def polygon(n: int) -> Complex:
    """Boundary of an n-gon (the n-circuit), n >= 3."""
    if n < 3:
        raise ComplexError("a polygon needs at least 3 vertices")
    return Complex.from_facets([[i, (i + 1) % n] for i in range(n)])


def path(n: int) -> Complex:
    """Path graph on n vertices."""
    if n < 1:
        raise ComplexError("a path needs at least one vertex")
    if n == 1:
        return simplex(0)
    return Complex.from_facets([[i, i + 1] for i in range(n - 1)])


def bipyramid(n: int) -> Complex:
    """B_n: suspension of the (n-2)-gon; the apexes are the last two vertices."""
    if n < 5:
        raise ComplexError("B_n needs n >= 5")
    return suspension(polygon(n - 2))


def octahedron() -> Complex:
    """O6 as the triple join of S^0; missing pairs {0,1}, {2,3}, {4,5}."""
    s0 = simplex_boundary(1)
    return join(join(s0, s0), s0)


def icosahedron() -> Complex:
    """I12: apex 0, upper ring 1..5, lower ring 6..10, bottom 11."""
    tris = []
    for i in range(5):
        u, u1 = 1 + i, 1 + (i + 1) % 5
        lo, lo1 = 6 + i, 6 + (i + 1) % 5
        tris += [(0, u, u1), (11, lo, lo1), (u, u1, lo), (lo, lo1, u1)]
    K = Complex.from_facets(tris)
    if K.f_vector != (12, 30, 20):
        raise AssertionError("icosahedron facet list is inconsistent")
    return K


# 3-polytope face lattices ----------------------------------------------

@dataclass(frozen=True)
class PolytopeBoundary:
    """Boundary of a 3-polytope: vertices 0..n-1 and cyclically ordered faces."""

    n_vertices: int
    faces: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...] = dc_field(init=False)

    def __post_init__(self):
        edge_faces: dict[tuple[int, int], list[int]] = {}
        for fi, face in enumerate(self.faces):
            if len(face) < 3 or len(set(face)) != len(face):
                raise ComplexError(f"face {face} is not a cycle")
            for a, b in zip(face, face[1:] + face[:1]):
                if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                    raise ComplexError(f"face {face} uses an unknown vertex")
                edge_faces.setdefault((min(a, b), max(a, b)), []).append(fi)
        for e, fs in edge_faces.items():
            if len(fs) != 2:
                raise ComplexError(f"edge {e} lies in {len(fs)} faces, expected 2")
        v, e, f = self.n_vertices, len(edge_faces), len(self.faces)
        if v - e + f != 2:
            raise ComplexError(f"Euler relation fails: V - E + F = {v - e + f}")
        object.__setattr__(self, "edges", tuple(sorted(edge_faces)))

    def edge_faces(self) -> dict[tuple[int, int], tuple[int, int]]:
        out: dict[tuple[int, int], list[int]] = {}
        for fi, face in enumerate(self.faces):
            for a, b in zip(face, face[1:] + face[:1]):
                out.setdefault((min(a, b), max(a, b)), []).append(fi)
        return {e: (fs[0], fs[1]) for e, fs in out.items()}


def vertex_cycle(K: Complex, v: int) -> list[int]:
    """Facets around vertex v of a simplicial 2-sphere, in cyclic order."""
    around = [f for f in K.facets if f >> v & 1]
    order = [around[0]]
    used = {around[0]}
    while len(order) < len(around):
        last = order[-1]
        nxt = [g for g in around if g not in used and popcount(g & last) == 2]
        if not nxt:
            raise ComplexError(f"the link of vertex {v} is not a cycle")
        order.append(nxt[0])
        used.add(nxt[0])
    return order


def dual_lattice(K: Complex) -> PolytopeBoundary:
    """Face lattice of the simple polytope dual to a simplicial 2-sphere."""
    if K.dim != 2:
        raise ComplexError("dual lattice needs a 2-dimensional sphere")
    index = {f: i for i, f in enumerate(K.facets)}
    faces = tuple(tuple(index[f] for f in vertex_cycle(K, v)) for v in range(K.m))
    return PolytopeBoundary(len(K.facets), faces)


def lattice_to_complex(G: PolytopeBoundary) -> Complex:
    """The boundary complex when every face is a triangle."""
    if any(len(f) != 3 for f in G.faces):
        raise ComplexError("not a simplicial polytope")
    return Complex(G.n_vertices, [to_mask(f) for f in G.faces])


def dual_complex(G: PolytopeBoundary) -> Complex:
    """Simplicial sphere dual to a simple polytope: one vertex per face."""
    return Complex(len(G.faces), [to_mask(i for i, f in enumerate(G.faces) if v in f) for v in range(G.n_vertices)])


def cube_lattice() -> PolytopeBoundary:
    return dual_lattice(octahedron())


def dodecahedron_lattice() -> PolytopeBoundary:
    return dual_lattice(icosahedron())


def tetrahedron_lattice() -> PolytopeBoundary:
    return dual_lattice(simplex_boundary(3))


def xi1(G: PolytopeBoundary) -> Complex:
    """Cone every face over its boundary; face centres get labels n, n+1, ..."""
    n = G.n_vertices
    tris = []
    for fi, face in enumerate(G.faces):
        c = n + fi
        for a, b in zip(face, face[1:] + face[:1]):
            tris.append((c, a, b))
    return Complex.from_facets(tris, n + len(G.faces))


def xi2(G: PolytopeBoundary) -> Complex:
    """xi1 followed by a stellar subdivision at every original edge."""
    n, nf = G.n_vertices, len(G.faces)
    ef = G.edge_faces()
    tris = []
    for e_idx, (e, (f, g)) in enumerate(sorted(ef.items())):
        w = n + nf + e_idx
        a, b = e
        for c in (n + f, n + g):
            tris += [(w, c, a), (w, c, b)]
    return Complex.from_facets(tris, n + nf + len(ef))


# barycentric subdivision ----------------------------------------------

def barycentric_subdivision(K: Complex) -> tuple[Complex, tuple[int, ...]]:
    """Order complex of the nonempty faces; also returns vertex -> face mask."""
    faces = [f for f in K.faces() if f]
    index = {f: i for i, f in enumerate(faces)}
    chains = set()
    for top in K.facets:
        for perm in itertools.permutations(bits(top)):
            acc, chain = 0, 0
            for v in perm:
                acc |= 1 << v
                chain |= 1 << index[acc]
            chains.add(chain)
    return Complex(len(faces), chains), tuple(faces)


# catalog ---------------------------------------------------------------

_PARAM = re.compile(r"^\s*([a-z_0-9]+)\s*(?:\(\s*(-?\d+)\s*\)|:(-?\d+))?\s*$")


def catalog(name: str):
    """Named complexes; lattices (``C8``, ``D20``, ...) return a PolytopeBoundary."""
    mt = _PARAM.match(name.lower())
    if not mt:
        raise ComplexError(f"unknown catalog name {name!r}")
    key, arg = mt.group(1), mt.group(2) or mt.group(3)
    n = int(arg) if arg is not None else None
    fixed = {
        "t4": lambda: simplex_boundary(3),
        "o6": octahedron,
        "octahedron": octahedron,
        "i12": icosahedron,
        "icosahedron": icosahedron,
        "point": lambda: simplex(0),
        "c8": cube_lattice,
        "c8_lattice": cube_lattice,
        "cube": cube_lattice,
        "d20": dodecahedron_lattice,
        "d20_lattice": dodecahedron_lattice,
        "dodecahedron": dodecahedron_lattice,
        "tetrahedron": tetrahedron_lattice,
    }
    para = {
        "simplex_boundary": simplex_boundary,
        "polygon": polygon,
        "c": polygon,
        "b": bipyramid,
        "path": path,
        "simplex": simplex,
    }
    if key in fixed and n is None:
        return fixed[key]()
    if key in para and n is not None:
        return para[key](n)
    raise ComplexError(f"unknown catalog name {name!r}")


# doubling construction -------------------------------------------------

def construct_ep(boundary: Complex) -> Complex:
    """Flag 3-sphere built from two copies of a simplicial 2-sphere ∂P.

    The middle layer uses T = the graph of the dual simple polytope.  Vertex
    labels: v_i = i, v_i' = m + i, facet vertices 2m .. 2m+f-1, then u, u'.
    """
    K = boundary
    if K.dim != 2 or not K.is_pure:
        raise ComplexError("construct_ep supports 2-dimensional ∂P only; higher T must be supplied")
    m = K.m
    tri = K.facets
    nf = len(tri)
    F = {f: 2 * m + i for i, f in enumerate(tri)}
    u, u2 = 2 * m + nf, 2 * m + nf + 1

    def shift(sigma: int) -> int:
        return sigma << m

    def L_of(sigma: int) -> list[int]:
        # induced subgraph of T on the facets containing sigma, as simplices
        verts = [F[f] for f in tri if f & sigma == sigma]
        vs = set(verts)
        out = []
        if len(verts) == 1:
            return [1 << verts[0]]
        for f, g in itertools.combinations([f for f in tri if f & sigma == sigma], 2):
            if popcount(f & g) == 2:
                out.append(1 << F[f] | 1 << F[g])
        assert all(bits(e)[0] in vs for e in out)
        return out

    facets = []
    for i in range(m):
        for e in L_of(1 << i):
            facets.append(e | 1 << i | 1 << (m + i))
    for layer in (K.faces(2), K.faces(3)):
        for sigma in layer:
            for t in L_of(sigma):
                facets.append(sigma | t)
                facets.append(shift(sigma) | t)
    for f in tri:
        facets.append(f | 1 << u)
        facets.append(shift(f) | 1 << u2)
    return Complex(2 * m + nf + 2, facets)


# puzzle-moves ----------------------------------------------------------

@dataclass
class PuzzleMoveSpec:
    """Cut K along L = ∂Δ^k * Γ and reglue one side by phi.

    ``boundary_vertices`` spans the ∂Δ^k factor, ``gamma`` is the vertex set of
    Γ, and ``phi`` permutes ``boundary_vertices`` (vertices of Γ stay fixed).
    """

    K: Complex
    boundary_vertices: tuple[int, ...]
    gamma: tuple[int, ...]
    phi: dict[int, int]


def _split_along(K: Complex, L_faces: set[int]) -> list[list[int]]:
    ridges: dict[int, list[int]] = {}
    for i, f in enumerate(K.facets):
        for v in bits(f):
            r = f & ~(1 << v)
            if r not in L_faces:
                ridges.setdefault(r, []).append(i)
    parent = list(range(len(K.facets)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ids in ridges.values():
        for j in ids[1:]:
            parent[find(j)] = find(ids[0])
    comps: dict[int, list[int]] = {}
    for i in range(len(K.facets)):
        comps.setdefault(find(i), []).append(i)
    return sorted(comps.values())


def puzzle_move(spec: PuzzleMoveSpec) -> Complex:
    K = spec.K
    A = to_mask(spec.boundary_vertices)
    G = to_mask(spec.gamma)
    if A & G:
        raise ComplexError("the ∂Δ^k part and Γ must be disjoint")
    if sorted(spec.phi) != sorted(spec.boundary_vertices) or sorted(spec.phi.values()) != sorted(spec.boundary_vertices):
        raise ComplexError("phi must permute the ∂Δ^k vertices")
    if popcount(A) < 2:
        raise ComplexError("∂Δ^k needs at least two vertices")
    L_faces = {f for f in K.faces() if f & (A | G) == f}
    want = set()
    gamma_faces = [f for f in K.faces() if f & G == f]
    for a in range(1, 1 << popcount(A)):
        if a == (1 << popcount(A)) - 1:
            continue
        aa = to_mask(bits(A)[k] for k in range(popcount(A)) if a >> k & 1)
        for g in gamma_faces:
            want.add(aa | g)
    want |= set(gamma_faces)
    if L_faces != want:
        raise ComplexError("the full subcomplex on the given vertices is not ∂Δ^k * Γ")
    if max(popcount(f) for f in L_faces) != K.dim:
        raise ComplexError("L must have codimension one")
    comps = _split_along(K, L_faces)
    if len(comps) != 2:
        raise ComplexError(f"L does not separate K into two pieces ({len(comps)} components)")
    minus = set(comps[1])
    new = []
    for i, f in enumerate(K.facets):
        if i in minus:
            f = to_mask(spec.phi.get(v, v) for v in bits(f))
        new.append(f)
    return Complex(K.m, new)


def induced_four_circuits(K: Complex) -> list[tuple[int, int, int, int]]:
    """Induced 4-cycles (a, x, b, y) with a < b, x < y and {a,b}, {x,y} missing."""
    nb = K.neighbors
    out = set()
    for a in range(K.m):
        for b in range(a + 1, K.m):
            if nb[a] >> b & 1:
                continue
            common = bits(nb[a] & nb[b])
            for x, y in itertools.combinations(common, 2):
                if not nb[x] >> y & 1:
                    cyc = min((a, x, b, y), (x, a, y, b))
                    out.add(cyc)
    return sorted(out)


def flag_puzzle_candidates(K: Complex) -> list[PuzzleMoveSpec]:
    """For a flag 2-sphere: every induced 4-circuit with each missing pair swapped."""
    out = []
    for a, x, b, y in induced_four_circuits(K):
        out.append(PuzzleMoveSpec(K, (a, b), (x, y), {a: b, b: a}))
        out.append(PuzzleMoveSpec(K, (x, y), (a, b), {x: y, y: x}))
    return out


def square_disk_sphere(k: int, l: int) -> Complex:
    """Flag 2-sphere glued from two disks along the square a-x-b-y.

    One disk carries an interior path of k vertices running from x to y, the
    other an interior path of l vertices running from a to b.
    """
    if k < 1 or l < 1:
        raise ComplexError("both disks need an interior vertex")
    a, x, b, y = 0, 1, 2, 3
    p = list(range(4, 4 + k))
    q = list(range(4 + k, 4 + k + l))
    tris = []
    chain = [x] + p + [y]
    for s, t in zip(chain, chain[1:]):
        tris += [(s, t, a), (s, t, b)]
    chain = [a] + q + [b]
    for s, t in zip(chain, chain[1:]):
        tris += [(s, t, x), (s, t, y)]
    return Complex.from_facets(tris, 4 + k + l)
