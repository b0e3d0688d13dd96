"""Finite abstract simplicial complexes stored as facet bitmasks.

Vertices are ``0 .. m-1`` and a face is an ``int`` whose bit ``i`` marks vertex
``i``.  The JSON interchange format uses 1-based vertex labels; conversion
happens only in :func:`Complex.from_json` / :meth:`Complex.to_json`.
"""
from __future__ import annotations

import itertools
import json
from functools import cached_property
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms import isomorphism as nx_iso


class ComplexError(ValueError):
    pass


class CapExceeded(RuntimeError):
    """A configured size cap would be exceeded; raise the cap to proceed."""


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        if v < 0:
            raise ComplexError(f"negative vertex index {v}")
        mask |= 1 << v
    return mask


def popcount(mask: int) -> int:
    return mask.bit_count()


def _maximal(masks: Iterable[int]) -> list[int]:
    uniq = sorted(set(masks), key=lambda f: (-popcount(f), f))
    out: list[int] = []
    for f in uniq:
        if not any(f & g == f for g in out):
            out.append(f)
    return out


def face_key(mask: int) -> tuple[int, tuple[int, ...]]:
    """Sort key: by cardinality, then lexicographically by sorted vertices."""
    return popcount(mask), tuple(bits(mask))


class Complex:
    """An immutable simplicial complex on vertices ``0 .. m-1``.

    Every vertex must lie in some facet.  The complex ``{∅}`` (``m == 0``) is
    allowed and stands for the full subcomplex on the empty set.
    """

    __slots__ = ("m", "facets", "__dict__")

    def __init__(self, m: int, facets: Iterable[int], *, check: bool = True):
        facets = list(facets)
        if not facets:
            facets = [0]
        if check:
            full = (1 << m) - 1
            for f in facets:
                if f < 0 or f & ~full:
                    raise ComplexError(f"facet {bits(f)} has a vertex outside 0..{m - 1}")
            cover = 0
            for f in facets:
                cover |= f
            if cover != full:
                missing = bits(full & ~cover)
                raise ComplexError(f"vertices {missing} lie in no facet")
            facets = _maximal(facets)
        self.m = m
        self.facets: tuple[int, ...] = tuple(sorted(facets, key=face_key))

    # construction -------------------------------------------------------
    @classmethod
    def from_facets(cls, facets: Iterable[Iterable[int]], m: int | None = None) -> "Complex":
        masks = [to_mask(f) for f in facets]
        if m is None:
            cover = 0
            for f in masks:
                cover |= f
            m = cover.bit_length()
        return cls(m, masks)

    @classmethod
    def from_json(cls, data: "str | dict") -> "Complex":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            m = int(data["m"])
            raw = data["facets"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from None
        facets = []
        for f in raw:
            vs = [int(v) for v in f]
            if any(v < 1 or v > m for v in vs):
                raise ComplexError(f"facet {f} has a vertex outside 1..{m}")
            if len(set(vs)) != len(vs):
                raise ComplexError(f"facet {f} repeats a vertex")
            facets.append(to_mask(v - 1 for v in vs))
        masks = set(facets)
        for f in masks:
            if any(f != g and f & g == f for g in masks):
                raise ComplexError(f"facet {[v + 1 for v in bits(f)]} is contained in another facet")
        return cls(m, facets)

    def to_json(self) -> dict:
        return {"m": self.m, "facets": [[v + 1 for v in bits(f)] for f in self.facets if f]}

    # basic data ---------------------------------------------------------
    @property
    def vertex_mask(self) -> int:
        return (1 << self.m) - 1

    @cached_property
    def dim(self) -> int:
        return max(popcount(f) for f in self.facets) - 1

    @property
    def is_pure(self) -> bool:
        return len({popcount(f) for f in self.facets}) == 1

    def __contains__(self, face: int) -> bool:
        return self.is_face(face)

    def is_face(self, face: int) -> bool:
        return any(face & f == face for f in self.facets)

    def face_contains(self, face: Iterable[int]) -> bool:
        mask = to_mask(face)
        if mask >> self.m:
            raise ComplexError(f"vertex index out of range 0..{self.m - 1}")
        return self.is_face(mask)

    @cached_property
    def faces_by_size(self) -> tuple[tuple[int, ...], ...]:
        """All faces grouped by cardinality (index 0 holds the empty face)."""
        found: list[set[int]] = [set() for _ in range(self.dim + 2)]
        for f in self.facets:
            vs = bits(f)
            for k in range(len(vs) + 1):
                for c in itertools.combinations(vs, k):
                    found[k].add(to_mask(c))
        return tuple(tuple(sorted(s, key=face_key)) for s in found)

    def faces(self, size: int | None = None) -> tuple[int, ...]:
        if size is None:
            return tuple(f for layer in self.faces_by_size for f in layer)
        if size < 0 or size >= len(self.faces_by_size):
            return ()
        return self.faces_by_size[size]

    @property
    def f_vector(self) -> tuple[int, ...]:
        """(f_0, f_1, ..., f_dim); the empty face is not counted."""
        return tuple(len(layer) for layer in self.faces_by_size[1:])

    @cached_property
    def neighbors(self) -> tuple[int, ...]:
        nb = [0] * self.m
        for e in self.faces(2):
            a, b = bits(e)
            nb[a] |= 1 << b
            nb[b] |= 1 << a
        return tuple(nb)

    def is_edge(self, a: int, b: int) -> bool:
        return bool(self.neighbors[a] >> b & 1)

    @cached_property
    def missing_faces(self) -> tuple[int, ...]:
        return tuple(missing_faces(self))

    def __eq__(self, other) -> bool:
        return isinstance(other, Complex) and self.m == other.m and self.facets == other.facets

    def __hash__(self) -> int:
        return hash((self.m, self.facets))

    def __repr__(self) -> str:
        fs = [[v + 1 for v in bits(f)] for f in self.facets]
        if len(fs) > 6:
            return f"Complex(m={self.m}, dim={self.dim}, facets={len(fs)})"
        return f"Complex(m={self.m}, facets={fs})"


# missing faces ----------------------------------------------------------

def missing_faces(K: Complex) -> list[int]:
    """Inclusion-minimal non-faces, ordered by (cardinality, lex)."""
    out: list[int] = []
    faces = set(K.faces())
    # a missing face of size k has all (k-1)-subsets in K, so grow from faces
    for size in range(1, K.dim + 3):
        cands = set()
        for f in K.faces(size - 1):
            for v in range(K.m):
                if not f >> v & 1 and (f == 0 or v > f.bit_length() - 1):
                    cands.add(f | 1 << v)
        for c in sorted(cands, key=face_key):
            if c in faces:
                continue
            if all((c & ~(1 << v)) in faces for v in bits(c)):
                out.append(c)
    return sorted(out, key=face_key)


# sub-complexes ----------------------------------------------------------

def induced_facets(K: Complex, vertex_set: int) -> list[int]:
    """Facets (original labels) of the full subcomplex on ``vertex_set``."""
    return _maximal(f & vertex_set for f in K.facets) or [0]


def reindex(m_mask: int, facets: Sequence[int]) -> tuple[Complex, tuple[int, ...]]:
    index_map = tuple(bits(m_mask))
    pos = {v: i for i, v in enumerate(index_map)}
    new = []
    for f in facets:
        new.append(to_mask(pos[v] for v in bits(f)))
    return Complex(len(index_map), new, check=False), index_map


def full_subcomplex(K: Complex, vertex_set: "int | Iterable[int]") -> tuple[Complex, tuple[int, ...]]:
    """K restricted to a vertex subset, re-indexed; also returns new->old labels."""
    mask = vertex_set if isinstance(vertex_set, int) else to_mask(vertex_set)
    mask &= K.vertex_mask
    return reindex(mask, induced_facets(K, mask))


def link(K: Complex, face: "int | Iterable[int]") -> tuple[Complex, tuple[int, ...]]:
    s = face if isinstance(face, int) else to_mask(face)
    if not K.is_face(s):
        raise ComplexError(f"{bits(s)} is not a face")
    parts = _maximal(f & ~s for f in K.facets if f & s == s)
    support = 0
    for f in parts:
        support |= f
    return reindex(support, parts)


def star(K: Complex, face: "int | Iterable[int]") -> tuple[Complex, tuple[int, ...]]:
    s = face if isinstance(face, int) else to_mask(face)
    if not K.is_face(s):
        raise ComplexError(f"{bits(s)} is not a face")
    parts = [f for f in K.facets if f & s == s]
    support = 0
    for f in parts:
        support |= f
    return reindex(support, parts)


def link_vertex_mask(K: Complex, v: int) -> int:
    """Vertex set of lk_v K in the original labels."""
    out = 0
    for f in K.facets:
        if f >> v & 1:
            out |= f
    return out & ~(1 << v)


def core(K: Complex) -> tuple[Complex, int]:
    """``(core K, s)`` with K = core K * Δ^{s-1}."""
    cone_points = 0
    for v in range(K.m):
        if all(f >> v & 1 for f in K.facets):
            cone_points |= 1 << v
    rest = K.vertex_mask & ~cone_points
    c, _ = full_subcomplex(K, rest)
    return c, popcount(cone_points)


def join(K: Complex, L: Complex) -> Complex:
    facets = [f | (g << K.m) for f in K.facets for g in L.facets]
    return Complex(K.m + L.m, facets)


def cone(K: Complex) -> Complex:
    return join(K, simplex(0))


def suspension(K: Complex) -> Complex:
    return join(K, simplex_boundary(1))


def simplex(d: int) -> Complex:
    """The full simplex Δ^d on d+1 vertices."""
    return Complex(d + 1, [(1 << (d + 1)) - 1])


def simplex_boundary(d: int) -> Complex:
    """∂Δ^d on d+1 vertices (d >= 1)."""
    if d < 1:
        raise ComplexError("boundary of a simplex needs d >= 1")
    full = (1 << (d + 1)) - 1
    return Complex(d + 1, [full & ~(1 << v) for v in range(d + 1)])


def empty_complex() -> Complex:
    return Complex(0, [0])


def euler_characteristic(K: Complex) -> tuple[int, int]:
    """(unreduced χ, reduced χ̃ = χ - 1)."""
    chi = sum((-1) ** i * n for i, n in enumerate(K.f_vector))
    return chi, chi - 1


# connected sums ---------------------------------------------------------

def connected_sums(K: Complex, L: Complex, dedupe: bool = True) -> list[Complex]:
    """The set C(K # L): all facet identifications, up to isomorphism."""
    if not (K.is_pure and L.is_pure):
        raise ComplexError("connected sum needs pure complexes")
    if K.dim != L.dim:
        raise ComplexError("connected sum needs equal dimensions")
    d1 = K.dim + 1
    out: list[Complex] = []
    seen: dict[tuple, list[Complex]] = {}
    for s in K.facets:
        svs = bits(s)
        for t in L.facets:
            tvs = bits(t)
            others = [v for v in range(L.m) if not t >> v & 1]
            for perm in itertools.permutations(svs, d1):
                relabel = dict(zip(tvs, perm))
                for i, v in enumerate(others):
                    relabel[v] = K.m + i
                lf = [to_mask(relabel[v] for v in bits(g)) for g in L.facets if g != t]
                facets = [f for f in K.facets if f != s] + lf
                C = Complex(K.m + L.m - d1, facets)
                if not dedupe:
                    out.append(C)
                    continue
                key = _iso_certificate(C)
                bucket = seen.setdefault(key, [])
                if any(C == D or are_isomorphic(C, D)[0] for D in bucket):
                    continue
                bucket.append(C)
                out.append(C)
    return out


# isomorphism ------------------------------------------------------------

def _iso_certificate(K: Complex) -> tuple:
    nb = K.neighbors
    per_vertex = sorted(
        (popcount(nb[v]), tuple(sorted(popcount(nb[u]) for u in bits(nb[v])))) for v in range(K.m)
    )
    return (K.m, K.f_vector, tuple(per_vertex))


def _incidence_graph(K: Complex) -> nx.Graph:
    g = nx.Graph()
    for v in range(K.m):
        g.add_node(("v", v), kind="v")
    for i, f in enumerate(K.facets):
        g.add_node(("f", i), kind="f")
        for v in bits(f):
            g.add_edge(("v", v), ("f", i))
    return g


def are_isomorphic(K: Complex, L: Complex) -> tuple[bool, dict[int, int] | None]:
    """Vertex bijection taking facets onto facets, if one exists."""
    if K.m != L.m or K.f_vector != L.f_vector or _iso_certificate(K) != _iso_certificate(L):
        return False, None
    gm = nx_iso.GraphMatcher(
        _incidence_graph(K), _incidence_graph(L), node_match=lambda a, b: a["kind"] == b["kind"]
    )
    for mapping in gm.isomorphisms_iter():
        return True, {a[1]: b[1] for a, b in mapping.items() if a[0] == "v"}
    return False, None


def relabel(K: Complex, perm: dict[int, int]) -> Complex:
    return Complex(K.m, [to_mask(perm[v] for v in bits(f)) for f in K.facets])


def automorphisms(K: Complex):
    """Iterate over vertex permutations preserving the facet set."""
    g = _incidence_graph(K)
    gm = nx_iso.GraphMatcher(g, g, node_match=lambda a, b: a["kind"] == b["kind"])
    for mapping in gm.isomorphisms_iter():
        yield {a[1]: b[1] for a, b in mapping.items() if a[0] == "v"}
