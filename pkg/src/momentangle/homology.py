"""Reduced simplicial cohomology over prime fields and the rationals.

The cochain complex is augmented: degree ``-1`` is spanned by the empty face,
so ``H̃^{-1}({∅}) = k`` falls out of the same elimination as every other
degree.  Faces keep the caller's labels (bitmasks), which lets the ring code
work on full subcomplexes without re-indexing.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .complex import Complex, bits, face_key, popcount
from .linalg import Field, GF2, extend_basis, inverse, matmul, nullspace, rank, row_space


def coboundary_matrices(layers: Sequence[Sequence[int]], field: Field) -> list[np.ndarray]:
    """``D[k]`` maps cochains on size-``k`` faces to size-``k+1`` faces.

    (δf)(τ) = Σ_j (-1)^j f(τ minus its j-th vertex), vertices sorted ascending.
    """
    index = [{f: i for i, f in enumerate(layer)} for layer in layers]
    out = []
    for k in range(len(layers) - 1):
        d = field.zeros((len(layers[k + 1]), len(layers[k])))
        for r, tau in enumerate(layers[k + 1]):
            for j, v in enumerate(bits(tau)):
                c = index[k][tau & ~(1 << v)]
                d[r, c] = field.scalar(-1 if j % 2 else 1)
        out.append(d)
    return out


@dataclass
class CohomologyBasis:
    """Ranks, cocycle representatives and coordinate maps for H̃^*(K)."""

    field: Field
    faces: dict[int, tuple[int, ...]]  # degree -> faces with degree+1 vertices
    ranks: dict[int, int]
    reps: dict[int, np.ndarray]  # degree -> (rank x n) cocycle rows
    proj: dict[int, np.ndarray]  # degree -> (n x rank); cocycle @ proj = coordinates
    index: dict[int, dict[int, int]] = dc_field(default_factory=dict)

    def rank(self, degree: int) -> int:
        return self.ranks.get(degree, 0)

    @property
    def nonzero_degrees(self) -> list[int]:
        return [d for d, r in sorted(self.ranks.items()) if r]

    @property
    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def coordinates(self, degree: int, cocycle: np.ndarray) -> np.ndarray:
        if self.rank(degree) == 0:
            return self.field.zeros((0,))
        return matmul(cocycle.reshape(1, -1), self.proj[degree], self.field)[0]

    def cochain(self, degree: int, values: dict[int, object]) -> np.ndarray:
        vec = self.field.zeros((len(self.faces.get(degree, ())),))
        idx = self.index[degree]
        for f, c in values.items():
            vec[idx[f]] = self.field.scalar(c)
        return vec


def _subquotient(incoming: np.ndarray | None, outgoing: np.ndarray | None, n: int, field: Field):
    """Basis of ker(outgoing)/im(incoming) with a projection to coordinates."""
    kernel = nullspace(outgoing, field) if outgoing is not None and outgoing.shape[0] else field.identity(n)
    if incoming is not None and incoming.shape[1]:
        image = row_space(incoming.T.copy(), field)
    else:
        image = field.zeros((0, n))
    chosen = extend_basis(image, kernel, field)
    reps = kernel[chosen] if chosen else field.zeros((0, n))
    r = reps.shape[0]
    if r == 0:
        return reps, field.zeros((n, 0))
    partial = np.vstack([image, reps]) if image.shape[0] else reps
    fill = extend_basis(partial, field.identity(n), field)
    q = np.vstack([partial, field.identity(n)[fill]]) if fill else partial
    qinv = inverse(q, field)
    b = image.shape[0]
    return reps, qinv[:, b : b + r].copy()


def cohomology_from_layers(layers: Sequence[Sequence[int]], field: Field) -> CohomologyBasis:
    """Cohomology of the augmented cochain complex on the given face layers.

    ``layers[k]`` lists the faces with ``k`` vertices; ``layers[0] == (0,)``.
    """
    layers = [tuple(layer) for layer in layers]
    while len(layers) > 1 and not layers[-1]:
        layers.pop()
    ds = coboundary_matrices(layers, field)
    faces, ranks, reps, proj, index = {}, {}, {}, {}, {}
    for k, layer in enumerate(layers):
        deg = k - 1
        faces[deg] = layer
        index[deg] = {f: i for i, f in enumerate(layer)}
        incoming = ds[k - 1] if k >= 1 else None
        outgoing = ds[k] if k < len(ds) else None
        rp, pj = _subquotient(incoming, outgoing, len(layer), field)
        ranks[deg] = rp.shape[0]
        if rp.shape[0]:
            reps[deg] = rp
            proj[deg] = pj
    return CohomologyBasis(field, faces, ranks, reps, proj, index)


def induced_layers(K: Complex, vertex_set: int) -> list[tuple[int, ...]]:
    """Face layers of the full subcomplex K_J in the original labels."""
    out = []
    for layer in K.faces_by_size:
        sel = tuple(f for f in layer if f & vertex_set == f)
        if not sel:
            break
        out.append(sel)
    return out


def reduced_cohomology(K: Complex, field: Field | str = GF2) -> CohomologyBasis:
    return cohomology_from_layers(K.faces_by_size, Field.parse(field))


def _rank_q_int(rows: list[list[int]]) -> int:
    # fraction-free (Bareiss-style) elimination over the integers
    mat = [r[:] for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    rk = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rk, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[rk], mat[piv] = mat[piv], mat[rk]
        p = mat[rk][c]
        for i in range(rk + 1, len(mat)):
            a = mat[i][c]
            row_i, row_k = mat[i], mat[rk]
            mat[i] = [(p * row_i[j] - a * row_k[j]) // prev for j in range(ncols)]
        prev = p
        rk += 1
        if rk == len(mat):
            break
    return rk


def layer_ranks(layers: Sequence[Sequence[int]], field: Field) -> list[int]:
    """Ranks of the coboundary maps between consecutive layers (no reps)."""
    layers = [tuple(layer) for layer in layers]
    index = [{f: i for i, f in enumerate(layer)} for layer in layers]
    out = []
    for k in range(len(layers) - 1):
        if field.char == 2:
            from .linalg import rank_gf2_bits

            rows = []
            for tau in layers[k + 1]:
                v = 0
                for u in bits(tau):
                    v |= 1 << index[k][tau & ~(1 << u)]
                rows.append(v)
            out.append(rank_gf2_bits(rows))
        elif field.char == 0:
            n = len(layers[k])
            rows = []
            for tau in layers[k + 1]:
                row = [0] * n
                for j, u in enumerate(bits(tau)):
                    row[index[k][tau & ~(1 << u)]] = -1 if j % 2 else 1
                rows.append(row)
            out.append(_rank_q_int(rows))
        else:
            out.append(rank(coboundary_matrices(layers[k : k + 2], field)[0], field))
    return out


def reduced_betti_layers(layers: Sequence[Sequence[int]], field: Field) -> dict[int, int]:
    """Rank-only fast path: ``{degree: rank H̃^degree}`` (zero entries kept)."""
    layers = [tuple(layer) for layer in layers if layer]
    rk = layer_ranks(layers, field)
    out = {}
    for k, layer in enumerate(layers):
        r_out = rk[k] if k < len(rk) else 0
        r_in = rk[k - 1] if k >= 1 else 0
        out[k - 1] = len(layer) - r_out - r_in
    return out


def reduced_betti(K: Complex, field: Field | str = GF2) -> dict[int, int]:
    return reduced_betti_layers(K.faces_by_size, Field.parse(field))


def _is_sphere_cohomology(betti: dict[int, int], n: int) -> bool:
    return all(r == (1 if d == n else 0) for d, r in betti.items()) and betti.get(n, 0) == 1


def is_generalized_homology_sphere(K: Complex, field: Field | str = GF2) -> bool:
    """K is an F-homology manifold with the F-cohomology of S^dim.

    Checks every face σ (including ∅): lk_σ K has the cohomology of
    S^{dim K - |σ|}.
    """
    field = Field.parse(field)
    n = K.dim
    if n < 0:
        return False
    if not K.is_pure:
        return False
    for layer in K.faces_by_size:
        for s in layer:
            size = popcount(s)
            if size == n + 1:
                continue  # link of a facet is {∅}, always S^{-1}
            link_faces = {f & ~s for f in K.facets if f & s == s}
            lk_layers = _layers_from_facets(link_faces)
            if not _is_sphere_cohomology(reduced_betti_layers(lk_layers, field), n - size):
                return False
    return True


def _layers_from_facets(facets) -> list[tuple[int, ...]]:
    import itertools

    found: dict[int, set[int]] = {}
    for f in facets:
        vs = bits(f)
        for k in range(len(vs) + 1):
            for c in itertools.combinations(vs, k):
                m = 0
                for v in c:
                    m |= 1 << v
                found.setdefault(k, set()).add(m)
    top = max(found)
    return [tuple(sorted(found.get(k, ()), key=face_key)) for k in range(top + 1)]
