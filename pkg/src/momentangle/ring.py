"""The Baskakov-Hochster ring ⊕_J H̃*(K_J) and its invariants.

A class in H̃^d(K_J) has total degree |J| + d + 1.  Classes are stored as
coordinate vectors in the cohomology basis of K_J chosen by
:func:`momentangle.homology.cohomology_from_layers`.

Product of cochains σ* ∈ C*(K_I), τ* ∈ C*(K_J) with I ∩ J = ∅:

    σ* · τ* = s · (σ ∪ τ)*   if σ ∪ τ ∈ K, else 0,
    s = f_I(σ) f_J(τ) f_{I∪J}(σ∪τ) ε(I∖σ, J∖τ),

where f_J(σ) = (-1)^{Σ_{s∈σ} #{x ∈ J : x < s}} and ε(A, B) is the sign of
the shuffle putting A followed by B into increasing order.  This is the
product of the Koszul model Λ[u] ⊗ k[K] transported along u_{J∖σ} v_σ ↦
f_J(σ) σ*, so it is associative and graded commutative in total degree.
Over characteristic 2 every sign is 1.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field as dc_field

import numpy as np
from numba import njit

from .complex import CapExceeded, Complex, bits, popcount
from .hochster import BettiTable, subset_betti, table_from_subset_ranks
from .homology import CohomologyBasis, cohomology_from_layers, induced_layers
from .linalg import Field, GF2, _rank_mod_p, matmul, nullspace, rank, row_space

DEFAULT_RING_CAP = int(os.environ.get("MOMENTANGLE_RING_CAP", "14"))

Piece = tuple[int, int]  # (vertex subset J, cochain degree d)


def _below(J: int, s: int) -> int:
    return popcount(J & ((1 << s) - 1))


def f_sign(J: int, sigma: int) -> int:
    t = 0
    for s in bits(sigma):
        t += _below(J, s)
    return -1 if t % 2 else 1


def shuffle_sign(A: int, B: int) -> int:
    """(-1)^{#{(a, b) ∈ A×B : a > b}}."""
    t = 0
    for b in bits(B):
        t += popcount(A >> (b + 1))
    return -1 if t % 2 else 1


def product_sign(I: int, sigma: int, J: int, tau: int) -> int:
    return f_sign(I, sigma) * f_sign(J, tau) * f_sign(I | J, sigma | tau) * shuffle_sign(I & ~sigma, J & ~tau)


@dataclass
class RingElement:
    """A formal sum of classes, keyed by (J, d)."""

    ring: "BHRing"
    terms: dict[Piece, np.ndarray] = dc_field(default_factory=dict)

    def __post_init__(self):
        f = self.ring.field
        self.terms = {k: f.reduce(np.asarray(v, dtype=f.dtype).copy()) for k, v in self.terms.items()}
        self.terms = {k: v for k, v in self.terms.items() if np.any(v != 0)}

    @property
    def field(self) -> Field:
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {popcount(J) + d + 1 for J, d in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise ValueError("element is not homogeneous")
        return ds.pop()

    def __add__(self, other: "RingElement") -> "RingElement":
        self.ring._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return RingElement(self.ring, out)

    def __neg__(self) -> "RingElement":
        return self.scale(-1)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def scale(self, c) -> "RingElement":
        c = self.field.scalar(c)
        return RingElement(self.ring, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "RingElement") -> "RingElement":
        return self.ring.multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return (self - other).is_zero()

    def project(self, J: int) -> "RingElement":
        """p_J: the component in multidegree J."""
        return RingElement(self.ring, {k: v for k, v in self.terms.items() if k[0] == J})

    def __repr__(self) -> str:
        parts = [f"{[v + 1 for v in bits(J)]}^{d}:{list(c)}" for (J, d), c in sorted(self.terms.items())]
        return "RingElement(" + (" + ".join(parts) or "0") + ")"


class BHRing:
    """The Baskakov-Hochster ring of K over a field, with lazily built bases."""

    def __init__(self, K: Complex, field: Field | str = GF2, sweep_cap: int | None = None):
        self.K = K
        self.field = Field.parse(field)
        self.ranks = subset_betti(K, self.field, sweep_cap)  # [J, d + 1]
        self._bases: dict[int, CohomologyBasis] = {}
        self._sparse: dict[Piece, list[list[tuple[int, int]]]] = {}
        self._tensors: dict[tuple[Piece, Piece], np.ndarray] = {}
        self._by_degree: dict[int, list[Piece]] | None = None

    # bookkeeping --------------------------------------------------------
    def _same(self, other: "RingElement"):
        if other.ring is not self:
            raise ValueError("elements belong to different rings")

    def rank(self, J: int, d: int) -> int:
        k = d + 1
        if k < 0 or k >= self.ranks.shape[1]:
            return 0
        return int(self.ranks[J, k])

    @staticmethod
    def total_degree(piece: Piece) -> int:
        J, d = piece
        return popcount(J) + d + 1

    def _all_pieces(self) -> dict[int, list[Piece]]:
        if self._by_degree is None:
            by: dict[int, list[Piece]] = {}
            Js, ks = np.nonzero(self.ranks)
            for J, k in zip(Js.tolist(), ks.tolist()):
                p = (J, k - 1)
                by.setdefault(popcount(J) + k, []).append(p)
            for lst in by.values():
                lst.sort(key=lambda p: (popcount(p[0]), p[0], p[1]))
            self._by_degree = by
        return self._by_degree

    def pieces(self, degree: int | None = None, positive: bool = True) -> list[Piece]:
        by = self._all_pieces()
        if degree is None:
            out = [p for deg in sorted(by) for p in by[deg]]
        else:
            out = list(by.get(degree, ()))
        if positive:
            out = [p for p in out if p[0]]
        return out

    def dim(self, degree: int) -> int:
        return sum(self.rank(J, d) for J, d in self.pieces(degree, positive=False))

    def basis(self, J: int) -> CohomologyBasis:
        b = self._bases.get(J)
        if b is None:
            b = cohomology_from_layers(induced_layers(self.K, J), self.field)
            self._bases[J] = b
        return b

    def _sparse_reps(self, piece: Piece) -> list[list[tuple[int, int]]]:
        out = self._sparse.get(piece)
        if out is None:
            J, d = piece
            B = self.basis(J)
            faces = B.faces[d]
            out = []
            for row in B.reps.get(d, ()):
                out.append([(faces[i], row[i]) for i in np.nonzero(row)[0]])
            self._sparse[piece] = out
        return out

    # elements -----------------------------------------------------------
    def zero(self) -> RingElement:
        return RingElement(self, {})

    def one(self) -> RingElement:
        return RingElement(self, {(0, -1): self.field.array([1])})

    def gen(self, J: int, d: int, index: int = 0) -> RingElement:
        r = self.rank(J, d)
        if index >= r:
            raise IndexError(f"H̃^{d}(K_J) has rank {r}")
        v = self.field.zeros((r,))
        v[index] = self.field.one
        return RingElement(self, {(J, d): v})

    def element(self, J: int, d: int, coords) -> RingElement:
        return RingElement(self, {(J, d): self.field.array(coords)})

    def from_cocycle(self, J: int, d: int, values: dict[int, object]) -> RingElement:
        """Class of a cocycle on K_J given as {face mask: coefficient}."""
        B = self.basis(J)
        vec = B.cochain(d, values)
        return RingElement(self, {(J, d): B.coordinates(d, vec)})

    def missing_pair_class(self, omega: int) -> RingElement:
        """ω̃ ∈ H̃^0(K_ω): the class of the cocycle that is 1 on the smaller vertex."""
        a = bits(omega)[0]
        return self.from_cocycle(omega, 0, {1 << a: 1})

    def basis_elements(self, degree: int) -> list[RingElement]:
        out = []
        for J, d in self.pieces(degree, positive=degree > 0):
            for i in range(self.rank(J, d)):
                out.append(self.gen(J, d, i))
        return out

    def random_element(self, degree: int, rng: np.random.Generator) -> RingElement:
        p = self.field.char or 7
        terms = {}
        for J, d in self.pieces(degree, positive=degree > 0):
            c = rng.integers(-(p - 1) if self.field.char == 0 else 0, p, self.rank(J, d))
            terms[J, d] = self.field.array(c)
        return RingElement(self, terms)

    # products -----------------------------------------------------------
    def product_tensor(self, p1: Piece, p2: Piece) -> np.ndarray:
        """T[a, b, :] = coordinates of (basis a of p1) · (basis b of p2)."""
        key = (p1, p2)
        T = self._tensors.get(key)
        if T is not None:
            return T
        (I, d1), (J, d2) = p1, p2
        r1, r2 = self.rank(I, d1), self.rank(J, d2)
        target = (I | J, d1 + d2 + 1)
        rt = self.rank(*target) if not I & J else 0
        T = self.field.zeros((r1, r2, rt))
        if rt:
            B = self.basis(I | J)
            dt = d1 + d2 + 1
            index = B.index[dt]
            proj = B.proj[dt]
            f = self.field
            char2 = f.char == 2
            sa = self._sparse_reps(p1)
            sb = self._sparse_reps(p2)
            for a in range(r1):
                for b in range(r2):
                    coch = f.zeros((len(B.faces[dt]),))
                    hit = False
                    for sigma, x in sa[a]:
                        for tau, y in sb[b]:
                            pos = index.get(sigma | tau)
                            if pos is None:
                                continue
                            s = 1 if char2 else product_sign(I, sigma, J, tau)
                            coch[pos] += s * x * y
                            hit = True
                    if hit:
                        coch = f.reduce(coch)
                        T[a, b] = matmul(coch.reshape(1, -1), proj, f)[0]
        self._tensors[key] = T
        return T

    def multiply(self, x: RingElement, y: RingElement) -> RingElement:
        self._same(x)
        self._same(y)
        out: dict[Piece, np.ndarray] = {}
        f = self.field
        for p1, v1 in x.terms.items():
            for p2, v2 in y.terms.items():
                if p1[0] & p2[0]:
                    continue
                if p1[0] == 0 or p2[0] == 0:  # unit component
                    other, c = (p2, v2) if p1[0] == 0 else (p1, v1)
                    unit = v1[0] if p1[0] == 0 else v2[0]
                    val = f.reduce(c * unit)
                    out[other] = f.reduce(out[other] + val) if other in out else val
                    continue
                T = self.product_tensor(p1, p2)
                if T.shape[2] == 0:
                    continue
                tgt = (p1[0] | p2[0], p1[1] + p2[1] + 1)
                val = f.reduce(np.einsum("a,b,abc->c", v1, v2, T))
                out[tgt] = f.reduce(out[tgt] + val) if tgt in out else val
        return RingElement(self, out)

    def restrict(self, x: RingElement, Jsub: int) -> RingElement:
        """Pull back along K_{J'} ⊂ K_J for every term (J' = J ∩ Jsub)."""
        out: dict[Piece, np.ndarray] = {}
        f = self.field
        for (J, d), v in x.terms.items():
            Js = J & Jsub
            if self.rank(Js, d) == 0:
                continue
            B = self.basis(J)
            coch = matmul(v.reshape(1, -1), B.reps[d], f)[0]
            Bs = self.basis(Js)
            vals = {face: coch[i] for i, face in enumerate(B.faces[d]) if face & Js == face and coch[i] != 0}
            c = Bs.coordinates(d, Bs.cochain(d, vals))
            key = (Js, d)
            out[key] = f.reduce(out[key] + c) if key in out else c
        return RingElement(self, out)

    def star(self, x: RingElement, y: RingElement) -> RingElement:
        """α ⋆ β = α · (restriction of β to J ∖ (I ∩ J)), extended bilinearly."""
        total = self.zero()
        for (I, d1), v1 in x.terms.items():
            a = RingElement(self, {(I, d1): v1})
            for (J, d2), v2 in y.terms.items():
                b = RingElement(self, {(J, d2): v2})
                total = total + a * self.restrict(b, J & ~I)
        return total

    # matrices of multiplication ----------------------------------------
    def multiplication_matrix(self, x: RingElement, degree: int) -> tuple[np.ndarray, list[Piece], list[Piece]]:
        """Matrix of y ↦ x·y from R^degree, rows indexed by the basis of R^degree."""
        src = self.pieces(degree, positive=degree > 0)
        rows = []
        tgt_index: dict[Piece, int] = {}
        offsets = []
        total = 0
        products = []
        xs = list(x.terms)
        for p in src:
            live = any(
                q[0] == 0 or (not q[0] & p[0] and self.rank(q[0] | p[0], q[1] + p[1] + 1))
                for q in xs
            )
            for i in range(self.rank(*p)):
                if not live:
                    products.append(self.zero())
                    continue
                prod = x * self.gen(p[0], p[1], i)
                products.append(prod)
                for q, v in prod.terms.items():
                    if q not in tgt_index:
                        tgt_index[q] = total
                        offsets.append(q)
                        total += len(v)
        f = self.field
        M = f.zeros((len(products), total))
        for r, prod in enumerate(products):
            for q, v in prod.terms.items():
                s = tgt_index[q]
                M[r, s : s + len(v)] = v
        return M, src, offsets


# invariants ---------------------------------------------------------------

def _check_ring_cap(ring: BHRing, cap: int | None):
    cap = DEFAULT_RING_CAP if cap is None else cap
    if ring.K.m > cap:
        raise CapExceeded(f"m = {ring.K.m} exceeds the ring-invariant cap {cap}")


def baskakov_product(a: RingElement, b: RingElement) -> RingElement:
    return a.ring.multiply(a, b)


def star_product(a: RingElement, b: RingElement) -> RingElement:
    return a.ring.star(a, b)


def annihilator_dim(x: RingElement, k: int | None = None) -> int:
    """dim of {y ∈ R^k : x·y = 0}; with k = None, of the whole annihilator in R."""
    if x.is_zero():
        raise ValueError("annihilator of zero")
    if k is None:
        degs = {x.ring.total_degree(p) for p in x.ring.pieces(positive=False)}
        return sum(annihilator_dim(x, d) for d in sorted(degs))
    M, _, _ = x.ring.multiplication_matrix(x, k)
    if M.shape[0] == 0:
        return 0
    return M.shape[0] - (rank(M, x.field) if M.shape[1] else 0)


@dataclass
class PowerFiltration:
    """dims[k][degree] = dim of (R⁺)^{*k} in that total degree."""

    dims: dict[int, dict[int, int]]
    multigraded: dict[int, dict[Piece, int]]

    @property
    def nil(self) -> int:
        ks = [k for k, row in self.dims.items() if any(row.values())]
        return max(ks, default=0)


def graded_power_dims(ring: BHRing, cap: int | None = None, max_k: int | None = None) -> PowerFiltration:
    """Powers of the augmentation ideal, computed multidegree by multidegree.

    P_1(J) = H̃*(K_J) for J ≠ ∅ and P_k(J) = Σ P_{k-1}(J∖B)·H̃*(K_B) over B ∋ min J.
    Restricting to B ∋ min J is allowed by graded commutativity.  Each target
    stops early once the products span the whole piece.
    """
    _check_ring_cap(ring, cap)
    f = ring.field
    pieces = ring.pieces()
    by_J: dict[int, list[Piece]] = {}
    for p in pieces:
        by_J.setdefault(p[0], []).append(p)
    P: dict[Piece, np.ndarray] = {p: f.identity(ring.rank(*p)) for p in pieces}
    dims = {1: _degree_dims({p: v.shape[0] for p, v in P.items()})}
    multi = {1: {p: v.shape[0] for p, v in P.items()}}
    k = 1
    order = sorted(by_J, key=lambda J: (popcount(J), J))
    while P and (max_k is None or k < max_k):
        k += 1
        newP: dict[Piece, np.ndarray] = {}
        prevJ: dict[int, list[Piece]] = {}
        for p in P:
            prevJ.setdefault(p[0], []).append(p)
        for J in order:
            if popcount(J) < k:
                continue
            targets = {p[1]: p for p in by_J[J]}
            spans: dict[int, np.ndarray] = {}
            done: set[int] = set()
            low = J & -J
            rest = J & ~low
            # B = low ∪ S for S ⊆ rest, A = J∖B nonempty
            for S in _submasks(rest):
                B = low | S
                A = J & ~B
                if A == 0 or A not in prevJ or B not in by_J:
                    continue
                for pa in prevJ[A]:
                    for pb in by_J[B]:
                        dt = pa[1] + pb[1] + 1
                        if dt not in targets or dt in done:
                            continue
                        T = ring.product_tensor(pa, pb)
                        imgs = np.einsum("pa,abc->pbc", P[pa], T).reshape(-1, T.shape[2])
                        imgs = f.reduce(imgs)
                        cur = spans.get(dt)
                        stacked = imgs if cur is None else np.vstack([cur, imgs])
                        sp = row_space(stacked, f) if stacked.shape[0] else stacked
                        spans[dt] = sp
                        if sp.shape[0] == ring.rank(J, dt):
                            done.add(dt)
                if len(done) == len(targets):
                    break
            for dt, sp in spans.items():
                if sp.shape[0]:
                    if dt < k - 1:
                        raise AssertionError(f"power {k} reaches degree {dt} < {k - 1}")
                    newP[J, dt] = sp
        P = newP
        if P:
            dims[k] = _degree_dims({p: v.shape[0] for p, v in P.items()})
            multi[k] = {p: v.shape[0] for p, v in P.items()}
    return PowerFiltration(dims, multi)


def _degree_dims(d: dict[Piece, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for (J, dd), r in d.items():
        deg = popcount(J) + dd + 1
        out[deg] = out.get(deg, 0) + r
    return dict(sorted(out.items()))


def _submasks(mask: int):
    """All submasks of mask, largest first."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def nil(ring: BHRing, cap: int | None = None) -> int:
    return graded_power_dims(ring, cap).nil


def socle_dim(ring: BHRing, cap: int | None = None) -> int:
    """dim {x : R⁺·x = 0}; the socle is multigraded so each piece is handled alone."""
    _check_ring_cap(ring, cap)
    f = ring.field
    pieces = ring.pieces()
    if not pieces:
        return 1  # R = k
    by_J: dict[int, list[Piece]] = {}
    for p in pieces:
        by_J.setdefault(p[0], []).append(p)
    full = ring.K.vertex_mask
    total = 0
    for px in pieces:
        J = px[0]
        kern = f.identity(ring.rank(*px))
        comp = full & ~J
        for B in _submasks(comp):
            if B == 0 or B not in by_J:
                continue
            for pb in by_J[B]:
                T = ring.product_tensor(px, pb)
                if T.shape[2] == 0:
                    continue
                for b in range(T.shape[1]):
                    img = matmul(kern, T[:, b, :], f)
                    if not np.any(img != 0):
                        continue
                    c = nullspace(img.T.copy(), f)
                    kern = matmul(c, kern, f) if c.shape[0] else f.zeros((0, kern.shape[1]))
                    if kern.shape[0] == 0:
                        break
                if kern.shape[0] == 0:
                    break
            if kern.shape[0] == 0:
                break
        total += kern.shape[0]
    return total


def _factor_setup(x: RingElement, k: int):
    """Multiplication data for factor_index; an int means the answer is already known."""
    if x.is_zero():
        raise ValueError("factor index of zero")
    ring = x.ring
    f = ring.field
    deg = x.degree
    src = ring.basis_elements(k)
    comp = ring.basis_elements(deg - k)
    if not src or not comp:
        return 0
    tgt_pieces = ring.pieces(deg, positive=deg > 0)
    tgt_index, total = {}, 0
    for p in tgt_pieces:
        tgt_index[p] = total
        total += ring.rank(*p)

    def flat(e: RingElement) -> np.ndarray:
        out = f.zeros((total,))
        for p, v in e.terms.items():
            out[tgt_index[p] : tgt_index[p] + len(v)] = v
        return out

    L = np.stack([np.stack([flat(s * u) for u in comp]) for s in src])  # (r, c, t)
    xv = flat(x)
    flatL = L.reshape(len(src), -1)
    if not np.any(flatL != 0):
        return 0
    images = L.reshape(-1, total)
    if rank(np.vstack([images, xv[None, :]]), f) > rank(images, f):
        return 0
    # complement of N: pivot rows of flatL
    piv = _pivot_rows(flatL, f)
    if total == 1:
        return len(piv)
    return L, xv, piv


def factor_index_bound(x: RingElement, k: int) -> int:
    """Upper bound for factor_index(x, k) that needs no search; exact when a shortcut applies."""
    data = _factor_setup(x, k)
    return data if isinstance(data, int) else len(data[2])


def factor_index(x: RingElement, k: int, enum_cap: int = 1 << 20, search_cap: int = 5000) -> int:
    """Largest dim of a subspace V ⊆ R^k whose nonzero elements all divide x.

    v divides x iff x lies in the image of L_v: u ↦ v·u on R^{deg x - k}.
    The divisor set D is invariant under N = {v : L_v = 0} and V ∩ N = 0, so
    the search runs on a complement of N, of dimension ub = dim R^k - dim N,
    which is also an upper bound.  Exact shortcuts: 0 when x is outside the
    span of all products, and ub when R^{deg x} is one-dimensional (then every
    v ∉ N divides x).  Otherwise, over GF(p), D is enumerated on the
    complement; if D ∪ {0} is a subspace its dimension is the answer, else a
    bounded backtracking search finds the largest subspace inside D.
    """
    data = _factor_setup(x, k)
    if isinstance(data, int):
        return data
    L, xv, piv = data
    f = x.ring.field
    ub = len(piv)
    if f.char == 0 or f.char**ub > enum_cap:
        raise CapExceeded(f"factor-index search space {f.char or 'inf'}^{ub} exceeds the enumeration cap")
    p = f.char
    Lq = np.ascontiguousarray(L[piv])  # (ub, c, t)
    D = _divisor_codes(Lq, xv.astype(np.int64), p)
    if D.size == 0:
        return 0
    vecs = _decode(D, ub, p)
    span_dim = rank(vecs, f)
    if D.size + 1 == p**span_dim:
        return span_dim
    if D.size > search_cap:
        raise CapExceeded(f"divisor set of size {D.size} is not a subspace and exceeds the search cap")
    return _max_subspace({tuple(int(t) for t in v) for v in vecs}, f, ub, span_dim)


def _pivot_rows(M: np.ndarray, f: Field) -> list[int]:
    """Indices of a maximal independent set of rows, chosen greedily."""
    out: list[int] = []
    cur = 0
    for i in range(M.shape[0]):
        r = rank(M[out + [i]], f)
        if r > cur:
            out.append(i)
            cur = r
    return out


def _decode(codes: np.ndarray, n: int, p: int) -> np.ndarray:
    out = np.zeros((codes.size, n), dtype=np.int64)
    c = codes.copy()
    for j in range(n):
        out[:, j] = c % p
        c //= p
    return out


@njit(cache=True)
def _divisor_codes(L, x, p):
    """Codes (base p digits) of the nonzero v with x ∈ rowspace(Σ v_a L[a])."""
    r, c, t = L.shape
    total = 1
    for _ in range(r):
        total *= p
    out = np.empty(total, dtype=np.int64)
    n_out = 0
    v = np.zeros(r, dtype=np.int64)
    work = np.zeros((c + 1, t), dtype=np.int64)
    work2 = np.zeros((c, t), dtype=np.int64)
    for code in range(1, total):
        rem = code
        for a in range(r):
            v[a] = rem % p
            rem //= p
        for i in range(c):
            for j in range(t):
                s = 0
                for a in range(r):
                    if v[a]:
                        s += v[a] * L[a, i, j]
                s %= p
                work[i, j] = s
                work2[i, j] = s
        for j in range(t):
            work[c, j] = x[j] % p
        r1 = _rank_mod_p(work2, c, t, p)
        r2 = _rank_mod_p(work, c + 1, t, p)
        if r1 == r2:
            out[n_out] = code
            n_out += 1
    return out[:n_out]


def _max_subspace(D: set[tuple[int, ...]], f: Field, r: int, bound: int) -> int:
    """Largest subspace with every nonzero vector in D (backtracking)."""
    p = f.char
    elems = sorted(D)

    def span_add(cur: set, e) -> set:
        out = set()
        ev = np.array(e)
        for s in cur:
            sv = np.array(s)
            for c in range(p):
                out.add(tuple(int(t) for t in (sv + c * ev) % p))
        return out

    best = 0

    def grow(size: int, cur_span: set, start: int):
        nonlocal best
        best = max(best, size)
        if best >= bound:
            return
        for i in range(start, len(elems)):
            e = elems[i]
            if e in cur_span:
                continue
            new = span_add(cur_span, e)
            if all(v in D for v in new if any(v)):
                grow(size + 1, new, i + 1)
                if best >= bound:
                    return

    grow(0, {tuple([0] * r)}, 0)
    return best


# fingerprints -------------------------------------------------------------

@dataclass
class RingFingerprint:
    betti: dict[tuple[int, int], int]
    graded: list[int]
    nil: int | None
    ann3: tuple[int, ...]
    socle: int | None
    ind3_top: int | None
    skipped: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "betti": [{"i": i, "j": j, "rank": v} for (i, j), v in sorted(self.betti.items())],
            "graded": self.graded,
            "nil": self.nil,
            "ann3": list(self.ann3),
            "socle": self.socle,
            "ind3_top": self.ind3_top,
            "skipped": list(self.skipped),
        }

    def components(self) -> list[tuple[str, object]]:
        return [
            ("betti", self.betti),
            ("graded", self.graded),
            ("nil", self.nil),
            ("ann3", self.ann3),
            ("socle", self.socle),
            ("ind3_top", self.ind3_top),
        ]


def top_class(ring: BHRing) -> RingElement | None:
    """Generator of H̃^{dim K}(K) when that group is one-dimensional."""
    K = ring.K
    d = K.dim
    if ring.rank(K.vertex_mask, d) != 1:
        return None
    return ring.gen(K.vertex_mask, d)


def fingerprint(K: Complex, field: Field | str = GF2, ring_cap: int | None = None, table: BettiTable | None = None) -> RingFingerprint:
    from .homology import is_generalized_homology_sphere
    from .complex import core

    ring = BHRing(K, field)
    table = table or table_from_subset_ranks(ring.ranks, ring.field, K.m)
    skipped = []
    try:
        nl = nil(ring, ring_cap)
    except CapExceeded:
        nl = None
        skipped.append("nil")
    try:
        soc = socle_dim(ring, ring_cap)
    except CapExceeded:
        soc = None
        skipped.append("socle")
    ann = sorted(annihilator_dim(ring.missing_pair_class(w), 3) for w in K.missing_faces if popcount(w) == 2)
    ind = None
    gor = core(K)[0].m == K.m and is_generalized_homology_sphere(K, ring.field)
    if gor:
        xi = top_class(ring)
        if xi is not None:
            ind = factor_index(xi, 3)
    return RingFingerprint(table.nonzero(), table.total_degree_dims(), nl, tuple(ann), soc, ind, tuple(skipped))


@dataclass
class FingerprintComparison:
    equal: bool
    first_difference: str | None
    left: RingFingerprint
    right: RingFingerprint

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "first_difference": self.first_difference,
            "left": self.left.to_json(),
            "right": self.right.to_json(),
        }


def compare_fingerprints(
    K: Complex, L: Complex, field: Field | str = GF2, ring_cap: int | None = None, graded_only: bool = False
) -> FingerprintComparison:
    """First differing component; graded_only ignores the bigraded table."""
    a = fingerprint(K, field, ring_cap)
    b = fingerprint(L, field, ring_cap)
    for (name, x), (_, y) in zip(a.components(), b.components()):
        if graded_only and name == "betti":
            continue
        if x != y:
            return FingerprintComparison(False, name, a, b)
    return FingerprintComparison(True, None, a, b)
