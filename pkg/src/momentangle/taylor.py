"""Tor(K) from the Taylor resolution of the Stanley-Reisner ideal.

Basis elements are subsets ``u`` of the missing faces (bitmasks over the
ordered list ``MF(K)``); ``S_u`` is the union of their vertex sets.  After
tensoring with k the differential keeps only the terms that do not change the
multidegree:

    d(u) = Σ_i (-1)^i ε_i ∂_i u,   ε_i = 1 iff S_{∂_i u} = S_u,

with ``i`` the 0-based position inside u.  The complex therefore splits by
multidegree J = S_u and each block is graded by |u|.

Beyond the size cap the Lyubeznik subcomplex (same differential, much smaller
basis) can be used for ranks; the ×-product needs the full complex.
"""
from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .complex import CapExceeded, Complex, bits, popcount
from .hochster import BettiTable
from .homology import _subquotient
from .linalg import Field, GF2, is_zero, matmul, rank, rank_gf2_bits, row_space

DEFAULT_TAYLOR_CAP = int(os.environ.get("MOMENTANGLE_TAYLOR_CAP", "16"))


def _supports(mf: list[int]) -> np.ndarray:
    n = len(mf)
    S = np.zeros(1 << n, dtype=np.int64)
    for u in range(1, 1 << n):
        low = u & -u
        S[u] = S[u ^ low] | mf[low.bit_length() - 1]
    return S


def lyubeznik_basis(mf: list[int]) -> list[int]:
    """L-admissible subsets of the ordered generator list (closed under subsets).

    u = {i_1 < ... < i_q} is admissible iff for every t < q no generator with
    index below i_t is contained in the union of m_{i_t}, ..., m_{i_q}.
    """
    out = [0]

    def grow(low: int, u: int, S: int):
        out.append(u)
        for i in range(low):
            S2 = S | mf[i]
            if all(mf[j] & S2 != mf[j] for j in range(i)):
                grow(i, u | 1 << i, S2)

    for q in range(len(mf)):
        grow(q, 1 << q, mf[q])
    return out


@dataclass
class TaylorBlock:
    """The part of the complex in one multidegree J."""

    J: int
    basis: dict[int, list[int]]  # |u| -> sorted basis elements
    index: dict[int, dict[int, int]]
    d: dict[int, np.ndarray]  # q -> matrix C_q -> C_{q-1}, shape (n_{q-1}, n_q)
    ranks: dict[int, int] | None = None  # q -> rank d_q, filled by the sparse reduction


class TaylorComplex:
    """The Taylor complex (or its Lyubeznik subcomplex) tensored with k."""

    def __init__(self, K: Complex, field: Field | str = GF2, cap: int | None = None, mode: str = "taylor"):
        self.K = K
        self.field = Field.parse(field)
        self.mf = list(K.missing_faces)
        cap = DEFAULT_TAYLOR_CAP if cap is None else cap
        if mode == "auto":
            mode = "taylor" if len(self.mf) <= cap else "lyubeznik"
        if mode == "taylor" and len(self.mf) > cap:
            raise CapExceeded(f"|MF| = {len(self.mf)} exceeds the Taylor cap {cap}")
        if mode not in ("taylor", "lyubeznik"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        if mode == "taylor":
            S = _supports(self.mf)
            elems = range(1 << len(self.mf))
            support = lambda u: int(S[u])  # noqa: E731
        else:
            elems = lyubeznik_basis(self.mf)
            support = self.support
        groups: dict[int, dict[int, list[int]]] = {}
        for u in elems:
            groups.setdefault(support(u), {}).setdefault(popcount(u), []).append(u)
        self.blocks: dict[int, TaylorBlock] = {}
        for J, by_q in groups.items():
            for q in by_q:
                by_q[q].sort()
            index = {q: {u: i for i, u in enumerate(us)} for q, us in by_q.items()}
            self.blocks[J] = TaylorBlock(J, by_q, index, {})
        self._homology: dict[int, dict] = {}

    @property
    def size(self) -> int:
        return sum(len(us) for b in self.blocks.values() for us in b.basis.values())

    def support(self, u: int) -> int:
        S = 0
        for i in bits(u):
            S |= self.mf[i]
        return S

    def differential(self, J: int, q: int) -> np.ndarray:
        """Matrix of d: C_q(J) -> C_{q-1}(J)."""
        blk = self.blocks[J]
        if q in blk.d:
            return blk.d[q]
        src = blk.basis.get(q, [])
        tgt = blk.index.get(q - 1, {})
        mat = self.field.zeros((len(tgt), len(src)))
        for c, u in enumerate(src):
            for pos, i in enumerate(bits(u)):
                v = u & ~(1 << i)
                r = tgt.get(v)
                if r is not None:  # present in block J iff S_v == S_u
                    mat[r, c] = self.field.scalar(-1 if pos % 2 else 1)
        blk.d[q] = mat
        return mat

    def check_d_squared(self) -> bool:
        for J, blk in self.blocks.items():
            for q in blk.basis:
                if q - 2 in blk.basis:
                    prod = matmul(self.differential(J, q - 1), self.differential(J, q), self.field)
                    if not is_zero(prod):
                        return False
        return True

    def _rank(self, J: int, q: int) -> int:
        blk = self.blocks[J]
        if q not in blk.basis or q - 1 not in blk.basis:
            return 0
        if self.field.char == 2:
            tgt = blk.index[q - 1]
            rows = []
            for u in blk.basis[q]:
                v = 0
                for i in bits(u):
                    r = tgt.get(u & ~(1 << i))
                    if r is not None:
                        v |= 1 << r
                rows.append(v)
            return rank_gf2_bits(rows)
        if self.field.char > 2:
            return self._sparse_ranks(J)[q]
        return rank(self.differential(J, q), self.field)

    def _sparse_ranks(self, J: int) -> dict[int, int]:
        """Ranks of every d_q in block J over GF(p) by sparse column reduction.

        Columns are reduced left to right by their lowest (largest) row.  A
        row that is the pivot of a reduced column of d_{q+1} indexes a column
        of d_q that must reduce to zero, so it is skipped.
        """
        blk = self.blocks[J]
        if blk.ranks is not None:
            return blk.ranks
        p = self.field.char
        out = {q: 0 for q in blk.basis}
        cleared: set[int] = set()
        for q in sorted(blk.basis, reverse=True):
            tgt = blk.index.get(q - 1)
            if tgt is None:
                cleared = set()
                continue
            below = blk.basis[q - 1]
            pivots: dict[int, dict[int, int]] = {}
            nxt: set[int] = set()
            for u in blk.basis[q]:
                if u in cleared:
                    continue
                col = {}
                for pos, i in enumerate(bits(u)):
                    r = tgt.get(u & ~(1 << i))
                    if r is not None:
                        col[r] = p - 1 if pos % 2 else 1
                while col:
                    low = max(col)
                    piv = pivots.get(low)
                    if piv is None:
                        pivots[low] = col
                        nxt.add(below[low])
                        out[q] += 1
                        break
                    c = col[low] * pow(piv[low], p - 2, p) % p
                    for k, val in piv.items():
                        nv = (col.get(k, 0) - c * val) % p
                        if nv:
                            col[k] = nv
                        else:
                            col.pop(k, None)
            cleared = nxt
        blk.ranks = out
        return out

    def block_betti(self, J: int) -> dict[int, int]:
        blk = self.blocks.get(J)
        if blk is None:
            return {}
        out = {}
        for q, us in blk.basis.items():
            b = len(us) - self._rank(J, q) - self._rank(J, q + 1)
            if b:
                out[q] = b
        return out

    def tor_table(self, multigraded: bool = False) -> BettiTable:
        entries: dict[tuple[int, int], int] = {}
        multi = {} if multigraded else None
        for J in sorted(self.blocks):
            for q, b in self.block_betti(J).items():
                key = (q, popcount(J))
                entries[key] = entries.get(key, 0) + b
                if multi is not None:
                    multi[q, J] = b
        return BettiTable(self.field, self.K.m, entries, multi)

    # homology bases and the ×-product -----------------------------------
    def homology(self, J: int) -> dict[int, tuple[np.ndarray, np.ndarray]]:
        """q -> (cycle representatives, projection to coordinates)."""
        if J in self._homology:
            return self._homology[J]
        out = {}
        blk = self.blocks.get(J)
        if blk is not None:
            for q, us in blk.basis.items():
                outgoing = self.differential(J, q) if q - 1 in blk.basis else None
                incoming = self.differential(J, q + 1) if q + 1 in blk.basis else None
                reps, proj = _subquotient(incoming, outgoing, len(us), self.field)
                if reps.shape[0]:
                    out[q] = (reps, proj)
        self._homology[J] = out
        return out

    def product(self, J1: int, q1: int, x: np.ndarray, J2: int, q2: int, y: np.ndarray) -> np.ndarray:
        """×-product of homology classes given by coordinate vectors."""
        if self.mode != "taylor":
            raise ValueError("the ×-product needs the full Taylor complex")
        J, q = J1 | J2, q1 + q2
        H = self.homology(J)
        dim = H[q][0].shape[0] if q in H else 0
        if J1 & J2 or dim == 0:
            return self.field.zeros((dim,))
        z1 = matmul(x.reshape(1, -1), self.homology(J1)[q1][0], self.field)[0]
        z2 = matmul(y.reshape(1, -1), self.homology(J2)[q2][0], self.field)[0]
        blk1, blk2, blk = self.blocks[J1], self.blocks[J2], self.blocks[J]
        z = self.field.zeros((len(blk.basis[q1 + q2]),))
        for a, ca in zip(blk1.basis[q1], z1):
            if ca == 0:
                continue
            for b, cb in zip(blk2.basis[q2], z2):
                if cb == 0:
                    continue
                sign = _shuffle_sign(a, b)
                z[blk.index[q1 + q2][a | b]] += self.field.scalar(sign) * ca * cb
        z = self.field.reduce(z)
        return matmul(z.reshape(1, -1), H[q1 + q2][1], self.field)[0]


def _shuffle_sign(a: int, b: int) -> int:
    """Sign of sorting the concatenation (elements of a, then elements of b)."""
    inv = 0
    for i in bits(b):
        inv += popcount(a >> (i + 1))
    return -1 if inv % 2 else 1


def build_taylor(K: Complex, field: Field | str = GF2, cap: int | None = None, mode: str = "taylor") -> TaylorComplex:
    T = TaylorComplex(K, field, cap, mode)
    if not T.check_d_squared():
        raise AssertionError("Taylor differential does not square to zero")
    return T


def tor_dims_via_taylor(
    K: Complex, field: Field | str = GF2, multigraded: bool = False, cap: int | None = None, mode: str = "auto"
) -> BettiTable:
    return TaylorComplex(K, field, cap, mode).tor_table(multigraded)


def taylor_product(T: TaylorComplex, a: tuple[int, int, np.ndarray], b: tuple[int, int, np.ndarray]) -> tuple[int, int, np.ndarray]:
    """×-product of classes given as (multidegree J, homological degree q, coordinates)."""
    (J1, q1, x), (J2, q2, y) = a, b
    return J1 | J2, q1 + q2, T.product(J1, q1, x, J2, q2, y)


def taylor_power_dims(T: TaylorComplex, max_k: int | None = None) -> dict[int, dict[int, int]]:
    """dims[k][total degree] of the k-th power of Tor⁺ under the ×-product.

    Total degree of a class in block (J, q) is 2|J| - q.  Products are split
    with the lowest vertex of J in the right factor, which graded
    commutativity allows.
    """
    f = T.field
    pieces: dict[int, list[int]] = {}
    for J in T.blocks:
        if J:
            H = T.homology(J)
            if H:
                pieces[J] = sorted(H)
    P: dict[tuple[int, int], np.ndarray] = {
        (J, q): f.identity(T.homology(J)[q][0].shape[0]) for J, qs in pieces.items() for q in qs
    }

    def degree_dims(P) -> dict[int, int]:
        out: dict[int, int] = {}
        for (J, q), v in P.items():
            deg = 2 * popcount(J) - q
            out[deg] = out.get(deg, 0) + v.shape[0]
        return dict(sorted(out.items()))

    dims = {1: degree_dims(P)}
    k = 1
    while P and (max_k is None or k < max_k):
        k += 1
        new: dict[tuple[int, int], np.ndarray] = {}
        for J, qs in pieces.items():
            if popcount(J) < k:
                continue
            low = J & -J
            rest = J & ~low
            for q in qs:
                rows = []
                S = rest
                while True:
                    B = low | S
                    A = J & ~B
                    if A and B in pieces:
                        for qb in pieces[B]:
                            pa = (A, q - qb)
                            if pa not in P:
                                continue
                            nb = T.homology(B)[qb][0].shape[0]
                            for v in P[pa]:
                                for i in range(nb):
                                    e = f.zeros((nb,))
                                    e[i] = f.one
                                    rows.append(T.product(A, q - qb, v, B, qb, e))
                    if S == 0:
                        break
                    S = (S - 1) & rest
                if rows:
                    sp = row_space(np.stack(rows), f)
                    if sp.shape[0]:
                        new[J, q] = sp
        P = new
        if P:
            dims[k] = degree_dims(P)
    return dims
