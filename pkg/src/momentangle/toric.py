"""Characteristic matrices over simplicial spheres.

A characteristic matrix Λ is an n×m integer matrix whose columns λ_i are
indexed by the vertices of K (dim K = n-1).  It is valid when every facet
selects a unimodular n×n minor.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd

import numpy as np

from .complex import Complex, ComplexError, automorphisms, bits, popcount
from .homology import _rank_q_int, is_generalized_homology_sphere


class CharMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class CharMatrix:
    K: Complex
    columns: tuple[tuple[int, ...], ...]  # m columns of length n

    def __post_init__(self):
        n = self.K.dim + 1
        if len(self.columns) != self.K.m:
            raise CharMatrixError(f"expected {self.K.m} columns, got {len(self.columns)}")
        if any(len(c) != n for c in self.columns):
            raise CharMatrixError(f"columns must have length n = {n}")

    @classmethod
    def from_rows(cls, K: Complex, rows) -> "CharMatrix":
        rows = [list(map(int, r)) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise CharMatrixError("ragged matrix")
        return cls(K, tuple(tuple(r[j] for r in rows) for j in range(len(rows[0]))))

    @property
    def n(self) -> int:
        return self.K.dim + 1

    @property
    def m(self) -> int:
        return self.K.m

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.columns, dtype=np.int64).T.reshape(self.n, self.m)

    def to_json(self) -> dict:
        return {"n": self.n, "m": self.m, "columns": [list(c) for c in self.columns]}

    @classmethod
    def from_json(cls, K: Complex, data: "str | dict") -> "CharMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        cols = tuple(tuple(int(x) for x in c) for c in data["columns"])
        if data.get("m", len(cols)) != len(cols):
            raise CharMatrixError("m does not match the number of columns")
        return cls(K, cols)


def int_det(rows: list[list[int]]) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _minor(L: CharMatrix, face: int) -> list[list[int]]:
    cols = [L.columns[v] for v in bits(face)]
    return [[c[r] for c in cols] for r in range(L.n)]


def _unimodular_columns(L: CharMatrix, face: int) -> bool:
    """The columns of the face span a direct summand of rank |face|."""
    M = _minor(L, face)
    k = popcount(face)
    g = 0
    for rows in itertools.combinations(range(L.n), k):
        g = gcd(g, int_det([M[r] for r in rows]))
        if g == 1:
            return True
    return False


@dataclass
class Validation:
    valid: bool
    failing_face: int | None = None
    determinant: int | None = None

    def __bool__(self) -> bool:
        return self.valid

    def to_json(self) -> dict:
        out = {"valid": self.valid}
        if self.failing_face is not None:
            out["failing_face"] = [v + 1 for v in bits(self.failing_face)]
            out["determinant"] = self.determinant
        return out


def validate_characteristic(L: CharMatrix, strict: bool = False) -> Validation:
    """det(λ_F) = ±1 for every facet F; strict mode checks every face."""
    for F in L.K.facets:
        if popcount(F) != L.n:
            raise ComplexError("characteristic matrices need a pure complex")
        d = int_det(_minor(L, F))
        if abs(d) != 1:
            return Validation(False, F, d)
    if strict:
        for layer in L.K.faces_by_size[1:]:
            for s in layer:
                if not _unimodular_columns(L, s):
                    return Validation(False, s, None)
    return Validation(True)


def h_vector(K: Complex, check_symmetry: bool = True) -> tuple[int, ...]:
    """h_k = Σ_i (-1)^{k-i} C(d-i, k-i) f_{i-1}, d = dim K + 1."""
    if not K.is_pure:
        raise ComplexError("h-vector needs a pure complex")
    d = K.dim + 1
    f = (1,) + K.f_vector
    h = tuple(sum((-1) ** (k - i) * comb(d - i, k - i) * f[i] for i in range(k + 1)) for k in range(d + 1))
    if check_symmetry and is_generalized_homology_sphere(K):
        assert h == h[::-1], "Dehn-Sommerville symmetry fails"
    return h


def _face_monomials(K: Complex, degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree-d monomials whose support is a face."""
    out = []
    for layer in K.faces_by_size[1 : degree + 1]:
        for s in layer:
            vs = bits(s)
            k = len(vs)
            # compositions of degree into k positive parts
            for cut in itertools.combinations(range(1, degree), k - 1):
                parts = [b - a for a, b in zip((0,) + cut, cut + (degree,))]
                e = [0] * K.m
                for v, p in zip(vs, parts):
                    e[v] = p
                out.append(tuple(e))
    return sorted(out)


def quotient_ring_ranks(L: CharMatrix, check_valid: bool = True) -> tuple[int, ...]:
    """dim_Q of the graded pieces of Q[K]/(θ_1, ..., θ_n), θ_r = Σ_j Λ_rj x_j.

    Degree d is spanned by face-supported monomials; the ideal in degree d is
    spanned by θ_r times degree d-1 monomials, with non-face terms dropped.
    """
    if check_valid and not validate_characteristic(L):
        raise CharMatrixError("characteristic matrix is not valid")
    K = L.K
    faces = set(K.faces())
    out = [1]
    d = 1
    while True:
        basis = _face_monomials(K, d)
        index = {e: i for i, e in enumerate(basis)}
        rows = []
        for e in _face_monomials(K, d - 1) if d > 1 else [tuple([0] * K.m)]:
            for r in range(L.n):
                row = [0] * len(basis)
                for j in range(K.m):
                    c = L.columns[j][r]
                    if not c:
                        continue
                    e2 = list(e)
                    e2[j] += 1
                    supp = 0
                    for v, x in enumerate(e2):
                        if x:
                            supp |= 1 << v
                    if supp in faces:
                        row[index[tuple(e2)]] += c
                rows.append(row)
        dim = len(basis) - (_rank_q_int(rows) if rows and basis else 0)
        if dim == 0:
            break
        out.append(dim)
        d += 1
        if d > K.dim + 2:
            raise AssertionError("quotient does not vanish above the top degree")
    return tuple(out)


@dataclass
class EquivalenceWitness:
    A: list[list[int]]
    signs: tuple[int, ...]  # diagonal of B
    permutation: dict[int, int] | None = None  # vertex map applied to Λ' first

    def to_json(self) -> dict:
        out = {"A": self.A, "B_diagonal": list(self.signs)}
        if self.permutation is not None:
            out["permutation"] = {str(k + 1): v + 1 for k, v in sorted(self.permutation.items())}
        return out


def _solve_A(L: CharMatrix, R: list[tuple[int, ...]], F: int) -> list[list[int]] | None:
    """A with A·R_F = Λ_F, if integral and unimodular."""
    n = L.n
    vs = bits(F)
    X = [[Fraction(R[v][r]) for v in vs] for r in range(n)]  # R_F (n×n)
    Y = [[Fraction(L.columns[v][r]) for v in vs] for r in range(n)]
    # A = Y X^{-1}: solve X^T A^T = Y^T
    aug = [[X[c][r] for c in range(n)] + [Y[i][r] for i in range(n)] for r in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [x / p for x in aug[col]]
        for i in range(n):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[col])]
    At = [row[n:] for row in aug]  # rows: index of X column -> A^T rows
    A = [[At[c][r] for c in range(n)] for r in range(n)]
    if any(x.denominator != 1 for row in A for x in row):
        return None
    A = [[int(x) for x in row] for row in A]
    if abs(int_det(A)) != 1:
        return None
    return A


def weak_equivalence(L1: CharMatrix, L2: CharMatrix, use_automorphisms: bool = False) -> tuple[bool, EquivalenceWitness | None]:
    """Search Λ1 = A·Λ2·B with A ∈ GL(n, Z) and B = diag(±1) over all 2^m sign choices."""
    if L1.n != L2.n or L1.m != L2.m:
        raise CharMatrixError("matrices have different shapes")
    if L1.K != L2.K:
        raise CharMatrixError("matrices live on different complexes")
    K = L1.K
    F = K.facets[0]
    perms = automorphisms(K) if use_automorphisms else [None]
    for perm in perms:
        cols2 = list(L2.columns)
        if perm is not None:
            moved = [None] * K.m
            for v, w in perm.items():
                moved[w] = cols2[v]
            cols2 = moved
        # the signs on F are enough to pin A; the rest are then forced
        for signs_F in itertools.product((1, -1), repeat=popcount(F)):
            signs = [1] * K.m
            for v, s in zip(bits(F), signs_F):
                signs[v] = s
            R = [tuple(s * x for x in c) for s, c in zip(signs, cols2)]
            A = _solve_A(L1, R, F)
            if A is None:
                continue
            ok = True
            for j in range(K.m):
                if F >> j & 1:
                    continue
                img = tuple(sum(A[r][c] * cols2[j][c] for c in range(L1.n)) for r in range(L1.n))
                if img == L1.columns[j]:
                    signs[j] = 1
                elif tuple(-x for x in img) == L1.columns[j]:
                    signs[j] = -1
                else:
                    ok = False
                    break
            if ok:
                return True, EquivalenceWitness(A, tuple(signs), perm)
    return False, None


def weak_equivalence_bruteforce(L1: CharMatrix, L2: CharMatrix) -> bool:
    """Reference search over every B ∈ {±1}^m, solving for A on the first facet."""
    K = L1.K
    F = K.facets[0]
    for signs in itertools.product((1, -1), repeat=K.m):
        R = [tuple(s * x for x in c) for s, c in zip(signs, L2.columns)]
        A = _solve_A(L1, R, F)
        if A is None:
            continue
        if all(
            tuple(sum(A[r][c] * R[j][c] for c in range(L1.n)) for r in range(L1.n)) == L1.columns[j]
            for j in range(K.m)
        ):
            return True
    return False


def cube_dual() -> Complex:
    """Octahedron labelled so that {i, i+3} are the missing pairs (opposite cube facets)."""
    facets = [[a, b, c] for a in (0, 3) for b in (1, 4) for c in (2, 5)]
    return Complex.from_facets(facets, 6)


def hirzebruch_family(k: int) -> CharMatrix:
    """Characteristic matrix of S^2 × H_k over the cube (columns F1, F2, F3, F1', F2', F3')."""
    rows = [[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, -1, k], [0, 0, 1, 0, 0, -1]]
    return CharMatrix.from_rows(cube_dual(), rows)


def standard_characteristic(K: Complex) -> CharMatrix | None:
    """A valid matrix for ∂Δ^n: identity plus the column of -1s."""
    n = K.dim + 1
    if K.m != n + 1:
        return None
    cols = [tuple(1 if r == j else 0 for r in range(n)) for j in range(n)] + [tuple([-1] * n)]
    L = CharMatrix(K, tuple(cols))
    return L if validate_characteristic(L) else None


def coloring_characteristic(K: Complex) -> CharMatrix | None:
    """Valid matrix from a proper (n+1)-colouring of the 1-skeleton.

    Colour i < n goes to e_i and colour n to e_1 + ... + e_n; any n distinct
    colours then give a unimodular minor.  Returns None if no colouring exists.
    """
    n = K.dim + 1
    nb = K.neighbors
    order = sorted(range(K.m), key=lambda v: -popcount(nb[v]))
    colour = [-1] * K.m

    def assign(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        used = {colour[u] for u in bits(nb[v])}
        for c in range(n + 1):
            if c not in used:
                colour[v] = c
                if assign(i + 1):
                    return True
        colour[v] = -1
        return False

    if not assign(0):
        return None
    vecs = [tuple(1 if r == c else 0 for r in range(n)) for c in range(n)] + [tuple([1] * n)]
    L = CharMatrix(K, tuple(vecs[colour[v]] for v in range(K.m)))
    return L if validate_characteristic(L) else None
