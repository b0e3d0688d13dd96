"""Exact linear algebra over GF(p) and the rationals.

Matrices are numpy arrays: ``int64`` reduced mod p for prime fields, ``object``
arrays of :class:`fractions.Fraction` for the rationals.  Elimination always
picks the leftmost available pivot in the topmost row, so results are
reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from numba import njit

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


@dataclass(frozen=True)
class Field:
    """A coefficient field: ``char == 0`` means the rationals."""

    char: int

    def __post_init__(self):
        if self.char != 0 and self.char not in _SMALL_PRIMES:
            raise ValueError(f"unsupported field characteristic {self.char}")

    @classmethod
    def parse(cls, tag: "str | int | Field") -> "Field":
        if isinstance(tag, Field):
            return tag
        if isinstance(tag, int):
            return cls(tag)
        t = tag.strip().lower()
        if t in ("q", "qq", "rational", "rationals"):
            return cls(0)
        if t.startswith("gf"):
            t = t[2:]
        try:
            return cls(int(t))
        except ValueError:
            raise ValueError(f"unknown field {tag!r}") from None

    @property
    def name(self) -> str:
        return "q" if self.char == 0 else f"gf{self.char}"

    def __str__(self) -> str:
        return self.name

    @property
    def dtype(self):
        return object if self.char == 0 else np.int64

    def zeros(self, shape) -> np.ndarray:
        if self.char == 0:
            z = np.empty(shape, dtype=object)
            z.fill(Fraction(0))
            return z
        return np.zeros(shape, dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        a = self.zeros((n, n))
        for i in range(n):
            a[i, i] = self.one
        return a

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def array(self, data) -> np.ndarray:
        if self.char == 0:
            a = np.array(data, dtype=object)
            if a.size:
                flat = a.reshape(-1)
                for i, x in enumerate(flat):
                    flat[i] = Fraction(x)
            return a
        return np.mod(np.array(data, dtype=np.int64), self.char)

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.char == 0:
            return a
        return np.mod(a, self.char)

    def scalar(self, x):
        return Fraction(x) if self.char == 0 else x % self.char

    def inv(self, x):
        if self.char == 0:
            return 1 / Fraction(x)
        return pow(int(x), self.char - 2, self.char)


GF2 = Field(2)
GF3 = Field(3)
QQ = Field(0)


def rref(a: np.ndarray, field: Field) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns (copy; input untouched)."""
    r = field.reduce(a.copy())
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row == rows:
            break
        nz = np.nonzero(r[row:, col] != 0)[0]
        if nz.size == 0:
            continue
        p = row + int(nz[0])
        if p != row:
            r[[row, p]] = r[[p, row]]
        piv = r[row, col]
        if piv != field.one:
            r[row] = field.reduce(r[row] * field.inv(piv))
        others = np.nonzero(r[:, col] != 0)[0]
        for o in others:
            if o != row:
                r[o] = field.reduce(r[o] - r[o, col] * r[row])
        pivots.append(col)
        row += 1
    return r[:row], pivots


def rank(a: np.ndarray, field: Field) -> int:
    if a.size == 0:
        return 0
    if field.char == 2:
        return _rank_gf2(a)
    if field.char == 0:
        return len(rref(a, field)[1])
    work = np.ascontiguousarray(np.mod(a, field.char), dtype=np.int64)
    return int(_rank_mod_p(work, work.shape[0], work.shape[1], field.char))


@njit(cache=True)
def _rank_mod_p(a, nr, nc, p):
    r = 0
    for c in range(nc):
        piv = -1
        for i in range(r, nr):
            if a[i, c] % p != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, nc):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = 1
        x = a[r, c] % p
        e = p - 2
        while e > 0:
            if e & 1:
                inv = inv * x % p
            x = x * x % p
            e >>= 1
        for j in range(c, nc):
            a[r, j] = a[r, j] * inv % p
        for i in range(r + 1, nr):
            f = a[i, c] % p
            if f != 0:
                for j in range(c, nc):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        r += 1
        if r == nr:
            break
    return r


def _rank_gf2(a: np.ndarray) -> int:
    # rows packed into python ints; xor elimination
    rows = []
    for row in np.asarray(a) & 1:
        v = 0
        for j in np.nonzero(row)[0]:
            v |= 1 << int(j)
        if v:
            rows.append(v)
    return rank_gf2_bits(rows)


def rank_gf2_bits(rows: list[int]) -> int:
    """Rank of GF(2) row vectors given as integer bitmasks."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            h = v.bit_length() - 1
            b = basis.get(h)
            if b is None:
                basis[h] = v
                break
            v ^= b
    return len(basis)


def nullspace(a: np.ndarray, field: Field) -> np.ndarray:
    """Rows spanning {x : a @ x = 0}, in reduced form."""
    rows, cols = a.shape
    if rows == 0:
        return field.identity(cols)
    r, piv = rref(a, field)
    free = [c for c in range(cols) if c not in set(piv)]
    out = field.zeros((len(free), cols))
    for k, f in enumerate(free):
        out[k, f] = field.one
        for i, p in enumerate(piv):
            out[k, p] = field.reduce(np.array([-r[i, f]], dtype=field.dtype))[0]
    return out


def row_space(a: np.ndarray, field: Field) -> np.ndarray:
    if a.shape[0] == 0:
        return a
    return rref(a, field)[0]


def extend_basis(base: np.ndarray, candidates: np.ndarray, field: Field) -> list[int]:
    """Indices of candidate rows that greedily extend the span of ``base``."""
    chosen: list[int] = []
    cur, piv = (rref(base, field) if base.shape[0] else (base, []))
    cur_rank = len(piv)
    for i in range(candidates.shape[0]):
        trial = np.vstack([cur, candidates[i : i + 1]]) if cur.shape[0] else candidates[i : i + 1]
        r2, p2 = rref(trial, field)
        if len(p2) > cur_rank:
            chosen.append(i)
            cur, cur_rank = r2, len(p2)
    return chosen


def inverse(a: np.ndarray, field: Field) -> np.ndarray:
    n = a.shape[0]
    aug = np.hstack([field.reduce(a.copy()), field.identity(n)])
    r, piv = rref(aug, field)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return r[:n, n:]


def matmul(a: np.ndarray, b: np.ndarray, field: Field) -> np.ndarray:
    if field.char == 0:
        if a.shape[1] == 0:
            return field.zeros((a.shape[0], b.shape[1]))
        return a.dot(b)
    return np.mod(a @ b, field.char)


def is_zero(a: np.ndarray) -> bool:
    return not np.any(a != 0)
