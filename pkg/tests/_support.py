"""Shared generators and brute-force oracles for the test suite."""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from momentangle.complex import Complex, bits, popcount, to_mask

CORPUS = [
    "simplex_boundary(1)",
    "simplex_boundary(2)",
    "simplex_boundary(3)",
    "simplex_boundary(4)",
    "simplex_boundary(5)",
    "c(4)",
    "c(5)",
    "c(6)",
    "c(7)",
    "c(8)",
    "O6",
    "T4",
    "I12",
    "b(6)",
    "b(7)",
    "b(8)",
    "b(9)",
    "path(3)",
    "path(4)",
    "path(6)",
]


def random_complex(rng: np.random.Generator, m_max: int = 8, m_min: int = 1) -> Complex:
    m = int(rng.integers(m_min, m_max + 1))
    facets = [1 << v for v in range(m)]
    for _ in range(int(rng.integers(1, 2 * m + 2))):
        size = int(rng.integers(2, min(m, 4) + 1)) if m >= 2 else 1
        facets.append(to_mask(rng.choice(m, size=size, replace=False).tolist()))
    return Complex(m, facets)


def random_tree(rng: np.random.Generator, m: int) -> Complex:
    edges = [1 << v | 1 << int(rng.integers(0, v)) for v in range(1, m)]
    return Complex(m, edges or [1])


@st.composite
def complexes(draw, max_m: int = 7, min_m: int = 1):
    m = draw(st.integers(min_m, max_m))
    extra = draw(st.lists(st.sets(st.integers(0, m - 1), min_size=1, max_size=min(m, 4)), max_size=2 * m))
    return Complex(m, [1 << v for v in range(m)] + [to_mask(f) for f in extra])


# independent linear algebra ------------------------------------------------

def rank_exact(rows: list[list[int]], p: int) -> int:
    """Row rank over GF(p), or over Q when p == 0, by textbook elimination."""
    a = [[Fraction(x) if p == 0 else x % p for x in r] for r in rows]
    if not a:
        return 0
    n = len(a[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c] if p == 0 else pow(a[r][c], p - 2, p)
        a[r] = [x * inv if p == 0 else x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y if p == 0 else (x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def all_faces(K: Complex) -> set[int]:
    out = {0}
    for f in K.facets:
        vs = bits(f)
        for k in range(1, len(vs) + 1):
            for c in itertools.combinations(vs, k):
                out.add(to_mask(c))
    return out


def brute_reduced_betti(K: Complex, vertex_set: int, p: int) -> dict[int, int]:
    """Reduced Betti numbers of K_J from the augmented chain complex."""
    faces = sorted((f for f in all_faces(K) if f & vertex_set == f), key=lambda f: (popcount(f), bits(f)))
    by_dim: dict[int, list[int]] = {}
    for f in faces:
        by_dim.setdefault(popcount(f) - 1, []).append(f)
    ranks = {}
    for d, fs in by_dim.items():
        lower = by_dim.get(d - 1, [])
        idx = {g: i for i, g in enumerate(lower)}
        rows = []
        for f in fs:
            row = [0] * len(lower)
            for pos, v in enumerate(bits(f)):
                if lower:
                    row[idx[f & ~(1 << v)]] = (-1) ** pos
            rows.append(row)
        ranks[d] = rank_exact(rows, p) if lower else 0
    out = {}
    for d, fs in by_dim.items():
        b = len(fs) - ranks[d] - ranks.get(d + 1, 0)
        if b:
            out[d] = b
    return out


def brute_missing_faces(K: Complex) -> list[int]:
    faces = all_faces(K)
    out = []
    for S in range(1, 1 << K.m):
        if S in faces:
            continue
        if all((S & ~(1 << v)) in faces for v in bits(S)):
            out.append(S)
    return sorted(out, key=lambda f: (popcount(f), bits(f)))


# brute-force ring oracles ---------------------------------------------------

def flat_basis(R, degree: int | None = None):
    """Basis elements of R (optionally of one total degree) with flat indices."""
    out = []
    for p in R.pieces(degree, positive=False):
        for i in range(R.rank(*p)):
            out.append(R.gen(p[0], p[1], i))
    return out


def vectors(field_char: int, n: int):
    return itertools.product(range(field_char), repeat=n)


def combine(R, basis, coeffs):
    x = R.zero()
    for c, b in zip(coeffs, basis):
        if c:
            x = x + b.scale(c)
    return x
