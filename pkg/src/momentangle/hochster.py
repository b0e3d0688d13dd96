"""Bigraded Betti numbers of Tor(K) through the Hochster decomposition.

For each vertex subset J the reduced cohomology of the full subcomplex K_J
contributes ``Tor^{-i,2J} = H̃^{|J|-i-1}(K_J)``.  The sweep over all ``2^m``
subsets runs in a compiled kernel for prime fields; rationals use exact
integer elimination in Python and are meant for small m.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field as dc_field

import numpy as np
from numba import njit

from .complex import CapExceeded, Complex, bits, popcount
from .homology import induced_layers, reduced_betti_layers
from .linalg import Field, GF2, _rank_mod_p

DEFAULT_SWEEP_CAP = int(os.environ.get("MOMENTANGLE_SWEEP_CAP", "24"))


@dataclass
class BettiTable:
    """Ranks of Tor^{-i,2j}(K); optionally refined by multidegree J."""

    field: Field
    m: int
    entries: dict[tuple[int, int], int]
    multigraded: dict[tuple[int, int], int] | None = dc_field(default=None, compare=False)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.entries.get(key, 0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.field == other.field and self.m == other.m and self.nonzero() == other.nonzero()

    def nonzero(self) -> dict[tuple[int, int], int]:
        return {k: v for k, v in sorted(self.entries.items()) if v}

    def total_degree_dims(self) -> list[int]:
        """dim H^p(Z_K) for p = 0 .. max, with p = -i + 2j."""
        top = max((2 * j - i for (i, j), v in self.entries.items() if v), default=0)
        out = [0] * (top + 1)
        for (i, j), v in self.entries.items():
            out[2 * j - i] += v
        return out

    def differences(self, other: "BettiTable") -> list[tuple[int, int, int, int]]:
        keys = sorted(set(self.nonzero()) | set(other.nonzero()))
        return [(i, j, self[i, j], other[i, j]) for i, j in keys if self[i, j] != other[i, j]]

    def to_json(self) -> dict:
        out = {
            "field": self.field.name,
            "entries": [{"i": i, "j": j, "rank": v} for (i, j), v in self.nonzero().items()],
        }
        if self.multigraded is not None:
            out["multigraded"] = [
                {"i": i, "J": [v + 1 for v in bits(J)], "rank": r}
                for (i, J), r in sorted(self.multigraded.items(), key=lambda t: (t[0][0], popcount(t[0][1]), bits(t[0][1])))
                if r
            ]
        return out

    @classmethod
    def from_json(cls, data: dict, m: int) -> "BettiTable":
        entries = {(e["i"], e["j"]): e["rank"] for e in data["entries"]}
        return cls(Field.parse(data["field"]), m, entries)

    def to_text(self) -> str:
        """Aligned table: rows are homological index i, columns internal j."""
        nz = self.nonzero()
        if not nz:
            return "(zero table)"
        imax = max(i for i, _ in nz)
        js = list(range(self.m + 1))
        width = max(3, max(len(str(v)) for v in nz.values()) + 1)
        head = "i\\j".rjust(4) + "".join(str(j).rjust(width) for j in js)
        lines = [f"field {self.field.name}, m = {self.m}", head]
        for i in range(imax + 1):
            row = "".join((str(nz[i, j]) if (i, j) in nz else ".").rjust(width) for j in js)
            lines.append(str(i).rjust(4) + row)
        return "\n".join(lines)


@njit(cache=True)
def _sweep_kernel(faces, layer_start, bnd, p, m, multi):
    nl = layer_start.shape[0] - 1
    nfaces = faces.shape[0]
    maxlayer = 0
    for k in range(nl):
        maxlayer = max(maxlayer, layer_start[k + 1] - layer_start[k])
    work = np.zeros((maxlayer, maxlayer), dtype=np.int64)
    local = np.empty(nfaces, dtype=np.int64)
    cnt = np.zeros(nl, dtype=np.int64)
    rk = np.zeros(nl, dtype=np.int64)
    table = np.zeros((m + 1, nl), dtype=np.int64)  # [|J|, layer] summed ranks
    nsub = 1 << m
    if multi:
        full = np.zeros((nsub, nl), dtype=np.int32)
    else:
        full = np.zeros((1, nl), dtype=np.int32)
    for J in range(nsub):
        size = 0
        x = J
        while x:
            x &= x - 1
            size += 1
        for k in range(nl):
            c = 0
            for t in range(layer_start[k], layer_start[k + 1]):
                if faces[t] & ~J == 0:
                    local[t] = c
                    c += 1
                else:
                    local[t] = -1
            cnt[k] = c
        for k in range(nl - 1):
            nr = cnt[k + 1]
            nc = cnt[k]
            if nr == 0 or nc == 0:
                rk[k] = 0
                continue
            for i in range(nr):
                for j in range(nc):
                    work[i, j] = 0
            for t in range(layer_start[k + 1], layer_start[k + 2]):
                row = local[t]
                if row < 0:
                    continue
                for j in range(k + 1):
                    col = local[bnd[t, j]]
                    work[row, col] = 1 if j % 2 == 0 else p - 1
            rk[k] = _rank_mod_p(work, nr, nc, p)
        rk[nl - 1] = 0
        for k in range(nl):
            b = cnt[k] - rk[k]
            if k > 0:
                b -= rk[k - 1]
            table[size, k] += b
            if multi:
                full[J, k] = b
    return table, full


def _flatten(K: Complex):
    layers = K.faces_by_size
    faces, starts = [], [0]
    index = {}
    for layer in layers:
        for f in layer:
            index[f] = len(faces)
            faces.append(f)
        starts.append(len(faces))
    width = max(1, len(layers) - 1)
    bnd = np.full((len(faces), width), -1, dtype=np.int64)
    for t, f in enumerate(faces):
        for j, v in enumerate(bits(f)):
            bnd[t, j] = index[f & ~(1 << v)]
    return np.array(faces, dtype=np.int64), np.array(starts, dtype=np.int64), bnd


def _check_cap(K: Complex, cap: int | None):
    cap = DEFAULT_SWEEP_CAP if cap is None else cap
    if K.m > cap:
        raise CapExceeded(f"m = {K.m} exceeds the subset-sweep cap {cap}; raise the cap to proceed")
    if K.m > 62:
        raise CapExceeded("the sweep kernel supports at most 62 vertices")


def subset_betti(K: Complex, field: Field | str = GF2, cap: int | None = None) -> np.ndarray:
    """Array ``B[J, k] = rank H̃^{k-1}(K_J)`` over all subsets J (bitmask index)."""
    field = Field.parse(field)
    _check_cap(K, cap)
    if field.char == 0:
        nl = len(K.faces_by_size)
        out = np.zeros((1 << K.m, nl), dtype=np.int32)
        for J in range(1 << K.m):
            for d, r in reduced_betti_layers(induced_layers(K, J), field).items():
                out[J, d + 1] = r
        return out
    faces, starts, bnd = _flatten(K)
    _, full = _sweep_kernel(faces, starts, bnd, field.char, K.m, True)
    return full


def bigraded_betti(
    K: Complex, field: Field | str = GF2, multigraded: bool = False, cap: int | None = None
) -> BettiTable:
    """Tor^{-i,2j}(K) with i = |J| - d - 1 for H̃^d(K_J)."""
    field = Field.parse(field)
    _check_cap(K, cap)
    if field.char == 0 or multigraded:
        return table_from_subset_ranks(subset_betti(K, field, cap), field, K.m, multigraded)
    entries: dict[tuple[int, int], int] = {}
    faces, starts, bnd = _flatten(K)
    table, _ = _sweep_kernel(faces, starts, bnd, field.char, K.m, False)
    for j in range(K.m + 1):
        for k in range(table.shape[1]):
            if table[j, k]:
                entries[j - k, j] = entries.get((j - k, j), 0) + int(table[j, k])
    return BettiTable(field, K.m, entries, None)


def table_from_subset_ranks(full: np.ndarray, field: Field, m: int, multigraded: bool = False) -> BettiTable:
    """Assemble a BettiTable from per-subset ranks full[J, d + 1]."""
    entries: dict[tuple[int, int], int] = {}
    multi: dict[tuple[int, int], int] | None = {} if multigraded else None
    Js, ks = np.nonzero(full)
    for J, k in zip(Js.tolist(), ks.tolist()):
        j = popcount(J)
        i = j - k
        r = int(full[J, k])
        if i < 0:
            raise AssertionError("negative homological index in sweep")
        entries[i, j] = entries.get((i, j), 0) + r
        if multi is not None:
            multi[i, J] = r
    return BettiTable(field, m, entries, multi)


def ma_cohomology_dims(K: Complex, field: Field | str = GF2, cap: int | None = None) -> list[int]:
    """dim H^p(Z_K) for p = 0 .. m + dim K + 1."""
    table = bigraded_betti(K, field, cap=cap)
    out = [0] * (K.m + K.dim + 2)
    for (i, j), v in table.entries.items():
        out[2 * j - i] += v
    return out


def real_ma_cohomology_dims(K: Complex, field: Field | str = GF2, cap: int | None = None) -> list[int]:
    """dim H^p(RZ_K) = Σ_J rank H̃^{p-1}(K_J), p = 0 .. dim K + 1."""
    full = subset_betti(K, field, cap)
    sums = full.sum(axis=0)
    return [int(sums[k]) for k in range(K.dim + 2)]


@dataclass
class MissingFaceReport:
    by_size_tor: dict[int, int]
    by_size_mf: dict[int, int]

    @property
    def ok(self) -> bool:
        keys = set(self.by_size_tor) | set(self.by_size_mf)
        return all(self.by_size_tor.get(j, 0) == self.by_size_mf.get(j, 0) for j in keys)


def missing_face_count_check(K: Complex, field: Field | str = GF2, table: BettiTable | None = None) -> MissingFaceReport:
    """Compare rank Tor^{-1,2j} with the number of missing faces of size j."""
    table = table or bigraded_betti(K, field)
    tor = {j: v for (i, j), v in table.nonzero().items() if i == 1}
    mf: dict[int, int] = {}
    for w in K.missing_faces:
        mf[popcount(w)] = mf.get(popcount(w), 0) + 1
    return MissingFaceReport(tor, mf)


def dumps(table: BettiTable) -> str:
    return json.dumps(table.to_json(), sort_keys=True)
