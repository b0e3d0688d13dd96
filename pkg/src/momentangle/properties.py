"""Combinatorial predicates on simplicial complexes.

Flagness, the no-□ condition, suspensions, the NSC and SCC conditions, the
class Q of flag 2-spheres and belts.  Vertex sets are bitmasks throughout.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field

import numpy as np

from .complex import CapExceeded, Complex, ComplexError, bits, core, full_subcomplex, popcount
from .constructions import induced_four_circuits
from .hochster import subset_betti
from .homology import is_generalized_homology_sphere
from .linalg import Field, GF2

DEFAULT_SCC_CAP = 10**6


class PreconditionError(ValueError):
    """The input does not satisfy the hypothesis of the check."""


# basic predicates ---------------------------------------------------------

def is_flag(K: Complex) -> bool:
    return all(popcount(w) == 2 for w in K.missing_faces)


def has_no_square(K: Complex) -> bool:
    return not induced_four_circuits(K)


@dataclass
class SuspensionInfo:
    is_suspension: bool
    omega: tuple[int, int] | None = None
    base: int | None = None  # vertex set of the factor L

    def __bool__(self) -> bool:
        return self.is_suspension


def is_suspension(K: Complex) -> SuspensionInfo:
    """K = K_ω * L for a missing pair ω = {a, b}."""
    nb = K.neighbors
    facets = set(K.facets)
    for w in K.missing_faces:
        if popcount(w) != 2:
            continue
        a, b = bits(w)
        rest = K.vertex_mask & ~w
        if nb[a] != rest or nb[b] != rest:
            continue
        link_a = {f & ~(1 << a) for f in K.facets if f >> a & 1}
        link_b = {f & ~(1 << b) for f in K.facets if f >> b & 1}
        if link_a != link_b:
            continue
        if facets == {s | 1 << a for s in link_a} | {s | 1 << b for s in link_a}:
            return SuspensionInfo(True, (a, b), rest)
    return SuspensionInfo(False)


def is_gorenstein_star(K: Complex, field: Field | str = GF2) -> bool:
    """Generalized homology sphere with no cone points."""
    return core(K)[1] == 0 and is_generalized_homology_sphere(K, field)


def _require_gorenstein(K: Complex, field: Field):
    if not is_gorenstein_star(K, field):
        raise PreconditionError("the complex is not Gorenstein*")


# NSC ----------------------------------------------------------------------

@dataclass
class NscReport:
    holds: bool
    witness: tuple[tuple[int, int], int] | None = None  # (ω, J) with K_{ω∪J} = K_ω * K_J

    def __bool__(self) -> bool:
        return self.holds


def nsc_report(K: Complex, field: Field | str = GF2, sweep_cap: int = 22) -> NscReport:
    """No full subcomplex K_ω * K_J (ω a missing pair) with H̃^{n-2}(K_J) ≠ 0.

    Such a K_{ω ∪ J} is a suspension carrying H̃^{n-1}.  K_J must lie in both
    links of ω, so J ranges over subsets of the common neighbours.
    """
    field = Field.parse(field)
    _require_gorenstein(K, field)
    n = K.dim
    nb = K.neighbors
    faces = set(K.faces())
    flag = is_flag(K)
    for w in K.missing_faces:
        if popcount(w) != 2:
            continue
        a, b = bits(w)
        C = nb[a] & nb[b]
        if n - 2 == -1:
            return NscReport(False, ((a, b), 0))
        if n - 2 < -1 or C == 0:
            continue
        if popcount(C) > sweep_cap:
            raise CapExceeded(f"common link of {a + 1},{b + 1} has {popcount(C)} vertices")
        sub, labels = full_subcomplex(K, C)
        table = subset_betti(sub, field)
        k = n - 1  # column of H̃^{n-2}
        if k >= table.shape[1]:
            continue
        for Jl in np.nonzero(table[:, k])[0]:
            J = 0
            for i in bits(int(Jl)):
                J |= 1 << labels[i]
            if not flag and not _joins_both(K, J, a, b, faces):
                continue
            return NscReport(False, ((a, b), J))
    return NscReport(True)


def _joins_both(K: Complex, J: int, a: int, b: int, faces: set[int]) -> bool:
    for f in K.facets:
        s = f & J
        if (s | 1 << a) not in faces or (s | 1 << b) not in faces:
            return False
    return True


def satisfies_nsc(K: Complex, field: Field | str = GF2) -> bool:
    return nsc_report(K, field).holds


# SCC ----------------------------------------------------------------------

WITNESS, NONE, UNKNOWN = "witness", "none", "unknown"


@dataclass
class TripleResult:
    omega: tuple[int, int]
    excluded: int
    status: str
    witness: int | None = None
    extensions: int = 0


@dataclass
class SccReport:
    verdict: str  # holds | fails | unknown
    cap: int
    results: list[TripleResult] = dc_field(default_factory=list)
    exhaustive: bool = True  # every triple was examined

    @property
    def failures(self) -> list[TripleResult]:
        return [r for r in self.results if r.status == NONE]

    @property
    def unknown(self) -> list[TripleResult]:
        return [r for r in self.results if r.status == UNKNOWN]

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "cap": self.cap,
            "triples": len(self.results),
            "exhaustive": self.exhaustive,
            "failures": [
                {"omega": [v + 1 for v in r.omega], "excluded": r.excluded + 1} for r in self.failures
            ],
            "unknown": len(self.unknown),
        }


def _connected(nb: tuple[int, ...], allowed: int, s: int, t: int) -> bool:
    seen = 1 << s
    frontier = 1 << s
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= nb[v] & allowed
        nxt &= ~seen
        if nxt >> t & 1:
            return True
        seen |= nxt
        frontier = nxt
    return False


def _shortest_path(nb: tuple[int, ...], allowed: int, s: int, t: int) -> list[int] | None:
    prev = {s: None}
    frontier = [s]
    while frontier:
        nxt = []
        for v in frontier:
            for u in bits(nb[v] & allowed):
                if u not in prev:
                    prev[u] = v
                    if u == t:
                        path = [t]
                        while prev[path[-1]] is not None:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    nxt.append(u)
        frontier = nxt
    return None


def separating_circuit(K: Complex, a: int, b: int, k: int, cap: int = DEFAULT_SCC_CAP) -> TripleResult:
    """Search for an induced cycle I ∋ a, b avoiding k with K_{k ∪ I∖{a,b}} disconnected.

    The cycle splits into two chordless a-b paths.  K_J is disconnected iff one
    of them (P) has no interior vertex adjacent to k.  P is grown by DFS over
    induced paths from a.  The other side exists iff a and b stay joined once
    k, int P and the neighbours of int P are removed, and then a shortest such
    path is chordless.  That removed set only grows along the DFS, so a
    disconnection prunes the whole subtree.
    """
    nb = K.neighbors
    full = K.vertex_mask
    ends = (1 << a) | (1 << b)
    avoid_k = full & ~nb[k] & ~(1 << k) & ~ends  # allowed interior of P
    base_q = full & ~(1 << k) & ~ends

    def q_side(hood: int) -> int:
        return (base_q & ~hood) | (1 << b)

    count = 0
    # state: (last vertex, interior, closed neighbourhood of the interior,
    #         the same without the last vertex)
    stack = [(a, 0, 0, 0)]
    while stack:
        last, interior, hood, prev_hood = stack.pop()
        count += 1
        if count > cap:
            return TripleResult((a, b), k, UNKNOWN, None, count)
        if interior and nb[last] >> b & 1:
            q = _shortest_path(nb, q_side(hood), a, b)
            if q is not None:
                I = interior | ends
                for v in q:
                    I |= 1 << v
                return TripleResult((a, b), k, WITNESS, I, count)
            continue  # last touches b, so the path must close here
        blocked = prev_hood | (1 << a) | interior
        if interior:
            blocked |= nb[a]  # only the first interior vertex may touch a
        cand = nb[last] & avoid_k & ~blocked
        for w in sorted(bits(cand), reverse=True):
            new_hood = hood | nb[w] | (1 << w)
            if _connected(nb, q_side(new_hood), a, b):
                stack.append((w, interior | 1 << w, new_hood, hood))
    return TripleResult((a, b), k, NONE, None, count)


def _scc_precondition(K: Complex):
    if K.m < 3:
        raise PreconditionError("SCC needs at least 3 vertices")
    if not is_flag(K):
        raise PreconditionError("SCC is defined for flag complexes")
    if core(K)[1]:
        raise PreconditionError("SCC is defined for complexes equal to their core")


def scc_triples(K: Complex) -> list[tuple[int, int, int]]:
    out = []
    for w in K.missing_faces:
        a, b = bits(w)
        for k in range(K.m):
            if k != a and k != b:
                out.append((a, b, k))
    return out


def satisfies_scc(
    K: Complex,
    search_cap: int = DEFAULT_SCC_CAP,
    triples: list[tuple[int, int, int]] | None = None,
    sample: int | None = None,
    seed: int = 0,
    stop_on_failure: bool = False,
) -> SccReport:
    """Check the separable circuit condition triple by triple."""
    _scc_precondition(K)
    all_triples = scc_triples(K)
    exhaustive = triples is None and sample is None
    if triples is None:
        triples = all_triples
        if sample is not None and sample < len(triples):
            triples = random.Random(seed).sample(triples, sample)
    results = []
    for a, b, k in triples:
        r = separating_circuit(K, a, b, k, search_cap)
        results.append(r)
        if stop_on_failure and r.status == NONE:
            exhaustive = False
            break
    if any(r.status == NONE for r in results):
        verdict = "fails"
    elif any(r.status == UNKNOWN for r in results) or not exhaustive:
        verdict = "unknown"
    else:
        verdict = "holds"
    return SccReport(verdict, search_cap, results, exhaustive)


def check_scc_witness(K: Complex, a: int, b: int, k: int, I: int) -> bool:
    """Independent verification of a witness I for the triple (a, b, k)."""
    from .homology import reduced_betti

    if not (I >> a & 1 and I >> b & 1) or I >> k & 1:
        return False
    sub, _ = full_subcomplex(K, I)
    if sub.m < 4 or sub.dim != 1 or any(popcount(f) != 2 for f in sub.facets):
        return False
    if any(popcount(n) != 2 for n in sub.neighbors):
        return False
    if reduced_betti(sub).get(0, 0) != 0:  # connected 2-regular graph is a cycle
        return False
    J = (I & ~((1 << a) | (1 << b))) | 1 << k
    kj, _ = full_subcomplex(K, J)
    return reduced_betti(kj).get(0, 0) > 0


# 2-spheres ----------------------------------------------------------------

def _require_2sphere(K: Complex):
    if K.dim != 2 or not is_generalized_homology_sphere(K, GF2):
        raise PreconditionError("the complex is not a simplicial 2-sphere")


def class_q_membership(K: Complex) -> bool:
    """Flag 2-sphere whose induced 4-circuits are all vertex links."""
    _require_2sphere(K)
    if not is_flag(K):
        return False
    links = {K.neighbors[v] for v in range(K.m) if popcount(K.neighbors[v]) == 4}
    for a, x, b, y in induced_four_circuits(K):
        if (1 << a | 1 << x | 1 << b | 1 << y) not in links:
            return False
    return True


def separating_circuit_witness(K: Complex, omega: tuple[int, int], i_s: int, cap: int = DEFAULT_SCC_CAP) -> int:
    """The separating circuit guaranteed for 2-spheres in Q under the link hypothesis.

    Raises PreconditionError when the hypothesis fails and RuntimeError if no
    witness is found, which would contradict the existence result.
    """
    a, b = sorted(omega)
    if not class_q_membership(K):
        raise PreconditionError("the complex is not in class Q")
    if K.is_edge(a, b) or a == b:
        raise PreconditionError("omega is not a missing pair")
    if i_s in (a, b):
        raise PreconditionError("i_s lies in omega")
    for v in (a, b):
        if K.is_edge(v, i_s) and popcount(K.neighbors[v]) == 4:
            raise PreconditionError(f"vertex {v + 1} is adjacent to i_s and has a 4-circuit link")
    r = separating_circuit(K, a, b, i_s, cap)
    if r.status != WITNESS:
        raise RuntimeError(f"no separating circuit found ({r.status}) for {omega}, {i_s}")
    return r.witness


def witness_hypothesis_holds(K: Complex, a: int, b: int, i_s: int) -> bool:
    return not any(K.is_edge(v, i_s) and popcount(K.neighbors[v]) == 4 for v in (a, b))


def induced_cycles(K: Complex, length: int) -> list[int]:
    """Vertex sets of chordless cycles of the 1-skeleton with the given length."""
    nb = K.neighbors
    out = set()
    for s in range(K.m):
        higher = K.vertex_mask & ~((1 << (s + 1)) - 1)
        stack = [(s, 1 << s, 1)]
        while stack:
            last, used, size = stack.pop()
            if size == length:
                out.add(used)
                continue
            blocked = used
            for v in bits(used & ~(1 << s) & ~(1 << last)):
                blocked |= nb[v]
            cand = nb[last] & higher & ~blocked
            if size + 1 == length:
                cand &= nb[s]  # the final vertex closes the cycle
            elif size >= 2:
                cand &= ~nb[s]
            for w in bits(cand):
                stack.append((w, used | 1 << w, size + 1))
    return sorted(out)


def belts(K: Complex, k: int) -> list[tuple[int, ...]]:
    """k-belts of the dual simple polytope as vertex sets of K."""
    _require_2sphere(K)
    if k < 3:
        raise ValueError("belts have length at least 3")
    cycles = induced_cycles(K, k)
    if k == 3:
        cycles = [c for c in cycles if not K.is_face(c)]
    return [tuple(bits(c)) for c in cycles]


# report ---------------------------------------------------------------------

def props_report(K: Complex, field: Field | str = GF2, scc_cap: int = DEFAULT_SCC_CAP) -> dict:
    field = Field.parse(field)
    susp = is_suspension(K)
    gor = is_gorenstein_star(K, field)
    out = {
        "m": K.m,
        "dim": K.dim,
        "f_vector": list(K.f_vector),
        "flag": is_flag(K),
        "no_square": has_no_square(K),
        "suspension": bool(susp),
        "gorenstein_star": gor,
        "nsc": None,
        "scc": None,
        "class_q": None,
    }
    if gor:
        try:
            out["nsc"] = satisfies_nsc(K, field)
        except CapExceeded as e:
            out["nsc"] = f"unknown: {e}"
    try:
        out["scc"] = satisfies_scc(K, scc_cap, stop_on_failure=True).to_json()
    except PreconditionError as e:
        out["scc"] = {"verdict": "undefined", "reason": str(e)}
    if K.dim == 2 and gor:
        out["class_q"] = class_q_membership(K)
    return out
