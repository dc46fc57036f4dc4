"""Truncated simplicial sets with precomputed face and degeneracy tables.

Level n simplices are integer ids 0..size(n)-1.  ``faces[n][i]`` maps level n
to level n-1 and ``degens[n][i]`` maps level n to level n+1 (only for n < N),
both as numpy arrays, so identity checks are vectorized table scans.

Nerves use the opposite convention: an n-simplex is a chain
c_0 <-f_1- c_1 <-f_2- ... <-f_n- c_n stored as the row (f_1, ..., f_n), with
d_0 dropping f_1, d_n dropping f_n and d_i replacing (f_i, f_{i+1}) by f_i o f_{i+1}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from ..catsys import FiniteCategory

DEFAULT_N = 4


@dataclass
class IdentityReport:
    ok: bool = True
    failures: List[dict] = field(default_factory=list)
    checked: int = 0

    def fail(self, **w) -> None:
        self.ok = False
        if len(self.failures) < 5:
            self.failures.append(w)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failures": list(self.failures)}


class SimplicialSet:
    """Levels 0..N given by sizes and face/degeneracy tables."""

    def __init__(self, N: int, sizes: Sequence[int], faces: Dict[int, np.ndarray],
                 degens: Dict[int, np.ndarray], name: str = "", rows: Optional[List[np.ndarray]] = None):
        self.N = N
        self.sizes = list(sizes)
        self.faces = faces
        self.degens = degens
        self.name = name
        self.rows = rows

    def size(self, n: int) -> int:
        return self.sizes[n]

    def d(self, n: int, i: int, x):
        return self.faces[n][i][x]

    def s(self, n: int, i: int, x):
        return self.degens[n][i][x]

    def check_identities(self) -> IdentityReport:
        """All simplicial identities on every simplex up to level N."""
        rep = IdentityReport()
        N = self.N
        for n in range(1, N + 1):
            rep.checked += self.sizes[n]
        # d_i d_j = d_{j-1} d_i, i < j
        for n in range(2, N + 1):
            F, G = self.faces[n], self.faces[n - 1]
            for j in range(n + 1):
                for i in range(j):
                    lhs = G[i][F[j]]
                    rhs = G[j - 1][F[i]]
                    bad = np.nonzero(lhs != rhs)[0]
                    if len(bad):
                        rep.fail(identity=f"d{i}d{j}=d{j - 1}d{i}", level=n, simplex=int(bad[0]))
        for n in range(0, N):
            D = self.degens[n]
            F = self.faces[n + 1]
            for j in range(n + 1):
                for i in range(n + 2):
                    lhs = F[i][D[j]]
                    if i < j:
                        rhs = self.degens[n - 1][j - 1][self.faces[n][i]]
                    elif i in (j, j + 1):
                        rhs = np.arange(self.sizes[n])
                    else:
                        rhs = self.degens[n - 1][j][self.faces[n][i - 1]]
                    bad = np.nonzero(lhs != rhs)[0]
                    if len(bad):
                        rep.fail(identity=f"d{i}s{j}", level=n, simplex=int(bad[0]))
            if n + 1 < N:
                D2 = self.degens[n + 1]
                for j in range(n + 1):
                    for i in range(j + 1):
                        lhs = D2[i][D[j]]
                        rhs = D2[j + 1][D[i]]
                        bad = np.nonzero(lhs != rhs)[0]
                        if len(bad):
                            rep.fail(identity=f"s{i}s{j}=s{j + 1}s{i}", level=n, simplex=int(bad[0]))
        return rep

    def level_counts(self) -> List[int]:
        return list(self.sizes)

    def to_json(self) -> dict:
        return {"name": self.name, "N": self.N, "sizes": self.sizes,
                "faces": {str(n): self.faces[n].tolist() for n in sorted(self.faces)},
                "degeneracies": {str(n): self.degens[n].tolist() for n in sorted(self.degens)}}


# building from explicit rows ------------------------------------------------------

class RowIndex:
    """Lookup of fixed-width integer rows by mixed-radix code."""

    def __init__(self, rows: np.ndarray, radix: int):
        self.radix = radix
        self.rows = rows
        codes = self.encode(rows)
        order = np.argsort(codes, kind="stable")
        if not np.all(order == np.arange(len(codes))):
            raise ValueError("rows must be listed in code order")
        self.codes = codes

    def encode(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.int64)
        code = np.zeros(rows.shape[0], dtype=np.int64)
        for k in range(rows.shape[1]):
            code = code * self.radix + rows[:, k]
        return code

    def lookup(self, rows: np.ndarray) -> np.ndarray:
        if np.any(rows < 0):
            raise ValueError("undefined simplex produced by a face or degeneracy")
        c = self.encode(rows)
        pos = np.searchsorted(self.codes, c)
        pos = np.minimum(pos, len(self.codes) - 1)
        if not np.all(self.codes[pos] == c):
            raise ValueError("face or degeneracy left the simplex set")
        return pos


def from_rows(N: int, rows: List[np.ndarray], radix: Sequence[int],
              face: Callable[[int, int, np.ndarray], np.ndarray],
              degen: Callable[[int, int, np.ndarray], np.ndarray], name: str = "") -> SimplicialSet:
    """Intern row-represented simplices; ``face``/``degen`` act on whole row arrays."""
    idx = [RowIndex(rows[n], radix[n]) for n in range(N + 1)]
    faces = {}
    degens = {}
    for n in range(1, N + 1):
        faces[n] = np.stack([idx[n - 1].lookup(face(n, i, rows[n])) for i in range(n + 1)])
    for n in range(N):
        degens[n] = np.stack([idx[n + 1].lookup(degen(n, i, rows[n])) for i in range(n + 1)])
    return SimplicialSet(N, [len(r) for r in rows], faces, degens, name, rows)


def _comp_table(C: FiniteCategory) -> np.ndarray:
    M = C.n_mor
    T = -np.ones((M, M), dtype=np.int64)
    for (f, g), h in C.comp.items():
        T[f, g] = h
    return T


def chains(C: FiniteCategory, N: int) -> List[np.ndarray]:
    """Composable chains (f_1, ..., f_n) with src(f_k) = dst(f_{k+1}), in lexicographic order."""
    src = np.array(C.src, dtype=np.int64)
    dst = np.array(C.dst, dtype=np.int64)
    levels = [np.arange(len(C.objects), dtype=np.int64).reshape(-1, 1)]
    if N >= 1:
        levels.append(np.arange(C.n_mor, dtype=np.int64).reshape(-1, 1))
    by_dst = [np.nonzero(dst == a)[0] for a in range(len(C.objects))]
    for n in range(2, N + 1):
        prev = levels[-1]
        parts = []
        for row in prev:
            nxt = by_dst[src[row[-1]]]
            block = np.empty((len(nxt), n), dtype=np.int64)
            block[:, :-1] = row
            block[:, -1] = nxt
            parts.append(block)
        levels.append(np.concatenate(parts) if parts else np.zeros((0, n), dtype=np.int64))
    return levels


class Nerve(SimplicialSet):
    """Nerve of a finite category (opposite convention) truncated at N."""

    def __init__(self, C: FiniteCategory, N: int = DEFAULT_N, name: str = ""):
        self.C = C
        comp = _comp_table(C)
        src = np.array(C.src, dtype=np.int64)
        dst = np.array(C.dst, dtype=np.int64)
        ident = np.array(C.ident, dtype=np.int64)
        rows = chains(C, N)

        def face(n, i, r):
            if n == 1:
                return (src if i == 0 else dst)[r[:, 0]].reshape(-1, 1)
            if i == 0:
                return r[:, 1:]
            if i == n:
                return r[:, :-1]
            merged = comp[r[:, i - 1], r[:, i]]
            return np.concatenate([r[:, :i - 1], merged.reshape(-1, 1), r[:, i + 1:]], axis=1)

        def degen(n, i, r):
            if n == 0:
                return ident[r[:, 0]].reshape(-1, 1)
            obj = dst[r[:, 0]] if i == 0 else src[r[:, i - 1]]
            return np.concatenate([r[:, :i], ident[obj].reshape(-1, 1), r[:, i:]], axis=1)

        radix = [max(len(C.objects), 1)] + [max(C.n_mor, 1)] * N
        built = from_rows(N, rows, radix, face, degen, name or f"N({C.name})")
        super().__init__(N, built.sizes, built.faces, built.degens, built.name, rows)
        self.index = [RowIndex(rows[n], radix[n]) for n in range(N + 1)]

    def simplex(self, n: int, k: int) -> tuple:
        return tuple(int(v) for v in self.rows[n][k])

    def find(self, n: int, row: Sequence[int]) -> int:
        return int(self.index[n].lookup(np.array([row], dtype=np.int64))[0])


def nerve(C: FiniteCategory, N: int = DEFAULT_N) -> Nerve:
    return Nerve(C, N)


def group_category(G, name: str = "") -> FiniteCategory:
    """B(G): one object, morphisms the elements of G, composition the product."""
    comp = {(a, b): G.mul(a, b) for a in G.elements() for b in G.elements()}
    return FiniteCategory(["*"], [0] * G.order, [0] * G.order, comp, [0], list(G.elements()),
                          name or f"B({G.name})")


def boundary_of_triangle(N: int = DEFAULT_N) -> SimplicialSet:
    """The boundary of the 2-simplex: nondecreasing words in {0,1,2} missing some letter.

    Not the nerve of any category: the edges 0-1 and 1-2 have no 2-simplex
    filling them.
    """
    import itertools

    rows = []
    for n in range(N + 1):
        words = [w for w in itertools.combinations_with_replacement(range(3), n + 1) if len(set(w)) < 3]
        rows.append(np.array(sorted(words), dtype=np.int64).reshape(-1, n + 1))

    def face(n, i, r):
        return np.delete(r, i, axis=1)

    def degen(n, i, r):
        return np.insert(r, i, r[:, i], axis=1)

    return from_rows(N, rows, [3] * (N + 1), face, degen, "boundary(D2)")
