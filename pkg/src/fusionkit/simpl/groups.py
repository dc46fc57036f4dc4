"""Simplicial groups: constant groups and the nerve of Aut_typ(L), plus W-bar.

A simplicial group works on whole numpy arrays of element codes at a given
level.  For N Aut_typ(L), a level-m element is a chain
alpha_0 <-chi_1- alpha_1 <- ... <-chi_m- alpha_m in the groupoid Aut_typ(L),
where chi: beta -> alpha means alpha = c_chi o beta.  It is stored as
(alpha_0, chi_1, ..., chi_m) packed into one integer.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..catsys import CatFunctor, FiniteCategory, TransporterSystem, isotypical_autos, restrict_morphism, top_object
from ..grp.finite import FiniteGroup
from .simplicial import DEFAULT_N, IdentityReport, Nerve, SimplicialSet, _comp_table


class SimplicialGroup:
    """Vectorized interface; subclasses fill in the level structure."""

    name = ""

    def size(self, n: int) -> int:
        raise NotImplementedError

    def one(self, n: int) -> int:
        return 0

    def mul(self, n: int, x, y):
        raise NotImplementedError

    def inv(self, n: int, x):
        raise NotImplementedError

    def face(self, n: int, i: int, x):
        raise NotImplementedError

    def degen(self, n: int, i: int, x):
        raise NotImplementedError

    def generators(self, n: int) -> List[int]:
        raise NotImplementedError

    def as_simplicial_set(self, N: int = DEFAULT_N) -> SimplicialSet:
        faces = {n: np.stack([self.face(n, i, np.arange(self.size(n), dtype=np.int64)) for i in range(n + 1)])
                 for n in range(1, N + 1)}
        degens = {n: np.stack([self.degen(n, i, np.arange(self.size(n), dtype=np.int64)) for i in range(n + 1)])
                  for n in range(N)}
        return SimplicialSet(N, [self.size(n) for n in range(N + 1)], faces, degens, self.name)

    def check_group_structure(self, N: int = DEFAULT_N) -> IdentityReport:
        """Group axioms level-wise and faces/degeneracies being homomorphisms.

        Homomorphism checks use generators of each level against all elements,
        which covers every pair by induction on word length.
        """
        rep = IdentityReport()
        for n in range(N + 1):
            allx = np.arange(self.size(n), dtype=np.int64)
            rep.checked += len(allx)
            one = np.full_like(allx, self.one(n))
            if np.any(self.mul(n, allx, self.inv(n, allx)) != one) or np.any(self.mul(n, self.inv(n, allx), allx) != one):
                rep.fail(property="inverse", level=n)
            if np.any(self.mul(n, one, allx) != allx) or np.any(self.mul(n, allx, one) != allx):
                rep.fail(property="identity", level=n)
            gens = self.generators(n)
            if not self._generates(n, gens):
                rep.fail(property="generators", level=n)
            for g in gens:
                gx = np.full_like(allx, g)
                prod = self.mul(n, gx, allx)
                for y in gens:
                    # associativity on generator triples against all elements
                    yy = np.full_like(allx, y)
                    if np.any(self.mul(n, self.mul(n, gx, yy), allx) != self.mul(n, gx, self.mul(n, yy, allx))):
                        rep.fail(property="associativity", level=n, generators=(g, y))
                if n >= 1:
                    for i in range(n + 1):
                        lhs = self.face(n, i, prod)
                        rhs = self.mul(n - 1, self.face(n, i, gx), self.face(n, i, allx))
                        if np.any(lhs != rhs):
                            rep.fail(property=f"d{i} homomorphism", level=n, generator=g)
                if n < N:
                    for i in range(n + 1):
                        lhs = self.degen(n, i, prod)
                        rhs = self.mul(n + 1, self.degen(n, i, gx), self.degen(n, i, allx))
                        if np.any(lhs != rhs):
                            rep.fail(property=f"s{i} homomorphism", level=n, generator=g)
        return rep

    def _generates(self, n: int, gens: Sequence[int]) -> bool:
        size = self.size(n)
        seen = np.zeros(size, dtype=bool)
        seen[self.one(n)] = True
        frontier = np.array([self.one(n)], dtype=np.int64)
        while len(frontier):
            nxt = []
            for g in gens:
                y = self.mul(n, frontier, np.full_like(frontier, g))
                new = y[~seen[y]]
                new = np.unique(new)
                seen[new] = True
                nxt.append(new)
            frontier = np.unique(np.concatenate(nxt)) if nxt else np.zeros(0, dtype=np.int64)
        return bool(seen.all())


class ConstantGroup(SimplicialGroup):
    """The discrete simplicial group on a finite group G."""

    def __init__(self, G: FiniteGroup):
        self.G = G
        self.table = np.array(G.table, dtype=np.int64)
        self.inverse = np.array(G.inverse, dtype=np.int64)
        self.name = f"const({G.name})"

    def size(self, n):
        return self.G.order

    def mul(self, n, x, y):
        return self.table[x, y]

    def inv(self, n, x):
        return self.inverse[x]

    def face(self, n, i, x):
        return np.asarray(x)

    def degen(self, n, i, x):
        return np.asarray(x)

    def generators(self, n):
        return list(self.G.gens) or [0]


@dataclass
class AutTypTables:
    """Index tables for Aut^I_typ(L), Aut_L(S) and their actions on L."""

    L: TransporterSystem
    autos: List[CatFunctor]
    gamma_ids: List[int]          # position -> morphism id of Aut_L(S)
    amul: np.ndarray
    ainv: np.ndarray
    gmul: np.ndarray
    ginv: np.ndarray
    actg: np.ndarray              # actg[a, pos]: autos[a] applied to Aut_L(S)
    conj: np.ndarray              # conj[pos]: index of c_gamma
    act: np.ndarray               # act[a, f]
    actobj: np.ndarray            # actobj[a, P]
    res: np.ndarray               # res[pos, Q]: restriction of gamma to Q -> c_gamma(Q)
    comp: np.ndarray
    index: Dict[CatFunctor, int] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.gamma_ids)

    @property
    def n_autos(self) -> int:
        return len(self.autos)

    def pos_of(self, mid: int) -> int:
        return self.gamma_ids.index(mid)


def aut_typ_tables(L: TransporterSystem, autos: Optional[Sequence[CatFunctor]] = None) -> AutTypTables:
    data = None
    if autos is None:
        data = isotypical_autos(L)
        autos = data.autos
    autos = list(autos)
    index = {F: i for i, F in enumerate(autos)}
    na = len(autos)
    amul = np.array([[index[autos[a].compose(autos[b])] for b in range(na)] for a in range(na)], dtype=np.int64)
    ainv = np.array([index[F.inverse()] for F in autos], dtype=np.int64)
    top = top_object(L)
    Gb, ids = L.aut_group(top)
    pos = {m: i for i, m in enumerate(ids)}
    gmul = np.array(Gb.table, dtype=np.int64)
    ginv = np.array(Gb.inverse, dtype=np.int64)
    actg = np.array([[pos[F.mor[m]] for m in ids] for F in autos], dtype=np.int64)
    from ..catsys import conj_functor
    conj = np.array([index[conj_functor(L, m)] for m in ids], dtype=np.int64)
    act = np.array([F.mor for F in autos], dtype=np.int64)
    actobj = np.array([F.obj for F in autos], dtype=np.int64)
    nobj = len(L.objs)
    res = np.zeros((len(ids), nobj), dtype=np.int64)
    for i, m in enumerate(ids):
        cf = autos[conj[i]]
        for Q in range(nobj):
            res[i, Q] = restrict_morphism(L, m, Q, cf.obj[Q])
    return AutTypTables(L, autos, list(ids), amul, ainv, gmul, ginv, actg, conj, act, actobj, res,
                        _comp_table(L.cat), index)


class AutTypGroup(SimplicialGroup):
    """N Aut_typ(L) as a simplicial group, product from the strict monoidal structure."""

    def __init__(self, tabs: AutTypTables):
        self.t = tabs
        self.name = f"N Aut_typ({tabs.L.name})"

    # packing ---------------------------------------------------------------
    def size(self, n):
        return self.t.n_autos * self.t.k ** n

    def decode(self, n: int, x) -> Tuple[np.ndarray, List[np.ndarray]]:
        x = np.asarray(x, dtype=np.int64)
        k = self.t.k
        chis = []
        for _ in range(n):
            chis.append(x % k)
            x = x // k
        return x, chis[::-1]

    def encode(self, n: int, a0, chis: Sequence) -> np.ndarray:
        code = np.asarray(a0, dtype=np.int64).copy()
        for c in chis:
            code = code * self.t.k + c
        return code

    def objects(self, n: int, x) -> List[np.ndarray]:
        """alpha_0, ..., alpha_n with alpha_{i-1} = c_{chi_i} o alpha_i."""
        t = self.t
        a0, chis = self.decode(n, x)
        objs = [a0]
        for c in chis:
            objs.append(t.amul[t.ainv[t.conj[c]], objs[-1]])
        return objs

    def one(self, n):
        return 0

    def mul(self, n, x, y):
        t = self.t
        ax = self.objects(n, x)
        _, cx = self.decode(n, x)
        a0y, cy = self.decode(n, y)
        a0 = t.amul[ax[0], a0y]
        # edge i has source alpha_i: (chi) . (chi') = chi o alpha_i(chi')
        chis = [t.gmul[cx[i], t.actg[ax[i + 1], cy[i]]] for i in range(n)]
        return self.encode(n, a0, chis)

    def inv(self, n, x):
        t = self.t
        ax = self.objects(n, x)
        _, cx = self.decode(n, x)
        a0 = t.ainv[ax[0]]
        chis = [t.actg[t.ainv[ax[i + 1]], t.ginv[cx[i]]] for i in range(n)]
        return self.encode(n, a0, chis)

    def face(self, n, i, x):
        t = self.t
        a0, ch = self.decode(n, x)
        if n == 1:
            return self.objects(1, x)[1] if i == 0 else a0
        if i == 0:
            return self.encode(n - 1, self.objects(n, x)[1], ch[1:])
        if i == n:
            return self.encode(n - 1, a0, ch[:-1])
        merged = t.gmul[ch[i - 1], ch[i]]
        return self.encode(n - 1, a0, ch[:i - 1] + [merged] + ch[i + 1:])

    def degen(self, n, i, x):
        a0, ch = self.decode(n, x)
        e = np.zeros_like(a0)
        return self.encode(n + 1, a0, ch[:i] + [e] + ch[i:])

    def generators(self, n):
        """Degenerate images of level-0 generators plus single-edge elements."""
        t = self.t
        G0 = FiniteGroup(list(range(t.n_autos)), t.amul.tolist(), [], "Aut_typ")
        from ..grp.finite import minimal_generators
        g0 = minimal_generators(G0, frozenset(range(t.n_autos)))
        Gb = FiniteGroup(list(range(t.k)), t.gmul.tolist(), [], "Aut_L(S)")
        gb = minimal_generators(Gb, frozenset(range(t.k)))
        out = []
        for a in g0:
            out.append(int(self.encode(n, np.array([a]), [np.array([0])] * n)[0]))
        for j in range(n):
            for c in gb:
                chis = [np.array([0])] * n
                chis[j] = np.array([c])
                out.append(int(self.encode(n, np.array([0]), chis)[0]))
        return sorted(set(out)) or [0]

    # the groupoid and its action on L --------------------------------------------
    def groupoid(self) -> FiniteCategory:
        """Aut_typ(L): morphisms chi: alpha -> c_chi o alpha, composed in Aut_L(S)."""
        t = self.t
        labels = [(a, c) for a in range(t.n_autos) for c in range(t.k)]
        index = {lab: i for i, lab in enumerate(labels)}
        src = [a for a, c in labels]
        dst = [int(t.amul[t.conj[c], a]) for a, c in labels]
        comp = {}
        for i, (a, c) in enumerate(labels):
            for j, (b, d) in enumerate(labels):
                if dst[j] == a:
                    comp[(i, j)] = index[(b, int(t.gmul[c, d]))]
        ident = [index[(a, 0)] for a in range(t.n_autos)]
        return FiniteCategory(list(range(t.n_autos)), src, dst, comp, ident, labels, "Aut_typ(L)")

    def act(self, n: int, x, xi_rows: np.ndarray) -> np.ndarray:
        """The evaluation action on nerve rows of L at level n."""
        t = self.t
        objs = self.objects(n, x)
        _, ch = self.decode(n, x)
        if n == 0:
            return t.actobj[objs[0], xi_rows[:, 0]].reshape(-1, 1)
        src = np.array(t.L.cat.src, dtype=np.int64)
        cols = []
        for k in range(n):
            f = xi_rows[:, k]
            moved = t.act[objs[k], f]
            chi_p = t.res[ch[k], t.actobj[objs[k + 1], src[f]]]
            cols.append(t.comp[moved, chi_p])
        return np.stack(cols, axis=1)


def check_action(K: AutTypGroup, NL: Nerve, N: int = DEFAULT_N, exhaustive_upto: int = 1,
                 samples: int = 64, seed: int = 0) -> IdentityReport:
    """The action of N Aut_typ(L) on NL is simplicial, unital and associative.

    Every simplex of NL is used at every level; group elements are exhaustive
    up to ``exhaustive_upto`` and sampled above it.
    """
    rep = IdentityReport()
    rng = random.Random(seed)
    for n in range(N + 1):
        rows = NL.rows[n]
        m = len(rows)
        if n <= exhaustive_upto:
            xs = list(range(K.size(n)))
        else:
            xs = sorted({0, *K.generators(n), *(rng.randrange(K.size(n)) for _ in range(samples))})
        ys = [rng.randrange(K.size(n)) for _ in range(4)]
        ids = np.arange(m)
        base = K.act(n, np.zeros(m, dtype=np.int64), rows)
        if np.any(NL.index[n].lookup(base) != ids):
            rep.fail(property="unit", level=n)
        for x in xs:
            rep.checked += m
            xx = np.full(m, x, dtype=np.int64)
            moved = K.act(n, xx, rows)
            try:
                mid = NL.index[n].lookup(moved)
            except ValueError:
                rep.fail(property="closure", level=n, element=x)
                continue
            for i in range(n + 1) if n else ():
                lhs = NL.faces[n][i][mid]
                rhs = NL.index[n - 1].lookup(K.act(n - 1, K.face(n, i, xx), NL.rows[n - 1][NL.faces[n][i]]))
                if np.any(lhs != rhs):
                    rep.fail(property=f"d{i}", level=n, element=x)
            if n < N:
                for i in range(n + 1):
                    lhs = NL.degens[n][i][mid]
                    rhs = NL.index[n + 1].lookup(K.act(n + 1, K.degen(n, i, xx), NL.rows[n + 1][NL.degens[n][i]]))
                    if np.any(lhs != rhs):
                        rep.fail(property=f"s{i}", level=n, element=x)
            for y in ys:
                yy = np.full(m, y, dtype=np.int64)
                lhs = K.act(n, xx, K.act(n, yy, rows))
                rhs = K.act(n, K.mul(n, xx, yy), rows)
                if np.any(lhs != rhs):
                    rep.fail(property="associativity", level=n, element=(x, y))
    return rep


def components(C: FiniteCategory) -> List[int]:
    """Connected component label of each object."""
    parent = list(range(len(C.objects)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f in range(C.n_mor):
        a, b = find(C.src[f]), find(C.dst[f])
        if a != b:
            parent[max(a, b)] = min(a, b)
    return [find(a) for a in range(len(C.objects))]


@dataclass
class AutTypReport:
    objects: int
    morphisms: int
    components: int
    out_typ: int
    center: List[int]
    loops_at_identity: List[int]
    checks: Dict[str, bool]

    def to_dict(self) -> dict:
        return {"objects": self.objects, "morphisms": self.morphisms, "components": self.components,
                "out_typ": self.out_typ, "center": self.center, "checks": dict(self.checks)}


def aut_typ_category(L: TransporterSystem, N: int = 2, samples: int = 64, seed: int = 0):
    """Groupoid, simplicial group and action for Aut_typ(L), with their checks."""
    from ..catsys import center_of
    tabs = aut_typ_tables(L)
    K = AutTypGroup(tabs)
    C = K.groupoid()
    comp = components(C)
    ncomp = len(set(comp))
    inner = {int(tabs.conj[i]) for i in range(tabs.k)}
    out = tabs.n_autos // len(inner)
    loops = [C.labels[f][1] for f in C.hom(0, 0)]
    center = sorted(tabs.pos_of(m) for m in center_of(L))
    checks = {
        "groupoid": C.check().ok,
        "loops_are_center": sorted(loops) == center,
        "pi0_is_out_typ": ncomp == out and {a for a in range(tabs.n_autos) if comp[a] == comp[0]} == inner,
        "simplicial_identities": K.as_simplicial_set(N).check_identities().ok,
        "simplicial_group": K.check_group_structure(N).ok,
    }
    NL = Nerve(L.cat, N)
    checks["action"] = check_action(K, NL, N, samples=samples, seed=seed).ok
    # product of two morphisms as in the monoidal structure: chi o alpha(chi') = beta(chi') o chi
    ok = True
    for a in range(tabs.n_autos):
        for c in range(tabs.k):
            b = int(tabs.amul[tabs.conj[c], a])
            for c2 in range(tabs.k):
                if tabs.gmul[c, tabs.actg[a, c2]] != tabs.gmul[tabs.actg[b, c2], c]:
                    ok = False
    checks["monoidal_product"] = ok
    return K, C, AutTypReport(tabs.n_autos, C.n_mor, ncomp, out, center, sorted(loops), checks)


# W-bar -------------------------------------------------------------------------------

class WBar:
    """W-bar of a simplicial group, acting on tuples (kappa_{n-1}, ..., kappa_0) of code arrays."""

    def __init__(self, K: SimplicialGroup):
        self.K = K

    def face(self, n: int, i: int, tup: Sequence[np.ndarray]) -> List[np.ndarray]:
        K = self.K
        tup = list(tup)
        if n == 1:
            return []
        if i == 0:
            return tup[1:]
        if i == n:
            return [K.face(n - 1 - k, n - 1 - k, tup[k]) for k in range(n - 1)]
        out = [K.face(n - 1 - k, i - 1 - k, tup[k]) for k in range(i - 1)]
        lvl = n - i
        out.append(K.mul(lvl - 1, K.face(lvl, 0, tup[i - 1]), tup[i]))
        out.extend(tup[i + 1:])
        return out

    def degen(self, n: int, i: int, tup: Sequence[np.ndarray], count: int) -> List[np.ndarray]:
        K = self.K
        tup = list(tup)
        out = [K.degen(n - 1 - k, i - 1 - k, tup[k]) for k in range(i)]
        out.append(np.full(count, K.one(n - i), dtype=np.int64))
        out.extend(tup[i:])
        return out

    def enumerate(self, N: int = DEFAULT_N, bound: int = 2_000_000) -> SimplicialSet:
        """The explicit truncated simplicial set, when small enough to list."""
        K = self.K
        sizes = [1]
        for n in range(1, N + 1):
            sizes.append(sizes[-1] * K.size(n - 1))
            if sizes[-1] > bound:
                raise ValueError(f"W-bar level {n} has {sizes[-1]} simplices, above the bound {bound}")
        radices = {n: [K.size(n - 1 - k) for k in range(n)] for n in range(N + 1)}

        def unpack(n, codes):
            out = []
            for r in reversed(radices[n]):
                out.append(codes % r)
                codes = codes // r
            return out[::-1]

        def pack(n, tup):
            code = np.zeros(len(tup[0]) if tup else 1, dtype=np.int64)
            for r, c in zip(radices[n], tup):
                code = code * r + c
            return code

        faces = {}
        degens = {}
        for n in range(1, N + 1):
            allc = np.arange(sizes[n], dtype=np.int64)
            tup = unpack(n, allc)
            faces[n] = np.stack([pack(n - 1, self.face(n, i, tup)) if n > 1 else np.zeros(sizes[n], dtype=np.int64)
                                 for i in range(n + 1)])
        for n in range(N):
            allc = np.arange(sizes[n], dtype=np.int64)
            tup = unpack(n, allc) if n else []
            degens[n] = np.stack([pack(n + 1, self.degen(n, i, tup, sizes[n])) for i in range(n + 1)])
        return SimplicialSet(N, sizes, faces, degens, f"Wbar({K.name})")


def wbar(K: SimplicialGroup, N: int = DEFAULT_N) -> SimplicialSet:
    return WBar(K).enumerate(N)
