"""Fusion systems: morphism providers over a (discrete p-toral) p-group.

Every realization supplies ``_rep_raw(P)``: the morphisms P -> S modulo
post-composition with inner automorphisms of S.  Everything else (Hom
sets, conjugacy classes, automizers) is derived from that list.
"""

from __future__ import annotations

import threading
from collections import deque
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from ..bounds import BoundExceeded, get_bounds
from ..grp import intmat as im
from ..grp.finite import FiniteGroup
from ..grp.ops import hom_search
from ..grp.ptoral import (Elt, GroupMorphism, PToralGroup, PToralSubgroup, conjugation, inclusion,
                          torus_map)


def _mkey(phi: GroupMorphism):
    return (phi.image().sort_key(), phi.A, tuple(sorted(phi.img.items())))


class FusionSystem:
    """Base class; subclasses implement ``_rep_raw``."""

    kind = "abstract"

    def __init__(self, S: PToralGroup, top: Optional[PToralSubgroup] = None, name: str = ""):
        self.S = S
        self.p = S.p
        self.top = top if top is not None else S.whole()
        self.name = name
        self._lock = threading.RLock()
        self._cache: Dict = {}
        self.inconclusive: List[str] = []

    # caching --------------------------------------------------------------
    def _memo(self, key, fn: Callable):
        with self._lock:
            if key in self._cache:
                return self._cache[key]
        val = fn()
        with self._lock:
            return self._cache.setdefault(key, val)

    # inner structure ---------------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.top.is_finite

    def top_elements(self) -> List[Elt]:
        return self.top.elements()

    def normalizer(self, P: PToralSubgroup) -> PToralSubgroup:
        def f():
            N = self.S.normalizer(P)
            return N if self.top == self.S.whole() else N.intersect(self.top)
        return self._memo(("N", P), f)

    def centralizer(self, P: PToralSubgroup) -> PToralSubgroup:
        def f():
            C = self.S.centralizer(P)
            return C if self.top == self.S.whole() else C.intersect(self.top)
        return self._memo(("C", P), f)

    def transporter(self, P: PToralSubgroup, Q: PToralSubgroup) -> List[Elt]:
        xs = self.S.transporter_elements(P, Q)
        if self.top != self.S.whole():
            xs = [x for x in xs if self.top.contains(x)]
        return xs

    def find_conjugator(self, pairs, vec_pairs=()) -> Optional[Elt]:
        S = self.S
        if self.top == S.whole():
            return S.find_conjugator(pairs, vec_pairs)
        if not self.top.is_finite:
            raise NotImplementedError("conjugator search in a proper infinite subgroup")
        for x in self.top.elements():
            if all(S.conj(x, a) == b for a, b in pairs):
                return x
        return None

    def s_conjugate(self, P: PToralSubgroup, Q: PToralSubgroup) -> Optional[Elt]:
        if P == Q:
            return self.S.identity
        if P.order() != Q.order():
            return None
        if self.is_finite:
            for x in self.top_elements():
                if self.S.conjugate(x, P) == Q:
                    return x
            return None
        if self.top != self.S.whole():
            raise NotImplementedError
        return self.S.conjugating_element(P, Q)

    def s_class_key(self, P: PToralSubgroup):
        """Canonical key of the S-conjugacy class (finite S only)."""
        def f():
            return min(self.S.conjugate(x, P).sort_key() for x in self.top_elements())
        return self._memo(("sck", P), f)

    def same_s_class(self, P: PToralSubgroup, Q: PToralSubgroup) -> bool:
        if self.is_finite:
            return self.s_class_key(P) == self.s_class_key(Q)
        return self.s_conjugate(P, Q) is not None

    def inner_equivalent(self, a: GroupMorphism, b: GroupMorphism) -> bool:
        """Whether b = c_x o a for some x in S."""
        if a.source != b.source:
            return False
        P = a.source
        pairs = [(a.eval(g), b.eval(g)) for g in P.gens()]
        vecs = list(zip(im.columns(a.A), im.columns(b.A))) if P.lattice else []
        return self.find_conjugator(pairs, vecs) is not None

    def _inner_key(self, phi: GroupMorphism):
        """Canonical key modulo Inn(S) (finite S only)."""
        S = self.S
        pts = phi.source.reps()
        vals = [phi.img[phi.source.key_of(x)] for x in pts]
        return min(tuple(S.conj(x, v) for v in vals) for x in self.top_elements())

    def dedupe_inner(self, maps: Iterable[GroupMorphism]) -> List[GroupMorphism]:
        out: List[GroupMorphism] = []
        if self.is_finite:
            seen = set()
            for m in maps:
                k = self._inner_key(m)
                if k not in seen:
                    seen.add(k)
                    out.append(m)
            return out
        for m in maps:
            if not any(self.inner_equivalent(o, m) for o in out):
                out.append(m)
        return out

    def torus_automorphisms(self) -> List[im.Mat]:
        """Aut_F(T) as a list of matrices (Aut_S(T) unless a realization says more)."""
        S = self.S
        return close_matrix_group([S.rho[g] for g in S.pi.elements()], S.rank)

    # realization hook --------------------------------------------------------
    def _rep_raw(self, P: PToralSubgroup) -> List[GroupMorphism]:
        raise NotImplementedError

    def rep(self, P: PToralSubgroup) -> List[GroupMorphism]:
        """Hom_F(P, S) modulo Inn(S), deterministic order, identity first."""
        def f():
            reps = self._rep_raw(P)
            incl = inclusion(P)
            rest = sorted((m for m in reps if not self.inner_equivalent(incl, m)), key=_mkey)
            return [incl] + rest
        return self._memo(("rep", P), f)

    # morphism sets -----------------------------------------------------------
    def hom(self, P: PToralSubgroup, Q: PToralSubgroup) -> List[GroupMorphism]:
        """All of Hom_F(P, Q); needs Q finite or torus-type maps."""
        def f():
            out = {}
            S = self.S
            for psi in self.rep(P):
                R = psi.image()
                data = S.transporter_data(R, Q)
                for g, us, div in data:
                    if div and not self._div_trivial(R, g, div):
                        raise BoundExceeded("infinite morphism set")
                    for u in us:
                        x = (u, g)
                        if self.top != S.whole() and not self.top.contains(x):
                            continue
                        phi = conjugation(x, R).compose(psi)
                        out.setdefault(phi, None)
            return sorted(out, key=_mkey)
        return self._memo(("hom", P, Q), f)

    def _div_trivial(self, R: PToralSubgroup, g: int, div) -> bool:
        S = self.S
        r = S.rank
        for a in R.gens():
            h = S.pi.conj(g, a[1])
            m = im.matsub(im.identity(r), S.rho[h])
            if any(any(im.mv_exact(m, v)) for v in div):
                return False
        return True

    def contains(self, phi: GroupMorphism) -> bool:
        return any(self.inner_equivalent(psi, phi) for psi in self.rep(phi.source))

    def aut(self, P: PToralSubgroup) -> List[GroupMorphism]:
        return self.hom(P, P)

    def iso_reps_onto(self, P: PToralSubgroup) -> List[GroupMorphism]:
        """Morphisms psi with psi(P) = Q exactly, one per rep class, Q = psi(P) varying."""
        return self.rep(P)

    def class_reps(self, P: PToralSubgroup) -> List[PToralSubgroup]:
        """One subgroup per S-conjugacy class inside P^F."""
        def f():
            out: List[PToralSubgroup] = []
            for psi in self.rep(P):
                Q = psi.image()
                if not any(self.same_s_class(Q, R) for R in out):
                    out.append(Q)
            return out
        return self._memo(("classreps", P), f)

    def is_conjugate(self, P: PToralSubgroup, Q: PToralSubgroup) -> bool:
        if P.order() != Q.order():
            return False
        return any(self.same_s_class(Q, R) for R in self.class_reps(P))

    def aut_index(self, P: PToralSubgroup) -> int:
        """[Aut_F(P) : Aut_S(P)]."""
        return sum(1 for psi in self.rep(P) if self.same_s_class(psi.image(), P))

    def normalize_onto(self, psi: GroupMorphism, Q: PToralSubgroup) -> Optional[GroupMorphism]:
        """c_y o psi with image exactly Q, if psi(P) is S-conjugate to Q."""
        y = self.s_conjugate(psi.image(), Q)
        if y is None:
            return None
        return conjugation(y, psi.image()).compose(psi)

    # automizers --------------------------------------------------------------
    def out_data(self, P: PToralSubgroup) -> Tuple[FiniteGroup, frozenset]:
        """Out_F(P) as a finite group together with the ids forming Out_S(P)."""
        return self._memo(("out", P), lambda: self._out_data(P))

    def _out_data(self, P: PToralSubgroup):
        S = self.S
        N = self.normalizer(P)
        C = self.centralizer(P)
        PC = P.join(C)
        if PC.lattice != N.lattice:
            raise BoundExceeded("Out_S(P) is infinite")
        nreps: List[Elt] = []
        for x in N.reps():
            if not any(PC.contains(S.mul(S.inv(y), x)) for y in nreps):
                nreps.append(x)
        autS = [conjugation(x, P) for x in nreps]
        base = []
        for psi in self.rep(P):
            if self.same_s_class(psi.image(), P):
                base.append(self.normalize_onto(psi, P))
        gens = [a.compose(b) for b in base for a in autS]
        elems: List[GroupMorphism] = []

        def index(a: GroupMorphism) -> int:
            for i, b in enumerate(elems):
                if self._inner_P_equal(P, PC, a, b):
                    return i
            return -1

        ident = inclusion(P)
        elems.append(ident)
        queue = deque([ident])
        while queue:
            a = queue.popleft()
            for g in gens:
                b = g.compose(a)
                if index(b) < 0:
                    elems.append(b)
                    if len(elems) > get_bounds().max_reps:
                        raise BoundExceeded("Out_F(P) too large")
                    queue.append(b)
        n = len(elems)
        table = [[index(elems[i].compose(elems[j])) for j in range(n)] for i in range(n)]
        gen_ids = sorted({index(g) for g in gens} - {0})
        grp = FiniteGroup(list(range(n)), table, gen_ids, "Out")
        outS = frozenset(index(a) for a in autS)
        return grp, outS

    def _inner_P_equal(self, P, PC, a: GroupMorphism, b: GroupMorphism) -> bool:
        if P.is_finite and self.is_finite:
            # b = c_y o a for y in P: compare against all y in P
            S = self.S
            gens = P.gens()
            return any(all(S.conj(y, a.eval(g)) == b.eval(g) for g in gens) for y in P.elements())
        pairs = [(a.eval(g), b.eval(g)) for g in P.gens()]
        vecs = list(zip(im.columns(a.A), im.columns(b.A))) if P.lattice else []
        x = self.S.find_conjugator(pairs, vecs)
        return x is not None and PC.contains(x)

    # subgroup lists ------------------------------------------------------------
    def all_subgroups(self) -> List[PToralSubgroup]:
        """All subgroups of a finite S, sorted by canonical form."""
        if not self.is_finite:
            raise ValueError("subgroup enumeration needs finite S (use a truncated family)")

        def f():
            S = self.S
            ids = frozenset(x[1] for x in self.top.elements())
            subs = S.pi.subgroups(ids)
            return sorted((S.closure([((), g) for g in h]) for h in subs), key=lambda P: P.sort_key())
        return self._memo("allsubs", f)


class AmbientFinite(FusionSystem):
    """F_S(G): morphisms induced by conjugation in a finite group G."""

    kind = "ambient"

    def __init__(self, S: PToralGroup, name: str = ""):
        if S.ambient is None:
            raise ValueError("S must carry an ambient group")
        super().__init__(S, name=name)
        self.G = S.ambient

    def _rep_raw(self, P):
        return self.dedupe_inner(hom_search(P, self.top, "ambient"))


class Generated(FusionSystem):
    """Fusion system generated by Inn(S), a finite W <= Aut(T) and declared morphisms."""

    kind = "generated"

    def __init__(self, S: PToralGroup, morphisms: Sequence[GroupMorphism] = (), W: Sequence[im.Mat] = (),
                 name: str = "", top: Optional[PToralSubgroup] = None, length: Optional[int] = None):
        super().__init__(S, top=top, name=name)
        self.W = close_matrix_group([im.mat(w) for w in W] + [S.rho[g] for g in S.pi.elements()], S.rank)
        self.declared = list(morphisms)
        gens = []
        for m in self.declared:
            gens.append(m)
            inv = m.inverse()
            if inv not in gens:
                gens.append(inv)
        self.gens = gens
        self.length = length if length is not None else get_bounds().composite_length

    def torus_automorphisms(self) -> List[im.Mat]:
        return list(self.W)

    def _moves(self, R: PToralSubgroup):
        """Generator morphisms applicable after moving R by S-conjugation."""
        S = self.S
        out = []
        if S.rank and all(k[1] == 0 for k in R.keys):
            for w in self.W:
                out.append(torus_map(w, R))
        for gam in self.gens:
            A = gam.source
            if A.is_finite and not R.is_finite:
                continue
            for x in self.transporter(R, A):
                cx = conjugation(x, R)
                out.append(gam.compose(cx))
                if not A.is_finite:
                    break
        return out

    def _rep_raw(self, P):
        reps = [inclusion(P)]
        frontier = [inclusion(P)]
        depth = 0
        while frontier:
            if depth >= self.length:
                self.inconclusive.append(f"composite length {self.length} reached at {P.describe()}")
                break
            nxt = []
            for psi in frontier:
                for mv in self._moves(psi.image()):
                    new = mv.compose(psi)
                    if self.is_finite:
                        k = self._inner_key(new)
                        if any(self._inner_key(o) == k for o in reps):
                            continue
                    elif any(self.inner_equivalent(o, new) for o in reps):
                        continue
                    reps.append(new)
                    nxt.append(new)
                    if len(reps) > get_bounds().max_reps:
                        raise BoundExceeded("too many morphism classes")
            frontier = nxt
            depth += 1
        return reps


class Subsystem(FusionSystem):
    """Subsystem over a finite subgroup ``top`` cut out of a parent by a predicate."""

    kind = "subsystem"

    def __init__(self, parent: FusionSystem, top: PToralSubgroup, predicate: Callable[[GroupMorphism], bool],
                 name: str = ""):
        if not top.is_finite:
            raise ValueError("subsystems are supported over finite subgroups")
        super().__init__(parent.S, top=top, name=name)
        self.parent = parent
        self.predicate = predicate

    def _rep_raw(self, P):
        homs = self.parent.hom(P, self.top)
        return self.dedupe_inner([m for m in homs if self.predicate(m)])


def close_matrix_group(mats: Sequence[im.Mat], r: int) -> List[im.Mat]:
    ident = im.identity(r)
    out = [ident]
    queue = deque([ident])
    mats = [m for m in dict.fromkeys(mats)]
    while queue:
        a = queue.popleft()
        for m in mats:
            b = im.matmul(a, m) if r else ()
            if b not in out:
                out.append(b)
                if len(out) > 4096:
                    raise BoundExceeded("W is not a finite group")
                queue.append(b)
    return sorted(out)


def inner_system(S: PToralGroup, name: str = "") -> Generated:
    """F_S(S)."""
    return Generated(S, name=name or "F_S(S)")
