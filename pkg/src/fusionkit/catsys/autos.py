"""Isotypical automorphisms, conjugation functors c_gamma and the center.

An automorphism alpha of a linking system is isotypical when it sends
delta_P(P) onto delta_{alpha(P)}(alpha(P)) for every object P.  The search
below enumerates those that also send inclusions to inclusions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ..bounds import BoundExceeded, get_bounds
from ..grp.ptoral import GroupMorphism
from .category import CatFunctor, FiniteCategory
from .transporter import TransporterSystem, restrict_morphism


def top_object(T: TransporterSystem) -> int:
    return T.index(T.S.whole())


def object_image(T: TransporterSystem, gamma: int, a: int) -> int:
    """Index of rho(gamma)(P) for gamma an automorphism of an object containing P."""
    return T.index(T.rho[gamma].restrict(T.objs[a]).image())


def conj_functor(T: TransporterSystem, gamma: int, over: Optional[int] = None) -> CatFunctor:
    """c_gamma: phi -> gamma|_Q o phi o (gamma|_P)^-1 on the full subcategory below ``over``.

    ``over`` defaults to S.  Objects not contained in it are sent to themselves
    only when the functor is taken over S; otherwise the functor is defined on
    the objects below ``over`` and is padded with identities elsewhere.
    """
    c = T.cat
    top = top_object(T) if over is None else over
    if c.src[gamma] != top or c.dst[gamma] != top:
        raise ValueError("gamma must be an automorphism of the chosen object")
    n = len(T.objs)
    below = [a for a in range(n) if T.objs[a] <= T.objs[top]]
    obj = list(range(n))
    res: Dict[int, int] = {}
    res_inv: Dict[int, int] = {}
    for a in below:
        obj[a] = object_image(T, gamma, a)
        res[a] = restrict_morphism(T, gamma, a, obj[a])
        inv = c.inverse(res[a])
        if inv is None:
            raise ValueError("restriction of gamma is not invertible")
        res_inv[a] = inv
    mor = list(range(c.n_mor))
    inside = set(below)
    for f in range(c.n_mor):
        a, b = c.src[f], c.dst[f]
        if a in inside and b in inside:
            mor[f] = c.comp[(c.comp[(res[b], f)], res_inv[a])]
    return CatFunctor(obj, mor)


def _object_perms(L: TransporterSystem) -> List[List[int]]:
    """Object permutations fixing S that respect order, inclusion and hom-set sizes."""
    c = L.cat
    n = len(L.objs)
    top = top_object(L)
    order = sorted(range(n), key=lambda a: L.objs[a].sort_key())
    out: List[List[int]] = []
    sigma = [-1] * n

    def ok(a: int, b: int) -> bool:
        if L.objs[a].order() != L.objs[b].order():
            return False
        for a2 in range(n):
            b2 = sigma[a2]
            if b2 < 0:
                continue
            if len(c.hom(a, a2)) != len(c.hom(b, b2)) or len(c.hom(a2, a)) != len(c.hom(b2, b)):
                return False
            if (L.objs[a] <= L.objs[a2]) != (L.objs[b] <= L.objs[b2]):
                return False
            if (L.objs[a2] <= L.objs[a]) != (L.objs[b2] <= L.objs[b]):
                return False
        return len(c.hom(a, a)) == len(c.hom(b, b))

    def rec(i: int) -> None:
        if i == n:
            out.append(list(sigma))
            return
        a = order[i]
        for b in ([top] if a == top else range(n)):
            if b in sigma or not ok(a, b):
                continue
            sigma[a] = b
            rec(i + 1)
            sigma[a] = -1

    rec(0)
    return out


class _Search:
    def __init__(self, L: TransporterSystem, sigma: Sequence[int], budget: List[int]):
        self.L = L
        self.c = L.cat
        self.sigma = sigma
        self.budget = budget

    def run(self) -> List[CatFunctor]:
        c = self.c
        L = self.L
        alpha: Dict[int, int] = {}
        used: Dict[int, int] = {}
        n = len(L.objs)
        for a in range(n):
            for b in range(n):
                if L.objs[a] <= L.objs[b]:
                    if not self._assign(alpha, used, L.incl(a, b), L.incl(self.sigma[a], self.sigma[b])):
                        return []
        found: List[CatFunctor] = []
        self._rec(alpha, used, found)
        return found

    def _assign(self, alpha: Dict[int, int], used: Dict[int, int], f: int, v: int) -> bool:
        c = self.c
        stack = [(f, v)]
        while stack:
            f, v = stack.pop()
            if f in alpha:
                if alpha[f] != v:
                    return False
                continue
            if v in used or c.src[v] != self.sigma[c.src[f]] or c.dst[v] != self.sigma[c.dst[f]]:
                return False
            alpha[f] = v
            used[v] = f
            for g in c.into(c.src[f]):
                if g in alpha:
                    stack.append((c.comp[(f, g)], c.comp[(v, alpha[g])]))
            for g in c.out_of(c.dst[f]):
                if g in alpha:
                    stack.append((c.comp[(g, f)], c.comp[(alpha[g], v)]))
            if not stack:
                # left cancellation: f o x = h known determines x
                for x in range(c.n_mor):
                    if x in alpha:
                        continue
                    for g in c.out_of(c.dst[x]):
                        h = c.comp[(g, x)]
                        if g in alpha and h in alpha:
                            tgt = c.hom(self.sigma[c.src[x]], self.sigma[c.dst[x]])
                            cand = [y for y in tgt if c.comp[(alpha[g], y)] == alpha[h]]
                            if len(cand) != 1:
                                return False
                            stack.append((x, cand[0]))
                            break
                    if stack:
                        break
        return True

    def _rec(self, alpha: Dict[int, int], used: Dict[int, int], found: List[CatFunctor]) -> None:
        c = self.c
        self.budget[0] -= 1
        if self.budget[0] < 0:
            raise BoundExceeded("isotypical automorphism search exceeded its budget")
        free = [f for f in range(c.n_mor) if f not in alpha]
        if not free:
            F = CatFunctor(self.sigma, [alpha[f] for f in range(c.n_mor)])
            if F.is_functor(c) and _isotypical(self.L, F):
                found.append(F)
            return
        f = free[0]
        for v in c.hom(self.sigma[c.src[f]], self.sigma[c.dst[f]]):
            if v in used:
                continue
            a2, u2 = dict(alpha), dict(used)
            if self._assign(a2, u2, f, v):
                self._rec(a2, u2, found)


def _isotypical(L: TransporterSystem, F: CatFunctor) -> bool:
    for a in range(len(L.objs)):
        b = F.obj[a]
        have = {F.mor[L.eps[(a, a)][x]] for x in L.objs[a].elements()}
        want = {L.eps[(b, b)][y] for y in L.objs[b].elements()}
        if have != want:
            return False
    return True


def is_isotypical(L: TransporterSystem, F: CatFunctor) -> bool:
    """Functor, bijective, isotypical and inclusion preserving."""
    if not (F.is_bijective() and F.is_functor(L.cat) and _isotypical(L, F)):
        return False
    n = len(L.objs)
    return all(F.mor[L.incl(a, b)] == L.incl(F.obj[a], F.obj[b])
               for a in range(n) for b in range(n) if L.objs[a] <= L.objs[b])


@dataclass
class IsotypicalData:
    autos: List[CatFunctor]
    conj: Dict[int, CatFunctor]
    inner: List[CatFunctor]

    @property
    def out_order(self) -> int:
        return len(self.autos) // len(self.inner)

    def index_of(self, F: CatFunctor) -> int:
        return self.autos.index(F)

    def to_dict(self) -> dict:
        return {"aut_typ": len(self.autos), "inner": len(self.inner), "out_typ": self.out_order}


def isotypical_autos(L: TransporterSystem, budget: Optional[int] = None) -> IsotypicalData:
    """All isotypical, inclusion-preserving automorphisms of L, and the map gamma -> c_gamma."""
    budget_box = [budget if budget is not None else get_bounds().functor_search]
    found: List[CatFunctor] = []
    for sigma in _object_perms(L):
        found.extend(_Search(L, sigma, budget_box).run())
    ident = CatFunctor.identity(L.cat)
    found = sorted(set(found), key=lambda F: (F != ident, F.obj, F.mor))
    top = top_object(L)
    conj = {g: conj_functor(L, g) for g in L.aut(top)}
    inner = sorted(set(conj.values()), key=lambda F: (F != ident, F.obj, F.mor))
    missing = [g for g, F in conj.items() if F not in set(found)]
    if missing:
        raise ValueError(f"c_gamma is not among the enumerated automorphisms for gamma = {missing[0]}")
    return IsotypicalData(found, conj, inner)


def restriction_to_S(L: TransporterSystem, F: CatFunctor) -> GroupMorphism:
    """beta with alpha(delta_S(g)) = delta_S(beta(g))."""
    S = L.S
    top = top_object(L)
    back = {f: s for s, f in L.eps[(top, top)].items()}
    img = {}
    for g in S.whole().elements():
        m = F.mor[L.eps[(top, top)][g]]
        if m not in back:
            raise ValueError("alpha does not preserve delta_S(S)")
        img[S.whole().key_of(g)] = back[m]
    return GroupMorphism(S, S.whole(), (), img)


def check_fusion_preserving(L: TransporterSystem, F: CatFunctor) -> List[dict]:
    """pi(alpha(psi)) = beta pi(psi) beta^-1 for every morphism; returns violations."""
    beta = restriction_to_S(L, F)
    bad = []
    c = L.cat
    for f in range(c.n_mor):
        P = L.objs[c.src[f]]
        if beta.restrict(P).image() != L.objs[F.obj[c.src[f]]]:
            bad.append({"morphism": f, "reason": "alpha(P) != beta(P)"})
            continue
        lhs = L.rho[F.mor[f]]
        for x in P.elements():
            if lhs.eval(beta.eval(x)) != beta.eval(L.rho[f].eval(x)):
                bad.append({"morphism": f, "element": L.S.label(x)})
                break
    return bad


def center_of(L: TransporterSystem) -> List[int]:
    """Elements chi of Aut_L(S) with c_chi = Id."""
    ident = CatFunctor.identity(L.cat)
    return [g for g in L.aut(top_object(L)) if conj_functor(L, g) == ident]


def center_oracle(L: TransporterSystem) -> List:
    """Z(F): elements of Z(S) fixed by every F-morphism between objects containing them."""
    F = L.F
    S = L.S
    Z = S.centralizer(S.whole()).elements()
    out = []
    for z in Z:
        ok = True
        for P in L.objs:
            if not P.contains(z):
                continue
            if any(phi.eval(z) != z for phi in F.hom(P, S.whole())):
                ok = False
                break
        if ok:
            out.append(z)
    return out
