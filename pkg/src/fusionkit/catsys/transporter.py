"""Transporter and linking systems over finite p-groups.

A system is a ``FiniteCategory`` whose objects are subgroups of S,
together with the structure data

* ``eps[(a, b)][s]``: the morphism eps_{P,Q}(s) for s in N_S(P, Q);
* ``rho[f]``: the homomorphism rho(f): P -> S with image in Q.

For a linking system eps and rho are usually called delta and pi.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from ..bounds import BoundExceeded
from ..fusion.core import AmbientFinite, FusionSystem
from ..grp.finite import FiniteGroup
from ..grp.ptoral import Elt, GroupMorphism, PToralGroup, PToralSubgroup, conjugation
from .category import AxiomReport, FiniteCategory

Eps = Dict[Tuple[int, int], Dict[Elt, int]]


class TransporterSystem:
    kind = "transporter"

    def __init__(self, cat: FiniteCategory, F: FusionSystem, objs: Sequence[PToralSubgroup],
                 eps: Eps, rho: Sequence[GroupMorphism], name: str = ""):
        if len(objs) != len(cat.objects):
            raise ValueError("one subgroup per object is needed")
        self.cat = cat
        self.F = F
        self.S: PToralGroup = F.S
        self.objs = list(objs)
        self.eps = eps
        self.rho = list(rho)
        self.name = name or cat.name
        self.obj_index = {P: i for i, P in enumerate(self.objs)}
        self._kernel: Dict[int, List[int]] = {}

    # structure -----------------------------------------------------------
    @property
    def delta(self) -> Eps:
        return self.eps

    @property
    def pi(self) -> List[GroupMorphism]:
        return self.rho

    def index(self, P) -> int:
        if isinstance(P, int):
            return P
        try:
            return self.obj_index[P]
        except KeyError:
            raise ValueError(f"{P.describe()} is not an object") from None

    def hom(self, P, Q) -> List[int]:
        return self.cat.hom(self.index(P), self.index(Q))

    def aut(self, P) -> List[int]:
        a = self.index(P)
        return self.cat.hom(a, a)

    def incl(self, P, Q) -> int:
        a, b = self.index(P), self.index(Q)
        try:
            return self.eps[(a, b)][self.S.identity]
        except KeyError:
            raise ValueError(f"{self.objs[a].describe()} is not contained in {self.objs[b].describe()}") from None

    def eps_of(self, P, Q, s: Elt) -> int:
        return self.eps[(self.index(P), self.index(Q))][s]

    def eps_set(self, P, sub: PToralSubgroup) -> Dict[int, Elt]:
        """eps_P(x) for x in sub (which must normalize P), keyed by morphism."""
        a = self.index(P)
        table = self.eps[(a, a)]
        return {table[x]: x for x in sub.elements()}

    def kernel(self, P) -> List[int]:
        """E(P) = ker(rho_P : Aut_T(P) -> Aut_F(P))."""
        a = self.index(P)
        if a not in self._kernel:
            self._kernel[a] = [f for f in self.cat.hom(a, a) if self.rho[f].is_identity_on()]
        return self._kernel[a]

    def aut_group(self, P) -> Tuple[FiniteGroup, List[int]]:
        """Aut_T(P) as a FiniteGroup; the list maps group ids to morphism ids."""
        a = self.index(P)
        ids = [self.cat.ident[a]] + [f for f in self.cat.hom(a, a) if f != self.cat.ident[a]]
        pos = {f: i for i, f in enumerate(ids)}
        table = [[pos[self.cat.comp[(f, g)]] for g in ids] for f in ids]
        return FiniteGroup(ids, table, range(len(ids)), f"Aut({self.objs[a].describe()})"), ids

    def isomorphisms(self, P, Q) -> List[int]:
        a, b = self.index(P), self.index(Q)
        if self.objs[a].order() != self.objs[b].order():
            return []
        return list(self.cat.hom(a, b))

    def describe_morphism(self, f: int) -> dict:
        c = self.cat
        return {"id": f, "src": self.objs[c.src[f]].describe(), "dst": self.objs[c.dst[f]].describe(),
                "rho": self.rho[f].describe()}

    def counts(self) -> Dict[Tuple[int, int], int]:
        n = len(self.objs)
        return {(a, b): len(self.cat.hom(a, b)) for a in range(n) for b in range(n)}

    def to_json(self) -> dict:
        out = self.cat.to_json()
        out["kind"] = self.kind
        out["objects"] = [P.describe() for P in self.objs]
        return out


class LinkingSystem(TransporterSystem):
    kind = "linking"


# construction ---------------------------------------------------------------

def _conj_map(S: PToralGroup, G: FiniteGroup, g: int, P: PToralSubgroup) -> GroupMorphism:
    img = {P.key_of(x): ((), S.unembed[G.conj(g, S.embed[x[1]])]) for x in P.elements()}
    return GroupMorphism(S, P, (), img)


def transporter_of(G: FiniteGroup, S: PToralGroup, H: Sequence[PToralSubgroup], name: str = "") -> TransporterSystem:
    """T_H(G): morphisms P -> Q are the g in G with g P g^-1 <= Q.

    S must be a rank-0 group carrying G as its ambient group; H must be
    closed under G-conjugacy (inside S) and under overgroups.
    """
    if S.ambient is not G or S.rank:
        raise ValueError("S must be a finite subgroup embedded in G")
    objs = sorted(dict.fromkeys(H), key=lambda P: P.sort_key())
    for P in objs:
        if P.S is not S:
            raise ValueError(f"{P.describe()} is not a subgroup of {S.name}")
    ids = [S.ambient_ids(P) for P in objs]
    s_ids = frozenset(S.embed)
    known = set(ids)
    for P, pid in zip(objs, ids):
        for g in G.elements():
            c = G.conj_set(g, pid)
            if c <= s_ids and c not in known:
                raise ValueError(f"H is not closed under G-conjugacy: {G.label(g)} moves "
                                 f"{P.describe()} out of H")
    for P in objs:
        for Q in _subgroups(S):
            if P <= Q and Q not in set(objs):
                raise ValueError(f"H is not closed under overgroups: {Q.describe()} contains "
                                 f"{P.describe()} but is missing")
    src: List[int] = []
    dst: List[int] = []
    labels: List[tuple] = []
    for a in range(len(objs)):
        for b in range(len(objs)):
            for g in G.transporter(ids[a], ids[b]):
                src.append(a)
                dst.append(b)
                labels.append((a, b, g))
    index = {lab: i for i, lab in enumerate(labels)}
    comp = {}
    for f, (b, c, h) in enumerate(labels):
        for g_id in [i for i in range(len(labels)) if labels[i][1] == b]:
            a, _, g = labels[g_id]
            comp[(f, g_id)] = index[(a, c, G.mul(h, g))]
    ident = [index[(a, a, 0)] for a in range(len(objs))]
    cat = FiniteCategory([P.describe() for P in objs], src, dst, comp, ident, labels,
                         name or f"T_H({G.name})")
    eps: Eps = {}
    for (a, b, g), f in index.items():
        if g in s_ids:
            eps.setdefault((a, b), {})[((), S.unembed[g])] = f
    rho = [_conj_map(S, G, g, objs[a]) for (a, b, g) in labels]
    return TransporterSystem(cat, AmbientFinite(S), objs, eps, rho, cat.name)


def _subgroups(S: PToralGroup) -> List[PToralSubgroup]:
    key = "_all_subgroups"
    if key not in S._cache:
        S._cache[key] = [S.closure([((), g) for g in h]) for h in S.pi.subgroups()]
    return S._cache[key]


# axiom checks -----------------------------------------------------------------

def _check_functors(T: TransporterSystem, rep: AxiomReport) -> None:
    """eps and rho are functors with the right sources and targets."""
    c = T.cat
    S = T.S
    rep.passed("functor")
    for a in range(len(T.objs)):
        if T.eps.get((a, a), {}).get(S.identity) != c.ident[a]:
            rep.record("functor", False, {"object": a, "reason": "eps(1) is not the identity"})
        if not T.rho[c.ident[a]].is_identity_on():
            rep.record("functor", False, {"object": a, "reason": "rho(id) is not the identity"})
    for f in range(c.n_mor):
        P, Q = T.objs[c.src[f]], T.objs[c.dst[f]]
        if T.rho[f].source != P or not T.rho[f].image() <= Q:
            rep.record("functor", False, {"morphism": f, "reason": "rho(f) has the wrong source or target"})
    for (f, g), h in c.comp.items():
        if T.rho[f].compose(T.rho[g]) != T.rho[h]:
            rep.record("functor", False, {"f": f, "g": g, "reason": "rho does not preserve composition"})
    for (a, b), table in T.eps.items():
        for (b2, cc), table2 in T.eps.items():
            if b2 != b:
                continue
            for s, f in table.items():
                for t, g in table2.items():
                    ts = S.mul(t, s)
                    h = T.eps.get((a, cc), {}).get(ts)
                    if h is None or c.comp.get((g, f)) != h:
                        rep.record("functor", False, {"f": f, "g": g, "reason": "eps does not preserve composition"})


def _check_objects(T: TransporterSystem, rep: AxiomReport, axiom: str) -> None:
    """Objects closed under F-conjugacy and overgroups."""
    F = T.F
    S = T.S
    rep.passed(axiom)
    objs = set(T.objs)
    subs = _subgroups(S)
    for P in T.objs:
        for psi in F.rep(P):
            Q = psi.image()
            for x in S.whole().elements():
                R = S.conjugate(x, Q)
                if R not in objs:
                    rep.record(axiom, False, {"subgroup": R.describe(), "reason": f"F-conjugate of {P.describe()} missing"})
        for Q in subs:
            if P <= Q and Q not in objs:
                rep.record(axiom, False, {"subgroup": Q.describe(), "reason": f"overgroup of {P.describe()} missing"})


def check_transporter_axioms(T: TransporterSystem) -> AxiomReport:
    """Per-axiom verdicts for the transporter system axioms (exhaustive)."""
    rep = T.cat.check()
    rep.notes.append("axiom (III) is checked on the finite object poset: every chain of objects is "
                     "finite, so it is constant from its last member on")
    if not rep.verdicts.get("closure", True):
        return rep
    _check_functors(T, rep)
    _check_objects(T, rep, "A1")
    c = T.cat
    S = T.S
    F = T.F
    n = len(T.objs)
    for ax in ("A2", "B", "C", "I", "II", "III"):
        rep.passed(ax)

    # (A2): E(P) acts freely on both sides and rho is the orbit map
    for a in range(n):
        E = T.kernel(a)
        for b in range(n):
            fibres: Dict[GroupMorphism, set] = {}
            for f in c.hom(a, b):
                fibres.setdefault(T.rho[f], set()).add(f)
            Eb = T.kernel(b)
            for f in c.hom(a, b):
                orbit = {c.comp[(f, e)] for e in E}
                if len(orbit) != len(E):
                    rep.record("A2", False, {"morphism": f, "reason": "E(P) does not act freely"})
                if orbit != fibres[T.rho[f]]:
                    rep.record("A2", False, {"morphism": f, "reason": "rho fibre is not an E(P)-orbit"})
                if len({c.comp[(e, f)] for e in Eb}) != len(Eb):
                    rep.record("A2", False, {"morphism": f, "reason": "E(Q) does not act freely"})
            want = set(F.hom(T.objs[a], T.objs[b]))
            have = set(fibres)
            if want != have:
                rep.record("A2", False, {"P": T.objs[a].describe(), "Q": T.objs[b].describe(),
                                         "reason": "rho is not onto Hom_F(P, Q)"})

    # (B): eps injective and rho(eps(g)) = c_g
    for (a, b), table in T.eps.items():
        if len(set(table.values())) != len(table):
            rep.record("B", False, {"P": T.objs[a].describe(), "Q": T.objs[b].describe(),
                                    "reason": "eps is not injective"})
        want = set(S.transporter_elements(T.objs[a], T.objs[b]))
        if set(table) != want:
            rep.record("B", False, {"P": T.objs[a].describe(), "Q": T.objs[b].describe(),
                                    "reason": "eps is not defined on N_S(P, Q)"})
        for s, f in table.items():
            if T.rho[f] != conjugation(s, T.objs[a]):
                rep.record("B", False, {"morphism": f, "element": S.label(s), "reason": "rho(eps(g)) != c_g"})

    # (C): phi o eps_P(g) = eps_Q(rho(phi)(g)) o phi
    for f in range(c.n_mor):
        a, b = c.src[f], c.dst[f]
        for g in T.objs[a].elements():
            left = c.comp.get((f, T.eps[(a, a)].get(g)))
            e = T.eps[(b, b)].get(T.rho[f].eval(g))
            right = c.comp.get((e, f)) if e is not None else None
            if left is None or left != right:
                rep.record("C", False, {"morphism": f, "element": S.label(g)})

    # (I): each F-class has a member P with eps_P(N_S(P)) Sylow in Aut_T(P)
    seen: List[int] = []
    for a in range(n):
        if any(F.is_conjugate(T.objs[a], T.objs[b]) for b in seen):
            continue
        seen.append(a)
        members = [b for b in range(n) if F.is_conjugate(T.objs[a], T.objs[b])]
        ok = False
        for b in members:
            order = len(c.hom(b, b))
            ns = len(S.normalizer(T.objs[b]).elements())
            if order % ns == 0 and (order // ns) % S.p != 0:
                ok = True
                break
        if not ok:
            rep.record("I", False, {"class": T.objs[a].describe(),
                                    "reason": "no member with eps(N_S(P)) Sylow in Aut_T(P)"})

    # (II): extension along normal overgroups
    for a in range(n):
        P = T.objs[a]
        NP = S.normalizer(P)
        for b in range(n):
            Q = T.objs[b]
            NQ = S.normalizer(Q)
            for phi in T.isomorphisms(a, b):
                inv = c.inverse(phi)
                if inv is None:
                    continue
                for a2 in range(n):
                    P2 = T.objs[a2]
                    if not (P <= P2 and P2 <= NP):
                        continue
                    conj = [c.comp[(c.comp[(phi, T.eps[(a, a)][x])], inv)] for x in P2.gens()]
                    for b2 in range(n):
                        Q2 = T.objs[b2]
                        if not (Q <= Q2 and Q2 <= NQ):
                            continue
                        allowed = {T.eps[(b, b)][y] for y in Q2.elements()}
                        if not all(m in allowed for m in conj):
                            continue
                        target = c.comp[(T.incl(b, b2), phi)]
                        if not any(c.comp[(g, T.incl(a, a2))] == target for g in c.hom(a2, b2)):
                            rep.record("II", False, {"morphism": phi, "P'": P2.describe(), "Q'": Q2.describe()})
    return rep


def check_linking_axioms(L: TransporterSystem) -> AxiomReport:
    """Verdicts for the linking system axioms (A), (B), (C) plus object conditions."""
    from ..fusion.saturation import fully_centralized, is_centric, is_radical
    rep = L.cat.check()
    if not rep.verdicts.get("closure", True):
        return rep
    _check_functors(L, rep)
    _check_objects(L, rep, "objects")
    c = L.cat
    S = L.S
    F = L.F
    n = len(L.objs)
    objs = set(L.objs)
    for Q in F.all_subgroups():
        if Q not in objs and is_centric(F, Q):
            try:
                rad = is_radical(F, Q)
            except BoundExceeded:
                rad = True
            if rad:
                rep.record("objects", False, {"subgroup": Q.describe(), "reason": "centric radical subgroup missing"})
    for ax in ("A", "B", "C"):
        rep.passed(ax)
    for a in range(n):
        if not any(fully_centralized(F, L.objs[b]) for b in range(n) if L.cat.hom(a, b) and
                   L.objs[a].order() == L.objs[b].order()):
            rep.record("objects", False, {"subgroup": L.objs[a].describe(),
                                          "reason": "not isomorphic to a fully centralized object"})

    # (A)
    for a in range(n):
        P = L.objs[a]
        if not fully_centralized(F, P):
            continue
        C = S.centralizer(P)
        cs = [L.eps[(a, a)][z] for z in C.elements()]
        for b in range(n):
            fibres: Dict[GroupMorphism, set] = {}
            for f in c.hom(a, b):
                fibres.setdefault(L.rho[f], set()).add(f)
            for f in c.hom(a, b):
                orbit = {c.comp[(f, e)] for e in cs}
                if len(orbit) != len(cs):
                    rep.record("A", False, {"morphism": f, "reason": "C_S(P) does not act freely"})
                elif orbit != fibres[L.rho[f]]:
                    rep.record("A", False, {"morphism": f, "reason": "pi is not injective on C_S(P)-orbits"})
            if set(fibres) != set(F.hom(P, L.objs[b])):
                rep.record("A", False, {"P": P.describe(), "Q": L.objs[b].describe(),
                                        "reason": "pi is not onto Hom_F(P, Q)"})
    # (B)
    for (a, b), table in L.eps.items():
        if len(set(table.values())) != len(table):
            rep.record("B", False, {"P": L.objs[a].describe(), "reason": "delta is not injective"})
        for s, f in table.items():
            if L.rho[f] != conjugation(s, L.objs[a]):
                rep.record("B", False, {"morphism": f, "element": S.label(s), "reason": "pi(delta(g)) != c_g"})
    # (C)
    for f in range(c.n_mor):
        a, b = c.src[f], c.dst[f]
        for g in L.objs[a].elements():
            e = L.eps[(b, b)].get(L.rho[f].eval(g))
            if e is None or c.comp.get((f, L.eps[(a, a)][g])) != c.comp.get((e, f)):
                rep.record("C", False, {"morphism": f, "element": S.label(g)})
    return rep


# quotients ----------------------------------------------------------------------

def kernel_splitting(T: TransporterSystem, P) -> Tuple[List[int], List[int]]:
    """(eps_P(Z(P)), E_0(P)) with E(P) = eps_P(Z(P)) x E_0(P) and |E_0(P)| prime to p.

    Raises ValueError when E(P) does not split this way.
    """
    a = T.index(P)
    c = T.cat
    p = T.S.p
    E = T.kernel(a)
    G, ids = T.aut_group(a)
    pos = {f: i for i, f in enumerate(ids)}
    Z = [T.eps[(a, a)][z] for z in T.S.centralizer(T.objs[a]).intersect(T.objs[a]).elements()]
    E0 = [e for e in E if G.element_order(pos[e]) % p != 0]
    if any(c.comp[(x, y)] not in set(E0) for x in E0 for y in E0):
        raise ValueError(f"the p'-elements of E({T.objs[a].describe()}) do not form a subgroup")
    if len(E0) % p == 0 or len(E0) * len(Z) != len(E) or set(E0) & set(Z) != {c.ident[a]}:
        raise ValueError(f"E({T.objs[a].describe()}) is not Z(P) x E_0(P)")
    if not set(Z) <= set(E):
        raise ValueError(f"eps(Z({T.objs[a].describe()})) is not in E(P)")
    return Z, E0


def linking_quotient(T: TransporterSystem, name: str = "") -> LinkingSystem:
    """Mor_L(P, Q) = Mor_T(P, Q) / E_0(P), with composition checked to be well defined."""
    c = T.cat
    n = len(T.objs)
    E0 = {a: kernel_splitting(T, a)[1] for a in range(n)}
    cls_of: Dict[int, int] = {}
    reps: List[int] = []
    members: List[List[int]] = []
    for f in range(c.n_mor):
        if f in cls_of:
            continue
        orbit = sorted({c.comp[(f, e)] for e in E0[c.src[f]]})
        k = len(reps)
        reps.append(orbit[0])
        members.append(orbit)
        for g in orbit:
            cls_of[g] = k
    comp = {}
    for k, f in enumerate(reps):
        for m, g in enumerate(reps):
            if c.dst[g] != c.src[f]:
                continue
            vals = {cls_of[c.comp[(f2, g2)]] for f2 in members[k] for g2 in members[m]}
            if len(vals) != 1:
                raise ValueError("composition is not well defined on E_0-classes")
            comp[(k, m)] = vals.pop()
    for k, ms in enumerate(members):
        if len({T.rho[f] for f in ms}) != 1:
            raise ValueError("rho is not constant on E_0-classes")
    src = [c.src[f] for f in reps]
    dst = [c.dst[f] for f in reps]
    ident = [cls_of[i] for i in c.ident]
    cat = FiniteCategory(c.objects, src, dst, comp, ident, [c.labels[f] for f in reps],
                         name or f"L({c.name})")
    eps = {ab: {s: cls_of[f] for s, f in table.items()} for ab, table in T.eps.items()}
    rho = [T.rho[f] for f in reps]
    L = LinkingSystem(cat, T.F, T.objs, eps, rho, cat.name)
    L.quotient_map = [cls_of[f] for f in range(c.n_mor)]
    return L


def orbit_category(T: TransporterSystem) -> FiniteCategory:
    """Mor_O(P, Q) = Mor_T(P, Q) / eps_Q(Q), with composition checked to be well defined."""
    c = T.cat
    cls_of: Dict[int, int] = {}
    members: List[List[int]] = []
    for f in range(c.n_mor):
        if f in cls_of:
            continue
        b = c.dst[f]
        orbit = sorted({c.comp[(T.eps[(b, b)][q], f)] for q in T.objs[b].elements()})
        if len(orbit) != len(T.objs[b].elements()):
            raise ValueError("eps_Q(Q) does not act freely")
        for g in orbit:
            cls_of[g] = len(members)
        members.append(orbit)
    comp = {}
    for k, fs in enumerate(members):
        for m, gs in enumerate(members):
            if c.dst[gs[0]] != c.src[fs[0]]:
                continue
            vals = {cls_of[c.comp[(f, g)]] for f in fs for g in gs}
            if len(vals) != 1:
                raise ValueError("composition is not well defined on orbits")
            comp[(k, m)] = vals.pop()
    return FiniteCategory(c.objects, [c.src[fs[0]] for fs in members], [c.dst[fs[0]] for fs in members],
                          comp, [cls_of[i] for i in c.ident], [c.labels[fs[0]] for fs in members],
                          f"O({c.name})")


# restriction and extension -------------------------------------------------------

def restrict_morphism(T: TransporterSystem, psi: int, P_star, Q_star) -> int:
    """The unique psi' in Mor(P*, Q*) with psi o incl = incl o psi'."""
    c = T.cat
    a, b = c.src[psi], c.dst[psi]
    a2, b2 = T.index(P_star), T.index(Q_star)
    P2, Q2 = T.objs[a2], T.objs[b2]
    if not P2 <= T.objs[a] or not Q2 <= T.objs[b]:
        raise ValueError("P* and Q* must be subgroups of the source and target")
    if not T.rho[psi].restrict(P2).image() <= Q2:
        raise ValueError("rho(psi)(P*) is not contained in Q*")
    target = c.comp[(psi, T.incl(a2, a))]
    inc = T.incl(b2, b)
    found = [g for g in c.hom(a2, b2) if c.comp[(inc, g)] == target]
    if len(found) != 1:
        raise ValueError(f"expected one restriction, found {len(found)}")
    return found[0]


def extend_morphism(T: TransporterSystem, psi: int, P_bar, Q_bar) -> int:
    """The unique extension of psi to P_bar -> Q_bar.

    Needs P normal in P_bar, Q normal in Q_bar, and
    psi eps_P(P_bar) psi^-1 <= eps_Q(Q_bar).
    """
    c = T.cat
    S = T.S
    a, b = c.src[psi], c.dst[psi]
    a2, b2 = T.index(P_bar), T.index(Q_bar)
    P, Q, P2, Q2 = T.objs[a], T.objs[b], T.objs[a2], T.objs[b2]
    if not (P <= P2 and P2 <= S.normalizer(P) and Q <= Q2 and Q2 <= S.normalizer(Q)):
        raise ValueError("the source and target must be normal in the overgroups")
    inv = c.inverse(psi)
    if inv is None:
        raise ValueError("psi is not an isomorphism")
    allowed = {T.eps[(b, b)][y] for y in Q2.elements()}
    for x in P2.gens():
        m = c.comp[(c.comp[(psi, T.eps[(a, a)][x])], inv)]
        if m not in allowed:
            raise ValueError(f"conjugation by psi sends {S.label(x)} outside eps(Q_bar)")
    target = c.comp[(T.incl(b, b2), psi)]
    found = [g for g in c.hom(a2, b2) if c.comp[(g, T.incl(a, a2))] == target]
    if len(found) != 1:
        raise ValueError(f"expected one extension, found {len(found)}")
    return found[0]


def is_T_radical(T: TransporterSystem, P) -> bool:
    """O_p(Aut_T(P)) = eps_P(P)."""
    a = T.index(P)
    G, ids = T.aut_group(a)
    pos = {f: i for i, f in enumerate(ids)}
    inner = {pos[T.eps[(a, a)][x]] for x in T.objs[a].elements()}
    return set(G.op(T.S.p)) == inner
