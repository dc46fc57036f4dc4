"""Twisting functions NB(G) -> N Aut_typ(L) and their correspondence with extension pairs.

A twisting function is stored level-wise: ``phi[n]`` is an array indexed by
the n-simplices [g_1 | ... | g_n] of NB(G) (lexicographic, so the index is
the base-|G| number g_1 ... g_n) holding codes of level n-1 of the
simplicial group.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..catsys import TransporterSystem
from ..extend import ExtensionPair, validate_extension_pair
from ..grp.finite import FiniteGroup, all_homomorphisms, minimal_generators
from .groups import AutTypGroup, AutTypTables, WBar, aut_typ_tables
from .simplicial import DEFAULT_N, IdentityReport, Nerve, group_category


@dataclass
class TwistingFunction:
    G: FiniteGroup
    K: AutTypGroup
    N: int
    phi: Dict[int, np.ndarray]
    t: Optional[np.ndarray] = None       # t(g) as an index into the automorphism list
    chi: Optional[np.ndarray] = None     # chi(g, h) as a position in Aut_L(S)
    section: Optional[List[int]] = None  # t_U, when built from a pair

    def nbg(self) -> Nerve:
        return Nerve(group_category(self.G), self.N)

    def copy(self) -> "TwistingFunction":
        return TwistingFunction(self.G, self.K, self.N, {n: v.copy() for n, v in self.phi.items()},
                                None if self.t is None else self.t.copy(),
                                None if self.chi is None else self.chi.copy(), self.section)

    def equals(self, other: "TwistingFunction") -> bool:
        return all(np.array_equal(self.phi[n], other.phi[n]) for n in range(1, self.N + 1))


def trivial_twisting(G: FiniteGroup, K: AutTypGroup, N: int = DEFAULT_N) -> TwistingFunction:
    """phi identically 1."""
    return TwistingFunction(G, K, N, {n: np.zeros(G.order ** n, dtype=np.int64) for n in range(1, N + 1)},
                            np.zeros(G.order, dtype=np.int64), np.zeros((G.order, G.order), dtype=np.int64))


def _describe(NB: Nerve, n: int, k: int) -> str:
    return "[" + "|".join(str(g) for g in NB.simplex(n, k)) + "]"


def check_twisting(tw: TwistingFunction) -> IdentityReport:
    """The four twisting relations on every simplex up to level N, and the map to W-bar."""
    K = tw.K
    N = tw.N
    NB = tw.nbg()
    phi = tw.phi
    rep = IdentityReport()

    def flag(name, n, bad):
        if len(bad):
            rep.fail(relation=name, level=n, simplex=_describe(NB, n, int(bad[0])))

    for n in range(2, N + 1):
        rep.checked += NB.size(n)
        for i in range(2, n + 1):
            flag(f"1 (i={i})", n, np.nonzero(phi[n - 1][NB.faces[n][i]] != K.face(n - 1, i - 1, phi[n]))[0])
        rhs = K.mul(n - 2, K.face(n - 1, 0, phi[n]), phi[n - 1][NB.faces[n][0]])
        flag("2", n, np.nonzero(phi[n - 1][NB.faces[n][1]] != rhs)[0])
    for n in range(1, N):
        for i in range(1, n + 1):
            flag(f"3 (i={i})", n, np.nonzero(phi[n + 1][NB.degens[n][i]] != K.degen(n - 1, i - 1, phi[n]))[0])
        flag("4", n, np.nonzero(phi[n + 1][NB.degens[n][0]] != K.one(n))[0])
    wrep = check_wbar_map(tw, NB)
    if not wrep.ok:
        for w in wrep.failures:
            rep.fail(**w)
    return rep


def wbar_map(tw: TwistingFunction, NB: Nerve, n: int) -> List[np.ndarray]:
    """g -> (phi_n(g), phi_{n-1}(d_0 g), ..., phi_1(d_0^{n-1} g)) on all n-simplices."""
    out = []
    idx = np.arange(NB.size(n))
    for k in range(n):
        out.append(tw.phi[n - k][idx])
        if k < n - 1:
            idx = NB.faces[n - k][0][idx]
    return out


def check_wbar_map(tw: TwistingFunction, NB: Optional[Nerve] = None) -> IdentityReport:
    """The associated map NB(G) -> W-bar commutes with all faces and degeneracies."""
    NB = NB or tw.nbg()
    W = WBar(tw.K)
    rep = IdentityReport()
    maps = {n: wbar_map(tw, NB, n) for n in range(1, tw.N + 1)}
    for n in range(2, tw.N + 1):
        for i in range(n + 1):
            lhs = W.face(n, i, maps[n])
            rhs = [c[NB.faces[n][i]] for c in maps[n - 1]]
            for a, b in zip(lhs, rhs):
                bad = np.nonzero(a != b)[0]
                if len(bad):
                    rep.fail(relation=f"wbar d{i}", level=n, simplex=_describe(NB, n, int(bad[0])))
                    break
    for n in range(1, tw.N):
        for i in range(n + 1):
            lhs = W.degen(n, i, maps[n], NB.size(n))
            rhs = [c[NB.degens[n][i]] for c in maps[n + 1]]
            for a, b in zip(lhs, rhs):
                bad = np.nonzero(a != b)[0]
                if len(bad):
                    rep.fail(relation=f"wbar s{i}", level=n, simplex=_describe(NB, n, int(bad[0])))
                    break
    return rep


# from an extension pair ------------------------------------------------------------

def default_section(pair: ExtensionPair) -> List[int]:
    """Smallest element in each fibre of rho; t_U(1) = 1."""
    sec = [-1] * pair.G.order
    for x in pair.Gamma_hat.elements():
        g = pair.rho[x]
        if sec[g] < 0:
            sec[g] = x
    return sec


def cocycle(pair: ExtensionPair, tabs: AutTypTables, section: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """t = tau o t_U (automorphism indices) and chi with t_U(g) t_U(h) = chi(g, h) t_U(gh)."""
    Gh = pair.Gamma_hat
    G = pair.G
    if section[0] != 0 or any(pair.rho[section[g]] != g for g in G.elements()):
        raise ValueError("t_U must be a regular section of rho")
    back = pair.unembed
    pos = {m: i for i, m in enumerate(tabs.gamma_ids)}
    t = np.array([tabs.index[pair.tau[section[g]]] for g in G.elements()], dtype=np.int64)
    chi = np.zeros((G.order, G.order), dtype=np.int64)
    for g in G.elements():
        for h in G.elements():
            x = Gh.mul(Gh.mul(section[g], section[h]), Gh.inv(section[G.mul(g, h)]))
            chi[g, h] = pos[back[x]]
    return t, chi


def check_cocycle(tabs: AutTypTables, G: FiniteGroup, t: np.ndarray, chi: np.ndarray) -> Dict[str, bool]:
    """Normalization, t(g)t(h) = c_chi(g,h) t(gh), and the cocycle identity over all triples."""
    n = G.order
    tab = np.array(G.table, dtype=np.int64)
    g, h = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    inner = bool(np.all(tabs.amul[t[g], t[h]] == tabs.amul[tabs.conj[chi], t[tab[g, h]]]))
    normal = bool(np.all(chi[0, :] == 0) and np.all(chi[:, 0] == 0))
    g, h, k = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    lhs = tabs.gmul[chi[g, h], chi[tab[g, h], k]]
    rhs = tabs.gmul[tabs.actg[t[g], chi[h, k]], chi[g, tab[h, k]]]
    return {"normalized": normal, "inner": inner, "cocycle": bool(np.all(lhs == rhs))}


def twisting_from_pair(pair: ExtensionPair, tabs: Optional[AutTypTables] = None,
                       section: Optional[Sequence[int]] = None, N: int = DEFAULT_N) -> TwistingFunction:
    """phi_U: phi_1([g]) = t(g), phi_2([g|h]) = chi(g, h), higher levels by the chain formula."""
    tabs = tabs or aut_typ_tables(pair.L)
    K = AutTypGroup(tabs)
    G = pair.G
    section = list(section) if section is not None else default_section(pair)
    t, chi = cocycle(pair, tabs, section)
    tab = np.array(G.table, dtype=np.int64)
    NB = Nerve(group_category(G), N)
    phi = {}
    for n in range(1, N + 1):
        rows = NB.rows[n]
        g1 = rows[:, 0]
        chis = []
        prev = np.zeros(len(rows), dtype=np.int64)          # chi(g_1, g_{2,1}) = chi(g_1, 1) = 1
        run = np.zeros(len(rows), dtype=np.int64)            # g_{2,k}
        for k in range(1, n):
            run = tab[run, rows[:, k]]
            cur = chi[g1, run]
            chis.append(tabs.gmul[tabs.ginv[prev], cur])
            prev = cur
        phi[n] = K.encode(n - 1, t[g1], chis)
    tw = TwistingFunction(G, K, N, phi, t, chi, section)
    _check_objects(tw, NB)
    return tw


def _check_objects(tw: TwistingFunction, NB: Nerve) -> None:
    """The objects of phi_n(g) are t(g_{1,k}) t(g_{2,k})^{-1}."""
    tabs = tw.K.t
    tab = np.array(tw.G.table, dtype=np.int64)
    for n in range(1, tw.N + 1):
        rows = NB.rows[n]
        objs = tw.K.objects(n - 1, tw.phi[n])
        a = rows[:, 0].copy()
        b = np.zeros(len(rows), dtype=np.int64)
        for k in range(n):
            if k:
                a = tab[a, rows[:, k]]
                b = tab[b, rows[:, k]] if k > 1 else rows[:, 1].copy()
            want = tabs.amul[tw.t[a], tabs.ainv[tw.t[b]]]
            if np.any(objs[k] != want):
                raise ValueError(f"object formula fails at level {n}, position {k}")


# back to a pair --------------------------------------------------------------------

def _group_from_table(labels, table, name) -> FiniteGroup:
    G = FiniteGroup(labels, table, [], name)
    gens = minimal_generators(G, frozenset(G.elements()))
    return FiniteGroup(labels, table, gens, name)


def pair_from_twisting(tw: TwistingFunction, L: Optional[TransporterSystem] = None) -> Tuple[ExtensionPair, List[int]]:
    """Gamma_hat = Aut_L(S) x G with (a, g)(b, h) = (a t(g)(b) chi(g, h), gh), and t_U(g) = (1, g)."""
    K = tw.K
    tabs = K.t
    L = L or tabs.L
    G = tw.G
    if tw.N < 3:
        raise ValueError("the twisting function must be known up to level 3")
    rep = check_twisting(tw)
    if not rep.ok:
        raise ValueError(f"not a twisting function: {rep.failures[0]}")
    t = np.array(tw.phi[1], dtype=np.int64)
    a0, chis = K.decode(1, tw.phi[2])
    n = G.order
    if np.any(a0 != np.repeat(t, n)):
        raise ValueError("phi_2([g|h]) does not start at t(g)")
    chi = chis[0].reshape(n, n)
    k = tabs.k
    labels = [(a, g) for g in range(n) for a in range(k)]
    index = {lab: i for i, lab in enumerate(labels)}
    A = np.array([lab[0] for lab in labels])
    Gs = np.array([lab[1] for lab in labels])
    gt = np.array(G.table, dtype=np.int64)
    X, Y = np.meshgrid(np.arange(len(labels)), np.arange(len(labels)), indexing="ij")
    aa = tabs.gmul[tabs.gmul[A[X], tabs.actg[t[Gs[X]], A[Y]]], chi[Gs[X], Gs[Y]]]
    gg = gt[Gs[X], Gs[Y]]
    table = gg * k + aa                      # labels are ordered by (g, a)
    T = table
    if np.any(T[T, :] != T[:, T]):
        raise ValueError("the twisted product is not associative")
    Gh = _group_from_table(labels, table.tolist(), "Gamma_hat")
    autos = tabs.autos
    tau = [autos[tabs.conj[a]].compose(autos[t[g]]) for a, g in labels]
    embed = {tabs.gamma_ids[a]: index[(a, 0)] for a in range(k)}
    rho = [g for a, g in labels]
    pair = validate_extension_pair(L, Gh, embed, rho, G, tau)
    section = [index[(0, g)] for g in range(n)]
    return pair, section


def pair_isomorphism(U: ExtensionPair, sec: Sequence[int], V: ExtensionPair) -> Dict[str, bool]:
    """theta: V.Gamma_hat -> U.Gamma_hat, (a, g) -> embed(a) t_U(g), for V built from U's twisting."""
    Gu, Gv = U.Gamma_hat, V.Gamma_hat
    back_v = V.unembed
    theta = []
    for x in Gv.elements():
        a, g = Gv.labels[x]
        # (a, g) = (a, 1)(1, g) in V
        theta.append(Gu.mul(U.embed[back_v[Gv.index[(a, 0)]]], sec[g]))
    res = {"bijective": sorted(theta) == list(Gu.elements())}
    res["homomorphism"] = all(theta[Gv.mul(x, y)] == Gu.mul(theta[x], theta[y])
                              for x in Gv.elements() for y in Gv.elements())
    res["embedding"] = all(theta[V.embed[m]] == U.embed[m] for m in V.embed)
    res["projection"] = all(U.rho[theta[x]] == V.rho[x] for x in Gv.elements())
    res["tau"] = all(U.tau[theta[x]] == V.tau[x] for x in Gv.elements())
    return res


def roundtrip_pair(pair: ExtensionPair, tabs: Optional[AutTypTables] = None,
                   section: Optional[Sequence[int]] = None, N: int = 3) -> Dict[str, bool]:
    """pair -> twisting -> pair recovers the pair up to the natural isomorphism."""
    tabs = tabs or aut_typ_tables(pair.L)
    section = list(section) if section is not None else default_section(pair)
    tw = twisting_from_pair(pair, tabs, section, N)
    V, _ = pair_from_twisting(tw)
    return pair_isomorphism(pair, section, V)


def roundtrip_twisting(tw: TwistingFunction) -> bool:
    """twisting -> pair -> twisting is the identity, value by value."""
    V, sec = pair_from_twisting(tw)
    back = twisting_from_pair(V, tw.K.t, sec, tw.N)
    return back.equals(tw)


# random split pairs ----------------------------------------------------------------

def auto_group(tabs: AutTypTables) -> FiniteGroup:
    return _group_from_table(list(range(tabs.n_autos)), tabs.amul.tolist(), "Aut_typ")


def split_pair(L: TransporterSystem, tabs: AutTypTables, G: FiniteGroup, theta: Sequence[int]) -> ExtensionPair:
    """Aut_L(S) semidirect G through theta: G -> Aut^I_typ(L), built by closure."""
    k = tabs.k
    t = np.asarray(theta, dtype=np.int64)

    def mul(x, y):
        return (int(tabs.gmul[x[0], tabs.actg[t[x[1]], y[0]]]), G.mul(x[1], y[1]))

    gens = [(a, 0) for a in range(1, k)] + [(0, g) for g in G.gens]
    Gh = FiniteGroup.from_closure(gens, mul, (0, 0), f"Aut_L(S):{G.name}")
    autos = tabs.autos
    tau = [autos[tabs.conj[a]].compose(autos[t[g]]) for a, g in Gh.labels]
    embed = {tabs.gamma_ids[a]: Gh.index[(a, 0)] for a in range(k)}
    rho = [g for a, g in Gh.labels]
    return validate_extension_pair(L, Gh, embed, rho, G, tau)


def random_section(pair: ExtensionPair, rng: random.Random) -> List[int]:
    fibres: Dict[int, List[int]] = {}
    for x in pair.Gamma_hat.elements():
        fibres.setdefault(pair.rho[x], []).append(x)
    return [0] + [rng.choice(fibres[g]) for g in range(1, pair.G.order)]


def random_split_pairs(L: TransporterSystem, groups: Sequence[FiniteGroup], count: int, seed: int = 0,
                       tabs: Optional[AutTypTables] = None):
    """``count`` split pairs with random G from ``groups``, random action and random section."""
    rng = random.Random(seed)
    tabs = tabs or aut_typ_tables(L)
    A = auto_group(tabs)
    homs_cache: Dict[str, List[List[int]]] = {}
    out = []
    for _ in range(count):
        G = rng.choice(list(groups))
        if G.name not in homs_cache:
            homs_cache[G.name] = all_homomorphisms(G, A)
        theta = rng.choice(homs_cache[G.name])
        pair = split_pair(L, tabs, G, theta)
        out.append((pair, random_section(pair, rng)))
    return out
