"""Twisted cartesian products E(phi), categories recovered from simplicial sets,
and the isomorphism between the nerve of L_U and E(phi_U).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..catsys import FiniteCategory, TransporterSystem
from ..extend import ExtensionPair, LUCategory, build_LU
from .groups import AutTypTables, aut_typ_tables
from .simplicial import DEFAULT_N, IdentityReport, Nerve, SimplicialSet, group_category
from .twisting import TwistingFunction, default_section, twisting_from_pair


class TwistedProduct(SimplicialSet):
    """E(phi)_n = N_n L x N_n B(G); only d_0 is twisted, by phi_n(g)^-1."""

    def __init__(self, tw: TwistingFunction, L: Optional[TransporterSystem] = None, N: Optional[int] = None):
        K = tw.K
        L = L or K.t.L
        N = tw.N if N is None else N
        self.tw = tw
        self.NL = NL = Nerve(L.cat, N)
        self.NB = NB = Nerve(group_category(tw.G), N)
        gsz = [NB.size(n) for n in range(N + 1)]
        sizes = [NL.size(n) * gsz[n] for n in range(N + 1)]
        faces = {}
        degens = {}
        for n in range(1, N + 1):
            allx = np.arange(sizes[n], dtype=np.int64)
            xi, g = allx // gsz[n], allx % gsz[n]
            rows = []
            for i in range(n + 1):
                if i == 0:
                    twist = K.inv(n - 1, tw.phi[n][g])
                    moved = K.act(n - 1, twist, NL.rows[n - 1][NL.faces[n][0][xi]])
                    xi2 = NL.index[n - 1].lookup(moved)
                else:
                    xi2 = NL.faces[n][i][xi]
                rows.append(xi2 * gsz[n - 1] + NB.faces[n][i][g])
            faces[n] = np.stack(rows)
        for n in range(N):
            allx = np.arange(sizes[n], dtype=np.int64)
            xi, g = allx // gsz[n], allx % gsz[n]
            degens[n] = np.stack([NL.degens[n][i][xi] * gsz[n + 1] + NB.degens[n][i][g] for i in range(n + 1)])
        super().__init__(N, sizes, faces, degens, f"E(phi) over {L.name}")
        self.gsz = gsz

    def split(self, n: int, x):
        """(nerve-of-L index, NB(G) index) of level-n simplices."""
        return np.asarray(x) // self.gsz[n], np.asarray(x) % self.gsz[n]

    def projection_ok(self) -> bool:
        """p_phi commutes with every face and degeneracy."""
        for n in range(1, self.N + 1):
            g = np.arange(self.sizes[n]) % self.gsz[n]
            for i in range(n + 1):
                if np.any(self.faces[n][i] % self.gsz[n - 1] != self.NB.faces[n][i][g]):
                    return False
        for n in range(self.N):
            g = np.arange(self.sizes[n]) % self.gsz[n]
            for i in range(n + 1):
                if np.any(self.degens[n][i] % self.gsz[n + 1] != self.NB.degens[n][i][g]):
                    return False
        return True


def twisted_product(tw: TwistingFunction, L: Optional[TransporterSystem] = None,
                    N: Optional[int] = None) -> TwistedProduct:
    return TwistedProduct(tw, L, N)


# categories from simplicial sets ----------------------------------------------------

def edges(X: SimplicialSet, n: int) -> np.ndarray:
    """Row k of the result is the edge from vertex k to k+1 of every n-simplex."""
    allx = np.arange(X.sizes[n], dtype=np.int64)
    cols = []
    for k in range(n):
        x = allx
        lvl = n
        while lvl > k + 1:          # drop vertices above k+1
            x = X.faces[lvl][lvl][x]
            lvl -= 1
        for _ in range(k):          # then vertices below k
            x = X.faces[lvl][0][x]
            lvl -= 1
        cols.append(x)
    return np.stack(cols, axis=1) if cols else np.zeros((len(allx), 0), dtype=np.int64)


class NotACategoryError(ValueError):
    pass


def check_segal_maps(X: SimplicialSet) -> Dict[int, bool]:
    """Whether x -> (d_2^{n-1} x, d_0 x) is a bijection onto the matching pairs, per level."""
    out = {}
    d0_1 = X.faces[1][0]
    cnt = np.bincount(d0_1, minlength=X.sizes[0])
    for n in range(2, X.N + 1):
        allx = np.arange(X.sizes[n])
        a = allx
        lvl = n
        for _ in range(n - 1):
            a = X.faces[lvl][2][a] if lvl >= 2 else a
            lvl -= 1
        b = X.faces[n][0][allx]
        c = np.arange(X.sizes[n - 1])
        lvl = n - 1
        for _ in range(n - 1):
            c = X.faces[lvl][1][c]
            lvl -= 1
        target = int(cnt[c].sum())
        code = a * X.sizes[n - 1] + b
        matching = bool(np.all(d0_1[a] == c[b]))
        out[n] = matching and len(np.unique(code)) == X.sizes[n] == target
    return out


@dataclass
class RecoveredCategory:
    C: FiniteCategory
    segal: Dict[int, bool]
    roundtrip: bool
    checks: Dict[str, bool] = field(default_factory=dict)


def category_from_simplicial(X: SimplicialSet) -> RecoveredCategory:
    """Objects X_0, morphisms X_1 from d_0 f to d_1 f, f1 o f2 = d_1 D_2^{-1}(f1, f2)."""
    segal = check_segal_maps(X)
    bad = [n for n, ok in segal.items() if not ok]
    if bad:
        raise NotACategoryError(f"D_{bad[0]} is not a bijection")
    src = X.faces[1][0].tolist()
    dst = X.faces[1][1].tolist()
    ident = X.degens[0][0].tolist()
    comp = {}
    d2, d0, d1 = X.faces[2][2], X.faces[2][0], X.faces[2][1]
    for x in range(X.sizes[2]):
        comp[(int(d2[x]), int(d0[x]))] = int(d1[x])
    C = FiniteCategory(list(range(X.sizes[0])), src, dst, comp, ident, None, f"cat({X.name})")
    checks = {"category": C.check().ok}
    ok = True
    NC = Nerve(C, X.N)
    for n in range(1, X.N + 1):
        E = edges(X, n)
        try:
            iso = NC.index[n].lookup(E)
        except ValueError:
            ok = False
            break
        if len(np.unique(iso)) != X.sizes[n] or X.sizes[n] != NC.size(n):
            ok = False
            break
    checks["roundtrip"] = ok
    return RecoveredCategory(C, segal, ok, checks)


# nerve of L_U versus E(phi_U) -------------------------------------------------------

@dataclass
class TwistedIsoReport:
    checks: Dict[str, bool]
    sizes: List[int]
    omega: List[int]                 # L_U morphism id -> E(phi)_1 id

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "sizes": list(self.sizes)}


def check_nerve_iso(pair: ExtensionPair, N: int = DEFAULT_N, tabs: Optional[AutTypTables] = None,
                    section: Optional[Sequence[int]] = None, LU: Optional[LUCategory] = None) -> TwistedIsoReport:
    """omega([[phi, t_U(g)]]) = (phi, g) induces N L_U = E(phi_U) commuting with projections to NB(G)."""
    tabs = tabs or aut_typ_tables(pair.L)
    section = list(section) if section is not None else default_section(pair)
    LU = LU or build_LU(pair)
    tw = twisting_from_pair(pair, tabs, section, N)
    E = twisted_product(tw, pair.L, N)
    NU = Nerve(LU.cat, N)
    L = pair.L
    Gn = pair.G.order
    checks: Dict[str, bool] = {}
    # omega on morphisms
    omega = [-1] * LU.cat.n_mor
    for phi in range(L.cat.n_mor):
        for g in range(Gn):
            omega[LU.normalize(phi, section[g])] = phi * Gn + g
    checks["omega_bijective"] = sorted(omega) == list(range(E.sizes[1]))
    omega_arr = np.array(omega, dtype=np.int64)
    inv = np.empty_like(omega_arr)
    inv[omega_arr] = np.arange(len(omega_arr))
    # composition in the recovered category against the twisted formula
    rec = category_from_simplicial(E)
    checks["E_is_category"] = rec.checks["category"] and rec.roundtrip
    comp_ok = True
    K = tw.K
    for (f1, f2), h in rec.C.comp.items():
        phi, g = divmod(f1, Gn)
        psi, hh = divmod(f2, Gn)
        x = tw.phi[2][g * Gn + hh]
        lam = K.act(1, np.array([x]), np.array([[psi]]))[0, 0]
        want = L.cat.comp[(phi, int(lam))] * Gn + pair.G.mul(g, hh)
        if want != h:
            comp_ok = False
            break
    checks["composition_formula"] = comp_ok
    functor_ok = all(omega[LU.cat.comp[(a, b)]] == rec.C.comp[(omega[a], omega[b])] for (a, b) in LU.cat.comp)
    checks["omega_functor"] = functor_ok
    # level-wise isomorphism, faces, degeneracies and projections
    psi = {0: np.arange(E.sizes[0])}
    rho_of = np.array([pair.rho[LU.reps[m][1]] for m in range(LU.cat.n_mor)], dtype=np.int64)
    iso_ok = True
    proj_ok = True
    for n in range(1, N + 1):
        rows = inv[edges(E, n)]
        try:
            psi[n] = NU.index[n].lookup(rows)
        except ValueError:
            iso_ok = False
            break
        if len(np.unique(psi[n])) != E.sizes[n] or E.sizes[n] != NU.size(n):
            iso_ok = False
        # projection: pr of the L_U chain equals the NB(G) part
        _, g = E.split(n, np.arange(E.sizes[n]))
        pr_rows = rho_of[NU.rows[n][psi[n]]]
        if np.any(E.NB.index[n].lookup(pr_rows) != g):
            proj_ok = False
    checks["levelwise_bijection"] = iso_ok
    checks["projections"] = proj_ok
    face_ok = iso_ok
    if iso_ok:
        for n in range(1, N + 1):
            for i in range(n + 1):
                if np.any(NU.faces[n][i][psi[n]] != psi[n - 1][E.faces[n][i]]):
                    face_ok = False
        for n in range(N):
            for i in range(n + 1):
                if np.any(NU.degens[n][i][psi[n]] != psi[n + 1][E.degens[n][i]]):
                    face_ok = False
    checks["faces_and_degeneracies"] = face_ok
    checks["E_identities"] = E.check_identities().ok
    checks["NLU_identities"] = NU.check_identities().ok
    checks["morphism_count"] = LU.cat.n_mor == L.cat.n_mor * Gn == E.sizes[1]
    return TwistedIsoReport(checks, E.sizes, omega)
