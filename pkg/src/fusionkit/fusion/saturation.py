"""Conjugacy classes, subgroup status flags and saturation checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from ..bounds import BoundExceeded
from ..grp import intmat as im
from ..grp.ptoral import GroupMorphism, PToralSubgroup, conjugation
from .core import FusionSystem


@dataclass(frozen=True)
class ConjugacyClass:
    representative: PToralSubgroup
    members: Tuple[PToralSubgroup, ...]
    s_classes: Tuple[Tuple[PToralSubgroup, ...], ...]

    def describe(self) -> str:
        return "{" + ", ".join(m.describe() for m in self.members) + "}"


@dataclass(frozen=True)
class Witness:
    """A failed condition: which check, at which subgroup, via which morphism."""

    check: str
    subgroup: PToralSubgroup
    morphism: Optional[GroupMorphism] = None
    domain: Optional[PToralSubgroup] = None
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"check": self.check, "subgroup": self.subgroup.describe()}
        if self.morphism is not None:
            d["morphism"] = self.morphism.describe()
        if self.domain is not None:
            d["domain"] = self.domain.describe()
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass(frozen=True)
class SaturationReport:
    saturated: bool
    axioms: Dict[str, bool]
    receptive_path: bool
    paths_agree: bool
    flags: Tuple[Tuple[PToralSubgroup, Dict[str, Optional[bool]]], ...]
    classes: Tuple[ConjugacyClass, ...]
    witnesses: Tuple[Witness, ...] = ()
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "saturated": self.saturated,
            "axioms": dict(self.axioms),
            "receptive_path": self.receptive_path,
            "paths_agree": self.paths_agree,
            "classes": [
                {"representative": c.representative.describe(), "members": [m.describe() for m in c.members],
                 "flags": dict(self.flag_of(c.representative))}
                for c in self.classes
            ],
            "witnesses": [w.to_dict() for w in self.witnesses],
            "notes": list(self.notes),
        }

    def flag_of(self, P: PToralSubgroup) -> Dict[str, Optional[bool]]:
        for Q, f in self.flags:
            if Q == P:
                return f
        raise KeyError(P)


# classes ------------------------------------------------------------------------

def _check_member(F: FusionSystem, P: PToralSubgroup) -> None:
    if P.S is not F.S:
        raise ValueError(f"{P.describe()} is not a subgroup of the underlying group")
    if not P <= F.top:
        raise ValueError(f"{P.describe()} is not contained in {F.top.describe()}")


def _rep_order(P: PToralSubgroup):
    o = P.order()
    return ((-o.rank, -o.components), P.lattice, tuple(sorted(P.keys)))


def f_classes(F: FusionSystem, family: Sequence[PToralSubgroup]) -> List[ConjugacyClass]:
    """Partition a finite family into F-conjugacy classes."""
    groups: List[List[PToralSubgroup]] = []
    for P in dict.fromkeys(family):
        _check_member(F, P)
        for g in groups:
            if F.is_conjugate(g[0], P):
                g.append(P)
                break
        else:
            groups.append([P])
    out = []
    for g in groups:
        members = sorted(g, key=lambda P: P.sort_key())
        rep = min(members, key=_rep_order)
        subs: List[List[PToralSubgroup]] = []
        for m in members:
            for s in subs:
                if F.same_s_class(s[0], m):
                    s.append(m)
                    break
            else:
                subs.append([m])
        out.append(ConjugacyClass(rep, tuple(members), tuple(tuple(s) for s in subs)))
    out.sort(key=lambda c: c.representative.sort_key())
    return out


# individual conditions ------------------------------------------------------------

def fully_centralized(F: FusionSystem, P: PToralSubgroup) -> bool:
    c = F.centralizer(P).order()
    return all(c >= F.centralizer(Q).order() for Q in F.class_reps(P))


def fully_normalized(F: FusionSystem, P: PToralSubgroup) -> bool:
    n = F.normalizer(P).order()
    return all(n >= F.normalizer(Q).order() for Q in F.class_reps(P))


def fully_automized(F: FusionSystem, P: PToralSubgroup) -> bool:
    return F.aut_index(P) % F.p != 0


def is_centric(F: FusionSystem, P: PToralSubgroup) -> bool:
    return all(F.centralizer(Q) <= Q for Q in F.class_reps(P))


def is_radical(F: FusionSystem, P: PToralSubgroup) -> bool:
    G, _ = F.out_data(P)
    return len(G.op(F.p)) == 1


def _in_aut_s(F: FusionSystem, alpha: GroupMorphism) -> bool:
    """Whether an automorphism of Q is conjugation by an element of S."""
    Q = alpha.source
    pairs = [(a, alpha.eval(a)) for a in Q.gens()]
    vecs = list(zip(Q.frame.basis, im.columns(alpha.A))) if Q.lattice else []
    return F.find_conjugator(pairs, vecs) is not None


def extension_domain(F: FusionSystem, phi: GroupMorphism) -> PToralSubgroup:
    """N_phi = {g in N_S(R) : phi c_g phi^-1 in Aut_S(phi(R))} for phi on R."""
    S = F.S
    R = phi.source
    inv = phi.inverse()
    N = F.normalizer(R)

    def good(g) -> bool:
        return _in_aut_s(F, phi.compose(conjugation(g, R).compose(inv)))

    if N.is_finite:
        return S.closure([g for g in N.elements() if good(g)])
    base = R.join(F.centralizer(R))
    if base.lattice != N.lattice:
        raise BoundExceeded("N_S(R) / R C_S(R) is infinite")
    chosen = []
    for x in N.reps():
        if not any(base.contains(S.mul(S.inv(y), x)) for y in chosen):
            chosen.append(x)
    return S.closure(base.gens() + [x for x in chosen if good(x)], base.lattice)


def find_extension(F: FusionSystem, phi: GroupMorphism, N: PToralSubgroup) -> Optional[GroupMorphism]:
    """Some morphism in Hom_F(N, S) restricting to phi on its source, or None."""
    R = phi.source
    for chi in F.rep(N):
        res = chi.restrict(R)
        pairs = [(res.eval(a), phi.eval(a)) for a in R.gens()]
        vecs = list(zip(im.columns(res.A), im.columns(phi.A))) if R.lattice else []
        x = F.find_conjugator(pairs, vecs)
        if x is not None:
            return conjugation(x, chi.image()).compose(chi)
    return None


def extension_witness(F: FusionSystem, phi: GroupMorphism) -> Optional[Witness]:
    """None if phi extends to N_phi inside F, else a witness."""
    N = extension_domain(F, phi)
    if find_extension(F, phi, N) is not None:
        return None
    return Witness("extension", phi.image(), phi, N,
                   f"{phi.describe()} does not extend to {N.describe()}")


def receptive_witness(F: FusionSystem, Q: PToralSubgroup) -> Optional[Witness]:
    """Check every F-isomorphism onto Q, one per Inn(S)-class of its inverse."""
    for psi in F.rep(Q):
        w = extension_witness(F, psi.inverse())
        if w is not None:
            return Witness("receptive", Q, w.morphism, w.domain, w.detail)
    return None


def is_receptive(F: FusionSystem, Q: PToralSubgroup) -> bool:
    return receptive_witness(F, Q) is None


def classify_subgroup(F: FusionSystem, P: PToralSubgroup,
                      family: Optional[Sequence[PToralSubgroup]] = None) -> Dict[str, Optional[bool]]:
    """Status flags of P.  ``radical`` is None when Out_F(P) cannot be built."""
    _check_member(F, P)

    def radical():
        try:
            return is_radical(F, P)
        except BoundExceeded:
            return None

    return {
        "fully_normalized": fully_normalized(F, P),
        "fully_centralized": fully_centralized(F, P),
        "fully_automized": fully_automized(F, P),
        "receptive": is_receptive(F, P),
        "centric": is_centric(F, P),
        "radical": radical(),
    }


# saturation ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chain:
    """Increasing subgroups P_1 <= P_2 <= ... with a candidate map on their union."""

    members: Tuple[PToralSubgroup, ...]
    morphism: GroupMorphism


def _chain_ok(F: FusionSystem, chain: Chain) -> bool:
    phi = chain.morphism
    if all(F.contains(phi.restrict(P)) for P in chain.members):
        return F.contains(phi)
    return True


def check_saturated(F: FusionSystem, family: Sequence[PToralSubgroup],
                    chains: Sequence[Chain] = ()) -> SaturationReport:
    """Evaluate the axiom form and the receptive form of saturation on a family."""
    family = list(dict.fromkeys(family))
    classes = f_classes(F, family)
    notes: List[str] = []
    flags = {P: classify_subgroup(F, P) for P in family}
    witnesses: List[Witness] = []

    # axiom I: fully normalized implies fully centralized and fully automized
    ok1 = True
    for P in family:
        f = flags[P]
        if f["fully_normalized"] and not (f["fully_centralized"] and f["fully_automized"]):
            ok1 = False
            what = "not fully centralized" if not f["fully_centralized"] else "Out_S(P) is not Sylow in Out_F(P)"
            witnesses.append(Witness("I", P, detail=what))

    # axiom II: every phi whose image is fully centralized extends to N_phi
    ok2 = True
    for P in family:
        for psi in F.rep(P):
            if not fully_centralized(F, psi.image()):
                continue
            w = extension_witness(F, psi)
            if w is not None:
                ok2 = False
                witnesses.append(Witness("II", P, psi, w.domain, w.detail))

    ok3 = True
    for ch in chains:
        if not _chain_ok(F, ch):
            ok3 = False
            witnesses.append(Witness("III", ch.morphism.source, ch.morphism,
                                     detail="restrictions lie in F but the limit map does not"))
    if not F.is_finite:
        notes.append("axiom III checked on supplied chains only")

    # receptive form: each class meets a fully automized receptive subgroup
    ok_r = True
    for c in classes:
        good = False
        for Q in F.class_reps(c.representative):
            if fully_automized(F, Q) and is_receptive(F, Q):
                good = True
                break
        if not good:
            ok_r = False
            for Q in F.class_reps(c.representative):
                if fully_automized(F, Q):
                    w = receptive_witness(F, Q)
                    witnesses.append(Witness("receptive", Q, w.morphism, w.domain, w.detail))
                    break
            else:
                witnesses.append(Witness("automized", c.representative,
                                         detail="no member of the class is fully automized"))
    if not F.is_finite:
        notes.append("classes and axioms quantified over the declared family")
    if F.inconclusive:
        notes.extend(sorted(set(F.inconclusive)))

    axioms = {"I": ok1, "II": ok2, "III": ok3}
    ax = ok1 and ok2 and ok3
    rp = ok_r and ok3
    if ax != rp:
        notes.append("axiom form and receptive form disagree")
    sat = ax and rp
    return SaturationReport(sat, axioms, rp, ax == rp,
                            tuple((P, flags[P]) for P in family), tuple(classes),
                            tuple(witnesses), tuple(notes))


# Rep sets and transfer maps ----------------------------------------------------------------

def rep_classes(F: FusionSystem, P: PToralSubgroup, Q: PToralSubgroup) -> List[GroupMorphism]:
    """Hom_F(P, Q) modulo post-composition with Inn(Q)."""
    S = F.S
    out: List[GroupMorphism] = []
    for phi in F.hom(P, Q):
        dup = False
        for o in out:
            pairs = [(o.eval(a), phi.eval(a)) for a in P.gens()]
            vecs = list(zip(im.columns(o.A), im.columns(phi.A))) if P.lattice else []
            x = S.find_conjugator(pairs, vecs)
            if x is not None and Q.join(S.centralizer(o.image())).contains(x):
                dup = True
                break
        if not dup:
            out.append(phi)
    return out


def normalizer_transfer(F: FusionSystem, Q: PToralSubgroup, P: PToralSubgroup) -> Optional[GroupMorphism]:
    """Some phi in Hom_F(N_S(Q), N_S(P)) with phi(Q) = P (finite search)."""
    NQ, NP = F.normalizer(Q), F.normalizer(P)
    for phi in F.hom(NQ, NP):
        if phi.restrict(Q).image() == P:
            return phi
    return None
