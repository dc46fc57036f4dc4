"""Torus extension conditions, family properties and a sufficient criterion for saturation.

``check_conditions_star`` tests the two torus conditions: every morphism
between subgroups of T is the restriction of some w in Aut_F(T), and
every morphism into T extends over P . C_S(P)_0.  ``check_criterion``
verifies the hypotheses of the generation criterion: F-invariance of the
family H, H-generation and H-saturation, closure of H under P <= Q <= P*,
and the O_p condition on centric bullet subgroups outside H.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

from ..bounds import BoundExceeded
from ..grp import intmat as im
from ..grp.ptoral import GroupMorphism, PToralSubgroup, conjugation, torus_map
from .core import FusionSystem, Generated
from .saturation import (Witness, check_saturated, fully_automized, is_centric, is_receptive,
                         receptive_witness)


def _in_torus(P: PToralSubgroup) -> bool:
    return all(k[1] == 0 for k in P.keys)


def member_of(F: FusionSystem, P: PToralSubgroup, family: Sequence[PToralSubgroup]) -> bool:
    """Membership up to S-conjugacy."""
    return any(Q == P for Q in family) or any(
        Q.order() == P.order() and F.same_s_class(P, Q) for Q in family)


# torus conditions ------------------------------------------------------------------

@dataclass(frozen=True)
class StarReport:
    star: bool
    star_star: bool
    witnesses: tuple
    notes: tuple

    def to_dict(self) -> dict:
        return {"star": self.star, "star_star": self.star_star,
                "witnesses": [w.to_dict() for w in self.witnesses], "notes": list(self.notes)}


def check_conditions_star(F: FusionSystem, family: Sequence[PToralSubgroup]) -> StarReport:
    S = F.S
    if not S.rank or F.top.is_finite:
        return StarReport(True, True, (), ("identity component is trivial",))
    W = F.torus_automorphisms()
    wits: List[Witness] = []
    star = True
    star2 = True
    for P in family:
        if _in_torus(P):
            restr = [torus_map(w, P) for w in W]
            for psi in F.rep(P):
                if not _in_torus(psi.image()):
                    continue
                if not any(F.inner_equivalent(r, psi) for r in restr):
                    star = False
                    wits.append(Witness("star", P, psi, detail="not the restriction of any w in W"))
        C0 = F.centralizer(P).identity_component()
        PC0 = P.join(C0)
        for psi in F.rep(P):
            if not _in_torus(psi.image()):
                continue
            if _extends_into_torus(F, psi, PC0) is None:
                star2 = False
                wits.append(Witness("star_star", P, psi, PC0, "no extension into T over P.C_S(P)_0"))
    notes = ["checked over the declared family"]
    if star2 and not star:
        notes.append("the declared W is smaller than Aut_F(T)")
    return StarReport(star, star2, tuple(wits), tuple(notes))


def _extends_into_torus(F: FusionSystem, psi: GroupMorphism, N: PToralSubgroup) -> Optional[GroupMorphism]:
    P = psi.source
    if N == P:
        return psi
    for chi in F.rep(N):
        if not _in_torus(chi.image()):
            continue
        res = chi.restrict(P)
        pairs = [(res.eval(a), psi.eval(a)) for a in P.gens()]
        vecs = list(zip(im.columns(res.A), im.columns(psi.A))) if P.lattice else []
        x = F.find_conjugator(pairs, vecs)
        if x is not None:
            return conjugation(x, chi.image()).compose(chi)
    return None


# family properties -------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyReport:
    H_closed: bool
    H_generated: Optional[bool]
    H_saturated: bool
    witnesses: tuple
    notes: tuple

    def to_dict(self) -> dict:
        return {"H_closed": self.H_closed, "H_generated": self.H_generated,
                "H_saturated": self.H_saturated,
                "witnesses": [w.to_dict() for w in self.witnesses], "notes": list(self.notes)}


def generated_by(F: FusionSystem, H: Sequence[PToralSubgroup], length: Optional[int] = None) -> Generated:
    """The subsystem generated by F-morphisms between members of H (plus Inn(S))."""
    gens = []
    for P in H:
        gens.extend(m for m in F.rep(P)[1:])
    return Generated(F.S, gens, W=(), name="<H>", top=None if F.top == F.S.whole() else F.top,
                     length=length)


def check_H_properties(F: FusionSystem, H: Sequence[PToralSubgroup],
                       family: Optional[Sequence[PToralSubgroup]] = None) -> FamilyReport:
    """Closure, generation and saturation of F relative to a finite family H.

    Generation is compared on ``family`` (default: all subgroups of a
    finite S, else H).
    """
    H = list(dict.fromkeys(H))
    notes = ["H is finite, so every increasing chain in H is eventually constant"]
    wits: List[Witness] = []
    if family is None:
        family = F.all_subgroups() if F.is_finite else H
    G = generated_by(F, H)
    gen: Optional[bool] = True
    for P in family:
        have = G.rep(P)
        for psi in F.rep(P):
            if not any(G.inner_equivalent(h, psi) for h in have):
                gen = False
                wits.append(Witness("H_generated", P, psi, detail="not a composite of restrictions from H"))
    if gen is False and G.inconclusive:
        gen = None
        notes.append("factorization search hit the composite-length bound")
    sat = True
    for P in H:
        if not any(fully_automized(F, Q) and is_receptive(F, Q) for Q in F.class_reps(P)):
            sat = False
            w = receptive_witness(F, P)
            wits.append(Witness("H_saturated", P, w.morphism if w else None, w.domain if w else None,
                                "no fully automized receptive member in the class"))
    return FamilyReport(True, gen, sat, tuple(wits), tuple(notes))


# the criterion -------------------------------------------------------------------------

@dataclass(frozen=True)
class CriterionReport:
    hypotheses: Dict[str, Optional[bool]]
    verdict: str
    direct: Optional[bool]
    witnesses: tuple
    notes: tuple

    def to_dict(self) -> dict:
        return {"hypotheses": dict(self.hypotheses), "verdict": self.verdict, "direct": self.direct,
                "witnesses": [w.to_dict() for w in self.witnesses], "notes": list(self.notes)}


def check_criterion(F: FusionSystem, H: Sequence[PToralSubgroup],
                    family: Optional[Sequence[PToralSubgroup]] = None,
                    cross_check: bool = True) -> CriterionReport:
    """Verify the hypotheses of the generation criterion for saturation.

    ``family`` is the ambient finite family used for the quantifiers over
    subgroups of S (all subgroups when S is finite, else a truncation).
    """
    from ..bullet import BulletContext, bullet, f_bullet
    H = list(dict.fromkeys(H))
    if family is None:
        if not F.is_finite:
            raise ValueError("an explicit finite family is needed for infinite S")
        family = F.all_subgroups()
    family = list(family)
    wits: List[Witness] = []
    notes: List[str] = []
    hyp: Dict[str, Optional[bool]] = {}

    try:
        W = F.torus_automorphisms()
        hyp["aut_T_finite"] = True
    except BoundExceeded:
        hyp["aut_T_finite"] = False
        W = []
    star = check_conditions_star(F, family)
    hyp["extension_condition"] = star.star_star
    wits.extend(star.witnesses)

    inv = True
    for P in H:
        for Q in F.class_reps(P):
            if not member_of(F, Q, H):
                inv = False
                wits.append(Witness("invariant", Q, detail=f"F-conjugate of {P.describe()} missing from H"))
    hyp["i_invariant"] = inv

    fam = check_H_properties(F, H, family)
    wits.extend(fam.witnesses)
    notes.extend(fam.notes)
    ok2 = None if fam.H_generated is None else (fam.H_closed and fam.H_generated and fam.H_saturated)
    hyp["ii_generated_saturated"] = ok2

    ctx = BulletContext.build(F.S, W)
    ok3 = True
    for P in H:
        Pb = bullet(ctx, P)
        if Pb == P:
            continue
        for Q in family:
            if P <= Q and Q <= Pb and not member_of(F, Q, H):
                ok3 = False
                wits.append(Witness("between_bullet", Q, detail=f"lies between {P.describe()} and its bullet"))
    hyp["iii_bullet_closed"] = ok3

    ok4 = True
    reps = f_bullet(F, ctx, family)
    for P in reps:
        if member_of(F, P, H) or not is_centric(F, P):
            continue
        found = False
        for Q in F.class_reps(P):
            try:
                G, outS = F.out_data(Q)
            except BoundExceeded:
                continue
            if (set(G.op(F.p)) & set(outS)) - {0}:
                found = True
                break
        if not found:
            ok4 = False
            wits.append(Witness("op_condition", P, detail="centric bullet subgroup outside H with no p-normal Out_S"))
    hyp["iv_op_condition"] = ok4
    if not F.is_finite:
        notes.append("subgroup quantifiers range over the declared finite family")

    if all(v is True for v in hyp.values()):
        verdict = "saturated (criterion)"
    elif any(v is None for v in hyp.values()) and not any(v is False for v in hyp.values()):
        verdict = "inconclusive"
    else:
        verdict = "no conclusion"
    direct = None
    if cross_check:
        rep = check_saturated(F, family)
        direct = rep.saturated
        if verdict.startswith("saturated") and not direct:
            notes.append("criterion and direct check disagree")
    return CriterionReport(hyp, verdict, direct, tuple(wits), tuple(notes))
