"""Normality of a subsystem inside a transporter system.

The subsystem is given by its object indices and morphism ids inside T,
together with the subgroup Sbar it lives over.  The three conditions are:

(i)   Sbar is strongly closed in F and the objects are exactly the P & Sbar;
(ii)  every psi in Mor_T(P, Q) between sub-objects factors as
      psi_* o gamma|_{P, gamma(P)} with gamma in Aut_T(Sbar) and psi_* in the subsystem;
(iii) the subsystem is stable under conjugation by Aut_T(Sbar).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from ..grp.finite import FiniteGroup
from ..grp.ptoral import PToralSubgroup
from .autos import conj_functor, object_image
from .transporter import TransporterSystem, restrict_morphism


@dataclass
class NormalityReport:
    conditions: Dict[str, bool]
    quotient: Optional[FiniteGroup]
    witnesses: Dict[str, List[dict]] = field(default_factory=dict)

    @property
    def normal(self) -> bool:
        return all(self.conditions.values())

    def failed(self) -> List[str]:
        return [k for k, v in self.conditions.items() if not v]

    def to_dict(self) -> dict:
        q = None
        if self.quotient is not None:
            q = {"order": self.quotient.order, "abelian": self.quotient.is_abelian()}
        return {"normal": self.normal, "conditions": dict(self.conditions), "quotient": q,
                "witnesses": {k: v[:5] for k, v in sorted(self.witnesses.items())}}


def is_normal_subsystem(T: TransporterSystem, sub_objs: Sequence[int], sub_mors: Sequence[int],
                        Sbar: PToralSubgroup) -> NormalityReport:
    c = T.cat
    F = T.F
    S = T.S
    objs = sorted(set(T.index(a) for a in sub_objs))
    mors = set(sub_mors)
    wit: Dict[str, List[dict]] = {"i": [], "ii": [], "iii": []}
    sb = T.index(Sbar)

    # (i)
    for P in F.all_subgroups():
        if not P <= Sbar:
            continue
        for psi in F.rep(P):
            if not psi.image() <= Sbar:
                wit["i"].append({"subgroup": P.describe(), "image": psi.image().describe(),
                                 "reason": "Sbar is not strongly closed"})
    want = {P.intersect(Sbar) for P in T.objs}
    have = {T.objs[a] for a in objs}
    if want != have:
        wit["i"].append({"reason": "objects differ from {P & Sbar}",
                         "missing": sorted(P.describe() for P in want - have),
                         "extra": sorted(P.describe() for P in have - want)})
    for f in mors:
        if c.src[f] not in objs or c.dst[f] not in objs:
            wit["i"].append({"morphism": f, "reason": "morphism between non-objects"})

    gammas = c.hom(sb, sb)
    res = {}
    for g in gammas:
        for a in objs:
            b = object_image(T, g, a)
            res[(g, a)] = (b, restrict_morphism(T, g, a, b))

    # (ii)
    for a in objs:
        for b in objs:
            for psi in c.hom(a, b):
                ok = False
                for g in gammas:
                    a2, r = res[(g, a)]
                    if any(c.comp[(ps, r)] == psi for ps in c.hom(a2, b) if ps in mors):
                        ok = True
                        break
                if not ok:
                    wit["ii"].append({"morphism": psi, "reason": "no factorization through Aut_T(Sbar)"})

    # (iii)
    for g in gammas:
        cg = conj_functor(T, g, over=sb)
        for f in mors:
            if cg.mor[f] not in mors:
                wit["iii"].append({"gamma": g, "morphism": f, "image": cg.mor[f]})

    conditions = {k: not v for k, v in wit.items()}
    quotient = None
    if all(conditions.values()):
        G, ids = T.aut_group(sb)
        pos = {f: i for i, f in enumerate(ids)}
        N = frozenset(pos[f] for f in gammas if f in mors)
        if G.is_subgroup(N) and G.is_normal(N):
            quotient, _ = G.quotient(N, "T/Tbar")
        else:
            conditions["quotient"] = False
            wit["quotient"] = [{"reason": "Aut_Tbar(Sbar) is not normal in Aut_T(Sbar)"}]
    return NormalityReport(conditions, quotient, {k: v for k, v in wit.items() if v})
