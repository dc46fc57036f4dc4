"""K-normalizers and the subsystems they carry.

For Q <= S and K <= Aut(Q), N_S^K(Q) is the set of x in N_S(Q) with
c_x|Q in K.  The subsystem N_F^K(Q) over it keeps the F-morphisms
phi: P -> R that extend to some phi' in Hom_F(PQ, RQ) with phi'(Q) = Q
and phi'|Q in K.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Union

from ..bounds import BoundExceeded, get_bounds
from ..fusion.core import FusionSystem, Subsystem
from ..fusion.saturation import SaturationReport, Witness, check_saturated
from ..grp.ptoral import GroupMorphism, PToralGroup, PToralSubgroup, conjugation, inclusion


class AutSubgroupK:
    """A subgroup of Aut(Q) given by generators, or all of Aut(Q)."""

    def __init__(self, Q: PToralSubgroup, gens: Sequence[GroupMorphism] = (), everything: bool = False,
                 name: str = ""):
        for g in gens:
            if g.source != Q or g.image() != Q:
                raise ValueError(f"{g.describe()} is not an automorphism of {Q.describe()}")
        self.Q = Q
        self.gens = list(gens)
        self.everything = everything
        self.name = name or ("Aut(Q)" if everything else "K")
        self._elements: Optional[List[GroupMorphism]] = None

    @classmethod
    def trivial(cls, Q: PToralSubgroup) -> "AutSubgroupK":
        return cls(Q, (), name="1")

    @classmethod
    def full(cls, Q: PToralSubgroup) -> "AutSubgroupK":
        return cls(Q, (), everything=True)

    @classmethod
    def automizer(cls, F: FusionSystem, Q: PToralSubgroup) -> "AutSubgroupK":
        """Aut_S(Q) (finite cases only)."""
        N = F.normalizer(Q)
        C = F.centralizer(Q)
        if N.lattice != C.lattice:
            raise BoundExceeded("Aut_S(Q) is infinite")
        return cls(Q, [conjugation(x, Q) for x in N.reps()], name="Aut_S(Q)")

    def elements(self) -> List[GroupMorphism]:
        if self.everything:
            raise ValueError("Aut(Q) is not enumerated; use contains()")
        if self._elements is None:
            ident = inclusion(self.Q)
            seen = {ident}
            out = [ident]
            queue = deque([ident])
            while queue:
                a = queue.popleft()
                for g in self.gens:
                    b = g.compose(a)
                    if b not in seen:
                        seen.add(b)
                        out.append(b)
                        if len(out) > get_bounds().max_reps:
                            raise BoundExceeded("K is too large to enumerate")
                        queue.append(b)
            self._elements = out
        return self._elements

    def contains(self, alpha: GroupMorphism) -> bool:
        if alpha.source != self.Q:
            return False
        if self.everything:
            return alpha.image() == self.Q
        return alpha in set(self.elements())

    def conjugate(self, phi: GroupMorphism) -> "AutSubgroupK":
        """phi K phi^-1 on phi(Q)."""
        inv = phi.inverse()
        return AutSubgroupK(phi.image(), [phi.compose(g.compose(inv)) for g in self.gens],
                            self.everything, self.name)


def k_normalizer(S: Union[PToralGroup, FusionSystem], Q: PToralSubgroup, K: AutSubgroupK) -> PToralSubgroup:
    """N_S^K(Q); pass a fusion system to work inside its underlying subgroup."""
    if isinstance(S, FusionSystem):
        N, C, G = S.normalizer(Q), S.centralizer(Q), S.S
    else:
        N, C, G = S.normalizer(Q), S.centralizer(Q), S
    if K.everything:
        return N
    if N.is_finite:
        return G.closure([x for x in N.elements() if K.contains(conjugation(x, Q))])
    if N.lattice != C.lattice:
        raise BoundExceeded("N_S(Q) / C_S(Q) is infinite")
    chosen = []
    for x in N.reps():
        if not any(C.contains(G.mul(G.inv(y), x)) for y in chosen):
            chosen.append(x)
    good = [x for x in chosen if K.contains(conjugation(x, Q))]
    return G.closure(C.gens() + good, C.lattice)


def classify_K(F: FusionSystem, Q: PToralSubgroup, K: AutSubgroupK) -> Dict[str, object]:
    """Flags fully_K_automized and fully_K_normalized, with witnesses."""
    autF = [a for a in F.aut(Q) if K.contains(a)]
    autS = [a for a in autF if _is_inner_s(F, a)]
    index = len(autF) // len(autS)
    automized = index % F.p != 0
    n = k_normalizer(F, Q, K).order()
    normalized = True
    wits = []
    for psi in F.rep(Q):
        other = k_normalizer(F, psi.image(), K.conjugate(psi)).order()
        if other > n:
            normalized = False
            wits.append(Witness("K_normalized", psi.image(), psi,
                                detail=f"N^K has order {other} > {n}"))
            break
    if not automized:
        wits.append(Witness("K_automized", Q, detail=f"[Aut_F^K : Aut_S^K] = {index}"))
    return {"fully_K_automized": automized, "fully_K_normalized": normalized, "witnesses": wits}


def _is_inner_s(F: FusionSystem, a: GroupMorphism) -> bool:
    from ..fusion.saturation import _in_aut_s
    return _in_aut_s(F, a)


def normalizer_system(F: FusionSystem, Q: PToralSubgroup, K: AutSubgroupK, name: str = "") -> Subsystem:
    """N_F^K(Q) as a subsystem over N_S^K(Q) (finite N_S^K(Q) only)."""
    N = k_normalizer(F, Q, K)

    def admits(phi: GroupMorphism) -> bool:
        P = phi.source
        R = phi.image()
        PQ, RQ = P.join(Q), R.join(Q)
        for bar in F.hom(PQ, RQ):
            if bar.restrict(P) != phi:
                continue
            res = bar.restrict(Q)
            if res.image() == Q and K.contains(res):
                return True
        return False

    return Subsystem(F, N, admits, name=name or f"N^{K.name}({Q.describe()})")


def centralizer_system(F: FusionSystem, Q: PToralSubgroup) -> Subsystem:
    return normalizer_system(F, Q, AutSubgroupK.trivial(Q), name=f"C({Q.describe()})")


@dataclass(frozen=True)
class NormalizerReport:
    subgroup: PToralSubgroup
    K: str
    normalizer: PToralSubgroup
    fully_K_normalized: bool
    applicable: bool
    saturation: SaturationReport

    def to_dict(self) -> dict:
        return {"Q": self.subgroup.describe(), "K": self.K,
                "fully_K_normalized": self.fully_K_normalized,
                "hypothesis_met": self.applicable, "N_S^K(Q)": self.normalizer.describe(),
                "saturation": self.saturation.to_dict()}


def verify_normalizer_saturation(F: FusionSystem, Q: PToralSubgroup, K: AutSubgroupK,
                                 F_saturated: Optional[bool] = None) -> NormalizerReport:
    """Run the saturation check on N_F^K(Q).

    When F is saturated and Q fully K-normalized, the result is expected
    to be saturated; otherwise the check still runs and is only recorded.
    """
    flags = classify_K(F, Q, K)
    if F_saturated is None:
        F_saturated = check_saturated(F, F.all_subgroups()).saturated if F.is_finite else False
    sub = normalizer_system(F, Q, K)
    rep = check_saturated(sub, sub.all_subgroups())
    applicable = bool(F_saturated and flags["fully_K_normalized"])
    notes = rep.notes if applicable else rep.notes + ("hypotheses not met; verdict recorded only",)
    rep = SaturationReport(rep.saturated, rep.axioms, rep.receptive_path, rep.paths_agree, rep.flags,
                           rep.classes, rep.witnesses, notes)
    return NormalizerReport(Q, K.name, sub.top, flags["fully_K_normalized"], applicable, rep)
