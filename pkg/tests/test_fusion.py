from __future__ import annotations

import pytest

import oracles as O
from conftest import perms_of
from fusionkit.fusion import (check_conditions_star, check_criterion, check_H_properties,
                              check_saturated, classify_subgroup, extension_domain, f_classes, find_extension,
                              fully_normalized, inner_system, is_centric, is_radical, is_receptive,
                              normalizer_transfer, rep_classes)
from fusionkit.grp import truncated_family
from fusionkit.grp.ptoral import conjugation


def _G(d8s4):
    return frozenset(d8s4.G.labels)


def test_classes_match_ambient_conjugacy(d8s4):
    S, F = d8s4.S, d8s4.F
    mine = {frozenset(perms_of(S, P) for P in c.members) for c in f_classes(F, d8s4.subs)}
    ref = {frozenset(c) for c in O.g_classes(_G(d8s4), None, [perms_of(S, P) for P in d8s4.subs])}
    assert mine == ref
    assert len(mine) == 7


def test_centric_and_radical_flags_match_oracle(d8s4):
    S, F = d8s4.S, d8s4.F
    G, Sp = _G(d8s4), perms_of(S, S.whole())
    for P in d8s4.subs:
        Pp = perms_of(S, P)
        assert is_centric(F, P) == O.is_centric(G, Sp, Pp), P.describe()
        assert is_radical(F, P) == O.is_radical(G, Pp, 2, 4), P.describe()


def test_centric_radical_sets(d8s4):
    F = d8s4.F
    centric = {P.describe() for P in d8s4.subs if is_centric(F, P)}
    assert centric == {"<(1 2 3 4)>", "<(1 3)(2 4), (1 4)(2 3)>", "<(1 3)(2 4), (2 4)>",
                       "<(1 2 3 4), (1 4)(2 3)>"}
    both = {P.describe() for P in d8s4.subs if is_centric(F, P) and is_radical(F, P)}
    assert both == {"<(1 3)(2 4), (1 4)(2 3)>", "<(1 2 3 4), (1 4)(2 3)>"}


def test_fully_normalized_matches_oracle(d8s4):
    S, F = d8s4.S, d8s4.F
    G = _G(d8s4)
    for P in d8s4.subs:
        cls = [Q for Q in O.g_classes(G, None, [perms_of(S, R) for R in d8s4.subs]) if perms_of(S, P) in Q][0]
        best = max(len(O.normalizer(perms_of(S, S.whole()), Q)) for Q in cls)
        assert fully_normalized(F, P) == (len(O.normalizer(perms_of(S, S.whole()), perms_of(S, P))) == best)


def test_ambient_system_is_saturated_both_ways(d8s4):
    rep = check_saturated(d8s4.F, d8s4.subs)
    assert rep.saturated and rep.receptive_path and rep.paths_agree
    assert all(rep.axioms.values()) and not rep.witnesses


def test_fully_normalized_class_counts_are_coprime_to_p(d8s4, dinf):
    S, F = d8s4.S, d8s4.F
    G = _G(d8s4)
    for c in f_classes(F, d8s4.subs):
        mine = sum(1 for sc in c.s_classes if fully_normalized(F, sc[0]))
        ref = O.fully_normalized_s_classes(G, perms_of(S, S.whole()), [perms_of(S, P) for P in c.members])
        assert mine == ref and mine % 2 == 1
    fam = truncated_family(dinf.S, 3)
    for c in f_classes(dinf.SO3, fam):
        mine = sum(1 for sc in c.s_classes if fully_normalized(dinf.SO3, sc[0]))
        assert mine % 2 == 1


def test_z9_not_saturated_with_receptive_witness(z9):
    F = z9.F
    rep = check_saturated(F, F.all_subgroups())
    assert not rep.saturated and rep.paths_agree
    assert not rep.axioms["II"] and not rep.receptive_path
    kinds = {(w.check, w.subgroup) for w in rep.witnesses}
    assert ("II", z9.Z3) in kinds and ("receptive", z9.Z3) in kinds
    assert not is_receptive(F, z9.Z3)


def test_z9_inversion_has_no_extension(z9):
    """Exhaustively: no F-automorphism of Z9 restricts to the inversion of Z3."""
    F, Z = z9.F, z9.Z
    autos = F.aut(Z.whole())
    assert len(autos) == 1
    assert all(a.restrict(z9.Z3) != z9.inv3 for a in autos)
    assert len(F.aut(z9.Z3)) == 2
    assert extension_domain(F, z9.inv3) == Z.whole()
    assert find_extension(F, z9.inv3, Z.whole()) is None


def test_inner_systems_are_saturated(d8s4, dinf):
    F = inner_system(d8s4.S)
    rep = check_saturated(F, F.all_subgroups())
    assert rep.saturated and rep.paths_agree
    fam = truncated_family(dinf.S, 3)
    rep = check_saturated(dinf.inner, fam)
    assert rep.saturated and rep.paths_agree


def test_truncated_dihedral_so3_saturated(dinf):
    rep = check_saturated(dinf.SO3, truncated_family(dinf.S, 3))
    assert rep.saturated and rep.paths_agree


def test_receptive_equals_all_isomorphism_quantifier(d8s4, z9):
    """Receptivity checked on Inn(S)-class representatives agrees with the check over every isomorphism."""
    for F in (d8s4.F, z9.F):
        for Q in F.all_subgroups():
            full = True
            for P in F.class_reps(Q):
                for phi in F.hom(P, Q):
                    if phi.image() != Q:
                        continue
                    if find_extension(F, phi, extension_domain(F, phi)) is None:
                        full = False
            assert full == is_receptive(F, Q)


def test_classify_subgroup_keys(d8s4):
    flags = classify_subgroup(d8s4.F, d8s4.S.whole())
    assert set(flags) == {"fully_normalized", "fully_centralized", "fully_automized", "receptive", "centric",
                          "radical"}
    assert all(flags.values())


def test_rep_classes_aut_v(d8s4):
    V = d8s4.sub("<(1 3)(2 4), (1 4)(2 3)>")
    assert len(rep_classes(d8s4.F, V, V)) == 6
    Vp = d8s4.sub("<(1 3)(2 4), (2 4)>")
    assert len(rep_classes(d8s4.F, Vp, Vp)) == 2


def test_normalizer_transfer_on_saturated_systems(d8s4):
    F = d8s4.F
    for P in d8s4.subs:
        if not fully_normalized(F, P):
            continue
        for Q in F.class_reps(P):
            phi = normalizer_transfer(F, Q, P)
            assert phi is not None and phi.restrict(Q).image() == P


def test_maps_agreeing_on_centric_normal_subgroup_differ_by_center(d8s4):
    """phi, phi' on P agreeing on an F-centric normal Q differ by conjugation by some z in Z(Q)."""
    S, F = d8s4.S, d8s4.F
    W = S.whole()
    checked = 0
    for P in d8s4.subs:
        for Q in d8s4.subs:
            if not (Q <= P and is_centric(F, Q) and all(S.conjugate(x, Q) == Q for x in P.gens())):
                continue
            ZQ = F.centralizer(Q).intersect(Q)
            homs = F.hom(P, W)
            for a in homs:
                for b in homs:
                    if a.restrict(Q) != b.restrict(Q):
                        continue
                    assert any(b == a.compose(conjugation(z, P)) for z in ZQ.elements())
                    checked += 1
    assert checked > 0


def test_criterion_on_centric_family(d8s4):
    F = d8s4.F
    H = [P for P in d8s4.subs if is_centric(F, P)]
    rep = check_criterion(F, H)
    assert rep.verdict == "saturated (criterion)" and rep.direct is True


def test_h_properties(d8s4, z9):
    F = d8s4.F
    H = [P for P in d8s4.subs if is_centric(F, P)]
    r = check_H_properties(F, H)
    assert r.H_closed and r.H_generated and r.H_saturated
    r = check_H_properties(F, [d8s4.S.whole()])
    assert r.H_generated is False
    assert any(w.check == "H_generated" for w in r.witnesses)
    r = check_H_properties(z9.F, z9.F.all_subgroups())
    assert not r.H_saturated
    rep = check_criterion(z9.F, z9.F.all_subgroups())
    assert rep.verdict == "no conclusion" and rep.direct is False


def test_conditions_star(dinf, d8s4):
    fam = truncated_family(dinf.S, 3)
    for F in (dinf.SO3, dinf.inner):
        r = check_conditions_star(F, fam)
        assert r.star and r.star_star, r.to_dict()
    r = check_conditions_star(d8s4.F, d8s4.subs)
    assert r.star and r.star_star


def test_membership_check_rejects_foreign_subgroup(d8s4, z9):
    with pytest.raises(ValueError, match="not a subgroup"):
        classify_subgroup(d8s4.F, z9.Z3)
