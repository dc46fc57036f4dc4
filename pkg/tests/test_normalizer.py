from __future__ import annotations

import pytest

import oracles as O
from conftest import perm_of, perms_of
from fusionkit.fusion import check_saturated
from fusionkit.normalizer import (AutSubgroupK, centralizer_system, classify_K, k_normalizer, normalizer_system,
                                  verify_normalizer_saturation)

KINDS = ("trivial", "full", "automizer")


def _K(F, Q, kind):
    if kind == "trivial":
        return AutSubgroupK.trivial(Q)
    if kind == "full":
        return AutSubgroupK.full(Q)
    return AutSubgroupK.automizer(F, Q)


def _allowed(G, Sp, Qp, kind):
    """Elements g of N_G(Q) whose conjugation on Q lies in K."""
    NG = O.normalizer(G, Qp)

    def restr(g):
        return tuple(sorted((x, O.mul(O.mul(g, x), O.inv(g))) for x in Qp))

    if kind == "full":
        return NG
    if kind == "trivial":
        return frozenset(g for g in NG if all(a == b for a, b in restr(g)))
    autS = {restr(s) for s in O.normalizer(Sp, Qp)}
    return frozenset(g for g in NG if restr(g) in autS)


def _map(S, phi, P):
    return tuple(sorted((perm_of(S, x), perm_of(S, phi.eval(x))) for x in P.elements()))


def test_k_normalizer_matches_oracle(d8s4):
    S, F = d8s4.S, d8s4.F
    G, Sp = frozenset(d8s4.G.labels), perms_of(S, S.whole())
    for Q in d8s4.subs:
        Qp = perms_of(S, Q)
        for kind in KINDS:
            N = k_normalizer(F, Q, _K(F, Q, kind))
            assert perms_of(S, N) == _allowed(Sp, Sp, Qp, kind)
        assert k_normalizer(S, Q, AutSubgroupK.trivial(Q)) == S.centralizer(Q)


def test_normalizer_systems_match_oracle(d8s4):
    S, F = d8s4.S, d8s4.F
    G, Sp = frozenset(d8s4.G.labels), perms_of(S, S.whole())
    for Q in d8s4.subs:
        Qp = perms_of(S, Q)
        for kind in KINDS:
            sub = normalizer_system(F, Q, _K(F, Q, kind))
            allowed = _allowed(G, Sp, Qp, kind)
            subs = [P for P in d8s4.subs if P <= sub.top]
            for P in subs:
                Pp = perms_of(S, P)
                for R in subs:
                    Rp = perms_of(S, R)
                    ref = {tuple(sorted((x, O.mul(O.mul(g, x), O.inv(g))) for x in Pp)) for g in allowed
                           if O.conj(g, Pp) <= Rp}
                    assert {_map(S, phi, P) for phi in sub.hom(P, R)} == ref


def test_centralizer_of_center_is_inner(d8s4):
    S, F = d8s4.S, d8s4.F
    Z = d8s4.sub("<(1 3)(2 4)>")
    C = centralizer_system(F, Z)
    assert C.top == S.whole()
    for P in d8s4.subs:
        for R in d8s4.subs:
            inner = {tuple(sorted((perm_of(S, x), perm_of(S, S.conj(g, x))) for x in P.elements()))
                     for g in S.whole().elements() if S.conjugate(g, P) <= R}
            assert {_map(S, phi, P) for phi in C.hom(P, R)} == inner


def test_full_normalizer_of_normal_subgroup_is_everything(d8s4):
    S, F = d8s4.S, d8s4.F
    V = d8s4.sub("<(1 3)(2 4), (1 4)(2 3)>")
    N = normalizer_system(F, V, AutSubgroupK.full(V))
    T = normalizer_system(F, S.trivial(), AutSubgroupK.trivial(S.trivial()))
    for sub in (N, T):
        assert sub.top == S.whole()
        for P in d8s4.subs:
            assert len(sub.rep(P)) == len(F.rep(P))


def test_classify_K(d8s4):
    F = d8s4.F
    V = d8s4.sub("<(1 3)(2 4), (1 4)(2 3)>")
    flags = classify_K(F, V, AutSubgroupK.full(V))
    # [Aut_F(V) : Aut_S(V)] = 3
    assert flags["fully_K_automized"] and flags["fully_K_normalized"]
    flags = classify_K(F, V, AutSubgroupK.automizer(F, V))
    assert flags["fully_K_automized"] and flags["fully_K_normalized"]
    # C_S of <(1 2)(3 4)> has order 4, of its F-conjugate <(1 3)(2 4)> order 8
    Z2 = d8s4.sub("<(1 2)(3 4)>")
    flags = classify_K(F, Z2, AutSubgroupK.trivial(Z2))
    assert not flags["fully_K_normalized"] and flags["witnesses"]
    Z = d8s4.sub("<(1 3)(2 4)>")
    assert classify_K(F, Z, AutSubgroupK.trivial(Z))["fully_K_normalized"]


def test_saturation_when_fully_K_normalized(d8s4):
    F = d8s4.F
    met = 0
    for Q in d8s4.subs:
        for kind in KINDS:
            rep = verify_normalizer_saturation(F, Q, _K(F, Q, kind), F_saturated=True)
            if rep.applicable:
                met += 1
                assert rep.saturation.saturated, (Q.describe(), kind)
            d = rep.to_dict()
            assert set(d) == {"Q", "K", "fully_K_normalized", "hypothesis_met", "N_S^K(Q)", "saturation"}
    assert met == 24


def test_aut_subgroup_validation(d8s4):
    V = d8s4.sub("<(1 3)(2 4), (1 4)(2 3)>")
    Z = d8s4.sub("<(1 3)(2 4)>")
    phi = d8s4.F.rep(Z)[0]
    with pytest.raises(ValueError):
        AutSubgroupK(V, [phi])
    with pytest.raises(ValueError):
        AutSubgroupK.full(V).elements()
    assert len(AutSubgroupK.automizer(d8s4.F, V).elements()) == 2


def test_normalizer_of_saturated_system_is_saturated_directly(d8s4):
    F = d8s4.F
    Z = d8s4.sub("<(1 3)(2 4)>")
    C = centralizer_system(F, Z)
    assert check_saturated(C, C.all_subgroups()).saturated
