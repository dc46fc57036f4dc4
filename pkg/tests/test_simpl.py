from __future__ import annotations

import random

import numpy as np
import pytest

from fusionkit.grp import FiniteGroup
from fusionkit.simpl import (AutTypGroup, ConstantGroup, NotACategoryError, aut_typ_category,
                             boundary_of_triangle, category_from_simplicial, check_action, check_cocycle,
                             check_nerve_iso, check_twisting, check_wbar_map, cocycle, default_section,
                             group_category, nerve, pair_from_twisting, random_section, random_split_pairs,
                             roundtrip_pair, roundtrip_twisting, trivial_twisting, twisted_product,
                             twisting_from_pair, wbar)


def _chain_counts(C, N):
    """Composable chains per level from powers of the hom-count matrix."""
    n = len(C.objects)
    M = np.zeros((n, n), dtype=object)
    for f in range(C.n_mor):
        M[C.src[f], C.dst[f]] += 1
    out = [n]
    P = np.identity(n, dtype=object)
    for _ in range(N):
        P = P.dot(M)
        out.append(int(P.sum()))
    return out


@pytest.fixture(scope="module")
def tw(a4s4):
    return twisting_from_pair(a4s4.pair, a4s4.tabs, N=4)


def test_nerve_of_cyclic_group():
    C2 = FiniteGroup.cyclic(2, "C2")
    X = nerve(group_category(C2), 4)
    assert X.level_counts() == [1, 2, 4, 8, 16]
    assert X.check_identities().ok


def test_nerve_counts_match_chain_count(a4s4, d8s4):
    from fusionkit.catsys import transporter_of
    from fusionkit.fusion import is_centric

    T = transporter_of(d8s4.G, d8s4.S, [P for P in d8s4.subs if is_centric(d8s4.F, P)])
    for C in (a4s4.pair.L.cat, T.cat):
        X = nerve(C, 4)
        assert X.level_counts() == _chain_counts(C, 4)
        assert X.check_identities().ok


def test_wbar_of_constant_group_is_nerve():
    for G in (FiniteGroup.cyclic(3, "C3"), FiniteGroup.from_cycles(["(1 2 3)", "(1 2)"], "S3", 3)):
        W = wbar(ConstantGroup(G), 4)
        B = nerve(group_category(G), 4)
        assert W.sizes == B.sizes == [G.order ** n for n in range(5)]
        assert W.check_identities().ok
        for n in range(1, 5):
            assert np.array_equal(W.faces[n], B.faces[n])
        for n in range(4):
            assert np.array_equal(W.degens[n], B.degens[n])


def test_constant_group_structure():
    G = FiniteGroup.from_cycles(["(1 2 3)", "(1 2)"], "S3", 3)
    K = ConstantGroup(G)
    assert K.check_group_structure(4).ok
    assert K.as_simplicial_set(4).check_identities().ok


def test_aut_typ_category(a4s4):
    K, C, rep = aut_typ_category(a4s4.pair.L, N=3)
    assert all(rep.checks.values()), rep.checks
    assert rep.out_typ == rep.components
    assert C.check().ok


def test_aut_typ_group_levels(a4s4):
    K = AutTypGroup(a4s4.tabs)
    assert K.check_group_structure(3).ok
    assert K.as_simplicial_set(3).check_identities().ok
    assert check_action(K, nerve(a4s4.pair.L.cat, 3), 3).ok


def test_wbar_of_aut_typ_levels(a4s4):
    K = AutTypGroup(a4s4.tabs)
    W = wbar(K, 2)
    assert W.sizes[1] == K.size(0) and W.sizes[2] == K.size(0) * K.size(1)
    assert W.check_identities().ok
    with pytest.raises(ValueError, match="above the bound"):
        wbar(K, 3)


def test_twisting_relations(tw):
    assert check_twisting(tw).ok
    assert check_wbar_map(tw).ok


def test_twisting_fault_detected(tw):
    bad = tw.copy()
    # [1|1] is the only non-degenerate 2-simplex of NB(C2)
    bad.phi[2][3] = (bad.phi[2][3] + 1) % tw.K.size(1)
    rep = check_twisting(bad)
    assert not rep.ok and rep.failures


def test_trivial_twisting(a4s4):
    G = FiniteGroup.cyclic(2, "C2")
    t = trivial_twisting(G, AutTypGroup(a4s4.tabs), 3)
    assert check_twisting(t).ok
    E = twisted_product(t, a4s4.pair.L, 3)
    L = nerve(a4s4.pair.L.cat, 3)
    assert E.sizes == [L.size(n) * 2 ** n for n in range(4)]
    assert E.check_identities().ok


def test_cocycle_over_all_triples(a4s4):
    pair = a4s4.pair
    t, chi = cocycle(pair, a4s4.tabs, default_section(pair))
    assert check_cocycle(a4s4.tabs, pair.G, t, chi) == {"normalized": True, "inner": True, "cocycle": True}
    rng = random.Random(3)
    for _ in range(5):
        t, chi = cocycle(pair, a4s4.tabs, random_section(pair, rng))
        assert all(check_cocycle(a4s4.tabs, pair.G, t, chi).values())


def test_bad_section_rejected(a4s4):
    pair = a4s4.pair
    sec = default_section(pair)
    with pytest.raises(ValueError):
        cocycle(pair, a4s4.tabs, [sec[1]] + sec[1:])


def test_roundtrips(a4s4, tw):
    assert all(roundtrip_pair(a4s4.pair, a4s4.tabs).values())
    rng = random.Random(11)
    for _ in range(3):
        assert all(roundtrip_pair(a4s4.pair, a4s4.tabs, random_section(a4s4.pair, rng)).values())
    assert roundtrip_twisting(tw)
    V, sec = pair_from_twisting(tw)
    assert V.Gamma_hat.order == a4s4.pair.Gamma_hat.order and sec[0] == 0


def test_random_split_pairs_roundtrip(a4s4):
    groups = [FiniteGroup.cyclic(2, "C2"), FiniteGroup.cyclic(3, "C3"), FiniteGroup.cyclic(4, "C4"),
              FiniteGroup.from_cycles(["(1 2)", "(3 4)"], "V4", 4)]
    pairs = random_split_pairs(a4s4.pair.L, groups, 10, seed=5, tabs=a4s4.tabs)
    assert len(pairs) == 10
    for pair, sec in pairs:
        assert all(roundtrip_pair(pair, a4s4.tabs, sec).values())
        t = twisting_from_pair(pair, a4s4.tabs, sec, 3)
        assert check_twisting(t).ok and roundtrip_twisting(t)


def test_twisted_product_hygiene(tw, a4s4):
    E = twisted_product(tw, a4s4.pair.L, 4)
    assert E.check_identities().ok
    assert E.projection_ok()
    rec = category_from_simplicial(E)
    assert rec.roundtrip and all(rec.segal.values())


def test_nerve_iso(a4s4):
    rep = check_nerve_iso(a4s4.pair, 4, a4s4.tabs)
    assert rep.ok, rep.checks
    assert rep.sizes == nerve(a4s4.pipeline.LU.cat, 4).level_counts()


def test_boundary_of_triangle_is_not_a_category():
    X = boundary_of_triangle(3)
    assert X.check_identities().ok
    with pytest.raises(NotACategoryError):
        category_from_simplicial(X)


def test_category_roundtrip_for_group():
    C2 = FiniteGroup.cyclic(2, "C2")
    rec = category_from_simplicial(nerve(group_category(C2), 3))
    assert rec.roundtrip and rec.C.n_mor == 2 and len(rec.C.objects) == 1
    assert rec.C.check().ok


def test_nerve_json(a4s4):
    j = nerve(a4s4.pair.L.cat, 2).to_json()
    assert j["sizes"] == [1, 12, 144] and set(j["faces"]) == {"1", "2"}
