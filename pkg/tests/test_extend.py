from __future__ import annotations

import pytest

import oracles as O
from conftest import ids_of
from fusionkit.catsys import CatFunctor
from fusionkit.extend import (ExtensionPairError, canonical_pair_from_group_extension, elementwise_theta,
                              extension_pipeline, fusion_isomorphic_by_map, split_trivial_pair,
                              validate_extension_pair)
from fusionkit.fusion import AmbientFinite
from fusionkit.grp import FiniteGroup
from fusionkit.grp.ops import ambient_pgroup


def _case(gens, deg, normal, p):
    G = FiniteGroup.from_cycles(gens, "G", deg)
    N = ids_of(G, normal, deg)
    return G, N, canonical_pair_from_group_extension(G, N, p)


CASES = {
    "A4<S4": (["(1 2 3 4)", "(1 2)"], 4, ["(1 2 3)", "(1 2)(3 4)"], 2),
    "A4xC3<S4xC3": (["(1 2 3 4)", "(1 2)", "(5 6 7)"], 7, ["(1 2 3)", "(1 2)(3 4)", "(5 6 7)"], 2),
    "C3<S3": (["(1 2 3)", "(1 2)"], 3, ["(1 2 3)"], 3),
}


@pytest.fixture(scope="module", params=sorted(CASES))
def case(request):
    gens, deg, normal, p = CASES[request.param]
    G, N, cp = _case(gens, deg, normal, p)
    return request.param, G, N, cp, extension_pipeline(cp.pair, S_ids=cp.S_ids)


def test_pipeline_claims(case):
    name, G, N, cp, res = case
    assert res.ok, (name, res.claims)
    assert {"a_objects", "b_automorphisms", "c_conjugation", "d_normal", "F_saturated"} <= set(res.claims)


def test_fusion_matches_ambient(case):
    name, G, N, cp, res = case
    Sbig = ambient_pgroup(cp.big, cp.pair.p, cp.sylow, "S")
    same, bad = fusion_isomorphic_by_map(res.F, AmbientFinite(Sbig), elementwise_theta(cp, res.S, Sbig))
    assert same, bad


def test_lu_count(case):
    name, G, N, cp, res = case
    assert res.LU.cat.n_mor == cp.pair.L.cat.n_mor * cp.pair.G.order


def test_linking_system_count_matches_oracle(case):
    name, G, N, cp, res = case
    gens, deg, normal, p = CASES[name]
    small = frozenset(G.labels[i] for i in N)
    Sbar = frozenset(G.labels[i] for i in cp.sylow & N)
    objs = [P for P in O.subgroups(Sbar, deg) if O.is_centric(small, Sbar, P)]
    assert cp.pair.L.cat.n_mor == O.linking_count(small, Sbar, objs, deg, p)
    assert cp.pair.G.order == G.order // len(small)


def test_transporter_count_for_s4(a4s4):
    """T has objects V and D8 with Mor(P, Q) = N_S4(P, Q)."""
    res = a4s4.pipeline
    G = frozenset(a4s4.G.labels)
    D8 = O.closure([O.cyc("(1 2 3 4)", 4), O.cyc("(1 3)", 4)], 4)
    V = O.closure([O.cyc("(1 2)(3 4)", 4), O.cyc("(1 3)(2 4)", 4)], 4)
    objs = [V, D8]
    assert res.T.cat.n_mor == sum(O.transporter_count(G, P, Q) for P in objs for Q in objs) == 56


def test_split_trivial_pairs(a4s4):
    L = a4s4.pair.L
    for n in (2, 3):
        C = FiniteGroup.cyclic(n, f"C{n}")
        pair = split_trivial_pair(L, C)
        res = extension_pipeline(pair)
        assert res.ok, res.claims
        assert res.LU.cat.n_mor == L.cat.n_mor * n


def test_double_dagger_fault_is_named(a4s4):
    pair = a4s4.pair
    Gh = pair.Gamma_hat
    outside = next(g for g in Gh.elements() if g not in pair.bar_ids)
    tau = list(pair.tau)
    tau[outside] = CatFunctor.identity(pair.L.cat)
    with pytest.raises(ExtensionPairError) as e:
        validate_extension_pair(pair.L, Gh, pair.embed, pair.rho, pair.G, tau)
    assert e.value.violation == "double_dagger"


def test_other_pair_faults(a4s4):
    pair = a4s4.pair
    Gh = pair.Gamma_hat
    rho = [0] * Gh.order
    with pytest.raises(ExtensionPairError) as e:
        validate_extension_pair(pair.L, Gh, pair.embed, rho, pair.G, pair.tau)
    assert e.value.violation == "quotient"
    some = next(iter(pair.embed))
    bad = dict(pair.embed)
    bad[some] = next(g for g in Gh.elements() if g not in pair.bar_ids)
    with pytest.raises(ExtensionPairError) as e:
        validate_extension_pair(pair.L, Gh, bad, pair.rho, pair.G, pair.tau)
    assert e.value.violation == "embedding"
    with pytest.raises(ExtensionPairError) as e:
        validate_extension_pair(pair.L, Gh, pair.embed, pair.rho, pair.G, pair.tau[:-1])
    assert e.value.violation == "tau"


def test_non_normal_subgroup_rejected():
    G = FiniteGroup.from_cycles(["(1 2 3 4)", "(1 2)"], "S4", 4)
    with pytest.raises(ValueError):
        canonical_pair_from_group_extension(G, ids_of(G, ["(1 2)"], 4), 2)


def test_fusion_comparison_detects_difference(d8s4):
    D8 = FiniteGroup.from_cycles(["(1 2 3 4)", "(1 3)"], "D8", 4)
    S = ambient_pgroup(D8, 2, frozenset(D8.elements()), "D8")
    inner = AmbientFinite(S)
    theta = {}
    for x in S.whole().elements():
        perm = D8.labels[S.embed[x[1]]]
        y = next(y for y in d8s4.S.whole().elements() if d8s4.G.labels[d8s4.S.embed[y[1]]] == perm)
        theta[x] = y
    same, bad = fusion_isomorphic_by_map(inner, d8s4.F, theta)
    assert not same and bad
    same, _ = fusion_isomorphic_by_map(inner, inner, {x: x for x in S.whole().elements()})
    assert same


def test_to_dict(a4s4):
    d = a4s4.pipeline.to_dict()
    assert d["morphisms"] == 56 and d["LU_morphisms"] == 24
    assert a4s4.pair.to_dict() == {"Gamma_hat": 24, "Gamma_bar": 12, "G": 2}
