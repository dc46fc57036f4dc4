from __future__ import annotations

from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as O
from conftest import perm_of, perms_of
from fusionkit.bounds import BoundExceeded, parse_bounds
from fusionkit.grp import (FiniteGroup, Order, PToralGroup, automorphisms, compare_order, enumerate_elements,
                           hom_search, infinite_dihedral, order_of, power_subgroup, snf_kernel, subgroup_closure)


# finite groups ------------------------------------------------------------------------

def test_enumerate_matches_closure_oracle():
    D8 = enumerate_elements(["(1 2 3 4)", "(1 3)"], "D8")
    assert D8.order == 8 == len(O.closure([O.cyc("(1 2 3 4)", 4), O.cyc("(1 3)", 4)], 4))
    S4 = enumerate_elements(["(1 2 3 4)", "(1 2)"], "S4")
    assert S4.order == 24 == len(O.closure([O.cyc("(1 2 3 4)", 4), O.cyc("(1 2)", 4)], 4))
    assert set(S4.labels) == O.closure([O.cyc("(1 2 3 4)", 4), O.cyc("(1 2)", 4)], 4)
    assert enumerate_elements([], "1").order == 1


def test_enumeration_is_deterministic():
    a = enumerate_elements(["(1 2 3 4)", "(1 2)"])
    b = enumerate_elements(["(1 2 3 4)", "(1 2)"])
    assert a.labels == b.labels and a.table == b.table


def test_tables_are_groups_exhaustively():
    for gens in (["(1 2 3 4)", "(1 2)"], ["(1 2 3)", "(1 2)(3 4)"], ["(1 2 3 4 5 6 7 8 9)"]):
        G = enumerate_elements(gens)
        assert G.check_axioms(exhaustive=True)
        for a in G.elements():
            assert G.mul(a, G.inv(a)) == 0 == G.mul(G.inv(a), a)


def test_group_order_bound(monkeypatch):
    monkeypatch.setenv("FUSIONKIT_BOUNDS", "max_group_order=10")
    with pytest.raises(BoundExceeded):
        enumerate_elements(["(1 2 3 4)", "(1 2)"])


def test_subgroups_match_oracle():
    G = enumerate_elements(["(1 2 3 4)", "(1 2)"], "S4")
    mine = {frozenset(G.labels[i] for i in h) for h in G.subgroups()}
    ref = set(O.subgroups(frozenset(G.labels), 4))
    assert mine == ref and len(mine) == 30


def test_parse_bounds():
    b = parse_bounds("torsion_exponent=5, composite_length=3")
    assert b.torsion_exponent == 5 and b.composite_length == 3
    with pytest.raises(ValueError):
        parse_bounds("nonsense=1")
    with pytest.raises(ValueError):
        parse_bounds("torsion_exponent")


# torus arithmetic -----------------------------------------------------------------------

def test_snf_kernel_examples():
    assert snf_kernel(((0,),), 2, 1).order() == Order(1, 1)
    K = snf_kernel(((2,),), 2, 1)
    assert K.order() == Order(0, 2) and K.contains(((Fraction(1, 2),), 0))
    K = snf_kernel(((-2,),), 2, 1)
    assert K.order() == Order(0, 2)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(-8, 8), min_size=4, max_size=4))
def test_snf_kernel_agrees_with_brute_force(entries):
    M = ((entries[0], entries[1]), (entries[2], entries[3]))
    K = snf_kernel(M, 2, 2)
    e = 6
    ref = set(O.torsion_kernel(M, 2, e))
    q = 2 ** e
    for x in product(range(q), repeat=2):
        pt = ((Fraction(x[0], q), Fraction(x[1], q)), 0)
        assert K.contains(pt) == (x in ref)


def test_closure_examples():
    S = infinite_dihedral(2)
    P = subgroup_closure(S, [((Fraction(1, 8),), 0)])
    assert P.order() == Order(0, 8) and P.identity_component().order() == Order(0, 1)
    R = subgroup_closure(S, [((Fraction(0),), 1)])
    assert R.order() == Order(0, 2) and not R.contains(((Fraction(1, 2),), 0))
    T = subgroup_closure(S, div=[(1,)])
    assert T == S.torus() and T.order() == Order(1, 1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 15), st.integers(0, 1)), min_size=0, max_size=3))
def test_closure_is_canonical_and_idempotent(gens):
    S = infinite_dihedral(2)
    els = [((Fraction(a, 16),), g) for a, g in gens]
    P = S.closure(els)
    assert S.closure(P.gens(), P.lattice) == P
    assert S.closure(list(reversed(els))) == P
    assert S.closure(P.elements()) == P


def test_normalizer_centralizer_examples(d8s4):
    S = d8s4.S
    P = d8s4.sub("<(1 3)>")
    N = S.normalizer(P)
    ref = O.normalizer(perms_of(S, S.whole()), perms_of(S, P))
    assert perms_of(S, N) == ref and len(ref) == 4
    assert S.normalizer(S.whole()) == S.whole()
    D = infinite_dihedral(2)
    assert D.normalizer(D.torus()) == D.whole()
    assert D.centralizer(D.torus()) == D.torus()


def test_normalizers_match_oracle_on_all_subgroups(d8s4):
    S = d8s4.S
    whole = perms_of(S, S.whole())
    for P in d8s4.subs:
        assert perms_of(S, S.normalizer(P)) == O.normalizer(whole, perms_of(S, P))
        assert perms_of(S, S.centralizer(P)) == O.centralizer(whole, perms_of(S, P))


def test_power_subgroup_examples(d8s4):
    D = infinite_dihedral(2)
    T = D.torus()
    assert power_subgroup(T, 3) == T
    Z8 = D.closure([((Fraction(1, 8),), 0)])
    assert power_subgroup(Z8, 1) == D.closure([((Fraction(1, 4),), 0)])
    S = d8s4.S
    assert power_subgroup(S.whole(), 1).describe() == "<(1 3)(2 4)>"


def test_order_examples(d8s4):
    D = infinite_dihedral(2)
    assert compare_order(D.torus(), d8s4.S.whole()) > 0
    assert order_of(D.closure([((Fraction(1, 8),), 0)])) == Order(0, 8)
    assert order_of(D.whole()) == Order(1, 2)


def test_hom_search_examples(d8s4):
    S = d8s4.S
    V = d8s4.sub("<(1 3)(2 4), (1 4)(2 3)>")
    homs = hom_search(V, V, "ambient")
    assert len({tuple(sorted((perm_of(S, x), perm_of(S, f.eval(x))) for x in V.elements())) for f in homs}) == 6
    for P in d8s4.subs:
        assert any(all(f.eval(x) == x for x in P.elements()) for f in hom_search(P, P, "ambient"))
    assert hom_search(d8s4.sub("<(1 3)>"), d8s4.sub("<(1 2)(3 4)>"), "ambient") == []


def test_ambient_hom_counts_match_oracle(d8s4):
    S = d8s4.S
    G = frozenset(d8s4.G.labels)
    for P in d8s4.subs:
        for Q in d8s4.subs:
            homs = hom_search(P, Q, "ambient")
            maps = {tuple(sorted((perm_of(S, x), perm_of(S, f.eval(x))) for x in P.elements())) for f in homs}
            ref = {tuple(sorted((x, O.mul(O.mul(g, x), O.inv(g))) for x in perms_of(S, P))) for g in G
                   if O.conj(g, perms_of(S, P)) <= perms_of(S, Q)}
            assert maps == ref


# lattice properties -----------------------------------------------------------------------

def test_proper_subgroups_grow_in_normalizers(d8s4):
    S = d8s4.S
    for P in d8s4.subs:
        for Q in d8s4.subs:
            if P <= Q and P != Q:
                NQ = S.normalizer(P).intersect(Q)
                assert P <= NQ and NQ != P


def test_proper_subgroups_grow_in_normalizers_dihedral(dinf):
    from fusionkit.grp import truncated_family

    S = dinf.S
    fam = truncated_family(S, 3)
    for P in fam:
        for Q in fam:
            if P <= Q and P != Q:
                NQ = S.normalizer(P).intersect(Q)
                assert P <= NQ and NQ != P


def test_descending_chains_terminate(d8s4, dinf):
    from fusionkit.grp import truncated_family

    for S, fam in ((d8s4.S, d8s4.subs), (dinf.S, truncated_family(dinf.S, 3))):
        P = S.whole()
        steps = 0
        while True:
            smaller = [Q for Q in fam if Q <= P and Q != P]
            if not smaller:
                break
            P = max(smaller, key=lambda Q: Q.sort_key())
            steps += 1
            o = S.whole().order()
            assert steps <= o.rank + o.components.bit_length() + 8


def test_automorphisms_trivial_on_subgroup_embed_in_maps_to_center():
    """{a in Aut(P) : a|Q = id, [a, P] <= Q} injects into Map(P/Q, Z(Q)) homomorphically."""
    P = FiniteGroup.from_cycles(["(1 2 3 4)", "(1 3)"], "D8", 4)
    Q = P.closure([P.index[O.cyc("(1 3)(2 4)", 4)], P.index[O.cyc("(1 4)(2 3)", 4)]])
    ZQ = P.center(Q)
    cosets = P.cosets(Q)
    reps = [min(c) for c in cosets]
    A = [a for a in automorphisms(P)
         if all(a[q] == q for q in Q) and all(P.mul(a[g], P.inv(g)) in Q for g in P.elements())]
    assert A
    images = {}
    for a in A:
        f = tuple(P.mul(a[g], P.inv(g)) for g in reps)
        assert all(v in ZQ for v in f)
        images[f] = a
    assert len(images) == len(A)
    for a in A:
        for b in A:
            ab = [a[b[g]] for g in P.elements()]
            fa = [P.mul(a[g], P.inv(g)) for g in reps]
            fb = [P.mul(b[g], P.inv(g)) for g in reps]
            fab = [P.mul(ab[g], P.inv(g)) for g in reps]
            assert fab == [P.mul(x, y) for x, y in zip(fa, fb)]


def test_ptoral_validation():
    pi = enumerate_elements(["(1 2)"], "C2")
    with pytest.raises(ValueError):
        PToralGroup(3, 1, pi, gen_mats=[((-1,),)])
    with pytest.raises(ValueError):
        PToralGroup(2, 1, pi, gen_mats=[((2,),)])
