from __future__ import annotations

import random
from fractions import Fraction

import pytest

import oracles as O
from fusionkit.bullet import BulletContext, I_of, bullet, bullet_map, bullet_table, f_bullet
from fusionkit.fusion import Generated
from fusionkit.grp import FiniteGroup, PToralGroup, truncated_family
from fusionkit.grp.ptoral import conjugation, torus_map


@pytest.fixture(scope="module")
def rank1(dinf):
    ctx = BulletContext.for_fusion(dinf.inner)
    return ctx, truncated_family(dinf.S, 6)


@pytest.fixture(scope="module")
def rank2():
    pi = FiniteGroup.from_cycles(["(1 2)"], "C2", 2)
    S = PToralGroup(2, 2, pi, gen_mats=[((0, 1), (1, 0))], name="W2")
    ctx = BulletContext.build(S, [((-1, 0), (0, -1))])
    return ctx, truncated_family(S, 3)


def _raw(x):
    return (x[0][0] % 1, x[1])


def test_context(dinf, d8s4):
    ctx = BulletContext.for_fusion(dinf.inner)
    assert ctx.m == 1 and len(ctx.W) == 2
    assert BulletContext.build(d8s4.S).m == 2


def test_I_examples(dinf):
    ctx = BulletContext.for_fusion(dinf.inner)
    I, I0 = I_of(ctx, dinf.tor(2))
    assert I == dinf.tor(2) and I0 == dinf.S.trivial()
    I, I0 = I_of(ctx, dinf.tor(4))
    assert I == dinf.S.torus() == I0
    with pytest.raises(ValueError):
        I_of(ctx, dinf.V)


def test_bullet_examples(dinf, d8s4):
    ctx = BulletContext.for_fusion(dinf.inner)
    T = dinf.S.torus()
    assert bullet(ctx, dinf.tor(8)) == T
    assert bullet(ctx, dinf.tor(4)) == dinf.tor(4)
    assert bullet(ctx, dinf.V) == dinf.V
    D16 = dinf.S.closure([((Fraction(1, 8),), 0), dinf.s])
    assert bullet(ctx, D16) == dinf.S.whole()
    fctx = BulletContext.build(d8s4.S)
    assert all(bullet(fctx, P) == P for P in d8s4.subs)


def test_bullet_matches_oracle(rank1):
    ctx, fam = rank1
    for P in fam:
        if not P.is_finite:
            assert bullet(ctx, P) == P
            continue
        kind, val = O.dbullet({_raw(x) for x in P.elements()})
        B = bullet(ctx, P)
        if kind == "finite":
            assert B == P
        else:
            assert B == (ctx.S.whole() if val else ctx.S.torus())


def _family(rank1, rank2):
    return [(rank1[0], P) for P in rank1[1]] + [(rank2[0], P) for P in rank2[1]]


def test_family_is_large_enough(rank1, rank2):
    assert len(_family(rank1, rank2)) >= 200


def test_idempotent_and_contains(rank1, rank2):
    for ctx, P in _family(rank1, rank2):
        B = bullet(ctx, P)
        assert P <= B
        assert bullet(ctx, B) == B


def test_normalizer_grows(rank1, rank2):
    for ctx, P in _family(rank1, rank2):
        assert ctx.S.normalizer(P) <= ctx.S.normalizer(bullet(ctx, P))


def test_monotone(rank1, rank2):
    for ctx, fam in (rank1, rank2):
        bs = {P: bullet(ctx, P) for P in fam}
        for P in fam:
            for Q in fam:
                if P <= Q:
                    assert bs[P] <= bs[Q]


def test_conjugation_equivariant(rank1, rank2):
    rng = random.Random(7)
    for ctx, fam in (rank1, rank2):
        S = ctx.S
        r = S.rank
        for P in fam:
            for _ in range(3):
                g = S.elt(tuple(Fraction(rng.randrange(16), 16) for _ in range(r)), rng.randrange(S.pi.order))
                assert bullet(ctx, S.conjugate(g, P)) == S.conjugate(g, bullet(ctx, P))


def test_torus_automorphism_equivariant(rank1, rank2):
    for ctx, fam in (rank1, rank2):
        T = ctx.S.torus()
        for P in fam:
            if not P <= T:
                continue
            for w in ctx.W:
                wP = torus_map(w, P).image()
                assert bullet(ctx, wP) == torus_map(w, bullet(ctx, P)).image()


def test_bullet_map_extends_conjugation(rank1):
    ctx, fam = rank1
    S = ctx.S
    for P in fam:
        for g in (S.elt((Fraction(0),), 1), S.elt((Fraction(1, 8),), 0)):
            phi = conjugation(g, P)
            Phi = bullet_map(ctx, phi, S.rho[g[1]])
            B = bullet(ctx, P)
            assert Phi.source == B
            assert Phi.restrict(P) == phi
            assert Phi == conjugation(g, B)


def test_bullet_map_rejects_mismatch(dinf):
    ctx = BulletContext.for_fusion(dinf.inner)
    P = dinf.tor(8)
    with pytest.raises(ValueError):
        bullet_map(ctx, conjugation(dinf.s, P), ((1,),))


def test_f_bullet_classes_match_oracle(rank1):
    ctx, fam = rank1
    S = ctx.S
    F = Generated(S, [], W=[((-1,),)])
    reps = f_bullet(F, ctx, fam)
    fin, tor = [], set()
    for P in fam:
        if not P.is_finite:
            tor.add(any(k[1] for k in P.keys))
            continue
        kind, val = O.dbullet({_raw(x) for x in P.elements()})
        if kind == "finite":
            fin.append(val)
        else:
            tor.add(val)
    expected = len(O.dconj_classes(list(dict.fromkeys(fin)), 8)) + len(tor)
    assert len(reps) == expected == 8
    assert f_bullet(None, ctx, fam) == reps


def test_bullet_table(dinf):
    ctx = BulletContext.for_fusion(dinf.inner)
    rows = bullet_table(ctx, [dinf.tor(8), dinf.V])
    assert rows[0]["P*"] == ctx.S.torus().describe()
    assert set(rows[0]) == {"P", "P^[m]", "I", "P*"}
