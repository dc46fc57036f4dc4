"""Bullet subgroups relative to a finite group W of torus automorphisms.

For A <= T, I(A) is the subgroup of T fixed by every w in W fixing A
pointwise; P* is P times the identity component of I(P^[m]), where p^m
is the exponent of S/T.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from ..bounds import BoundExceeded, get_bounds
from ..grp import intmat as im
from ..grp.finite import is_p_power
from ..grp.ops import snf_kernel
from ..grp.ptoral import GroupMorphism, PToralGroup, PToralSubgroup


@dataclass(frozen=True)
class BulletContext:
    S: PToralGroup
    W: Tuple[im.Mat, ...]
    m: int

    @classmethod
    def build(cls, S: PToralGroup, W: Sequence[im.Mat] = ()) -> "BulletContext":
        from ..fusion.core import close_matrix_group
        mats = [im.mat(w) for w in W] + [S.rho[g] for g in S.pi.elements()]
        closed = close_matrix_group(mats, S.rank)
        exp = max(S.pi.element_order(g) for g in S.pi.elements())
        if not is_p_power(exp, S.p):
            raise ValueError("pi is not a p-group")
        m = 0
        while S.p ** m < exp:
            m += 1
        return cls(S, tuple(closed), m)

    @classmethod
    def for_fusion(cls, F) -> "BulletContext":
        """Context with W = Aut_F(T) as declared by the realization."""
        return cls.build(F.S, F.torus_automorphisms())

    @property
    def T(self) -> PToralSubgroup:
        return self.S.torus()


def _fixes(w: im.Mat, A: PToralSubgroup) -> bool:
    r = len(w)
    d = im.matsub(w, im.identity(r))
    if any(any(im.mv_exact(d, v)) for v in A.lattice):
        return False
    return all(im.mv(w, x[0]) == x[0] for x in A.gens())


def I_of(ctx: BulletContext, A: PToralSubgroup) -> Tuple[PToralSubgroup, PToralSubgroup]:
    """(I(A), I(A)_0) for A <= T."""
    S = ctx.S
    if any(k[1] != 0 for k in A.keys):
        raise ValueError(f"{A.describe()} is not contained in the torus")
    r = S.rank
    if not r:
        return S.trivial(), S.trivial()
    cw = [w for w in ctx.W if _fixes(w, A)]
    rows: List[Tuple[int, ...]] = []
    for w in cw:
        rows.extend(im.matsub(w, im.identity(r)))
    K = snf_kernel(rows, S.p, r) if rows else None
    if K is None:
        I = S.torus()
    else:
        # re-home the kernel (computed in a bare torus) inside S
        I = S.closure([(x[0], 0) for x in K.reps()], K.lattice)
    return I, I.identity_component()


def bullet(ctx: BulletContext, P: PToralSubgroup) -> PToralSubgroup:
    S = ctx.S
    if not S.rank:
        return P
    Pm = S.power_subgroup(P, ctx.m)
    _, I0 = I_of(ctx, Pm)
    return P.join(I0)


def bullet_map(ctx: BulletContext, phi: GroupMorphism, w: im.Mat) -> GroupMorphism:
    """phi*(g h) = phi(g) w(h) for g in P and h in I(P^[m])_0.

    Raises ValueError when phi and w disagree on P^[m] or the
    formula is multivalued or not a homomorphism.
    """
    S = ctx.S
    P = phi.source
    if not S.rank:
        return phi
    w = im.mat(w)
    Pm = S.power_subgroup(P, ctx.m)
    for x in Pm.gens():
        if phi.eval(x) != (im.mv(w, x[0]), 0):
            raise ValueError("phi and w disagree on P^[m]")
    if P.lattice:
        bP = im.from_columns(P.frame.basis, S.rank)
        if phi.A != im.matmul(w, bP):
            raise ValueError("phi and w disagree on the identity component")
    Pb = bullet(ctx, P)
    D = Pb.identity_component()
    img = {}
    for k in Pb.keys:
        x = Pb.lift(k)
        vals = set()
        for g in P.reps():
            h = S.mul(S.inv(g), x)
            if h[1] == 0 and D.contains(h):
                vals.add(S.mul(phi.eval(g), (im.mv(w, h[0]), 0)))
        if not vals:
            raise ValueError(f"no decomposition of {S.label(x)} in P . I_0")
        if len(vals) > 1:
            raise ValueError(f"phi* is multivalued at {S.label(x)}")
        img[k] = vals.pop()
    A = im.matmul(w, im.from_columns(Pb.frame.basis, S.rank)) if Pb.lattice else ()
    out = GroupMorphism(S, Pb, A, img)
    if not out.is_homomorphism():
        raise ValueError("phi* is not a homomorphism")
    return out


def _same_class(S: PToralGroup, F, P: PToralSubgroup, Q: PToralSubgroup) -> bool:
    if F is not None:
        return F.same_s_class(P, Q)
    return S.conjugating_element(P, Q) is not None


def f_bullet(F, ctx: BulletContext, seed: Sequence[PToralSubgroup],
             cap: Optional[int] = None) -> List[PToralSubgroup]:
    """S-class representatives of bullet subgroups reached from the seed.

    With a fusion system the set is closed under F-conjugacy as well.
    """
    S = ctx.S
    cap = cap if cap is not None else get_bounds().bullet_cap
    reps: List[PToralSubgroup] = []
    work = list(seed)
    rounds = 0
    while work:
        rounds += 1
        if rounds > cap:
            raise BoundExceeded(f"bullet closure did not settle within {cap} rounds")
        nxt = []
        for P in work:
            B = bullet(ctx, P)
            if any(_same_class(S, F, B, R) for R in reps):
                continue
            reps.append(B)
            if F is not None:
                nxt.extend(Q for Q in F.class_reps(B) if Q != B)
        work = nxt
    return sorted(reps, key=lambda P: P.sort_key())


def bullet_table(ctx: BulletContext, family: Sequence[PToralSubgroup]) -> List[dict]:
    """Rows (P, P^[m], I(P^[m]), P*) for rendering."""
    rows = []
    for P in family:
        Pm = ctx.S.power_subgroup(P, ctx.m)
        I, _ = I_of(ctx, Pm) if ctx.S.rank else (ctx.S.trivial(), None)
        rows.append({"P": P.describe(), "P^[m]": Pm.describe(), "I": I.describe(),
                     "P*": bullet(ctx, P).describe()})
    return rows
