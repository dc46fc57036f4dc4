"""Module-level operations on groups, subgroups and morphisms."""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from . import intmat as im
from .finite import FiniteGroup, enumerate_elements, p_part
from .ptoral import (Elt, GroupMorphism, Order, PToralGroup, PToralSubgroup, _span_finite,
                     morphism_from_images)


def snf_kernel(M, p: int, r: int) -> PToralSubgroup:
    """Kernel of the integer matrix M acting on (Z/p^inf)^r."""
    T = PToralGroup.torus_group(p, r)
    M = im.mat(M)
    sol = im.solve_mod1(M, im.vzero(len(M)), p, r)
    _, div, fin = sol
    return T.closure([(f, 0) for f in fin], div)


def subgroup_closure(S: PToralGroup, gens: Iterable[Elt] = (), div: Iterable[Sequence[int]] = ()) -> PToralSubgroup:
    return S.closure(list(gens), list(div))


def normalizer(S: PToralGroup, P: PToralSubgroup) -> PToralSubgroup:
    return S.normalizer(P)


def centralizer(S: PToralGroup, P: PToralSubgroup) -> PToralSubgroup:
    return S.centralizer(P)


def power_subgroup(P: PToralSubgroup, m: int) -> PToralSubgroup:
    return P.S.power_subgroup(P, m)


def order_of(P: PToralSubgroup) -> Order:
    return P.order()


def compare_order(P: PToralSubgroup, Q: PToralSubgroup) -> int:
    a, b = P.order(), Q.order()
    return (a > b) - (a < b)


def truncated_elements(P: PToralSubgroup, e: int) -> List[Elt]:
    """Elements of P whose identity-component part is killed by p^e."""
    S = P.S
    if not P.lattice:
        return P.reps()
    q = S.p ** e
    pts = [tuple(v) for v in itertools.product([Fraction(i, q) for i in range(q)], repeat=P.frame.s)]
    out = []
    for x in P.reps():
        for c in pts:
            out.append(S.mul((P.frame.embed(c), 0), x))
    return out


def hom_search(P: PToralSubgroup, Q: PToralSubgroup, constraint: str = "ambient",
               candidates: Optional[Sequence[im.Mat]] = None, truncation: Optional[int] = None) -> List[GroupMorphism]:
    """Morphisms P -> Q under a constraint.

    ``ambient``: restrictions of conjugation by elements of the ambient
    finite group.  ``injective``: all injective homomorphisms; for sources
    with a nontrivial identity component the torus part is drawn from
    ``candidates`` and images of coset generators from a truncation of Q.
    """
    S = P.S
    out: List[GroupMorphism] = []
    seen = set()
    if constraint == "ambient":
        if S.ambient is None:
            raise ValueError("ambient constraint needs an ambient finite group")
        G = S.ambient
        pids = [S.embed[x[1]] for x in P.elements()]
        qids = S.ambient_ids(Q)
        for g in G.elements():
            imgs = [G.conj(g, a) for a in pids]
            if all(b in qids for b in imgs):
                img = {P.key_of(x): ((), S.unembed[b]) for x, b in zip(P.elements(), imgs)}
                phi = GroupMorphism(S, P, (), img)
                if phi not in seen:
                    seen.add(phi)
                    out.append(phi)
        return out
    if constraint != "injective":
        raise ValueError(f"unknown constraint {constraint!r}")
    if P.lattice and candidates is None:
        raise ValueError("unconstrained search on an infinite source needs candidate torus parts")
    gens = P.gens()
    from ..bounds import get_bounds
    e = truncation if truncation is not None else get_bounds().torsion_exponent
    pool = truncated_elements(Q, e)
    mats = [()] if not P.lattice else []
    if P.lattice:
        bP = im.from_columns(P.frame.basis, S.rank)
        for w in candidates:
            A = im.matmul(im.mat(w), bP)
            if all(Q.frame.contains_vec(c) for c in im.columns(A)):
                mats.append(A)
    for A in mats:
        for imgs in itertools.product(pool, repeat=len(gens)):
            if any(S.element_order(b) != S.element_order(a) for a, b in zip(gens, imgs)):
                continue
            try:
                phi = morphism_from_images(S, P, dict(zip(gens, imgs)), A)
            except ValueError:
                continue
            if phi.is_injective() and phi not in seen:
                seen.add(phi)
                out.append(phi)
    out.sort(key=lambda f: (f.A, sorted(f.img.items())))
    return out


def ambient_pgroup(G: FiniteGroup, p: int, sylow: Optional[Iterable[int]] = None, name: str = "") -> PToralGroup:
    """A Sylow p-subgroup of G (or the given one) as a rank-0 p-toral group with its embedding."""
    syl = frozenset(sylow) if sylow is not None else G.sylow(p)
    if len(syl) != p_part(G.order, p):
        raise ValueError("given subgroup is not a Sylow subgroup")
    sub, embed = G.subgroup_group(syl, name or "S")
    return PToralGroup.finite(sub, p, name=name or "S", ambient=G, embed=embed)


def infinite_dihedral(p: int = 2) -> PToralGroup:
    """Z/p^inf extended by Z/2 acting by inversion (p = 2 gives the 2-toral D_{2^inf})."""
    pi = enumerate_elements(["(1 2)"], "C2")
    return PToralGroup(p, 1, pi, gen_mats=[((-1,),)], name="Dinf")


def truncation_group(S: PToralGroup, e: int) -> FiniteGroup:
    """The finite subgroup T[p^e] x| pi, labelled by elements of S."""
    q = S.p ** e
    gens = [(tuple(Fraction(1 if i == j else 0, q) for i in range(S.rank)), 0) for j in range(S.rank)]
    gens += [(im.vzero(S.rank), g) for g in S.pi.gens]
    return FiniteGroup.from_closure(gens, S.mul, S.identity, f"{S.name}[{q}]")


def truncated_family(S: PToralGroup, e: int, with_torus: bool = True) -> List[PToralSubgroup]:
    """Subgroups of T[p^e] x| pi, plus their products with T.

    For rank at most one this lists every subgroup whose finite part has
    exponent dividing p^e on the torus; in higher rank the intermediate
    subtori are not included.
    """
    if not S.rank:
        G = S.pi
        subs = [S.closure([((), g) for g in h]) for h in G.subgroups()]
        return sorted(subs, key=lambda P: P.sort_key())
    G = truncation_group(S, e)
    out = {}
    for h in G.subgroups():
        P = S.closure([G.labels[x] for x in h])
        out[P] = None
        if with_torus:
            out[P.join(S.torus())] = None
    return sorted(out, key=lambda P: P.sort_key())
