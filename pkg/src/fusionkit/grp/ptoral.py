"""Discrete p-toral groups T x| pi with exact torus arithmetic.

An element is a pair ``(t, g)``: t a torus vector (tuple of Fractions in
[0, 1)) and g an element id of the finite p-group pi.  Multiplication is
``(t, g)(u, h) = (t + rho(g) u, g h)``.  Finite p-groups are the rank-0
case, so one code path serves both.
"""

from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from ..bounds import BoundExceeded, get_bounds
from . import intmat as im
from .finite import FiniteGroup, is_p_power

Elt = Tuple[im.Vec, int]


class Order(NamedTuple):
    """(rank, number of components), compared lexicographically."""

    rank: int
    components: int

    def __str__(self) -> str:
        return f"({self.rank},{self.components})"


class PToralGroup:
    """Split extension of a rank-r discrete p-torus by a finite p-group."""

    def __init__(self, p: int, rank: int, pi: FiniteGroup, rho: Optional[Sequence[im.Mat]] = None,
                 gen_mats: Optional[Sequence[im.Mat]] = None, name: str = "",
                 ambient: Optional[FiniteGroup] = None, embed: Optional[List[int]] = None):
        self.p = p
        self.rank = rank
        self.pi = pi
        self.name = name
        self.ambient = ambient
        self.embed = embed
        self.unembed = {g: i for i, g in enumerate(embed)} if embed is not None else None
        if not is_p_power(pi.order, p):
            raise ValueError(f"pi has order {pi.order}, not a power of {p}")
        if rho is None:
            rho = self._rho_from_gens(gen_mats or [im.identity(rank)] * len(pi.gens))
        self.rho = [im.mat(m) for m in rho]
        self._check_rho()
        self.identity: Elt = (im.vzero(rank), 0)
        self._cache: Dict = {}

    def _rho_from_gens(self, mats: Sequence[im.Mat]) -> List[im.Mat]:
        if len(mats) != len(self.pi.gens):
            raise ValueError("need one matrix per generator of pi")
        rho: Dict[int, im.Mat] = {0: im.identity(self.rank)}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g, m in zip(self.pi.gens, mats):
                y = self.pi.mul(x, g)
                val = im.matmul(rho[x], im.mat(m)) if self.rank else ()
                if y in rho:
                    if rho[y] != val:
                        raise ValueError("action matrices do not define a homomorphism")
                else:
                    rho[y] = val
                    queue.append(y)
        return [rho[i] for i in range(self.pi.order)]

    def _check_rho(self) -> None:
        r = self.rank
        if self.rho[0] != im.identity(r):
            raise ValueError("rho(1) must be the identity")
        for a in self.pi.elements():
            if r and abs(im.det(self.rho[a])) != 1:
                raise ValueError("action matrices must have determinant +-1")
            for b in self.pi.gens:
                if r and self.rho[self.pi.mul(a, b)] != im.matmul(self.rho[a], self.rho[b]):
                    raise ValueError("rho is not a homomorphism")

    @classmethod
    def finite(cls, g: FiniteGroup, p: int, name: str = "", ambient: Optional[FiniteGroup] = None,
               embed: Optional[List[int]] = None) -> "PToralGroup":
        return cls(p, 0, g, rho=[()] * g.order, name=name or g.name, ambient=ambient, embed=embed)

    @classmethod
    def torus_group(cls, p: int, rank: int) -> "PToralGroup":
        triv = FiniteGroup([()], [[0]], [], "1")
        return cls(p, rank, triv, rho=[im.identity(rank)], name=f"T{rank}")

    # element arithmetic --------------------------------------------------
    @property
    def is_finite(self) -> bool:
        return self.rank == 0

    def mul(self, x: Elt, y: Elt) -> Elt:
        if not self.rank:
            return ((), self.pi.table[x[1]][y[1]])
        return (im.vadd(x[0], im.mv(self.rho[x[1]], y[0])), self.pi.table[x[1]][y[1]])

    def inv(self, x: Elt) -> Elt:
        gi = self.pi.inverse[x[1]]
        if not self.rank:
            return ((), gi)
        return (im.vneg(im.mv(self.rho[gi], x[0])), gi)

    def conj(self, x: Elt, y: Elt) -> Elt:
        """x y x^-1."""
        return self.mul(self.mul(x, y), self.inv(x))

    def pow(self, x: Elt, n: int) -> Elt:
        if n < 0:
            x, n = self.inv(x), -n
        r = self.identity
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r

    def element_order(self, x: Elt) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul(y, x)
            k += 1
        return k

    def elt(self, t: Sequence = (), g: int = 0) -> Elt:
        return (im.vreduce([Fraction(a) for a in t]), g)

    def label(self, x: Elt) -> str:
        g = self.pi.label(x[1]) if self.pi.order > 1 else ""
        if not self.rank:
            return g or "()"
        t = ",".join(str(a) for a in x[0])
        return f"[{t}|{g}]" if g and g != "()" else f"[{t}]"

    # subgroup construction -----------------------------------------------
    def frame(self, lattice) -> im.Frame:
        return im.frame_for(lattice, self.rank)

    def lattice_closure(self, vecs, pis: Iterable[int]) -> Tuple[Tuple[int, ...], ...]:
        lat = im.saturate(vecs, self.rank)
        pis = [g for g in set(pis) if g != 0]
        while True:
            more = list(lat)
            for g in pis:
                for v in lat:
                    more.append(im.mv_exact(self.rho[g], v))
            new = im.saturate(more, self.rank)
            if new == lat:
                return lat
            lat = new

    def closure(self, gens: Iterable[Elt] = (), div: Iterable[Sequence[int]] = ()) -> "PToralSubgroup":
        """Smallest subgroup containing the elements ``gens`` and the subtorus spanned by ``div``."""
        gens = [g for g in gens]
        lat = self.lattice_closure(list(div), [x[1] for x in gens])
        fr = self.frame(lat)
        bound = get_bounds().max_components
        keys = {(im.vzero(self.rank - fr.s), 0)}
        queue = deque(keys)
        gks = [(fr.key(x[0]), x[1]) for x in gens]
        gks = [k for k in dict.fromkeys(gks) if k != (im.vzero(self.rank - fr.s), 0)]
        glifts = [(fr.lift(k[0]), k[1]) for k in gks]
        while queue:
            k = queue.popleft()
            x = (fr.lift(k[0]), k[1])
            for g in glifts:
                y = self.mul(x, g)
                ky = (fr.key(y[0]), y[1])
                if ky not in keys:
                    keys.add(ky)
                    if len(keys) > bound:
                        raise BoundExceeded(f"component group exceeds {bound}")
                    queue.append(ky)
        return PToralSubgroup(self, lat, frozenset(keys))

    def whole(self) -> "PToralSubgroup":
        key = "whole"
        if key not in self._cache:
            div = [tuple(1 if i == j else 0 for i in range(self.rank)) for j in range(self.rank)]
            self._cache[key] = self.closure([(im.vzero(self.rank), g) for g in self.pi.gens], div)
        return self._cache[key]

    def torus(self) -> "PToralSubgroup":
        key = "torus"
        if key not in self._cache:
            div = [tuple(1 if i == j else 0 for i in range(self.rank)) for j in range(self.rank)]
            self._cache[key] = self.closure([], div)
        return self._cache[key]

    def trivial(self) -> "PToralSubgroup":
        return self.closure([])

    def torsion_points(self, e: int) -> List[im.Vec]:
        """All torus points killed by p^e (the truncation used by enumerators)."""
        q = self.p ** e
        vals = [Fraction(i, q) for i in range(q)]
        return [tuple(v) for v in itertools.product(vals, repeat=self.rank)]

    def from_ambient_ids(self, ids: Iterable[int]) -> "PToralSubgroup":
        """Finite case: subgroup from ambient-group element ids."""
        return self.closure([((), self.unembed[i]) for i in ids])

    def ambient_ids(self, P: "PToralSubgroup") -> FrozenSet[int]:
        return frozenset(self.embed[x[1]] for x in P.elements())

    # normalizers, centralizers, transporters ----------------------------
    def _rep_with_pi(self, Q: "PToralSubgroup", h: int) -> Optional[Elt]:
        return Q.pi_reps().get(h)

    def transporter_data(self, P: "PToralSubgroup", Q: "PToralSubgroup"):
        """Elements x with x P x^-1 <= Q, grouped by pi-part.

        Returns a list of ``(g, us, div)``: for the pi-part g the valid torus
        parts are ``us + span(div)``.
        """
        r = self.rank
        out = []
        frQ = Q.frame
        fin = [k[0] for k in Q.keys if k[1] == 0]
        finset = set(fin)
        e = max([im.vorder_exp(v, self.p) for v in fin] + [0])
        gens = P.gens()
        for g in self.pi.elements():
            if r and not all(frQ.contains_vec(im.mv_exact(self.rho[g], v)) for v in P.lattice):
                continue
            rows: List[Tuple[int, ...]] = []
            rhs: List[Fraction] = []
            ok = True
            for a in gens:
                hp = self.pi.conj(g, a[1])
                q = self._rep_with_pi(Q, hp)
                if q is None:
                    ok = False
                    break
                if r:
                    m = im.matsub(im.identity(r), self.rho[hp])
                    rows.extend(im.matmul(frQ.proj, m))
                    rhs.extend(frQ.key(im.vsub(q[0], im.mv(self.rho[g], a[0]))))
            if not ok:
                continue
            if not r:
                out.append((g, [()], ()))
                continue
            n = tuple(rows)
            blk = r - frQ.s
            if not n or blk == 0:
                # no torus constraints survive
                div = tuple(tuple(1 if i == j else 0 for i in range(r)) for j in range(r))
                out.append((g, [im.vzero(r)], div))
                continue
            scale = self.p ** e
            sol = im.solve_mod1(tuple(tuple(scale * x for x in row) for row in n),
                                im.vscale(scale, tuple(rhs)), self.p, r)
            if sol is None:
                continue
            u0, div, finite_gens = sol
            us = []
            for f in _span_finite(finite_gens, r):
                u = im.vadd(u0, f)
                val = im.vsub(im.mv(n, u), tuple(rhs))
                if all(val[i:i + blk] in finset for i in range(0, len(val), blk)):
                    us.append(u)
            if us:
                out.append((g, us, div))
        return out

    def transporter_elements(self, P: "PToralSubgroup", Q: "PToralSubgroup") -> List[Elt]:
        """Finite list of transporter elements (for finite Q this is exact up to C_T(P)_0)."""
        out = []
        for g, us, _ in self.transporter_data(P, Q):
            out.extend((u, g) for u in us)
        return out

    def normalizer(self, P: "PToralSubgroup") -> "PToralSubgroup":
        key = ("N", P)
        if key not in self._cache:
            data = self.transporter_data(P, P)
            gens = []
            div = ()
            for g, us, d in data:
                gens.extend((u, g) for u in us)
                if g == 0:
                    div = d
            self._cache[key] = self.closure(gens, div)
        return self._cache[key]

    def centralizer(self, P: "PToralSubgroup") -> "PToralSubgroup":
        key = ("C", P)
        if key in self._cache:
            return self._cache[key]
        r = self.rank
        gens_out = []
        div = ()
        pgens = P.gens()
        for g in self.pi.elements():
            if any(self.pi.mul(g, a[1]) != self.pi.mul(a[1], g) for a in pgens):
                continue
            if r:
                dm = im.matsub(self.rho[g], im.identity(r))
                if any(any(im.mv_exact(dm, v)) for v in P.lattice):
                    continue
                rows, rhs = [], []
                for a in pgens:
                    rows.extend(im.matsub(im.identity(r), self.rho[a[1]]))
                    rhs.extend(im.vsub(a[0], im.mv(self.rho[g], a[0])))
                sol = im.solve_mod1(tuple(rows), tuple(rhs), self.p, r)
                if sol is None:
                    continue
                u0, d, fin = sol
                gens_out.append((u0, g))
                gens_out.extend((f, 0) for f in fin)
                if g == 0:
                    div = d
            else:
                gens_out.append(((), g))
        res = self.closure(gens_out, div)
        self._cache[key] = res
        return res

    def find_conjugator(self, pairs: Sequence[Tuple[Elt, Elt]],
                        vec_pairs: Sequence[Tuple[Sequence[int], Sequence[int]]] = ()) -> Optional[Elt]:
        """Some x with x a x^-1 = b for all pairs and rho(x) v = w for the vector pairs."""
        r = self.rank
        for g in self.pi.elements():
            if r and any(tuple(im.mv_exact(self.rho[g], v)) != tuple(w) for v, w in vec_pairs):
                continue
            if any(self.pi.conj(g, a[1]) != b[1] for a, b in pairs):
                continue
            if not r:
                return ((), g)
            rows, rhs = [], []
            for a, b in pairs:
                rows.extend(im.matsub(im.identity(r), self.rho[b[1]]))
                rhs.extend(im.vsub(b[0], im.mv(self.rho[g], a[0])))
            sol = im.solve_mod1(tuple(rows), tuple(rhs), self.p, r)
            if sol is not None:
                return (sol[0], g)
        return None

    def conjugate(self, x: Elt, P: "PToralSubgroup") -> "PToralSubgroup":
        div = [im.mv_exact(self.rho[x[1]], v) for v in P.lattice] if self.rank else []
        return self.closure([self.conj(x, a) for a in P.gens()], div)

    def conjugating_element(self, P: "PToralSubgroup", Q: "PToralSubgroup") -> Optional[Elt]:
        """Some x with x P x^-1 = Q, or None."""
        if P.order() != Q.order():
            return None
        for g, us, _ in self.transporter_data(P, Q):
            for u in us:
                x = (u, g)
                if self.conjugate(x, P) == Q:
                    return x
        return None

    def power_subgroup(self, P: "PToralSubgroup", m: int) -> "PToralSubgroup":
        """<g^(p^m) : g in P>; the identity component survives intact."""
        q = self.p ** m
        gens = [self.pow(x, q) for x in P.reps()]
        # D is divisible, so D lies in P^[m]; modulo D the p^m-th powers of
        # the coset representatives generate the rest.
        return self.closure(gens, P.lattice)


def _span_finite(gens: Sequence[im.Vec], r: int) -> List[im.Vec]:
    """All elements of the finite subgroup of the torus generated by gens."""
    zero = im.vzero(r)
    seen = {zero}
    queue = deque([zero])
    bound = get_bounds().max_components * 16
    while queue:
        x = queue.popleft()
        for g in gens:
            y = im.vadd(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > bound:
                    raise BoundExceeded("finite torus span too large")
                queue.append(y)
    return sorted(seen)


class PToralSubgroup:
    """Canonical subgroup: saturated lattice for D plus the set of D-cosets.

    ``keys`` holds one entry ``(k, g)`` per element of P/D where k is the
    image of the torus part in T/D.  Equality and hashing use (lattice, keys),
    so structurally equal subgroups compare equal.
    """

    __slots__ = ("S", "lattice", "keys", "frame", "_gens", "_reps", "_hash", "_pireps")

    def __init__(self, S: PToralGroup, lattice, keys: FrozenSet):
        self.S = S
        self.lattice = lattice
        self.keys = keys
        self.frame = S.frame(lattice)
        self._gens = None
        self._reps = None
        self._pireps = None
        self._hash = hash((lattice, keys))

    def __eq__(self, other) -> bool:
        return isinstance(other, PToralSubgroup) and self._hash == other._hash and \
            self.lattice == other.lattice and self.keys == other.keys

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PToralSubgroup({self.describe()})"

    def order(self) -> Order:
        return Order(len(self.lattice), len(self.keys))

    @property
    def is_finite(self) -> bool:
        return not self.lattice

    def sort_key(self):
        return (self.order(), self.lattice, tuple(sorted(self.keys)))

    def key_of(self, x: Elt):
        return (self.frame.key(x[0]), x[1])

    def lift(self, k) -> Elt:
        return (self.frame.lift(k[0]), k[1])

    def contains(self, x: Elt) -> bool:
        return self.key_of(x) in self.keys

    def __contains__(self, x: Elt) -> bool:
        return self.contains(x)

    def reps(self) -> List[Elt]:
        """Canonical coset representatives of P/D (all elements when P is finite)."""
        if self._reps is None:
            self._reps = [self.lift(k) for k in sorted(self.keys)]
        return self._reps

    def elements(self) -> List[Elt]:
        if self.lattice:
            raise ValueError("infinite subgroup has no element list")
        return self.reps()

    def pi_reps(self) -> Dict[int, Elt]:
        """One representative per pi-part (smallest key)."""
        if self._pireps is None:
            d: Dict[int, Elt] = {}
            for k in sorted(self.keys):
                d.setdefault(k[1], self.lift(k))
            self._pireps = d
        return self._pireps

    def pi_image(self) -> FrozenSet[int]:
        return frozenset(k[1] for k in self.keys)

    def gens(self) -> List[Elt]:
        """Greedy generating list of P modulo D (smallest keys first)."""
        if self._gens is None:
            chosen: List[Elt] = []
            cur = {(im.vzero(self.S.rank - self.frame.s), 0)}
            for k in sorted(self.keys):
                if k in cur:
                    continue
                chosen.append(self.lift(k))
                cur = set(self.S.closure(chosen, self.lattice).keys)
                if len(cur) == len(self.keys):
                    break
            self._gens = chosen
        return self._gens

    def le(self, other: "PToralSubgroup") -> bool:
        if len(self.lattice) > len(other.lattice):
            return False
        if not all(other.frame.contains_vec(v) for v in self.lattice):
            return False
        return all(other.contains(x) for x in self.gens())

    def __le__(self, other: "PToralSubgroup") -> bool:
        return self.le(other)

    def __lt__(self, other: "PToralSubgroup") -> bool:
        return self != other and self.le(other)

    def identity_component(self) -> "PToralSubgroup":
        return self.S.closure([], self.lattice)

    def torus_part(self) -> "PToralSubgroup":
        """P intersected with T."""
        return self.S.closure([self.lift(k) for k in self.keys if k[1] == 0], self.lattice)

    def join(self, other: "PToralSubgroup") -> "PToralSubgroup":
        return self.S.closure(self.gens() + other.gens(), list(self.lattice) + list(other.lattice))

    def intersect(self, other: "PToralSubgroup") -> "PToralSubgroup":
        S = self.S
        r = S.rank
        if not r:
            return S.closure([x for x in self.reps() if other.contains(x)])
        frO = other.frame
        bP = im.from_columns(self.frame.basis, r) if self.lattice else None
        fin_other = [k[0] for k in other.keys if k[1] == 0]
        gens: List[Elt] = []
        div: List[Tuple[int, ...]] = []
        other_pi = other.pi_reps()
        for x in self.reps():
            q = other_pi.get(x[1])
            if q is None:
                continue
            base = frO.key(im.vsub(x[0], q[0]))
            if not self.lattice:
                if base in set(fin_other):
                    gens.append(x)
                continue
            nmat = im.matmul(frO.proj, bP) if frO.proj else ()
            for a in fin_other:
                sol = im.solve_mod1(nmat, im.vsub(a, base), S.p, self.frame.s)
                if sol is None:
                    continue
                c0, d, fin = sol
                gens.append((im.vadd(x[0], self.frame.embed(c0)), x[1]))
                gens.extend((self.frame.embed(f), 0) for f in fin)
                div.extend(im.mv_exact(bP, v) for v in d)
        return S.closure(gens, div)

    def describe(self) -> str:
        S = self.S
        parts = []
        if self.lattice:
            parts.append("D=" + ";".join("(" + ",".join(str(a) for a in v) + ")" for v in self.lattice))
        parts.append("<" + ", ".join(S.label(x) for x in self.gens()) + ">")
        return " ".join(parts)


class GroupMorphism:
    """Injective homomorphism from a subgroup P of S into S.

    ``A`` is an r x s integer matrix: phi(B c) = A c for the frame basis B of
    P's identity component.  ``img`` maps each coset key of P to the image
    of its canonical representative.
    """

    __slots__ = ("S", "source", "A", "img", "_hash", "_image")

    def __init__(self, S: PToralGroup, source: PToralSubgroup, A, img: Dict):
        self.S = S
        self.source = source
        self.A = im.mat(A) if A else tuple(() for _ in range(S.rank))
        self.img = img
        self._image = None
        self._hash = hash((source, self.A, tuple(sorted(img.items()))))

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupMorphism) and self._hash == other._hash and \
            self.source == other.source and self.A == other.A and self.img == other.img

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"GroupMorphism({self.source.describe()} -> {self.image().describe()})"

    def __call__(self, x: Elt) -> Elt:
        return self.eval(x)

    def eval(self, x: Elt) -> Elt:
        P = self.source
        k = P.key_of(x)
        base = self.img[k]
        if not P.lattice:
            return base
        rep = P.lift(k)
        dc = P.frame.dcoords(im.vsub(x[0], rep[0]))
        d = (im.mv(self.A, dc), 0)
        return self.S.mul(d, base)

    def image(self) -> PToralSubgroup:
        if self._image is None:
            cols = im.columns(self.A) if self.source.lattice else []
            self._image = self.S.closure(list(self.img.values()), cols)
        return self._image

    def restrict(self, R: PToralSubgroup) -> "GroupMorphism":
        P = self.source
        if R == P:
            return self
        A = ()
        if R.lattice:
            coords = [P.frame.int_coords(v) for v in R.frame.basis]
            A = im.from_columns([im.mv_exact(self.A, c) for c in coords], self.S.rank)
        img = {k: self.eval(R.lift(k)) for k in R.keys}
        return GroupMorphism(self.S, R, A, img)

    def compose(self, first: "GroupMorphism") -> "GroupMorphism":
        """self o first."""
        S = self.S
        A = ()
        if first.source.lattice:
            fr = self.source.frame
            coords = [fr.int_coords(v) for v in im.columns(first.A)]
            A = im.from_columns([im.mv_exact(self.A, c) for c in coords], S.rank)
        img = {k: self.eval(v) for k, v in first.img.items()}
        return GroupMorphism(S, first.source, A, img)

    def is_homomorphism(self) -> bool:
        P = self.source
        gens = P.gens()
        S = self.S
        pts = gens + ([(P.frame.embed(tuple(Fraction(1, S.p) if i == j else 0 for i in range(P.frame.s))), 0)
                       for j in range(P.frame.s)] if P.lattice else [])
        for a in pts:
            for b in pts + P.reps():
                if self.eval(S.mul(a, b)) != S.mul(self.eval(a), self.eval(b)):
                    return False
                if self.eval(S.mul(b, a)) != S.mul(self.eval(b), self.eval(a)):
                    return False
        return True

    def is_injective(self) -> bool:
        P = self.source
        S = self.S
        if P.lattice:
            d, _, _ = im.smith(self.A, S.rank, P.frame.s)
            if sum(1 for x in d if x) < P.frame.s or any(x % S.p == 0 for x in d if x):
                return False
        img_frame = S.frame(im.saturate(im.columns(self.A), S.rank) if P.lattice else ())
        seen = set()
        for k, v in self.img.items():
            kk = (img_frame.key(v[0]), v[1])
            if kk in seen:
                return False
            seen.add(kk)
        return True

    def inverse(self) -> "GroupMorphism":
        """phi^-1 : phi(P) -> P (torus part must be unimodular)."""
        S = self.S
        P = self.source
        Q = self.image()
        A = ()
        if P.lattice:
            m = im.from_columns([Q.frame.int_coords(v) for v in im.columns(self.A)], P.frame.s)
            if abs(im.det(m)) != 1:
                raise ValueError("torus part is not unimodular")
            minv = im.inverse_unimodular(m)
            bP = im.from_columns(P.frame.basis, S.rank)
            A = im.matmul(bP, minv)
        by_key = {}
        for k, v in self.img.items():
            by_key[Q.key_of(v)] = (k, v)
        inv = GroupMorphism(S, Q, A, {})
        img = {}
        for kq in Q.keys:
            kp, v = by_key[kq]
            rep_q = Q.lift(kq)
            # rep_q = d * v with d in Q_0; phi^-1(rep_q) = phi^-1(d) * rep_p
            d = im.vsub(rep_q[0], v[0]) if S.rank else ()
            rep_p = P.lift(kp)
            if Q.lattice:
                dc = Q.frame.dcoords(d)
                pre = (im.mv(A, dc), 0)
                img[kq] = S.mul(pre, rep_p)
            else:
                img[kq] = rep_p
        return GroupMorphism(S, Q, A, img)

    def is_identity_on(self) -> bool:
        P = self.source
        if P.lattice and self.A != im.from_columns(P.frame.basis, self.S.rank):
            return False
        return all(self.img[k] == P.lift(k) for k in P.keys)

    def describe(self) -> str:
        S = self.S
        P = self.source
        parts = [f"{S.label(x)}->{S.label(self.eval(x))}" for x in P.gens()]
        if P.lattice:
            parts.append("A=" + str([list(r) for r in self.A]))
        return "{" + ", ".join(parts) + "}"


def inclusion(P: PToralSubgroup) -> GroupMorphism:
    S = P.S
    A = im.from_columns(P.frame.basis, S.rank) if P.lattice else ()
    return GroupMorphism(S, P, A, {k: P.lift(k) for k in P.keys})


def conjugation(x: Elt, P: PToralSubgroup) -> GroupMorphism:
    """c_x restricted to P."""
    S = P.S
    A = ()
    if P.lattice:
        A = im.matmul(S.rho[x[1]], im.from_columns(P.frame.basis, S.rank))
    return GroupMorphism(S, P, A, {k: S.conj(x, P.lift(k)) for k in P.keys})


def torus_map(w: im.Mat, P: PToralSubgroup) -> GroupMorphism:
    """Restriction to P <= T of the torus automorphism w."""
    S = P.S
    if any(k[1] != 0 for k in P.keys):
        raise ValueError("torus map needs a subgroup of T")
    A = im.matmul(w, im.from_columns(P.frame.basis, S.rank)) if P.lattice else ()
    return GroupMorphism(S, P, A, {k: (im.mv(w, P.lift(k)[0]), 0) for k in P.keys})


def morphism_from_images(S: PToralGroup, P: PToralSubgroup, images: Dict[Elt, Elt], A=()) -> GroupMorphism:
    """Extend generator images (and torus matrix A) to a morphism on P.

    Raises ValueError if the assignment is not a well-defined homomorphism.
    """
    fr = P.frame
    val: Dict = {}
    ident_key = (im.vzero(S.rank - fr.s), 0)
    val[ident_key] = S.identity
    gens = list(images)
    queue = deque([ident_key])
    tmp = GroupMorphism(S, P, A, {})

    def d_image(t):
        if not P.lattice:
            return S.identity
        return (im.mv(tmp.A, fr.dcoords(t)), 0)

    while queue:
        k = queue.popleft()
        x = P.lift(k)
        fx = val[k]
        for g in gens:
            y = S.mul(x, g)
            ky = P.key_of(y)
            fy = S.mul(fx, images[g])
            rep = P.lift(ky)
            # y = d * rep with d in D, so f(rep) = f(d)^-1 f(y)
            dd = im.vsub(y[0], rep[0]) if S.rank else ()
            frep = S.mul(S.inv(d_image(dd)), fy)
            if ky in val:
                if val[ky] != frep:
                    raise ValueError("images do not define a homomorphism")
            else:
                val[ky] = frep
                queue.append(ky)
    if set(val) != set(P.keys):
        raise ValueError("generators do not generate the source")
    phi = GroupMorphism(S, P, A, val)
    if not phi.is_homomorphism():
        raise ValueError("images do not define a homomorphism")
    return phi
