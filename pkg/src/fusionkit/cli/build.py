"""Turn resolved spec blocks into groups, fusion systems, families and pairs."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..bounds import get_bounds
from ..fusion import AmbientFinite, FusionSystem, Generated, is_centric
from ..grp import FiniteGroup, PToralGroup, morphism_from_images, truncated_family
from ..grp.ops import ambient_pgroup
from .spec import Block, SpecDocument, SpecError


def _perm(cycles, degree: int) -> Tuple[int, ...]:
    img = list(range(degree))
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def _degree(cycle_lists) -> int:
    return max([max(c) for cyc in cycle_lists for c in cyc] + [1])


def _int(v, what: str) -> int:
    if v is None or v[0] != "int":
        raise ValueError(f"{what} must be an integer")
    return v[1]


class Workspace:
    """Lazily built objects for the blocks of one document."""

    def __init__(self, doc: SpecDocument):
        self.doc = doc
        self._cache: Dict[str, object] = {}

    def _err(self, b: Block, key: str, msg: str) -> SpecError:
        line, col = b.pos.get(key, (b.line, b.col))
        return SpecError(msg, line, col, self.doc.source)

    def get(self, name: str):
        if name not in self._cache:
            b = self.doc[name]
            self._cache[name] = getattr(self, "_build_" + b.kind)(b)
        return self._cache[name]

    # groups --------------------------------------------------------------------
    def _build_group(self, b: Block) -> FiniteGroup:
        cyc = [v[1] for v in b.all("perm")]
        deg = _degree(cyc)
        if b.get("degree") is not None:
            d = _int(b.get("degree"), "degree")
            if d < deg:
                raise self._err(b, "degree", f"degree {d} is smaller than a moved point")
            deg = d
        return FiniteGroup.from_perms([_perm(c, deg) for c in cyc], b.name, deg)

    def subgroup_ids(self, big: FiniteGroup, small_name: str, key_block: Block, key: str) -> frozenset:
        """Ids in ``big`` of the subgroup generated by another group block's permutations."""
        small = self.doc[small_name]
        deg = len(big.labels[0])
        ids = []
        for v in small.all("perm"):
            if _degree([v[1]]) > deg:
                raise self._err(key_block, key, f"{small_name} moves points outside {big.name}")
            perm = _perm(v[1], deg)
            if perm not in big.index:
                raise self._err(key_block, key, f"{small_name} is not a subgroup of {big.name}")
            ids.append(big.index[perm])
        return big.closure(ids)

    def _build_ptoral(self, b: Block) -> PToralGroup:
        p = _int(b.get("p"), "p")
        rank = _int(b.get("rank", ("int", 0)), "rank")
        gens = [v[1] for v in (b.get("pi") or ("list", ()))[1]]
        if any(v[0] != "perm" for v in (b.get("pi") or ("list", ()))[1]):
            raise self._err(b, "pi", "pi must be a list of permutations")
        deg = _degree(gens)
        pi = FiniteGroup.from_perms([_perm(c, deg) for c in gens], f"pi({b.name})", deg)
        mats = None
        if b.get("act") is not None:
            mats = [_matrix(v, rank) for v in b.get("act")[1]]
            if len(mats) != len(gens):
                raise self._err(b, "act", "need one action matrix per generator of pi")
        elif rank:
            mats = [tuple(tuple(int(i == j) for j in range(rank)) for i in range(rank))] * len(gens)
        try:
            return PToralGroup(p, rank, pi, gen_mats=mats, name=b.name)
        except ValueError as e:
            raise self._err(b, "p", str(e)) from None

    # fusion systems ---------------------------------------------------------------
    def _build_fusion(self, b: Block) -> FusionSystem:
        if b.get("ambient") is not None:
            G = self.get(b.get("ambient")[1])
            if b.get("sylow") is None:
                raise self._err(b, "ambient", "an ambient fusion block needs sylow=")
            syl = self.subgroup_ids(G, b.get("sylow")[1], b, "sylow")
            p = _prime_of(len(syl))
            if p is None:
                raise self._err(b, "sylow", "sylow= does not name a p-group")
            try:
                S = ambient_pgroup(G, p, syl, b.get("sylow")[1])
            except ValueError as e:
                raise self._err(b, "sylow", str(e)) from None
            return AmbientFinite(S, name=b.name)
        if b.get("over") is None:
            raise SpecError("fusion block needs ambient= or over=", b.line, b.col, self.doc.source)
        target = self.doc[b.get("over")[1]]
        if target.kind == "group":
            G = self.get(target.name)
            p = _int(b.get("p"), "p") if b.get("p") is not None else _prime_of(G.order)
            if p is None:
                raise self._err(b, "over", f"{target.name} is not a p-group")
            S = PToralGroup.finite(G, p, target.name)
        else:
            S = self.get(target.name)
        maps = [self._morphism(S, b, v) for v in b.all("map")]
        W = [_matrix(v, S.rank) for v in (b.get("W") or ("list", ()))[1]]
        length = _int(b.get("length"), "length") if b.get("length") is not None else None
        return Generated(S, maps, W=W, name=b.name, length=length)

    def _element(self, S: PToralGroup, v, b: Block, key: str):
        if v[0] == "perm":
            vec, cyc = (Fraction(0),) * S.rank, v[1]
        elif v[0] == "elt":
            vec, cyc = v[1], v[2]
            if len(vec) != S.rank:
                raise self._err(b, key, f"torus part needs {S.rank} coordinates")
        else:
            raise self._err(b, key, "expected a group element")
        deg = len(S.pi.labels[0]) if S.pi.labels and isinstance(S.pi.labels[0], tuple) else 0
        if _degree([cyc]) > max(deg, 1) and cyc:
            raise self._err(b, key, "permutation moves points outside the group")
        perm = _perm(cyc, deg)
        if perm not in S.pi.index:
            raise self._err(b, key, "permutation is not in the group")
        return S.elt(vec, S.pi.index[perm])

    def _morphism(self, S: PToralGroup, b: Block, v):
        if v[0] != "list" or not all(x[0] == "arrow" for x in v[1]):
            raise self._err(b, "map", "map must be a list of arrows x -> y")
        images = {self._element(S, x[1], b, "map"): self._element(S, x[2], b, "map") for x in v[1]}
        P = S.closure(list(images))
        try:
            phi = morphism_from_images(S, P, images)
        except ValueError as e:
            raise self._err(b, "map", str(e)) from None
        if not phi.is_homomorphism() or not phi.is_injective():
            raise self._err(b, "map", "map is not an injective homomorphism")
        return phi

    # families and pairs ---------------------------------------------------------------
    def _build_family(self, b: Block):
        F = self.get(b.get("fusion")[1])
        sel = b.get("select", ("name", "all"))[1]
        e = _int(b.get("exponent"), "exponent") if b.get("exponent") is not None else get_bounds().torsion_exponent
        torus = bool(_int(b.get("torus", ("int", 1)), "torus"))
        fam = subgroup_family(F, e, torus)
        if sel == "all":
            return fam
        if sel == "centric":
            return [P for P in fam if is_centric(F, P)]
        raise self._err(b, "select", f"unknown selection {sel!r}; use all or centric")

    def _build_pair(self, b: Block):
        from ..extend import canonical_pair_from_group_extension

        G = self.get(b.get("big")[1])
        N = self.subgroup_ids(G, b.get("normal")[1], b, "normal")
        if not G.is_normal(N):
            raise self._err(b, "normal", f"{b.get('normal')[1]} is not normal in {G.name}")
        p = _int(b.get("p"), "p")
        return canonical_pair_from_group_extension(G, N, p)


def subgroup_family(F: FusionSystem, exponent: int, torus: bool = True) -> List:
    """Every subgroup for finite S, else the truncated family at the given exponent."""
    if F.S.rank == 0:
        return F.all_subgroups()
    return truncated_family(F.S, exponent, torus)


def _matrix(v, rank: int):
    """A matrix given as a list of rows, or flat in row-major order."""
    if v[0] != "list":
        raise ValueError("matrix must be a bracketed list")
    items = v[1]
    if items and all(x[0] == "list" for x in items):
        rows = [tuple(_int(y, "matrix entry") for y in x[1]) for x in items]
    else:
        flat = [_int(y, "matrix entry") for y in items]
        if len(flat) != rank * rank:
            raise ValueError(f"matrix needs {rank * rank} entries")
        rows = [tuple(flat[i * rank:(i + 1) * rank]) for i in range(rank)]
    if len(rows) != rank or any(len(r) != rank for r in rows):
        raise ValueError(f"matrix must be {rank}x{rank}")
    return tuple(rows)


def _prime_of(n: int) -> Optional[int]:
    if n == 1:
        return None
    p = next(d for d in range(2, n + 1) if n % d == 0)
    while n % p == 0:
        n //= p
    return p if n == 1 else None

