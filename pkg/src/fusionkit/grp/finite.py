"""Finite groups stored by full multiplication table."""

from __future__ import annotations

import re
from collections import deque
from typing import Callable, Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from ..bounds import BoundExceeded, get_bounds

Perm = Tuple[int, ...]


def parse_cycles(text: str, degree: Optional[int] = None) -> Perm:
    """Parse cycle notation with 1-based points, e.g. ``(1 2 3)(4 5)``."""
    text = text.strip()
    cycles = re.findall(r"\(([^()]*)\)", text)
    if re.sub(r"\([^()]*\)", "", text).strip():
        raise ValueError(f"bad cycle notation: {text!r}")
    pts = []
    parsed = []
    for c in cycles:
        items = [int(x) for x in re.split(r"[\s,]+", c.strip()) if x]
        if len(set(items)) != len(items) or any(x < 1 for x in items):
            raise ValueError(f"bad cycle: ({c})")
        parsed.append(items)
        pts.extend(items)
    n = max(pts + [degree or 0])
    img = list(range(n))
    for items in parsed:
        for a, b in zip(items, items[1:] + items[:1]):
            img[a - 1] = b - 1
    return tuple(img)


def pad(p: Perm, n: int) -> Perm:
    return tuple(p) + tuple(range(len(p), n))


def perm_mul(a: Perm, b: Perm) -> Perm:
    """Composite a*b: apply b first, then a."""
    return tuple(a[i] for i in b)


def cycles_str(p: Perm) -> str:
    seen = set()
    out = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = p[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = p[j]
        out.append("(" + " ".join(str(x + 1) for x in cyc) + ")")
    return "".join(out) or "()"


class FiniteGroup:
    """Group on ids 0..n-1 with a multiplication table; id 0 is the identity.

    ``labels`` keeps the original objects (permutations or anything
    hashable) so results can be rendered and mapped back.
    """

    def __init__(self, labels: List[Hashable], table: List[List[int]], gens: Sequence[int], name: str = ""):
        self.labels = labels
        self.table = table
        self.order = len(labels)
        self.gens = tuple(gens)
        self.name = name
        self.index = {lab: i for i, lab in enumerate(labels)}
        self.inverse = [0] * self.order
        for a in range(self.order):
            row = table[a]
            for b in range(self.order):
                if row[b] == 0:
                    self.inverse[a] = b
                    break
        self._cache: Dict = {}

    # construction -------------------------------------------------------
    @classmethod
    def from_closure(cls, gens: Sequence[Hashable], mul: Callable, identity: Hashable,
                     name: str = "", bound: Optional[int] = None) -> "FiniteGroup":
        """Breadth-first closure of ``gens`` under ``mul``.

        Elements are numbered in discovery order: identity first, then words
        in the generators, generators tried in the given order.
        """
        bound = bound or get_bounds().max_group_order
        labels = [identity]
        index = {identity: 0}
        queue = deque([identity])
        gens = list(gens)
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                if y not in index:
                    index[y] = len(labels)
                    labels.append(y)
                    if len(labels) > bound:
                        raise BoundExceeded(f"group order exceeds {bound}")
                    queue.append(y)
        n = len(labels)
        table = [[index[mul(a, b)] for b in labels] for a in labels]
        gen_ids = [index[g] for g in gens]
        return cls(labels, table, gen_ids, name)

    @classmethod
    def from_perms(cls, perms: Sequence[Perm], name: str = "", degree: Optional[int] = None) -> "FiniteGroup":
        n = max([len(p) for p in perms] + [degree or 0, 1])
        perms = [pad(p, n) for p in perms]
        return cls.from_closure(perms, perm_mul, tuple(range(n)), name)

    @classmethod
    def from_cycles(cls, gens: Sequence[str], name: str = "", degree: Optional[int] = None) -> "FiniteGroup":
        return cls.from_perms([parse_cycles(g, degree) for g in gens], name, degree)

    @classmethod
    def cyclic(cls, n: int, name: str = "") -> "FiniteGroup":
        return cls.from_closure([1 % n], lambda a, b: (a + b) % n, 0, name or f"C{n}")

    # arithmetic ----------------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """g x g^-1."""
        return self.table[self.table[g][x]][self.inverse[g]]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inverse[a], -n
        r = 0
        while n:
            if n & 1:
                r = self.table[r][a]
            a = self.table[a][a]
            n >>= 1
        return r

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.table[x][a]
            k += 1
        return k

    def elements(self) -> range:
        return range(self.order)

    def label(self, a: int) -> str:
        lab = self.labels[a]
        if isinstance(lab, tuple) and sorted(lab) == list(range(len(lab))):
            return cycles_str(lab)
        return str(lab)

    def check_axioms(self, exhaustive: bool = True) -> bool:
        n = self.order
        rng = range(n)
        for a in rng:
            if self.table[0][a] != a or self.table[a][0] != a:
                return False
            if self.table[a][self.inverse[a]] != 0 or self.table[self.inverse[a]][a] != 0:
                return False
        triples = ((a, b, c) for a in rng for b in rng for c in rng) if exhaustive else \
            ((a, (a * 7 + 3) % n, (a * 13 + 5) % n) for a in rng)
        t = self.table
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                return False
        return True

    # subgroups -----------------------------------------------------------
    def closure(self, gens: Iterable[int]) -> FrozenSet[int]:
        gens = [g for g in gens if g != 0]
        seen = {0}
        queue = deque([0])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def is_subgroup(self, h: Iterable[int]) -> bool:
        h = frozenset(h)
        if 0 not in h:
            return False
        return all(self.table[a][self.inverse[b]] in h for a in h for b in h)

    def conj_set(self, g: int, h: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.conj(g, x) for x in h)

    def normalizer(self, h: FrozenSet[int], within: Optional[Iterable[int]] = None) -> FrozenSet[int]:
        dom = self.elements() if within is None else within
        return frozenset(g for g in dom if self.conj_set(g, h) == h)

    def centralizer(self, h: Iterable[int], within: Optional[Iterable[int]] = None) -> FrozenSet[int]:
        h = list(h)
        dom = self.elements() if within is None else within
        return frozenset(g for g in dom if all(self.table[g][x] == self.table[x][g] for x in h))

    def center(self, h: Optional[FrozenSet[int]] = None) -> FrozenSet[int]:
        h = frozenset(self.elements()) if h is None else h
        return self.centralizer(h, within=h)

    def transporter(self, a: FrozenSet[int], b: FrozenSet[int], within: Optional[Iterable[int]] = None) -> List[int]:
        dom = self.elements() if within is None else within
        return [g for g in dom if self.conj_set(g, a) <= b]

    def subgroups(self, within: Optional[FrozenSet[int]] = None) -> List[FrozenSet[int]]:
        """All subgroups of ``within`` (default: the whole group)."""
        key = ("subgroups", within)
        if key in self._cache:
            return self._cache[key]
        top = frozenset(self.elements()) if within is None else within
        cyclic = {self.closure([g]) for g in top}
        subs = {frozenset([0])}
        frontier = [frozenset([0])]
        while frontier:
            nxt = []
            for h in frontier:
                for c in cyclic:
                    if c <= h:
                        continue
                    k = self.closure(list(h) + list(c))
                    if k not in subs:
                        subs.add(k)
                        nxt.append(k)
            frontier = nxt
        out = sorted(subs, key=lambda s: (len(s), sorted(s)))
        self._cache[key] = out
        return out

    def is_normal(self, h: FrozenSet[int], within: Optional[Iterable[int]] = None) -> bool:
        dom = self.elements() if within is None else within
        return all(self.conj_set(g, h) == h for g in dom)

    def p_elements(self, h: Iterable[int], p: int) -> List[int]:
        return [x for x in h if is_p_power(self.element_order(x), p)]

    def sylow(self, p: int, containing: Optional[FrozenSet[int]] = None,
              within: Optional[FrozenSet[int]] = None) -> FrozenSet[int]:
        """A Sylow p-subgroup of ``within`` containing the p-subgroup ``containing``.

        Grows the p-subgroup one step at a time inside its normalizer, always
        picking the smallest eligible element id, so the result is
        deterministic.
        """
        top = frozenset(self.elements()) if within is None else within
        target = p_part(len(top), p)
        cur = frozenset([0]) if containing is None else frozenset(containing)
        while len(cur) < target:
            norm = self.normalizer(cur, within=sorted(top))
            grown = None
            for x in sorted(norm):
                if x in cur:
                    continue
                if self.pow(x, p) in cur:
                    grown = self.closure(list(cur) + [x])
                    break
            if grown is None:
                raise ValueError("no p-element to extend by (not a p-subgroup?)")
            cur = grown
        return cur

    def op(self, p: int, h: Optional[FrozenSet[int]] = None) -> FrozenSet[int]:
        """O_p: the largest normal p-subgroup of h."""
        h = frozenset(self.elements()) if h is None else h
        best = frozenset([0])
        for k in self.subgroups(h):
            if is_p_power(len(k), p) and len(k) > len(best) and self.is_normal(k, within=h):
                best = k
        # normal p-subgroups generate a normal p-subgroup; the max is unique
        return best

    def op_prime(self, p: int, h: FrozenSet[int]) -> FrozenSet[int]:
        """Largest normal subgroup of h of order prime to p (h assumed small)."""
        best = frozenset([0])
        for k in self.subgroups(h):
            if len(k) % p and len(k) > len(best) and self.is_normal(k, within=h):
                best = k
        return best

    def cosets(self, h: FrozenSet[int], side: str = "left") -> List[FrozenSet[int]]:
        seen = set()
        out = []
        for g in self.elements():
            if g in seen:
                continue
            c = frozenset(self.table[g][x] for x in h) if side == "left" else frozenset(self.table[x][g] for x in h)
            seen |= c
            out.append(c)
        return out

    def quotient(self, n: FrozenSet[int], name: str = "") -> Tuple["FiniteGroup", List[int]]:
        """G/N as a new FiniteGroup plus the projection as an id list."""
        cos = self.cosets(n)
        which = {}
        for i, c in enumerate(cos):
            for x in c:
                which[x] = i
        reps = [min(c) for c in cos]
        labels = [tuple(sorted(c)) for c in cos]
        order = sorted(range(len(cos)), key=lambda i: reps[i])
        relabel = {old: new for new, old in enumerate(order)}
        labels = [labels[i] for i in order]
        reps = [reps[i] for i in order]
        table = [[relabel[which[self.table[a][b]]] for b in reps] for a in reps]
        proj = [relabel[which[x]] for x in self.elements()]
        gens = sorted({proj[g] for g in self.gens} - {0})
        return FiniteGroup(labels, table, gens, name), proj

    def subgroup_group(self, h: FrozenSet[int], name: str = "") -> Tuple["FiniteGroup", List[int]]:
        """The subgroup h as its own FiniteGroup plus the embedding (new id -> old id)."""
        elems = sorted(h)
        idx = {x: i for i, x in enumerate(elems)}
        table = [[idx[self.table[a][b]] for b in elems] for a in elems]
        labels = [self.labels[x] for x in elems]
        gens = minimal_generators(self, h)
        return FiniteGroup(labels, table, [idx[g] for g in gens], name), elems

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in self.elements() for b in self.elements())


def minimal_generators(g: FiniteGroup, h: FrozenSet[int]) -> List[int]:
    """Greedy generating list: smallest ids first, skipping redundant ones."""
    gens: List[int] = []
    cur = frozenset([0])
    for x in sorted(h):
        if x not in cur:
            gens.append(x)
            cur = g.closure(gens)
            if cur == h:
                break
    return gens


def is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def enumerate_elements(gens: Sequence[str], name: str = "", degree: Optional[int] = None) -> FiniteGroup:
    """Build a permutation group from cycle-notation generators."""
    if not gens:
        return FiniteGroup([tuple(range(degree or 1))], [[0]], [], name)
    return FiniteGroup.from_cycles(gens, name, degree)


def group_hom_images(src: FiniteGroup, dst: FiniteGroup, gen_images: Dict[int, int]) -> Optional[List[int]]:
    """Extend generator images to a homomorphism, or None if inconsistent."""
    img = {0: 0}
    queue = deque([0])
    gens = list(gen_images)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = src.table[x][g]
            val = dst.table[img[x]][gen_images[g]]
            if y in img:
                if img[y] != val:
                    return None
            else:
                img[y] = val
                queue.append(y)
    if len(img) != src.order:
        return None
    out = [img[x] for x in src.elements()]
    for a in src.elements():
        for b in src.gens or gens:
            if out[src.table[a][b]] != dst.table[out[a]][out[b]]:
                return None
    return out


def all_homomorphisms(src: FiniteGroup, dst: FiniteGroup) -> List[List[int]]:
    """Brute force over images of src's generators."""
    gens = list(src.gens) or []
    out = []

    def rec(i, assign):
        if i == len(gens):
            h = group_hom_images(src, dst, dict(assign))
            if h is not None and h not in out:
                out.append(h)
            return
        g = gens[i]
        og = src.element_order(g)
        for y in dst.elements():
            if og % dst.element_order(y) == 0:
                assign[g] = y
                rec(i + 1, assign)
        assign.pop(g, None)

    if not gens:
        return [[0] * src.order]
    rec(0, {})
    return out


def automorphisms(g: FiniteGroup) -> List[List[int]]:
    return [h for h in all_homomorphisms(g, g) if len(set(h)) == g.order]
