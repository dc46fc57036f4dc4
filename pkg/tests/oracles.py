"""Brute-force references on raw permutation tuples, independent of the package."""

from __future__ import annotations

from itertools import combinations
from typing import FrozenSet, Iterable, List, Tuple

Perm = Tuple[int, ...]


def cyc(text: str, n: int) -> Perm:
    """Cycle notation with 1-based points into a 0-based image tuple."""
    img = list(range(n))
    for block in text.replace(")", "|").replace("(", "").split("|"):
        pts = [int(x) - 1 for x in block.split()]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    return tuple(img)


def mul(a: Perm, b: Perm) -> Perm:
    """a after b."""
    return tuple(a[b[i]] for i in range(len(a)))


def inv(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, j in enumerate(a):
        out[j] = i
    return tuple(out)


def closure(gens: Iterable[Perm], n: int) -> FrozenSet[Perm]:
    e = tuple(range(n))
    seen = {e}
    frontier = [e]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def conj(g: Perm, H: Iterable[Perm]) -> FrozenSet[Perm]:
    gi = inv(g)
    return frozenset(mul(mul(g, h), gi) for h in H)


def subgroups(G: FrozenSet[Perm], n: int) -> List[FrozenSet[Perm]]:
    """All subgroups generated by at most two elements (every subgroup, for the groups used here)."""
    out = {closure([], n)}
    els = sorted(G)
    for a in els:
        out.add(closure([a], n))
    for a, b in combinations(els, 2):
        out.add(closure([a, b], n))
    return sorted(out, key=lambda H: (len(H), sorted(H)))


def centralizer(G, H) -> FrozenSet[Perm]:
    return frozenset(g for g in G if all(mul(g, h) == mul(h, g) for h in H))


def normalizer(G, H) -> FrozenSet[Perm]:
    H = frozenset(H)
    return frozenset(g for g in G if conj(g, H) == H)


def center(H) -> FrozenSet[Perm]:
    return centralizer(H, H)


def transporter_count(G, P, Q) -> int:
    Q = frozenset(Q)
    return sum(1 for g in G if conj(g, P) <= Q)


def g_classes(G, S, subs) -> List[List[FrozenSet[Perm]]]:
    """Partition subgroups of S by G-conjugacy."""
    left = list(subs)
    out = []
    while left:
        P = left.pop(0)
        cls = [P] + [Q for Q in left if len(Q) == len(P) and any(conj(g, P) == Q for g in G)]
        left = [Q for Q in left if Q not in cls]
        out.append(cls)
    return out


def is_centric(G, S, P) -> bool:
    for g in G:
        Q = conj(g, P)
        if Q <= S and centralizer(S, Q) != center(Q):
            return False
    return True


def _p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def is_radical(G, P, p: int, n: int) -> bool:
    """Out_G(P) = N_G(P)/P C_G(P) has no nontrivial normal p-subgroup."""
    N = normalizer(G, P)
    M = closure(list(P) + list(centralizer(G, P)), n)
    cands = {M}
    rest = sorted(N - M)
    for a in rest:
        cands.add(closure(list(M) + [a], n))
    for a, b in combinations(rest, 2):
        cands.add(closure(list(M) + [a, b], n))
    for X in cands:
        if X != M and _p_power(len(X) // len(M), p) and all(conj(g, X) == X for g in N):
            return False
    return True


def fully_normalized_s_classes(G, S, cls) -> int:
    """Number of S-classes among members of cls with maximal |N_S|."""
    best = max(len(normalizer(S, Q)) for Q in cls)
    fn = [Q for Q in cls if len(normalizer(S, Q)) == best]
    classes = []
    for Q in fn:
        if not any(any(conj(s, Q) == R for s in S) for R in classes):
            classes.append(Q)
    return len(classes)


# torus points --------------------------------------------------------------------

def torsion_kernel(M, p: int, e: int):
    """Points x in (1/p^e Z / Z)^r with M x = 0 mod 1, as numerator tuples over p^e."""
    from itertools import product

    q = p ** e
    r = len(M)
    out = []
    for x in product(range(q), repeat=r):
        if all(sum(M[i][j] * x[j] for j in range(r)) % q == 0 for i in range(r)):
            out.append(x)
    return out


# the infinite dihedral 2-group, elements (a, g) with a in Q/Z and g in {0, 1} ------------

def dmul(x, y):
    (a, g), (b, h) = x, y
    return ((a + (b if g == 0 else -b)) % 1, g ^ h)


def dinv(x):
    a, g = x
    return ((-a) % 1, 0) if g == 0 else x


def dclosure(gens):
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = dmul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def dbullet(P, level: int = 10):
    """Bullet of a finite subgroup of the dihedral group with W = {1, -1}.

    Returns ('finite', P) or ('torus', has_reflection) when the bullet is P.T.
    """
    from fractions import Fraction

    Pm = dclosure([dmul(x, x) for x in P])
    fixing = [w for w in (1, -1) if all((w * a) % 1 == a for a, _ in Pm)]
    q = 2 ** level
    fixed = [Fraction(k, q) for k in range(q) if all((w * Fraction(k, q)) % 1 == Fraction(k, q) for w in fixing)]
    if len(fixed) == q:
        return ("torus", any(g for _, g in P))
    return ("finite", frozenset(P))


def dconj_classes(subs, level: int):
    """S-conjugacy classes of finite subgroups, conjugating by T[2^level] and the reflection."""
    from fractions import Fraction

    q = 2 ** level
    conj_by = [(Fraction(k, q), 0) for k in range(q)] + [(0, 1)]

    def conj(g, P):
        gi = dinv(g)
        return frozenset(dmul(dmul(g, x), gi) for x in P)

    out = []
    seen = set()
    for P in subs:
        P = frozenset(P)
        if P not in seen:
            out.append(P)
            seen.update(conj(g, P) for g in conj_by)
    return out


def element_order(x: Perm) -> int:
    e = tuple(range(len(x)))
    k, y = 1, x
    while y != e:
        y = mul(x, y)
        k += 1
    return k


def op_prime_part(H, n: int, p: int) -> FrozenSet[Perm]:
    """O^p(H): the subgroup generated by elements of order prime to p."""
    return closure([x for x in H if element_order(x) % p != 0], n)


def linking_count(G, S, objs, n: int, p: int) -> int:
    """Sum over object pairs of |N_G(P, Q)| / |O^p(C_G(P))|."""
    total = 0
    for P in objs:
        k = len(op_prime_part(centralizer(G, P), n, p))
        for Q in objs:
            t = transporter_count(G, P, Q)
            assert t % k == 0
            total += t // k
    return total
