"""Integer matrices and linear algebra over the discrete torus (Z/p^inf)^n.

Matrices are tuples of row tuples of ints.  Torus vectors are tuples of
``Fraction`` values in [0, 1) whose denominators are powers of p.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

Mat = Tuple[Tuple[int, ...], ...]
Vec = Tuple[Fraction, ...]

ZERO = Fraction(0)


def mat(rows) -> Mat:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(m: int, n: int) -> Mat:
    return tuple(tuple(0 for _ in range(n)) for _ in range(m))


def transpose(a: Mat, ncols: Optional[int] = None) -> Mat:
    if not a:
        return tuple(() for _ in range(ncols or 0))
    return tuple(tuple(row[j] for row in a) for j in range(len(a[0])))


def matmul(a: Mat, b: Mat, inner: Optional[int] = None) -> Mat:
    """Product of an m x k and a k x n matrix (k may be zero)."""
    if not a:
        return ()
    n = len(b[0]) if b else 0
    k = len(a[0])
    return tuple(
        tuple(sum(a[i][t] * b[t][j] for t in range(k)) for j in range(n))
        for i in range(len(a))
    )


def matsub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def columns(a: Mat, n: Optional[int] = None) -> List[Tuple[int, ...]]:
    if not a:
        return []
    return [tuple(row[j] for row in a) for j in range(len(a[0]))]


def from_columns(cols: Sequence[Sequence[int]], r: int) -> Mat:
    return tuple(tuple(int(c[i]) for c in cols) for i in range(r))


def frac1(x: Fraction) -> Fraction:
    """Reduce a rational number modulo 1 into [0, 1)."""
    q = x.numerator // x.denominator
    return x - q if q else x


def vreduce(v: Sequence[Fraction]) -> Vec:
    return tuple(frac1(Fraction(x)) for x in v)


def vadd(a: Vec, b: Vec) -> Vec:
    return tuple(frac1(x + y) for x, y in zip(a, b))


def vsub(a: Vec, b: Vec) -> Vec:
    return tuple(frac1(x - y) for x, y in zip(a, b))


def vneg(a: Vec) -> Vec:
    return tuple(frac1(-x) for x in a)


def vscale(n: int, a: Vec) -> Vec:
    return tuple(frac1(n * x) for x in a)


def mv(m: Mat, v: Sequence[Fraction]) -> Vec:
    """Matrix times torus vector, reduced mod 1."""
    out = []
    for row in m:
        acc = ZERO
        for c, x in zip(row, v):
            # entries are mostly 0 and +-1; skip the Fraction products there
            if c == 1:
                acc = acc + x if acc else x
            elif c == -1:
                acc = acc - x
            elif c:
                acc = acc + c * x
        out.append(frac1(acc if isinstance(acc, Fraction) else Fraction(acc)))
    return tuple(out)


def mv_exact(m: Mat, v: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sum(c * x for c, x in zip(row, v)) for row in m)


def vzero(n: int) -> Vec:
    return tuple(ZERO for _ in range(n))


def is_zero(v: Vec) -> bool:
    return all(x == 0 for x in v)


def vorder_exp(v: Vec, p: int) -> int:
    """Exponent e with p^e the order of the torsion vector v."""
    e = 0
    for x in v:
        d = x.denominator
        k = 0
        while d > 1:
            if d % p:
                raise ValueError(f"denominator {x.denominator} is not a power of {p}")
            d //= p
            k += 1
        e = max(e, k)
    return e


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


@lru_cache(maxsize=4096)
def smith(m: Mat, nrows: int, ncols: int) -> Tuple[Tuple[int, ...], Mat, Mat]:
    """Return (diag, U, V) with U * M * V diagonal; U, V unimodular.

    ``diag`` lists the min(m, n) diagonal entries (zeros included).
    """
    if nrows == 0 or ncols == 0:
        return (), identity(nrows), identity(ncols)
    if all(x == 0 for row in m for x in row):
        return tuple(0 for _ in range(min(nrows, ncols))), identity(nrows), identity(ncols)
    d, u, v = smith_normal_decomp(Matrix(m))
    dd = tuple(int(d[i, i]) for i in range(min(nrows, ncols)))
    return dd, mat(u.tolist()), mat(v.tolist())


@lru_cache(maxsize=4096)
def inverse_unimodular(m: Mat) -> Mat:
    n = len(m)
    if n == 0:
        return ()
    inv = Matrix(m).inv()
    return mat(inv.tolist())


def det(m: Mat) -> int:
    if not m:
        return 1
    return int(Matrix(m).det())


def rank(m: Mat) -> int:
    if not m or not m[0]:
        return 0
    return int(Matrix(m).rank())


def hnf_basis(cols: Sequence[Sequence[int]], r: int) -> Tuple[Tuple[int, ...], ...]:
    """Canonical basis (echelon form) of the lattice spanned by ``cols``.

    Returns a tuple of basis vectors; equal lattices give equal output.
    """
    rows = [list(c) for c in cols if any(c)]
    basis: List[List[int]] = []
    col = 0
    while rows and col < r:
        nz = [row for row in rows if row[col] != 0]
        zr = [row for row in rows if row[col] == 0]
        while len(nz) > 1:
            nz.sort(key=lambda row: abs(row[col]))
            piv = nz[0]
            rest = []
            for row in nz[1:]:
                q = row[col] // piv[col]
                red = [a - q * b for a, b in zip(row, piv)]
                if red[col] != 0:
                    rest.append(red)
                elif any(red):
                    zr.append(red)
            nz = [piv] + rest
        if nz:
            piv = nz[0]
            if piv[col] < 0:
                piv = [-a for a in piv]
            basis.append(piv)
        rows = [row for row in zr if any(row)]
        col += 1
    # reduce entries above pivots
    pivcols = [next(i for i, a in enumerate(b) if a != 0) for b in basis]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            c = pivcols[j]
            q = basis[i][c] // basis[j][c]
            if q:
                basis[i] = [a - q * b for a, b in zip(basis[i], basis[j])]
    return tuple(tuple(b) for b in basis)


def saturate(cols: Sequence[Sequence[int]], r: int) -> Tuple[Tuple[int, ...], ...]:
    """Canonical basis of the saturation (Q-span intersected with Z^r)."""
    cols = [tuple(int(x) for x in c) for c in cols if any(c)]
    if not cols:
        return ()
    m = from_columns(cols, r)
    d, u, _ = smith(m, r, len(cols))
    k = sum(1 for x in d if x != 0)
    uinv = inverse_unimodular(u)
    sat = [tuple(uinv[i][j] for i in range(r)) for j in range(k)]
    return hnf_basis(sat, r)


def in_span(v: Sequence[int], basis: Sequence[Sequence[int]], r: int) -> bool:
    """Whether v lies in the rational span of a saturated basis."""
    if not any(v):
        return True
    if not basis:
        return False
    return rank(from_columns(list(basis) + [tuple(v)], r)) == len(basis)


class Frame:
    """Coordinates adapted to a saturated sublattice L of Z^r.

    ``U`` is unimodular with first s columns a basis of L; torus points are
    written in these coordinates via ``Uinv``.  The last r - s coordinates
    give the image in the quotient torus T / (L tensor Z/p^inf).
    """

    __slots__ = ("r", "s", "lattice", "U", "Uinv", "basis", "proj", "dproj", "lift_m")

    def __init__(self, lattice: Tuple[Tuple[int, ...], ...], r: int):
        self.r = r
        self.lattice = lattice
        self.s = len(lattice)
        if self.s == 0:
            self.U = identity(r)
            self.Uinv = identity(r)
        else:
            m = from_columns(lattice, r)
            d, u, v = smith(m, r, self.s)
            if any(abs(x) != 1 for x in d):
                raise ValueError("lattice is not saturated")
            self.Uinv = u
            self.U = inverse_unimodular(u)
        self.basis = [tuple(self.U[i][j] for i in range(r)) for j in range(self.s)]
        self.proj = self.Uinv[self.s:]
        self.dproj = self.Uinv[: self.s]
        self.lift_m = tuple(tuple(self.U[i][j] for j in range(self.s, r)) for i in range(r))

    def key(self, t: Vec) -> Vec:
        return mv(self.proj, t)

    def dcoords(self, t: Vec) -> Vec:
        return mv(self.dproj, t)

    def lift(self, k: Vec) -> Vec:
        return mv(self.lift_m, k) if self.r else ()

    def embed(self, c: Sequence[Fraction]) -> Vec:
        """Torus point with D-coordinates c (an element of D)."""
        if not self.s:
            return vzero(self.r)
        b = from_columns(self.basis, self.r)
        return mv(b, c)

    def int_coords(self, v: Sequence[int]) -> Tuple[int, ...]:
        """Integer D-coordinates of a lattice vector of L."""
        full = mv_exact(self.Uinv, v)
        if any(full[self.s:]):
            raise ValueError("vector not in lattice")
        return tuple(full[: self.s])

    def contains_vec(self, v: Sequence[int]) -> bool:
        return not any(mv_exact(self.proj, v))


_frames: dict = {}


def frame_for(lattice: Tuple[Tuple[int, ...], ...], r: int) -> Frame:
    key = (lattice, r)
    f = _frames.get(key)
    if f is None:
        f = Frame(lattice, r)
        _frames[key] = f
    return f


def solve_mod1(n: Mat, b: Sequence[Fraction], p: int, ncols: int):
    """Solve N y = b over (Z/p^inf)^ncols.

    Returns ``None`` when unsolvable, else ``(y0, div, fin)`` where the full
    solution set is y0 + span(div) (tensor Z/p^inf) + <fin>; ``div`` is a
    saturated integer basis and ``fin`` a list of torsion generators.
    """
    m = len(n)
    if ncols == 0:
        return ((), (), []) if all(frac1(Fraction(x)) == 0 for x in b) else None
    if m == 0:
        return vzero(ncols), tuple(tuple(1 if i == j else 0 for i in range(ncols)) for j in range(ncols)), []
    d, u, v = smith(n, m, ncols)
    c = mv(u, b)
    z = [ZERO] * ncols
    div_idx = []
    fin = []
    for i in range(m):
        di = d[i] if i < len(d) else 0
        if di == 0:
            if c[i] != 0:
                return None
            continue
    for i in range(ncols):
        di = d[i] if i < len(d) and i < m else 0
        if di == 0:
            div_idx.append(i)
            continue
        a = vp(di, p)
        unit = di // (p ** a)
        e = vorder_exp((c[i],), p)
        mod = p ** (e + a)
        inv = pow(unit % mod, -1, mod) if mod > 1 else 0
        z[i] = frac1(Fraction(inv) * c[i] / (p ** a))
        if a > 0:
            g = [ZERO] * ncols
            g[i] = Fraction(1, p ** a)
            fin.append(mv(v, g))
    y0 = mv(v, z)
    div = saturate([tuple(v[r][i] for r in range(ncols)) for i in div_idx], ncols)
    return y0, div, fin
