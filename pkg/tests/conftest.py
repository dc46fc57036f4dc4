from __future__ import annotations

import os
import sys
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from fusionkit.fusion import AmbientFinite, Generated  # noqa: E402
from fusionkit.grp import FiniteGroup, PToralGroup, infinite_dihedral, morphism_from_images  # noqa: E402
from fusionkit.grp.finite import pad, parse_cycles  # noqa: E402
from fusionkit.grp.ops import ambient_pgroup  # noqa: E402

# criterion number -> PASS/FAIL line, filled by test_acceptance
ACCEPTANCE: dict = {}

FIXTURES = os.path.join(os.path.dirname(__file__), "..", "src", "fusionkit", "fixtures")


def fixture_path(name: str) -> str:
    return os.path.normpath(os.path.join(FIXTURES, name))


def ids_of(G: FiniteGroup, cycles, deg: int):
    return G.closure([G.index[pad(parse_cycles(c, deg), deg)] for c in cycles])


def perms_of(S: PToralGroup, P) -> frozenset:
    """A subgroup of an ambient Sylow subgroup as a set of permutation tuples."""
    G = S.ambient
    return frozenset(G.labels[S.embed[x[1]]] for x in P.elements())


def perm_of(S: PToralGroup, x) -> tuple:
    return S.ambient.labels[S.embed[x[1]]]


class D8inS4:
    def __init__(self):
        self.G = FiniteGroup.from_cycles(["(1 2 3 4)", "(1 2)"], "S4", 4)
        self.syl = ids_of(self.G, ["(1 2 3 4)", "(1 3)"], 4)
        self.S = ambient_pgroup(self.G, 2, self.syl, "D8")
        self.F = AmbientFinite(self.S)
        self.subs = self.F.all_subgroups()

    def sub(self, text: str):
        return next(P for P in self.subs if P.describe() == text)


@pytest.fixture(scope="session")
def d8s4():
    return D8inS4()


class Z9System:
    def __init__(self):
        self.Z = PToralGroup.finite(FiniteGroup.cyclic(9, "Z9"), 3, "Z9")
        self.Z3 = self.Z.closure([((), 3)])
        self.inv3 = morphism_from_images(self.Z, self.Z3, {((), 3): ((), 6)})
        self.F = Generated(self.Z, [self.inv3], name="Z9")


@pytest.fixture(scope="session")
def z9():
    return Z9System()


class Dihedral:
    def __init__(self):
        S = infinite_dihedral(2)
        self.S = S
        self.z = ((Fraction(1, 2),), 0)
        self.s = ((Fraction(0),), 1)
        self.V = S.closure([self.z, self.s])
        self.tau = morphism_from_images(S, self.V, {self.z: self.s, self.s: S.mul(self.z, self.s)})
        self.SO3 = Generated(S, [self.tau], name="SO3")
        self.inner = Generated(S, [], W=[((-1,),)], name="inner")

    def tor(self, q: int):
        return self.S.closure([((Fraction(1, q),), 0)])


@pytest.fixture(scope="session")
def dinf():
    return Dihedral()


class A4inS4:
    def __init__(self):
        from fusionkit.extend import canonical_pair_from_group_extension

        self.G = FiniteGroup.from_cycles(["(1 2 3 4)", "(1 2)"], "S4", 4)
        self.N = ids_of(self.G, ["(1 2 3)", "(1 2)(3 4)"], 4)
        self.cp = canonical_pair_from_group_extension(self.G, self.N, 2)
        self.pair = self.cp.pair
        self._pipe = None
        self._tabs = None

    @property
    def pipeline(self):
        if self._pipe is None:
            from fusionkit.extend import extension_pipeline
            self._pipe = extension_pipeline(self.pair, S_ids=self.cp.S_ids)
        return self._pipe

    @property
    def tabs(self):
        if self._tabs is None:
            from fusionkit.simpl import aut_typ_tables
            self._tabs = aut_typ_tables(self.pair.L)
        return self._tabs


@pytest.fixture(scope="session")
def a4s4():
    return A4inS4()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
