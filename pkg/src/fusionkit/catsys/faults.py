"""Single-entry corruptions of a transporter system, for exercising the checkers.

Each injector returns a damaged copy together with the axiom that should
report it.
"""

from __future__ import annotations

from typing import Callable, Dict, List, Sequence, Tuple

from .category import FiniteCategory
from .transporter import TransporterSystem


def _clone(T: TransporterSystem, cat: FiniteCategory = None, eps=None, rho=None) -> TransporterSystem:
    cls = type(T)
    return cls(cat or T.cat.copy(), T.F, T.objs,
               eps if eps is not None else {k: dict(v) for k, v in T.eps.items()},
               list(rho) if rho is not None else list(T.rho), T.name)


def _nonidentity_auts(T: TransporterSystem) -> List[Tuple[int, List[int]]]:
    c = T.cat
    return [(a, [f for f in c.hom(a, a) if f != c.ident[a]]) for a in range(len(T.objs))]


def full_subsystem(T: TransporterSystem, keep: Sequence[int]) -> TransporterSystem:
    """The full subcategory on the objects ``keep`` with the induced structure."""
    c = T.cat
    keep = sorted(keep)
    new_obj = {a: i for i, a in enumerate(keep)}
    mors = [f for f in range(c.n_mor) if c.src[f] in new_obj and c.dst[f] in new_obj]
    new_mor = {f: i for i, f in enumerate(mors)}
    comp = {(new_mor[f], new_mor[g]): new_mor[h] for (f, g), h in c.comp.items() if f in new_mor and g in new_mor}
    cat = FiniteCategory([c.objects[a] for a in keep], [new_obj[c.src[f]] for f in mors],
                         [new_obj[c.dst[f]] for f in mors], comp, [new_mor[c.ident[a]] for a in keep],
                         [c.labels[f] for f in mors], c.name)
    eps = {(new_obj[a], new_obj[b]): {s: new_mor[f] for s, f in tab.items()}
           for (a, b), tab in T.eps.items() if a in new_obj and b in new_obj}
    return type(T)(cat, T.F, [T.objs[a] for a in keep], eps, [T.rho[f] for f in mors], T.name)


def fault_composition(T: TransporterSystem) -> Tuple[TransporterSystem, str]:
    """Redirect one composite of two non-identity morphisms."""
    c = T.cat
    for a, auts in _nonidentity_auts(T):
        for f in auts:
            for g in auts:
                h = c.comp[(f, g)]
                other = [x for x in c.hom(a, a) if x != h]
                if other:
                    cat = c.copy()
                    cat.comp[(f, g)] = other[0]
                    return _clone(T, cat=cat), "associativity"
    raise ValueError("no composite to corrupt")


def fault_identity(T: TransporterSystem) -> Tuple[TransporterSystem, str]:
    c = T.cat
    for a, auts in _nonidentity_auts(T):
        if auts:
            cat = c.copy()
            cat.comp[(c.ident[a], auts[0])] = c.ident[a]
            return _clone(T, cat=cat), "identity"
    raise ValueError("no morphism to corrupt")


def fault_rho_of_eps(T: TransporterSystem) -> Tuple[TransporterSystem, str]:
    """Give eps(g) the rho-value of a morphism with a different rho."""
    c = T.cat
    for (a, b), tab in sorted(T.eps.items()):
        if a != b:
            continue
        for s, f in sorted(tab.items()):
            for g in c.hom(a, a):
                if T.rho[g] != T.rho[f]:
                    rho = list(T.rho)
                    rho[f] = T.rho[g]
                    return _clone(T, rho=rho), "B"
    raise ValueError("no eps morphism to corrupt")


def fault_eps_collision(T: TransporterSystem) -> Tuple[TransporterSystem, str]:
    """Send two elements to the same eps morphism."""
    for (a, b), tab in sorted(T.eps.items()):
        items = sorted(tab.items())
        if len(items) > 1:
            eps = {k: dict(v) for k, v in T.eps.items()}
            eps[(a, b)][items[1][0]] = items[0][1]
            return _clone(T, eps=eps), "B"
    raise ValueError("no eps table with two entries")


def fault_axiom_C(T: TransporterSystem) -> Tuple[TransporterSystem, str]:
    """Corrupt phi o eps_P(g) for some non-inner phi."""
    c = T.cat
    S = T.S
    for a in range(len(T.objs)):
        inner = set(T.eps[(a, a)].values())
        for f in c.hom(a, a):
            if f in inner:
                continue
            for g in T.objs[a].elements():
                if g == S.identity:
                    continue
                e = T.eps[(a, a)][g]
                h = c.comp[(f, e)]
                other = [x for x in c.hom(a, a) if x != h]
                cat = c.copy()
                cat.comp[(f, e)] = other[0]
                return _clone(T, cat=cat), "C"
    raise ValueError("no non-inner automorphism")


def fault_rho_fibre(T: TransporterSystem) -> Tuple[TransporterSystem, str]:
    """Move one non-eps morphism into another rho fibre."""
    c = T.cat
    inner = {f for tab in T.eps.values() for f in tab.values()}
    for f in range(c.n_mor):
        if f in inner:
            continue
        for g in c.hom(c.src[f], c.dst[f]):
            if T.rho[g] != T.rho[f]:
                rho = list(T.rho)
                rho[f] = T.rho[g]
                return _clone(T, rho=rho), "A2"
    raise ValueError("no morphism outside the eps image")


def fault_drop_overgroup(T: TransporterSystem) -> Tuple[TransporterSystem, str]:
    """Remove the largest object, breaking closure under overgroups."""
    n = len(T.objs)
    if n < 2:
        raise ValueError("need two objects")
    top = max(range(n), key=lambda a: T.objs[a].sort_key())
    return full_subsystem(T, [a for a in range(n) if a != top]), "A1"


FAULTS: Dict[str, Callable[[TransporterSystem], Tuple[TransporterSystem, str]]] = {
    "composition": fault_composition,
    "identity": fault_identity,
    "rho_of_eps": fault_rho_of_eps,
    "eps_collision": fault_eps_collision,
    "axiom_C": fault_axiom_C,
    "rho_fibre": fault_rho_fibre,
    "drop_overgroup": fault_drop_overgroup,
}
