"""Finite categories stored as explicit composition tables.

Morphisms are integers 0..n-1.  ``comp[(f, g)]`` is f o g (g first) and is
defined exactly when ``dst[g] == src[f]``.  Nothing is recomputed, so every
check is a table scan and ids are stable across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

WITNESS_CAP = 5


@dataclass
class AxiomReport:
    """Per-axiom verdicts with a few witnesses each."""

    verdicts: Dict[str, bool] = field(default_factory=dict)
    witnesses: Dict[str, List[dict]] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def record(self, axiom: str, ok: bool, witness: Optional[dict] = None) -> None:
        self.verdicts[axiom] = self.verdicts.get(axiom, True) and ok
        if not ok and witness is not None:
            lst = self.witnesses.setdefault(axiom, [])
            if len(lst) < WITNESS_CAP:
                lst.append(witness)

    def passed(self, axiom: str) -> None:
        self.verdicts.setdefault(axiom, True)

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())

    def failed(self) -> List[str]:
        return [k for k, v in self.verdicts.items() if not v]

    def merge(self, other: "AxiomReport") -> "AxiomReport":
        for k, v in other.verdicts.items():
            self.verdicts[k] = self.verdicts.get(k, True) and v
        for k, ws in other.witnesses.items():
            lst = self.witnesses.setdefault(k, [])
            lst.extend(ws[:WITNESS_CAP - len(lst)])
        self.notes.extend(n for n in other.notes if n not in self.notes)
        return self

    def to_dict(self) -> dict:
        return {"ok": self.ok, "verdicts": dict(self.verdicts),
                "witnesses": {k: list(v) for k, v in sorted(self.witnesses.items())},
                "notes": list(self.notes)}


class FiniteCategory:
    """A small category: objects, morphisms with source and target, a composition table."""

    def __init__(self, objects: Sequence[Hashable], src: Sequence[int], dst: Sequence[int],
                 comp: Dict[Tuple[int, int], int], ident: Sequence[int],
                 labels: Optional[Sequence[Hashable]] = None, name: str = ""):
        self.objects = list(objects)
        self.src = list(src)
        self.dst = list(dst)
        self.comp = dict(comp)
        self.ident = list(ident)
        self.labels = list(labels) if labels is not None else list(range(len(self.src)))
        self.name = name
        self._reindex()

    def _reindex(self) -> None:
        self._hom: Dict[Tuple[int, int], List[int]] = {}
        self._out: Dict[int, List[int]] = {a: [] for a in range(len(self.objects))}
        self._in: Dict[int, List[int]] = {a: [] for a in range(len(self.objects))}
        for f, (a, b) in enumerate(zip(self.src, self.dst)):
            self._hom.setdefault((a, b), []).append(f)
            self._out[a].append(f)
            self._in[b].append(f)
        self.label_index = {lab: i for i, lab in enumerate(self.labels)}

    @property
    def n_mor(self) -> int:
        return len(self.src)

    def hom(self, a: int, b: int) -> List[int]:
        return self._hom.get((a, b), [])

    def out_of(self, a: int) -> List[int]:
        return self._out[a]

    def into(self, b: int) -> List[int]:
        return self._in[b]

    def compose(self, f: int, g: int) -> int:
        """f o g."""
        try:
            return self.comp[(f, g)]
        except KeyError:
            raise ValueError(f"morphisms {f} and {g} are not composable") from None

    def compose_chain(self, *fs: int) -> int:
        """f1 o f2 o ... o fk."""
        out = fs[-1]
        for f in reversed(fs[:-1]):
            out = self.compose(f, out)
        return out

    def is_iso(self, f: int) -> bool:
        return self.inverse(f) is not None

    def inverse(self, f: int) -> Optional[int]:
        a, b = self.src[f], self.dst[f]
        for g in self.hom(b, a):
            if self.comp.get((g, f)) == self.ident[a] and self.comp.get((f, g)) == self.ident[b]:
                return g
        return None

    def copy(self) -> "FiniteCategory":
        return FiniteCategory(self.objects, self.src, self.dst, self.comp, self.ident, self.labels, self.name)

    # checks -------------------------------------------------------------
    def check(self) -> AxiomReport:
        """Composition table closure, identity laws and associativity, exhaustively."""
        rep = AxiomReport()
        for ax in ("closure", "identity", "associativity"):
            rep.passed(ax)
        n = self.n_mor
        for a, i in enumerate(self.ident):
            if not (0 <= i < n) or self.src[i] != a or self.dst[i] != a:
                rep.record("identity", False, {"object": a, "identity": i})
        for f in range(n):
            for g in self.into(self.src[f]):
                h = self.comp.get((f, g))
                if h is None or not (0 <= h < n) or self.src[h] != self.src[g] or self.dst[h] != self.dst[f]:
                    rep.record("closure", False, {"f": f, "g": g, "fg": h})
        for (f, g) in self.comp:
            if self.dst[g] != self.src[f]:
                rep.record("closure", False, {"f": f, "g": g, "reason": "entry for a non-composable pair"})
        if not rep.verdicts["closure"]:
            return rep
        for f in range(n):
            a, b = self.src[f], self.dst[f]
            if self.comp[(f, self.ident[a])] != f:
                rep.record("identity", False, {"f": f, "side": "right"})
            if self.comp[(self.ident[b], f)] != f:
                rep.record("identity", False, {"f": f, "side": "left"})
        comp = self.comp
        for g in range(n):
            for f in self.out_of(self.dst[g]):
                fg = comp[(f, g)]
                for h in self.out_of(self.dst[f]):
                    if comp[(h, fg)] != comp[(comp[(h, f)], g)]:
                        rep.record("associativity", False, {"h": h, "f": f, "g": g})
        return rep

    def check_mono_epi(self) -> AxiomReport:
        """Left and right cancellation over all composable pairs."""
        rep = AxiomReport()
        rep.passed("mono")
        rep.passed("epi")
        for f in range(self.n_mor):
            seen: Dict[Tuple[int, int], int] = {}
            for g in self.into(self.src[f]):
                key = (self.src[g], self.comp[(f, g)])
                if key in seen:
                    rep.record("mono", False, {"f": f, "g1": seen[key], "g2": g})
                seen[key] = g
            seen = {}
            for h in self.out_of(self.dst[f]):
                key = (self.dst[h], self.comp[(h, f)])
                if key in seen:
                    rep.record("epi", False, {"f": f, "h1": seen[key], "h2": h})
                seen[key] = h
        return rep

    # output -------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "name": self.name,
            "objects": [str(o) for o in self.objects],
            "morphisms": [[f, self.src[f], self.dst[f]] for f in range(self.n_mor)],
            "identities": list(self.ident),
            "composition": [[f, g, h] for (f, g), h in sorted(self.comp.items())],
        }


class CatFunctor:
    """A functor between finite categories, given on object and morphism ids."""

    __slots__ = ("obj", "mor", "_hash")

    def __init__(self, obj: Sequence[int], mor: Sequence[int]):
        self.obj = tuple(obj)
        self.mor = tuple(mor)
        self._hash = hash((self.obj, self.mor))

    def __eq__(self, other) -> bool:
        return isinstance(other, CatFunctor) and self.obj == other.obj and self.mor == other.mor

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"CatFunctor(obj={self.obj})"

    @classmethod
    def identity(cls, C: FiniteCategory) -> "CatFunctor":
        return cls(range(len(C.objects)), range(C.n_mor))

    def compose(self, first: "CatFunctor") -> "CatFunctor":
        """self o first."""
        return CatFunctor([self.obj[a] for a in first.obj], [self.mor[f] for f in first.mor])

    def inverse(self) -> "CatFunctor":
        obj = [0] * len(self.obj)
        for a, b in enumerate(self.obj):
            obj[b] = a
        mor = [0] * len(self.mor)
        for f, g in enumerate(self.mor):
            mor[g] = f
        return CatFunctor(obj, mor)

    def is_functor(self, C: FiniteCategory, D: Optional[FiniteCategory] = None) -> bool:
        D = D or C
        for f in range(C.n_mor):
            g = self.mor[f]
            if D.src[g] != self.obj[C.src[f]] or D.dst[g] != self.obj[C.dst[f]]:
                return False
        if any(self.mor[C.ident[a]] != D.ident[self.obj[a]] for a in range(len(C.objects))):
            return False
        return all(D.comp[(self.mor[f], self.mor[g])] == self.mor[h] for (f, g), h in C.comp.items())

    def is_bijective(self) -> bool:
        return len(set(self.obj)) == len(self.obj) and len(set(self.mor)) == len(self.mor)
