"""The text format for fixtures: named blocks of ``key=value`` items.

Example::

    # dihedral Sylow subgroup of S4
    group S4 { perm (1 2 3 4); perm (1 2) }
    group D8 { perm (1 2 3 4); perm (1 3) }
    fusion F { ambient=S4 sylow=D8 }

Values are integers, fractions ``a/b``, names, permutations in cycle
notation, elements ``<v1,...>perm`` of a p-toral group, bracketed lists and
arrows ``x -> y`` inside lists.  Items are separated by whitespace, ``;`` or
newlines; ``#`` starts a comment.  A block may only refer to blocks defined
above it, so references never form cycles.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

KINDS = ("group", "ptoral", "fusion", "family", "pair")

# key -> kinds a reference in that key may point to, per block kind
REFERENCES: Dict[str, Dict[str, Tuple[str, ...]]] = {
    "group": {},
    "ptoral": {},
    "fusion": {"ambient": ("group",), "sylow": ("group",), "over": ("group", "ptoral")},
    "family": {"fusion": ("fusion",)},
    "pair": {"big": ("group",), "normal": ("group",)},
}
REPEATABLE = {"perm", "map"}
ALLOWED = {
    "group": {"perm", "degree"},
    "ptoral": {"p", "rank", "pi", "act"},
    "fusion": {"ambient", "sylow", "over", "p", "map", "W", "length"},
    "family": {"fusion", "select", "exponent", "torus"},
    "pair": {"big", "normal", "p"},
}


class SpecError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, source: str = "<spec>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


# values are small tagged tuples so documents compare structurally
# ("int", n) ("frac", Fraction) ("name", s) ("perm", cycles) ("elt", vec, cycles)
# ("list", items) ("arrow", a, b)

@dataclass
class Block:
    kind: str
    name: str
    items: Tuple[Tuple[str, tuple], ...]
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)
    pos: Dict[str, Tuple[int, int]] = field(default_factory=dict, compare=False, repr=False)

    def get(self, key: str, default=None):
        for k, v in self.items:
            if k == key:
                return v
        return default

    def all(self, key: str) -> List[tuple]:
        return [v for k, v in self.items if k == key]


@dataclass
class SpecDocument:
    blocks: Tuple[Block, ...] = ()
    source: str = field(default="<spec>", compare=False)

    def __getitem__(self, name: str) -> Block:
        for b in self.blocks:
            if b.name == name:
                return b
        raise KeyError(name)

    def names(self, kind: Optional[str] = None) -> List[str]:
        return [b.name for b in self.blocks if kind is None or b.kind == kind]

    def __len__(self) -> int:
        return len(self.blocks)


# tokenizer -------------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<comment>\#[^\n]*) | (?P<nl>\n)
  | (?P<arrow>->)
  | (?P<num>-?\d+(?:/\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.']*)
  | (?P<punct>[{}()\[\]<>=;,])
""", re.VERBOSE)


@dataclass
class Tok:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str, source: str = "<spec>") -> List[Tok]:
    out = []
    line, start = 1, 0
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if not m:
            raise SpecError(f"unexpected character {text[i]!r}", line, i - start + 1, source)
        kind = m.lastgroup
        col = i - start + 1
        if kind == "nl":
            out.append(Tok("nl", "\n", line, col))
            line += 1
            start = m.end()
        elif kind == "punct":
            out.append(Tok(m.group(), m.group(), line, col))
        elif kind not in ("ws", "comment"):
            out.append(Tok(kind, m.group(), line, col))
        i = m.end()
    out.append(Tok("eof", "", line, i - start + 1))
    return out


class _Parser:
    def __init__(self, text: str, source: str):
        self.toks = tokenize(text, source)
        self.i = 0
        self.source = source

    def err(self, msg: str, tok: Optional[Tok] = None):
        tok = tok or self.peek()
        return SpecError(msg, tok.line, tok.col, self.source)

    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str) -> Tok:
        t = self.next()
        if t.kind != kind:
            raise self.err(f"expected {kind!r}, found {t.text or t.kind!r}", t)
        return t

    def skip_nl(self, semis: bool = False) -> None:
        while self.peek().kind == "nl" or (semis and self.peek().kind == ";"):
            self.i += 1

    # grammar ------------------------------------------------------------------------
    def document(self) -> SpecDocument:
        blocks: List[Block] = []
        seen: Dict[str, Block] = {}
        self.skip_nl()
        while self.peek().kind != "eof":
            b = self.block()
            if b.name in seen:
                raise SpecError(f"duplicate block name {b.name!r}", b.line, b.col, self.source)
            self.resolve(b, seen)
            seen[b.name] = b
            blocks.append(b)
            self.skip_nl()
        return SpecDocument(tuple(blocks), self.source)

    def block(self) -> Block:
        kt = self.expect("ident")
        if kt.text not in KINDS:
            raise self.err(f"unknown block kind {kt.text!r}; expected one of {', '.join(KINDS)}", kt)
        nt = self.expect("ident")
        self.skip_nl()
        self.expect("{")
        items = []
        pos: Dict[str, Tuple[int, int]] = {}
        while True:
            self.skip_nl(semis=True)
            t = self.peek()
            if t.kind == "}":
                self.next()
                break
            if t.kind == "eof":
                raise self.err(f"unterminated block {nt.text!r}", t)
            key = self.expect("ident")
            if key.text not in ALLOWED[kt.text]:
                raise self.err(f"unknown key {key.text!r} in {kt.text} block", key)
            if self.peek().kind == "=":
                self.next()
            vt = self.peek()
            val = self.value()
            if key.text in pos and key.text not in REPEATABLE:
                raise self.err(f"duplicate key {key.text!r}", key)
            pos.setdefault(key.text, (vt.line, vt.col))
            items.append((key.text, val))
        return Block(kt.text, nt.text, tuple(items), kt.line, kt.col, pos)

    def value(self) -> tuple:
        t = self.peek()
        if t.kind == "num":
            self.next()
            q = Fraction(t.text)
            return ("int", int(q)) if "/" not in t.text else ("frac", q)
        if t.kind == "ident":
            self.next()
            return ("name", t.text)
        if t.kind == "(":
            return ("perm", self.cycles())
        if t.kind == "<":
            return self.element()
        if t.kind == "[":
            return self.listval()
        raise self.err(f"expected a value, found {t.text or t.kind!r}", t)

    def cycles(self) -> Tuple[Tuple[int, ...], ...]:
        out = []
        while self.peek().kind == "(":
            self.next()
            pts = []
            while self.peek().kind == "num":
                tok = self.next()
                if "/" in tok.text or int(tok.text) < 1:
                    raise self.err("points must be positive integers", tok)
                if int(tok.text) in pts:
                    raise self.err("repeated point in a cycle", tok)
                pts.append(int(tok.text))
                if self.peek().kind == ",":
                    self.next()
            self.expect(")")
            if pts:
                out.append(tuple(pts))
        return tuple(out)

    def element(self) -> tuple:
        self.expect("<")
        vec = []
        while self.peek().kind == "num":
            vec.append(Fraction(self.next().text))
            if self.peek().kind == ",":
                self.next()
        self.expect(">")
        cyc = self.cycles() if self.peek().kind == "(" else ()
        return ("elt", tuple(vec), cyc)

    def listval(self) -> tuple:
        self.expect("[")
        items = []
        self.skip_nl()
        while self.peek().kind != "]":
            v = self.value()
            if self.peek().kind == "arrow":
                self.next()
                v = ("arrow", v, self.value())
            items.append(v)
            self.skip_nl()
            if self.peek().kind == ",":
                self.next()
                self.skip_nl()
            elif self.peek().kind != "]":
                raise self.err("expected ',' or ']'")
        self.next()
        return ("list", tuple(items))

    def resolve(self, b: Block, seen: Dict[str, Block]) -> None:
        for key, kinds in REFERENCES[b.kind].items():
            v = b.get(key)
            if v is None:
                continue
            line, col = b.pos[key]
            if v[0] != "name":
                raise SpecError(f"{key} must name a block", line, col, self.source)
            target = seen.get(v[1])
            if target is None:
                raise SpecError(f"undefined reference {v[1]!r}", line, col, self.source)
            if target.kind not in kinds:
                raise SpecError(f"{v[1]!r} is a {target.kind} block, expected {' or '.join(kinds)}",
                                line, col, self.source)


def parse_spec(text: str, source: str = "<spec>") -> SpecDocument:
    """Parse and resolve a spec; errors carry line and column."""
    return _Parser(text, source).document()


# rendering ---------------------------------------------------------------------------

def render_value(v: tuple) -> str:
    tag = v[0]
    if tag == "int":
        return str(v[1])
    if tag == "frac":
        return f"{v[1].numerator}/{v[1].denominator}"
    if tag == "name":
        return v[1]
    if tag == "perm":
        return render_cycles(v[1])
    if tag == "elt":
        vec = ",".join(str(q) for q in v[1])
        return f"<{vec}>" + (render_cycles(v[2]) if v[2] else "")
    if tag == "arrow":
        return f"{render_value(v[1])} -> {render_value(v[2])}"
    if tag == "list":
        return "[" + ", ".join(render_value(x) for x in v[1]) + "]"
    raise ValueError(f"unknown value tag {tag!r}")


def render_cycles(cyc) -> str:
    return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cyc) or "()"


def render(doc: SpecDocument) -> str:
    lines = []
    for b in doc.blocks:
        body = "; ".join(f"{k} {render_value(v)}" if k in REPEATABLE else f"{k}={render_value(v)}"
                         for k, v in b.items)
        lines.append(f"{b.kind} {b.name} {{ {body} }}" if body else f"{b.kind} {b.name} {{ }}")
    return "\n".join(lines) + ("\n" if lines else "")
