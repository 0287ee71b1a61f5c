"""Formula syntax for the logic of stepwise removal.

Core constructors mirror the primitive language (atoms, nominals, top,
negation, disjunction, labelled diamonds, announcement, removal and the
existential modality).  Everything else is sugar kept in the tree until
``expand`` is called.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

DEFAULT_LABEL = "r"
KEYWORDS = {"T", "F", "E", "U", "D"}


class Formula:
    """Base class for all formula nodes."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


# -- core language ---------------------------------------------------------

@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Nominal(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Neg(Formula):
    sub: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Diamond(Formula):
    label: str
    sub: Formula


@dataclass(frozen=True)
class Announce(Formula):
    pre: Formula
    post: Formula


@dataclass(frozen=True)
class Remove(Formula):
    pre: Formula
    post: Formula


@dataclass(frozen=True)
class Exists(Formula):
    sub: Formula


# -- sugar -----------------------------------------------------------------

@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    label: str
    sub: Formula


@dataclass(frozen=True)
class AnnBox(Formula):
    pre: Formula
    post: Formula


@dataclass(frozen=True)
class RemBox(Formula):
    pre: Formula
    post: Formula


@dataclass(frozen=True)
class Univ(Formula):
    sub: Formula


@dataclass(frozen=True)
class Diff(Formula):
    """``D f``: f holds at some other point."""

    sub: Formula


@dataclass(frozen=True)
class At(Formula):
    nominal: str
    sub: Formula


CORE_TYPES = (Prop, Nominal, Top, Neg, Or, Diamond, Announce, Remove, Exists)
SUGAR_TYPES = (Bot, And, Implies, Iff, Box, AnnBox, RemBox, Univ, Diff, At)

TOP = Top()
BOT = Bot()


def dia(sub: Formula, label: str = DEFAULT_LABEL) -> Diamond:
    return Diamond(label, sub)


def box(sub: Formula, label: str = DEFAULT_LABEL) -> Box:
    return Box(label, sub)


def conj(parts: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is top."""
    out: Optional[Formula] = None
    for p in parts:
        out = p if out is None else And(out, p)
    return TOP if out is None else out


def disj(parts: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is bottom."""
    out: Optional[Formula] = None
    for p in parts:
        out = p if out is None else Or(out, p)
    return BOT if out is None else out


# -- traversal helpers -----------------------------------------------------

def children(f: Formula) -> tuple:
    if isinstance(f, (Prop, Nominal, Top, Bot)):
        return ()
    if isinstance(f, (Neg, Exists, Univ, Diff, Diamond, Box, At)):
        return (f.sub,)
    if isinstance(f, (Or, And, Implies, Iff)):
        return (f.left, f.right)
    if isinstance(f, (Announce, Remove, AnnBox, RemBox)):
        return (f.pre, f.post)
    raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def depth(f: Formula) -> int:
    kids = children(f)
    return 0 if not kids else 1 + max(depth(k) for k in kids)


def props(f: Formula) -> set:
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


def nominals(f: Formula) -> set:
    out = set()
    for g in subformulas(f):
        if isinstance(g, Nominal):
            out.add(g.name)
        elif isinstance(g, At):
            out.add(g.nominal)
    return out


def labels(f: Formula) -> set:
    return {g.label for g in subformulas(f) if isinstance(g, (Diamond, Box))}


def is_core(f: Formula) -> bool:
    return all(isinstance(g, CORE_TYPES) for g in subformulas(f))


# -- expansion -------------------------------------------------------------

def _and(a: Formula, b: Formula) -> Formula:
    return Neg(Or(Neg(a), Neg(b)))


def _imp(a: Formula, b: Formula) -> Formula:
    return Or(Neg(a), b)


def expand(f: Formula, exists_as_sugar: bool = False) -> Formula:
    """Rewrite sugar into core constructors.

    With ``exists_as_sugar`` the existential modality is also eliminated
    (E f becomes f | <-f>T and U f becomes f & [-~f]F), leaving only the
    removal-based fragment.
    """
    memo: dict = {}

    def go(g: Formula) -> Formula:
        key = id(g)
        hit = memo.get(key)
        if hit is not None:
            return hit[1]
        out = _expand_node(g, go, exists_as_sugar)
        memo[key] = (g, out)
        return out

    return go(f)


def _expand_node(g, go, ex_sugar: bool) -> Formula:
    if isinstance(g, (Prop, Nominal, Top)):
        return g
    if isinstance(g, Bot):
        return Neg(TOP)
    if isinstance(g, Neg):
        return Neg(go(g.sub))
    if isinstance(g, Or):
        return Or(go(g.left), go(g.right))
    if isinstance(g, And):
        return _and(go(g.left), go(g.right))
    if isinstance(g, Implies):
        return _imp(go(g.left), go(g.right))
    if isinstance(g, Iff):
        a, b = go(g.left), go(g.right)
        return _and(_imp(a, b), _imp(b, a))
    if isinstance(g, Diamond):
        return Diamond(g.label, go(g.sub))
    if isinstance(g, Box):
        return Neg(Diamond(g.label, Neg(go(g.sub))))
    if isinstance(g, Announce):
        return Announce(go(g.pre), go(g.post))
    if isinstance(g, AnnBox):
        return Neg(Announce(go(g.pre), Neg(go(g.post))))
    if isinstance(g, Remove):
        return Remove(go(g.pre), go(g.post))
    if isinstance(g, RemBox):
        return Neg(Remove(go(g.pre), Neg(go(g.post))))
    if isinstance(g, Diff):
        return Remove(go(g.sub), TOP)
    if isinstance(g, Exists):
        a = go(g.sub)
        return Or(a, Remove(a, TOP)) if ex_sugar else Exists(a)
    if isinstance(g, Univ):
        a = go(g.sub)
        if ex_sugar:
            return _and(a, Neg(Remove(Neg(a), Neg(Neg(TOP)))))
        return Neg(Exists(Neg(a)))
    if isinstance(g, At):
        return go(Univ(Implies(Nominal(g.nominal), g.sub)))
    raise TypeError(f"not a formula: {g!r}")


# -- standard formulas -----------------------------------------------------

def counting_formula(k: int) -> Formula:
    """<-T>^k T: at least k points other than the current one."""
    if k < 0:
        raise ValueError("k must be non-negative")
    f: Formula = TOP
    for _ in range(k):
        f = Remove(TOP, f)
    return f


def rho2() -> Formula:
    """True exactly when the domain has two points."""
    return And(counting_formula(1), Neg(counting_formula(2)))


def two_loop_formula() -> Formula:
    """Defines the irreflexive two-point loop."""
    return conj([rho2(), Univ(Remove(TOP, Box(DEFAULT_LABEL, BOT))),
                 dia(dia(TOP))])


# -- printing --------------------------------------------------------------

_IFF, _IMP, _OR, _AND, _UNARY = 1, 2, 3, 4, 5


def _level(f: Formula) -> int:
    if isinstance(f, Iff):
        return _IFF
    if isinstance(f, Implies):
        return _IMP
    if isinstance(f, Or):
        return _OR
    if isinstance(f, And):
        return _AND
    return _UNARY


def _label(lbl: str) -> str:
    return "" if lbl == DEFAULT_LABEL else lbl


def to_text(f: Formula) -> str:
    """Canonical ASCII rendering; ``parse(to_text(f)) == f``."""
    return _print(f, 0)


def _print(f: Formula, need: int) -> str:
    s = _print_bare(f)
    return f"({s})" if _level(f) < need else s


def _prefix(op: str, operand: Formula) -> str:
    body = _print(operand, _UNARY)
    if op[-1].isalnum() and (body[0].isalnum() or body[0] == "_"):
        return f"{op} {body}"
    return op + body


def _print_bare(f: Formula) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Nominal):
        return "'" + f.name
    if isinstance(f, Top):
        return "T"
    if isinstance(f, Bot):
        return "F"
    if isinstance(f, Iff):
        return f"{_print(f.left, _IFF)}<->{_print(f.right, _IMP)}"
    if isinstance(f, Implies):
        # right associative
        return f"{_print(f.left, _OR)}->{_print(f.right, _IMP)}"
    if isinstance(f, Or):
        return f"{_print(f.left, _OR)}|{_print(f.right, _AND)}"
    if isinstance(f, And):
        return f"{_print(f.left, _AND)}&{_print(f.right, _UNARY)}"
    if isinstance(f, Neg):
        return _prefix("~", f.sub)
    if isinstance(f, Diamond):
        return _prefix(f"<{_label(f.label)}>", f.sub)
    if isinstance(f, Box):
        return _prefix(f"[{_label(f.label)}]", f.sub)
    if isinstance(f, Announce):
        return _prefix(f"<!{_print(f.pre, 0)}>", f.post)
    if isinstance(f, AnnBox):
        return _prefix(f"[!{_print(f.pre, 0)}]", f.post)
    if isinstance(f, Remove):
        return _prefix(f"<-{_print(f.pre, 0)}>", f.post)
    if isinstance(f, RemBox):
        return _prefix(f"[-{_print(f.pre, 0)}]", f.post)
    if isinstance(f, Exists):
        return _prefix("E", f.sub)
    if isinstance(f, Univ):
        return _prefix("U", f.sub)
    if isinstance(f, Diff):
        return _prefix("D", f.sub)
    if isinstance(f, At):
        return f"@'{f.nominal} {_print(f.sub, _UNARY)}"
    raise TypeError(f"not a formula: {f!r}")


# -- parsing ---------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(
    r"\s*(?:(<->|->|<!|\[!|<-|\[-|[<>\[\]()~&|'@])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tok = m.group(1) or m.group(2)
        toks.append((tok, m.start(1) if m.group(1) else m.start(2)))
        pos = m.end()
    toks.append(("<eof>", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, allowed_labels):
        self.toks = _tokenize(text)
        self.i = 0
        self.allowed = None if allowed_labels is None else set(allowed_labels)

    def peek(self) -> str:
        return self.toks[self.i][0]

    def pos(self) -> int:
        return self.toks[self.i][1]

    def take(self, expected: Optional[str] = None) -> str:
        tok = self.peek()
        if expected is not None and tok != expected:
            raise ParseError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def ident(self) -> str:
        tok = self.peek()
        if not (tok[0].isalpha() or tok[0] == "_"):
            raise ParseError(f"expected identifier, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def check_label(self, lbl: str, pos: int) -> None:
        if self.allowed is not None and lbl not in self.allowed:
            raise ParseError(f"unknown relation label {lbl!r}", pos)

    def formula(self) -> Formula:
        f = self.imp()
        while self.peek() == "<->":
            self.take()
            f = Iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(f, self.imp())
        return f

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def modal_label(self, close: str) -> str:
        if self.peek() == close:
            self.take()
            return DEFAULT_LABEL
        pos = self.pos()
        lbl = self.ident()
        self.check_label(lbl, pos)
        self.take(close)
        return lbl

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            return Neg(self.unary())
        if tok == "<":
            self.take()
            lbl = self.modal_label(">")
            return Diamond(lbl, self.unary())
        if tok == "[":
            self.take()
            lbl = self.modal_label("]")
            return Box(lbl, self.unary())
        if tok in ("<!", "[!", "<-", "[-"):
            self.take()
            pre = self.formula()
            self.take(">" if tok[0] == "<" else "]")
            post = self.unary()
            cls = {"<!": Announce, "[!": AnnBox, "<-": Remove, "[-": RemBox}[tok]
            return cls(pre, post)
        if tok in ("E", "U", "D"):
            self.take()
            cls = {"E": Exists, "U": Univ, "D": Diff}[tok]
            return cls(self.unary())
        if tok == "@":
            self.take()
            self.take("'")
            name = self.ident()
            return At(name, self.unary())
        return self.atom()

    def atom(self) -> Formula:
        tok = self.peek()
        if tok == "T":
            self.take()
            return TOP
        if tok == "F":
            self.take()
            return BOT
        if tok == "'":
            self.take()
            return Nominal(self.ident())
        if tok == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        if tok[0].isalpha() or tok[0] == "_":
            self.take()
            return Prop(tok)
        raise ParseError(f"unexpected token {tok!r}", self.pos())


def parse(text: str, labels: Optional[Iterable[str]] = None) -> Formula:
    """Parse the ASCII grammar.  ``labels`` restricts relation labels."""
    p = _Parser(text, labels)
    f = p.formula()
    if p.peek() != "<eof>":
        raise ParseError(f"trailing input {p.peek()!r}", p.pos())
    return f
