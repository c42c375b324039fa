"""CTL formulas: parser and explicit-state labelling checker.

Derived operators are rewritten into EX, EG, E[.U.] and the boolean
connectives before evaluation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union


class CtlError(ValueError):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"position {position}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return f"!{_wrap(self.arg)}"


@dataclass(frozen=True)
class Binary:
    op: str  # "&", "|", "->"
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


UNARY_TEMPORAL = ("EX", "AX", "EF", "AF", "EG", "AG")


@dataclass(frozen=True)
class Temporal:
    op: str  # one of UNARY_TEMPORAL
    arg: "Formula"

    def __str__(self):
        return f"{self.op} {_wrap(self.arg)}"


@dataclass(frozen=True)
class Until:
    quant: str  # "E" or "A"
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{self.quant}[{self.left} U {self.right}]"


Formula = Union[Const, Atom, Not, Binary, Temporal, Until]


def _wrap(f):
    s = str(f)
    return f"({s})" if isinstance(f, (Temporal, Not)) else s


def And(a, b):
    return Binary("&", a, b)


def Or(a, b):
    return Binary("|", a, b)


def Implies(a, b):
    return Binary("->", a, b)


# -- parser ---------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(->|[!&|()\[\]])|([A-Za-z_][A-Za-z0-9_]*))")
_KEYWORDS = {"true", "false", "E", "A", "U", *UNARY_TEMPORAL}


def _tokenize(text):
    toks = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise CtlError(f"unexpected character {text[pos]!r}", pos)
        toks.append((m.group(1) or m.group(2), pos))
        pos = m.end()
    toks.append(("<end>", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, want):
        tok, pos = self.next()
        if tok != want:
            raise CtlError(f"expected {want!r}, found {tok!r}", pos)

    def parse(self):
        f = self.implication()
        tok, pos = self.next()
        if tok != "<end>":
            raise CtlError(f"unexpected {tok!r}", pos)
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek() == "->":
            self.next()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek() == "|":
            self.next()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek() == "&":
            self.next()
            f = And(f, self.unary())
        return f

    def unary(self):
        tok, pos = self.next()
        if tok == "!":
            return Not(self.unary())
        if tok in UNARY_TEMPORAL:
            return Temporal(tok, self.unary())
        if tok in ("E", "A"):
            self.expect("[")
            left = self.implication()
            self.expect("U")
            right = self.implication()
            self.expect("]")
            return Until(tok, left, right)
        if tok == "(":
            f = self.implication()
            self.expect(")")
            return f
        if tok in ("true", "false"):
            return Const(tok == "true")
        if tok not in _KEYWORDS and re.match(r"[A-Za-z_]", tok):
            return Atom(tok)
        if tok == "<end>":
            raise CtlError("unexpected end of formula", pos)
        raise CtlError(f"unexpected {tok!r}", pos)


def parse_formula(text: str) -> Formula:
    return _Parser(text).parse()


# -- normalization & checking ---------------------------------------------------

def normalize(f: Formula) -> Formula:
    """Rewrite into true/false, atoms, !, &, |, EX, EG and E[.U.]."""
    if isinstance(f, (Const, Atom)):
        return f
    if isinstance(f, Not):
        return Not(normalize(f.arg))
    if isinstance(f, Binary):
        a, b = normalize(f.left), normalize(f.right)
        if f.op == "->":
            return Or(Not(a), b)
        return Binary(f.op, a, b)
    if isinstance(f, Until):
        a, b = normalize(f.left), normalize(f.right)
        if f.quant == "E":
            return Until("E", a, b)
        # A[a U b] = !(E[!b U (!a & !b)] | EG !b)
        nb = Not(b)
        return Not(Or(Until("E", nb, And(Not(a), nb)), Temporal("EG", nb)))
    a = normalize(f.arg)
    op = f.op
    if op in ("EX", "EG"):
        return Temporal(op, a)
    if op == "AX":
        return Not(Temporal("EX", Not(a)))
    if op == "EF":
        return Until("E", Const(True), a)
    if op == "AG":
        return Not(Until("E", Const(True), Not(a)))
    if op == "AF":
        return Not(Temporal("EG", Not(a)))
    raise CtlError(f"unknown operator {op!r}")


def atoms(f: Formula):
    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, (Not, Temporal)):
        return atoms(f.arg)
    return atoms(f.left) | atoms(f.right)


def nesting_depth(f: Formula) -> int:
    if isinstance(f, (Atom, Const)):
        return 0
    if isinstance(f, (Not, Temporal)):
        return 1 + nesting_depth(f.arg)
    return 1 + max(nesting_depth(f.left), nesting_depth(f.right))


class _Checker:
    def __init__(self, k):
        self.k = k
        self.all = frozenset(k.states)
        self.pred = k.predecessors()
        self.cache = {}

    def pre_exists(self, target):
        out = set()
        for t in target:
            out.update(self.pred[t])
        return out

    def sat(self, f):
        if f in self.cache:
            return self.cache[f]
        k = self.k
        if isinstance(f, Const):
            r = self.all if f.value else frozenset()
        elif isinstance(f, Atom):
            r = frozenset(s for s in k.states if f.name in k.label[s])
        elif isinstance(f, Not):
            r = self.all - self.sat(f.arg)
        elif isinstance(f, Binary):
            a, b = self.sat(f.left), self.sat(f.right)
            r = a & b if f.op == "&" else a | b
        elif isinstance(f, Until):
            hold, goal = self.sat(f.left), self.sat(f.right)
            result = set(goal)
            frontier = list(goal)
            while frontier:
                t = frontier.pop()
                for s in self.pred[t]:
                    if s not in result and s in hold:
                        result.add(s)
                        frontier.append(s)
            r = frozenset(result)
        elif f.op == "EX":
            r = frozenset(self.pre_exists(self.sat(f.arg)))
        elif f.op == "EG":
            current = set(self.sat(f.arg))
            changed = True
            while changed:
                changed = False
                for s in list(current):
                    if not any(t in current for t in k.trans[s]):
                        current.discard(s)
                        changed = True
            r = frozenset(current)
        else:
            raise CtlError(f"formula not normalized: {f}")
        self.cache[f] = r
        return r


def _check_atoms(k, f):
    missing = sorted(atoms(f) - set(k.aps))
    if missing:
        raise CtlError(f"undeclared proposition(s): {', '.join(missing)}")


def sat_set(k, f) -> frozenset:
    if isinstance(f, str):
        f = parse_formula(f)
    _check_atoms(k, f)
    return _Checker(k).sat(normalize(f))


def models(k, f) -> bool:
    return k.init <= sat_set(k, f)
