"""Infinite Kripke structures presented by a simple graph grammar.

A grammar has a start fragment ``g0`` with exit states ``ex_1..ex_N`` and a
single rule fragment ``A`` with entry states ``in_1..in_N`` and exit states
``out_1..out_N``.  The infinite structure is ``g0`` followed by an endless
chain of copies of ``A``, where ``in_i`` of the first copy is ``ex_i`` and
``in_i`` of copy k+1 is ``out_i`` of copy k.

:func:`fold` collapses the chain onto one copy, giving a finite structure
bisimulation equivalent to the infinite one; :func:`unfold` materializes a
finite prefix of the chain instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .kripke import (
    AP_RE,
    STATE_RE,
    KripkeError,
    KripkeStructure,
    _content_lines,
    _expect_ids,
    _Fragment,
    _tokens,
)

RULE_PREFIX = "A."


class GrammarError(KripkeError):
    pass


@dataclass(frozen=True)
class Fragment:
    """States, transitions and labels; totality is not required."""

    states: tuple
    trans: Mapping
    label: Mapping
    init: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        states = tuple(sorted(set(self.states)))
        sset = set(states)
        trans = {}
        for s in states:
            succ = frozenset(self.trans.get(s, ()))
            if not succ <= sset:
                raise GrammarError(f"transition from {s!r} leaves the fragment", "unknown-state")
            trans[s] = tuple(sorted(succ))
        if set(self.trans) - sset:
            raise GrammarError("transition from an undeclared state", "unknown-state")
        if not frozenset(self.init) <= sset:
            raise GrammarError("initial state not in the fragment", "unknown-state")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "trans", trans)
        object.__setattr__(self, "label", {s: frozenset(self.label.get(s, ())) for s in states})
        object.__setattr__(self, "init", frozenset(self.init))

    def __len__(self):
        return len(self.states)


@dataclass(frozen=True)
class GraphGrammar:
    n: int
    aps: tuple
    g0: Fragment
    exits: tuple
    rule: Fragment
    ins: tuple
    outs: tuple

    def __post_init__(self):
        object.__setattr__(self, "aps", tuple(sorted(set(self.aps))))
        object.__setattr__(self, "exits", tuple(self.exits))
        object.__setattr__(self, "ins", tuple(self.ins))
        object.__setattr__(self, "outs", tuple(self.outs))


def validate_grammar(g: GraphGrammar) -> None:
    """Raise :class:`GrammarError` unless ``g`` meets every structural requirement.

    Besides arity, distinctness and the label constraint
    ``L(ex_i) = L(in_i) = L(out_i)``, exit states of ``g0`` and out states of
    the rule may have no outgoing transitions at all: their behaviour is
    supplied by the entry states of the next copy.
    """
    if g.n < 1:
        raise GrammarError("N must be positive", "arity")
    for name, seq in (("exit", g.exits), ("in", g.ins), ("out", g.outs)):
        if len(seq) != g.n or any(x is None for x in seq):
            raise GrammarError(f"expected {g.n} '{name}' declarations, got {sum(x is not None for x in seq)}", "arity")

    apset = set(g.aps)
    for frag, where in ((g.g0, "g0"), (g.rule, "rule")):
        for s in frag.states:
            bad = sorted(frag.label[s] - apset)
            if bad:
                raise GrammarError(f"{where} state {s!r} uses undeclared proposition(s) {', '.join(bad)}", "unknown-ap")
    if g.rule.init:
        raise GrammarError("the rule fragment may not declare initial states", "syntax")
    if not g.g0.init:
        raise GrammarError("g0 has no initial state", "empty-init")

    if len(set(g.exits)) != g.n:
        raise GrammarError("exit states are not pairwise distinct", "distinctness")
    if len(set(g.ins) | set(g.outs)) != 2 * g.n:
        raise GrammarError("in/out states are not pairwise distinct", "distinctness")
    for s in g.exits:
        if s not in g.g0.trans:
            raise GrammarError(f"exit {s!r} is not a g0 state", "unknown-state")
    for s in (*g.ins, *g.outs):
        if s not in g.rule.trans:
            raise GrammarError(f"{s!r} is not a rule state", "unknown-state")

    for i in range(g.n):
        labs = (g.g0.label[g.exits[i]], g.rule.label[g.ins[i]], g.rule.label[g.outs[i]])
        if not labs[0] == labs[1] == labs[2]:
            shown = ", ".join(
                f"L({name}_{i + 1})={{{','.join(sorted(x))}}}" for name, x in zip(("ex", "in", "out"), labs)
            )
            raise GrammarError(f"label constraint violated for i={i + 1}: {shown}", "label-constraint")

    for frag, boundary, kind in ((g.g0, g.exits, "exit"), (g.rule, g.outs, "out")):
        bset = set(boundary)
        for s in boundary:
            for t in frag.trans[s]:
                raise GrammarError(f"restriction violated: edge {s} -> {t} leaves {kind} state {s!r}", "restriction")
        for s in frag.states:
            if s not in bset and not frag.trans[s]:
                raise GrammarError(f"state {s!r} has no successor in its fragment", "non-total")


# -- text format ---------------------------------------------------------------

def parse_grammar(text: str) -> GraphGrammar:
    n = None
    aps = None
    section = None
    frags = {"g0": _Fragment(), "rule": _Fragment()}
    slots = {"exit": {}, "in": {}, "out": {}}
    for lineno, line in _content_lines(text):
        toks = _tokens(line)
        kw, col = toks[0]
        if n is None:
            if kw != "grammar" or len(toks) != 2 or not toks[1][0].isdigit():
                raise GrammarError("first line must be 'grammar <N>'", "syntax", lineno, col)
            n = int(toks[1][0])
            continue
        if kw == "aps":
            if aps is not None or section is not None:
                raise GrammarError("'aps' must appear once, before any section", "syntax", lineno, col)
            aps = set(_expect_ids(toks[1:], lineno, "proposition", AP_RE, allow_empty=True))
        elif kw == "section":
            if len(toks) != 2 or toks[1][0] not in frags:
                raise GrammarError("expected 'section g0' or 'section rule'", "syntax", lineno, col)
            section = toks[1][0]
        elif kw in slots:
            want = "g0" if kw == "exit" else "rule"
            if section != want:
                raise GrammarError(f"'{kw}' belongs in section {want}", "syntax", lineno, col)
            if len(toks) != 3 or not toks[1][0].isdigit():
                raise GrammarError(f"expected '{kw} <i> <id>'", "syntax", lineno, col)
            i = int(toks[1][0])
            if not 1 <= i <= n:
                raise GrammarError(f"index {i} out of range 1..{n}", "arity", lineno, toks[1][1])
            if i in slots[kw]:
                raise GrammarError(f"'{kw} {i}' declared twice", "arity", lineno, col)
            slots[kw][i] = _expect_ids(toks[2:], lineno, "state identifier", STATE_RE)[0]
        else:
            if section is None:
                raise GrammarError(f"{kw!r} outside a section", "syntax", lineno, col)
            if kw == "init" and section == "rule":
                raise GrammarError("the rule section may not declare 'init'", "syntax", lineno, col)
            if not frags[section].take(kw, toks, lineno, aps):
                raise GrammarError(f"unknown keyword {kw!r}", "syntax", lineno, col)
    if n is None:
        raise GrammarError("empty input; expected 'grammar <N>'", "syntax", 1)
    if aps is None:
        raise GrammarError("missing 'aps' line", "syntax")
    for f in frags.values():
        f.check_references()

    def build(f):
        return Fragment(
            states=f.states,
            trans={s: d.keys() for s, d in f.trans.items()},
            label={s: lab for s, (lab, _) in f.states.items()},
            init=f.init,
        )

    g = GraphGrammar(
        n=n,
        aps=aps,
        g0=build(frags["g0"]),
        exits=[slots["exit"].get(i) for i in range(1, n + 1)],
        rule=build(frags["rule"]),
        ins=[slots["in"].get(i) for i in range(1, n + 1)],
        outs=[slots["out"].get(i) for i in range(1, n + 1)],
    )
    validate_grammar(g)
    return g


def serialize_grammar(g: GraphGrammar) -> str:
    lines = [f"grammar {g.n}", " ".join(["aps", *g.aps]), "section g0"]
    for frag, is_g0 in ((g.g0, True), (g.rule, False)):
        if not is_g0:
            lines.append("section rule")
        for s in frag.states:
            lines.append(" ".join(["state", s, ":", *sorted(frag.label[s])]))
        if is_g0:
            lines.append(" ".join(["init", *sorted(frag.init)]))
        for s in frag.states:
            if frag.trans[s]:
                lines.append(" ".join(["trans", s, "->", *frag.trans[s]]))
        if is_g0:
            lines.extend(f"exit {i} {s}" for i, s in enumerate(g.exits, 1))
        else:
            lines.extend(f"in {i} {s}" for i, s in enumerate(g.ins, 1))
            lines.extend(f"out {i} {s}" for i, s in enumerate(g.outs, 1))
    return "\n".join(lines) + "\n"


# -- fold / unfold ---------------------------------------------------------------

def _rule_mapper(g, interior_name, entry_name, out_name):
    """Rename rule states: in_i -> entry_name(i), out_i -> out_name(i), others -> interior_name(s)."""
    ins = {s: i for i, s in enumerate(g.ins)}
    outs = {s: i for i, s in enumerate(g.outs)}

    def f(s):
        if s in ins:
            return entry_name(ins[s])
        if s in outs:
            return out_name(outs[s])
        return interior_name(s)

    return f


def fold(g: GraphGrammar) -> KripkeStructure:
    """Fold the grammar into one finite structure.

    Rule interior states are kept under the ``A.`` prefix; every ``in_i`` and
    ``out_i`` is identified with ``ex_i``, so rule edges into them are
    redirected to ``ex_i`` and the edges leaving ``in_i`` become edges
    leaving ``ex_i``.
    """
    validate_grammar(g)
    boundary = set(g.ins) | set(g.outs)
    phi = _rule_mapper(g, lambda s: RULE_PREFIX + s, lambda i: g.exits[i], lambda i: g.exits[i])
    interior = [phi(s) for s in g.rule.states if s not in boundary]
    clash = sorted(set(interior) & set(g.g0.states))
    if clash:
        raise GrammarError(f"name collision after prefixing: {', '.join(clash)}", "collision")

    states = list(g.g0.states) + interior
    trans = {s: set(g.g0.trans[s]) for s in g.g0.states}
    trans.update({s: set() for s in interior})
    label = dict(g.g0.label)
    for s in g.rule.states:
        if s not in boundary:
            label[phi(s)] = g.rule.label[s]
        for t in g.rule.trans[s]:
            trans[phi(s)].add(phi(t))
    try:
        return KripkeStructure(aps=g.aps, states=states, init=g.g0.init, trans=trans, label=label)
    except KripkeError as e:
        raise GrammarError(f"fold produced an invalid structure: {e}", e.code) from e


def unfold(g: GraphGrammar, depth: int) -> KripkeStructure:
    """``g0`` followed by ``depth`` copies of the rule.

    Copy k's states are named ``A<k>.<id>``; its ``in_i`` is ``ex_i`` for
    k = 1 and ``A<k-1>.<out_i>`` otherwise.  The last copy's out states get
    self-loops so the truncated prefix stays total.  State count is
    ``|g0| + depth * (|A| - N)``.
    """
    validate_grammar(g)
    if depth < 1:
        raise GrammarError("depth must be at least 1", "arity")
    states = list(g.g0.states)
    trans = {s: set(g.g0.trans[s]) for s in g.g0.states}
    label = dict(g.g0.label)
    ins = set(g.ins)
    for k in range(1, depth + 1):
        prev = k - 1
        phi = _rule_mapper(
            g,
            lambda s, k=k: f"A{k}.{s}",
            (lambda i: g.exits[i]) if k == 1 else (lambda i, prev=prev: f"A{prev}.{g.outs[i]}"),
            lambda i, k=k: f"A{k}.{g.outs[i]}",
        )
        for s in g.rule.states:
            if s in ins:
                continue
            name = phi(s)
            states.append(name)
            trans[name] = set()
            label[name] = g.rule.label[s]
        for s in g.rule.states:
            for t in g.rule.trans[s]:
                trans[phi(s)].add(phi(t))
    for o in g.outs:
        last = f"A{depth}.{o}"
        trans[last].add(last)
    clash = len(states) != len(set(states))
    if clash:
        raise GrammarError("name collision while unfolding", "collision")
    return KripkeStructure(aps=g.aps, states=states, init=g.g0.init, trans=trans, label=label)
