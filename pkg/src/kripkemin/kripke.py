"""Finite Kripke structures: data model, text format, reachability, DOT export.

A structure is an immutable value.  Everything is kept in lexicographic
order so that every algorithm downstream is deterministic.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping

AP_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
STATE_RE = re.compile(r"[A-Za-z0-9_][A-Za-z0-9_.]*\Z")
TOKEN_RE = re.compile(r"->|:|[A-Za-z0-9_.]+|\S")

MAX_STATE_ID_BYTES = 64
MAX_APS = 64


class KripkeError(ValueError):
    """Invalid structure or malformed input.

    ``code`` is a short machine-readable tag (``syntax``, ``unknown-state``,
    ``unknown-ap``, ``non-total``, ``duplicate-state``, ``empty-init``,
    ``bad-identifier``, ``limit``).
    """

    def __init__(self, message, code="invalid", line=None, column=None):
        self.code = code
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" if column is None else f"line {line}, column {column}"
            message = f"{where}: {message}"
        super().__init__(message)


def _check_state_id(s):
    if not isinstance(s, str) or not STATE_RE.match(s):
        raise KripkeError(f"bad state identifier {s!r}", "bad-identifier")
    if len(s.encode("utf-8")) > MAX_STATE_ID_BYTES:
        raise KripkeError(f"state identifier {s!r} exceeds {MAX_STATE_ID_BYTES} bytes", "limit")


def _check_ap(p):
    if not isinstance(p, str) or not AP_RE.match(p):
        raise KripkeError(f"bad proposition identifier {p!r}", "bad-identifier")


@dataclass(frozen=True)
class KripkeStructure:
    """``M = (S, S0, R, L)`` over a fixed proposition set.

    Constructor arguments may be any iterables/mappings; they are normalized
    (sorted tuples, frozensets) and validated.  ``trans`` maps each state to
    its sorted tuple of successors and must be total.
    """

    aps: tuple
    states: tuple
    init: frozenset
    trans: Mapping
    label: Mapping = field(default_factory=dict)

    def __post_init__(self):
        aps = tuple(sorted(set(self.aps)))
        for p in aps:
            _check_ap(p)
        if len(aps) > MAX_APS:
            raise KripkeError(f"{len(aps)} propositions exceed the cap of {MAX_APS}", "limit")

        states_list = list(self.states)
        seen = set()
        for s in states_list:
            _check_state_id(s)
            if s in seen:
                raise KripkeError(f"duplicate state {s!r}", "duplicate-state")
            seen.add(s)
        states = tuple(sorted(seen))

        init = frozenset(self.init)
        if not init:
            raise KripkeError("no initial states", "empty-init")
        for s in sorted(init):
            if s not in seen:
                raise KripkeError(f"initial state {s!r} is not declared", "unknown-state")

        trans = {}
        for src, succs in self.trans.items():
            if src not in seen:
                raise KripkeError(f"transition from undeclared state {src!r}", "unknown-state")
            succs = frozenset(succs)
            for t in sorted(succs):
                if t not in seen:
                    raise KripkeError(f"transition {src} -> {t}: undeclared state {t!r}", "unknown-state")
            trans[src] = tuple(sorted(succs))
        missing = [s for s in states if not trans.get(s)]
        if missing:
            raise KripkeError(
                "transition relation is not total; no successors for " + ", ".join(missing),
                "non-total",
            )

        apset = set(aps)
        label = {}
        for s, props in self.label.items():
            if s not in seen:
                raise KripkeError(f"label for undeclared state {s!r}", "unknown-state")
            props = frozenset(props)
            bad = sorted(props - apset)
            if bad:
                raise KripkeError(f"state {s!r} labelled with undeclared proposition(s) {', '.join(bad)}", "unknown-ap")
            label[s] = props

        object.__setattr__(self, "aps", aps)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "init", init)
        object.__setattr__(self, "trans", {s: trans[s] for s in states})
        object.__setattr__(self, "label", {s: label.get(s, frozenset()) for s in states})

    def __len__(self):
        return len(self.states)

    def successors(self, s):
        return self.trans[s]

    def predecessors(self):
        """Map state -> sorted tuple of predecessors."""
        pred = {s: [] for s in self.states}
        for s in self.states:
            for t in self.trans[s]:
                pred[t].append(s)
        return {s: tuple(p) for s, p in pred.items()}

    def edges(self):
        return [(s, t) for s in self.states for t in self.trans[s]]

    def rename(self, mapping):
        """Return a copy with states renamed through ``mapping`` (must be injective)."""
        f = mapping.__getitem__ if hasattr(mapping, "__getitem__") else mapping
        return KripkeStructure(
            aps=self.aps,
            states=[f(s) for s in self.states],
            init=[f(s) for s in self.init],
            trans={f(s): [f(t) for t in self.trans[s]] for s in self.states},
            label={f(s): self.label[s] for s in self.states},
        )


# -- text format -----------------------------------------------------------

def _tokens(line):
    return [(m.group(), m.start() + 1) for m in TOKEN_RE.finditer(line)]


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if line.strip():
            yield lineno, line


def _expect_ids(toks, lineno, what, pattern, allow_empty=False):
    if not toks and not allow_empty:
        raise KripkeError(f"expected at least one {what}", "syntax", lineno)
    out = []
    for tok, col in toks:
        if not pattern.match(tok):
            raise KripkeError(f"expected {what}, found {tok!r}", "syntax", lineno, col)
        out.append(tok)
    return out


class _Fragment:
    """Accumulates state/init/trans declarations with their source lines."""

    def __init__(self):
        self.states = {}        # id -> (labels, line)
        self.init = {}          # id -> line
        self.trans = {}         # src -> {dst: line}

    def take(self, keyword, toks, lineno, aps_declared):
        if keyword == "state":
            if aps_declared is None:
                raise KripkeError("'state' before 'aps'", "syntax", lineno, toks[0][1])
            rest = toks[1:]
            if len(rest) < 2 or rest[1][0] != ":":
                col = rest[1][1] if len(rest) >= 2 else (rest[0][1] if rest else toks[0][1])
                raise KripkeError("expected 'state <id> : <ap>*'", "syntax", lineno, col)
            sid = _expect_ids(rest[:1], lineno, "state identifier", STATE_RE)[0]
            props = _expect_ids(rest[2:], lineno, "proposition", AP_RE, allow_empty=True)
            if sid in self.states:
                raise KripkeError(
                    f"duplicate state {sid!r} (first declared on line {self.states[sid][1]})",
                    "duplicate-state", lineno, rest[0][1],
                )
            for p, (_, col) in zip(props, rest[2:]):
                if p not in aps_declared:
                    raise KripkeError(f"undeclared proposition {p!r}", "unknown-ap", lineno, col)
            self.states[sid] = (frozenset(props), lineno)
        elif keyword == "init":
            for sid in _expect_ids(toks[1:], lineno, "state identifier", STATE_RE):
                self.init.setdefault(sid, lineno)
        elif keyword == "trans":
            rest = toks[1:]
            if len(rest) < 3 or rest[1][0] != "->":
                col = rest[1][1] if len(rest) >= 2 else toks[0][1]
                raise KripkeError("expected 'trans <id> -> <id>+'", "syntax", lineno, col)
            src = _expect_ids(rest[:1], lineno, "state identifier", STATE_RE)[0]
            dsts = _expect_ids(rest[2:], lineno, "state identifier", STATE_RE)
            bucket = self.trans.setdefault(src, {})
            for d in dsts:
                bucket.setdefault(d, lineno)
        else:
            return False
        return True

    def check_references(self):
        for sid, lineno in self.init.items():
            if sid not in self.states:
                raise KripkeError(f"initial state {sid!r} is not declared", "unknown-state", lineno)
        for src, dsts in self.trans.items():
            if src not in self.states:
                raise KripkeError(f"transition from undeclared state {src!r}", "unknown-state", min(dsts.values()))
            for d, lineno in dsts.items():
                if d not in self.states:
                    raise KripkeError(f"transition {src} -> {d}: undeclared state {d!r}", "unknown-state", lineno)


def _parse_raw(text):
    header_seen = False
    aps = None
    frag = _Fragment()
    for lineno, line in _content_lines(text):
        toks = _tokens(line)
        kw, col = toks[0]
        if not header_seen:
            if kw != "kripke" or len(toks) != 1:
                raise KripkeError("first line must be 'kripke'", "syntax", lineno, col)
            header_seen = True
            continue
        if kw == "aps":
            if aps is not None:
                raise KripkeError("'aps' declared twice", "syntax", lineno, col)
            if frag.states:
                raise KripkeError("'aps' must precede every 'state'", "syntax", lineno, col)
            names = _expect_ids(toks[1:], lineno, "proposition", AP_RE, allow_empty=True)
            if len(set(names)) != len(names):
                raise KripkeError("duplicate proposition in 'aps'", "syntax", lineno, col)
            aps = set(names)
        elif not frag.take(kw, toks, lineno, aps):
            raise KripkeError(f"unknown keyword {kw!r}", "syntax", lineno, col)
    if not header_seen:
        raise KripkeError("empty input; expected 'kripke'", "syntax", 1)
    if aps is None:
        raise KripkeError("missing 'aps' line", "syntax")
    if not frag.init:
        raise KripkeError("no 'init' line", "empty-init")
    frag.check_references()
    return aps, frag


def _assemble(aps, frag, complete_selfloops=False):
    trans = {s: set(frag.trans.get(s, ())) for s in frag.states}
    added = []
    if complete_selfloops:
        for s in sorted(trans):
            if not trans[s]:
                trans[s].add(s)
                added.append((s, s))
    kripke = KripkeStructure(
        aps=aps,
        states=frag.states,
        init=frag.init,
        trans=trans,
        label={s: lab for s, (lab, _) in frag.states.items()},
    )
    return kripke, added


def parse_kripke(text, complete_selfloops=False):
    """Parse ``.kripke`` text into a validated structure.

    With ``complete_selfloops`` states without successors get a self-loop
    instead of failing validation; use :func:`parse_kripke_completing` to
    learn which edges were added.
    """
    return parse_kripke_completing(text, complete_selfloops)[0]


def parse_kripke_completing(text, complete_selfloops=True):
    """Like :func:`parse_kripke` but also return the list of added self-loops."""
    aps, frag = _parse_raw(text)
    return _assemble(aps, frag, complete_selfloops)


def serialize_kripke(k: KripkeStructure) -> str:
    lines = ["kripke", " ".join(["aps", *k.aps])]
    for s in k.states:
        lines.append(" ".join(["state", s, ":", *sorted(k.label[s])]))
    lines.append(" ".join(["init", *sorted(k.init)]))
    for s in k.states:
        lines.append(" ".join(["trans", s, "->", *k.trans[s]]))
    return "\n".join(lines) + "\n"


# -- reachability ------------------------------------------------------------

def reachable_states(k: KripkeStructure, sources=None):
    """States reachable from ``sources`` (default: the initial states)."""
    start = sorted(k.init if sources is None else sources)
    seen = set(start)
    queue = deque(start)
    while queue:
        s = queue.popleft()
        for t in k.trans[s]:
            if t not in seen:
                seen.add(t)
                queue.append(t)
    return seen


def restrict_reachable(k: KripkeStructure) -> KripkeStructure:
    keep = reachable_states(k)
    if len(keep) == len(k.states):
        return k
    return KripkeStructure(
        aps=k.aps,
        states=keep,
        init=k.init,
        trans={s: k.trans[s] for s in keep},
        label={s: k.label[s] for s in keep},
    )


# -- coalgebra view ------------------------------------------------------------

@dataclass(frozen=True)
class CoalgebraView:
    """A structure seen as a coalgebra: ``alpha(s) = (L(s), R(s))``.

    ``aps`` is carried along because the functor is parameterized by it and
    the round trip back to a Kripke structure needs it.
    """

    aps: tuple
    carrier: tuple
    alpha: Mapping
    init: frozenset

    def __post_init__(self):
        carrier = tuple(sorted(self.carrier))
        cset = set(carrier)
        if set(self.alpha) != cset:
            raise KripkeError("alpha must be defined exactly on the carrier", "invalid")
        alpha = {}
        for s in carrier:
            lab, succ = self.alpha[s]
            succ = frozenset(succ)
            if not succ:
                raise KripkeError(f"alpha({s}) has an empty successor set", "non-total")
            if not succ <= cset:
                raise KripkeError(f"alpha({s}) leaves the carrier", "unknown-state")
            alpha[s] = (frozenset(lab), succ)
        init = frozenset(self.init)
        if not init <= cset:
            raise KripkeError("initial states must lie in the carrier", "unknown-state")
        object.__setattr__(self, "aps", tuple(sorted(self.aps)))
        object.__setattr__(self, "carrier", carrier)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "init", init)

    @property
    def states(self):
        return self.carrier


def to_coalgebra_view(k: KripkeStructure) -> CoalgebraView:
    return CoalgebraView(
        aps=k.aps,
        carrier=k.states,
        alpha={s: (k.label[s], frozenset(k.trans[s])) for s in k.states},
        init=k.init,
    )


def from_coalgebra_view(c: CoalgebraView) -> KripkeStructure:
    return KripkeStructure(
        aps=c.aps,
        states=c.carrier,
        init=c.init,
        trans={s: c.alpha[s][1] for s in c.carrier},
        label={s: c.alpha[s][0] for s in c.carrier},
    )


# -- DOT -------------------------------------------------------------------

def _dot_quote(s):
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(k: KripkeStructure) -> str:
    out = ["digraph kripke {"]
    for s in k.states:
        shape = "doublecircle" if s in k.init else "circle"
        text = s + "\\n{" + ",".join(sorted(k.label[s])) + "}"
        out.append(f"  {_dot_quote(s)} [shape={shape}, label=\"{text}\"];")
    for s, t in sorted(k.edges()):
        out.append(f"  {_dot_quote(s)} -> {_dot_quote(t)};")
    out.append("}")
    return "\n".join(out) + "\n"


def structure(aps: Iterable[str], edges, labels, init) -> KripkeStructure:
    """Convenience builder from an edge list; states are inferred from edges and labels."""
    states = set(labels)
    trans = {}
    for s, t in edges:
        states.update((s, t))
        trans.setdefault(s, set()).add(t)
    return KripkeStructure(aps=aps, states=states, init=init, trans=trans, label=labels)
