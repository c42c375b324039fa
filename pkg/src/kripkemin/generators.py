"""Seeded random structures, grammars, relations and formulas.

Used by the test-suite sweeps; every function takes a ``random.Random``.
Labels are drawn from a small pool so that bisimilar states are common.
"""

from __future__ import annotations

import random

from .bisim import largest_bisimulation
from .ctl import Atom, Binary, Const, Not, Temporal, UNARY_TEMPORAL, Until
from .grammar import Fragment, GraphGrammar
from .kripke import KripkeStructure


def _fresh(taken, stem):
    i = 0
    while f"{stem}{i}" in taken:
        i += 1
    name = f"{stem}{i}"
    taken.add(name)
    return name


def _label_pool(rng, aps, size):
    pool = set()
    while len(pool) < size:
        pool.add(frozenset(p for p in aps if rng.random() < 0.5))
        if len(pool) >= 2 ** len(aps):
            break
    return sorted(pool, key=sorted)


def random_kripke(rng: random.Random, n_states=None, n_aps=None, max_out=3,
                  connected=True, n_labels=None, prefix="s") -> KripkeStructure:
    """Random total structure.

    With ``connected`` every state is reachable from ``<prefix>0`` (a random
    spanning tree is laid down first).
    """
    n = n_states or rng.randint(1, 10)
    m = rng.randint(1, 4) if n_aps is None else n_aps
    aps = [f"p{i}" for i in range(m)]
    pool = _label_pool(rng, aps, n_labels or rng.randint(1, 3))
    states = [f"{prefix}{i}" for i in range(n)]
    trans = {s: set() for s in states}
    if connected:
        for i in range(1, n):
            trans[states[rng.randrange(i)]].add(states[i])
    for s in states:
        for _ in range(rng.randint(0 if trans[s] else 1, max_out)):
            trans[s].add(rng.choice(states))
    init = {states[0]} | {s for s in states[1:] if rng.random() < 0.15}
    label = {s: rng.choice(pool) for s in states}
    return KripkeStructure(aps=aps, states=states, init=init, trans=trans, label=label)


def duplicate_states(rng, k: KripkeStructure, count=None) -> KripkeStructure:
    """Add copies of random states and reroute some edges to the copies.

    Each copy has the original's label and successors, so the result is
    bisimulation equivalent to ``k``.
    """
    states = list(k.states)
    trans = {s: set(k.trans[s]) for s in states}
    label = dict(k.label)
    init = set(k.init)
    count = rng.randint(1, max(1, len(states))) if count is None else count
    taken = set(states)
    for _ in range(count):
        orig = rng.choice(k.states)
        dup = _fresh(taken, f"{orig}_d")
        states.append(dup)
        label[dup] = k.label[orig]
        trans[dup] = set(trans[orig])
        for s in list(trans):
            if orig in trans[s] and rng.random() < 0.5:
                trans[s].add(dup)
                if rng.random() < 0.5:
                    trans[s].discard(orig)
        if orig in init and rng.random() < 0.5:
            init.add(dup)
    return KripkeStructure(aps=k.aps, states=states, init=init, trans=trans, label=label)


def rename_states(rng, k: KripkeStructure) -> KripkeStructure:
    names = [f"r{i}" for i in range(len(k.states))]
    rng.shuffle(names)
    return k.rename(dict(zip(k.states, names)))


def inject_unreachable(rng, k: KripkeStructure, count=None) -> KripkeStructure:
    """Add states nobody reaches; they may point anywhere."""
    count = rng.randint(1, 3) if count is None else count
    taken = set(k.states)
    junk = [_fresh(taken, "u") for _ in range(count)]
    all_states = list(k.states) + junk
    trans = {s: set(k.trans[s]) for s in k.states}
    label = dict(k.label)
    for u in junk:
        trans[u] = {rng.choice(all_states) for _ in range(rng.randint(1, 3))}
        label[u] = frozenset(p for p in k.aps if rng.random() < 0.5)
    return KripkeStructure(aps=k.aps, states=all_states, init=k.init, trans=trans, label=label)


def mutate_equivalent(rng, k: KripkeStructure) -> KripkeStructure:
    """Random chain of equivalence-preserving mutations (ends with a renaming)."""
    for _ in range(rng.randint(1, 3)):
        op = rng.choice((duplicate_states, inject_unreachable))
        k = op(rng, k)
    return rename_states(rng, k)


def random_relation(rng, k1, k2):
    """Random relation, biased towards label-compatible pairs."""
    compat = [(s, t) for s in k1.states for t in k2.states if k1.label[s] == k2.label[t]]
    every = [(s, t) for s in k1.states for t in k2.states]
    mode = rng.random()
    if mode < 0.4:
        pairs = {p for p in compat if rng.random() < 0.7}
    elif mode < 0.8:
        big = list(largest_bisimulation(k1, k2))
        pairs = {p for p in big if rng.random() < 0.85}
        if compat and rng.random() < 0.3:
            pairs.add(rng.choice(compat))
    else:
        pairs = {p for p in every if rng.random() < 0.3}
    return sorted(pairs)


def random_formula(rng, aps, depth=4):
    """Random CTL formula with nesting depth at most ``depth``."""
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.1:
            return Const(rng.random() < 0.5)
        return Atom(rng.choice(list(aps)))
    kind = rng.random()
    sub = lambda: random_formula(rng, aps, depth - 1)  # noqa: E731
    if kind < 0.15:
        return Not(sub())
    if kind < 0.35:
        return Binary(rng.choice(("&", "|", "->")), sub(), sub())
    if kind < 0.8:
        return Temporal(rng.choice(UNARY_TEMPORAL), sub())
    return Until(rng.choice("EA"), sub(), sub())


def random_grammar(rng, max_states=8, max_n=2) -> GraphGrammar:
    """Random grammar satisfying every validation rule."""
    n = rng.randint(1, max_n)
    aps = [f"p{i}" for i in range(rng.randint(1, 3))]
    pool = _label_pool(rng, aps, rng.randint(1, 3))

    n_g0 = rng.randint(n + 1, max(n + 1, max_states))
    g0_states = [f"g{i}" for i in range(n_g0)]
    exits = rng.sample(g0_states[1:], n) if rng.random() < 0.8 else rng.sample(g0_states, n)
    inner0 = [s for s in g0_states if s not in exits]
    g0_trans = {s: {rng.choice(g0_states) for _ in range(rng.randint(1, 3))} for s in inner0}
    # make sure every exit is entered from somewhere
    for e in exits:
        g0_trans[rng.choice(inner0)].add(e)
    g0_label = {s: rng.choice(pool) for s in g0_states}

    n_rule = rng.randint(2 * n, max(2 * n, max_states))
    rule_states = [f"r{i}" for i in range(n_rule)]
    picked = rng.sample(rule_states, 2 * n)
    ins, outs = picked[:n], picked[n:]
    non_out = [s for s in rule_states if s not in outs]
    rule_trans = {s: {rng.choice(rule_states) for _ in range(rng.randint(1, 3))} for s in non_out}
    for o in outs:
        rule_trans[rng.choice(non_out)].add(o)
    rule_label = {s: rng.choice(pool) for s in rule_states}
    for i in range(n):
        lab = g0_label[exits[i]]
        rule_label[ins[i]] = lab
        rule_label[outs[i]] = lab

    return GraphGrammar(
        n=n,
        aps=aps,
        g0=Fragment(g0_states, g0_trans, g0_label, init={g0_states[0]}),
        exits=exits,
        rule=Fragment(rule_states, rule_trans, rule_label),
        ins=ins,
        outs=outs,
    )
