"""Partition refinement and the quotient construction.

minimize(K) = restrict to reachable states, partition by label, split blocks
until every block is stable, then collapse each block to one state.  The
result is connected and reduced, hence the unique smallest structure
bisimulation equivalent to K (up to isomorphism).
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Any

from .bisim import largest_bisimulation
from .kripke import KripkeStructure, reachable_states, restrict_reachable

MAX_ISO_STATES = 64


class MinimizeError(ValueError):
    pass


@dataclass(frozen=True)
class Partition:
    """Blocks of states, ordered by smallest member; members sorted.

    ``rounds`` is the number of refinement passes that produced this
    partition (0 for an initial partition).
    """

    structure: Any
    blocks: tuple
    rounds: int = 0

    def __post_init__(self):
        blocks = sorted(tuple(sorted(b)) for b in self.blocks)
        block_of = {}
        for i, b in enumerate(blocks):
            if not b:
                raise MinimizeError("empty block")
            for s in b:
                if s in block_of:
                    raise MinimizeError(f"state {s!r} occurs in two blocks")
                block_of[s] = i
        if set(block_of) != set(self.structure.states):
            raise MinimizeError("blocks do not cover the state set exactly")
        object.__setattr__(self, "blocks", tuple(blocks))
        object.__setattr__(self, "block_of", block_of)

    def __len__(self):
        return len(self.blocks)

    def signature(self, s):
        """Indices of the blocks hit by the successors of ``s``."""
        return frozenset(self.block_of[t] for t in self.structure.trans[s])

    def is_label_uniform(self):
        lab = self.structure.label
        return all(len({lab[s] for s in b}) == 1 for b in self.blocks)

    def is_stable(self):
        return all(len({self.signature(s) for s in b}) == 1 for b in self.blocks)


def initial_partition(k: KripkeStructure) -> Partition:
    groups = {}
    for s in k.states:
        groups.setdefault(k.label[s], []).append(s)
    return Partition(k, tuple(groups.values()))


def refine_once(p: Partition) -> Partition:
    """Split every block by successor signature (one pass)."""
    groups = {}
    for s in p.structure.states:
        groups.setdefault((p.block_of[s], p.signature(s)), []).append(s)
    return Partition(p.structure, tuple(groups.values()), p.rounds + 1)


def refine_to_fixpoint(k: KripkeStructure, p: Partition) -> Partition:
    """Refine until a pass splits nothing.

    Every pass is counted, including the final one that confirms stability,
    so ``rounds <= |S|``.
    """
    if p.structure is not k and p.structure != k:
        raise MinimizeError("partition belongs to a different structure")
    if not p.is_label_uniform():
        raise MinimizeError("initial partition is not label-uniform")
    p = Partition(k, p.blocks, 0)
    while True:
        nxt = refine_once(p)
        if len(nxt) == len(p):
            return Partition(k, p.blocks, nxt.rounds)
        p = nxt


def block_name(i):
    return f"b{i}"


def quotient(k: KripkeStructure, p: Partition) -> KripkeStructure:
    if not p.is_label_uniform() or not p.is_stable():
        raise MinimizeError("quotient needs a stable, label-uniform partition")
    trans = {}
    for i, b in enumerate(p.blocks):
        trans[block_name(i)] = {block_name(j) for s in b for j in p.signature(s)}
    return KripkeStructure(
        aps=k.aps,
        states=[block_name(i) for i in range(len(p.blocks))],
        init={block_name(p.block_of[s]) for s in k.init},
        trans=trans,
        label={block_name(i): k.label[b[0]] for i, b in enumerate(p.blocks)},
    )


@dataclass(frozen=True)
class Minimization:
    """Everything produced along the way by :func:`minimize_detailed`."""

    original: KripkeStructure
    reachable: KripkeStructure
    partition: Partition
    structure: KripkeStructure
    seconds: float

    @property
    def rounds(self):
        return self.partition.rounds

    def block_map(self):
        """Sidecar report: ``b<k>: member ...`` per block."""
        return "".join(
            f"{block_name(i)}: {' '.join(b)}\n" for i, b in enumerate(self.partition.blocks)
        )

    def state_map(self):
        """Original (reachable) state -> quotient state name."""
        return {s: block_name(i) for s, i in self.partition.block_of.items()}


def minimize_detailed(k: KripkeStructure) -> Minimization:
    t0 = time.perf_counter()
    reach = restrict_reachable(k)
    final = refine_to_fixpoint(reach, initial_partition(reach))
    m = quotient(reach, final)
    return Minimization(k, reach, final, m, time.perf_counter() - t0)


def minimize(k: KripkeStructure) -> KripkeStructure:
    return minimize_detailed(k).structure


def is_connected(k: KripkeStructure) -> bool:
    return len(reachable_states(k)) == len(k.states)


def is_reduced(k: KripkeStructure) -> bool:
    return all(a == b for a, b in largest_bisimulation(k, k))


# -- isomorphism -------------------------------------------------------------

def _invariant(k, preds, s):
    return (k.label[s], s in k.init, len(k.trans[s]), len(preds[s]))


def are_isomorphic(k1: KripkeStructure, k2: KripkeStructure) -> bool:
    """Exact isomorphism test (init, labels and edges preserved).

    Backtracking in BFS order with label/degree pruning; meant for quotient
    sized inputs of at most 64 states.
    """
    n = len(k1.states)
    if max(n, len(k2.states)) > MAX_ISO_STATES:
        raise MinimizeError(f"isomorphism check is capped at {MAX_ISO_STATES} states")
    if n != len(k2.states) or tuple(k1.aps) != tuple(k2.aps):
        return False
    if len(k1.init) != len(k2.init) or len(k1.edges()) != len(k2.edges()):
        return False

    pred1, pred2 = k1.predecessors(), k2.predecessors()
    inv1 = {s: _invariant(k1, pred1, s) for s in k1.states}
    inv2 = {s: _invariant(k2, pred2, s) for s in k2.states}
    if sorted(inv1.values(), key=repr) != sorted(inv2.values(), key=repr):
        return False
    candidates = {}
    for t in k2.states:
        candidates.setdefault(inv2[t], []).append(t)

    # visit states so that each one (after the first of its component) has an
    # already-mapped neighbour, which keeps the edge checks tight
    order, seen = [], set()
    for root in sorted(k1.states, key=lambda s: (len(candidates[inv1[s]]), s)):
        if root in seen:
            continue
        seen.add(root)
        stack = [root]
        while stack:
            s = stack.pop()
            order.append(s)
            for t in (*k1.trans[s], *pred1[s]):
                if t not in seen:
                    seen.add(t)
                    stack.append(t)

    succ1 = {s: set(k1.trans[s]) for s in k1.states}
    succ2 = {s: set(k2.trans[s]) for s in k2.states}
    fwd, used = {}, set()

    def consistent(s, t):
        for a, b in fwd.items():
            if (a in succ1[s]) != (b in succ2[t]):
                return False
            if (s in succ1[a]) != (t in succ2[b]):
                return False
        return (s in succ1[s]) == (t in succ2[t])

    def extend(i):
        if i == n:
            return True
        s = order[i]
        for t in candidates[inv1[s]]:
            if t in used or not consistent(s, t):
                continue
            fwd[s] = t
            used.add(t)
            if extend(i + 1):
                return True
            del fwd[s]
            used.discard(t)
        return False

    return extend(0)
