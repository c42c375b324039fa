"""Finite-depth unwinding trees.

The behaviour of a state is the infinite tree obtained by unwinding the
structure from it.  Here the tree is cut at a depth budget, and bisimilar
immediate subtrees are merged; at equal finite depth "bisimilar" and
"structurally equal after canonicalization" coincide, so canonicalization
is done bottom-up.

Trees built by :func:`unwind_tree` share subtrees, so hashing and equality
are computed from cached child values rather than by full traversal.
"""

from __future__ import annotations

from .kripke import reachable_states


class UnwindError(ValueError):
    pass


class UnwindTree:
    """Labelled ordered tree.

    ``depth`` is the budget remaining when the node was built.  A node cut
    off by the budget has ``truncated=True`` and no children; by totality no
    other node is a leaf.
    """

    __slots__ = ("label", "children", "depth", "truncated", "_hash", "_key")

    def __init__(self, label, children=(), depth=0, truncated=None):
        self.label = frozenset(label)
        self.children = tuple(children)
        self.depth = depth
        self.truncated = (not self.children) if truncated is None else truncated
        self._hash = hash((self.label, self.truncated, self.depth, tuple(c._hash for c in self.children)))
        self._key = (tuple(sorted(self.label)), self.truncated, self.depth, tuple(c._key for c in self.children))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, UnwindTree):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.label == other.label
            and self.truncated == other.truncated
            and self.depth == other.depth
            and self.children == other.children
        )

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __repr__(self):
        return f"UnwindTree({sorted(self.label)}, {len(self.children)} children, depth={self.depth})"

    def height(self):
        return 1 + max((c.height() for c in self.children), default=-1)

    def size(self):
        """Node count of the expanded tree."""
        return 1 + sum(c.size() for c in self.children)


def _canonical_children(children):
    return tuple(sorted(set(children)))


def canonicalize(t: UnwindTree, _memo=None) -> UnwindTree:
    """Recursively sort children and drop structural duplicates."""
    memo = {} if _memo is None else _memo
    key = id(t)
    if key in memo:
        return memo[key][1]
    kids = _canonical_children(canonicalize(c, memo) for c in t.children)
    out = t if kids == t.children else UnwindTree(t.label, kids, t.depth, t.truncated)
    memo[key] = (t, out)  # keep t alive so its id is not reused
    return out


def _unwind_levels(k, states, depth):
    # equal trees are interned so later comparisons hit the identity fast path
    pool = {}

    def intern(t):
        return pool.setdefault(t, t)

    level = {s: intern(UnwindTree(k.label[s], (), 0, True)) for s in states}
    for d in range(1, depth + 1):
        level = {
            s: intern(UnwindTree(k.label[s], _canonical_children(level[t] for t in k.trans[s]), d, False))
            for s in states
        }
    return level


def unwind_all(k, depth):
    """Canonical depth-``depth`` trees for every state of ``k``.

    Built level by level so each (state, depth) tree is made once.
    """
    if depth < 0:
        raise UnwindError("depth must be nonnegative")
    return _unwind_levels(k, k.states, depth)


def unwind_tree(k, s, depth) -> UnwindTree:
    if s not in k.trans:
        raise UnwindError(f"unknown state {s!r}")
    if depth < 0:
        raise UnwindError("depth must be nonnegative")
    return _unwind_levels(k, reachable_states(k, [s]), depth)[s]


def h_approx_equal(k, s, t, depth) -> bool:
    for x in (s, t):
        if x not in k.trans:
            raise UnwindError(f"unknown state {x!r}")
    trees = unwind_all(k, depth)
    return trees[s] == trees[t]


def render(t: UnwindTree, indent=0) -> str:
    """Indented text, two spaces per level; ``…`` marks a truncated node."""
    lines = []

    def walk(node, level):
        text = "  " * level + "{" + ",".join(sorted(node.label)) + "}"
        if node.truncated:
            text += " …"
        lines.append(text)
        for c in node.children:
            walk(c, level + 1)

    walk(t, indent)
    return "\n".join(lines) + "\n"
