"""Bisimulation relations between Kripke structures.

Bisimilarity is computed as a greatest fixpoint: start from all
label-compatible pairs and delete, round by round, every pair whose
successors cannot be matched inside the current relation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class BisimError(ValueError):
    pass


@dataclass(frozen=True)
class BisimRelation:
    """A set of ``(left state, right state)`` pairs, kept sorted."""

    left: Any
    right: Any
    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted(set(map(tuple, self.pairs))))
        lstates, rstates = set(self.left.states), set(self.right.states)
        for a, b in pairs:
            if a not in lstates:
                raise BisimError(f"pair ({a}, {b}): {a!r} is not a state of the left structure")
            if b not in rstates:
                raise BisimError(f"pair ({a}, {b}): {b!r} is not a state of the right structure")
        object.__setattr__(self, "pairs", pairs)

    def __contains__(self, pair):
        return tuple(pair) in self._set

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self.pairs)

    @property
    def _set(self):
        try:
            return self.__dict__["_cached_set"]
        except KeyError:
            s = frozenset(self.pairs)
            object.__setattr__(self, "_cached_set", s)
            return s

    def as_set(self):
        return self._set

    def classes(self):
        """Equivalence classes, for a relation of a structure with itself."""
        seen = set()
        out = []
        for s in self.left.states:
            if s in seen:
                continue
            cls = tuple(sorted(b for a, b in self.pairs if a == s))
            seen.update(cls)
            out.append(cls)
        return out


def _relation(k1, k2, pairs):
    return BisimRelation(k1, k2, tuple(pairs))


def is_bisimulation(k1, k2, rel) -> bool:
    pairs = rel.as_set() if isinstance(rel, BisimRelation) else set(rel)
    if not isinstance(rel, BisimRelation):
        BisimRelation(k1, k2, tuple(pairs))  # reference check
    for s, t in pairs:
        if k1.label[s] != k2.label[t]:
            return False
        for s1 in k1.trans[s]:
            if not any((s1, t1) in pairs for t1 in k2.trans[t]):
                return False
        for t1 in k2.trans[t]:
            if not any((s1, t1) in pairs for s1 in k1.trans[s]):
                return False
    return True


def _label_compatible(k1, k2):
    by_label = {}
    for t in k2.states:
        by_label.setdefault(k2.label[t], []).append(t)
    return {(s, t) for s in k1.states for t in by_label.get(k1.label[s], ())}


def _refine_once(k1, k2, current):
    """One synchronous deletion round."""
    keep = set()
    for s, t in current:
        succ_s, succ_t = k1.trans[s], k2.trans[t]
        if all(any((a, b) in current for b in succ_t) for a in succ_s) and all(
            any((a, b) in current for a in succ_s) for b in succ_t
        ):
            keep.add((s, t))
    return keep


def k_approximant(k1, k2, k: int) -> BisimRelation:
    """Label compatibility refined by ``k`` deletion rounds."""
    if k < 0:
        raise BisimError("k must be nonnegative")
    current = _label_compatible(k1, k2)
    for _ in range(k):
        nxt = _refine_once(k1, k2, current)
        if nxt == current:
            break
        current = nxt
    return _relation(k1, k2, current)


def largest_bisimulation(k1, k2) -> BisimRelation:
    current = _label_compatible(k1, k2)
    while True:
        nxt = _refine_once(k1, k2, current)
        if nxt == current:
            return _relation(k1, k2, current)
        current = nxt


def bisimilar_states(k, s, t) -> bool:
    for x in (s, t):
        if x not in k.trans:
            raise BisimError(f"unknown state {x!r}")
    return (s, t) in largest_bisimulation(k, k)


def are_equivalent(k1, k2) -> bool:
    """Bisimulation equivalence: initial states matched in both directions."""
    if tuple(k1.aps) != tuple(k2.aps):
        raise BisimError(
            "structures are over different propositions: {%s} vs {%s}" % (",".join(k1.aps), ",".join(k2.aps))
        )
    rel = largest_bisimulation(k1, k2).as_set()
    fwd = all(any((s, t) in rel for t in k2.init) for s in k1.init)
    back = all(any((s, t) in rel for s in k1.init) for t in k2.init)
    return fwd and back


def is_coalgebra_bisimulation(c1, c2, rel) -> bool:
    """Check a relation as a span of coalgebra homomorphisms.

    The relation is given the structure map
    ``gamma(s, t) = (L(s), {(s', t') in rel | s' in R(s), t' in R'(t)})``;
    it is a bisimulation iff both projections are homomorphisms, i.e. both
    squares commute and ``gamma`` lands in the functor (nonempty successors).
    """
    pairs = rel.as_set() if isinstance(rel, BisimRelation) else set(rel)
    if not isinstance(rel, BisimRelation):
        BisimRelation(c1, c2, tuple(pairs))
    for s, t in pairs:
        lab_s, succ_s = c1.alpha[s]
        lab_t, succ_t = c2.alpha[t]
        gamma_succ = {(a, b) for (a, b) in pairs if a in succ_s and b in succ_t}
        if not gamma_succ:
            return False
        # left square: alpha . pi1 == Pf(pi1) . gamma
        if (lab_s, succ_s) != (lab_s, frozenset(a for a, _ in gamma_succ)):
            return False
        # right square: alpha' . pi2 == Pf(pi2) . gamma
        if (lab_t, succ_t) != (lab_s, frozenset(b for _, b in gamma_succ)):
            return False
    return True
