"""End-to-end acceptance criteria.

Each test prints one ``PASS``/``FAIL`` line with its runtime and budget.
Run with ``pytest tests/test_acceptance.py -s -v`` to see them inline;
they are printed even without ``-s``.
"""

import random
import time
from contextlib import contextmanager

import pytest

from kripkemin import (
    are_equivalent,
    are_isomorphic,
    fold,
    initial_partition,
    is_bisimulation,
    is_coalgebra_bisimulation,
    is_connected,
    is_reduced,
    k_approximant,
    largest_bisimulation,
    minimize,
    minimize_detailed,
    models,
    refine_to_fixpoint,
    sat_set,
    to_coalgebra_view,
    unfold,
)
from kripkemin.bisim import bisimilar_states
from kripkemin.generators import (
    duplicate_states,
    inject_unreachable,
    mutate_equivalent,
    random_formula,
    random_grammar,
    random_kripke,
    random_relation,
    rename_states,
)
from kripkemin.unwind import h_approx_equal

from oracles import brute_force_bisimilarity, classes_of


@pytest.fixture
def criterion(capsys):
    @contextmanager
    def run(number, title, budget):
        start = time.perf_counter()
        failure = None
        try:
            yield
        except AssertionError as e:
            failure = e
        elapsed = time.perf_counter() - start
        ok = failure is None and elapsed < budget
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({elapsed:.2f}s, budget {budget:g}s)")
        if failure is not None:
            raise failure
        assert elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"

    return run


def test_1_folded_chain_minimizes_to_five_cycle(criterion, g3, f3):
    with criterion(1, "fold(G3) then minimize is isomorphic to F3", 1):
        m = minimize(fold(g3))
        assert len(m.states) == 5 and len(m.init) == 1
        assert are_isomorphic(m, f3)


def test_2_even_odd_quotient(criterion, f2):
    with criterion(2, "minimize(F2) has 2 states, even/odd blocks", 1):
        det = minimize_detailed(f2)
        h = det.state_map()
        assert len(det.structure.states) == 2
        assert h["s0"] == h["s2"] == h["s4"] != h["s1"] == h["s3"]
        truth = classes_of(brute_force_bisimilarity(f2, f2), f2.states)
        assert {frozenset(b) for b in det.partition.blocks} == truth


def test_3_refinement_matches_bisimilarity(criterion):
    rng = random.Random(2024)
    with criterion(3, "partition blocks = bisimilarity classes; Kripke/coalgebra bisimulations agree", 60):
        for _ in range(200):
            k = random_kripke(rng, n_states=rng.randint(1, 10), n_aps=rng.randint(1, 4), connected=True)
            p = refine_to_fixpoint(k, initial_partition(k))
            rel = largest_bisimulation(k, k).as_set()
            assert classes_of(rel, k.states) == {frozenset(b) for b in p.blocks}
        for _ in range(200):
            k1 = random_kripke(rng, n_states=rng.randint(1, 8))
            k2 = mutate_equivalent(rng, k1) if rng.random() < 0.5 else random_kripke(rng, n_states=rng.randint(1, 8))
            pairs = random_relation(rng, k1, k2)
            c1, c2 = to_coalgebra_view(k1), to_coalgebra_view(k2)
            assert is_bisimulation(k1, k2, pairs) == is_coalgebra_bisimulation(c1, c2, pairs)


def test_4_minimal_structure_properties(criterion):
    rng = random.Random(4)
    with criterion(4, "minimize is reduced, connected, equivalent, idempotent", 60):
        for _ in range(500):
            k = random_kripke(rng, n_states=rng.randint(1, 12), connected=rng.random() < 0.5)
            m = minimize(k)
            assert is_reduced(m) and is_connected(m)
            assert are_equivalent(k, m)
            assert are_isomorphic(minimize(m), m)


def test_5_uniqueness_under_mutation(criterion):
    rng = random.Random(5)
    ops = (duplicate_states, rename_states, inject_unreachable, mutate_equivalent)
    with criterion(5, "equivalence-preserving mutations minimize to isomorphic structures", 60):
        for i in range(100):
            k = random_kripke(rng, n_states=rng.randint(1, 10))
            mutated = ops[i % len(ops)](rng, k)
            assert are_isomorphic(minimize(mutated), minimize(k))


def test_6_ctl_preserved(criterion):
    rng = random.Random(6)
    with criterion(6, "CTL satisfaction preserved by minimization", 60):
        for _ in range(100):
            k = random_kripke(rng, n_states=rng.randint(1, 10), connected=rng.random() < 0.5)
            f = random_formula(rng, k.aps, depth=4)
            det = minimize_detailed(k)
            m, h = det.structure, det.state_map()
            assert models(k, f) == models(m, f)
            sk, sm = sat_set(k, f), sat_set(m, f)
            assert all((s in sk) == (h[s] in sm) for s in det.reachable.states)


def test_7_unwinding_decides_bisimilarity(criterion):
    rng = random.Random(7)
    with criterion(7, "equal unwindings at depth |S| iff bisimilar", 120):
        for _ in range(100):
            k = random_kripke(rng, n_states=rng.randint(1, 8), connected=rng.random() < 0.5)
            n = len(k.states)
            for s in k.states:
                for t in k.states:
                    assert h_approx_equal(k, s, t, n) == bisimilar_states(k, s, t)


def test_8_fold_agrees_with_unfolding(criterion):
    rng = random.Random(8)
    d = 4
    with criterion(8, "k-approximant relates fold and unfold initial states", 60):
        for _ in range(50):
            g = random_grammar(rng, max_states=8, max_n=2)
            f, u = fold(g), unfold(g, d)
            for k in range(d):
                rel = k_approximant(f, u, k).as_set()
                assert all((s, s) in rel for s in f.init)
