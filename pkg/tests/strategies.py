"""Hypothesis strategies for small structures."""

from hypothesis import strategies as st

from kripkemin import KripkeStructure


@st.composite
def structures(draw, max_states=6, max_aps=3, connected=False):
    n = draw(st.integers(1, max_states))
    aps = [f"p{i}" for i in range(draw(st.integers(0, max_aps)))]
    states = [f"s{i}" for i in range(n)]
    labels = st.frozensets(st.sampled_from(aps), max_size=len(aps)) if aps else st.just(frozenset())
    pool = draw(st.lists(labels, min_size=1, max_size=3))
    trans = {}
    for i, s in enumerate(states):
        succ = set(draw(st.lists(st.sampled_from(states), min_size=1, max_size=3)))
        if connected and i + 1 < n:
            succ.add(states[i + 1])
        trans[s] = succ
    init = draw(st.sets(st.sampled_from(states), min_size=1, max_size=2))
    if connected:
        init.add(states[0])
    label = {s: draw(st.sampled_from(pool)) for s in states}
    return KripkeStructure(aps=aps, states=states, init=init, trans=trans, label=label)
