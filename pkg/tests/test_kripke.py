import random

import pytest
from hypothesis import given

from kripkemin import (
    KripkeError,
    KripkeStructure,
    export_dot,
    from_coalgebra_view,
    parse_kripke,
    restrict_reachable,
    serialize_kripke,
    to_coalgebra_view,
)
from kripkemin.bisim import are_equivalent
from kripkemin.generators import random_kripke
from kripkemin.kripke import CoalgebraView, parse_kripke_completing
from kripkemin.partition import is_connected

from conftest import FIXTURES
from strategies import structures


def same(k1, k2):
    return (k1.aps, k1.states, k1.init, dict(k1.trans), dict(k1.label)) == (
        k2.aps, k2.states, k2.init, dict(k2.trans), dict(k2.label)
    )


class TestParse:
    def test_f1(self, f1):
        assert f1.states == ("s1", "s2")
        assert f1.init == {"s1"}
        assert f1.label["s1"] == {"a"}
        assert f1.trans["s1"] == ("s2",)
        assert to_coalgebra_view(f1).alpha["s1"] == ({"a"}, {"s2"})

    def test_smallest_input(self):
        k = parse_kripke("kripke\naps p\nstate s0 :\ninit s0\ntrans s0 -> s0\n")
        assert k.states == ("s0",)
        assert k.label["s0"] == frozenset()
        assert k.trans["s0"] == ("s0",)

    def test_missing_trans_is_totality_error(self):
        text = "kripke\naps a\nstate s0 : a\nstate s1 :\ninit s0\ntrans s0 -> s1\n"
        with pytest.raises(KripkeError) as e:
            parse_kripke(text)
        assert e.value.code == "non-total"
        assert "s1" in str(e.value)

    def test_complete_selfloops(self):
        text = "kripke\naps a\nstate s0 : a\nstate s1 :\ninit s0\ntrans s0 -> s1\n"
        k, added = parse_kripke_completing(text)
        assert added == [("s1", "s1")]
        assert k.trans["s1"] == ("s1",)

    def test_trans_lines_are_unioned(self):
        text = """kripke
        aps a
        state s0 : a
        state s1 :
        state s2 :
        init s0
        trans s0 -> s1
        trans s1 -> s0
        trans s0 -> s2
        trans s2 -> s2
        trans s0 -> s1 s0
        """
        k = parse_kripke(text)
        assert k.trans["s0"] == ("s0", "s1", "s2")
        assert serialize_kripke(k).count("trans s0 ->") == 1
        assert "trans s0 -> s0 s1 s2\n" in serialize_kripke(k)

    def test_order_insensitive_references(self):
        text = "kripke\naps a\ninit s1\ntrans s1 -> s0\nstate s1 : a\ntrans s0 -> s1\nstate s0 :\n"
        k = parse_kripke(text)
        assert k.init == {"s1"}

    def test_comments_and_blank_lines(self):
        text = "# header\n\nkripke  # trailing\naps a\n\nstate s : a # x\ninit s\ntrans s -> s\n"
        assert parse_kripke(text).states == ("s",)

    @pytest.mark.parametrize(
        "text, code, line",
        [
            ("kripke\naps a\nstate s0 : a\ninit s0\ntrans s0 => s0\n", "syntax", 5),
            ("kripke\naps a\nstate s0 : a\ninit s0\ntrans s0 -> s9\n", "unknown-state", 5),
            ("kripke\naps a\nstate s0 : b\ninit s0\ntrans s0 -> s0\n", "unknown-ap", 3),
            ("kripke\naps a\nstate s0 : a\nstate s0 :\ninit s0\ntrans s0 -> s0\n", "duplicate-state", 4),
            ("kripke\naps a\nstate s0 : a\ninit s7\ntrans s0 -> s0\n", "unknown-state", 4),
            ("kripke\naps a\nstate s0 : a\ntrans s0 -> s0\n", "empty-init", None),
            ("kripkee\n", "syntax", 1),
            ("kripke\nstate s0 :\n", "syntax", 2),
            ("kripke\naps a\naps b\n", "syntax", 3),
            ("kripke\naps a\nstate s0 a\n", "syntax", 3),
            ("kripke\naps a\nstate s0 : a\ninit s0\nfoo s0\n", "syntax", 5),
            ("kripke\naps a\nstate s0 : a\ninit s0\ntrans s0 -> s0 $\n", "syntax", 5),
        ],
    )
    def test_errors(self, text, code, line):
        with pytest.raises(KripkeError) as e:
            parse_kripke(text)
        assert e.value.code == code
        assert e.value.line == line

    def test_syntax_error_column(self):
        with pytest.raises(KripkeError) as e:
            parse_kripke("kripke\naps a\nstate s0 : a\ninit s0\ntrans s0 -> s0 $\n")
        assert e.value.column == 16
        assert "line 5, column 16" in str(e.value)

    def test_identifier_limits(self):
        long_id = "s" * 65
        with pytest.raises(KripkeError) as e:
            KripkeStructure(aps=[], states=[long_id], init=[long_id], trans={long_id: [long_id]})
        assert e.value.code == "limit"
        aps = [f"p{i}" for i in range(65)]
        with pytest.raises(KripkeError) as e:
            KripkeStructure(aps=aps, states=["s"], init=["s"], trans={"s": ["s"]})
        assert e.value.code == "limit"


class TestSerialize:
    def test_f1_canonical(self, f1):
        assert serialize_kripke(f1) == (
            "kripke\naps a b\nstate s1 : a\nstate s2 : b\ninit s1\ntrans s1 -> s2\ntrans s2 -> s1\n"
        )

    def test_fixture_round_trip(self):
        for path in sorted(FIXTURES.glob("*.kripke")):
            k = parse_kripke(path.read_text())
            assert same(parse_kripke(serialize_kripke(k)), k), path.name

    def test_random_round_trip(self):
        rng = random.Random(7)
        for _ in range(100):
            k = random_kripke(rng, connected=rng.random() < 0.5)
            text = serialize_kripke(k)
            back = parse_kripke(text)
            assert same(back, k)
            assert back == k
            assert serialize_kripke(back) == text

    @given(structures())
    def test_round_trip_property(self, k):
        assert same(parse_kripke(serialize_kripke(k)), k)


class TestRestrict:
    def test_connected_unchanged(self, f1):
        assert same(restrict_reachable(f1), f1)

    def test_unreachable_dropped(self, f1):
        k = KripkeStructure(
            aps=f1.aps,
            states=[*f1.states, "s9"],
            init=f1.init,
            trans={**f1.trans, "s9": ["s9"]},
            label=f1.label,
        )
        assert same(restrict_reachable(k), f1)

    def test_random(self):
        rng = random.Random(11)
        for _ in range(50):
            k = random_kripke(rng, connected=False)
            r = restrict_reachable(k)
            assert is_connected(r)
            assert are_equivalent(k, r)
            assert same(restrict_reachable(r), r)

    def test_empty_init_rejected(self):
        with pytest.raises(KripkeError) as e:
            KripkeStructure(aps=[], states=["s"], init=[], trans={"s": ["s"]})
        assert e.value.code == "empty-init"


class TestCoalgebraView:
    def test_f1(self, f1):
        c = to_coalgebra_view(f1)
        assert c.alpha == {"s1": ({"a"}, {"s2"}), "s2": ({"b"}, {"s1"})}
        assert c.init == {"s1"}

    def test_self_loop(self):
        k = KripkeStructure(aps=[], states=["s0"], init=["s0"], trans={"s0": ["s0"]})
        assert to_coalgebra_view(k).alpha["s0"] == (frozenset(), {"s0"})

    def test_round_trips(self):
        rng = random.Random(3)
        for _ in range(100):
            k = random_kripke(rng, connected=False)
            c = to_coalgebra_view(k)
            assert same(from_coalgebra_view(c), k)
            assert to_coalgebra_view(from_coalgebra_view(c)) == c

    def test_empty_successor_set_rejected(self):
        with pytest.raises(KripkeError):
            CoalgebraView(aps=(), carrier=["s"], alpha={"s": (set(), set())}, init=["s"])


class TestDot:
    def test_f1(self, f1):
        assert export_dot(f1) == (
            "digraph kripke {\n"
            '  "s1" [shape=doublecircle, label="s1\\n{a}"];\n'
            '  "s2" [shape=circle, label="s2\\n{b}"];\n'
            '  "s1" -> "s2";\n'
            '  "s2" -> "s1";\n'
            "}\n"
        )

    def test_empty_label(self):
        k = KripkeStructure(aps=["q", "p"], states=["s0"], init=["s0"], trans={"s0": ["s0"]})
        assert 'label="s0\\n{}"' in export_dot(k)

    def test_sorted_labels_and_determinism(self):
        rng = random.Random(5)
        for _ in range(20):
            k = random_kripke(rng)
            assert export_dot(k) == export_dot(parse_kripke(serialize_kripke(k)))
        k = KripkeStructure(aps=["q", "p"], states=["s0"], init=["s0"], trans={"s0": ["s0"]},
                            label={"s0": ["q", "p"]})
        assert 'label="s0\\n{p,q}"' in export_dot(k)
