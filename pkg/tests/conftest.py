from pathlib import Path

import pytest

from kripkemin import parse_grammar, parse_kripke

FIXTURES = Path(__file__).parent / "fixtures"


def load(name):
    text = (FIXTURES / name).read_text(encoding="utf-8")
    if name.endswith(".kgram"):
        return parse_grammar(text)
    return parse_kripke(text)


@pytest.fixture
def f1():
    return load("F1.kripke")


@pytest.fixture
def f2():
    return load("F2.kripke")


@pytest.fixture
def f3():
    return load("F3.kripke")


@pytest.fixture
def g3():
    return load("G3.kgram")
