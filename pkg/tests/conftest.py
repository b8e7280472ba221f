import pytest
from hypothesis import settings
from hypothesis import strategies as st

from mhcbench.syntax import And, Box, Circle, Imp, Not, Or, Var

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

NAMES = ("p", "q", "r")


def formulas(box=True, circle=False, names=NAMES, max_leaves=12):
    leaves = st.sampled_from([Var(n) for n in names])
    unary = [Not] + ([Box] if box else []) + ([Circle] if circle else [])

    def extend(children):
        return st.one_of(
            st.builds(lambda c, k: k(c), children, st.sampled_from(unary)),
            st.builds(lambda a, b, k: k(a, b), children, children, st.sampled_from([And, Or, Imp])),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


assertoric = formulas(box=False)
modal = formulas()
bimodal = formulas(circle=True)


@pytest.fixture
def p():
    return Var("p")


@pytest.fixture
def q():
    return Var("q")


# acceptance criteria report lines, printed after the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
