import pytest
from hypothesis import given
from hypothesis import strategies as st

from mhcbench.algebra import evaluate, posets
from mhcbench.kripke import (
    KripkeError,
    KripkeModel,
    dumps,
    forces,
    kripke_valid,
    loads,
    model,
    upset_algebra,
    upsets,
    valuation_in_upset_algebra,
)
from mhcbench.syntax import TOP, And, Imp, Not, Or, Var, parse, peirce

from conftest import assertoric

p, q = Var("p"), Var("q")


def naive_forces(m, w, f):
    """Forcing clause by clause, quantifying over successors directly."""
    if isinstance(f, Var):
        return w in m.val[f.name]
    if isinstance(f, And):
        return naive_forces(m, w, f.left) and naive_forces(m, w, f.right)
    if isinstance(f, Or):
        return naive_forces(m, w, f.left) or naive_forces(m, w, f.right)
    if isinstance(f, Imp):
        return all(not naive_forces(m, u, f.left) or naive_forces(m, u, f.right)
                   for u in m.worlds if m.le(w, u))
    if isinstance(f, Not):
        return all(not naive_forces(m, u, f.arg) for u in m.worlds if m.le(w, u))
    raise TypeError(f)


def test_one_world():
    m = model(1, [], {"p": {0}, "q": set()})
    assert not forces(m, 0, Imp(p, q))


def test_two_chain_refutes_peirce():
    m = model(2, [(0, 1)], {"p": {1}, "q": set()})
    assert not forces(m, 0, peirce(p, q))
    assert forces(m, 1, peirce(p, q))


def test_top_everywhere():
    m = model(3, [(0, 1), (0, 2)], {"p": {1}})
    assert all(forces(m, w, TOP) for w in m.worlds)


def test_peirce_double_has_no_small_countermodel():
    assert kripke_valid(parse("((((p -> q) -> p) -> p) -> q) -> q"), 4) is None


def test_peirce_has_two_world_countermodel():
    m, w = kripke_valid(peirce(p, q), 2)
    assert m.size == 2 and w == 0
    assert m.val == {"p": frozenset({1}), "q": frozenset()}
    assert kripke_valid(peirce(p, q), 1) is None


def test_identity_is_valid():
    assert kripke_valid(Imp(p, p), 3) is None


def test_excluded_middle_fails():
    assert kripke_valid(Or(p, Not(p)), 2) is not None


def test_valuation_must_be_up_closed():
    with pytest.raises(KripkeError):
        model(2, [(0, 1)], {"p": {0}})


def test_box_is_rejected():
    with pytest.raises(KripkeError):
        forces(model(1, [], {"p": {0}}), 0, parse("[]p"))


def test_text_round_trip():
    m = model(3, [(0, 1), (0, 2)], {"p": {1}, "q": set()})
    assert loads(dumps(m, 0)) == m


def test_upset_counts():
    assert [len(upsets(P)) for P in posets(2)] == [4, 3]


@st.composite
def models(draw, max_worlds=4):
    n = draw(st.integers(1, max_worlds))
    P = draw(st.sampled_from(posets(n)))
    ups = upsets(P)
    val = {}
    for k in "pqr":
        mask = draw(st.sampled_from(ups))
        val[k] = frozenset(w for w in range(n) if mask >> w & 1)
    return KripkeModel(P, val)


@given(models(), assertoric)
def test_persistence(m, f):
    truth = m.truth_set(f)
    for w in truth:
        assert all(u in truth for u in m.worlds if m.le(w, u))


@given(models(), assertoric)
def test_matches_naive_forcing(m, f):
    assert m.truth_set(f) == frozenset(w for w in m.worlds if naive_forces(m, w, f))


@given(models(), assertoric)
def test_upset_algebra_bridge(m, f):
    A, masks = upset_algebra(m)
    v = valuation_in_upset_algebra(m)
    value = masks[evaluate(f, A, v)]
    assert m.truth_set(f) == frozenset(w for w in m.worlds if value >> w & 1)
