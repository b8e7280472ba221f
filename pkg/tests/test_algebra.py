import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mhcbench import algebra as alg
from mhcbench.algebra import (
    E_ALGEBRA,
    K4GRZ,
    KUZ,
    MODAL_HEYTING,
    AlgebraError,
    ModalAlgebra,
    all_box_tables,
    boxes,
    chain,
    check_lob_chains,
    classify,
    double,
    evaluate,
    find_countermodel,
    from_order,
    heyting_algebras,
    heyting_from_poset,
    lob_chains_hold,
    make_poset,
    modal_algebras,
    posets,
    powerset,
    refute,
    valid,
    weakening_witness,
)
from mhcbench.calculi import GROUPS, REGISTRY
from mhcbench.syntax import TOP, Box, Var, parse

from conftest import modal

p, q = Var("p"), Var("q")
ALPHA0 = parse("[]p -> ((q -> p) -> q) -> q")


def test_poset_counts():
    # unlabelled posets: 1, 1, 2, 5, 16, 63
    assert [len(posets(n)) for n in range(6)] == [1, 1, 2, 5, 16, 63]


def test_small_downset_algebras():
    one = heyting_from_poset(make_poset(1))
    assert one.size == 2 and one.is_boolean
    two_chain = heyting_from_poset(make_poset(2, [(0, 1)]))
    assert two_chain.size == 3 and not two_chain.is_boolean
    assert two_chain.labels == ("0", "a", "1")
    anti = heyting_from_poset(make_poset(2))
    assert anti.size == 4 and anti.is_boolean


def test_algebras_satisfy_the_laws():
    for _, A in heyting_algebras(max_poset=4):
        A.check_laws()


def test_downset_tables_match_brute_force():
    for poset, A in heyting_algebras(max_poset=4):
        pairs = [(x, y) for x in A.elements for y in A.elements if x != y and A.leq[x][y]]
        B = from_order(A.size, pairs)
        assert (B.meet, B.join, B.imp, B.bottom, B.top) == (A.meet, A.join, A.imp, A.bottom, A.top)


def test_int_axioms_valid_up_to_five_elements():
    axioms = [f for g in ("i", "c", "d", "n") for f in GROUPS[g]]
    for _, A in heyting_algebras(max_size=5):
        assert all(valid(ax, A) for ax in axioms)


def test_from_order_rejects_non_lattices():
    with pytest.raises(AlgebraError):
        from_order(4, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 2), (2, 1)])
    with pytest.raises(AlgebraError):
        # the pentagon is a lattice but not distributive
        from_order(5, [(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])


def test_classify_examples():
    c3 = chain(3)
    m = ModalAlgebra(c3, (2, 2, 2))
    assert MODAL_HEYTING in m.classes and KUZ not in m.classes
    b2 = ModalAlgebra(powerset(1), (0, 1))
    assert {MODAL_HEYTING, KUZ, E_ALGEBRA, K4GRZ} <= b2.classes
    assert classify(ModalAlgebra(c3, (0, 1, 1))) == frozenset()


def test_evaluation_examples():
    b2 = ModalAlgebra(powerset(1), (0, 1))
    assert evaluate(parse("p -> q"), b2, {"p": 1, "q": 0}) == 0
    m = ModalAlgebra(chain(3), (2, 2, 2))
    assert evaluate(Box(p), m, {"p": 0}) == 2
    assert evaluate(ALPHA0, m, {"p": 0, "q": 1}) == 1


def test_separation_failure_algebra():
    m = ModalAlgebra(chain(3), (2, 2, 2))
    assert all(valid(ax, m) for g in ("i", "m1") for ax in GROUPS[g])
    assert not valid(ALPHA0, m)


def test_e_is_strictly_below_km():
    m = ModalAlgebra(powerset(1), (0, 1))
    assert all(valid(ax, m) for ax in REGISTRY["E"].axiom_formulas)
    assert refute(parse("([]p -> p) -> p"), m) == {"p": 0}


def test_find_countermodel_separation():
    require = list(GROUPS["i"]) + list(GROUPS["m1"])
    m, v = find_countermodel(ALPHA0, [MODAL_HEYTING], 3, require)
    assert m.base.labels == ("0", "a", "1") and m.box == (2, 2, 2)
    assert v == {"p": 0, "q": 1}


def test_find_countermodel_top():
    assert find_countermodel(TOP, [MODAL_HEYTING], 4) is None


@pytest.mark.parametrize("inflationary", [False, True])
def test_box_enumeration_matches_brute_force(inflationary):
    for _, A in heyting_algebras(max_size=5):
        fast = boxes(A, inflationary)
        slow = sorted(t for t in all_box_tables(A)
                      if MODAL_HEYTING in ModalAlgebra(A, t).classes
                      and (not inflationary or all(A.leq[x][t[x]] for x in A.elements)))
        assert fast == slow


def test_kuz_and_kuzstar_axioms_agree():
    kuz, kuzstar = GROUPS["kuz"][0], GROUPS["kuzstar"][0]
    for m in modal_algebras([MODAL_HEYTING], max_size=4):
        assert valid(kuz, m) == valid(kuzstar, m)


def test_double_examples():
    b2 = ModalAlgebra(powerset(1), (0, 1))
    d = double(b2)
    assert d.box[2 * 1 + 0] == 2 * 1 + 1
    assert d.box[2 * 0 + 1] == 0
    assert d.box[d.base.top] == d.base.top
    d.base.check_laws()


def test_double_preserves_k4grz():
    n = 0
    for m in modal_algebras([K4GRZ], max_size=4):
        assert K4GRZ in double(m).classes
        n += 1
    assert n > 0


def test_double_needs_boolean_base():
    with pytest.raises(AlgebraError):
        double(ModalAlgebra(chain(3), (2, 2, 2)))


def test_weakening_witness_example():
    b2 = ModalAlgebra(powerset(1), (0, 1))
    B, lv, refuted = weakening_witness(b2, p, {"p": 0})
    assert refuted and evaluate(Box(p), B, lv) == 0
    with pytest.raises(AlgebraError):
        weakening_witness(b2, p, {"p": 1})


def test_lob_chain_example():
    m = ModalAlgebra(chain(2), (0, 1))
    assert lob_chains_hold(m) == (True, True)


def test_lob_chains_up_to_five_elements():
    ms = list(modal_algebras([MODAL_HEYTING], max_size=5, inflationary=True))
    assert ms and all(check_lob_chains(m) for m in ms)


def test_lob_chains_need_inflationary_box():
    with pytest.raises(AlgebraError):
        check_lob_chains(ModalAlgebra(chain(3), (0, 0, 2)))


def test_text_round_trip():
    m = ModalAlgebra(chain(3), (2, 2, 2))
    text = alg.dumps(m, {"p": 0, "q": 1})
    m2, v = alg.loads(text)
    assert m2 == m and v == {"p": 0, "q": 1}


def test_loads_errors():
    with pytest.raises(AlgebraError):
        alg.loads("size 3\norder 0 1\nbox 0 2\n")
    with pytest.raises(AlgebraError):
        alg.loads("order 0 1\n")
    with pytest.raises(AlgebraError):
        alg.loads("size 2\nfrobnicate\n")


SMALL = [m for m in modal_algebras([MODAL_HEYTING], max_size=4)]


@given(st.sampled_from(SMALL), modal, st.data())
def test_double_projects_onto_the_base(m, f, data):
    if not m.base.is_boolean:
        return
    d = double(m)
    v = {n: data.draw(st.integers(0, d.size - 1)) for n in "pqr"}
    first = {n: e // 2 for n, e in v.items()}
    assert evaluate(f, d, v) // 2 == evaluate(f, m, first)


@given(st.sampled_from(SMALL), modal, st.data())
def test_weakening_on_random_refutations(m, f, data):
    if not m.base.is_boolean:
        return
    v = {n: data.draw(st.integers(0, m.size - 1)) for n in "pqr"}
    if evaluate(f, m, v) != m.base.top:
        assert weakening_witness(m, f, v)[2]


@given(st.sampled_from(SMALL), st.data())
def test_box_is_monotone(m, data):
    x, y = data.draw(st.integers(0, m.size - 1)), data.draw(st.integers(0, m.size - 1))
    if m.base.leq[x][y]:
        assert m.base.leq[m.box[x]][m.box[y]]
