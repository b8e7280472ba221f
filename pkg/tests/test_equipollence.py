import pytest

from mhcbench.builder import ProofBuilder
from mhcbench.calculi import calculus
from mhcbench.certificates import E_DEMOS, certificate
from mhcbench.equipollence import (
    ANTECEDENT,
    CONSEQUENT,
    TransformError,
    boxdot,
    boxtimes_pass,
    collect_M,
    project_conjunct,
    boxdot_intro,
    boxdot_peirce,
    extract_assertoric,
    run,
    transform,
)
from mhcbench.kernel import Derivation, Necessitation, Premise, Step, check, erase
from mhcbench.calculi import REGISTRY
from mhcbench.syntax import TOP, And, Box, Imp, Var, conj, erase_boxes, parse, peirce, within

p, q, r, s = Var("p"), Var("q"), Var("r"), Var("s")
E = calculus("E")


def five_line():
    return certificate("demo-e-derivation")


def test_collect_M_five_line():
    m = collect_M(five_line())
    assert m.boxes == (Box(p),)
    assert set(m.entries[0].roles) == {ANTECEDENT, CONSEQUENT}
    assert m.instances[Box(p)] == (q,)


def test_collect_M_without_m_axioms():
    b = ProofBuilder(E, premises=[p, Imp(p, q)])
    d = b.derivation(b.mp(b.premise(p), b.premise(Imp(p, q))))
    assert collect_M(d).boxes == ()


def test_collect_M_first_m_axiom():
    m = collect_M(certificate("demo-e-k-chain"))
    assert {Box(p), Box(q), Box(Imp(p, q))} <= set(m.boxes)
    assert (p, q) in m.k_pairs


def test_collect_M_rejects_other_calculi():
    with pytest.raises(TransformError):
        collect_M(certificate("lemma-p-implies-P"))


def test_boxdot_five_line():
    bd = boxdot(collect_M(five_line()))
    assert bd.table[Box(p)] == parse("((q -> p) -> q) -> q")


def test_boxdot_fallback_is_top():
    bd = boxdot(collect_M(certificate("demo-e-k-chain")))
    assert bd.table[Box(p)] == TOP
    assert bd.table[Box(q)] == peirce(r, q)


def two_instances():
    b = ProofBuilder(E, premises=[p])
    bp = b.mp(b.premise(p), b.axiom_instance("m.2", {"p": p}))
    b.mp(bp, b.axiom_instance("m.3", {"p": p, "q": q}))
    last = b.mp(bp, b.axiom_instance("m.3", {"p": p, "q": r}))
    return b.derivation(last)


def test_boxdot_two_instances():
    bd = boxdot(collect_M(two_instances()))
    assert bd.table[Box(p)] == And(peirce(q, p), peirce(r, p))


def test_boxdot_replaces_inner_occurrences_by_top():
    b = ProofBuilder(E)
    line = b.axiom_instance("m.3", {"p": p, "q": Box(p)})
    bd = boxdot(collect_M(b.derivation(line)))
    assert bd.table[Box(p)] == peirce(TOP, p)


@pytest.mark.parametrize("conjuncts", [(), (peirce(q, p),), (peirce(q, p), peirce(r, p), peirce(TOP, p))])
def test_snippets_check(conjuncts):
    y = conj(conjuncts) if conjuncts else TOP
    d2, d3 = boxdot_peirce(p, conjuncts), boxdot_intro(p, conjuncts)
    assert check(d2).ok and d2.conclusion == Imp(Imp(y, p), p) and not d2.premises
    assert check(d3).ok and d3.conclusion == Imp(p, y) and not d3.premises
    for j, c in enumerate(conjuncts):
        d1 = project_conjunct(conjuncts, j)
        assert check(d1).ok and d1.conclusion == Imp(y, c)


def test_transform_five_line():
    tr = transform(five_line())
    d = tr.derivation
    assert check(d).ok
    assert d.calculus.name == "IntBox"
    assert d.premises == (p,)
    assert d.conclusion == parse("((q -> p) -> q) -> q")
    assert tr.hypotheses == ()


def test_transform_without_m_axioms():
    b = ProofBuilder(E, premises=[p, Imp(p, q)])
    d = b.derivation(b.mp(b.premise(p), b.premise(Imp(p, q))))
    out = transform(d).derivation
    assert [st.formula for st in out.steps] == [st.formula for st in d.steps]
    assert out.calculus.name == "IntBox"


def test_transform_with_first_m_axiom_has_hypotheses():
    tr = transform(certificate("demo-e-k-chain"))
    assert check(tr.derivation).ok
    hyps = [h.formula for h in tr.hypotheses]
    assert set(tr.derivation.premises) == {p, Imp(p, q), *hyps}
    assert Imp(TOP, peirce(peirce(r, q), p)) in hyps


def test_boxtimes_five_line_is_identity_pass():
    tr = transform(five_line())
    bt = boxtimes_pass(tr)
    assert bt.heads == ()
    assert [st.formula for st in bt.derivation.steps] == [st.formula for st in tr.derivation.steps]


def test_boxtimes_discharges_hypotheses():
    for name in E_DEMOS[1:]:
        d = certificate(name)
        bt = boxtimes_pass(transform(d))
        assert check(bt.derivation).ok
        assert bt.derivation.premises == d.premises


def same_antecedent_twice():
    """K on (p, q) and (p, r): two residual hypotheses headed by p."""
    b = ProofBuilder(E, premises=[p, Imp(p, q), Imp(p, r)])

    def boxed(f):
        return b.mp(b.premise(f), b.axiom_instance("m.2", {"p": f}))

    bp = boxed(p)
    bq = b.mp(bp, b.mp(boxed(Imp(p, q)), b.axiom_instance("m.1", {"p": p, "q": q})))
    b.mp(bp, b.mp(boxed(Imp(p, r)), b.axiom_instance("m.1", {"p": p, "q": r})))
    return b.derivation(b.mp(bq, b.axiom_instance("m.3", {"p": q, "q": s})))


def test_two_residuals_on_one_head():
    d = same_antecedent_twice()
    assert check(d).ok
    tr = transform(d)
    bt = boxtimes_pass(tr)
    yq, yr = bt.table[Box(q)], bt.table[Box(r)]
    assert bt.table[Box(p)] == And(peirce(yq, p), peirce(yr, p))
    assert check(bt.derivation).ok and bt.derivation.premises == d.premises


def test_extract_five_line():
    ex = extract_assertoric(boxtimes_pass(transform(five_line())).derivation, p, peirce(q, p))
    assert check(ex.derivation).ok
    assert ex.derivation.calculus.name == "Int"
    assert ex.derivation.conclusion == parse("((q -> p) -> q) -> q")
    assert ex.converse_ok
    assert "Int + p ⊢" in ex.report


def test_extract_uses_instances_of_A():
    d = certificate("demo-e-k-chain")
    A = parse("a -> b")
    bt = boxtimes_pass(transform(d))
    with pytest.raises(TransformError):
        extract_assertoric(bt.derivation, A, d.conclusion)
    ex = extract_assertoric(bt.derivation, [p, A], d.conclusion)
    assert check(ex.derivation).ok


def test_extract_passthrough():
    b = ProofBuilder(REGISTRY["IntBox"])
    d = b.derivation(b.derive(Imp(q, q)))
    ex = extract_assertoric(d, p, Imp(q, q))
    assert ex.derivation.premises == (p,) and check(ex.derivation).ok


def test_extract_rejects_modal_B():
    d = boxtimes_pass(transform(five_line())).derivation
    with pytest.raises(TransformError):
        extract_assertoric(d, p, Box(p))


def test_extract_rejects_m_axiom_lines():
    with pytest.raises(TransformError):
        extract_assertoric(five_line(), p, peirce(q, p))


def test_rejects_unchecked_input():
    with pytest.raises(TransformError):
        transform(Derivation(E, [], [Step(p, Premise(0))]))
    with pytest.raises(TransformError):
        transform(Derivation(E, [p], [Step(p, Premise(0)), Step(Box(p), Necessitation(1))]))


def test_scope_guard():
    b = ProofBuilder(E)
    line = b.axiom_instance("i.1", {"p": Box(r), "q": q})
    with pytest.raises(TransformError):
        transform(b.derivation(line))


@pytest.mark.parametrize("name", E_DEMOS)
def test_pipeline_end_to_end(name):
    d = certificate(name)
    res = run(d)
    for stage in (res.stage1.derivation, res.stage2.derivation, res.final.derivation):
        assert check(stage).ok
    final = res.final.derivation
    assert final.conclusion == d.conclusion
    assert all(within(f, "assertoric") for f in [st.formula for st in final.steps])
    assert res.final.converse_ok
    # every line of the second stage erases to an Int line
    assert check(erase(res.stage2.derivation, REGISTRY["Int"], erase_boxes)).ok
