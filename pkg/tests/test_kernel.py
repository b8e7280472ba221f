import pytest
from hypothesis import given
from hypothesis import strategies as st

from mhcbench.calculi import calculus, fragment
from mhcbench.kernel import (
    UNRESTRICTED,
    WS,
    Axiom,
    Derivation,
    DerivationError,
    ModusPonens,
    Necessitation,
    Premise,
    Step,
    Subst,
    check,
    compose,
    deduction,
    has_substitution_lines,
    instantiate,
    is_refined,
    premise_dependencies,
    prune,
    refine,
    retarget,
)
from mhcbench.syntax import IDENTITY, Box, Imp, Substitution, Var, parse, substitute

from conftest import assertoric

p, q, r = Var("p"), Var("q"), Var("r")
INT = calculus("Int")
INT_I = fragment(INT, ["i"])


def S(**kw):
    return Substitution(kw)


def test_modus_ponens_from_premises():
    d = Derivation(INT, [p, Imp(p, q)],
                   [Step(p, Premise(0)), Step(Imp(p, q), Premise(1)), Step(q, ModusPonens(1, 2))], UNRESTRICTED)
    v = check(d)
    assert v.ok and v.conclusion == q


def test_ws_forbids_substitution_into_premise_lines():
    steps = [Step(p, Premise(0)), Step(q, Subst(1, S(p=q)))]
    v = check(Derivation(INT, [p], steps, WS))
    assert not v.ok
    assert [k for k, _ in v.failures()] == [2]
    assert check(Derivation(INT, [p], steps, UNRESTRICTED)).ok


def test_ws_allows_restatement_of_premise_lines():
    steps = [Step(p, Premise(0)), Step(p, Subst(1, IDENTITY))]
    assert check(Derivation(INT, [p], steps, WS)).ok


def test_ws_allows_substitution_into_closed_lines():
    steps = [Step(parse("p -> q -> p"), Axiom("i.1", IDENTITY)),
             Step(parse("r -> q -> r"), Subst(1, S(p=r)))]
    assert check(Derivation(INT_I, [], steps, WS)).ok


def test_wrong_formula_is_rejected():
    steps = [Step(parse("p -> q -> q"), Axiom("i.1", IDENTITY))]
    v = check(Derivation(INT, [], steps))
    assert not v.ok


def test_mp_shape_is_checked():
    steps = [Step(p, Premise(0)), Step(Imp(q, r), Premise(1)), Step(r, ModusPonens(1, 2))]
    assert not check(Derivation(INT, [p, Imp(q, r)], steps)).ok


def test_forward_reference_is_rejected():
    steps = [Step(q, ModusPonens(2, 3)), Step(p, Premise(0)), Step(Imp(p, q), Premise(1))]
    assert not check(Derivation(INT, [p, Imp(p, q)], steps)).ok


def test_axiom_outside_fragment_is_rejected():
    steps = [Step(parse("p & q -> p"), Axiom("c.1", IDENTITY))]
    assert check(Derivation(INT, [], steps)).ok
    assert not check(Derivation(INT_I, [], steps)).ok


def test_necessitation_needs_the_rule():
    steps = [Step(parse("p -> q -> p"), Axiom("i.1", IDENTITY)), Step(Box(parse("p -> q -> p")), Necessitation(1))]
    assert not check(Derivation(calculus("IntBox"), [], steps)).ok
    assert check(Derivation(calculus("K4Grz"), [], steps)).ok


def test_necessitation_on_premise_lines_in_ws():
    steps = [Step(p, Premise(0)), Step(Box(p), Necessitation(1))]
    assert not check(Derivation(calculus("K4Grz"), [p], steps, WS)).ok
    assert check(Derivation(calculus("K4Grz"), [p], steps, UNRESTRICTED)).ok


def test_language_guard():
    steps = [Step(Box(p), Premise(0))]
    assert not check(Derivation(INT, [Box(p)], steps)).ok


def test_premise_dependencies():
    d = Derivation(INT, [p, Imp(p, q)],
                   [Step(p, Premise(0)), Step(Imp(p, q), Premise(1)), Step(q, ModusPonens(1, 2)),
                    Step(parse("p -> q -> p"), Axiom("i.1", IDENTITY))])
    assert premise_dependencies(d) == [frozenset({0}), frozenset({1}), frozenset({0, 1}), frozenset()]


def test_refine_pushes_substitution_into_axiom():
    d = Derivation(INT, [], [Step(parse("p -> p -> p"), Axiom("i.1", S(q=p))),
                             Step(parse("q -> q -> q"), Subst(1, S(p=q)))])
    out = refine(d)
    assert len(out) == 1
    assert out.steps[0].formula == parse("q -> q -> q")
    assert out.steps[0].just == Axiom("i.1", S(p=q))
    assert check(out).ok


def test_refine_through_modus_ponens():
    i2 = parse("(p -> (q -> p) -> p) -> (p -> q -> p) -> p -> p")
    a1 = parse("p -> (q -> p) -> p")
    a2 = parse("p -> q -> p")
    steps = [
        Step(i2, Axiom("i.2", S(q=Imp(q, p), r=p))),
        Step(a1, Axiom("i.1", S(q=Imp(q, p)))),
        Step(parse("(p -> q -> p) -> p -> p"), ModusPonens(2, 1)),
        Step(a2, Axiom("i.1", IDENTITY)),
        Step(parse("p -> p"), ModusPonens(4, 3)),
        Step(parse("r & r -> r & r"), Subst(5, S(p=parse("r & r")))),
    ]
    d = Derivation(INT, [], steps)
    assert check(d).ok
    out = refine(d)
    assert check(out).ok and is_refined(out)
    assert not has_substitution_lines(out)
    assert out.conclusion == d.conclusion


def test_refine_premise_instance_becomes_premise():
    d = Derivation(INT, [p], [Step(p, Premise(0)), Step(q, Subst(1, S(p=q)))], UNRESTRICTED)
    out = refine(d)
    assert check(out).ok
    assert q in out.premises and out.conclusion == q


def test_refine_fixpoint():
    d = Derivation(INT, [p, Imp(p, q)],
                   [Step(p, Premise(0)), Step(Imp(p, q), Premise(1)), Step(q, ModusPonens(1, 2))])
    assert refine(d).steps == d.steps


def test_deduction_one_line():
    d = Derivation(INT_I, [p], [Step(p, Premise(0))])
    out = deduction(d, p)
    assert check(out).ok
    assert out.conclusion == Imp(p, p) and out.premises == ()


def test_deduction_modus_ponens():
    d = Derivation(INT_I, [p, Imp(p, q)],
                   [Step(p, Premise(0)), Step(Imp(p, q), Premise(1)), Step(q, ModusPonens(1, 2))])
    out = deduction(d, Imp(p, q))
    assert check(out).ok
    assert out.conclusion == parse("(p -> q) -> q") and out.premises == (p,)
    assert check(deduction(out, p)).ok


def test_deduction_needs_ws():
    d = Derivation(INT_I, [p], [Step(p, Premise(0))], UNRESTRICTED)
    with pytest.raises(DerivationError):
        deduction(d, p)


def test_compose_replaces_premise():
    d1 = Derivation(INT_I, [], [Step(parse("p -> q -> p"), Axiom("i.1", IDENTITY))])
    a = parse("p -> q -> p")
    d2 = Derivation(INT_I, [p, a], [Step(p, Premise(0)), Step(a, Premise(1)), Step(parse("q -> p"), ModusPonens(1, 2))])
    out = compose(d1, d2)
    assert check(out).ok
    assert out.premises == (p,) and out.conclusion == parse("q -> p")


def test_compose_empty_continuation():
    d1 = Derivation(INT_I, [], [Step(parse("p -> q -> p"), Axiom("i.1", IDENTITY))])
    assert compose(d1, Derivation(INT_I, [], [])) == d1


def test_compose_mismatched_calculi():
    d1 = Derivation(calculus("E"), [], [Step(parse("p -> []p"), Axiom("m.2", IDENTITY))])
    d2 = Derivation(INT, [parse("p -> []p")], [Step(parse("p -> []p"), Premise(0))])
    with pytest.raises(DerivationError):
        compose(d1, d2)


def test_retarget_by_formula():
    d = Derivation(INT_I, [], [Step(parse("p -> q -> p"), Axiom("i.1", IDENTITY))])
    e = retarget(d, calculus("E"))
    assert check(e).ok and e.calculus.name == "E"


# ---------------------------------------------------------------------------
# random derivations


@st.composite
def derivations(draw):
    """Random ws derivations in Int_i from premises p and p -> q."""
    premises = [p, Imp(p, q)]
    steps = [Step(p, Premise(0)), Step(Imp(p, q), Premise(1))]
    closed = [False, False]
    for _ in range(draw(st.integers(1, 8))):
        kind = draw(st.sampled_from(["ax", "mp", "mp", "sub"]))
        if kind == "mp":
            pairs = [(i, j) for i in range(len(steps)) for j in range(len(steps))
                     if isinstance(steps[j].formula, Imp) and steps[j].formula.left == steps[i].formula]
            if pairs:
                i, j = draw(st.sampled_from(pairs))
                steps.append(Step(steps[j].formula.right, ModusPonens(i + 1, j + 1)))
                closed.append(closed[i] and closed[j])
                continue
        if kind == "sub":
            pool = [i for i, c in enumerate(closed) if c]
            if pool:
                i = draw(st.sampled_from(pool))
                s = S(p=draw(st.sampled_from([q, r, Imp(p, q)])))
                steps.append(Step(substitute(steps[i].formula, s), Subst(i + 1, s)))
                closed.append(True)
                continue
        ref = draw(st.sampled_from(["i.1", "i.2"]))
        s = S(**{v: draw(st.sampled_from([p, q, Imp(p, q), Imp(q, p)])) for v in "pqr"})
        steps.append(Step(substitute(INT_I.axiom(ref), s), Axiom(ref, s)))
        closed.append(True)
    return Derivation(INT_I, premises, steps, WS)


@given(derivations())
def test_random_derivations_check(d):
    assert check(d).ok


@given(derivations(), st.data())
def test_corrupted_line_is_rejected(d, data):
    k = data.draw(st.integers(0, len(d.steps) - 1))
    steps = list(d.steps)
    bad = Imp(steps[k].formula, r)
    steps[k] = Step(bad, steps[k].just)
    v = check(Derivation(d.calculus, d.premises, steps, d.mode))
    assert not v.ok
    assert (k + 1) in [i for i, _ in v.failures()]


@given(derivations())
def test_refine_preserves_conclusion(d):
    out = refine(d)
    assert check(out).ok
    assert not has_substitution_lines(out)
    assert out.conclusion == d.conclusion


@given(derivations())
def test_deduction_discharges_each_premise(d):
    for a in d.premises:
        out = deduction(d, a)
        assert check(out).ok
        assert out.conclusion == Imp(a, d.conclusion)
        assert a not in out.premises


@given(derivations())
def test_prune_keeps_conclusion(d):
    out = prune(d)
    assert check(out).ok and out.conclusion == d.conclusion
    assert len(out) <= len(d)


@given(derivations(), assertoric)
def test_instantiate_closed_derivations(d, a):
    d = deduction(deduction(d, Imp(p, q)), p)
    out = instantiate(d, S(q=a))
    assert check(out).ok
    assert out.conclusion == substitute(d.conclusion, S(q=a))
