"""Goal-directed proof search for the implicational fragment of Int.

Formulas whose main connective is not ``->`` are treated as atoms.  The
search works on sequents ``Γ ⊢ G``: an implication goal is introduced, an
atomic goal is closed by a hypothesis ``A1 -> ... -> An -> G`` whose
premises are then proved in turn.  A sequent repeated on the current branch
is a loop and fails.  Proofs come out as lambda terms and are compiled into
Hilbert derivations that use only the two axioms of group ``i``; the kernel
checks the result like any other derivation.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from .calculi import Calculus, REGISTRY, fragment
from .kernel import WS, Derivation, Premise, Step, deduction
from .syntax import ASSERTORIC, Formula, Imp, Substitution, Var, render, within


@dataclass(frozen=True)
class Hyp:
    formula: Formula


@dataclass(frozen=True)
class App:
    fun: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    formula: Formula
    body: "Term"


Term = Union[Hyp, App, Lam]


def _unwind(h: Formula) -> tuple[list[Formula], Formula]:
    args = []
    while isinstance(h, Imp):
        args.append(h.left)
        h = h.right
    return args, h


def _search(ctx: frozenset, goal: Formula, depth: int, seen: frozenset) -> Optional[Term]:
    if isinstance(goal, Imp):
        body = _search(ctx | {goal.left}, goal.right, depth, seen)
        return None if body is None else Lam(goal.left, body)
    if goal in ctx:
        return Hyp(goal)
    key = (ctx, goal)
    if depth == 0 or key in seen:
        return None
    seen = seen | {key}
    for h in sorted(ctx, key=render):
        args, head = _unwind(h)
        if head != goal or not args:
            continue
        term: Term = Hyp(h)
        for a in args:
            sub = _search(ctx, a, depth - 1, seen)
            if sub is None:
                break
            term = App(term, sub)
        else:
            return term
    return None


def prove(goal: Formula, hypotheses=(), max_depth: int = 12) -> Optional[Term]:
    """A proof term for ``hypotheses ⊢ goal``, or None within ``max_depth``.

    Iterative deepening keeps the first proof found short.
    """
    ctx = frozenset(hypotheses)
    for depth in range(1, max_depth + 1):
        t = _search(ctx, goal, depth, frozenset())
        if t is not None:
            return t
    return None


def term_conclusion(t: Term) -> Formula:
    if isinstance(t, Hyp):
        return t.formula
    if isinstance(t, Lam):
        return Imp(t.formula, term_conclusion(t.body))
    return term_conclusion(t.fun).right


def compile_term(t: Term, calc: Calculus) -> Derivation:
    """A ws derivation of the term's type from its free hypotheses."""
    from .builder import ProofBuilder

    if isinstance(t, Hyp):
        return Derivation(calc, (t.formula,), (Step(t.formula, Premise(0)),), WS)
    if isinstance(t, App):
        b = ProofBuilder(calc)
        i = b.include(compile_term(t.arg, calc))
        j = b.include(compile_term(t.fun, calc))
        return b.derivation(b.mp(i, j))
    body = compile_term(t.body, calc)
    if t.formula in body.premises:
        return deduction(body, t.formula)
    b = ProofBuilder(calc)
    i = b.include(body)
    k = b.axiom_instance("i.1", {"p": body.conclusion, "q": t.formula})
    return b.derivation(b.mp(i, k))


INT_I = fragment(REGISTRY["Int"], ["i"])
INTBOX_I = fragment(REGISTRY["IntBox"], ["i"])


def abstract(f: Formula) -> tuple[Formula, Substitution]:
    """Replace maximal non-implicational subformulas by ``a0, a1, ...``.

    Returns the pattern and the substitution that maps it back onto ``f``.
    """
    names: dict[Formula, Var] = {}

    def go(g):
        if isinstance(g, Imp):
            return Imp(go(g.left), go(g.right))
        if g not in names:
            names[g] = Var(f"a{len(names)}")
        return names[g]

    pattern = go(f)
    return pattern, Substitution({v.name: g for g, v in names.items()})


@lru_cache(maxsize=None)
def schema(goal: Formula, max_depth: int = 12) -> Derivation:
    """A closed derivation of an implicational theorem in the i-fragment
    (of Int for assertoric goals, of IntBox otherwise)."""
    t = prove(goal, (), max_depth)
    if t is None:
        raise ValueError(f"no implicational proof of {render(goal)} found")
    d = compile_term(t, INT_I if within(goal, ASSERTORIC) else INTBOX_I)
    if d.premises:
        raise AssertionError("closed term compiled with premises")
    return d


__all__ = ["Hyp", "App", "Lam", "prove", "compile_term", "schema", "abstract", "term_conclusion", "INT_I"]
