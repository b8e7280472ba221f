"""The translations t: modal → bimodal, s: bimodal → modal, and s∘t.

``t`` puts a circle on variables and in front of every implication,
negation and box; ``s`` reads ``○a`` as ``s(a) ∧ □s(a)`` and commutes with
everything else.
"""

from __future__ import annotations

from .syntax import And, Box, Circle, Formula, Imp, Not, Or, Var, children, rebuild


class TranslationError(ValueError):
    pass


def gmt_t(a: Formula) -> Formula:
    if isinstance(a, Var):
        return Circle(a)
    if isinstance(a, (And, Or)):
        return type(a)(gmt_t(a.left), gmt_t(a.right))
    if isinstance(a, Imp):
        return Circle(Imp(gmt_t(a.left), gmt_t(a.right)))
    if isinstance(a, Not):
        return Circle(Not(gmt_t(a.arg)))
    if isinstance(a, Box):
        return Circle(Box(gmt_t(a.arg)))
    raise TranslationError("t is defined on the modal language only (found a circle)")


def split_s(b: Formula) -> Formula:
    cache: dict[Formula, Formula] = {}

    def go(g):
        hit = cache.get(g)
        if hit is not None:
            return hit
        if isinstance(g, Var):
            out = g
        elif isinstance(g, Circle):
            inner = go(g.arg)
            out = And(inner, Box(inner))
        else:
            out = rebuild(g, tuple(go(k) for k in children(g)))
        cache[g] = out
        return out

    return go(b)


def embed(a: Formula) -> Formula:
    """``s(t(a))``, a modal formula."""
    return split_s(gmt_t(a))
