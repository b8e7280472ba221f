"""Incremental construction of derivations.

:class:`ProofBuilder` appends lines and reuses a line whenever the same
formula was already derived, so building is idempotent per formula.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Optional

from .calculi import Calculus, match_axiom
from .kernel import (
    WS,
    Axiom,
    Derivation,
    DerivationError,
    ModusPonens,
    Necessitation,
    Premise,
    Step,
    Subst,
    instantiate,
)
from .syntax import IDENTITY, Box, Formula, Imp, Substitution, imps, match, pretty, substitute


class ProofBuilder:
    def __init__(self, calculus: Calculus, mode: str = WS, premises: Iterable[Formula] = ()):
        self.calculus = calculus
        self.mode = mode
        self.premises: list[Formula] = list(premises)
        self.steps: list[Step] = []
        self._line: dict[Formula, int] = {}

    def formula(self, line: int) -> Formula:
        return self.steps[line - 1].formula

    def has(self, f: Formula) -> Optional[int]:
        return self._line.get(f)

    def _emit(self, f: Formula, just) -> int:
        hit = self._line.get(f)
        if hit is not None:
            return hit
        self.steps.append(Step(f, just))
        self._line[f] = len(self.steps)
        return len(self.steps)

    def premise(self, f: Formula) -> int:
        """Cite ``f`` as a premise unless it is already derived."""
        if f in self._line:
            return self._line[f]
        if f not in self.premises:
            self.premises.append(f)
        return self._emit(f, Premise(self.premises.index(f)))

    def axiom(self, f: Formula, ref: Optional[str] = None) -> int:
        """Cite ``f`` as an axiom instance (of ``ref`` if given)."""
        if f in self._line:
            return self._line[f]
        if ref is None:
            found = match_axiom(f, self.calculus)
            if found is None:
                raise DerivationError(f"{pretty(f)} is not an axiom instance of {self.calculus.label}")
            ref, s = found
        else:
            ref = self.calculus.resolve(ref)
            s = match(self.calculus.axiom(ref), f)
            if s is None:
                raise DerivationError(f"{pretty(f)} is not an instance of axiom {ref}")
            s = Substitution(s)
        return self._emit(f, Axiom(ref, s))

    def axiom_instance(self, ref: str, s: Mapping[str, Formula]) -> int:
        ref = self.calculus.resolve(ref)
        s = Substitution(s)
        return self._emit(substitute(self.calculus.axiom(ref), s), Axiom(ref, s))

    def mp(self, minor: int, major: int) -> int:
        a, b = self.formula(minor), self.formula(major)
        if not (isinstance(b, Imp) and b.left == a):
            raise DerivationError(f"cannot apply {pretty(b)} to {pretty(a)}")
        return self._emit(b.right, ModusPonens(minor, major))

    def mp_chain(self, major: int, *minors: int) -> int:
        for m in minors:
            major = self.mp(m, major)
        return major

    def nec(self, line: int) -> int:
        return self._emit(Box(self.formula(line)), Necessitation(line))

    def restate(self, line: int) -> int:
        """Repeat ``line`` verbatim as a new line (an identity substitution)."""
        self.steps.append(Step(self.formula(line), Subst(line, IDENTITY)))
        return len(self.steps)

    def substitute(self, line: int, s: Mapping[str, Formula]) -> int:
        s = Substitution(s)
        return self._emit(substitute(self.formula(line), s), Subst(line, s))

    def include(self, d: Derivation, s: Mapping[str, Formula] = IDENTITY) -> int:
        """Replay ``d`` (instantiated by ``s``) here; its premises become ours.

        Returns the line of the replayed conclusion.
        """
        s = Substitution(s)
        if s:
            d = instantiate(d, s)
        lmap: dict[int, int] = {}
        for k, step in enumerate(d.steps, 1):
            j = step.just
            if isinstance(j, Premise):
                lmap[k] = self.premise(step.formula)
            elif isinstance(j, Axiom):
                ax = d.calculus.axiom(j.ref)
                ref = self.calculus.id_for(ax)
                if ref is None:
                    raise DerivationError(f"axiom {j.ref} is not available in {self.calculus.label}")
                lmap[k] = self._emit(step.formula, Axiom(ref, j.subst))
            elif isinstance(j, ModusPonens):
                lmap[k] = self.mp(lmap[j.minor], lmap[j.major])
            elif isinstance(j, Subst):
                if step.formula == d.formula(j.line):
                    lmap[k] = lmap[j.line]
                else:
                    lmap[k] = self._emit(step.formula, Subst(lmap[j.line], j.subst))
            else:
                lmap[k] = self.nec(lmap[j.line])
        return lmap[len(d.steps)]

    def derive(self, goal: Formula, *lines: int) -> int:
        """Derive ``goal`` from the given lines by implicational reasoning.

        The implication ``l1 -> ... -> ln -> goal`` is abstracted (maximal
        non-implicational parts become variables), proved by search in the
        i-fragment, instantiated back and detached against the lines.
        """
        from .search import abstract, schema

        hit = self._line.get(goal)
        if hit is not None:
            return hit
        target = imps([self.formula(k) for k in lines], goal)
        pattern, back = abstract(target)
        return self.mp_chain(self.include(schema(pattern), back), *lines)

    def derivation(self, conclusion: Optional[int] = None) -> Derivation:
        """Freeze; the chosen line (default: last) becomes the final line."""
        steps = list(self.steps)
        if conclusion is not None and conclusion != len(steps):
            steps.append(Step(steps[conclusion - 1].formula, Subst(conclusion, IDENTITY)))
        return Derivation(self.calculus, tuple(self.premises), tuple(steps), self.mode)
