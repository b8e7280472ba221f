"""Derivation certificates and their verification.

A derivation is a premise list (indexed from 0) plus numbered steps (lines
count from 1).  Each step carries its formula and a justification;
:func:`check` recomputes the formula from the justification and never
trusts it.

Two modes are supported.  ``unrestricted`` allows substitution anywhere.
``ws`` (without substitution into hypotheses) allows a non-trivial
substitution or necessitation only on lines whose ancestry contains no
premise.  A substitution that leaves the line unchanged is a plain
restatement and is allowed in both modes.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .calculi import (
    MODUS_PONENS,
    NECESSITATION,
    SUBSTITUTION,
    Calculus,
    CalculusError,
)
from .syntax import (
    IDENTITY,
    Box,
    Formula,
    Imp,
    Substitution,
    Var,
    pretty,
    substitute,
    variable_names,
    within,
)

WS = "ws"
UNRESTRICTED = "unrestricted"
MODES = (WS, UNRESTRICTED)


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class Premise:
    index: int


@dataclass(frozen=True)
class Axiom:
    ref: str
    subst: Substitution = IDENTITY


@dataclass(frozen=True)
class ModusPonens:
    """``minor`` proves A, ``major`` proves A -> B; the step is B."""

    minor: int
    major: int


@dataclass(frozen=True)
class Subst:
    line: int
    subst: Substitution


@dataclass(frozen=True)
class Necessitation:
    line: int


Justification = Union[Premise, Axiom, ModusPonens, Subst, Necessitation]


@dataclass(frozen=True)
class Step:
    formula: Formula
    just: Justification


@dataclass(frozen=True)
class Derivation:
    calculus: Calculus
    premises: tuple[Formula, ...]
    steps: tuple[Step, ...]
    mode: str = WS

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "steps", tuple(self.steps))
        if self.mode not in MODES:
            raise DerivationError(f"unknown mode {self.mode!r}")

    @property
    def conclusion(self) -> Optional[Formula]:
        return self.steps[-1].formula if self.steps else None

    def __len__(self):
        return len(self.steps)

    def formula(self, line: int) -> Formula:
        return self.steps[line - 1].formula


@dataclass(frozen=True)
class Verdict:
    ok: bool
    diagnostics: tuple[tuple[str, str], ...]
    conclusion: Optional[Formula]

    def report(self) -> str:
        lines = [f"{k:>4}. {status:<4} {msg}" for k, (status, msg) in enumerate(self.diagnostics, 1)]
        tail = pretty(self.conclusion) if self.conclusion is not None else "-"
        lines.append(f"{'ok' if self.ok else 'REJECTED'}: conclusion {tail}")
        return "\n".join(lines)

    def failures(self) -> list[tuple[int, str]]:
        return [(k, msg) for k, (status, msg) in enumerate(self.diagnostics, 1) if status != "OK"]


class _Reject(Exception):
    pass


def _ref(k: int, line: int) -> None:
    if not 1 <= line < k:
        raise _Reject(f"reference to line {line} is not an earlier line")


def _describe(j: Justification) -> str:
    if isinstance(j, Premise):
        return f"premise {j.index}"
    if isinstance(j, Axiom):
        return f"axiom {j.ref}" + (f" {_fmt_subst(j.subst)}" if j.subst else "")
    if isinstance(j, ModusPonens):
        return f"mp {j.minor} {j.major}"
    if isinstance(j, Subst):
        return f"sub {j.line}" + (f" {_fmt_subst(j.subst)}" if j.subst else "")
    return f"nec {j.line}"


def _fmt_subst(s: Substitution) -> str:
    return ",".join(f"{k}:={pretty(v)}" for k, v in s.items())


def _check_step(d: Derivation, k: int, step: Step, dep: list[bool]) -> bool:
    """Validate step ``k``; return whether it depends on a premise."""
    calc = d.calculus
    f, j = step.formula, step.just
    if not within(f, calc.language):
        raise _Reject(f"formula outside the {calc.language} language of {calc.label}")
    if isinstance(j, Premise):
        if not 0 <= j.index < len(d.premises):
            raise _Reject(f"no premise {j.index}")
        if d.premises[j.index] != f:
            raise _Reject(f"premise {j.index} is {pretty(d.premises[j.index])}")
        return True
    if isinstance(j, Axiom):
        try:
            ax = calc.axiom(j.ref)
        except CalculusError as e:
            raise _Reject(str(e)) from None
        if substitute(ax, j.subst) != f:
            raise _Reject(f"not the stated instance of axiom {j.ref}")
        return False
    if isinstance(j, ModusPonens):
        if not calc.has_rule(MODUS_PONENS):
            raise _Reject("modus ponens is not a rule of this calculus")
        _ref(k, j.minor)
        _ref(k, j.major)
        if d.formula(j.major) != Imp(d.formula(j.minor), f):
            raise _Reject(f"line {j.major} is not line {j.minor} -> this formula")
        return dep[j.minor - 1] or dep[j.major - 1]
    if isinstance(j, Subst):
        _ref(k, j.line)
        target = d.formula(j.line)
        if substitute(target, j.subst) != f:
            raise _Reject(f"not the stated substitution instance of line {j.line}")
        if target != f:
            if not calc.has_rule(SUBSTITUTION):
                raise _Reject("substitution is not a rule of this calculus")
            if d.mode == WS and dep[j.line - 1]:
                raise _Reject(f"ws mode forbids substitution into premise-dependent line {j.line}")
        return dep[j.line - 1]
    if isinstance(j, Necessitation):
        if not calc.has_rule(NECESSITATION):
            raise _Reject("necessitation is not a rule of this calculus")
        _ref(k, j.line)
        if Box(d.formula(j.line)) != f:
            raise _Reject(f"not the box of line {j.line}")
        if d.mode == WS and dep[j.line - 1]:
            raise _Reject(f"ws mode forbids necessitation of premise-dependent line {j.line}")
        return dep[j.line - 1]
    raise _Reject(f"unknown justification {j!r}")


def check(d: Derivation) -> Verdict:
    """Verify every step of ``d``; ``ok`` iff all steps pass."""
    if not d.steps:
        return Verdict(False, (("FAIL", "empty derivation"),), None)
    diags = []
    dep: list[bool] = []
    for k, step in enumerate(d.steps, 1):
        try:
            dep.append(_check_step(d, k, step, dep))
            diags.append(("OK", f"{pretty(step.formula)}   [{_describe(step.just)}]"))
        except _Reject as e:
            dep.append(True)
            diags.append(("FAIL", f"{pretty(step.formula)}   [{_describe(step.just)}]: {e}"))
    ok = all(s == "OK" for s, _ in diags)
    return Verdict(ok, tuple(diags), d.conclusion)


def _require_ok(d: Derivation, what: str) -> None:
    v = check(d)
    if not v.ok:
        k, msg = v.failures()[0]
        raise DerivationError(f"{what}: input rejected at line {k}: {msg}")


def premise_dependencies(d: Derivation) -> list[frozenset[int]]:
    """Premise indices in the ancestry of each line."""
    out: list[frozenset[int]] = []
    for step in d.steps:
        j = step.just
        if isinstance(j, Premise):
            out.append(frozenset({j.index}))
        elif isinstance(j, ModusPonens):
            out.append(out[j.minor - 1] | out[j.major - 1])
        elif isinstance(j, (Subst, Necessitation)):
            out.append(out[j.line - 1])
        else:
            out.append(frozenset())
    return out


def is_refined(d: Derivation) -> bool:
    """Substitutions, if any, target axiom or premise lines only."""
    for step in d.steps:
        j = step.just
        if isinstance(j, Subst) and step.formula != d.formula(j.line):
            if not isinstance(d.steps[j.line - 1].just, (Axiom, Premise)):
                return False
    return True


def has_substitution_lines(d: Derivation) -> bool:
    return any(isinstance(s.just, Subst) for s in d.steps)


# ---------------------------------------------------------------------------
# transformations


def refine(d: Derivation) -> Derivation:
    """Push every substitution down to the axioms and premises.

    The derivation is unfolded into the proof tree of its last line (lines
    outside that tree are dropped); a pending substitution is
    carried through modus ponens and necessitation and composed with each
    substitution it meets.  At an axiom it becomes part of the axiom
    justification; at a premise it yields a substitution instance of that
    premise, appended to the premise list.  The result has no substitution
    lines at all.
    """
    _require_ok(d, "refine")
    calc = d.calculus
    premises = list(d.premises)
    prem_at: dict[Formula, int] = {}
    for i, p in enumerate(premises):
        prem_at.setdefault(p, i)
    out: list[Step] = []
    memo: dict[tuple[int, Substitution], int] = {}

    def emit(f, just):
        out.append(Step(f, just))
        return len(out)

    def build(k: int, sigma: Substitution) -> int:
        key = (k, sigma)
        hit = memo.get(key)
        if hit is not None:
            return hit
        step = d.steps[k - 1]
        j = step.just
        f = substitute(step.formula, sigma)
        if isinstance(j, Premise):
            if f == step.formula:
                line = emit(f, j)
            else:
                idx = prem_at.get(f)
                if idx is None:
                    premises.append(f)
                    idx = prem_at[f] = len(premises) - 1
                line = emit(f, Premise(idx))
        elif isinstance(j, Axiom):
            canon = calc.resolve(j.ref)
            ax = calc.axiom(canon)
            t = j.subst.then(sigma).restrict(variable_names(ax))
            line = emit(f, Axiom(canon, t))
        elif isinstance(j, ModusPonens):
            a = build(j.minor, sigma)
            b = build(j.major, sigma)
            line = emit(f, ModusPonens(a, b))
        elif isinstance(j, Subst):
            line = build(j.line, j.subst.then(sigma))
        else:
            a = build(j.line, sigma)
            line = emit(f, Necessitation(a))
        memo[key] = line
        return line

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20 * len(d.steps) + 1000))
    try:
        build(len(d.steps), IDENTITY)
    finally:
        sys.setrecursionlimit(limit)
    return Derivation(calc, tuple(premises), tuple(out), d.mode)


def prune(d: Derivation) -> Derivation:
    """Drop lines outside the ancestry of the last line; premises stay."""
    need = {len(d.steps)}
    for k in range(len(d.steps), 0, -1):
        if k not in need:
            continue
        j = d.steps[k - 1].just
        if isinstance(j, ModusPonens):
            need.update((j.minor, j.major))
        elif isinstance(j, (Subst, Necessitation)):
            need.add(j.line)
    keep = sorted(need)
    new = {old: i for i, old in enumerate(keep, 1)}
    steps = []
    for old in keep:
        step = d.steps[old - 1]
        j = step.just
        if isinstance(j, ModusPonens):
            j = ModusPonens(new[j.minor], new[j.major])
        elif isinstance(j, Subst):
            j = Subst(new[j.line], j.subst)
        elif isinstance(j, Necessitation):
            j = Necessitation(new[j.line])
        steps.append(Step(step.formula, j))
    return Derivation(d.calculus, d.premises, tuple(steps), d.mode)


def _axiom_line(calc: Calculus, ref: str, s: dict) -> Step:
    canon = calc.resolve(ref)
    ax = calc.axiom(canon)
    sub = Substitution(s)
    return Step(substitute(ax, sub), Axiom(canon, sub))


def deduction(d: Derivation, a: Formula) -> Derivation:
    """Discharge premise ``a``: from Γ, a ⊩ B build Γ ⊩ a -> B.

    Uses the two implication axioms (``i.1`` and ``i.2``) in the usual way.
    Only ws derivations are accepted: under unrestricted substitution into
    premises the deduction theorem fails.
    """
    if d.mode != WS:
        raise DerivationError("the deduction theorem needs a ws derivation")
    if a not in d.premises:
        raise DerivationError(f"{pretty(a)} is not a premise")
    _require_ok(d, "deduction")
    calc = d.calculus
    try:
        calc.resolve("i.1")
        calc.resolve("i.2")
    except CalculusError as e:
        raise DerivationError(f"deduction needs group i: {e}") from None

    new_prem = [p for p in d.premises if p != a]
    prem_map = {}
    for i, p in enumerate(d.premises):
        if p != a:
            prem_map[i] = new_prem.index(p)
    deps = premise_dependencies(d)
    discharged = {i for i, p in enumerate(d.premises) if p == a}

    out: list[Step] = []

    def emit(step):
        out.append(step)
        return len(out)

    def f_of(line):
        return out[line - 1].formula

    plain: dict[int, int] = {}
    impl: dict[int, int] = {}
    cache: dict[str, int] = {}

    def a_to_a():
        if "aa" not in cache:
            aa = Imp(a, a)
            s1 = emit(_axiom_line(calc, "i.2", {"p": a, "q": aa, "r": a}))
            s2 = emit(_axiom_line(calc, "i.1", {"p": a, "q": aa}))
            s3 = emit(Step(Imp(Imp(a, aa), aa), ModusPonens(s2, s1)))
            s4 = emit(_axiom_line(calc, "i.1", {"p": a, "q": a}))
            cache["aa"] = emit(Step(aa, ModusPonens(s4, s3)))
        return cache["aa"]

    def get_impl(k):
        if k in impl:
            return impl[k]
        f = d.formula(k)
        kline = emit(_axiom_line(calc, "i.1", {"p": f, "q": a}))
        impl[k] = emit(Step(Imp(a, f), ModusPonens(plain[k], kline)))
        return impl[k]

    for k, step in enumerate(d.steps, 1):
        j, f = step.just, step.formula
        if not (deps[k - 1] & discharged):
            if isinstance(j, Premise):
                nj = Premise(prem_map[j.index])
            elif isinstance(j, ModusPonens):
                nj = ModusPonens(plain[j.minor], plain[j.major])
            elif isinstance(j, Subst):
                nj = Subst(plain[j.line], j.subst)
            elif isinstance(j, Necessitation):
                nj = Necessitation(plain[j.line])
            else:
                nj = j
            plain[k] = emit(Step(f, nj))
            continue
        if isinstance(j, Premise):
            impl[k] = a_to_a()
        elif isinstance(j, ModusPonens):
            fi = d.formula(j.minor)
            ai = get_impl(j.minor)
            aj = get_impl(j.major)
            s = emit(_axiom_line(calc, "i.2", {"p": a, "q": fi, "r": f}))
            t = emit(Step(Imp(Imp(a, fi), Imp(a, f)), ModusPonens(aj, s)))
            impl[k] = emit(Step(Imp(a, f), ModusPonens(ai, t)))
        elif isinstance(j, Subst) and f == d.formula(j.line):
            impl[k] = get_impl(j.line)
        else:
            raise DerivationError(f"line {k} cannot be carried through the deduction theorem")
    last = get_impl(len(d.steps))
    if last != len(out):
        emit(Step(f_of(last), Subst(last, IDENTITY)))
    return Derivation(calc, tuple(new_prem), tuple(out), WS)


def retarget(d: Derivation, target: Calculus) -> Derivation:
    """Re-express ``d`` in ``target`` by matching axioms as formulas."""
    if target == d.calculus:
        return d
    steps = []
    for step in d.steps:
        j = step.just
        if isinstance(j, Axiom):
            ax = d.calculus.axiom(j.ref)
            ref = target.id_for(ax)
            if ref is None:
                raise DerivationError(f"axiom {j.ref} of {d.calculus.label} is not an axiom of {target.label}")
            j = Axiom(ref, j.subst)
        elif isinstance(j, Necessitation) and not target.has_rule(NECESSITATION):
            raise DerivationError(f"{target.label} has no necessitation rule")
        steps.append(Step(step.formula, j))
    for f in list(d.premises) + [s.formula for s in d.steps]:
        if not within(f, target.language):
            raise DerivationError(f"{pretty(f)} is outside the language of {target.label}")
    return Derivation(target, d.premises, tuple(steps), d.mode)


def compose(d1: Derivation, d2: Derivation) -> Derivation:
    """Chain ``d1`` into ``d2``: premises of ``d2`` equal to ``d1``'s conclusion
    are replaced by ``d1`` itself.  The result lives in ``d2``'s calculus."""
    if d1.mode != d2.mode:
        raise DerivationError(f"mode mismatch: {d1.mode} vs {d2.mode}")
    if not d2.steps:
        return d1
    d1 = retarget(d1, d2.calculus)
    goal = d1.conclusion
    out = list(d1.steps)
    premises = list(d1.premises)
    cut = len(out)
    pmap = {}
    for i, p in enumerate(d2.premises):
        if p == goal:
            continue
        if p not in premises:
            premises.append(p)
        pmap[i] = premises.index(p)
    lmap: dict[int, int] = {}
    for k, step in enumerate(d2.steps, 1):
        j = step.just
        if isinstance(j, Premise):
            if d2.premises[j.index] == goal:
                lmap[k] = cut
                continue
            j = Premise(pmap[j.index])
        elif isinstance(j, ModusPonens):
            j = ModusPonens(lmap[j.minor], lmap[j.major])
        elif isinstance(j, Subst):
            j = Subst(lmap[j.line], j.subst)
        elif isinstance(j, Necessitation):
            j = Necessitation(lmap[j.line])
        out.append(Step(step.formula, j))
        lmap[k] = len(out)
    last = lmap[len(d2.steps)]
    if last != len(out):
        out.append(Step(out[last - 1].formula, Subst(last, IDENTITY)))
    return Derivation(d2.calculus, tuple(premises), tuple(out), d2.mode)


def instantiate(d: Derivation, s: Substitution) -> Derivation:
    """Apply ``s`` to every line, premises included.

    Sound for derivations without substitution lines (the result of
    :func:`refine`); other inputs are refined first.
    """
    s = Substitution(s)
    if any(isinstance(st.just, Subst) and st.formula != d.formula(st.just.line) for st in d.steps):
        d = refine(d)
    calc = d.calculus
    steps = []
    for step in d.steps:
        j = step.just
        if isinstance(j, Axiom):
            ax = calc.axiom(j.ref)
            j = Axiom(j.ref, j.subst.then(s).restrict(variable_names(ax)))
        elif isinstance(j, Subst):
            # only restatements remain here; their substitution acted
            # vacuously and might not after instantiation
            j = Subst(j.line, IDENTITY)
        steps.append(Step(substitute(step.formula, s), j))
    premises = tuple(substitute(p, s) for p in d.premises)
    return Derivation(calc, premises, tuple(steps), d.mode)


def erase(d: Derivation, target: Calculus, fn) -> Derivation:
    """Map ``fn`` over every formula of a substitution-free derivation whose
    axioms ``fn`` maps onto axioms of ``target`` (used for box erasure)."""
    steps = []
    for step in d.steps:
        j = step.just
        if isinstance(j, Axiom):
            ax = d.calculus.axiom(j.ref)
            ref = target.id_for(fn(ax))
            if ref is None:
                raise DerivationError(f"axiom {j.ref} has no counterpart in {target.label}")
            j = Axiom(ref, Substitution({k: fn(v) for k, v in j.subst.items()}))
        elif isinstance(j, Subst):
            if step.formula != d.formula(j.line):
                raise DerivationError("erase needs a derivation without substitution lines")
        elif isinstance(j, Necessitation):
            raise DerivationError("erase cannot carry necessitation")
        steps.append(Step(fn(step.formula), j))
    return Derivation(target, tuple(fn(p) for p in d.premises), tuple(steps), d.mode)


def vars_of(d: Derivation) -> list[str]:
    names = set()
    for f in list(d.premises) + [s.formula for s in d.steps]:
        names.update(variable_names(f))
    return sorted(names)


__all__ = [
    "WS", "UNRESTRICTED", "DerivationError", "Premise", "Axiom", "ModusPonens", "Subst",
    "Necessitation", "Step", "Derivation", "Verdict", "check", "refine", "deduction", "compose",
    "instantiate", "retarget", "erase", "prune", "is_refined", "premise_dependencies", "Var",
]
