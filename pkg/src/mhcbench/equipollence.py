"""From E-derivations of assertoric conclusions to Int-derivations.

The pipeline has three stages.

:func:`transform`
    Collects the box formulas ``□α`` used by m-axiom instances, defines for
    each a box-free stand-in ``⊡α`` (a conjunction of Peirce formulas, or
    ⊤) and rebuilds the derivation in Int□ line by line: plain lines are
    rewritten with ``□α ↦ ⊡α``; m-axiom instances are replaced by short
    Int derivations.  The first m-axiom needs two hypotheses per instance,
    which become extra premises.
:func:`boxtimes_pass`
    Rebuilds once more with stronger stand-ins ``⊠γ`` that make those
    hypotheses derivable, leaving only the (rewritten) original premises.
:func:`extract_assertoric`
    Erases all boxes and prefixes substitution steps, giving an ordinary
    Int derivation ``A ⊢ B``.

Each stage emits explicit derivation lines that the kernel re-checks.
Formulas are mapped by tracking where each line came from, never by
searching for stand-ins inside formulas, so a stand-in equal to ⊤ cannot
be confused with an unrelated ``p → p``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Union

from .builder import ProofBuilder
from .calculi import REGISTRY, fragment
from .certificates import certificate
from .kernel import (
    UNRESTRICTED,
    Axiom,
    Derivation,
    DerivationError,
    ModusPonens,
    Necessitation,
    Premise,
    Step,
    Subst,
    check,
    deduction,
    erase,
    has_substitution_lines,
    refine,
    retarget,
)
from .syntax import (
    ASSERTORIC,
    IDENTITY,
    TOP,
    Box,
    Formula,
    Imp,
    Substitution,
    Var,
    conj,
    erase_boxes,
    match,
    peirce,
    pretty,
    replace,
    subformulas,
    substitute,
    within,
)

INTBOX = REGISTRY["IntBox"]
INTBOX_IC = fragment(INTBOX, ["i", "c"])
INT = REGISTRY["Int"]
E = REGISTRY["E"]

# roles of M-members
ANTECEDENT = "antecedent"
CONSEQUENT = "consequent"


class TransformError(ValueError):
    pass


# ---------------------------------------------------------------------------
# M(D) and the stand-ins


@dataclass(frozen=True)
class MEntry:
    box: Formula
    roles: tuple[str, ...]

    @property
    def alpha(self) -> Formula:
        return self.box.arg


@dataclass(frozen=True)
class MSet:
    """Box formulas of the derivation in first-occurrence order, the
    distinct β of third-m-axiom instances per box, and the (α, β) pairs of
    first-m-axiom instances."""

    entries: tuple[MEntry, ...]
    instances: dict
    k_pairs: tuple[tuple[Formula, Formula], ...]

    @property
    def boxes(self) -> tuple[Formula, ...]:
        return tuple(e.box for e in self.entries)

    def __contains__(self, box) -> bool:
        return box in self.boxes


def _m_axiom(d: Derivation, step: Step) -> Optional[tuple[int, Formula, Formula]]:
    j = step.just
    if not isinstance(j, Axiom):
        return None
    ref = d.calculus.resolve(j.ref)
    if not ref.startswith("m."):
        return None
    k = int(ref.split(".")[1])
    return k, j.subst.get("p", Var("p")), j.subst.get("q", Var("q"))


def _require_e(d: Derivation) -> None:
    if d.calculus.name != "E":
        raise TransformError(f"expected a derivation in E, got {d.calculus.label}")
    v = check(d)
    if not v.ok:
        k, msg = v.failures()[0]
        raise TransformError(f"input rejected at line {k}: {msg}")
    if any(isinstance(s.just, Necessitation) for s in d.steps):
        raise TransformError("E has no necessitation rule")


def collect_M(d: Derivation) -> MSet:
    """Scan the axiom lines of a refined E-derivation."""
    _require_e(d)
    if has_substitution_lines(d) and any(
            isinstance(s.just, Subst) and s.formula != d.formula(s.just.line) for s in d.steps):
        raise TransformError("derivation is not refined; apply refine first")
    roles: dict[Formula, list[str]] = {}
    instances: dict[Formula, list[Formula]] = {}
    k_pairs: list[tuple[Formula, Formula]] = []

    def note(box, role):
        rs = roles.setdefault(box, [])
        if role not in rs:
            rs.append(role)
        instances.setdefault(box, [])

    for step in d.steps:
        m = _m_axiom(d, step)
        if m is None:
            continue
        k, a, b = m
        if k == 1:
            note(Box(Imp(a, b)), ANTECEDENT)
            note(Box(a), CONSEQUENT)
            note(Box(b), CONSEQUENT)
            if (a, b) not in k_pairs:
                k_pairs.append((a, b))
        elif k == 2:
            note(Box(a), CONSEQUENT)
        else:
            note(Box(a), ANTECEDENT)
            if b not in instances[Box(a)]:
                instances[Box(a)].append(b)
    entries = tuple(MEntry(box, tuple(rs)) for box, rs in roles.items())
    return MSet(entries, {k: tuple(v) for k, v in instances.items()}, tuple(k_pairs))


@dataclass(frozen=True)
class BoxdotMap:
    """``□α ↦ ⊡α`` together with the conjunct list of each ``⊡α``."""

    table: dict
    conjuncts: dict
    warnings: tuple[str, ...] = ()

    def replacement(self) -> list[tuple[Formula, Formula]]:
        return list(self.table.items())


def boxdot(mset: MSet) -> BoxdotMap:
    """``⊡α = ⋀_j P(β_j, α)[□α:⊤]`` (right-associated), or ⊤ if there is
    no third-m-axiom instance for ``□α``."""
    table, conjuncts, warnings = {}, {}, []
    for e in mset.entries:
        cs = tuple(replace(peirce(b, e.alpha), [(e.box, TOP)]) for b in mset.instances.get(e.box, ()))
        conjuncts[e.box] = cs
        table[e.box] = conj(cs) if cs else TOP
    for box, value in table.items():
        for other in mset.boxes:
            if any(g == other for g in subformulas(value)):
                warnings.append(f"⊡ of {pretty(box)} still contains {pretty(other)}")
    return BoxdotMap(table, conjuncts, tuple(warnings))


# ---------------------------------------------------------------------------
# snippets (closed Int_ic derivations, built from the lemma certificates)


def _conj_intro(b: ProofBuilder, i: int, j: int) -> int:
    return b.mp_chain(b.axiom_instance("c.3", {"p": b.formula(i), "q": b.formula(j)}), i, j)


def _proj(b: ProofBuilder, i: int, k: int) -> int:
    f = b.formula(i)
    return b.mp(i, b.axiom_instance(f"c.{k}", {"p": f.left, "q": f.right}))


def _peirce_arg(c: Formula, alpha: Formula) -> Formula:
    """``x`` such that ``c = P(x, alpha)``."""
    x = getattr(c, "right", None)
    if x is None or c != peirce(x, alpha):
        raise TransformError(f"{pretty(c)} is not of the form P(x, {pretty(alpha)})")
    return x


@lru_cache(maxsize=None)
def project_conjunct(conjuncts: tuple[Formula, ...], j: int) -> Derivation:
    """``⋀ C → C_j`` by projections."""
    y = conj(conjuncts)
    b = ProofBuilder(INTBOX_IC, premises=[y])
    line = b.premise(y)
    for k in range(len(conjuncts) - 1):
        if k == j:
            line = _proj(b, line, 1)
            break
        line = _proj(b, line, 2)
    return deduction(b.derivation(line), y)


@lru_cache(maxsize=None)
def boxdot_intro(alpha: Formula, conjuncts: tuple[Formula, ...]) -> Derivation:
    """``α → ⋀_j P(x_j, α)`` from instances of ``p → P(q,p)``."""
    if not conjuncts:
        b = ProofBuilder(INTBOX_IC)
        return b.derivation(b.derive(Imp(alpha, TOP)))
    b = ProofBuilder(INTBOX_IC, premises=[alpha])
    a = b.premise(alpha)
    lemma = certificate("lemma-p-implies-P")
    lines = [b.mp(a, b.include(lemma, {"p": alpha, "q": _peirce_arg(c, alpha)})) for c in conjuncts]
    acc = lines[-1]
    for line in reversed(lines[:-1]):
        acc = _conj_intro(b, line, acc)
    return deduction(b.derivation(acc), alpha)


@lru_cache(maxsize=None)
def boxdot_peirce(alpha: Formula, conjuncts: tuple[Formula, ...]) -> Derivation:
    """``(⋀_j P(x_j, α) → α) → α``.

    Assume ``H: ⋀C → α`` and every ``C_j``; then α follows.  Each ``C_j`` is
    discharged in turn with the instance ``(P(x_j,α)→α)→α`` of the
    searched Peirce lemma, and finally ``H`` itself.
    """
    if not conjuncts:
        b = ProofBuilder(INTBOX_IC)
        return b.derivation(b.derive(Imp(Imp(TOP, alpha), alpha)))
    y = conj(conjuncts)
    h = Imp(y, alpha)
    b = ProofBuilder(INTBOX_IC, premises=[h, *conjuncts])
    lines = [b.premise(c) for c in conjuncts]
    acc = lines[-1]
    for line in reversed(lines[:-1]):
        acc = _conj_intro(b, line, acc)
    d = b.derivation(b.mp(acc, b.premise(h)))
    lemma = certificate("lemma-peirce-double")
    for c in reversed(conjuncts):
        d = deduction(d, c)
        b = ProofBuilder(INTBOX_IC, premises=d.premises)
        i = b.include(d)
        k = b.include(lemma, {"p": _peirce_arg(c, alpha), "q": alpha})
        d = b.derivation(b.mp(i, k))
    return deduction(d, h)


@lru_cache(maxsize=None)
def k_replacement(alpha: Formula, beta: Formula, y_a: Formula, y_b: Formula, y_ab: Formula) -> Derivation:
    return _instantiate(certificate("lemma-k-replacement"),
                        {"p": alpha, "q": beta, "r": y_a, "s": y_b, "t": y_ab})


def _instantiate(d: Derivation, s: dict) -> Derivation:
    from .kernel import instantiate

    return instantiate(d, Substitution(s))


# ---------------------------------------------------------------------------
# the rebuild shared by both passes


@dataclass(frozen=True)
class Hypothesis:
    """``Y_head → P(Y_β, head)`` for a first-m-axiom instance."""

    head: Formula
    beta: Formula
    formula: Formula


def _hypotheses(mset: MSet, table: dict) -> list[Hypothesis]:
    out = []
    for a, b in mset.k_pairs:
        yb = table[Box(b)]
        for head in (a, Imp(a, b)):
            h = Hypothesis(head, b, Imp(table[Box(head)], peirce(yb, head)))
            if h not in out:
                out.append(h)
    return out


def _rebuild(d: Derivation, mset: MSet, table: dict, conjuncts: dict,
             hyps: list[Hypothesis], discharge: bool) -> Derivation:
    pairs = list(table.items())

    def R(g):
        return replace(g, pairs)

    premises = [R(p) for p in d.premises]
    if not discharge:
        premises += [h.formula for h in hyps]
    b = ProofBuilder(INTBOX, premises=premises)
    hyp_by = {h.formula: h for h in hyps}

    def fail(k, msg):
        raise TransformError(f"line {k} ({pretty(d.formula(k))}): {msg}")

    def project(k, box, needed):
        cs = conjuncts[box]
        if needed not in cs:
            fail(k, f"{pretty(needed)} is not a conjunct of the stand-in for {pretty(box)}")
        return b.include(project_conjunct(cs, cs.index(needed)))

    def hypothesis(k, h):
        if discharge:
            return project(k, Box(h.head), h.formula.right)
        return b.premise(h.formula)

    lmap: dict[int, int] = {}
    for k, step in enumerate(d.steps, 1):
        j = step.just
        target = R(step.formula)
        m = _m_axiom(d, step)
        if isinstance(j, Premise):
            line = b.premise(premises[j.index])
        elif isinstance(j, ModusPonens):
            line = b.mp(lmap[j.minor], lmap[j.major])
        elif isinstance(j, Subst):
            if step.formula != d.formula(j.line):
                fail(k, "substitution line in a derivation that should be refined")
            line = lmap[j.line]
        elif m is None:
            ax = d.calculus.axiom(j.ref)
            ref = INTBOX.id_for(ax)
            if ref is None:
                fail(k, f"axiom {j.ref} has no Int□ counterpart")
            line = b.axiom_instance(ref, {x: R(v) for x, v in j.subst.items()})
        else:
            kind, a, beta = m
            if kind == 3:
                line = project(k, Box(a), target.right)
            elif kind == 2:
                if R(a) != a:
                    fail(k, f"{pretty(a)} itself contains boxes of M(D)")
                line = b.include(boxdot_intro(a, conjuncts[Box(a)]))
            else:
                yb = table[Box(beta)]
                b.include(boxdot_peirce(beta, conjuncts[Box(beta)]))
                b.include(boxdot_intro(beta, conjuncts[Box(beta)]))
                for head in (a, Imp(a, beta)):
                    h = Hypothesis(head, beta, Imp(table[Box(head)], peirce(yb, head)))
                    hypothesis(k, hyp_by.get(h.formula, h))
                line = b.include(k_replacement(a, beta, table[Box(a)], yb, table[Box(Imp(a, beta))]))
        if b.formula(line) != target:
            fail(k, f"rebuilt line is {pretty(b.formula(line))}, expected {pretty(target)}")
        lmap[k] = line
    out = b.derivation(lmap[len(d.steps)])
    v = check(out)
    if not v.ok:
        k, msg = v.failures()[0]
        raise TransformError(f"rebuilt derivation rejected at line {k}: {msg}")
    return out


def _scope_guard(d: Derivation, mset: MSet) -> None:
    allowed = set()
    for f in d.premises:
        allowed.update(g for g in subformulas(f) if isinstance(g, Box))
    for step in d.steps:
        if _m_axiom(d, step) is not None:
            allowed.update(g for g in subformulas(step.formula) if isinstance(g, Box))
    for k, step in enumerate(d.steps, 1):
        for g in subformulas(step.formula):
            if isinstance(g, Box) and g not in allowed:
                raise TransformError(
                    f"line {k}: {pretty(g)} arises outside m-axiom instances and premises")


# ---------------------------------------------------------------------------
# the three stages


@dataclass(frozen=True)
class TransformResult:
    source: Derivation
    derivation: Derivation
    mset: MSet
    boxdot: BoxdotMap
    hypotheses: tuple[Hypothesis, ...]
    warnings: tuple[str, ...]


def transform(d: Derivation) -> TransformResult:
    """The Int□ ⊩-derivation from the rewritten premises plus the
    first-m-axiom hypotheses."""
    _require_e(d)
    if has_substitution_lines(d):
        d = refine(d)
    mset = collect_M(d)
    _scope_guard(d, mset)
    bd = boxdot(mset)
    hyps = _hypotheses(mset, bd.table)
    out = _rebuild(d, mset, bd.table, bd.conjuncts, hyps, discharge=False)
    return TransformResult(d, out, mset, bd, tuple(hyps), bd.warnings)


@dataclass(frozen=True)
class BoxtimesResult:
    derivation: Derivation
    table: dict
    conjuncts: dict
    heads: tuple[Formula, ...]


def boxtimes(tr: TransformResult) -> tuple[dict, dict]:
    """Stand-ins ``⊠γ`` for the heads of the residual hypotheses.

    ``⊠γ`` conjoins the conjuncts of ``⊡γ`` with ``P(Y_β, γ)`` for every
    hypothesis on ``γ``, where ``Y_β`` is ``⊠β`` if β is itself a head and
    ``⊡β`` otherwise.  Cyclic definitions are rejected.
    """
    bd = tr.boxdot
    need: dict[Formula, list[Formula]] = {}
    for h in tr.hypotheses:
        need.setdefault(Box(h.head), [])
        if Box(h.beta) not in need[Box(h.head)]:
            need[Box(h.head)].append(Box(h.beta))
    table, conjuncts = dict(bd.table), dict(bd.conjuncts)
    done: set = set()
    active: list = []

    def solve(box):
        if box not in need or box in done:
            return table[box]
        if box in active:
            chain = " → ".join(pretty(x) for x in active + [box])
            raise TransformError(f"the ⊠ stand-ins depend on each other cyclically: {chain}")
        active.append(box)
        cs = list(bd.conjuncts[box])
        for beta_box in need[box]:
            c = peirce(solve(beta_box), box.arg)
            if c not in cs:
                cs.append(c)
        active.pop()
        conjuncts[box] = tuple(cs)
        table[box] = conj(cs)
        done.add(box)
        return table[box]

    for box in need:
        solve(box)
    return table, conjuncts


def boxtimes_pass(tr: TransformResult) -> BoxtimesResult:
    """Rebuild with the ⊠ stand-ins; the hypotheses become derived lines,
    so the premises are the rewritten original premises only."""
    table, conjuncts = boxtimes(tr)
    hyps = _hypotheses(tr.mset, table)
    out = _rebuild(tr.source, tr.mset, table, conjuncts, hyps, discharge=True)
    heads = tuple(dict.fromkeys(Box(h.head) for h in tr.hypotheses))
    return BoxtimesResult(out, table, conjuncts, heads)


@dataclass(frozen=True)
class Extraction:
    derivation: Derivation
    report: str
    converse_ok: bool


def extract_assertoric(d2: Derivation, A: Union[Formula, Iterable[Formula]], B: Formula) -> Extraction:
    """Erase boxes and derive the premises of ``d2`` from ``A`` by
    substitution, giving an Int ⊢-derivation of ``B`` from ``A``.

    ``A`` may be one formula or several; each premise of ``d2`` must be a
    substitution instance of one of them.
    """
    As = (A,) if isinstance(A, Formula) else tuple(A)
    for f in As + (B,):
        if not within(f, ASSERTORIC):
            raise TransformError(f"{pretty(f)} is not assertoric")
    v = check(d2)
    if not v.ok:
        k, msg = v.failures()[0]
        raise TransformError(f"input rejected at line {k}: {msg}")
    for step in d2.steps:
        if isinstance(step.just, Axiom) and step.just.ref.split(".")[0] not in ("i", "c", "d", "n"):
            raise TransformError(f"residual {step.just.ref} axiom line")
    try:
        erased = erase(d2, INT, erase_boxes)
    except DerivationError as e:
        raise TransformError(str(e)) from None
    steps: list[Step] = []
    prem_line: dict[int, int] = {}

    def a_line(k):
        if k not in prem_line:
            steps.append(Step(As[k], Premise(k)))
            prem_line[k] = len(steps)
        return prem_line[k]

    inst_line: dict[int, int] = {}
    for i, p in enumerate(erased.premises):
        for k, a in enumerate(As):
            s = match(a, p)
            if s is not None:
                break
        else:
            raise TransformError(f"premise {pretty(p)} is not an instance of {', '.join(map(pretty, As))}")
    lmap: dict[int, int] = {}
    for n, step in enumerate(erased.steps, 1):
        j = step.just
        if isinstance(j, Premise):
            if j.index not in inst_line:
                p = erased.premises[j.index]
                for k, a in enumerate(As):
                    s = match(a, p)
                    if s is not None:
                        break
                base = a_line(k)
                s = Substitution(s)
                if s:
                    steps.append(Step(p, Subst(base, s)))
                    inst_line[j.index] = len(steps)
                else:
                    inst_line[j.index] = base
            lmap[n] = inst_line[j.index]
            continue
        if isinstance(j, ModusPonens):
            j = ModusPonens(lmap[j.minor], lmap[j.major])
        elif isinstance(j, Subst):
            j = Subst(lmap[j.line], j.subst)
        steps.append(Step(step.formula, j))
        lmap[n] = len(steps)
    last = lmap[len(erased.steps)]
    if last != len(steps):
        steps.append(Step(steps[last - 1].formula, Subst(last, IDENTITY)))
    final = Derivation(INT, As, tuple(steps), UNRESTRICTED)
    fv = check(final)
    if not fv.ok:
        k, msg = fv.failures()[0]
        raise TransformError(f"extracted derivation rejected at line {k}: {msg}")
    if final.conclusion != B:
        raise TransformError(f"extracted conclusion {pretty(final.conclusion)} differs from {pretty(B)}")
    converse = check(retarget(final, E)).ok
    names = ", ".join(pretty(a) for a in As)
    report = "\n".join([
        f"Int + {names} ⊢ {pretty(B)}  ({len(final)} lines, kernel-checked)",
        f"converse: the same derivation checks in E: {'yes' if converse else 'NO'}",
    ])
    return Extraction(final, report, converse)


@dataclass(frozen=True)
class PipelineResult:
    stage1: TransformResult
    stage2: BoxtimesResult
    final: Extraction

    def replacement_table(self) -> str:
        rows = []
        for box in self.stage1.mset.boxes:
            dot = self.stage1.boxdot.table[box]
            times = self.stage2.table[box]
            tail = pretty(times) if box in self.stage2.heads else "(unchanged)"
            rows.append(f"{pretty(box)}  →  {pretty(dot)}  →  {tail}")
        return "\n".join(rows) if rows else "(no boxed formulas)"


def run(d: Derivation, A=None, B: Optional[Formula] = None) -> PipelineResult:
    """All three stages; ``A`` defaults to the premises, ``B`` to the
    conclusion."""
    tr = transform(d)
    bt = boxtimes_pass(tr)
    if A is None:
        A = tuple(dict.fromkeys(tr.source.premises))
    if B is None:
        B = d.conclusion
    return PipelineResult(tr, bt, extract_assertoric(bt.derivation, A, B))
