"""Axiom groups, calculus definitions, fragments and axiom matching.

Axioms are concrete formulas over the fixed variables ``p, q, r``; schematic
use goes through the substitution rule or through :func:`match_axiom`.
Every axiom of a calculus carries a canonical id ``<group>.<k>`` (1-based).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .syntax import ASSERTORIC, LANGUAGES, MODAL, Formula, Substitution, match, parse, within

SUBSTITUTION = "substitution"
MODUS_PONENS = "modus_ponens"
NECESSITATION = "necessitation"


def _axioms(*texts: str) -> tuple[Formula, ...]:
    return tuple(parse(t, MODAL) for t in texts)


GROUPS: dict[str, tuple[Formula, ...]] = {
    "i": _axioms("p -> (q -> p)", "(p -> (q -> r)) -> ((p -> q) -> (p -> r))"),
    "c": _axioms("p & q -> p", "p & q -> q", "p -> (q -> p & q)"),
    "d": _axioms("p -> p | q", "p -> q | p", "(p -> r) -> ((q -> r) -> (p | q -> r))"),
    "n": _axioms("(p -> q) -> ((p -> ~q) -> ~p)", "p -> (~p -> q)"),
    "m": _axioms("[](p -> q) -> ([]p -> []q)", "p -> []p", "[]p -> (((q -> p) -> q) -> q)"),
    "m1": _axioms("[](p -> q) -> ([]p -> []q)", "p -> []p"),
    "m2": _axioms("[]p -> (q | (q -> p))"),
    "kuz": _axioms("[]p -> (((q -> p) -> q) -> q)"),
    "kuzstar": _axioms("[]p -> (q | (q -> p))"),
    "km_extra": _axioms("([]p -> p) -> p"),
    "k4grz_extra": _axioms(
        "~~p -> p",
        "[](p -> q) -> ([]p -> []q)",
        "[]p -> [][]p",
        "[]([](p -> []p) -> p) -> []p",
    ),
}

INT_GROUPS = ("i", "c", "d", "n")


class CalculusError(ValueError):
    pass


@dataclass(frozen=True)
class Calculus:
    """A Hilbert calculus: an ordered axiom list plus a rule set.

    ``groups`` lists the base groups in order.  ``aliases`` names further
    selectable groups as lists of canonical axiom ids (for instance ``m`` in
    mHC is ``m1`` together with ``m2``).  ``selected`` is None for the full
    calculus and the chosen fragment groups otherwise.
    """

    name: str
    language: str
    groups: tuple[str, ...]
    rules: frozenset = frozenset({SUBSTITUTION, MODUS_PONENS})
    aliases: tuple[tuple[str, tuple[str, ...]], ...] = ()
    selected: Optional[tuple[str, ...]] = None
    extra: tuple[Formula, ...] = ()
    _table: dict = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.language not in LANGUAGES:
            raise CalculusError(f"unknown language {self.language!r}")
        full = []
        for g in self.groups:
            for k, ax in enumerate(GROUPS[g], 1):
                full.append((f"{g}.{k}", ax))
        for k, ax in enumerate(self.extra, 1):
            full.append((f"x.{k}", ax))
        ids = {a for a, _ in full}
        select = {g: tuple(a for a, _ in full if a.split(".")[0] == g) for g in self.groups}
        if self.extra:
            select["x"] = tuple(f"x.{k}" for k in range(1, len(self.extra) + 1))
        for alias, members in self.aliases:
            select[alias] = members
        if self.selected is None:
            chosen = ids
        else:
            chosen = set()
            for g in self.selected:
                if g not in select:
                    raise CalculusError(f"group {g!r} is not a group of {self.name}")
                chosen.update(select[g])
        axioms = tuple((a, f) for a, f in full if a in chosen)
        object.__setattr__(self, "_table", {
            "axioms": axioms,
            "by_id": dict(axioms),
            "select": select,
        })

    @property
    def axioms(self) -> tuple[tuple[str, Formula], ...]:
        """``(id, formula)`` pairs in registry order."""
        return self._table["axioms"]

    @property
    def axiom_formulas(self) -> tuple[Formula, ...]:
        return tuple(f for _, f in self.axioms)

    @property
    def group_names(self) -> tuple[str, ...]:
        return tuple(self._table["select"])

    @property
    def label(self) -> str:
        if self.selected is None:
            return self.name
        return f"{self.name}_{''.join(self.selected)}"

    def has_rule(self, rule: str) -> bool:
        return rule in self.rules

    def resolve(self, ref: str) -> str:
        """Canonical id for ``ref``, which may go through an alias group."""
        group, _, idx = ref.partition(".")
        members = self._table["select"].get(group)
        if members is None or not idx.isdigit():
            raise CalculusError(f"unknown axiom reference {ref!r} in {self.label}")
        k = int(idx)
        if not 1 <= k <= len(members):
            raise CalculusError(f"axiom index out of range: {ref!r}")
        canon = members[k - 1]
        if canon not in self._table["by_id"]:
            raise CalculusError(f"axiom {ref!r} is outside the fragment {self.label}")
        return canon

    def axiom(self, ref: str) -> Formula:
        return self._table["by_id"][self.resolve(ref)]

    def fragment(self, groups: Iterable[str]) -> Calculus:
        return fragment(self, groups)

    def extend(self, extra_axioms: Iterable[Formula]) -> Calculus:
        """The calculus with extra axioms (group ``x``); no new rules."""
        extra = tuple(extra_axioms)
        lang = self.language
        for f in extra:
            if not within(f, lang):
                lang = f.language
        return Calculus(self.name, lang, self.groups, self.rules, self.aliases,
                        self.selected if self.selected is None else self.selected + ("x",),
                        self.extra + extra)

    def id_for(self, axiom: Formula) -> Optional[str]:
        """Canonical id of an axiom given as a formula (exact equality)."""
        for a, f in self.axioms:
            if f == axiom:
                return a
        return None


def _spec(name, language, groups, rules=None, aliases=()):
    return Calculus(name, language, tuple(groups),
                    frozenset(rules or {SUBSTITUTION, MODUS_PONENS}), tuple(aliases))


_E_M1 = ("m1", ("m.1", "m.2"))

REGISTRY: dict[str, Calculus] = {
    "Int": _spec("Int", ASSERTORIC, INT_GROUPS),
    "IntBox": _spec("IntBox", MODAL, INT_GROUPS),
    "Kuz": _spec("Kuz", MODAL, INT_GROUPS + ("kuz",), aliases=[("m", ("kuz.1",))]),
    "KuzStar": _spec("KuzStar", MODAL, INT_GROUPS + ("kuzstar",), aliases=[("m", ("kuzstar.1",))]),
    "mHC": _spec("mHC", MODAL, INT_GROUPS + ("m1", "m2"), aliases=[("m", ("m1.1", "m1.2", "m2.1"))]),
    "E": _spec("E", MODAL, INT_GROUPS + ("m",), aliases=[_E_M1]),
    "KM": _spec("KM", MODAL, INT_GROUPS + ("m1", "m2", "km_extra"),
                aliases=[("m", ("m1.1", "m1.2", "m2.1"))]),
    "K4Grz": _spec("K4Grz", MODAL, INT_GROUPS + ("k4grz_extra",),
                   rules={SUBSTITUTION, MODUS_PONENS, NECESSITATION}),
}


def calculus(name: str) -> Calculus:
    try:
        return REGISTRY[name]
    except KeyError:
        raise CalculusError(f"unknown calculus {name!r}; known: {', '.join(REGISTRY)}") from None


def fragment(c: Calculus, groups: Iterable[str]) -> Calculus:
    """Restrict ``c`` to the axioms of the chosen groups; rules are unchanged."""
    base = REGISTRY.get(c.name)
    if base is None or c.extra:
        base = Calculus(c.name, c.language, c.groups, c.rules, c.aliases, None, c.extra)
    order = base.group_names
    groups = tuple(dict.fromkeys(groups))
    unknown = [g for g in groups if g not in order]
    if unknown:
        raise CalculusError(f"group {unknown[0]!r} is not a group of {c.name}")
    groups = tuple(sorted(groups, key=order.index))
    return Calculus(base.name, base.language, base.groups, base.rules, base.aliases,
                    groups, base.extra)


def match_axiom(f: Formula, c: Calculus) -> Optional[tuple[str, Substitution]]:
    """First axiom of ``c`` (in registry order) having ``f`` as an instance."""
    for a, ax in c.axioms:
        binding = match(ax, f)
        if binding is not None:
            return a, Substitution(binding)
    return None


def axiom_group(name: str) -> tuple[Formula, ...]:
    try:
        return GROUPS[name]
    except KeyError:
        raise CalculusError(f"unknown axiom group {name!r}") from None
