"""Formulas of the assertoric, modal and bimodal languages.

Formulas are immutable trees.  The connectives are ``~`` (negation),
``[]`` (box), ``O`` (circle), ``&``, ``|`` and ``->``.  The assertoric
language has no box and no circle, the modal language adds box, and the
bimodal language adds circle on top of that.

Python operators build formulas too: ``a & b``, ``a | b``, ``~a`` and
``a >> b`` for implication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

ASSERTORIC = "assertoric"
MODAL = "modal"
BIMODAL = "bimodal"
LANGUAGES = (ASSERTORIC, MODAL, BIMODAL)

# connective tags, as reported by connectives()
AND, OR, IMP, NOT, BOX, CIRCLE = "and", "or", "imp", "not", "box", "circle"


class Formula:
    """Base class of all formula nodes."""

    __slots__ = ()

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Imp(self, other)

    def __invert__(self) -> Formula:
        return Not(self)

    def __str__(self) -> str:
        return render(self)

    @property
    def language(self) -> str:
        return language_of(self)


@dataclass(frozen=True, repr=False)
class Var(Formula):
    name: str

    def __repr__(self):
        return f"Var({self.name!r})"


@dataclass(frozen=True, repr=False)
class Not(Formula):
    arg: Formula

    def __repr__(self):
        return f"Not({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Box(Formula):
    arg: Formula

    def __repr__(self):
        return f"Box({self.arg!r})"


@dataclass(frozen=True, repr=False)
class Circle(Formula):
    arg: Formula

    def __repr__(self):
        return f"Circle({self.arg!r})"


@dataclass(frozen=True, repr=False)
class And(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"And({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Or(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Or({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class Imp(Formula):
    left: Formula
    right: Formula

    def __repr__(self):
        return f"Imp({self.left!r}, {self.right!r})"


UNARY = (Not, Box, Circle)
BINARY = (And, Or, Imp)

_TAG = {Not: NOT, Box: BOX, Circle: CIRCLE, And: AND, Or: OR, Imp: IMP}


def var(name: str) -> Var:
    return Var(name)


def variables_named(names: str) -> tuple[Var, ...]:
    """``variables_named("p q r")`` -> ``(Var('p'), Var('q'), Var('r'))``."""
    return tuple(Var(n) for n in names.split())


P_VAR = Var("p")
TOP = Imp(P_VAR, P_VAR)


def top() -> Formula:
    """The constant ``p -> p`` over the fixed variable ``p``."""
    return TOP


def peirce(x: Formula, y: Formula) -> Formula:
    """Peirce's law ``((x -> y) -> x) -> x``."""
    return Imp(Imp(Imp(x, y), x), x)


def conj(items: Iterable[Formula]) -> Formula:
    """Right-associated conjunction of a nonempty sequence."""
    items = list(items)
    if not items:
        raise ValueError("empty conjunction")
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def imps(antecedents: Iterable[Formula], consequent: Formula) -> Formula:
    """``a1 -> (a2 -> ... -> consequent)``."""
    out = consequent
    for a in reversed(list(antecedents)):
        out = Imp(a, out)
    return out


# ---------------------------------------------------------------------------
# traversal


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, Var):
        return ()
    if isinstance(f, UNARY):
        return (f.arg,)
    return (f.left, f.right)


def rebuild(f: Formula, kids: tuple[Formula, ...]) -> Formula:
    if isinstance(f, Var):
        return f
    if isinstance(f, UNARY):
        return type(f)(kids[0])
    return type(f)(kids[0], kids[1])


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over all subformula occurrences."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(children(g)))


def occurs_in(needle: Formula, haystack: Formula) -> bool:
    return any(g == needle for g in subformulas(haystack))


def size(f: Formula) -> int:
    return sum(1 for _ in subformulas(f))


def variables(f: Formula) -> frozenset[Var]:
    return frozenset(g for g in subformulas(f) if isinstance(g, Var))


def variable_names(f: Formula) -> list[str]:
    """Sorted names of the variables of ``f``."""
    return sorted(v.name for v in variables(f))


def connectives(f: Formula) -> frozenset[str]:
    return frozenset(_TAG[type(g)] for g in subformulas(f) if not isinstance(g, Var))


def language_of(f: Formula) -> str:
    """Smallest language containing every connective of ``f``."""
    tags = connectives(f)
    if CIRCLE in tags:
        return BIMODAL
    if BOX in tags:
        return MODAL
    return ASSERTORIC


def within(f: Formula, language: str) -> bool:
    return LANGUAGES.index(language_of(f)) <= LANGUAGES.index(language)


# ---------------------------------------------------------------------------
# substitution and replacement


class Substitution(Mapping[str, Formula]):
    """A finite map from variable names to formulas.

    Applying a substitution replaces variables homomorphically; variables
    outside the domain stay fixed.  Identity bindings ``v -> v`` are dropped
    so that equal substitutions compare and hash equal.
    """

    __slots__ = ("_items", "_map")

    def __init__(self, mapping: Union[Mapping, Iterable, None] = None):
        pairs = dict(mapping or {})
        norm = {}
        for k, v in pairs.items():
            name = k.name if isinstance(k, Var) else k
            if not isinstance(v, Formula):
                raise TypeError(f"substitution value for {name!r} is not a formula")
            if v != Var(name):
                norm[name] = v
        self._map = norm
        self._items = tuple(sorted(norm.items()))

    def __getitem__(self, key):
        return self._map[key.name if isinstance(key, Var) else key]

    def __iter__(self):
        return iter(k for k, _ in self._items)

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        if isinstance(other, Substitution):
            return self._items == other._items
        return NotImplemented

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        inner = ", ".join(f"{k}:={render(v)}" for k, v in self._items)
        return f"Substitution({{{inner}}})"

    def __call__(self, f: Formula) -> Formula:
        return substitute(f, self)

    def then(self, other: Substitution) -> Substitution:
        """The substitution ``x -> other(self(x))``: first ``self``, then ``other``."""
        out = {k: substitute(v, other) for k, v in self._items}
        for k, v in other.items():
            out.setdefault(k, v)
        return Substitution(out)

    def restrict(self, names: Iterable[str]) -> Substitution:
        names = set(names)
        return Substitution({k: v for k, v in self._items if k in names})


IDENTITY = Substitution()


def substitute(f: Formula, s: Mapping[str, Formula]) -> Formula:
    """Apply ``s`` homomorphically to ``f``."""
    if not s:
        return f
    cache: dict[Formula, Formula] = {}

    def go(g):
        if isinstance(g, Var):
            return s.get(g.name, g)
        hit = cache.get(g)
        if hit is None:
            hit = rebuild(g, tuple(go(k) for k in children(g)))
            cache[g] = hit
        return hit

    return go(f)


def replace(g: Formula, pairs: Iterable[tuple[Formula, Formula]]) -> Formula:
    """Simultaneous replacement of subformula occurrences.

    Every occurrence equal to one of the targets is replaced by its partner.
    Nested targets are resolved outer-first in a single pass: once an
    occurrence is replaced, its inside is not visited.
    """
    table: dict[Formula, Formula] = {}
    for target, repl in pairs:
        if target in table and table[target] != repl:
            raise ValueError(f"target {render(target)} listed twice")
        table[target] = repl
    if not table:
        return g

    def go(h):
        hit = table.get(h)
        if hit is not None:
            return hit
        if isinstance(h, Var):
            return h
        return rebuild(h, tuple(go(k) for k in children(h)))

    return go(g)


def erase_boxes(a: Formula) -> Formula:
    """Delete every box, keeping its argument."""
    if isinstance(a, Box):
        return erase_boxes(a.arg)
    if isinstance(a, Circle):
        raise ValueError("erase_boxes is defined on box formulas without circles")
    if isinstance(a, Var):
        return a
    return rebuild(a, tuple(erase_boxes(k) for k in children(a)))


def match(pattern: Formula, f: Formula, binding: dict[str, Formula] | None = None):
    """One-way matching: a substitution ``s`` with ``s(pattern) == f``, or None.

    The returned substitution binds every variable of ``pattern``.
    """
    binding = {} if binding is None else binding
    stack = [(pattern, f)]
    while stack:
        pat, g = stack.pop()
        if isinstance(pat, Var):
            bound = binding.get(pat.name)
            if bound is None:
                binding[pat.name] = g
            elif bound != g:
                return None
        elif type(pat) is type(g):
            stack.extend(zip(children(pat), children(g)))
        else:
            return None
    return binding


# ---------------------------------------------------------------------------
# rendering

_PREC = {Imp: 1, Or: 2, And: 3}
_ASCII = {Imp: "->", Or: "|", And: "&", Not: "~", Box: "[]", Circle: "O"}
_PRETTY = {Imp: "→", Or: "∨", And: "∧", Not: "¬", Box: "□", Circle: "○"}


def _render(f: Formula, sym: dict, spaced_prefix: bool) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, UNARY):
        inner = _render(f.arg, sym, spaced_prefix)
        if isinstance(f.arg, BINARY):
            inner = f"({inner})"
        op = sym[type(f)]
        # "O p" needs the space, "Op" would lex as nothing sensible
        if spaced_prefix and isinstance(f, Circle) and not inner.startswith("("):
            return f"{op} {inner}"
        return op + inner
    prec = _PREC[type(f)]
    left = _render(f.left, sym, spaced_prefix)
    right = _render(f.right, sym, spaced_prefix)
    # all binary connectives associate to the right
    if isinstance(f.left, BINARY) and _PREC[type(f.left)] <= prec:
        left = f"({left})"
    if isinstance(f.right, BINARY) and _PREC[type(f.right)] < prec:
        right = f"({right})"
    return f"{left} {sym[type(f)]} {right}"


def render(f: Formula) -> str:
    """ASCII text in the input grammar; ``parse(render(f)) == f``."""
    return _render(f, _ASCII, True)


def pretty(f: Formula) -> str:
    """Unicode rendering for reports (also accepted by :func:`parse`)."""
    return _render(f, _PRETTY, False)


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TOKEN = re.compile(r"\s*(?:(?P<arrow>->|→)|(?P<box>\[\]|□)|(?P<var>[a-z][a-z0-9]*)|(?P<circle>O|○)|(?P<sym>[~&|()¬∧∨]))")
_UNICODE_SYM = {"¬": "~", "∧": "&", "∨": "|"}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        value = m.group(kind)
        if kind == "sym":
            kind = _UNICODE_SYM.get(value, value)
        elif kind == "var" and value == "top":
            kind = "top"
        out.append((kind, value, start))
        pos = m.end()
    out.append(("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, language: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.language = language

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {kind!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def formula(self):
        left = self.disj()
        if self.peek()[0] == "arrow":
            self.i += 1
            return Imp(left, self.formula())
        return left

    def disj(self):
        left = self.conj()
        if self.peek()[0] == "|":
            self.i += 1
            return Or(left, self.disj())
        return left

    def conj(self):
        left = self.unary()
        if self.peek()[0] == "&":
            self.i += 1
            return And(left, self.conj())
        return left

    def unary(self):
        kind, value, pos = self.peek()
        if kind == "~":
            self.i += 1
            return Not(self.unary())
        if kind == "box":
            if self.language == ASSERTORIC:
                raise ParseError("box is not in the assertoric language", pos)
            self.i += 1
            return Box(self.unary())
        if kind == "circle":
            if self.language != BIMODAL:
                raise ParseError(f"circle is not in the {self.language} language", pos)
            self.i += 1
            return Circle(self.unary())
        if kind == "(":
            self.i += 1
            inner = self.formula()
            self.take(")")
            return inner
        if kind == "top":
            self.i += 1
            return TOP
        if kind == "var":
            self.i += 1
            return Var(value)
        raise ParseError(f"unexpected {value or 'end of input'!r}", pos)


def parse(text: str, language: str = BIMODAL) -> Formula:
    """Parse ``text`` as a formula of ``language``.

    Raises ParseError (a ValueError) with the offending position, including
    when a connective lies outside the declared language.
    """
    if language not in LANGUAGES:
        raise ValueError(f"unknown language {language!r}")
    p = _Parser(text, language)
    f = p.formula()
    p.take("eof")
    return f
