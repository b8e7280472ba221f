"""Plain-text certificate files.

::

    # comment
    calculus E fragment i m mode ws
    premise p
    1. p ; prem 0
    2. p -> []p ; ax m.2
    3. []p ; mp 1 2

Justifications: ``prem k``, ``ax <group>.<k> [v:=formula,...]``,
``mp <minor> <major>``, ``sub <line> v:=formula,...`` and ``nec <line>``.
``extra <formula>`` lines add axioms (group ``x``) to the calculus.
"""

from __future__ import annotations

import re

from .calculi import CalculusError, calculus, fragment
from .kernel import (
    MODES,
    WS,
    Axiom,
    Derivation,
    DerivationError,
    ModusPonens,
    Necessitation,
    Premise,
    Step,
    Subst,
)
from .syntax import IDENTITY, ParseError, Substitution, parse, render


class CertificateFormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


_STEP = re.compile(r"^(\d+)\.\s*(.*?)\s*;\s*(\w+)\s*(.*)$")


def _parse_subst(text: str, lineno: int) -> Substitution:
    text = text.strip()
    if not text:
        return IDENTITY
    out = {}
    for part in text.split(","):
        name, sep, value = part.partition(":=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[a-z][a-z0-9]*", name):
            raise CertificateFormatError(f"bad substitution entry {part.strip()!r}", lineno)
        if name in out:
            raise CertificateFormatError(f"variable {name} bound twice", lineno)
        try:
            out[name] = parse(value)
        except ParseError as e:
            raise CertificateFormatError(f"in substitution for {name}: {e}", lineno) from None
    return Substitution(out)


def _ints(args: str, n: int, lineno: int) -> list[int]:
    parts = args.split()
    if len(parts) != n or not all(p.isdigit() for p in parts):
        raise CertificateFormatError(f"expected {n} line number(s), got {args!r}", lineno)
    return [int(p) for p in parts]


def _parse_header(words: list[str], lineno: int):
    name, groups, mode = None, None, WS
    i = 1
    if len(words) < 2:
        raise CertificateFormatError("calculus name missing", lineno)
    name = words[1]
    i = 2
    while i < len(words):
        if words[i] == "fragment":
            groups = []
            i += 1
            while i < len(words) and words[i] != "mode":
                groups.append(words[i])
                i += 1
        elif words[i] == "mode" and i + 1 < len(words):
            mode = words[i + 1]
            if mode not in MODES:
                raise CertificateFormatError(f"unknown mode {mode!r}", lineno)
            i += 2
        else:
            raise CertificateFormatError(f"unexpected header word {words[i]!r}", lineno)
    return name, groups, mode


def loads(text: str) -> Derivation:
    """Parse a certificate.  Only the syntax is checked here; run
    :func:`mhcbench.kernel.check` for validity."""
    header = None
    premises, extra, steps = [], [], []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        head = words[0]
        try:
            if head == "calculus":
                if header is not None:
                    raise CertificateFormatError("second calculus header", lineno)
                header = _parse_header(words, lineno)
            elif head == "premise":
                premises.append(parse(line[len("premise"):]))
            elif head == "extra":
                extra.append(parse(line[len("extra"):]))
            else:
                m = _STEP.match(line)
                if not m:
                    raise CertificateFormatError(f"cannot read {line!r}", lineno)
                num, ftext, kind, args = m.groups()
                if int(num) != len(steps) + 1:
                    raise CertificateFormatError(f"step number {num}, expected {len(steps) + 1}", lineno)
                formula = parse(ftext)
                if kind == "prem":
                    just = Premise(*_ints(args, 1, lineno))
                elif kind == "ax":
                    ref, _, rest = args.strip().partition(" ")
                    if not re.fullmatch(r"\w+\.\d+", ref):
                        raise CertificateFormatError(f"bad axiom reference {ref!r}", lineno)
                    just = Axiom(ref, _parse_subst(rest, lineno))
                elif kind == "mp":
                    just = ModusPonens(*_ints(args, 2, lineno))
                elif kind == "sub":
                    ref, _, rest = args.strip().partition(" ")
                    just = Subst(_ints(ref, 1, lineno)[0], _parse_subst(rest, lineno))
                elif kind == "nec":
                    just = Necessitation(*_ints(args, 1, lineno))
                else:
                    raise CertificateFormatError(f"unknown justification {kind!r}", lineno)
                steps.append(Step(formula, just))
        except ParseError as e:
            raise CertificateFormatError(str(e), lineno) from None
    if header is None:
        raise CertificateFormatError("missing calculus header")
    name, groups, mode = header
    try:
        calc = calculus(name)
        if extra:
            calc = calc.extend(extra)
        if groups is not None:
            calc = fragment(calc, groups + (["x"] if extra and "x" not in groups else []))
    except CalculusError as e:
        raise CertificateFormatError(str(e)) from None
    try:
        return Derivation(calc, tuple(premises), tuple(steps), mode)
    except DerivationError as e:
        raise CertificateFormatError(str(e)) from None


def _subst_text(s: Substitution) -> str:
    return ",".join(f"{k}:={render(v)}" for k, v in s.items())


def dumps(d: Derivation, comments: list[str] | None = None) -> str:
    out = [f"# {c}" for c in comments or ()]
    c = d.calculus
    head = f"calculus {c.name}"
    if c.selected is not None:
        head += " fragment " + " ".join(g for g in c.selected if g != "x")
    out.append(f"{head} mode {d.mode}")
    for f in c.extra:
        out.append(f"extra {render(f)}")
    for p in d.premises:
        out.append(f"premise {render(p)}")
    for k, step in enumerate(d.steps, 1):
        j = step.just
        if isinstance(j, Premise):
            js = f"prem {j.index}"
        elif isinstance(j, Axiom):
            js = f"ax {j.ref}" + (f" {_subst_text(j.subst)}" if j.subst else "")
        elif isinstance(j, ModusPonens):
            js = f"mp {j.minor} {j.major}"
        elif isinstance(j, Subst):
            js = f"sub {j.line}" + (f" {_subst_text(j.subst)}" if j.subst else "")
        else:
            js = f"nec {j.line}"
        out.append(f"{k}. {render(step.formula)} ; {js}")
    return "\n".join(out) + "\n"


def load(path) -> Derivation:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def dump(d: Derivation, path, comments: list[str] | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(d, comments))
