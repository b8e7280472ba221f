"""Command-line front end: ``python -m mhcbench <verb> ...``.

Exit status: 0 on success (or validity, when validity is what was asked),
1 when a checked failure is found (a certificate rejected, a countermodel
found), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import algebra, certfile, certificates, equipollence, kernel, kripke, translate
from .calculi import GROUPS, CalculusError, calculus, fragment
from .syntax import ParseError, parse, pretty, render

OK, FAILED, USAGE = 0, 1, 2

CLASS_NAMES = {
    "mheyting": algebra.MODAL_HEYTING,
    "modalheyting": algebra.MODAL_HEYTING,
    "kuz": algebra.KUZ,
    "e": algebra.E_ALGEBRA,
    "k4grz": algebra.K4GRZ,
}


class UsageError(Exception):
    pass


def _out(text: str = "") -> None:
    sys.stdout.write(text if text.endswith("\n") or not text else text + "\n")


def _formula(text: str):
    try:
        return parse(text)
    except ParseError as e:
        raise UsageError(f"cannot parse formula: {e}") from None


def _read_cert(ref: str) -> kernel.Derivation:
    """A certificate file, or the name of a bundled certificate."""
    path = Path(ref)
    if path.is_file():
        try:
            return certfile.load(path)
        except certfile.CertificateFormatError as e:
            raise UsageError(f"{ref}: {e}") from None
    name = certificates.canonical(path.name[:-5] if path.name.endswith(".cert") else path.name)
    if name in certificates.names():
        return certificates.certificate(name)
    raise UsageError(f"no such certificate file or bundled name: {ref}")


def _classes(text: str) -> tuple[str, ...]:
    out = []
    for word in text.split(","):
        key = word.strip().lower()
        if key not in CLASS_NAMES:
            raise UsageError(f"unknown algebra class {word!r}; known: mHeyting, Kuz, E, K4Grz")
        out.append(CLASS_NAMES[key])
    return tuple(out)


def _group_axioms(text: str):
    out = []
    for g in filter(None, (w.strip() for w in text.split(","))):
        if g not in GROUPS:
            raise UsageError(f"unknown axiom group {g!r}; known: {', '.join(GROUPS)}")
        out.extend(GROUPS[g])
    return out


def _emit_cert(d: kernel.Derivation, out: Optional[str], comments=None) -> None:
    text = certfile.dumps(d, comments)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        _out(text)


# ---------------------------------------------------------------------------
# verbs


def cmd_check(a) -> int:
    d = _read_cert(a.file)
    if a.fragment:
        try:
            d = kernel.retarget(d, fragment(calculus(d.calculus.name), a.fragment.split(",")))
        except (CalculusError, kernel.DerivationError) as e:
            _out(f"REJECTED: {e}")
            return FAILED
    v = kernel.check(d)
    _out(f"calculus {d.calculus.label}, mode {d.mode}, {len(d)} lines")
    _out(v.report())
    return OK if v.ok else FAILED


def cmd_refine(a) -> int:
    d = _read_cert(a.file)
    try:
        r = kernel.refine(d)
    except kernel.DerivationError as e:
        _out(f"REJECTED: {e}")
        return FAILED
    _emit_cert(r, a.out)
    return OK


def cmd_deduce(a) -> int:
    d = _read_cert(a.file)
    if a.premise is not None:
        if not 0 <= a.premise < len(d.premises):
            raise UsageError(f"premise index {a.premise} out of range (0..{len(d.premises) - 1})")
        f = d.premises[a.premise]
    elif a.formula is not None:
        f = _formula(a.formula)
    else:
        raise UsageError("deduce needs --premise or --formula")
    try:
        r = kernel.deduction(d, f)
    except kernel.DerivationError as e:
        _out(f"REJECTED: {e}")
        return FAILED
    _emit_cert(r, a.out)
    return OK


def cmd_countermodel(a) -> int:
    f = _formula(a.formula)
    cls = _classes(a.cls)
    require = _group_axioms(a.require_valid or "")
    found = algebra.find_countermodel(f, cls, max_base_size=a.max, require_valid=require,
                                      max_poset=a.max_poset)
    if found is None:
        _out(f"no countermodel with at most {a.max} elements: {pretty(f)} holds in every searched algebra")
        return OK
    m, v = found
    _out(f"# countermodel for {pretty(f)}")
    _out(f"# classes: {', '.join(sorted(m.classes)) or '-'}")
    _out(algebra.dumps(m, v))
    return FAILED


def cmd_kripke(a) -> int:
    f = _formula(a.formula)
    found = kripke.kripke_valid(f, a.max)
    if found is None:
        _out(f"no Kripke countermodel with at most {a.max} worlds for {pretty(f)}")
        return OK
    m, w = found
    _out(f"# Kripke countermodel for {pretty(f)}")
    _out(kripke.dumps(m, w))
    return FAILED


def cmd_double(a) -> int:
    try:
        m, _ = algebra.loads(Path(a.file).read_text(encoding="utf-8"))
    except OSError as e:
        raise UsageError(str(e)) from None
    except algebra.AlgebraError as e:
        raise UsageError(f"{a.file}: {e}") from None
    if m.box is None:
        raise UsageError("the algebra file has no box table")
    dd = algebra.double(m)
    _out(f"# input classes: {', '.join(sorted(m.classes)) or '-'}")
    _out(f"# doubleton classes: {', '.join(sorted(dd.classes)) or '-'}")
    _out(algebra.dumps(dd))
    if algebra.K4GRZ in m.classes and algebra.K4GRZ not in dd.classes:
        return FAILED
    return OK


def cmd_translate(a) -> int:
    f = _formula(a.formula)
    fn = {"t": translate.gmt_t, "s": translate.split_s, "st": translate.embed}[a.map]
    try:
        _out(render(fn(f)) if a.ascii else pretty(fn(f)))
    except translate.TranslationError as e:
        raise UsageError(str(e)) from None
    return OK


def cmd_transform(a) -> int:
    d = _read_cert(a.file)
    A = [_formula(x) for x in a.assume] if a.assume else None
    B = _formula(a.conclude) if a.conclude else None
    try:
        r = equipollence.run(d, A, B)
    except equipollence.TransformError as e:
        _out(f"REJECTED: {e}")
        return FAILED
    stem = Path(a.file).name
    stem = stem[:-5] if stem.endswith(".cert") else stem
    outdir = Path(a.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    stages = [
        ("star", r.stage1.derivation, "Int□ derivation with boxdot stand-ins and hypotheses"),
        ("star2", r.stage2.derivation, "Int□ derivation with boxtimes stand-ins, hypotheses discharged"),
        ("int", r.final.derivation, "assertoric Int derivation"),
    ]
    ok = True
    for tag, dd, what in stages:
        path = outdir / f"{stem}.{tag}.cert"
        certfile.dump(dd, path, [what])
        v = kernel.check(certfile.load(path))
        ok &= v.ok
        _out(f"{path}: {len(dd)} lines, {'re-checked ok' if v.ok else 'REJECTED'}")
    _out("replacement table:")
    _out(r.replacement_table())
    for w in r.stage1.warnings:
        _out(f"warning: {w}")
    _out(r.final.report)
    return OK if ok and r.final.converse_ok else FAILED


def _suite() -> list[tuple[str, Callable[[], tuple[bool, str]]]]:
    def certs():
        bad = []
        for name in certificates.names():
            d = certificates.certificate(name)
            if d.calculus.label != certificates.FRAGMENTS[name] or not kernel.check(d).ok:
                bad.append(name)
        return not bad, f"{len(certificates.names())} certificates" + (f"; failing: {bad}" if bad else "")

    def regenerated():
        with certificates.regenerating():
            bad = [n for n in certificates.names() if certificates.render_cert(n) != certificates.shipped_text(n)]
        certificates.certificate.cache_clear()
        return not bad, "regenerated text matches the shipped files" if not bad else f"differs: {bad}"

    def lob():
        ms = list(algebra.modal_algebras([algebra.MODAL_HEYTING], max_poset=3, inflationary=True))
        return all(algebra.check_lob_chains(m) for m in ms), f"{len(ms)} algebras with x ≤ □x"

    def doubling():
        n = fails = 0
        for atoms in (1, 2):
            for box in algebra.boxes(algebra.powerset(atoms)):
                m = algebra.ModalAlgebra(algebra.powerset(atoms), box)
                if algebra.K4GRZ in m.classes:
                    n += 1
                    fails += algebra.K4GRZ not in algebra.double(m).classes
        return fails == 0, f"{n} K4Grz algebras doubled, {fails} failures"

    def pipeline():
        for name in certificates.E_DEMOS:
            r = equipollence.run(certificates.certificate(name))
            if r.final.derivation.conclusion != certificates.certificate(name).conclusion:
                return False, name
        return True, f"{len(certificates.E_DEMOS)} E-derivations transformed"

    return [("certificates", certs), ("regeneration", regenerated), ("Löb chains", lob),
            ("doubling", doubling), ("equipollence", pipeline)]


def cmd_certify_all(a) -> int:
    ok = True
    for name, fn in _suite():
        passed, detail = fn()
        ok &= passed
        _out(f"{'PASS' if passed else 'FAIL'}  {name:<14} {detail}")
    return OK if ok else FAILED


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mhcbench", description="Derivation checker and countermodel workbench.")
    sub = p.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    s = sub.add_parser("check", help="check a certificate")
    s.add_argument("--file", required=True, help="certificate file or bundled certificate name")
    s.add_argument("--fragment", help="comma-separated axiom groups to restrict to")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("refine", help="push substitutions into axioms and premises")
    s.add_argument("--file", required=True)
    s.add_argument("--out")
    s.set_defaults(run=cmd_refine)

    s = sub.add_parser("deduce", help="discharge a premise by the deduction theorem")
    s.add_argument("--file", required=True)
    s.add_argument("--premise", type=int, help="0-based premise index")
    s.add_argument("--formula")
    s.add_argument("--out")
    s.set_defaults(run=cmd_deduce)

    s = sub.add_parser("countermodel", help="search finite modal algebras for a refutation")
    s.add_argument("--formula", required=True)
    s.add_argument("--class", dest="cls", default="mHeyting")
    s.add_argument("--require-valid", help="comma-separated axiom groups the algebra must validate")
    s.add_argument("--max", type=int, default=4, help="maximum number of algebra elements")
    s.add_argument("--max-poset", type=int, help="maximum number of poset points")
    s.set_defaults(run=cmd_countermodel)

    s = sub.add_parser("kripke", help="search intuitionistic Kripke countermodels")
    s.add_argument("--formula", required=True)
    s.add_argument("--max", type=int, default=4, help="maximum number of worlds")
    s.set_defaults(run=cmd_kripke)

    s = sub.add_parser("double", help="doubleton of an algebra file")
    s.add_argument("--file", required=True)
    s.set_defaults(run=cmd_double)

    s = sub.add_parser("translate", help="apply t, s or s∘t")
    s.add_argument("--formula", required=True)
    s.add_argument("--map", choices=("t", "s", "st"), default="st")
    s.add_argument("--ascii", action="store_true")
    s.set_defaults(run=cmd_translate)

    s = sub.add_parser("transform", help="E-derivation to assertoric Int derivation")
    s.add_argument("--file", required=True)
    s.add_argument("--assume", action="append", help="assertoric A (repeatable); default: the premises")
    s.add_argument("--conclude", help="assertoric B; default: the conclusion")
    s.add_argument("--out-dir", default=".")
    s.set_defaults(run=cmd_transform)

    s = sub.add_parser("certify-all", help="bundled certificates and small exhaustive checks")
    s.set_defaults(run=cmd_certify_all)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "max", 1) is not None and getattr(args, "max", 1) < 0:
            raise UsageError("--max must be non-negative")
        return args.run(args)
    except UsageError as e:
        sys.stderr.write(f"mhcbench: error: {e}\n")
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
