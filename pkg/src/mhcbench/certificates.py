"""Bundled derivation certificates.

Each certificate is produced by a generator function below and shipped as a
``.cert`` file in the ``certs`` package directory.  :func:`certificate`
reads the shipped file; :func:`generate` rebuilds it from scratch (the test
suite checks that both agree).  Names ending in ``-ws`` are the ⊩
derivations with premises; the name without the suffix is the closed
theorem obtained from it by the deduction theorem.
"""

from __future__ import annotations

from contextlib import contextmanager
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .builder import ProofBuilder
from .calculi import REGISTRY, fragment
from .certfile import dumps, loads
from .kernel import Derivation, compose, deduction, prune
from .search import schema
from .syntax import Box, Imp, Or, Var, parse, peirce

p, q, r, s, t = (Var(n) for n in "pqrst")

INT_I = fragment(REGISTRY["Int"], ["i"])
INT_ICD = fragment(REGISTRY["Int"], ["i", "c", "d"])
INTBOX_IC = fragment(REGISTRY["IntBox"], ["i", "c"])
KUZ_ICDM = fragment(REGISTRY["Kuz"], ["i", "c", "d", "m"])
KUZSTAR_ICDM = fragment(REGISTRY["KuzStar"], ["i", "c", "d", "m"])
E = REGISTRY["E"]


def _conj_intro(b: ProofBuilder, i: int, j: int) -> int:
    x, y = b.formula(i), b.formula(j)
    return b.mp_chain(b.axiom_instance("c.3", {"p": x, "q": y}), i, j)


def _proj(b: ProofBuilder, i: int, k: int) -> int:
    f = b.formula(i)
    return b.mp(i, b.axiom_instance(f"c.{k}", {"p": f.left, "q": f.right}))


def or_imp_fixpoint_ws() -> Derivation:
    """(q∨(q→p))→p ⊩ q∨(q→p) in Int_icd."""
    a = Or(q, Imp(q, p))
    b = ProofBuilder(INT_ICD)
    h = b.premise(Imp(a, p))
    l_q = b.axiom_instance("d.1", {"p": q, "q": Imp(q, p)})
    l_qp = b.axiom_instance("d.2", {"p": Imp(q, p), "q": q})
    qp = b.derive(Imp(q, p), l_q, h)
    qpp = b.derive(Imp(Imp(q, p), p), l_qp, h)
    m2 = _conj_intro(b, qp, qpp)
    pp = b.mp(_proj(b, m2, 1), _proj(b, m2, 2))
    m3 = _conj_intro(b, qp, pp)
    m4 = _proj(b, m3, 1)
    m5 = b.mp(m4, b.axiom_instance("d.2", {"p": Imp(q, p), "q": q}))
    return b.derivation(m5)


def or_imp_fixpoint() -> Derivation:
    return deduction(certificate("or-imp-fixpoint-ws"), Imp(Or(q, Imp(q, p)), p))


def kuz_to_kuzstar_ws() -> Derivation:
    """□p ⊩ q∨(q→p) in Kuz_icdm; the deducibility (2) is composed in."""
    a = Or(q, Imp(q, p))
    b = ProofBuilder(KUZ_ICDM)
    l1 = b.premise(Box(p))
    l2 = b.axiom_instance("m.1", {"q": a})
    l3 = b.mp(l1, l2)
    l4 = b.restate(l3)
    l5 = b.premise(Imp(Imp(a, p), a))
    b.mp(l5, l4)
    return compose(certificate("or-imp-fixpoint"), b.derivation())


def kuz_to_kuzstar() -> Derivation:
    return deduction(certificate("kuz-to-kuzstar-ws"), Box(p))


def kuzstar_to_kuz_ws() -> Derivation:
    """□p, (q→p)→q ⊩ q in Kuz*_icdm."""
    a = Or(q, Imp(q, p))
    b = ProofBuilder(KUZSTAR_ICDM)
    l1 = b.premise(Box(p))
    l1b = b.premise(Imp(Imp(q, p), q))
    l3 = b.mp(l1, b.axiom_instance("m.1", {}))
    l4 = b.derive(Imp(q, q))
    l5 = _conj_intro(b, l4, l1b)
    case = b.axiom_instance("d.3", {"p": q, "q": Imp(q, p), "r": q})
    l6 = b.mp_chain(case, _proj(b, l5, 1), _proj(b, l5, 2))
    assert b.formula(l6) == Imp(a, q)
    return b.derivation(b.mp(l3, l6))


def kuzstar_to_kuz() -> Derivation:
    d = deduction(certificate("kuzstar-to-kuz-ws"), Imp(Imp(q, p), q))
    return deduction(d, Box(p))


def lemma_p_implies_P_ws() -> Derivation:
    """p, (q→p)→q ⊩ q in Int_i."""
    b = ProofBuilder(INT_I)
    l1 = b.premise(p)
    l2 = b.mp(l1, b.axiom_instance("i.1", {"q": q}))
    return b.derivation(b.mp(l2, b.premise(Imp(Imp(q, p), q))))


def lemma_p_implies_P() -> Derivation:
    d = deduction(certificate("lemma-p-implies-P-ws"), Imp(Imp(q, p), q))
    return deduction(d, p)


def lemma_negative_occurrence_ws() -> Derivation:
    """{q→p, (r→p)→r, r→q} ⊩ r in Int_i."""
    b = ProofBuilder(INT_I, premises=[Imp(q, p), Imp(Imp(r, p), r), Imp(r, q)])
    l1 = b.premise(Imp(r, q))
    l2 = b.premise(Imp(q, p))
    syl = parse("(a0 -> a1) -> (a1 -> a2) -> a0 -> a2")
    l3 = b.include(schema(syl), {"a0": r, "a1": q, "a2": p})
    l4 = b.mp_chain(l3, l1, l2)
    l5 = b.premise(Imp(Imp(r, p), r))
    return b.derivation(b.mp(l4, l5))


def lemma_negative_occurrence() -> Derivation:
    d = certificate("lemma-negative-occurrence-ws")
    for a in (Imp(r, q), Imp(Imp(r, p), r), Imp(q, p)):
        d = deduction(d, a)
    return d


def lemma_km_chain_ws() -> Derivation:
    """{p→r, (r→p)→p, ((r→q)→r)→(s→r), q→p} ⊩ s→r in Int_i.

    Detaching the negative-occurrence lemma needs (r→p)→r, obtained from
    (r→p)→p and p→r by a syllogism.
    """
    b = ProofBuilder(INT_I, premises=[Imp(p, r), Imp(Imp(r, p), p),
                                      Imp(Imp(Imp(r, q), r), Imp(s, r)), Imp(q, p)])
    l1 = b.premise(Imp(q, p))
    l2 = b.premise(Imp(Imp(r, p), p))
    pr = b.premise(Imp(p, r))
    rpr = b.derive(Imp(Imp(r, p), r), l2, pr)
    lem = b.include(certificate("lemma-negative-occurrence"))
    l3 = b.mp_chain(lem, l1, rpr)
    l4 = b.premise(Imp(Imp(Imp(r, q), r), Imp(s, r)))
    return b.derivation(b.mp(l3, l4))


def lemma_km_chain() -> Derivation:
    d = certificate("lemma-km-chain-ws")
    for a in (Imp(q, p), Imp(Imp(Imp(r, q), r), Imp(s, r)), Imp(Imp(r, p), p), Imp(p, r)):
        d = deduction(d, a)
    return d


def lemma_peirce_double() -> Derivation:
    """(P(p,q)→q)→q in Int_i, found by proof search."""
    return schema(Imp(Imp(peirce(p, q), q), q))


# In the E:five template the variables stand for
#   p = α, q = β, r = ⊡α, s = ⊡β, t = ⊡(α→β).
# The E:two and E:three facts about β enter as premises (s→q)→q and q→s;
# they are theorems once ⊡β is a concrete conjunction and get composed in.
K_REPLACEMENT_HYPS = (
    t,
    Imp(t, peirce(s, Imp(p, q))),
    Imp(r, peirce(s, p)),
    Imp(Imp(s, q), q),
    Imp(q, s),
)


def lemma_k_replacement_ws() -> Derivation:
    """⊡α→⊡β in Int□_ic from the three replacement hypotheses."""
    b = ProofBuilder(INTBOX_IC, premises=K_REPLACEMENT_HYPS)
    l1 = b.premise(t)
    l2 = b.premise(K_REPLACEMENT_HYPS[1])
    l3 = b.mp(l1, l2)
    x = Imp(s, Imp(p, q))
    l4 = b.derive(Imp(x, Imp(p, Imp(s, q))))
    l5 = b.premise(Imp(Imp(s, q), q))
    l6 = b.derive(Imp(x, Imp(p, q)), l4, l5)
    l7 = b.premise(K_REPLACEMENT_HYPS[2])
    km = b.include(certificate("lemma-km-chain"), {"p": q, "q": p, "r": s, "s": r})
    e3 = b.premise(Imp(q, s))
    l7p = b.derive(Imp(Imp(Imp(s, p), s), Imp(r, s)), l7)
    l8 = b.mp_chain(km, e3, l5, l7p)
    l9 = b.derive(Imp(x, Imp(r, s)), l6, l8)
    l10 = b.derive(Imp(r, Imp(x, s)), l9)
    l11 = b.derive(Imp(r, s), l3, l10)
    return b.derivation(l11)


def lemma_k_replacement() -> Derivation:
    return deduction(certificate("lemma-k-replacement-ws"), t)


def demo_e_derivation() -> Derivation:
    """p ⊩ P(q,p) in E through p→□p and □p→P(q,p)."""
    b = ProofBuilder(E)
    l1 = b.premise(p)
    l3 = b.mp(l1, b.axiom_instance("m.2", {}))
    return b.derivation(b.mp(l3, b.axiom_instance("m.3", {})))


def _boxed(b: ProofBuilder, line: int) -> int:
    return b.mp(line, b.axiom_instance("m.2", {"p": b.formula(line)}))


def _k_step(b: ProofBuilder, box_imp: int, box_ante: int) -> int:
    inner = b.formula(box_imp).arg
    ax = b.axiom_instance("m.1", {"p": inner.left, "q": inner.right})
    return b.mp_chain(ax, box_imp, box_ante)


def demo_e_k_chain() -> Derivation:
    """p, p→q ⊩ P(r,q) in E via the first m-axiom."""
    b = ProofBuilder(E)
    bp = _boxed(b, b.premise(p))
    bpq = _boxed(b, b.premise(Imp(p, q)))
    bq = _k_step(b, bpq, bp)
    return b.derivation(b.mp(bq, b.axiom_instance("m.3", {"p": q, "q": r})))


def demo_e_k_cascade() -> Derivation:
    """p, p→q, q→r ⊩ P(s,r) in E with two first-m-axiom steps."""
    b = ProofBuilder(E)
    bp = _boxed(b, b.premise(p))
    bpq = _boxed(b, b.premise(Imp(p, q)))
    bqr = _boxed(b, b.premise(Imp(q, r)))
    bq = _k_step(b, bpq, bp)
    br = _k_step(b, bqr, bq)
    return b.derivation(b.mp(br, b.axiom_instance("m.3", {"p": r, "q": s})))


GENERATORS = {
    "or-imp-fixpoint-ws": or_imp_fixpoint_ws,
    "or-imp-fixpoint": or_imp_fixpoint,
    "kuz-to-kuzstar-ws": kuz_to_kuzstar_ws,
    "kuz-to-kuzstar": kuz_to_kuzstar,
    "kuzstar-to-kuz-ws": kuzstar_to_kuz_ws,
    "kuzstar-to-kuz": kuzstar_to_kuz,
    "lemma-p-implies-P-ws": lemma_p_implies_P_ws,
    "lemma-p-implies-P": lemma_p_implies_P,
    "lemma-negative-occurrence-ws": lemma_negative_occurrence_ws,
    "lemma-negative-occurrence": lemma_negative_occurrence,
    "lemma-km-chain-ws": lemma_km_chain_ws,
    "lemma-km-chain": lemma_km_chain,
    "lemma-peirce-double": lemma_peirce_double,
    "lemma-k-replacement-ws": lemma_k_replacement_ws,
    "lemma-k-replacement": lemma_k_replacement,
    "demo-e-derivation": demo_e_derivation,
    "demo-e-k-chain": demo_e_k_chain,
    "demo-e-k-cascade": demo_e_k_cascade,
}

# the fragment label each certificate must check in
FRAGMENTS = {
    "or-imp-fixpoint-ws": "Int_icd",
    "or-imp-fixpoint": "Int_icd",
    "kuz-to-kuzstar-ws": "Kuz_icdm",
    "kuz-to-kuzstar": "Kuz_icdm",
    "kuzstar-to-kuz-ws": "KuzStar_icdm",
    "kuzstar-to-kuz": "KuzStar_icdm",
    "lemma-p-implies-P-ws": "Int_i",
    "lemma-p-implies-P": "Int_i",
    "lemma-negative-occurrence-ws": "Int_i",
    "lemma-negative-occurrence": "Int_i",
    "lemma-km-chain-ws": "Int_i",
    "lemma-km-chain": "Int_i",
    "lemma-peirce-double": "Int_i",
    "lemma-k-replacement-ws": "IntBox_ic",
    "lemma-k-replacement": "IntBox_ic",
    "demo-e-derivation": "E",
    "demo-e-k-chain": "E",
    "demo-e-k-cascade": "E",
}

# E-family derivations for the assertoric transformation
E_DEMOS = ("demo-e-derivation", "demo-e-k-chain", "demo-e-k-cascade")


# alternative lookup names
ALIASES = {
    "int-deducibility-2": "or-imp-fixpoint",
    "int-deducibility-2-ws": "or-imp-fixpoint-ws",
}


def canonical(name: str) -> str:
    return ALIASES.get(name, name)


def names() -> list[str]:
    return list(GENERATORS)


def generate(name: str) -> Derivation:
    name = canonical(name)
    if name not in GENERATORS:
        raise KeyError(f"unknown certificate {name!r}")
    return prune(GENERATORS[name]())


def _cert_dir():
    return resources.files("mhcbench") / "certs"


def shipped_text(name: str) -> str:
    name = canonical(name)
    if name not in GENERATORS:
        raise KeyError(f"unknown certificate {name!r}; known: {', '.join(GENERATORS)}")
    return (_cert_dir() / f"{name}.cert").read_text(encoding="utf-8")


_REGENERATING = False


@lru_cache(maxsize=None)
def certificate(name: str) -> Derivation:
    """The shipped certificate ``name``, parsed (not yet checked).

    While the store is being regenerated, certificates come straight from
    the generators instead.
    """
    if _REGENERATING:
        return generate(name)
    return loads(shipped_text(name))


def render_cert(name: str) -> str:
    d = generate(name)
    return dumps(d, [f"{name}: {FRAGMENTS[name]}, mode {d.mode}"])


def write_all(directory=None) -> list[Path]:
    """Regenerate every certificate file; returns the written paths."""
    directory = Path(directory) if directory else Path(str(_cert_dir()))
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    with regenerating():
        for name in GENERATORS:
            path = directory / f"{name}.cert"
            path.write_text(render_cert(name), encoding="utf-8")
            out.append(path)
    return out


@contextmanager
def regenerating():
    """Within this block :func:`certificate` bypasses the shipped files."""
    global _REGENERATING
    certificate.cache_clear()
    _REGENERATING = True
    try:
        yield
    finally:
        _REGENERATING = False
        certificate.cache_clear()


if __name__ == "__main__":
    for path in write_all():
        print(path)
