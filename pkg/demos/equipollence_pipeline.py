"""Turn the bundled E-derivations with assertoric conclusions into plain
intuitionistic derivations and show the box replacements used."""

from mhcbench.certificates import E_DEMOS, certificate
from mhcbench.kernel import check
from mhcbench.syntax import pretty
from mhcbench import equipollence

for name in E_DEMOS:
    d = certificate(name)
    r = equipollence.run(d)
    out = r.final.derivation
    print(f"== {name}")
    print("  premises:  ", ", ".join(pretty(a) for a in d.premises))
    print("  conclusion:", pretty(d.conclusion))
    print("  lines:     ", len(d.steps), "→", len(r.stage1.derivation.steps),
          "→", len(r.stage2.derivation.steps), "→", len(out.steps))
    print("  replacements:")
    for row in r.replacement_table().splitlines():
        print("    " + row)
    print("  output checks in", out.calculus.label + ":", check(out).ok)
    print("  converse (Int into E):", r.final.converse_ok)
