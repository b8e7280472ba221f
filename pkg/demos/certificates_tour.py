"""Check every bundled certificate and print its conclusion."""

from mhcbench.certificates import FRAGMENTS, certificate, names
from mhcbench.kernel import check
from mhcbench.syntax import pretty

for name in names():
    d = certificate(name)
    ok = check(d).ok and d.calculus.label == FRAGMENTS[name]
    prem = ", ".join(pretty(a) for a in d.premises)
    turnstile = f"{prem} ⊩ " if prem else "⊩ "
    print(f"{'ok ' if ok else 'BAD'} {name:28} {d.calculus.label:13} {len(d.steps):4} lines  "
          f"{turnstile}{pretty(d.conclusion)}")
