"""Search for a small modal Heyting algebra that validates the implicational
and first m-axioms yet refutes []p -> P(q, p).

The formula is derivable once both m-axiom groups are available, so the
countermodel shows the second group is not redundant.
"""

from mhcbench import algebra as alg
from mhcbench.calculi import GROUPS
from mhcbench.syntax import parse, pretty

target = parse("[]p -> ((q -> p) -> q) -> q")
require = list(GROUPS["i"]) + list(GROUPS["m1"])

print("target:", pretty(target))
found = alg.find_countermodel(target, [alg.MODAL_HEYTING], 3, require)
if found is None:
    print("no countermodel with at most 3 elements")
else:
    m, v = found
    print("countermodel:")
    print(alg.dumps(m, v), end="")
    print("value of target:", m.base.labels[alg.evaluate(target, m, v)])
    print("classes:", ", ".join(sorted(alg.classify(m))) or "(none)")
