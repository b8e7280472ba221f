"""Double the four-element Boolean algebra with a K4Grz box and check that
a refuted formula stays refuted under the box in the doubleton."""

from mhcbench import algebra as alg
from mhcbench.syntax import parse, pretty

base = alg.powerset(2)
box = next(b for b in alg.boxes(base) if alg.K4GRZ in alg.classify(alg.ModalAlgebra(base, b)))
m = alg.ModalAlgebra(base, box)
d = alg.double(m)

print("input:")
print(alg.dumps(m), end="")
print("classes:", ", ".join(sorted(alg.classify(m))))
print()
print("doubleton:")
print(alg.dumps(d), end="")
print("classes:", ", ".join(sorted(alg.classify(d))))
print()

a = parse("p -> []p")
v = alg.refute(a, m)
if v is None:
    print(pretty(a), "is valid in the input")
else:
    B, lv, refuted = alg.weakening_witness(m, a, v)
    print(f"{pretty(a)} refuted by p:={base.labels[v['p']]}")
    print(f"box of it refuted in the doubleton by p:={B.base.labels[lv['p']]}: {refuted}")
