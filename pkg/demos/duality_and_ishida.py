"""
J against L and against the Ishida complex
==========================================

Ranks of the dual complex mirror those of the Cech complex in every
degree. On cone-wise normal input the Ishida complex, built only from
semigroup membership, has the same cohomology as J.
"""

from torface import fixtures
from torface.errors import NotConeWiseNormal
from torface.homology import StrandBuilder, box_scan, cm_diagnostic, duality_check, ishida_vs_dual_check

for name in fixtures.NAMES:
    B = StrandBuilder(fixtures.load(name).ring())
    d = duality_check(B, 3)
    try:
        ish = ishida_vs_dual_check(B, 3).status
    except NotConeWiseNormal:
        ish = "n/a (not normal)"
    print(f"{name}: duality {d.status}, Ishida {ish}")

# Two disjoint edges: the punctured spectrum is disconnected, so depth is 1.
R6 = fixtures.load("fx6").ring()
v = cm_diagnostic(box_scan(StrandBuilder(R6), "J", 4), R6.dim)
print("fx6:", v.verdict, [(i, a.coords) for i, a in v.witnesses])
