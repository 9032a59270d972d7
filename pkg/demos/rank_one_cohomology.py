"""
Local cohomology of the cusp k[t^2, t^3]
========================================

The classical rank-one case. H^1_m(R) is k[t, 1/t] / R, so it lives at the
negative degrees and at the single gap 1. The dual complex J sees the
mirror image.
"""

from torface import fixtures
from torface.homology import StrandBuilder, box_scan, cm_diagnostic, strand_cohomology
from torface.oracle import numerical_semigroup_oracle

model = fixtures.load("fx1")
R = model.ring()
B = StrandBuilder(R)

L = box_scan(B, "L", 6)
J = box_scan(B, "J", 6)
print("H^1(L) at", [a.coords[0] for a in L.nonzero(1)])
print("H^-1(J) at", [a.coords[0] for a in J.nonzero(-1)])
print("gaps by enumeration", numerical_semigroup_oracle([2, 3], 6))

# one strand in detail: the Cech strand at degree 1 has a single slot at v
st = B.build_cech_strand(R.degree("v", [1]))
print("strand at t^1:", {i: len(s) for i, s in st.positions.items()}, strand_cohomology(st))

print("verdict:", cm_diagnostic(J, R.dim).verdict)

# The normalization k[t] has its canonical module at positive degrees.
Bn = StrandBuilder(fixtures.load("fx1n").ring())
print("normalized, H^-1(J) at", [a.coords[0] for a in box_scan(Bn, "J", 6).nonzero(-1)])
