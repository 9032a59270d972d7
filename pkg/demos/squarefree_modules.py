"""
Squarefree modules as representations of the cell poset
=======================================================

R, k[sigma] and p_sigma are squarefree. Each one collapses to one vector
space per cell, plus maps along the face order.
"""

from torface import fixtures
from torface.squarefree import (
    check_squarefree,
    explicit_module,
    prime_module,
    quotient_module,
    ring_module,
    to_incidence_module,
)

R = fixtures.load("fx6").ring()
cx = R.complex

for M in (ring_module(R, 4), quotient_module(R, "ab", 4), prime_module(R, "a", 4)):
    rep = check_squarefree(M)
    V = to_incidence_module(M)
    spaces = {cx.cells[s].id: n for s, n in V.spaces.items()}
    print(f"{M.name:12s} squarefree={rep.squarefree} V={spaces}")

# A truncation is not squarefree: t^3 kills t^2 even though the support stays v.
R1 = fixtures.load("fx1").ring()
M = explicit_module(R1, {"dims": [{"degree": {"cell": "v", "coords": [2]}, "dim": 1}]}, 6)
rep = check_squarefree(M)
a, b = rep.witness
print("truncation squarefree:", rep.squarefree, "witness", a.coords, "times", b.coords)
