"""
The Moebius strip as a toric face ring
======================================

Three square cones glued into a strip with a half twist. This is not a
fan, yet it still defines a ring with six variables.
"""

from torface import fixtures

model = fixtures.load("fx3")
R = model.ring()
cx = R.complex
print(len(cx), "cells; Krull dimension", R.dim)

# Variables are the minimal monomial generators; the fixture names them.
pres = R.presentation(3)
print("variables:", pres.variables)
for rel in pres.relation_strings():
    print("  ", rel)

# Multiplication follows the cones: x and v share a square, u, v, w do not.
t = {name: R.monomial(d) for name, d in R.labelled_variables()}
print("x*v == u*y:", t["x"] * t["v"] == t["u"] * t["y"])
print("u*v*w:", t["u"] * t["v"] * t["w"])

# One minimal prime per square.
for p in R.minimal_primes():
    kept = [n for n, d in R.labelled_variables() if d not in p.generators]
    print("k[%s] keeps" % cx.cells[p.prime_of].id, kept)

# The twist shows up in the degree group: some classes are represented
# twice inside one square.
twisted = [a for a in R.box_degrees(2) if not R.is_tame(a)]
a = twisted[0]
print(len(twisted), "twisted classes in the B=2 box, e.g.")
for cell, reps in R.reps(a).items():
    print("   ", cx.cells[cell].id, reps)
