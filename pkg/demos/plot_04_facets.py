"""
Recovering the H-representation
===============================

Brute-force facet enumeration turns the vertex list of C_3 and C_4 back into
halfspaces, which coincide with the Bell inequalities.  For n = 4 every one
of the sixteen inequalities is a facet.
"""

from spincorr import HalfSpace, VRepresentation, bell_system, facet_enumerate, is_simplex

for n in (3, 4):
    v = VRepresentation.of_correlation_polytope(n)
    h = facet_enumerate(v)
    bells = {HalfSpace.from_bell(q, n) for q in bell_system(n)}
    print(f"C_{n}: {len(v.points)} vertices in dimension {v.dim}, simplex={is_simplex(v)}")
    print(f"  {len(h.halfspaces)} facets, all Bell: {set(h.halfspaces) <= bells}, "
          f"Bell facets: {sum(f in bells for f in h.halfspaces)}/{len(bells)}")
    for f in h.halfspaces[:4]:
        print("   ", f.offset, [str(a) for a in f.normal])
