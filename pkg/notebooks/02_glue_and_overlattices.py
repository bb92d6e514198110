"""Glue classes, isotropic subgroups and overlattices.

An overlattice of L corresponds to an isotropic subgroup H of A. It adds
no new roots exactly when every nonzero glue element has even minimal
coset norm at least 4 (in absolute value). The search returns all such
subgroups up to the symmetries of the configuration.
"""

from k3ade import overlattice_candidates, search_isotropic_subgroups
from k3ade.glue import admissible_elements, orbit_size

name = "A2^9"
elements = admissible_elements(name)
print(f"{name}: {len(elements)} admissible glue orbits")
for e, size in elements[:3]:
    print(f"  {e}  order {e.order}  coset norm {e.min_coset_norm}  orbit {size}")

result = search_isotropic_subgroups(name)
print(f"\n{len(result.subgroups)} subgroups up to symmetry, {result.nodes} search nodes")
for h in result.subgroups:
    tag = " (maximal)" if h.maximal else ""
    print(f"  {h.describe():12} orbit size {orbit_size(h)}{tag}")

# Turning symmetry off lists every labelled subgroup; the orbit sizes
# must add up to that number. A2^9 has over 400000 labelled subgroups,
# so the comparison uses a smaller relative.
small = "A2^6"
labelled = search_isotropic_subgroups(small, symmetry=False)
reduced = search_isotropic_subgroups(small)
print(f"{small}: {len(labelled.subgroups)} labelled subgroups,",
      "sum of orbits", sum(orbit_size(h) for h in reduced.subgroups))

# Each subgroup gives a candidate overlattice with |A'| |H|^2 = |A|.
print()
for cand in overlattice_candidates(name):
    print(f"  index {cand.index}: |A'| = {cand.induced_form.order}, length {cand.induced_form.length}")
