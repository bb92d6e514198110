"""Primitive embeddings into the K3 lattice and the classification.

A configuration is realizable when some root-free overlattice embeds
primitively into the even unimodular lattice of signature (3, 19). The
embedding test reads off length and local invariants of the discriminant
form; the classifier runs it on every overlattice candidate.
"""

from collections import Counter

from k3ade import AdeConfiguration, ade_discriminant_form, classify, classify_all, embedding_verdict, partition
from k3ade.classify import a1_family_report

for name in ["A1^4+A2^3+A4^2", "A1^3+A2^2+A4^3", "A15+D4", "A1^11"]:
    c = AdeConfiguration.parse(name)
    print(f"{name:18} {embedding_verdict(c.rank, ade_discriminant_form(c))}")

# A record bundles the verdict per overlattice family with the numbers
# of the resulting surface.
rec = classify("A1^16")
print("\nA1^16:", rec.status, [f"{f.index}:{f.subgroup}" for f in rec.families])
print("  b2 of the surface:", rec.b2_surface, " moduli dimension:", rec.moduli_dim)

print("\nA1^k families:")
rows, totals = a1_family_report()
for row in rows:
    print(f"  k={row.k:2} indices {row.indices} {row.status} simple={row.simple}")

# Everything up to rank 12 takes a few seconds; rank 19 takes minutes
# (use the CLI with --jobs for that).
records = classify_all(12)
print("\nrank <= 12:", partition(records).summary())
print("status counts:", dict(Counter(r.status for r in records)))
