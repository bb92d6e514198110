"""Discriminant forms of ADE lattices.

Walks through what the library computes for a single configuration:
the negative-definite Gram matrix, the finite quadratic form on A = L*/L,
its invariants, the p-adic Jordan pieces and the Gauss sum signature.

Run with ``python3 notebooks/01_discriminant_forms.py``.
"""

import numpy as np

from k3ade import AdeConfiguration, ade_discriminant_form, gram_matrix
from k3ade.fqf import gauss_sum_signature, jordan_blocks

config = AdeConfiguration.parse("A3^4+A1^6")
print("canonical name:", config.canonical_name)
print("rank:", config.rank)

# Roots have norm -2, so the Gram matrix is negative definite.
G = gram_matrix(config)
print("Gram matrix shape:", G.shape, " det:", round(abs(np.linalg.det(G))))

form = ade_discriminant_form(config)
print("|A| =", form.order)
print("invariant factors:", form.invariant_factors)
print("length:", form.length, " per prime:", dict(form.length_profile().per_prime))

# The Jordan decomposition at 2 is where the embedding test does its work.
for block in jordan_blocks(form, 2):
    print("  2-adic block:", block)

# Milgram's formula ties the Gauss sum of q to the signature of L, and
# the signature of a negative definite lattice is minus its rank.
print("Gauss sum signature:", gauss_sum_signature(form), " -rank mod 8:", (-config.rank) % 8)
