"""Exact classification of ADE configurations of (-2)-curves on K3 surfaces.

The pipeline enumerates ADE root lattices of rank at most 19, finds their
root-free overlattices of finite index from isotropic subgroups of the
discriminant form, and decides primitive embeddability into the K3 lattice
with Nikulin's criterion. See :mod:`k3ade.classify` for the end-to-end entry
points and :mod:`k3ade.cli` for the command line.
"""

__version__ = "1.0.0"

from .lattice import AdeConfiguration, AdeType, enumerate_configurations, gram_matrix
from .fqf import FiniteQuadraticForm, ade_discriminant_form
from .glue import (
    GlueElement,
    IsotropicSubgroup,
    SearchIncomplete,
    overlattice_candidates,
    search_isotropic_subgroups,
)
from .nikulin import EmbeddingVerdict, embedding_verdict
from .classify import (
    ClassificationRecord,
    Partition,
    ReferenceData,
    classify,
    classify_all,
    partition,
)

__all__ = [
    "__version__",
    "AdeConfiguration",
    "AdeType",
    "enumerate_configurations",
    "gram_matrix",
    "FiniteQuadraticForm",
    "ade_discriminant_form",
    "GlueElement",
    "IsotropicSubgroup",
    "SearchIncomplete",
    "overlattice_candidates",
    "search_isotropic_subgroups",
    "EmbeddingVerdict",
    "embedding_verdict",
    "ClassificationRecord",
    "Partition",
    "ReferenceData",
    "classify",
    "classify_all",
    "partition",
]
