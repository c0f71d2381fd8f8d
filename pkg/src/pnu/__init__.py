"""Non-abelian tensor squares of finite p-groups through the group nu(G).

The package builds nu(G) from a finite presentation by coset enumeration,
materializes [G, G^phi], Delta(G), mu(G), Theta(G) and M(G) inside a regular
permutation representation, and checks exponent bounds over a corpus of
small p-groups.
"""

from .cosets import ResourceExceeded, enumerate_cosets, regular_representation
from .nu import NuGroup, build_nu, kernel_K, nu_presentation
from .presentations import FinitePresentation, Word, catalog_group, parse_presentation
from .schur import schur_multiplier_oracle

__version__ = "0.1.0"

__all__ = [
    "FinitePresentation",
    "NuGroup",
    "ResourceExceeded",
    "Word",
    "build_nu",
    "catalog_group",
    "enumerate_cosets",
    "kernel_K",
    "nu_presentation",
    "parse_presentation",
    "regular_representation",
    "schur_multiplier_oracle",
]
