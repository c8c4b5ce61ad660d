"""cellkit: covers of complex cells.

Cells are iterated fibered products of discs, punctured discs, disc
complements, annuli and points; the package builds extensions, refinements,
Weierstrass polydiscs and compatible prepared covers for them, with a
verification harness and a CLI.
"""

from .polynomials import (
    PolyMap,
    RootSet,
    batched_roots,
    cauchy_bound,
    elementary_symmetric,
    resultant,
    univariate_roots,
)

__all__ = [
    "PolyMap",
    "RootSet",
    "batched_roots",
    "cauchy_bound",
    "elementary_symmetric",
    "resultant",
    "univariate_roots",
]

__version__ = "0.1.0"
