"""Semiclassical (WKB) band edges of symmetric periodic potentials.

The periodic quantization condition lives in :mod:`bandedge.quantization`;
:mod:`bandedge.reference` solves the Hill equation in a plane-wave basis for
exact band edges to compare against.
"""

from .action import ActionPair, action_pair, allowed_action, forbidden_action
from .elliptic import complete_K, incomplete_F, jacobi_sncndn
from .errors import (
    BandEdgeError,
    BelowWellError,
    ConvergenceError,
    DomainError,
    InfinitePeriodError,
    InvalidPotentialError,
    NoTurningPointError,
)
from .potential import CosineLattice, Lame, PotentialSpec, Tabulated
from .quantization import (
    MINUS,
    PLUS,
    BandEdge,
    BandStructure,
    band_structure,
    residual,
    solve_band_edge,
    solve_standard_levels,
    symmetry_label,
)
from .reference import bloch_eigenvalues, exact_band_edges, fourier_coefficients, hill_matrix

__version__ = "0.1.0"
