"""Variations of grid functions: (k,p)-variations over cube packings with
minimax or oscillation weights, the classical variation notions, local
polynomial approximation with certificates, atomic decompositions of
finitely supported functionals, and a property-test suite over seeded
function families.
"""

from .approx import (
    ApproxResult,
    Polynomial,
    best_minimax_poly,
    e_k,
    make_polynomial,
    minimax_reference,
    poly_multi_indices,
    poly_space_dim,
)
from .atoms import (
    Atom,
    AtomReport,
    Chain,
    DualityReport,
    UNormBounds,
    chain_norm,
    chain_values,
    conjugate_exponent,
    delta_correction,
    duality_check,
    make_atom,
    make_chain,
    u_norm_bounds,
    validate_atom,
)
from .classical import (
    VitaliResult,
    hardy_krause_breakdown,
    hardy_krause_variation,
    jordan_variation,
    partial_function,
    tonelli_variation,
    vitali_deviation,
    vitali_variation,
    wiener_variation,
)
from .differences import (
    finite_difference,
    osc_directional,
    osc_k,
    osc_mixed,
)
from .errors import GridvarError, GuardError, LPError, UnisolventError
from .families import FAMILIES, FunctionFamily, generate
from .grid import (
    ENUMERATION_CELL_LIMIT,
    GridFunction,
    LatticeCube,
    LatticeInterval,
    Packing,
    enumerate_cubes,
    enumerate_packings,
    is_packing,
    make_grid_function,
)
from .grid_io import grid_from_payload, grid_payload, load_grid, save_grid
from .suite import SuiteConfig, SuiteReport, run_suite
from .variation import (
    VariationParams,
    VariationResult,
    ac_modulus,
    cube_weight,
    holder_seminorm,
    packing_objective,
    restricted_variation,
    smoothness,
    variation_bruteforce,
    variation_dyadic,
    variation_local_search,
)
from .whitney import (
    WhitneyReport,
    interpolate_1d,
    mixed_projection,
    tensor_projection,
    whitney_certificate,
    whitney_projection,
)

__version__ = "0.1.0"

__all__ = [
    "ApproxResult",
    "Atom",
    "AtomReport",
    "Chain",
    "DualityReport",
    "ENUMERATION_CELL_LIMIT",
    "FAMILIES",
    "FunctionFamily",
    "GridFunction",
    "GridvarError",
    "GuardError",
    "LPError",
    "LatticeCube",
    "LatticeInterval",
    "Packing",
    "Polynomial",
    "SuiteConfig",
    "SuiteReport",
    "UNormBounds",
    "UnisolventError",
    "VariationParams",
    "VariationResult",
    "VitaliResult",
    "WhitneyReport",
    "ac_modulus",
    "best_minimax_poly",
    "chain_norm",
    "chain_values",
    "conjugate_exponent",
    "cube_weight",
    "delta_correction",
    "duality_check",
    "e_k",
    "enumerate_cubes",
    "enumerate_packings",
    "finite_difference",
    "generate",
    "grid_from_payload",
    "grid_payload",
    "hardy_krause_breakdown",
    "hardy_krause_variation",
    "holder_seminorm",
    "interpolate_1d",
    "is_packing",
    "jordan_variation",
    "load_grid",
    "make_atom",
    "make_chain",
    "make_grid_function",
    "make_polynomial",
    "minimax_reference",
    "mixed_projection",
    "osc_directional",
    "osc_k",
    "osc_mixed",
    "packing_objective",
    "partial_function",
    "poly_multi_indices",
    "poly_space_dim",
    "restricted_variation",
    "run_suite",
    "save_grid",
    "smoothness",
    "tensor_projection",
    "tonelli_variation",
    "u_norm_bounds",
    "validate_atom",
    "variation_bruteforce",
    "variation_dyadic",
    "variation_local_search",
    "vitali_deviation",
    "vitali_variation",
    "whitney_certificate",
    "whitney_projection",
    "wiener_variation",
]
