"""Deterministic-equivalent spectral distributions of percolated lattice graphs."""

from .canonical import (
    AlphaVector,
    CanonicalProblem,
    CanonicalSolution,
    OracleError,
    SolverError,
    build_problem,
    deterministic_stieltjes,
    matrix_k1_oracle,
    recover_all_alphas,
    solve_alpha,
)
from .espectrum import (
    EmpiricalSpectrum,
    average_esd,
    eigenvalues,
    empirical_stieltjes,
    esd_cdf,
    monte_carlo_spectrum,
    pool,
    row_normalized_spectrum,
    scaled_spectrum,
    smoothed_density,
)
from .inversion import SpectralCurve, auto_grid, cdf_curve, density_curve
from .lattice import (
    ExpectedSpectrum,
    LatticeSpec,
    SizeLimitError,
    are_adjacent,
    decode_index,
    encode_index,
    expected_degree,
    expected_matrix,
    expected_spectrum,
    lattice_adjacency,
    node_count,
)
from .metrics import DistanceReport, compare, kolmogorov_distance, levy_distance
from .percolation import (
    GirkoConditionReport,
    PercolationSample,
    girko_conditions,
    row_normalized_adjacency,
    sample,
    scaled_adjacency,
    write_edges,
)

__version__ = "0.1.0"
