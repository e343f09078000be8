"""Gaussian beta ensemble laboratory.

Samples the tridiagonal matrix model, computes eigenvalue statistics,
evaluates exact finite-size moment and variance formulas through path
combinatorics, and runs Monte Carlo experiments checking the semicircle
law and the central limit theorem in the large-coupling and the
fixed-coupling (``n*beta -> 2*alpha``) regimes.
"""

__version__ = "0.1.0"

from .randsrc import (
    RngStream,
    GammaParams,
    sample_gaussian,
    sample_gamma,
    sample_chi_tilde,
    sample_dirichlet,
    gamma_moment_exact,
    gaussian_moment_exact,
)
from .model import (
    TridiagonalMatrix,
    SpectralSample,
    build_gbe,
    free_jacobi,
    build_j_alpha_truncation,
    spectral_sample,
    dump_matrix,
    load_matrix,
)
from .tridiag_eig import (
    EigenResult,
    EigenConvergenceError,
    eigenvalues,
    eigen_count_below,
    linear_statistic,
)
from .paths import (
    ClosedPath,
    ExponentProfile,
    AdmissibleWindow,
    enumerate_closed,
    enumerate_motzkin,
    exponent_profile,
    admissible_window,
    path_weight,
)
from .polynomials import BivarPoly, Polynomial
from .exact_moments import (
    ExactStructureError,
    entry_moment,
    spectral_moment_expected,
    spectral_moment_product_expected,
    empirical_moment_expected,
    moment_of_polynomial,
    variance_linear_stat,
    sigma_p_sq,
    sigma_p_alpha_sq,
    poincare_check,
    martingale_delta,
    martingale_increment_Y,
    path_weight_expected,
)
from .densities import (
    DensityGrid,
    QuadratureError,
    semicircle_pdf,
    semicircle_cdf,
    semicircle_moment,
    f_hat_alpha,
    nu_alpha_pdf,
    nu_alpha_grid,
    sigma_f_sq_quadrature,
)
from .harness import (
    BetaRule,
    TestFunction,
    ExperimentSpec,
    ExperimentResult,
    ExperimentError,
    run_experiment,
    ks_distance_to_normal,
    semicircle_ks,
    martingale_condition_scan,
)
