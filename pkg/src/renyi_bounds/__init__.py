"""Two-moment integral inequalities, Renyi-entropy upper bounds with their
optimality gaps, and mutual-information bounds from the variance of the
conditional density -- with adaptive-quadrature and Monte Carlo oracles
verifying every closed form."""

__version__ = "0.1.0"

from .errors import (
    DivergenceDetected,
    DomainError,
    Infeasible,
    InvalidMomentOrder,
    MaxSubdivisionsExceeded,
    MomentDiverges,
    OptimizerNoConverge,
    RenyiBoundsError,
    UnsupportedOperation,
)
from .quadrature import Domain, MCResult, NumericsConfig, QuadratureResult, integrate, integrate_2d, mc_expect
from .specfun import beta, beta_tilde, kappa, lambert_w0, ln_gamma, theta
from .moment_core import (
    MomentVector,
    Support,
    TwoMomentParams,
    c_r_numeric,
    k_moment_bound,
    lambda_of,
    omega,
    psi_r,
    two_moment_bound,
)
from .distributions import (
    GaussianMagnitude,
    GenericPdf,
    Lognormal,
    PointMass,
    ScalarDistribution,
    TwoPoint,
    L_r,
    log_moment,
    renyi_entropy,
)
from .entropy_bounds import (
    BoundReport,
    GapReport,
    GaussGapParams,
    diff_entropy_bounds,
    entropy_bound,
    gaussian_Q,
    gaussian_gap,
    lognormal_gap_at,
    lognormal_gap_closed,
    mult_bound_check,
    optimal_gap,
    prop6_limit_check,
)
from .mi_bounds import (
    AwgnChannel,
    ScaleMixtureChannel,
    VsValue,
    V_s,
    chi2_mi_bound,
    kernel_Ks,
    mi_oracle,
    prop7_bound,
    prop8_bound,
    prop9_bound,
    vs_upper_bound_check,
)
from .verify import CheckResult, run_verification
