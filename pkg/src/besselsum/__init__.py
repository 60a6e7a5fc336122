"""besselsum: convergent residue expansions for Bessel-function Dirichlet series.

Four families are covered, each with its alternating variant:

* ``s_jj`` / ``s_alternating`` -- Lambda * sum J_mu(na) J_nu(nb) / n^alpha
* ``s1`` (and the mu=2, alpha-nu=3 treble-pole case ``s1_special_mu2``) --
  sum K_mu(an) J_nu(bn) / n^alpha
* ``s2`` -- sum K_mu(an) I_nu(bn) / n^alpha
* ``direct_sum`` -- the naive summation oracle all expansions are verified
  against.

The expansions converge geometrically away from the domain boundaries, which
makes them the practical route for small a, b where direct summation needs
millions of terms.
"""

from .errors import (
    BesselSumError,
    DomainError,
    PoleCollisionError,
    PoleError,
    UsageError,
)
from .hypergeo import (
    FmSpec,
    d_r,
    delta_n,
    eps_derivative_check,
    f_m,
    f_m_asymptotic,
    gauss_2f1,
    hyp3f2,
)
from .kernel import (
    CONSTANTS,
    Constants,
    EULER_GAMMA,
    PI,
    STIELTJES_1,
    bessel_i,
    bessel_i_scaled,
    bessel_j,
    bessel_j_array,
    bessel_k,
    bessel_k_scaled,
    digamma,
    gamma,
    pochhammer,
    zeta,
    zeta_log_deriv_even,
    zeta_sign_log,
)
from .oracle import OracleReport, direct_sum, neumaier_sum
from .series_jj import (
    ThetaClass,
    ThetaKind,
    classify_theta,
    coeff_a_m,
    coeff_b_m,
    f_hat_1_equal,
    f_hat_1_general,
    s_alternating,
    s_equal,
    s_general,
    s_jj,
    upsilon_hat_n,
    upsilon_n,
)
from .series_modified import (
    Collision,
    PoleLattice,
    classify_poles,
    evaluate_modified,
    s1,
    s1_special_mu2,
    s2,
    s_modified_alternating,
)
from .types import (
    EvalResult,
    Method,
    SeriesKind,
    SeriesParams,
    TermLedger,
    TruncationPolicy,
)

__version__ = "0.1.0"

__all__ = [
    "BesselSumError",
    "CONSTANTS",
    "Collision",
    "Constants",
    "DomainError",
    "EULER_GAMMA",
    "EvalResult",
    "FmSpec",
    "Method",
    "OracleReport",
    "PI",
    "PoleCollisionError",
    "PoleError",
    "PoleLattice",
    "STIELTJES_1",
    "SeriesKind",
    "SeriesParams",
    "TermLedger",
    "ThetaClass",
    "ThetaKind",
    "TruncationPolicy",
    "UsageError",
    "bessel_i",
    "bessel_i_scaled",
    "bessel_j",
    "bessel_j_array",
    "bessel_k",
    "bessel_k_scaled",
    "classify_poles",
    "classify_theta",
    "coeff_a_m",
    "coeff_b_m",
    "d_r",
    "delta_n",
    "digamma",
    "direct_sum",
    "eps_derivative_check",
    "evaluate_modified",
    "f_hat_1_equal",
    "f_hat_1_general",
    "f_m",
    "f_m_asymptotic",
    "gamma",
    "gauss_2f1",
    "hyp3f2",
    "neumaier_sum",
    "pochhammer",
    "s1",
    "s1_special_mu2",
    "s2",
    "s_alternating",
    "s_equal",
    "s_general",
    "s_jj",
    "s_modified_alternating",
    "upsilon_hat_n",
    "upsilon_n",
    "zeta",
    "zeta_log_deriv_even",
    "zeta_sign_log",
]
