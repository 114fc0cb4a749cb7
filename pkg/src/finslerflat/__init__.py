"""Numerical certification of projectively and dually flat spherically
symmetric Finsler metrics."""

from .errors import ConvexityError, DomainError, EstimationError, NonSmoothError, QuadratureError
from .jets import Jet2, fd_oracle, jet_arith, seed_variable, sqrt, variables
from .metrics import (
    ZOO,
    MetricSpec,
    SamplePoint,
    f_solution,
    finsler_eval,
    finsler_jet,
    funk_formula,
    phi,
    phi_family,
    psi_of,
    sample_domain,
)
from .geometry import (
    FundamentalTensor,
    GeodesicTrace,
    dual_potential_check,
    energy_drift,
    fundamental_tensor,
    geodesic_integrate,
    projective_factor,
    spray_coefficients,
    straightness_residual,
    write_trace_csv,
)
from .quadrature import adaptive_simpson
from .certify import (
    CertReport,
    aggregate,
    convexity_scan,
    coupled_residual,
    dualflat_residual,
    estimate_c,
    identity_suite,
    ode_residual,
    psi_pde_lhs,
    psi_pde_residual,
    psi_reduction_protocol,
    quadrature_reconstruction_check,
    rapcsak_residual,
)

__version__ = "0.1.0"
