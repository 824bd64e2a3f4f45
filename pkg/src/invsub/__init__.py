"""Tail bounds, samplers and densities for inverse subordinators."""

from importlib.metadata import PackageNotFoundError, version

from .bounds import (
    BoundCurve,
    IDDiagnosis,
    bound_curve,
    chernoff_bound,
    chernoff_bound_power,
    closed_form_bound,
    diagnose_id,
    log_chernoff_bound,
    steutel_ratio,
)
from .density import LTInversionConfig, family_pdf, inverse_subordinator_density
from .exponents import (
    DomainError,
    Gamma,
    InverseGaussian,
    Stable,
    Subordinator,
    TemperedStable,
    parse_spec,
    psi,
    psi_prime,
    psi_prime_inverse,
)
from .samplers import (
    RngStream,
    WaitingTime,
    sample_composed_iss,
    sample_fractional_poisson,
    sample_increment,
    sample_inverse_stable_exact,
    sample_inverse_subordinator,
    sample_renewal_count,
    sample_time_changed_iss,
    simulate_path,
)
from .stats import check_tail_dominance, empirical_steutel_ratio, ks_two_sample

try:
    __version__ = version("artifact")
except PackageNotFoundError:
    __version__ = "0.0.0"

__all__ = [
    "BoundCurve",
    "DomainError",
    "Gamma",
    "IDDiagnosis",
    "InverseGaussian",
    "LTInversionConfig",
    "RngStream",
    "Stable",
    "Subordinator",
    "TemperedStable",
    "WaitingTime",
    "bound_curve",
    "check_tail_dominance",
    "chernoff_bound",
    "chernoff_bound_power",
    "closed_form_bound",
    "diagnose_id",
    "empirical_steutel_ratio",
    "family_pdf",
    "inverse_subordinator_density",
    "ks_two_sample",
    "log_chernoff_bound",
    "parse_spec",
    "psi",
    "psi_prime",
    "psi_prime_inverse",
    "sample_composed_iss",
    "sample_fractional_poisson",
    "sample_increment",
    "sample_inverse_stable_exact",
    "sample_inverse_subordinator",
    "sample_renewal_count",
    "sample_time_changed_iss",
    "simulate_path",
    "steutel_ratio",
]
