"""Random walks driven by generalized convolutions of the max-Pareto
(Kendall) type: measures and samplers, the modified Williamson transform,
kernel algebra, simulation engines, closed-form laws, and statistical
verification suites.
"""

from .closedforms import (
    CLOSED_FORMS,
    atom_prob,
    envelope_prob,
    increment_cdf,
    increment_joint_prob,
    joint_density,
    mixture_power_pdf,
    mu1_nfold_pdf,
    nstep_beta_cdf,
    nstep_delta1_cdf,
    nstep_delta1_pdf,
    nstep_gamma_cdf,
    nstep_uniform_cdf,
    sym_nstep_pdf,
    transience_partial_sum,
    transience_sum,
)
from .convolution import (
    AlphaConv,
    Convolution,
    Kendall,
    KernelMixture,
    MaxConv,
    SymmetricConv,
    WeakKendall,
    convolve_atomic,
    convolve_sample,
    kendall_kernel_sample,
    kernel,
    kernel_sample,
    parse_convolution,
    scale,
    weak_kendall_kernel_sample,
)
from .errors import (
    DistSpecError,
    ParameterError,
    ResourceError,
    SupportError,
    TransformError,
)
from .measures import (
    Beta,
    Dirac,
    Distribution,
    FiniteMixture,
    Gamma,
    MuAlpha,
    Pareto,
    RngStream,
    Scaled,
    SymPareto,
    Uniform01,
    mu1_cdf,
    mu1_pdf,
    philox_key,
    sample_mu_alpha,
    scale_law,
    symmetrized_atom,
)
from .verify import (
    CheckResult,
    EnvelopeSpec,
    PowerLawEnvelope,
    VerificationReport,
    empirical_chf,
    envelope_check,
    ks_statistic,
    ks_two_sample,
    moment_check,
    run_verification,
)
from .walks import (
    AssociatedWalkEnsemble,
    SubsampledEnsemble,
    WalkConfig,
    WalkEnsemble,
    WalkPath,
    simulate,
    simulate_associated,
    step_kendall,
    step_weak_kendall,
    subsample,
    worker_count,
)
from .williamson import invert_transform, nstep_cdf, nstep_pdf, phi, phi_prime

__version__ = "0.1.0"

__all__ = [
    "AlphaConv",
    "AssociatedWalkEnsemble",
    "Beta",
    "CLOSED_FORMS",
    "CheckResult",
    "Convolution",
    "Dirac",
    "DistSpecError",
    "Distribution",
    "EnvelopeSpec",
    "FiniteMixture",
    "Gamma",
    "Kendall",
    "KernelMixture",
    "MaxConv",
    "MuAlpha",
    "ParameterError",
    "Pareto",
    "PowerLawEnvelope",
    "ResourceError",
    "RngStream",
    "Scaled",
    "SubsampledEnsemble",
    "SupportError",
    "SymPareto",
    "SymmetricConv",
    "TransformError",
    "Uniform01",
    "VerificationReport",
    "WalkConfig",
    "WalkEnsemble",
    "WalkPath",
    "WeakKendall",
    "atom_prob",
    "convolve_atomic",
    "convolve_sample",
    "empirical_chf",
    "envelope_check",
    "envelope_prob",
    "increment_cdf",
    "increment_joint_prob",
    "invert_transform",
    "joint_density",
    "kendall_kernel_sample",
    "kernel",
    "kernel_sample",
    "ks_statistic",
    "ks_two_sample",
    "mixture_power_pdf",
    "moment_check",
    "mu1_cdf",
    "mu1_nfold_pdf",
    "mu1_pdf",
    "nstep_beta_cdf",
    "nstep_cdf",
    "nstep_delta1_cdf",
    "nstep_delta1_pdf",
    "nstep_gamma_cdf",
    "nstep_pdf",
    "nstep_uniform_cdf",
    "parse_convolution",
    "phi",
    "phi_prime",
    "philox_key",
    "run_verification",
    "sample_mu_alpha",
    "scale",
    "scale_law",
    "simulate",
    "simulate_associated",
    "step_kendall",
    "step_weak_kendall",
    "subsample",
    "sym_nstep_pdf",
    "symmetrized_atom",
    "transience_partial_sum",
    "transience_sum",
    "worker_count",
]
