"""Cyclic-shift SAC-OCDMA toolkit.

Construction and verification of cyclic-shift (zero-cross-correlation)
spectral-amplitude codes, the closed-form shot/thermal-noise receiver model
with BER waterfall sweeps, a spectral-domain numerical cross-check, and a
reproducible Monte Carlo bit simulator.
"""
from .codebook import (
    CodeMatrix,
    CorrelationReport,
    FamilyParams,
    build_cs,
    build_hadamard,
    correlation_check,
    cross_correlation,
    cyclic_shift_right,
    family_parameters,
    format_matrix,
    load_matrix,
    parse_matrix,
    save_matrix,
    verify_family_properties,
)
from .errors import DomainError, MatrixFormatError
from .linkmodel import (
    OperatingPoint,
    PerformancePoint,
    PhysicalParams,
    SweepResult,
    ber_from_snr,
    dbm_to_watts,
    evaluate,
    find_ber_crossing,
    load_params,
    log10_ber_from_snr,
    noise_variance,
    noise_variance_peak,
    parse_params,
    photocurrent,
    responsivity,
    shot_noise,
    snr,
    sweep_distance,
    sweep_power,
    sweep_users,
    thermal_noise,
    watts_to_dbm,
)
from .montecarlo import (
    BerEstimate,
    MonteCarloConfig,
    clopper_pearson,
    compiled_available,
    run_monte_carlo,
)
from .special import erf, erfc, log_erfc
from .spectrum import (
    SpectrumGrid,
    build_combined_psd,
    crosstalk_audit,
    decode_all_rows,
    decode_photocurrent_numeric,
    psd_to_csv,
)

__version__ = "0.1.0"
