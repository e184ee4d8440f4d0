"""Chip-level Monte Carlo bit simulation cross-validating the closed form.

Per bit slot, every user draws an equiprobable data bit; the target user's
decoder output is the sum of the active users' spectrally decoded
contributions plus one Gaussian noise sample at the analytic decision-noise
variance.  A genie threshold at ``threshold_fraction`` of the noiseless '1'
level decides the bit.  For a zero-cross-correlation code this reproduces
the closed-form waterfall, which is the point of the cross-check.

Two interchangeable kernels exist: a compiled extension (preferred) and a
vectorized numpy fallback, selected at import.  Both consume the same
counter-based random stream, so results are reproducible and, in practice,
engine-independent.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import beta as _beta_dist

from . import _mcpure
from .codebook import CodeMatrix
from .errors import DomainError
from .linkmodel import OperatingPoint, PhysicalParams, noise_variance, responsivity
from .spectrum import build_combined_psd, decode_photocurrent_numeric

try:
    from . import _mccore
except ImportError:  # extension not built; fall back to numpy
    _mccore = None

ENGINES = ("auto", "compiled", "python")


def compiled_available() -> bool:
    return _mccore is not None


def active_engine(engine: str = "auto") -> str:
    """Resolve an engine request to the kernel that will actually run."""
    if engine not in ENGINES:
        raise DomainError(f"engine must be one of {ENGINES}, got {engine!r}")
    if engine == "auto":
        return "compiled" if compiled_available() else "python"
    if engine == "compiled" and not compiled_available():
        raise DomainError("compiled kernel requested but the extension is not built")
    return engine


@dataclass(frozen=True)
class MonteCarloConfig:
    """Experiment identity for one simulation run.

    ``non_target_bits`` forces every interferer's data to a constant (0 or 1)
    while keeping the random stream layout unchanged, which isolates
    multiple-access interference from noise.  ``noise_variance_override``
    replaces the analytic variance (0.0 gives a noiseless channel).
    """

    bits_per_user: int
    rng_seed: int
    target_user: int = 0
    threshold_fraction: float = 0.5
    non_target_bits: int | None = None
    noise_variance_override: float | None = None

    def __post_init__(self):
        if self.bits_per_user < 1:
            raise DomainError(f"bits_per_user must be >= 1, got {self.bits_per_user}")
        if not 0.0 <= self.threshold_fraction < 1.0:
            raise DomainError(
                f"threshold_fraction must be in [0, 1), got {self.threshold_fraction}")
        if self.non_target_bits not in (None, 0, 1):
            raise DomainError(f"non_target_bits must be None, 0 or 1, got {self.non_target_bits}")
        if self.noise_variance_override is not None and self.noise_variance_override < 0:
            raise DomainError("noise_variance_override must be >= 0")


@dataclass(frozen=True)
class BerEstimate:
    errors: int
    bits: int
    ber_point: float
    ci95_low: float
    ci95_high: float

    def as_dict(self) -> dict:
        return {"errors": self.errors, "bits": self.bits, "ber": self.ber_point,
                "ci95": [self.ci95_low, self.ci95_high]}


def clopper_pearson(errors: int, bits: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact binomial confidence interval; one-sided at the 0/all boundaries."""
    if not 0 <= errors <= bits:
        raise DomainError(f"need 0 <= errors <= bits, got {errors}/{bits}")
    alpha = 1.0 - confidence
    low = 0.0 if errors == 0 else float(_beta_dist.ppf(alpha / 2, errors, bits - errors + 1))
    high = 1.0 if errors == bits else float(_beta_dist.ppf(1 - alpha / 2, errors + 1, bits - errors))
    return low, high


def decoded_contributions(matrix: CodeMatrix, target_user: int, p_sr_w: float,
                          params: PhysicalParams) -> np.ndarray:
    """Per-user current at the target's decoder, via the spectral model.

    Entry k is what the target's decoder reads when only user k transmits;
    entry ``target_user`` is the noiseless '1' level.
    """
    r = responsivity(params)
    center = params.center_frequency_hz
    span = params.linewidth_hz
    contrib = np.zeros(matrix.users, dtype=np.float64)
    lone = np.zeros(matrix.users, dtype=np.uint8)
    for k in range(matrix.users):
        lone[:] = 0
        lone[k] = 1
        grid = build_combined_psd(matrix, lone, p_sr_w, center, span)
        contrib[k] = decode_photocurrent_numeric(grid, matrix.row(target_user), r)
    return contrib


def run_monte_carlo(matrix: CodeMatrix, op: OperatingPoint,
                    params: PhysicalParams | None = None,
                    mc: MonteCarloConfig | None = None, *,
                    engine: str = "auto", chunk_bits: int = 1 << 15) -> BerEstimate:
    """Simulate ``mc.bits_per_user`` slots and estimate the target's BER.

    The noise variance follows the analytic model at the operating point's
    (users, weight) geometry; decoded signal levels always come from the
    actual code matrix.  Identical (seed, config) gives identical output for
    any chunking.
    """
    params = params or PhysicalParams()
    if mc is None:
        raise DomainError("a MonteCarloConfig is required")
    if op.users != matrix.users or op.weight != matrix.weight:
        raise DomainError(
            f"operating point ({op.users} users, weight {op.weight}) does not match "
            f"matrix ({matrix.users} users, weight {matrix.weight})")
    if not 0 <= mc.target_user < matrix.users:
        raise DomainError(
            f"target_user must be in [0, {matrix.users}), got {mc.target_user}")

    contrib = decoded_contributions(matrix, mc.target_user, op.effective_power_w, params)
    one_level = float(contrib[mc.target_user])
    threshold = mc.threshold_fraction * one_level
    sigma2 = (noise_variance(op, params) if mc.noise_variance_override is None
              else mc.noise_variance_override)
    sigma = float(np.sqrt(sigma2))
    key = mc.rng_seed & 0xFFFFFFFFFFFFFFFF
    force = -1 if mc.non_target_bits is None else int(mc.non_target_bits)

    which = active_engine(engine)
    if which == "compiled":
        errors = int(_mccore.count_errors(mc.bits_per_user, key, contrib,
                                          mc.target_user, threshold, sigma, force))
    else:
        errors = _mcpure.count_errors(mc.bits_per_user, key, contrib,
                                      mc.target_user, threshold, sigma, force,
                                      chunk=chunk_bits)
    low, high = clopper_pearson(errors, mc.bits_per_user)
    return BerEstimate(errors=errors, bits=mc.bits_per_user,
                       ber_point=errors / mc.bits_per_user,
                       ci95_low=low, ci95_high=high)


def estimate_to_json_dict(estimate: BerEstimate, mc: MonteCarloConfig) -> dict:
    """BerEstimate JSON object with the seed and configuration echoed."""
    payload = estimate.as_dict()
    payload["seed"] = mc.rng_seed
    payload["config"] = {
        "bits_per_user": mc.bits_per_user,
        "target_user": mc.target_user,
        "threshold_fraction": mc.threshold_fraction,
        "non_target_bits": mc.non_target_bits,
        "noise_variance_override": mc.noise_variance_override,
    }
    return payload
