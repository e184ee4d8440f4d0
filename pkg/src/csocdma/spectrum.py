"""Discretized spectral-domain signal model.

The broadband source spectrum [nu_o - dv/2, nu_o + dv/2) is tiled by L
equal-width chips; an active user adds a flat P_sr/dv contribution on each
of its chips.  Decoding masks the combined PSD with a user's chip pattern
and integrates; because the integrand is piecewise constant and the mask is
chip-aligned, the quadrature is exact up to float rounding, which makes this
an independent numerical check of the closed-form photocurrent.
"""
from __future__ import annotations

import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .codebook import CodeMatrix
from .errors import DomainError
from .linkmodel import PhysicalParams, responsivity


@dataclass(frozen=True)
class SpectrumGrid:
    """Piecewise-constant PSD samples over a chip-aligned frequency grid.

    Chip i (0-based) covers [center + span*(-L + 2i)/(2L),
    center + span*(-L + 2i + 2)/(2L)); each chip holds ``samples_per_chip``
    equal-width samples, so ``psd`` has length chips * samples_per_chip.
    """

    center_hz: float
    span_hz: float
    chips: int
    samples_per_chip: int
    psd: np.ndarray

    def __post_init__(self):
        if self.chips < 1 or self.samples_per_chip < 1:
            raise DomainError("chips and samples_per_chip must be >= 1")
        if self.span_hz <= 0:
            raise DomainError(f"span_hz must be > 0, got {self.span_hz}")
        psd = np.ascontiguousarray(self.psd, dtype=np.float64)
        if psd.shape != (self.chips * self.samples_per_chip,):
            raise DomainError(
                f"psd must have length chips*samples_per_chip = "
                f"{self.chips * self.samples_per_chip}, got {psd.shape}")
        if (psd < 0).any():
            raise DomainError("psd values must be >= 0")
        psd.setflags(write=False)
        object.__setattr__(self, "psd", psd)

    @property
    def chip_width_hz(self) -> float:
        return self.span_hz / self.chips

    @property
    def sample_width_hz(self) -> float:
        return self.chip_width_hz / self.samples_per_chip

    def chip_edges_hz(self, i: int) -> tuple[float, float]:
        lo = self.center_hz + self.span_hz * (-self.chips + 2 * i) / (2 * self.chips)
        return lo, lo + self.chip_width_hz

    def sample_frequencies_hz(self) -> np.ndarray:
        """Left edge of each PSD sample, ascending."""
        start = self.center_hz - self.span_hz / 2.0
        n = self.chips * self.samples_per_chip
        return start + np.arange(n) * self.sample_width_hz

    def total_power_w(self) -> float:
        return float(self.psd.sum() * self.sample_width_hz)

    def per_chip_power_w(self) -> np.ndarray:
        """Integrated power of each chip interval."""
        folded = self.psd.reshape(self.chips, self.samples_per_chip)
        return folded.sum(axis=1) * self.sample_width_hz


def build_combined_psd(matrix: CodeMatrix, data_bits: Sequence[int] | np.ndarray,
                       p_sr_w: float, center_hz: float, span_hz: float,
                       samples_per_chip: int = 1) -> SpectrumGrid:
    """Superpose the flat per-user spectra selected by ``data_bits``.

    Chip i carries (P_sr / span) times the number of users that are both
    sending a '1' and occupy chip i.
    """
    bits = np.asarray(data_bits)
    if bits.shape != (matrix.users,):
        raise DomainError(
            f"data_bits must have length {matrix.users}, got shape {bits.shape}")
    if not np.isin(bits, (0, 1)).all():
        raise DomainError("data_bits entries must be 0 or 1")
    if p_sr_w < 0:
        raise DomainError(f"p_sr_w must be >= 0, got {p_sr_w}")
    active_per_chip = bits.astype(np.float64) @ matrix.bits.astype(np.float64)
    amplitude = (p_sr_w / span_hz) * active_per_chip
    psd = np.repeat(amplitude, samples_per_chip)
    return SpectrumGrid(center_hz=center_hz, span_hz=span_hz, chips=matrix.length,
                        samples_per_chip=samples_per_chip, psd=psd)


def decode_photocurrent_numeric(grid: SpectrumGrid, decoder_row: Sequence[int] | np.ndarray,
                                responsivity_a_w: float) -> float:
    """Photocurrent R * integral of the PSD over the decoder's chips.

    Chips where the decoder is 0 are excluded from the sum outright, so a
    transmission on disjoint chips decodes to exactly 0.0.
    """
    row = np.asarray(decoder_row)
    if row.shape != (grid.chips,):
        raise DomainError(
            f"decoder row must have length {grid.chips}, got shape {row.shape}")
    mask = np.repeat(row.astype(bool), grid.samples_per_chip)
    integral = grid.psd[mask].sum() * grid.sample_width_hz
    return float(responsivity_a_w * integral)


def decode_all_rows(grid: SpectrumGrid, matrix: CodeMatrix,
                    responsivity_a_w: float) -> np.ndarray:
    """Decoded photocurrent for every row of ``matrix`` against one PSD."""
    if matrix.length != grid.chips:
        raise DomainError(
            f"matrix length {matrix.length} does not match grid chips {grid.chips}")
    chip_power = grid.per_chip_power_w()
    return responsivity_a_w * (matrix.bits.astype(np.float64) @ chip_power)


def crosstalk_audit(matrix: CodeMatrix, p_sr_w: float,
                    params: PhysicalParams | None = None) -> np.ndarray:
    """K x K matrix of decoded currents: entry (j, k) is what user j's decoder
    reads when only user k transmits.

    For a zero-cross-correlation family the off-diagonal entries are exactly
    zero; for overlapping families they equal R * P_sr * overlap / L.
    """
    params = params or PhysicalParams()
    r = responsivity(params)
    center = params.center_frequency_hz
    span = params.linewidth_hz
    k_users = matrix.users
    audit = np.zeros((k_users, k_users), dtype=np.float64)
    lone = np.zeros(k_users, dtype=np.uint8)
    for k in range(k_users):
        lone[:] = 0
        lone[k] = 1
        grid = build_combined_psd(matrix, lone, p_sr_w, center, span)
        audit[:, k] = decode_all_rows(grid, matrix, r)
    return audit


def psd_to_csv(grid: SpectrumGrid, stream: io.TextIOBase | None = None) -> str:
    """Dump (frequency_hz, psd_w_per_hz) sample rows for plotting."""
    out = stream or io.StringIO()
    out.write("frequency_hz,psd_w_per_hz\n")
    for f, v in zip(grid.sample_frequencies_hz(), grid.psd):
        out.write(f"{f:.16e},{v:.16e}\n")
    return out.getvalue() if stream is None else ""
