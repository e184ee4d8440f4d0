"""Closed-form receiver performance model for zero-cross-correlation SAC-OCDMA.

A flat broadband source of bandwidth ``linewidth_hz`` is sliced into
L = K * w chips.  The '1'-symbol photocurrent at a matched decoder is

    I = R * P_sr * w / L = R * P_sr / K

with responsivity R = eta * e / (h * f_c).  The decision-noise variance sums
shot noise at 50% average traffic (e * B * I) with the receiver's thermal
noise (4 * k_B * T_n * B / R_L); SNR = I^2 / sigma^2 and the half-threshold
Gaussian OOK bit error rate is BER = erfc(sqrt(SNR / 8)) / 2.

Sweeps over user count, received power, and fiber length (attenuation-only)
produce :class:`SweepResult` tables exportable as CSV or JSON.
"""
from __future__ import annotations

import dataclasses
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError
from .special import erfc, log_erfc

_LN10 = math.log(10.0)


@dataclass(frozen=True)
class PhysicalParams:
    """Source, photodiode, and receiver-electronics constants.

    Defaults describe the reference desk setup: 3.75 THz flat source at
    1550 nm, 311 MHz equivalent noise bandwidth, 300 K receiver at a 1030 ohm
    load, PIN quantum efficiency 0.6.  ``dark_current_a`` adds an optional
    2*e*B*I_dark shot term, disabled at the default 0.
    """

    linewidth_hz: float = 3.75e12
    wavelength_m: float = 1550e-9
    noise_bandwidth_hz: float = 311e6
    receiver_temp_k: float = 300.0
    quantum_efficiency: float = 0.6
    electron_charge_c: float = 1.602e-19
    planck_js: float = 6.626e-34
    boltzmann_jk: float = 1.381e-23
    load_resistance_ohm: float = 1030.0
    light_speed_ms: float = 2.998e8
    dark_current_a: float = 0.0

    def __post_init__(self):
        for name in ("linewidth_hz", "wavelength_m", "noise_bandwidth_hz",
                     "receiver_temp_k", "quantum_efficiency", "electron_charge_c",
                     "planck_js", "boltzmann_jk", "load_resistance_ohm",
                     "light_speed_ms"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be finite and > 0, got {value!r}")
        if self.quantum_efficiency > 1.0:
            raise DomainError(f"quantum_efficiency must be <= 1, got {self.quantum_efficiency}")
        if not (math.isfinite(self.dark_current_a) and self.dark_current_a >= 0):
            raise DomainError(f"dark_current_a must be >= 0, got {self.dark_current_a!r}")

    @property
    def center_frequency_hz(self) -> float:
        return self.light_speed_ms / self.wavelength_m

    def replace(self, **changes) -> "PhysicalParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


PARAM_FIELD_NAMES = tuple(f.name for f in dataclasses.fields(PhysicalParams))


@dataclass(frozen=True)
class OperatingPoint:
    """Code geometry plus optics: who is talking, how loud, over what fiber."""

    users: int
    weight: int
    received_power_w: float
    fiber_length_km: float | None = None
    attenuation_db_per_km: float = 0.25

    def __post_init__(self):
        if self.users < 1:
            raise DomainError(f"users must be >= 1, got {self.users}")
        if self.weight < 1:
            raise DomainError(f"weight must be >= 1, got {self.weight}")
        if not (math.isfinite(self.received_power_w) and self.received_power_w > 0):
            raise DomainError(f"received_power_w must be > 0, got {self.received_power_w!r}")
        if self.fiber_length_km is not None and self.fiber_length_km < 0:
            raise DomainError(f"fiber_length_km must be >= 0, got {self.fiber_length_km}")
        if self.attenuation_db_per_km < 0:
            raise DomainError(f"attenuation_db_per_km must be >= 0, got {self.attenuation_db_per_km}")

    @property
    def code_length(self) -> int:
        return self.users * self.weight

    @property
    def effective_power_w(self) -> float:
        """Received power after fiber attenuation, if a span is configured."""
        if self.fiber_length_km is None:
            return self.received_power_w
        loss_db = self.attenuation_db_per_km * self.fiber_length_km
        return self.received_power_w * 10.0 ** (-loss_db / 10.0)


@dataclass(frozen=True)
class PerformancePoint:
    photocurrent_a: float
    noise_variance_a2: float
    snr: float
    ber: float
    log10_ber: float

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


def dbm_to_watts(p_dbm: float) -> float:
    return 10.0 ** (p_dbm / 10.0) * 1e-3


def watts_to_dbm(p_w: float) -> float:
    if p_w <= 0:
        raise DomainError(f"power must be > 0 W to express in dBm, got {p_w!r}")
    return 10.0 * math.log10(p_w / 1e-3)


def responsivity(params: PhysicalParams) -> float:
    """Photodiode responsivity eta*e/(h*f_c) in A/W, with f_c = c/lambda."""
    return (params.quantum_efficiency * params.electron_charge_c
            * params.wavelength_m / (params.planck_js * params.light_speed_ms))


def photocurrent(op: OperatingPoint, params: PhysicalParams) -> float:
    """'1'-symbol decoded photocurrent R * P_sr * w / L (= R * P_sr / K)."""
    return (responsivity(params) * op.effective_power_w
            * op.weight / op.code_length)


def thermal_noise(params: PhysicalParams) -> float:
    """Johnson-Nyquist current variance 4 k_B T_n B / R_L in A^2."""
    return (4.0 * params.boltzmann_jk * params.receiver_temp_k
            * params.noise_bandwidth_hz / params.load_resistance_ohm)


def shot_noise(op: OperatingPoint, params: PhysicalParams) -> float:
    """Shot-noise variance e*B*I at 50% average traffic, plus dark current.

    The factor is e*B rather than 2*e*B because each user transmits a '1'
    half the time on average; :func:`noise_variance_peak` keeps the full
    factor for the everyone-sending-'1' worst case.
    """
    base = params.electron_charge_c * params.noise_bandwidth_hz * photocurrent(op, params)
    return base + _dark_term(params)


def _dark_term(params: PhysicalParams) -> float:
    return (2.0 * params.electron_charge_c * params.noise_bandwidth_hz
            * params.dark_current_a)


def noise_variance(op: OperatingPoint, params: PhysicalParams) -> float:
    """Decision-noise variance: half-traffic shot noise plus thermal noise."""
    return shot_noise(op, params) + thermal_noise(params)


def noise_variance_peak(op: OperatingPoint, params: PhysicalParams) -> float:
    """Diagnostic variant with the full 2*e*B*I shot term (all users on)."""
    peak_shot = (2.0 * params.electron_charge_c * params.noise_bandwidth_hz
                 * photocurrent(op, params))
    return peak_shot + _dark_term(params) + thermal_noise(params)


def snr(op: OperatingPoint, params: PhysicalParams) -> float:
    i = photocurrent(op, params)
    return i * i / noise_variance(op, params)


def ber_from_snr(snr_value: float) -> float:
    """Gaussian half-threshold OOK error rate, erfc(sqrt(SNR/8))/2.

    Underflows to 0.0 for very large SNR; see :func:`log10_ber_from_snr`.
    """
    if snr_value < 0:
        raise DomainError(f"snr must be >= 0, got {snr_value!r}")
    return 0.5 * erfc(math.sqrt(snr_value / 8.0))


def log10_ber_from_snr(snr_value: float) -> float:
    """log10 of the OOK error rate, finite even deep in the waterfall tail."""
    if snr_value < 0:
        raise DomainError(f"snr must be >= 0, got {snr_value!r}")
    return (math.log(0.5) + log_erfc(math.sqrt(snr_value / 8.0))) / _LN10


def evaluate(op: OperatingPoint, params: PhysicalParams | None = None) -> PerformancePoint:
    """Full closed-form evaluation of one operating point."""
    params = params or PhysicalParams()
    i = photocurrent(op, params)
    sigma2 = noise_variance(op, params)
    s = i * i / sigma2
    return PerformancePoint(
        photocurrent_a=i,
        noise_variance_a2=sigma2,
        snr=s,
        ber=ber_from_snr(s),
        log10_ber=log10_ber_from_snr(s),
    )


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepResult:
    """Ordered table of performance rows over one swept variable.

    ``variable`` names the first column; ``rows`` are dicts sharing
    ``columns``; ``context`` records the resolved parameter set for
    provenance headers.
    """

    variable: str
    columns: tuple[str, ...]
    rows: list[dict]
    context: dict

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    def to_csv(self, stream: io.TextIOBase | None = None, *, provenance: bool = True) -> str:
        out = stream or io.StringIO()
        if provenance:
            for key, value in self.context.items():
                out.write(f"# {key} = {value}\n")
        out.write(",".join(self.columns) + "\n")
        for row in self.rows:
            out.write(",".join(_csv_cell(row[c]) for c in self.columns) + "\n")
        return out.getvalue() if stream is None else ""

    def to_json(self, stream: io.TextIOBase | None = None) -> str:
        text = json.dumps(self.rows, indent=2) + "\n"
        if stream is None:
            return text
        stream.write(text)
        return ""


def _csv_cell(value) -> str:
    # Floats go out in full-precision scientific notation so the CSV parses
    # back to the exact same doubles the JSON rendering carries.
    if isinstance(value, float):
        return f"{value:.16e}"
    return str(value)


def _performance_row(op: OperatingPoint, params: PhysicalParams) -> dict:
    point = evaluate(op, params)
    power = op.effective_power_w
    return {
        "users": op.users,
        "code_length": op.code_length,
        "power_dbm": watts_to_dbm(power),
        "power_w": power,
        "photocurrent_a": point.photocurrent_a,
        "noise_variance_a2": point.noise_variance_a2,
        "snr": point.snr,
        "ber": point.ber,
        "log10_ber": point.log10_ber,
    }


def _check_ascending(values: Sequence, what: str) -> list:
    values = list(values)
    if not values:
        raise DomainError(f"{what} range must be non-empty")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise DomainError(f"{what} range must be strictly ascending")
    return values


def _context(params: PhysicalParams, **extra) -> dict:
    ctx = dict(extra)
    ctx.update(params.as_dict())
    return ctx


def sweep_users(k_range: Iterable[int], weight: int, p_sr_w: float,
                params: PhysicalParams | None = None) -> SweepResult:
    """BER waterfall versus simultaneous user count at fixed weight and power."""
    params = params or PhysicalParams()
    ks = _check_ascending(k_range, "user")
    rows = []
    for k in ks:
        op = OperatingPoint(users=int(k), weight=weight, received_power_w=p_sr_w)
        rows.append(_performance_row(op, params))
    columns = ("users", "code_length", "power_dbm", "power_w", "photocurrent_a",
               "noise_variance_a2", "snr", "ber", "log10_ber")
    return SweepResult("users", columns, rows,
                       _context(params, sweep="users", weight=weight, power_w=p_sr_w))


def sweep_power(p_range_dbm: Iterable[float], users: int, weight: int,
                params: PhysicalParams | None = None) -> SweepResult:
    """BER waterfall versus received power (dBm) at fixed user count."""
    params = params or PhysicalParams()
    powers = _check_ascending(p_range_dbm, "power")
    rows = []
    for p_dbm in powers:
        op = OperatingPoint(users=users, weight=weight,
                            received_power_w=dbm_to_watts(p_dbm))
        row = _performance_row(op, params)
        row["power_dbm"] = float(p_dbm)  # keep the requested grid value exact
        rows.append(row)
    columns = ("power_dbm", "power_w", "users", "code_length", "photocurrent_a",
               "noise_variance_a2", "snr", "ber", "log10_ber")
    return SweepResult("power_dbm", columns, rows,
                       _context(params, sweep="power", users=users, weight=weight))


def sweep_distance(d_range_km: Iterable[float], launch_power_dbm: float,
                   users: int, weight: int,
                   params: PhysicalParams | None = None,
                   attenuation_db_per_km: float = 0.25) -> SweepResult:
    """BER versus fiber length under flat attenuation (no dispersion model)."""
    params = params or PhysicalParams()
    distances = _check_ascending(d_range_km, "distance")
    if distances[0] < 0:
        raise DomainError("distances must be >= 0 km")
    launch_w = dbm_to_watts(launch_power_dbm)
    rows = []
    for d in distances:
        op = OperatingPoint(users=users, weight=weight, received_power_w=launch_w,
                            fiber_length_km=float(d),
                            attenuation_db_per_km=attenuation_db_per_km)
        row = _performance_row(op, params)
        row = {"distance_km": float(d), **row}
        row["power_dbm"] = launch_power_dbm - attenuation_db_per_km * float(d)
        rows.append(row)
    columns = ("distance_km", "power_dbm", "power_w", "users", "code_length",
               "photocurrent_a", "noise_variance_a2", "snr", "ber", "log10_ber")
    return SweepResult("distance_km", columns, rows,
                       _context(params, sweep="distance", users=users, weight=weight,
                                launch_power_dbm=launch_power_dbm,
                                attenuation_db_per_km=attenuation_db_per_km))


def find_ber_crossing(result: SweepResult, threshold: float) -> float | None:
    """Swept-variable value where BER crosses ``threshold``.

    Interpolates linearly in log10(BER) between the two bracketing rows and
    returns the first crossing, or None if the sweep never crosses.
    """
    if threshold <= 0:
        raise DomainError(f"threshold must be > 0, got {threshold!r}")
    xs = result.column(result.variable)
    logs = result.column("log10_ber")
    target = math.log10(threshold)
    for (x0, y0), (x1, y1) in zip(zip(xs, logs), zip(xs[1:], logs[1:])):
        if y0 == target:
            return float(x0)
        if (y0 - target) * (y1 - target) < 0:
            return float(x0 + (x1 - x0) * (target - y0) / (y1 - y0))
    if logs and logs[-1] == target:
        return float(xs[-1])
    return None


# ---------------------------------------------------------------------------
# Parameter config files: one "key = value" per line, keys as in PhysicalParams
# ---------------------------------------------------------------------------

def parse_params(text: str, base: PhysicalParams | None = None) -> PhysicalParams:
    overrides: dict[str, float] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in PARAM_FIELD_NAMES:
            raise DomainError(f"line {lineno}: unknown parameter {key!r}")
        if key in overrides:
            raise DomainError(f"line {lineno}: duplicate parameter {key!r}")
        try:
            overrides[key] = float(value.strip())
        except ValueError:
            raise DomainError(f"line {lineno}: invalid number {value.strip()!r}") from None
    return (base or PhysicalParams()).replace(**overrides)


def load_params(path, base: PhysicalParams | None = None) -> PhysicalParams:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_params(fh.read(), base=base)
