"""Spreading-code construction and correlation analysis for SAC-OCDMA.

The central object is the cyclic-shift (CS) code: user k occupies w adjacent
spectral chips starting at column k*w, so the code matrix is K x (K*w), every
row has weight w, and any two distinct rows have zero cross-correlation.
A binary Hadamard code (Sylvester construction) is provided as the classic
overlapping-chip comparison family, and ``family_parameters`` evaluates the
published cardinality/length formulas for the other code families commonly
cited in SAC-OCDMA comparisons.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, MatrixFormatError

FAMILY_CS = "CS"
FAMILY_HADAMARD = "Hadamard"

# Families accepted by family_parameters().
KNOWN_FAMILIES = (
    "Hadamard", "MFH", "MQC", "KS", "DSC", "RD", "MS", "SW-ZCC", "ZCC", "MD", "CS",
)


@dataclass(frozen=True, eq=False)
class CodeMatrix:
    """Immutable K x L binary spreading-code matrix.

    ``bits`` is stored as a read-only uint8 array; ``weight`` is the nominal
    ones-per-row of the family (verified for constructed CS/Hadamard codes,
    declared-and-checked-later for matrices loaded from files).
    """

    bits: np.ndarray
    weight: int
    family: str = FAMILY_CS

    def __post_init__(self):
        bits = np.ascontiguousarray(self.bits, dtype=np.uint8)
        if bits.ndim != 2:
            raise DomainError("code matrix must be two-dimensional")
        if bits.shape[0] < 1 or bits.shape[1] < 1:
            raise DomainError("code matrix must have at least one row and one column")
        if not np.isin(bits, (0, 1)).all():
            raise DomainError("code matrix entries must be 0 or 1")
        if self.weight < 1:
            raise DomainError("code weight must be >= 1")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def users(self) -> int:
        return self.bits.shape[0]

    @property
    def length(self) -> int:
        return self.bits.shape[1]

    def row(self, k: int) -> np.ndarray:
        return self.bits[k]

    def __repr__(self):
        return (f"CodeMatrix(family={self.family!r}, users={self.users}, "
                f"length={self.length}, weight={self.weight})")


@dataclass(frozen=True)
class CorrelationReport:
    """Per-row autocorrelation and the largest off-diagonal cross-correlation."""

    autocorrelation: tuple[int, ...]
    max_cross: int

    @property
    def is_zero_cross(self) -> bool:
        return self.max_cross == 0


def build_cs(users: int, weight: int) -> CodeMatrix:
    """Construct the cyclic-shift code for ``users`` users at a given weight.

    Row 0 carries ``weight`` leading ones; each following row is the previous
    one rotated right by ``weight`` chips, which lays the K blocks of ones out
    disjointly over L = users * weight columns.
    """
    if users < 1:
        raise DomainError(f"users must be >= 1, got {users}")
    if weight < 1:
        raise DomainError(f"weight must be >= 1, got {weight}")
    length = users * weight
    bits = np.zeros((users, length), dtype=np.uint8)
    row = np.zeros(length, dtype=np.uint8)
    row[:weight] = 1
    for k in range(users):
        bits[k] = row
        row = np.roll(row, weight)
    return CodeMatrix(bits=bits, weight=weight, family=FAMILY_CS)


def build_hadamard(order_exponent: int) -> CodeMatrix:
    """Binary Hadamard code of order 2**order_exponent.

    Sylvester doubling builds the +/-1 matrix; the all-ones first row is
    dropped (it would collide with every code word) and +1 maps to chip-on.
    Result: (2**M - 1) rows of length 2**M, each of weight 2**(M-1).
    """
    m = order_exponent
    if m < 2:
        raise DomainError(f"order exponent must be >= 2, got {m}")
    h = np.array([[1]], dtype=np.int8)
    for _ in range(m):
        h = np.block([[h, h], [h, -h]])
    bits = (h[1:] == 1).astype(np.uint8)
    return CodeMatrix(bits=bits, weight=2 ** (m - 1), family=FAMILY_HADAMARD)


def cyclic_shift_right(sequence: Sequence[int] | np.ndarray, shift: int) -> np.ndarray:
    """Rotate a chip sequence right: output[i] = input[(i - shift) mod L]."""
    if shift < 0:
        raise DomainError(f"shift must be >= 0, got {shift}")
    seq = np.asarray(sequence)
    if seq.ndim != 1:
        raise DomainError("sequence must be one-dimensional")
    return np.roll(seq, shift % seq.shape[0] if seq.shape[0] else 0)


def cross_correlation(a: Sequence[int] | np.ndarray, b: Sequence[int] | np.ndarray) -> int:
    """Number of chip positions where both sequences carry a one."""
    va = np.asarray(a)
    vb = np.asarray(b)
    if va.shape != vb.shape or va.ndim != 1:
        raise DomainError(f"sequences must share one length, got {va.shape} and {vb.shape}")
    return int(np.dot(va.astype(np.int64), vb.astype(np.int64)))


def correlation_check(matrix: CodeMatrix) -> CorrelationReport:
    """Gram-matrix summary: row autocorrelations and the worst pair overlap.

    ``max_cross`` is 0 for a single-row matrix (no pairs exist).
    """
    bits = matrix.bits.astype(np.int64)
    gram = bits @ bits.T
    auto = tuple(int(v) for v in np.diag(gram))
    if matrix.users == 1:
        return CorrelationReport(autocorrelation=auto, max_cross=0)
    off = gram[~np.eye(matrix.users, dtype=bool)]
    return CorrelationReport(autocorrelation=auto, max_cross=int(off.max()))


# ---------------------------------------------------------------------------
# Published family parameter formulas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyParams:
    """Resolved (K, w, L, cross-correlation) for one code family.

    ``users`` is the cardinality actually achieved once the family's
    structural parameter is rounded up; ``users_requested`` echoes the input.
    ``cross_correlation`` is one of "0", "1", "<=1", "variable", or a measured
    numeric value rendered as a string.
    """

    family: str
    users_requested: int
    users: int
    weight: int
    length: int
    cross_correlation: str
    param_name: str | None = None
    param_value: int | None = None


def _triangle(n: int) -> int:
    return n * (n + 1) // 2


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in range(2, int(math.isqrt(n)) + 1):
        if n % p == 0:
            return False
    return True


def family_parameters(
    family: str,
    target_users: int,
    weight_hint: int = 4,
    *,
    dsc_d: int | None = None,
    ms_kb: int | None = None,
) -> FamilyParams:
    """Evaluate a family's published length/cardinality formulas.

    Families with a structural parameter (Hadamard, MFH, MQC, KS, ZCC) round
    it up to the smallest admissible value supporting ``target_users``; their
    weight is dictated by the structure and ``weight_hint`` is ignored.
    Families parameterized directly by K and w (CS, MD, RD, SW-ZCC with w=1)
    evaluate the length formula at the requested point.  DSC needs the extra
    ``dsc_d`` term and MS the served-weight count ``ms_kb``; both are inputs
    the published formulas leave to the designer.
    """
    if target_users < 1:
        raise DomainError(f"target_users must be >= 1, got {target_users}")
    if weight_hint < 1:
        raise DomainError(f"weight_hint must be >= 1, got {weight_hint}")
    k, w = target_users, weight_hint

    if family == "CS" or family == "MD":
        return FamilyParams(family, k, k, w, k * w, "0")
    if family == "RD":
        return FamilyParams(family, k, k, w, k + 2 * w - 3, "variable")
    if family == "SW-ZCC":
        # Weight is fixed at one chip per user, so length equals cardinality.
        return FamilyParams(family, k, k, 1, k, "0")
    if family == "DSC":
        if dsc_d is None:
            raise DomainError("DSC length formula requires the parameter dsc_d")
        length = (2 ** w - 2) + dsc_d
        if length < 1:
            raise DomainError(f"DSC parameters give non-positive length {length}")
        return FamilyParams(family, k, length, w, length, "<=1",
                            param_name="D", param_value=dsc_d)
    if family == "MS":
        if ms_kb is None:
            raise DomainError("MS length formula requires the parameter ms_kb")
        if not 1 <= ms_kb <= w:
            raise DomainError(f"ms_kb must be in [1, weight], got {ms_kb}")
        m = -(-k // w)  # ceil
        length = m * (_triangle(w) - _triangle(w - ms_kb))
        return FamilyParams(family, k, m * w, w, length, "<=1",
                            param_name="M", param_value=m)
    if family == "Hadamard":
        m = 2
        while 2 ** m - 1 < k:
            m += 1
        # Measured pairwise overlap of the binary-mapped code is 2**(M-2);
        # see correlation_check(build_hadamard(m)).
        return FamilyParams(family, k, 2 ** m - 1, 2 ** (m - 1), 2 ** m,
                            str(2 ** (m - 2)), param_name="M", param_value=m)
    if family == "ZCC":
        m = 1
        while 2 ** m < k:
            m += 1
        return FamilyParams(family, k, 2 ** m, 2 ** (m - 1), 2 ** m, "0",
                            param_name="M", param_value=m)
    if family == "MFH":
        q = max(2, math.isqrt(k - 1) + 1)  # smallest integer q >= 2 with q*q >= k
        return FamilyParams(family, k, q * q, q + 1, q * q + q, "1",
                            param_name="q", param_value=q)
    if family == "MQC":
        p = 3
        while p * p < k or not _is_prime(p):
            p += 1
        return FamilyParams(family, k, p * p, p + 1, p * p + p, "1",
                            param_name="p", param_value=p)
    if family == "KS":
        if w % 2 != 0:
            raise DomainError(f"KS weight must be even, got {w}")
        per_group = w // 2 + 1
        m = -(-k // per_group)  # ceil
        length = 3 * m * _triangle(w // 2)
        return FamilyParams(family, k, m * per_group, w, length, "1",
                            param_name="M", param_value=m)
    raise DomainError(f"unknown code family {family!r}; known: {', '.join(KNOWN_FAMILIES)}")


# ---------------------------------------------------------------------------
# Code-matrix text format
# ---------------------------------------------------------------------------
# First line: "K L w family".  Then K lines of L adjoining 0/1 characters.

def format_matrix(matrix: CodeMatrix) -> str:
    header = f"{matrix.users} {matrix.length} {matrix.weight} {matrix.family}"
    rows = ("".join("1" if b else "0" for b in row) for row in matrix.bits)
    return header + "\n" + "\n".join(rows) + "\n"


def parse_matrix(text: str) -> CodeMatrix:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise MatrixFormatError(1, "missing header line 'K L w family'")
    fields = lines[0].split()
    if len(fields) != 4:
        raise MatrixFormatError(1, f"header must be 'K L w family', got {lines[0]!r}")
    try:
        users, length, weight = (int(f) for f in fields[:3])
    except ValueError:
        raise MatrixFormatError(1, f"non-integer dimension in header {lines[0]!r}") from None
    family = fields[3]
    if users < 1 or length < 1 or weight < 1:
        raise MatrixFormatError(1, "K, L and w must all be >= 1")
    body = lines[1:]
    # Trailing blank lines are fine; blank or short/long rows are not.
    while body and not body[-1].strip():
        body.pop()
    if len(body) != users:
        first_bad = len(body) + 2 if len(body) < users else users + 2
        raise MatrixFormatError(first_bad, f"expected {users} code rows, found {len(body)}")
    bits = np.zeros((users, length), dtype=np.uint8)
    for i, line in enumerate(body):
        row = line.strip()
        if len(row) != length:
            raise MatrixFormatError(i + 2, f"expected {length} chips, found {len(row)}")
        bad = set(row) - {"0", "1"}
        if bad:
            raise MatrixFormatError(i + 2, f"invalid chip character {sorted(bad)[0]!r}")
        bits[i] = np.frombuffer(row.encode("ascii"), dtype=np.uint8) - ord("0")
    return CodeMatrix(bits=bits, weight=weight, family=family)


def save_matrix(matrix: CodeMatrix, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_matrix(matrix))


def load_matrix(path) -> CodeMatrix:
    with open(path, "r", encoding="ascii") as fh:
        return parse_matrix(fh.read())


def verify_family_properties(matrix: CodeMatrix) -> tuple[bool, list[str]]:
    """Check the structural guarantees the declared family advertises.

    Returns (ok, list of human-readable violations).  CS requires L = K*w,
    uniform row weight w, and zero cross-correlation; Hadamard requires
    uniform row weight and one common pairwise overlap; any other family is
    held to uniform row weight only.
    """
    problems: list[str] = []
    row_weights = matrix.bits.sum(axis=1)
    if not (row_weights == matrix.weight).all():
        bad = int(np.argmax(row_weights != matrix.weight))
        problems.append(
            f"row {bad} has weight {int(row_weights[bad])}, declared weight is {matrix.weight}")
    report = correlation_check(matrix)
    if matrix.family == FAMILY_CS:
        if matrix.length != matrix.users * matrix.weight:
            problems.append(
                f"length {matrix.length} != users*weight = {matrix.users * matrix.weight}")
        if report.max_cross != 0:
            problems.append(f"max cross-correlation {report.max_cross}, expected 0")
    elif matrix.family == FAMILY_HADAMARD and matrix.users > 1:
        bits = matrix.bits.astype(np.int64)
        gram = bits @ bits.T
        off = gram[~np.eye(matrix.users, dtype=bool)]
        if off.min() != off.max():
            problems.append("pairwise cross-correlation is not uniform")
    return (not problems, problems)
