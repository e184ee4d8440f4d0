"""Code construction, correlation properties, family formulas, text format."""
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from csocdma.codebook import (
    CodeMatrix,
    build_cs,
    build_hadamard,
    correlation_check,
    cross_correlation,
    cyclic_shift_right,
    family_parameters,
    format_matrix,
    parse_matrix,
    verify_family_properties,
)
from csocdma.errors import DomainError, MatrixFormatError

# The worked 6x24 example: row k occupies columns 4k..4k+3.
GOLDEN_6_4 = np.array(
    [[1 if col // 4 == row else 0 for col in range(24)] for row in range(6)],
    dtype=np.uint8,
)


def brute_force_pairwise(bits):
    """Independent cross-correlation oracle: plain Python dot products."""
    rows = [list(map(int, r)) for r in bits]
    return [sum(x * y for x, y in zip(a, b)) for a, b in combinations(rows, 2)]


class TestBuildCs:
    def test_golden_6_4(self):
        m = build_cs(6, 4)
        assert m.users == 6 and m.length == 24 and m.weight == 4
        assert np.array_equal(m.bits, GOLDEN_6_4)

    def test_weight_one_is_identity(self):
        m = build_cs(3, 1)
        assert np.array_equal(m.bits, np.eye(3, dtype=np.uint8))

    def test_5_3_by_hand_steps(self):
        # Re-run the construction by hand with list slicing as the oracle:
        # leading ones, then repeated rotate-right by the weight.
        row = [1, 1, 1] + [0] * 12
        expected = []
        for _ in range(5):
            expected.append(row)
            row = row[-3:] + row[:-3]
        m = build_cs(5, 3)
        assert np.array_equal(m.bits, np.array(expected, dtype=np.uint8))
        for k in range(5):
            assert list(m.row(k)[3 * k:3 * k + 3]) == [1, 1, 1]

    @pytest.mark.parametrize("users,weight", [(0, 4), (6, 0), (-1, 2), (2, -3)])
    def test_rejects_degenerate_sizes(self, users, weight):
        with pytest.raises(DomainError):
            build_cs(users, weight)

    def test_rows_are_cyclic_shifts(self):
        m = build_cs(7, 5)
        for k in range(m.users):
            assert np.array_equal(m.row(k), cyclic_shift_right(m.row(0), k * 5))

    def test_immutable(self):
        m = build_cs(4, 2)
        with pytest.raises(ValueError):
            m.bits[0, 0] = 0


class TestCyclicShift:
    def test_basic_rotation(self):
        assert list(cyclic_shift_right([1, 1, 0, 0], 2)) == [0, 0, 1, 1]

    def test_full_period_is_identity(self):
        assert list(cyclic_shift_right([1, 0, 0, 0], 4)) == [1, 0, 0, 0]

    def test_row0_shift_gives_row1(self):
        m = build_cs(6, 4)
        assert np.array_equal(cyclic_shift_right(m.row(0), 4), m.row(1))

    def test_negative_shift_rejected(self):
        with pytest.raises(DomainError):
            cyclic_shift_right([1, 0], -1)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=40), st.integers(0, 100))
    def test_index_relation(self, seq, shift):
        out = cyclic_shift_right(seq, shift)
        n = len(seq)
        assert all(out[i] == seq[(i - shift) % n] for i in range(n))


class TestCrossCorrelation:
    def test_cs_distinct_rows_zero(self):
        m = build_cs(6, 4)
        assert cross_correlation(m.row(0), m.row(1)) == 0

    def test_autocorrelation_is_weight(self):
        m = build_cs(8, 5)
        for k in range(8):
            assert cross_correlation(m.row(k), m.row(k)) == 5

    def test_hadamard_m2_pairs(self):
        m = build_hadamard(2)
        assert brute_force_pairwise(m.bits) == [1, 1, 1]
        for a, b in combinations(range(3), 2):
            assert cross_correlation(m.row(a), m.row(b)) == 1

    def test_length_mismatch(self):
        with pytest.raises(DomainError):
            cross_correlation([1, 0], [1, 0, 1])

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=30), st.data())
    def test_symmetric(self, a, data):
        b = data.draw(st.lists(st.integers(0, 1), min_size=len(a), max_size=len(a)))
        assert cross_correlation(a, b) == cross_correlation(b, a)

    @given(st.lists(st.integers(0, 1), min_size=1, max_size=30))
    def test_self_correlation_counts_ones(self, a):
        assert cross_correlation(a, a) == sum(a)


class TestCorrelationCheck:
    def test_cs_6_4(self):
        report = correlation_check(build_cs(6, 4))
        assert report.autocorrelation == (4,) * 6
        assert report.max_cross == 0
        assert report.is_zero_cross

    def test_single_row(self):
        report = correlation_check(build_cs(1, 5))
        assert report.autocorrelation == (5,)
        assert report.max_cross == 0

    def test_hadamard_m3_matches_brute_force(self):
        m = build_hadamard(3)
        report = correlation_check(m)
        assert report.autocorrelation == (4,) * 7
        assert report.max_cross == max(brute_force_pairwise(m.bits)) == 2

    def test_does_not_mutate(self):
        m = build_cs(3, 2)
        before = m.bits.copy()
        correlation_check(m)
        assert np.array_equal(m.bits, before)


class TestHadamard:
    def test_m2_exact(self):
        # Sylvester H4 with the all-ones row dropped, +1 -> 1.
        expected = np.array([[1, 0, 1, 0], [1, 1, 0, 0], [1, 0, 0, 1]], dtype=np.uint8)
        assert np.array_equal(build_hadamard(2).bits, expected)

    def test_m5_dimensions(self):
        m = build_hadamard(5)
        assert m.users == 31 and m.length == 32 and m.weight == 16
        assert (m.bits.sum(axis=1) == 16).all()

    def test_order_too_small(self):
        for bad in (1, 0, -2):
            with pytest.raises(DomainError):
                build_hadamard(bad)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_uniform_pairwise_overlap(self, m):
        pairs = brute_force_pairwise(build_hadamard(m).bits)
        assert len(set(pairs)) == 1
        assert pairs[0] == 2 ** (m - 2)


class TestFamilyParameters:
    def test_rd(self):
        fp = family_parameters("RD", 30, 4)
        assert (fp.users, fp.weight, fp.length) == (30, 4, 35)
        assert fp.cross_correlation == "variable"

    def test_md_equals_cs_length(self):
        assert family_parameters("MD", 30, 4).length == 120
        assert family_parameters("CS", 30, 4).length == 120

    def test_cs_unit(self):
        fp = family_parameters("CS", 1, 1)
        assert fp.length == 1 and fp.cross_correlation == "0"

    @given(st.integers(1, 200), st.integers(1, 20))
    def test_cs_md_lengths_agree(self, users, weight):
        assert (family_parameters("CS", users, weight).length
                == family_parameters("MD", users, weight).length)

    def test_hadamard_rounds_up(self):
        fp = family_parameters("Hadamard", 30)
        assert (fp.param_value, fp.users, fp.weight, fp.length) == (5, 31, 16, 32)
        assert fp.cross_correlation == "8"  # measured overlap, 2**(M-2)

    def test_mfh_any_integer_q(self):
        fp = family_parameters("MFH", 30)
        assert (fp.param_value, fp.users, fp.weight, fp.length) == (6, 36, 7, 42)

    def test_mqc_requires_prime(self):
        fp = family_parameters("MQC", 30)
        assert (fp.param_value, fp.users, fp.weight, fp.length) == (7, 49, 8, 56)

    def test_ks(self):
        fp = family_parameters("KS", 30, 4)
        assert (fp.param_value, fp.users, fp.length) == (10, 30, 90)

    def test_ks_odd_weight_rejected(self):
        with pytest.raises(DomainError, match="even"):
            family_parameters("KS", 30, 5)

    def test_zcc(self):
        fp = family_parameters("ZCC", 30)
        assert (fp.users, fp.weight, fp.length) == (32, 16, 32)

    def test_sw_zcc_direct(self):
        fp = family_parameters("SW-ZCC", 30)
        assert (fp.users, fp.weight, fp.length) == (30, 1, 30)

    def test_dsc_requires_d(self):
        with pytest.raises(DomainError, match="dsc_d"):
            family_parameters("DSC", 30, 4)
        fp = family_parameters("DSC", 30, 4, dsc_d=16)
        assert fp.users == fp.length == 30

    def test_ms_requires_kb(self):
        with pytest.raises(DomainError, match="ms_kb"):
            family_parameters("MS", 30, 4)
        fp = family_parameters("MS", 30, 4, ms_kb=2)
        # M = ceil(30/4) = 8, L = 8 * (10 - 3) = 56
        assert (fp.param_value, fp.users, fp.length) == (8, 32, 56)

    def test_unknown_family(self):
        with pytest.raises(DomainError, match="unknown"):
            family_parameters("OOC", 30, 4)


class TestCsProperties:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 16), st.integers(1, 8))
    def test_structure_and_zero_cross(self, users, weight):
        m = build_cs(users, weight)
        assert m.length == users * weight
        assert (m.bits.sum(axis=1) == weight).all()
        gram = m.bits.astype(int) @ m.bits.astype(int).T
        assert np.array_equal(gram, weight * np.eye(users, dtype=int))
        for k in range(users):
            assert np.array_equal(m.row(k), cyclic_shift_right(m.row(0), k * weight))


class TestMatrixTextFormat:
    def test_round_trip(self):
        for m in (build_cs(6, 4), build_cs(1, 1), build_hadamard(3)):
            again = parse_matrix(format_matrix(m))
            assert np.array_equal(again.bits, m.bits)
            assert (again.users, again.length, again.weight, again.family) == \
                (m.users, m.length, m.weight, m.family)

    def test_format_shape(self):
        text = format_matrix(build_cs(2, 2))
        assert text == "2 4 2 CS\n1100\n0011\n"

    def test_bad_header(self):
        with pytest.raises(MatrixFormatError, match="line 1"):
            parse_matrix("6 24 CS\n")

    def test_bad_chip_character(self):
        with pytest.raises(MatrixFormatError, match="line 3"):
            parse_matrix("2 4 2 CS\n1100\n0x11\n")

    def test_short_row(self):
        with pytest.raises(MatrixFormatError, match="line 2"):
            parse_matrix("2 4 2 CS\n110\n0011\n")

    def test_missing_row(self):
        with pytest.raises(MatrixFormatError, match="line 3"):
            parse_matrix("2 4 2 CS\n1100\n")

    def test_non_binary_constructor(self):
        with pytest.raises(DomainError):
            CodeMatrix(bits=np.array([[0, 2]], dtype=np.uint8), weight=1)


class TestVerifyFamilyProperties:
    def test_cs_passes(self):
        ok, problems = verify_family_properties(build_cs(30, 4))
        assert ok and not problems

    def test_single_chip_matrix_passes(self):
        ok, _ = verify_family_properties(parse_matrix("1 1 1 CS\n1\n"))
        assert ok

    def test_flipped_bit_fails(self):
        # Any single flip breaks a row weight (1->0) or creates overlap (0->1).
        base = build_cs(6, 4)
        for (r, c) in [(0, 0), (0, 5), (3, 12), (5, 23)]:
            bits = base.bits.copy()
            bits[r, c] ^= 1
            tampered = CodeMatrix(bits=bits, weight=4, family="CS")
            ok, problems = verify_family_properties(tampered)
            assert not ok and problems

    def test_hadamard_passes(self):
        ok, _ = verify_family_properties(build_hadamard(4))
        assert ok
