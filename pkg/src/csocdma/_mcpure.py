"""Pure-numpy Monte Carlo kernel (fallback for the compiled extension).

Random numbers come from a counter-based generator so every bit slot owns a
fixed segment of the stream regardless of chunking or evaluation order:
draw ``pos`` of run ``key`` is the SplitMix64 output at state
``key + (pos + 1) * GAMMA``.  Slot s uses positions
``s*dps .. s*dps + dps - 1`` where ``dps`` is words-of-user-bits + 2; the
final two positions feed a Box-Muller Gaussian for the decision noise.

The compiled kernel in ``_mccore`` implements the identical arithmetic.
"""
from __future__ import annotations

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_TWO_NEG53 = 2.0 ** -53


def stream_values(key: int, positions: np.ndarray) -> np.ndarray:
    """SplitMix64 outputs at the given stream positions (uint64)."""
    z = np.uint64(key) + (positions + np.uint64(1)) * _GAMMA
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _unit_open(u64: np.ndarray) -> np.ndarray:
    # 53-bit mantissa mapped to (0, 1]; never 0, so log() is safe.
    return ((u64 >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO_NEG53


def count_errors(n_bits: int, key: int, contrib: np.ndarray, target: int,
                 threshold: float, sigma: float, force_non_target: int,
                 chunk: int = 1 << 15) -> int:
    """Errors over ``n_bits`` slots; ``force_non_target`` is -1 (random) or 0/1."""
    k_users = contrib.shape[0]
    words_per_slot = (k_users + 63) // 64
    dps = np.uint64(words_per_slot + 2)
    target_word = target >> 6
    target_shift = np.uint64(target & 63)
    interferer_sum = float(contrib.sum() - contrib[target])
    errors = 0
    for start in range(0, n_bits, chunk):
        n = min(chunk, n_bits - start)
        base = np.arange(start, start + n, dtype=np.uint64) * dps
        tword = stream_values(key, base + np.uint64(target_word))
        target_bits = ((tword >> target_shift) & np.uint64(1)).astype(bool)
        if force_non_target >= 0:
            currents = interferer_sum * float(force_non_target) \
                + np.where(target_bits, float(contrib[target]), 0.0)
        else:
            currents = np.zeros(n, dtype=np.float64)
            for widx in range(words_per_slot):
                word = tword if widx == target_word \
                    else stream_values(key, base + np.uint64(widx))
                lo = widx * 64
                hi = min(k_users, lo + 64)
                shifts = np.arange(hi - lo, dtype=np.uint64)
                user_bits = ((word[:, None] >> shifts) & np.uint64(1)).astype(np.float64)
                currents += user_bits @ contrib[lo:hi]
        u1 = _unit_open(stream_values(key, base + np.uint64(words_per_slot)))
        u2 = _unit_open(stream_values(key, base + np.uint64(words_per_slot + 1)))
        noise = sigma * np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
        decided = (currents + noise) > threshold
        errors += int(np.count_nonzero(decided != target_bits))
    return errors
