"""Stochastic number generation and decoding.

An SNG compares a value against a per-cycle sequence in [0, 1) and emits
``1`` when ``seq[n] < value``. Inputs that share a correlation class read the
same sequence and are positively correlated; distinct classes read
decorrelated sequences:

* **LFSR** -- Fibonacci LFSR of width log2(N) over a primitive polynomial.
  ``seq[n] = state_n / 2**width``. The kind's ``seed`` picks the start state;
  class ``c`` starts ``c * floor(0.618 * period)`` steps further along the
  m-sequence, so windows of different classes do not overlap.
* **Van der Corput / Halton(3)** -- radical inverse of a sequence index in
  base 2 / base 3. The index for cycle ``n`` is ``n + phase`` taken modulo
  ``base**w`` (``w`` = digits needed for N) with its ``w`` base-b digits
  rotated left by ``r_c = (c * ceil(w/2) + c // 2) mod w``. Rotation is a
  bijection on ``[0, base**w)``, so for base 2 and N a power of two the first
  N values stay a permutation of ``{i/N}`` and quantization stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from pydantic import BaseModel, Field

from scsynth.errors import SequenceError

# Tap positions (1-based, MSB first) of primitive polynomials, widths 3..16.
LFSR_TAPS: dict[int, tuple[int, ...]] = {
    3: (3, 2),
    4: (4, 3),
    5: (5, 3),
    6: (6, 5),
    7: (7, 6),
    8: (8, 6, 5, 4),
    9: (9, 5),
    10: (10, 7),
    11: (11, 9),
    12: (12, 11, 10, 4),
    13: (13, 12, 11, 8),
    14: (14, 13, 12, 2),
    15: (15, 14),
    16: (16, 15, 13, 4),
}

_GOLDEN_FRACTION = 0.6180339887498949


class SequenceTag(str, Enum):
    """Sequence families that can drive an SNG."""

    LFSR = "lfsr"
    VAN_DER_CORPUT = "vdc"
    HALTON3 = "halton3"


class SequenceKind(BaseModel, frozen=True, extra="forbid"):
    """A sequence family plus its seed (LFSR start state) or index phase."""

    tag: SequenceTag = SequenceTag.VAN_DER_CORPUT
    seed: int = Field(default=0, ge=0)


VAN_DER_CORPUT = SequenceKind(tag=SequenceTag.VAN_DER_CORPUT, seed=0)
LFSR = SequenceKind(tag=SequenceTag.LFSR, seed=0)
HALTON3 = SequenceKind(tag=SequenceTag.HALTON3, seed=0)


@dataclass(frozen=True)
class Bitstream:
    """A stochastic number: N bits whose fraction of 1s carries the value."""

    bits: np.ndarray

    def __post_init__(self) -> None:
        if self.bits.ndim != 1 or self.bits.size < 1:
            raise ValueError("a bitstream is a non-empty 1-D array")

    @classmethod
    def from_string(cls, text: str) -> Bitstream:
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bitstring: {text!r}")
        return cls(np.fromiter((c == "1" for c in text), dtype=bool, count=len(text)))

    @property
    def length(self) -> int:
        return int(self.bits.size)

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Bitstream):
            return NotImplemented
        return bool(np.array_equal(self.bits, other.bits))

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------

def decode_unipolar(stream: Bitstream | np.ndarray) -> float | np.ndarray:
    """Fraction of 1s. Arrays are decoded along axis 0 (cycles)."""
    bits = stream.bits if isinstance(stream, Bitstream) else stream
    value = np.mean(bits, axis=0, dtype=np.float64)
    return float(value) if np.ndim(value) == 0 else value


def decode_bipolar(stream: Bitstream | np.ndarray) -> float | np.ndarray:
    """(#1s - #0s) / N, i.e. ``2 * unipolar - 1``."""
    return 2.0 * decode_unipolar(stream) - 1.0


# ---------------------------------------------------------------------------
# Sequences
# ---------------------------------------------------------------------------

def radical_inverse(n: int, base: int) -> float:
    """Mirror the base-*base* digits of *n* about the radix point."""
    if base < 2:
        raise ValueError("base must be at least 2")
    result, scale = 0.0, 1.0
    while n > 0:
        n, digit = divmod(n, base)
        scale /= base
        result += digit * scale
    return result


def lfsr_next(state: int, width: int) -> int:
    """One Fibonacci LFSR step; the feedback bit enters at the MSB."""
    taps = LFSR_TAPS.get(width)
    if taps is None:
        raise SequenceError(f"unsupported LFSR width {width} (supported: 3..16)")
    if state == 0:
        raise SequenceError("LFSR state 0 is absorbing")
    bit = 0
    for tap in taps:
        bit ^= state >> (width - tap)
    return (state >> 1) | ((bit & 1) << (width - 1))


def _digit_width(n: int, base: int) -> int:
    width, span = 1, base
    while span < n:
        width += 1
        span *= base
    return width


def _rotate_digits(index: int, base: int, width: int, shift: int) -> int:
    digits = []
    for _ in range(width):
        index, digit = divmod(index, base)
        digits.append(digit)
    digits = digits[shift:] + digits[:shift]
    out = 0
    for digit in reversed(digits):
        out = out * base + digit
    return out


def class_rotation(corr_class: int, width: int) -> int:
    """Digit rotation applied to the sequence index of *corr_class*."""
    return (corr_class * -(-width // 2) + corr_class // 2) % width


@lru_cache(maxsize=256)
def _sequence(kind: SequenceKind, corr_class: int, length: int) -> np.ndarray:
    if kind.tag is SequenceTag.LFSR:
        width = length.bit_length() - 1
        if 1 << width != length or width not in LFSR_TAPS:
            raise SequenceError(
                f"LFSR needs N = 2**w with w in 3..16, got N={length}"
            )
        period = (1 << width) - 1
        state = kind.seed % period + 1
        for _ in range(corr_class * int(period * _GOLDEN_FRACTION)):
            state = lfsr_next(state, width)
        values = np.empty(length, dtype=np.float64)
        for n in range(length):
            values[n] = state / length
            state = lfsr_next(state, width)
    else:
        base = 2 if kind.tag is SequenceTag.VAN_DER_CORPUT else 3
        width = _digit_width(length, base)
        span = base**width
        shift = class_rotation(corr_class, width)
        values = np.fromiter(
            (
                radical_inverse(
                    _rotate_digits((n + kind.seed) % span, base, width, shift), base
                )
                for n in range(length)
            ),
            dtype=np.float64,
            count=length,
        )
    values.setflags(write=False)
    return values


def sequence(kind: SequenceKind, corr_class: int, length: int) -> np.ndarray:
    """The (read-only, cached) comparator sequence of a class at length N."""
    if length < 1:
        raise SequenceError("SN length must be at least 1")
    if corr_class < 0:
        raise SequenceError("correlation class ids are non-negative")
    return _sequence(kind, corr_class, length)


def generate_bits(
    values: np.ndarray, length: int, kind: SequenceKind, corr_class: int
) -> np.ndarray:
    """Bits for many values at once, shape ``(length, len(values))``."""
    values = np.asarray(values, dtype=np.float64)
    if np.any((values < 0.0) | (values > 1.0)):
        raise SequenceError("SN values must lie in [0, 1]")
    seq = sequence(kind, corr_class, length)
    return seq[:, None] < values[None, :]


def generate_sn(
    value: float,
    length: int,
    kind: SequenceKind = VAN_DER_CORPUT,
    corr_class: int = 0,
) -> Bitstream:
    """Stochastic number for *value* from the class's sequence."""
    return Bitstream(generate_bits(np.array([value]), length, kind, corr_class)[:, 0])
