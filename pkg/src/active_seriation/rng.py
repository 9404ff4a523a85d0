"""Portable counter-based pseudo-random generator.

Every stochastic piece of this package (observation noise, random scenario
matrices, latent permutation draws, seed derivation) goes through the
splitmix64 stream defined here, so that runs are reproducible bit-for-bit
from a 64-bit seed, independently of Python/NumPy RNG internals and of the
host platform.

Stream definition (all arithmetic mod 2**64):

    state_k  = seed + (k + 1) * 0x9E3779B97F4A7C15     for k = 0, 1, 2, ...
    output_k = mix(state_k)

    mix(z): z ^= z >> 30; z *= 0xBF58476D1CE4E5B9
            z ^= z >> 27; z *= 0x94D049BB133111EB
            z ^= z >> 31

Derived values:

    uniform in [0, 1):  (output >> 11) * 2**-53
    uniform in (0, 1]:  ((output >> 11) + 1) * 2**-53
    standard normal:    Box-Muller on two consecutive outputs,
                        z = sqrt(-2 ln u1) * cos(2 pi u2), with u1 in (0, 1]
                        from the first output and u2 in [0, 1) from the
                        second; the sine branch is discarded.

The stream is a pure function of (seed, k), which lets a whole block of
draws be produced with vectorised NumPy without any mutable hidden state
beyond the counter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV_2_53 = 2.0 ** -53


def mix64(z: int) -> int:
    """splitmix64 finaliser of a single 64-bit value (pure Python)."""
    z &= _MASK
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def _outputs(seed: int, start: int, count: int) -> np.ndarray:
    """Raw 64-bit outputs for counters start..start+count-1, vectorised."""
    with np.errstate(over="ignore"):
        k = np.arange(start + 1, start + count + 1, dtype=np.uint64)
        z = np.uint64(seed & _MASK) + k * np.uint64(_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        z = z ^ (z >> np.uint64(31))
    return z


@dataclass
class PortableRng:
    """Stateful view over the splitmix64 counter stream.

    Instances are cheap; each owns only (seed, counter). Never share one
    across concurrent consumers: the counter is the only mutable state.
    """

    seed: int
    counter: int = field(default=0)

    def __post_init__(self) -> None:
        self.seed &= _MASK

    def next_outputs(self, count: int) -> np.ndarray:
        out = _outputs(self.seed, self.counter, count)
        self.counter += count
        return out

    def next_uint64(self) -> int:
        return int(self.next_outputs(1)[0])

    def uniforms(self, count: int) -> np.ndarray:
        """count doubles uniform on [0, 1)."""
        return (self.next_outputs(count) >> np.uint64(11)).astype(np.float64) * _INV_2_53

    def uniform(self) -> float:
        return float(self.uniforms(1)[0])

    def normals(self, count: int) -> np.ndarray:
        """count standard normals; consumes exactly 2*count outputs."""
        raw = self.next_outputs(2 * count) >> np.uint64(11)
        u1 = (raw[0::2].astype(np.float64) + 1.0) * _INV_2_53  # (0, 1]
        u2 = raw[1::2].astype(np.float64) * _INV_2_53  # [0, 1)
        return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * math.pi * u2)

    def below(self, bound: int) -> int:
        """Integer uniform on {0, ..., bound-1} via floor(u * bound).

        The floor construction carries an O(2**-53) deviation from exact
        uniformity, which is irrelevant at the bounds used here (< 2**32).
        """
        if bound <= 0:
            raise ValueError("bound must be positive")
        return min(int(self.uniform() * bound), bound - 1)

    def shuffled(self, items: list) -> list:
        """Fisher-Yates shuffle (copy); consumes len(items)-1 draws."""
        out = list(items)
        for i in range(len(out) - 1, 0, -1):
            j = self.below(i + 1)
            out[i], out[j] = out[j], out[i]
        return out


def derive_seed(*parts: int | str) -> int:
    """Deterministic 64-bit seed from a mixed tuple of ints and strings.

    Strings are folded with FNV-1a (64-bit, offset 0xCBF29CE484222325,
    prime 0x100000001B3); the running value is re-mixed through splitmix64
    after every part. Used to give every (cell, replicate, purpose) its own
    independent stream.
    """
    h = 0
    for part in parts:
        if isinstance(part, str):
            v = 0xCBF29CE484222325
            for byte in part.encode("utf8"):
                v = ((v ^ byte) * 0x100000001B3) & _MASK
        else:
            v = int(part) & _MASK
        h = mix64(h ^ v)
    return h


def float_bits(x: float) -> int:
    """IEEE-754 bit pattern of a double, for hashing float parameters."""
    return int(np.float64(x).view(np.uint64))
