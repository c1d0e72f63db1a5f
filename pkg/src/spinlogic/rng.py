"""Deterministic random number generation.

The noise source throughout the simulator is a 32-bit xorshift generator
(shift triple 13/17/5); its most significant bit after each update is the
random sign bit.  Stream seeding is fixed and documented so that every run
is reproducible and the bit-level emulator can mirror the engine exactly:

* trial seed   = ``base_seed XOR trial_index`` (64-bit),
* spin stream  = low 32 bits of ``mix64(trial_seed + (i+1) * GOLDEN)`` for
  spin index ``i`` (the sweep-order stream uses ``i = num_spins``), with
  zero states replaced by ``0x9E3779B9``.

``mix64`` is the splitmix64 finalizer.
"""

from __future__ import annotations

MASK32 = 0xFFFFFFFF
MASK64 = 0xFFFFFFFFFFFFFFFF
GOLDEN = 0x9E3779B97F4A7C15
_FALLBACK_STATE = 0x9E3779B9


def mix64(x: int) -> int:
    """splitmix64 finalizer (64-bit avalanche)."""
    x &= MASK64
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & MASK64
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & MASK64
    x ^= x >> 31
    return x


def derive_seed(base: int, index: int) -> int:
    """Decorrelated 64-bit seed for stream ``index`` under ``base``."""
    return mix64((base + GOLDEN * (index + 1)) & MASK64)


def trial_seed(base_seed: int, trial_index: int) -> int:
    return (base_seed ^ trial_index) & MASK64


def stream_state(trial_seed_value: int, stream_index: int) -> int:
    """Initial nonzero 32-bit xorshift state for one stream of a trial."""
    s = derive_seed(trial_seed_value, stream_index) & MASK32
    return s or _FALLBACK_STATE


class XorShift32:
    """32-bit xorshift PRNG; the output of each step is the new state."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        state &= MASK32
        if state == 0:
            raise ValueError("xorshift state must be nonzero")
        self.state = state

    def next_u32(self) -> int:
        x = self.state
        x ^= (x << 13) & MASK32
        x ^= x >> 17
        x ^= (x << 5) & MASK32
        self.state = x
        return x

    def noise_sign(self) -> int:
        """+1 or -1 from the most significant bit of the next output."""
        return 1 if self.next_u32() >> 31 else -1

    def uniform(self) -> float:
        """Uniform float in [0, 1) from the next 32-bit output."""
        return self.next_u32() / 4294967296.0
