"""Probabilistic-bit annealing of circuit Hamiltonians.

Each free spin carries its own 32-bit xorshift noise stream and, in counter
mode, a saturated up/down counter.  One update step computes per spin

    I_i = local_field_i + w_rnd * sign_noise,

then applies the mode rule:

* ``counter``   — counter += round(i0 * I_i) saturated to [-L, +L]; the
  spin is the counter's sign (ties to +1).  This mirrors the clocked
  spin-gate hardware and is the default everywhere.
* ``sign``      — spin = sign(I_i); i0 drops out entirely (the sign of a
  tanh equals the sign of its argument), provided for ablation.
* ``boltzmann`` — spin = +1 with probability (1 + tanh(i0 * I_i)) / 2 using
  one extra uniform draw per spin (the sigmoid uses float64; everything
  else in the engine is exact integer/rational arithmetic).

A *shot* is T update steps at i0_min (exploration) followed by T at i0_max
(stabilization), one step per ``tau`` cycles.  A trial runs shots until the
end-of-shot energy equals the circuit ground energy or the shot budget runs
out.

Determinism: trial ``t`` of a run with base seed ``s`` uses trial seed
``s XOR t``; per-spin streams derive from it as documented in
:mod:`spinlogic.rng`.  rounding is half-away-from-zero on exact rationals.
Results are bit-identical between the accelerated kernel (counter mode,
synchronous order, interaction order <= 3) and the pure-Python reference
path, regardless of batching.

Update order ``synchronous`` computes every field from the previous state
(matching clocked hardware); ``random_sweep`` visits spins in a fresh
permutation per step (Fisher-Yates from a dedicated stream, drawn before
the spin updates) with in-place updates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .hamiltonian import Hamiltonian, spins_to_bits
from .netlist import CircuitHamiltonian
from .rng import MASK64, XorShift32, stream_state, trial_seed

MODES = ("counter", "sign", "boltzmann")
ORDERS = ("synchronous", "random_sweep")


@dataclass(frozen=True)
class AnnealConfig:
    """Schedule and update-rule parameters.

    i0 is the pseudo inverse temperature: ``i0_min`` runs the exploring
    half-period, ``i0_max`` the stabilizing one, each ``half_period_T``
    cycles long.
    """

    i0_min: Fraction = Fraction(2)
    i0_max: Fraction = Fraction(4)
    half_period_T: int = 100
    n_shot_max: int = 16
    w_rnd: Fraction = Fraction(3)
    tau: int = 1
    mode: str = "counter"
    update_order: str = "synchronous"
    counter_bound_L: int = 32
    seed: int = 1

    def __post_init__(self):
        object.__setattr__(self, "i0_min", Fraction(self.i0_min))
        object.__setattr__(self, "i0_max", Fraction(self.i0_max))
        object.__setattr__(self, "w_rnd", Fraction(self.w_rnd))
        if not 0 < self.i0_min <= self.i0_max:
            raise ValidationError("need 0 < i0_min <= i0_max")
        if self.half_period_T < 1 or self.n_shot_max < 1:
            raise ValidationError("half_period_T and n_shot_max must be >= 1")
        if self.w_rnd < 0:
            raise ValidationError("w_rnd must be nonnegative")
        if not 1 <= self.tau <= self.half_period_T:
            raise ValidationError("tau must be in [1, half_period_T]")
        if self.mode not in MODES:
            raise ValidationError(f"mode must be one of {MODES}")
        if self.update_order not in ORDERS:
            raise ValidationError(f"update_order must be one of {ORDERS}")
        if self.counter_bound_L < 0:
            raise ValidationError("counter_bound_L must be >= 0")

    @property
    def steps_per_half(self) -> int:
        return self.half_period_T // self.tau


@dataclass(frozen=True)
class EngineState:
    """Snapshot of one annealing trial (immutable; steps return new states).

    ``rng`` holds the per-spin xorshift states plus the sweep-order stream
    as the final entry.
    """

    spins: tuple[int, ...]
    counters: tuple[int, ...]
    cycle: int
    shot: int
    rng: tuple[int, ...]


@dataclass(frozen=True)
class TrialResult:
    converged: bool
    shots_used: int
    final_energy: Fraction
    final_state: tuple[int, ...]
    energy_trace: tuple[Fraction, ...]


def round_half_away(x: Fraction) -> int:
    """Round to the nearest integer, halves away from zero."""
    n, d = x.numerator, x.denominator
    q = (2 * abs(n) + d) // (2 * d)
    return q if n >= 0 else -q


def _rounddiv(a: int, b: int) -> int:
    # round_half_away(a / b) for b > 0
    q = (2 * abs(a) + b) // (2 * b)
    return q if a >= 0 else -q


# ---------------------------------------------------------------------------
# scalar reference implementation


def init_state(ch: CircuitHamiltonian, cfg: AnnealConfig, trial_index: int = 0) -> EngineState:
    """Seed all streams and draw the initial spins/counters.

    In counter mode the counter initializes uniformly over [-L, +L] (one
    draw per spin) and the spin is its sign; other modes take the spin from
    the draw's top bit.
    """
    n = ch.hamiltonian.num_spins
    ts = trial_seed(cfg.seed, trial_index)
    rngs = [XorShift32(stream_state(ts, i)) for i in range(n + 1)]
    spins = []
    counters = []
    L = cfg.counter_bound_L
    for i in range(n):
        v = rngs[i].next_u32()
        if cfg.mode == "counter" and L > 0:
            c = v % (2 * L + 1) - L
            counters.append(c)
            spins.append(1 if c >= 0 else -1)
        else:
            counters.append(0)
            spins.append(1 if v >> 31 else -1)
    return EngineState(tuple(spins), tuple(counters), 0, 0, tuple(r.state for r in rngs))


def step(
    state: EngineState,
    ch: CircuitHamiltonian,
    cfg: AnnealConfig,
    i0_now: Fraction,
) -> EngineState:
    """One update step of every free spin at inverse temperature ``i0_now``."""
    h = ch.hamiltonian
    n = h.num_spins
    if len(state.spins) != n:
        raise ValidationError("engine state does not match the circuit")
    rngs = [XorShift32(s) for s in state.rng]
    spins = list(state.spins)
    counters = list(state.counters)
    L = cfg.counter_bound_L

    if cfg.update_order == "synchronous":
        source: Sequence[int] = state.spins
        order = range(n)
    else:
        source = spins  # in-place: later spins see earlier updates
        order = list(range(n))
        sweep = rngs[n]
        for i in range(n - 1, 0, -1):
            j = sweep.next_u32() % (i + 1)
            order[i], order[j] = order[j], order[i]

    for i in order:
        sigma = rngs[i].noise_sign()
        field = h.local_field(source, i) + cfg.w_rnd * sigma
        if cfg.mode == "counter":
            inc = round_half_away(i0_now * field)
            if L == 0:
                # degenerate bound: no memory, the spin is the increment's sign
                counters[i] = 0
                spins[i] = 1 if inc >= 0 else -1
            else:
                c = counters[i] + inc
                c = L if c > L else (-L if c < -L else c)
                counters[i] = c
                spins[i] = 1 if c >= 0 else -1
        elif cfg.mode == "sign":
            spins[i] = 1 if field >= 0 else -1
        else:
            p_plus = (1.0 + math.tanh(float(i0_now * field))) / 2.0
            spins[i] = 1 if rngs[i].uniform() < p_plus else -1

    return EngineState(
        tuple(spins),
        tuple(counters),
        state.cycle + cfg.tau,
        state.shot,
        tuple(r.state for r in rngs),
    )


def run_shot(state: EngineState, ch: CircuitHamiltonian, cfg: AnnealConfig) -> EngineState:
    """One schedule pulse: T cycles at i0_min, then T at i0_max."""
    start = state.cycle
    for _ in range(cfg.steps_per_half):
        state = step(state, ch, cfg, cfg.i0_min)
    for _ in range(cfg.steps_per_half):
        state = step(state, ch, cfg, cfg.i0_max)
    return replace(state, cycle=start + 2 * cfg.half_period_T, shot=state.shot + 1)


def _run_trial_scalar(ch: CircuitHamiltonian, cfg: AnnealConfig, trial_index: int) -> TrialResult:
    h = ch.hamiltonian
    state = init_state(ch, cfg, trial_index)
    trace: list[Fraction] = []
    for shot in range(1, cfg.n_shot_max + 1):
        state = run_shot(state, ch, cfg)
        e = h.energy(state.spins)
        trace.append(e)
        if e == ch.ground_energy:
            return TrialResult(True, shot, e, state.spins, tuple(trace))
    return TrialResult(False, cfg.n_shot_max, trace[-1], state.spins, tuple(trace))


# ---------------------------------------------------------------------------
# accelerated kernel (counter mode, synchronous order, interaction order <= 3)


class _CircuitArrays:
    """Integer-scaled flat arrays for the jit kernel.

    ``lam`` is the least common denominator of all coefficients, the offset
    and w_rnd; scaled local fields and energies are exactly lam times the
    true rational values.
    """

    def __init__(self, ch: CircuitHamiltonian, cfg: AnnealConfig):
        h = ch.hamiltonian
        if h.order > 3:
            raise ValidationError("kernel supports interaction order <= 3")
        n = h.num_spins
        lam = h.offset.denominator
        for c in h.terms.values():
            lam = lam * c.denominator // math.gcd(lam, c.denominator)
        w = cfg.w_rnd
        lam = lam * w.denominator // math.gcd(lam, w.denominator)
        terms = {m: int(c * lam) for m, c in h.terms.items()}

        self.num_spins = n
        self.lam = lam
        self.offset = int(h.offset * lam)
        self.w = int(w * lam)
        self.bias = np.zeros(n, dtype=np.int64)
        nb: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        p3: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        for mono, c in terms.items():
            if len(mono) == 1:
                self.bias[mono[0]] += c
            elif len(mono) == 2:
                i, j = mono
                nb[i].append((j, c))
                nb[j].append((i, c))
            else:
                i, j, k = mono
                p3[i].append((j, k, c))
                p3[j].append((i, k, c))
                p3[k].append((i, j, c))

        def csr(rows, width):
            ptr = np.zeros(n + 1, dtype=np.int64)
            for i, row in enumerate(rows):
                ptr[i + 1] = ptr[i] + len(row)
            flat = np.zeros((ptr[-1], width), dtype=np.int64)
            for i, row in enumerate(rows):
                for k, entry in enumerate(row):
                    flat[ptr[i] + k] = entry
            return ptr, flat

        self.nb_ptr, nb_flat = csr(nb, 2)
        self.nb_idx = nb_flat[:, 0].copy()
        self.nb_c = nb_flat[:, 1].copy()
        self.p3_ptr, p3_flat = csr(p3, 3)
        self.p3_j = p3_flat[:, 0].copy()
        self.p3_k = p3_flat[:, 1].copy()
        self.p3_c = p3_flat[:, 2].copy()

        ordered = sorted(terms.items())
        self.term_ptr = np.zeros(len(ordered) + 1, dtype=np.int64)
        tv: list[int] = []
        tc: list[int] = []
        for t, (mono, c) in enumerate(ordered):
            tv.extend(mono)
            tc.append(c)
            self.term_ptr[t + 1] = len(tv)
        self.term_vars = np.asarray(tv, dtype=np.int64)
        self.term_c = np.asarray(tc, dtype=np.int64)

        ground = ch.ground_energy
        self.target_num = ground.numerator * lam
        self.target_den = ground.denominator


def _kernel_args(arrs: _CircuitArrays, cfg: AnnealConfig):
    p_lo, q_lo = cfg.i0_min.numerator, cfg.i0_min.denominator * arrs.lam
    p_hi, q_hi = cfg.i0_max.numerator, cfg.i0_max.denominator * arrs.lam
    return (
        arrs.bias, arrs.nb_ptr, arrs.nb_idx, arrs.nb_c,
        arrs.p3_ptr, arrs.p3_j, arrs.p3_k, arrs.p3_c,
        arrs.term_ptr, arrs.term_vars, arrs.term_c,
        arrs.offset, arrs.w,
        p_lo, q_lo, p_hi, q_hi,
        cfg.steps_per_half, cfg.counter_bound_L,
        cfg.update_order == "random_sweep",
        cfg.mode == "boltzmann",
        arrs.target_num, arrs.target_den,
    )


def _kernel_supported(ch: CircuitHamiltonian, cfg: AnnealConfig) -> bool:
    return (
        cfg.mode in ("counter", "boltzmann")
        and ch.hamiltonian.order <= 3
        and ch.hamiltonian.num_spins > 0
        and _load_kernels() is not None
    )


_KERNELS = None
_KERNELS_FAILED = False


def _load_kernels():
    global _KERNELS, _KERNELS_FAILED
    if _KERNELS is None and not _KERNELS_FAILED:
        try:
            from . import _kernels
            _KERNELS = _kernels
        except ImportError:
            _KERNELS_FAILED = True
    return _KERNELS


def run_trial(
    ch: CircuitHamiltonian, cfg: AnnealConfig, trial_index: int = 0
) -> TrialResult:
    """Run one annealing trial to convergence or shot exhaustion."""
    return run_trials(ch, cfg, 1, first_trial=trial_index)[0]


def run_trials(
    ch: CircuitHamiltonian,
    cfg: AnnealConfig,
    n_trials: int,
    first_trial: int = 0,
    base_seed: int | None = None,
) -> list[TrialResult]:
    """Run independent trials with consecutive trial indices.

    Trial ``t`` uses seed ``base_seed XOR t`` (base defaults to the config
    seed), so results do not depend on batch size or execution order.
    """
    h = ch.hamiltonian
    if base_seed is not None:
        cfg = replace(cfg, seed=base_seed)
    base = cfg.seed
    if h.num_spins == 0:
        converged = h.offset == ch.ground_energy
        res = TrialResult(converged, 0, h.offset, (), ())
        return [res] * n_trials

    if not _kernel_supported(ch, cfg):
        return [
            _run_trial_scalar(ch, cfg, first_trial + t) for t in range(n_trials)
        ]

    kern = _load_kernels()
    arrs = _CircuitArrays(ch, cfg)
    seeds = np.array(
        [trial_seed(base, first_trial + t) for t in range(n_trials)], dtype=np.uint64
    )
    shots_used, conv, trace, final_m = kern.run_trials(
        seeds, h.num_spins, cfg.n_shot_max, *_kernel_args(arrs, cfg)
    )
    out = []
    for t in range(n_trials):
        k = int(shots_used[t])
        tr = tuple(Fraction(int(trace[t, s]), arrs.lam) for s in range(k))
        out.append(
            TrialResult(
                bool(conv[t]),
                k,
                tr[-1],
                tuple(int(v) for v in final_m[t]),
                tr,
            )
        )
    return out


def sample_distribution(
    ch: CircuitHamiltonian,
    cfg: AnnealConfig,
    n_samples: int,
    burn_in: int = 10,
) -> dict[tuple[int, ...], float]:
    """End-of-shot state frequencies over one long run.

    Runs ``burn_in`` discarded shots, then ``n_samples`` recorded ones, and
    returns bit-tuple frequencies (x = (1+m)/2) summing to 1.
    """
    h = ch.hamiltonian
    if h.num_spins > 16:
        raise ValidationError("sampling map is tractable only up to 16 free spins")
    if h.num_spins == 0:
        return {(): 1.0}
    counts: dict[tuple[int, ...], int] = {}
    if _kernel_supported(ch, cfg):
        kern = _load_kernels()
        arrs = _CircuitArrays(ch, cfg)
        states = kern.sample_shots(
            np.uint64(trial_seed(cfg.seed, 0)), h.num_spins, burn_in, n_samples,
            *_kernel_args(arrs, cfg),
        )
        for row in states:
            key = tuple((1 + int(v)) // 2 for v in row)
            counts[key] = counts.get(key, 0) + 1
    else:
        state = init_state(ch, cfg, 0)
        for k in range(burn_in + n_samples):
            state = run_shot(state, ch, cfg)
            if k >= burn_in:
                key = spins_to_bits(state.spins)
                counts[key] = counts.get(key, 0) + 1
    return {k: v / n_samples for k, v in counts.items()}
