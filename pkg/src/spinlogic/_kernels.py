"""Jit-compiled inner loops for counter-mode synchronous annealing.

Bit-identical to the scalar reference in :mod:`spinlogic.engine`: the same
xorshift streams, draw order, rounding, and saturation arithmetic, just on
flat integer-scaled arrays.  Only interaction orders up to 3 are handled
here; everything else stays on the reference path.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_M32 = np.uint64(0xFFFFFFFF)
_M64 = np.uint64(0xFFFFFFFFFFFFFFFF)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_FALLBACK = np.uint64(0x9E3779B9)


@njit(cache=True, inline="always")
def _mix64(x):
    x = x & _M64
    x ^= x >> np.uint64(30)
    x = (x * np.uint64(0xBF58476D1CE4E5B9)) & _M64
    x ^= x >> np.uint64(27)
    x = (x * np.uint64(0x94D049BB133111EB)) & _M64
    x ^= x >> np.uint64(31)
    return x


@njit(cache=True, inline="always")
def _stream_state(tseed, index):
    s = _mix64(tseed + _GOLDEN * (np.uint64(index) + np.uint64(1))) & _M32
    if s == np.uint64(0):
        s = _FALLBACK
    return s


@njit(cache=True, inline="always")
def _xs32(state):
    x = state
    x ^= (x << np.uint64(13)) & _M32
    x ^= x >> np.uint64(17)
    x ^= (x << np.uint64(5)) & _M32
    return x


@njit(cache=True, inline="always")
def _rounddiv(a, b):
    # round half away from zero of a/b, b > 0
    if a >= 0:
        return (2 * a + b) // (2 * b)
    return -((-2 * a + b) // (2 * b))


@njit(cache=True)
def _init_trial(tseed, num_spins, L, boltzmann, rng, m, counters):
    for i in range(num_spins + 1):
        rng[i] = _stream_state(tseed, i)
    for i in range(num_spins):
        v = _xs32(rng[i])
        rng[i] = v
        if L > 0 and not boltzmann:
            c = np.int64(v % np.uint64(2 * L + 1)) - L
            counters[i] = c
            m[i] = 1 if c >= 0 else -1
        else:
            counters[i] = 0
            m[i] = 1 if (v >> np.uint64(31)) & np.uint64(1) else -1


@njit(cache=True)
def _one_shot(
    m, m_old, order, counters, rng, num_spins,
    bias, nb_ptr, nb_idx, nb_c, p3_ptr, p3_j, p3_k, p3_c,
    w, p_lo, q_lo, p_hi, q_hi, steps_half, L, sweep, boltzmann,
):
    for half in range(2):
        p = p_lo if half == 0 else p_hi
        q = q_lo if half == 0 else q_hi
        for _ in range(steps_half):
            if sweep:
                # fresh permutation from the dedicated stream, then in-place updates
                for i in range(num_spins):
                    order[i] = i
                for i in range(num_spins - 1, 0, -1):
                    v = _xs32(rng[num_spins])
                    rng[num_spins] = v
                    j = np.int64(v % np.uint64(i + 1))
                    tmp = order[i]
                    order[i] = order[j]
                    order[j] = tmp
                src = m
            else:
                for i in range(num_spins):
                    m_old[i] = m[i]
                src = m_old
            for k in range(num_spins):
                i = order[k] if sweep else k
                v = _xs32(rng[i])
                rng[i] = v
                sigma = 1 if (v >> np.uint64(31)) & np.uint64(1) else -1
                field = bias[i] + w * sigma
                for t in range(nb_ptr[i], nb_ptr[i + 1]):
                    field += nb_c[t] * src[nb_idx[t]]
                for t in range(p3_ptr[i], p3_ptr[i + 1]):
                    field += p3_c[t] * src[p3_j[t]] * src[p3_k[t]]
                if boltzmann:
                    p_plus = (1.0 + np.tanh(p * field / q)) / 2.0
                    u = _xs32(rng[i])
                    rng[i] = u
                    m[i] = 1 if np.float64(u) / 4294967296.0 < p_plus else -1
                else:
                    inc = _rounddiv(p * field, q)
                    if L == 0:
                        m[i] = 1 if inc >= 0 else -1
                    else:
                        c = counters[i] + inc
                        if c > L:
                            c = L
                        elif c < -L:
                            c = -L
                        counters[i] = c
                        m[i] = 1 if c >= 0 else -1


@njit(cache=True, inline="always")
def _energy(m, term_ptr, term_vars, term_c, offset):
    e = offset
    for t in range(term_c.shape[0]):
        prod = np.int64(1)
        for k in range(term_ptr[t], term_ptr[t + 1]):
            prod *= m[term_vars[k]]
        e -= term_c[t] * prod
    return e


@njit(cache=True)
def run_trials(
    seeds, num_spins, shots_max,
    bias, nb_ptr, nb_idx, nb_c, p3_ptr, p3_j, p3_k, p3_c,
    term_ptr, term_vars, term_c, offset, w,
    p_lo, q_lo, p_hi, q_hi, steps_half, L, sweep, boltzmann,
    target_num, target_den,
):
    n_trials = seeds.shape[0]
    shots_used = np.zeros(n_trials, dtype=np.int64)
    converged = np.zeros(n_trials, dtype=np.uint8)
    trace = np.zeros((n_trials, shots_max), dtype=np.int64)
    final_m = np.zeros((n_trials, num_spins), dtype=np.int64)
    m = np.zeros(num_spins, dtype=np.int64)
    m_old = np.zeros(num_spins, dtype=np.int64)
    order = np.zeros(num_spins, dtype=np.int64)
    counters = np.zeros(num_spins, dtype=np.int64)
    rng = np.zeros(num_spins + 1, dtype=np.uint64)
    for t in range(n_trials):
        _init_trial(seeds[t], num_spins, L, boltzmann, rng, m, counters)
        shots = 0
        for shot in range(1, shots_max + 1):
            _one_shot(
                m, m_old, order, counters, rng, num_spins,
                bias, nb_ptr, nb_idx, nb_c, p3_ptr, p3_j, p3_k, p3_c,
                w, p_lo, q_lo, p_hi, q_hi, steps_half, L, sweep, boltzmann,
            )
            e = _energy(m, term_ptr, term_vars, term_c, offset)
            trace[t, shot - 1] = e
            shots = shot
            if e * target_den == target_num:
                converged[t] = 1
                break
        shots_used[t] = shots
        final_m[t] = m
    return shots_used, converged, trace, final_m


@njit(cache=True)
def sample_shots(
    seed, num_spins, burn_in, n_samples,
    bias, nb_ptr, nb_idx, nb_c, p3_ptr, p3_j, p3_k, p3_c,
    term_ptr, term_vars, term_c, offset, w,
    p_lo, q_lo, p_hi, q_hi, steps_half, L, sweep, boltzmann,
    target_num, target_den,
):
    states = np.zeros((n_samples, num_spins), dtype=np.int64)
    m = np.zeros(num_spins, dtype=np.int64)
    m_old = np.zeros(num_spins, dtype=np.int64)
    order = np.zeros(num_spins, dtype=np.int64)
    counters = np.zeros(num_spins, dtype=np.int64)
    rng = np.zeros(num_spins + 1, dtype=np.uint64)
    _init_trial(seed, num_spins, L, boltzmann, rng, m, counters)
    for k in range(burn_in + n_samples):
        _one_shot(
            m, m_old, order, counters, rng, num_spins,
            bias, nb_ptr, nb_idx, nb_c, p3_ptr, p3_j, p3_k, p3_c,
            w, p_lo, q_lo, p_hi, q_hi, steps_half, L, sweep, boltzmann,
        )
        if k >= burn_in:
            states[k - burn_in] = m
    return states
