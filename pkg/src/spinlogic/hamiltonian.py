"""Exact algebra for many-body Ising Hamiltonians over +/-1 spins.

A Hamiltonian is a sparse multilinear polynomial

    E(m) = offset - sum_a c_a * prod_{i in a} m_i,

where each subset ``a`` of spin indices (a *monomial*) carries an exact
rational coefficient ``c_a``.  Order-1 coefficients are spin biases,
order-2 are pairwise couplings, order-3 and above are many-body terms.
All arithmetic is done with :class:`fractions.Fraction`; there is no
approximate float mode.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import LandscapeCapError, ValidationError

RationalLike = Fraction | int | str

#: Free-spin cap for exhaustive enumeration (2^24 states).
DEFAULT_ENUM_CAP = 24

# int64 headroom guard for the vectorized enumeration path
_INT64_SAFE = 1 << 62


def _as_fraction(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise ValidationError(f"coefficient must be an exact rational, got {type(value).__name__}")


def _check_state(values: Sequence[int], num_spins: int) -> None:
    if len(values) != num_spins:
        raise ValidationError(f"state has {len(values)} spins, Hamiltonian has {num_spins}")
    for v in values:
        if v not in (-1, 1):
            raise ValidationError(f"spin values must be -1 or +1, got {v!r}")


def bits_to_spins(bits: Iterable[int]) -> tuple[int, ...]:
    """Map {0,1} bits to spins via m = 2x - 1."""
    return tuple(2 * int(b) - 1 for b in bits)


def spins_to_bits(spins: Iterable[int]) -> tuple[int, ...]:
    """Map {-1,+1} spins to bits via x = (1+m)/2."""
    return tuple((1 + int(m)) // 2 for m in spins)


class Hamiltonian:
    """Immutable sparse multilinear spin polynomial.

    Parameters
    ----------
    spins:
        Ordered spin names; index in this tuple is the spin's dense index.
    terms:
        Mapping from monomials to coefficients.  A monomial is any iterable
        of spin indices or names; it is normalized to a strictly increasing
        index tuple.  Duplicate indices are rejected (m_i^2 = 1 makes them
        meaningless).  Zero coefficients are dropped.
    offset:
        Constant energy term.  Never influences dynamics, only reported
        energies; it is what clamped terms fold into.
    """

    __slots__ = ("_spins", "_terms", "_offset", "_index")

    def __init__(
        self,
        spins: Sequence[str],
        terms: Mapping[tuple, RationalLike] | None = None,
        offset: RationalLike = 0,
    ):
        spins = tuple(str(s) for s in spins)
        if len(set(spins)) != len(spins):
            raise ValidationError("duplicate spin names")
        self._spins = spins
        self._index = {name: i for i, name in enumerate(spins)}
        self._offset = _as_fraction(offset)
        normalized: dict[tuple[int, ...], Fraction] = {}
        for mono, coeff in (terms or {}).items():
            key = self._normalize_monomial(mono)
            c = _as_fraction(coeff)
            if not c:
                continue
            acc = normalized.get(key)
            normalized[key] = c if acc is None else acc + c
            if not normalized[key]:
                del normalized[key]
        self._terms = normalized

    def _normalize_monomial(self, mono) -> tuple[int, ...]:
        if isinstance(mono, (str, int)):
            mono = (mono,)
        idx = tuple(sorted(self.spin_index(v) for v in mono))
        if not idx:
            raise ValidationError("empty monomial: use the offset for the constant term")
        if any(a == b for a, b in zip(idx, idx[1:])):
            raise ValidationError(f"duplicate spin in monomial {mono!r}")
        return idx

    # -- basic accessors ---------------------------------------------------

    @property
    def spins(self) -> tuple[str, ...]:
        return self._spins

    @property
    def num_spins(self) -> int:
        return len(self._spins)

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    @property
    def offset(self) -> Fraction:
        return self._offset

    @property
    def order(self) -> int:
        """Highest stored interaction order (0 for a constant Hamiltonian)."""
        return max((len(m) for m in self._terms), default=0)

    def spin_index(self, spin: int | str) -> int:
        """Resolve a spin name or index to a dense index."""
        if isinstance(spin, str):
            try:
                return self._index[spin]
            except KeyError:
                raise ValidationError(f"unknown spin {spin!r}") from None
        i = int(spin)
        if not 0 <= i < len(self._spins):
            raise ValidationError(f"spin index {i} out of range [0, {len(self._spins)})")
        return i

    def coefficient(self, mono) -> Fraction:
        """Coefficient of a monomial (zero if absent)."""
        return self._terms.get(self._normalize_monomial(mono), Fraction(0))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hamiltonian):
            return NotImplemented
        return (
            self._spins == other._spins
            and self._terms == other._terms
            and self._offset == other._offset
        )

    def __hash__(self):
        return hash((self._spins, frozenset(self._terms.items()), self._offset))

    def __repr__(self) -> str:
        return f"Hamiltonian(spins={self._spins!r}, terms={len(self._terms)}, offset={self._offset})"

    # -- evaluation --------------------------------------------------------

    def energy(self, state: Sequence[int]) -> Fraction:
        """Exact energy E(m) = offset - sum_a c_a prod m_i."""
        _check_state(state, self.num_spins)
        total = self._offset
        for mono, c in self._terms.items():
            prod = 1
            for i in mono:
                prod *= state[i]
            total -= c * prod
        return total

    def local_field(self, state: Sequence[int], spin: int | str) -> Fraction:
        """Deterministic update field for one spin.

        Returns sum over terms containing ``spin`` of c_a * prod of the other
        spins, i.e. the multilinear -dE/dm_i.  Flipping the spin changes the
        energy by 2 * m_i * local_field.
        """
        _check_state(state, self.num_spins)
        i = self.spin_index(spin)
        total = Fraction(0)
        for mono, c in self._terms.items():
            if i not in mono:
                continue
            prod = 1
            for j in mono:
                if j != i:
                    prod *= state[j]
            total += c * prod
        return total

    # -- algebra -----------------------------------------------------------

    def scaled(self, factor: RationalLike) -> Hamiltonian:
        """Hamiltonian with every coefficient and the offset multiplied by factor."""
        f = _as_fraction(factor)
        return Hamiltonian(
            self._spins,
            {m: c * f for m, c in self._terms.items()},
            self._offset * f,
        )

    def clamp(self, fixed: Mapping[int | str, int]) -> Hamiltonian:
        """Substitute fixed spin values, returning a Hamiltonian over the free spins.

        Terms lose their fixed factors; fully fixed terms fold into the
        offset, so for every free assignment s,
        ``clamped.energy(s) == self.energy(s with fixed values inserted)``.
        """
        by_index: dict[int, int] = {}
        for spin, value in fixed.items():
            i = self.spin_index(spin)
            if value not in (-1, 1):
                raise ValidationError(f"clamp value for {spin!r} must be -1 or +1, got {value!r}")
            if by_index.get(i, value) != value:
                raise ValidationError(f"conflicting clamp values for spin index {i}")
            by_index[i] = value
        if not by_index:
            return self
        free = [i for i in range(self.num_spins) if i not in by_index]
        remap = {old: new for new, old in enumerate(free)}
        new_terms: dict[tuple[int, ...], Fraction] = {}
        new_offset = self._offset
        for mono, c in self._terms.items():
            factor = 1
            kept: list[int] = []
            for i in mono:
                if i in by_index:
                    factor *= by_index[i]
                else:
                    kept.append(remap[i])
            if kept:
                key = tuple(kept)
                acc = new_terms.get(key, Fraction(0)) + c * factor
                if acc:
                    new_terms[key] = acc
                elif key in new_terms:
                    del new_terms[key]
            else:
                new_offset -= c * factor
        return Hamiltonian(tuple(self._spins[i] for i in free), new_terms, new_offset)

    def rename(self, names: Sequence[str]) -> Hamiltonian:
        """Same polynomial over renamed spins."""
        if len(names) != self.num_spins:
            raise ValidationError("rename needs one name per spin")
        return Hamiltonian(names, self._terms, self._offset)

    def integer_scaled(self) -> tuple[int, dict[tuple[int, ...], int], int]:
        """Return (offset_int, terms_int, scale) with scale = lcm of denominators.

        ``scale`` is the least positive integer making every coefficient and
        the offset integral; energies of the scaled system are exactly
        ``scale`` times the original ones.
        """
        scale = self._offset.denominator
        for c in self._terms.values():
            scale = scale * c.denominator // math.gcd(scale, c.denominator)
        off = int(self._offset * scale)
        terms = {m: int(c * scale) for m, c in self._terms.items()}
        return off, terms, scale

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        """JSON-ready dict; coefficients as exact decimal/rational strings."""
        ordered = sorted(self._terms.items(), key=lambda kv: (len(kv[0]), kv[0]))
        return {
            "spins": list(self._spins),
            "offset": str(self._offset),
            "terms": [
                {"vars": [self._spins[i] for i in mono], "c": str(c)} for mono, c in ordered
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> Hamiltonian:
        try:
            spins = data["spins"]
            terms = {tuple(t["vars"]): Fraction(t["c"]) for t in data.get("terms", [])}
            offset = Fraction(data.get("offset", "0"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"malformed Hamiltonian JSON: {exc}") from exc
        return cls(spins, terms, offset)

    def dumps(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def loads(cls, text: str) -> Hamiltonian:
        return cls.from_dict(json.loads(text))


def compose(
    parts: Sequence[tuple[Hamiltonian, Mapping[int | str, int]]],
    spins: Sequence[str],
) -> Hamiltonian:
    """Sum part Hamiltonians into one shared spin universe.

    Each part comes with a renaming map from its own spins (by index or name)
    into indices of ``spins``.  Coefficients of identical monomials add, as do
    offsets, so the composed energy is the sum of part energies on the
    restricted states.  The map must cover every part spin injectively.
    """
    spins = tuple(str(s) for s in spins)
    n = len(spins)
    terms: dict[tuple[int, ...], Fraction] = {}
    offset = Fraction(0)
    for part, renaming in parts:
        mapping = {}
        for src, dst in renaming.items():
            i = part.spin_index(src)
            dst = int(dst)
            if not 0 <= dst < n:
                raise ValidationError(f"renamed index {dst} outside universe of {n} spins")
            mapping[i] = dst
        if len(mapping) != part.num_spins:
            raise ValidationError("renaming must cover every spin of the part")
        if len(set(mapping.values())) != len(mapping):
            raise ValidationError("renaming collision: two spins of one part mapped together")
        offset += part.offset
        for mono, c in part._terms.items():
            key = tuple(sorted(mapping[i] for i in mono))
            acc = terms.get(key, Fraction(0)) + c
            if acc:
                terms[key] = acc
            elif key in terms:
                del terms[key]
    return Hamiltonian(spins, terms, offset)


@dataclass(frozen=True)
class LandscapeStats:
    """Exhaustive energy-landscape statistics.

    ``delta_e_min`` is the gap from the minimum to the second distinct
    energy (zero when only one level exists), ``delta_e_max`` the spread to
    the highest energy, ``n_levels`` the count of distinct energies, and
    ``ground_states`` all minimum-energy states (+/-1 tuples over the free
    spins, ordered by their bit encoding).
    """

    e_min: Fraction
    delta_e_min: Fraction
    delta_e_max: Fraction
    n_levels: int
    ground_states: tuple[tuple[int, ...], ...]

    def as_row(self) -> tuple[Fraction, Fraction, Fraction, int]:
        return (self.e_min, self.delta_e_min, self.delta_e_max, self.n_levels)


def _parity(x: np.ndarray) -> np.ndarray:
    # parity of the low 32 bits; monomial masks never exceed the enum cap
    x = x ^ (x >> 16)
    x = x ^ (x >> 8)
    x = x ^ (x >> 4)
    x = x ^ (x >> 2)
    x = x ^ (x >> 1)
    return x & 1


def _energies_over_states(
    off: int, terms: dict[tuple[int, ...], int], idx: np.ndarray
) -> np.ndarray:
    """Integer energies for the state indices in ``idx`` (bit i set => m_i=+1)."""
    energies = np.full(idx.shape, off, dtype=idx.dtype)
    for mono, c in terms.items():
        mask = 0
        for i in mono:
            mask |= 1 << i
        par = _parity(idx & mask)
        odd_unset = (len(mono) & 1) ^ par  # 1 when prod m_i == -1
        energies -= c * (1 - 2 * odd_unset)
    return energies


def enumerate_landscape(
    h: Hamiltonian,
    clamps: Mapping[int | str, int] | None = None,
    cap: int = DEFAULT_ENUM_CAP,
) -> LandscapeStats:
    """Exhaustively evaluate every free-spin assignment and return exact stats.

    Refuses with :class:`LandscapeCapError` when the number of free spins
    exceeds ``cap``; such systems must be sampled by annealing instead.
    Coefficients are scaled to integers internally, so the evaluation is
    vectorized yet exact; results are independent of chunking.
    """
    if clamps:
        h = h.clamp(clamps)
    l = h.num_spins
    if l > cap:
        raise LandscapeCapError(f"{l} free spins exceed the enumeration cap of {cap}")
    off, terms, scale = h.integer_scaled()
    if l == 0:
        e = Fraction(off, scale)
        return LandscapeStats(e, Fraction(0), Fraction(0), 1, ((),))

    bound = abs(off) + sum(abs(c) for c in terms.values())
    dtype = np.int64 if bound < _INT64_SAFE else object

    chunk = 1 << 20
    total = 1 << l
    e_min_i: int | None = None
    levels: set[int] = set()
    ground_idx: list[int] = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        if dtype is object:
            idx = idx.astype(object)
        energies = _energies_over_states(off, terms, idx)
        levels.update(int(v) for v in np.unique(energies))
        chunk_min = int(energies.min())
        if e_min_i is None or chunk_min < e_min_i:
            e_min_i = chunk_min
            ground_idx = []
        if chunk_min == e_min_i:
            ground_idx.extend(int(k) for k in idx[energies == e_min_i])

    assert e_min_i is not None
    ordered_levels = sorted(levels)
    e_min = Fraction(e_min_i, scale)
    d_min = Fraction(ordered_levels[1] - e_min_i, scale) if len(ordered_levels) > 1 else Fraction(0)
    d_max = Fraction(ordered_levels[-1] - e_min_i, scale)
    grounds = tuple(
        tuple(1 if (k >> i) & 1 else -1 for i in range(l)) for k in sorted(ground_idx)
    )
    return LandscapeStats(e_min, d_min, d_max, len(ordered_levels), grounds)
