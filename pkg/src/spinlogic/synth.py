"""Synthesize gate Hamiltonians from truth tables.

Three routes:

* :func:`build_lp` / :func:`solve_lp` — the gap-maximizing linear program:
  valid input/output states are pinned to a common minimum energy, invalid
  states are pushed at least ``d`` above it, and ``d`` is maximized with an
  exact rational simplex.  Without a coefficient bound the program is
  unbounded (any feasible solution scales), so normalization is explicit.
* :func:`two_level_construct` — the closed-form construction of the unique
  multilinear polynomial taking one energy on valid states and another on
  invalid ones (a Walsh-Hadamard transform over {-1,+1}^n).  Normalization
  free; produces the canonical two-level gate Hamiltonians.
* :func:`enumerate_ancilla_lp` — exhaustive ancilla-assignment search for
  bases (e.g. order-2) that cannot represent a gate directly.

Gate spins are ordered inputs, then outputs, then ancillas, with names
A, B, C, ... / Y (or Y0, Y1, ...) / M0, M1, ...
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import simplex
from .errors import InfeasibleError, UnboundedError, ValidationError
from .hamiltonian import Hamiltonian, LandscapeStats, bits_to_spins, enumerate_landscape
from .truthtable import TruthTable

_INPUT_NAMES = "ABCDEFGH"


def gate_spin_names(p: int, q: int, num_ancilla: int = 0) -> tuple[str, ...]:
    """Canonical spin names for a synthesized gate."""
    if p > len(_INPUT_NAMES):
        raise ValidationError(f"at most {len(_INPUT_NAMES)} inputs supported")
    inputs = list(_INPUT_NAMES[:p])
    outputs = ["Y"] if q == 1 else [f"Y{i}" for i in range(q)]
    ancilla = [f"M{i}" for i in range(num_ancilla)]
    return tuple(inputs + outputs + ancilla)


@dataclass(frozen=True)
class BasisSpec:
    """Monomial basis for synthesis: orders 1..max_order over the gate spins."""

    max_order: int
    num_ancilla: int = 0
    coeff_bound: Fraction | int | None = None
    include_constant: bool = False

    def __post_init__(self):
        if self.max_order < 1:
            raise ValidationError("max_order must be >= 1")
        if self.num_ancilla < 0:
            raise ValidationError("num_ancilla must be >= 0")
        if self.coeff_bound is not None:
            bound = Fraction(self.coeff_bound)
            if bound <= 0:
                raise ValidationError("coeff_bound must be positive")
            object.__setattr__(self, "coeff_bound", bound)


@dataclass(frozen=True)
class SynthesisResult:
    """A synthesized gate Hamiltonian with its certified landscape.

    ``d`` is the gap from the ground level to the cheapest state whose
    input/output projection is invalid; for ancilla-free gates this equals
    the certificate's ``delta_e_min``.
    """

    hamiltonian: Hamiltonian
    e_min: Fraction
    d: Fraction
    certificate: LandscapeStats


@dataclass(frozen=True)
class LPProblem:
    """Gap-maximization program: named variables, constraints, objective.

    Variable order is coefficient variables (one per basis monomial), an
    optional constant, the common minimum energy, and the gap; the
    objective maximizes the gap.
    """

    variables: tuple[str, ...]
    monomials: tuple[tuple[int, ...], ...]
    constraints: tuple[simplex.Constraint, ...]
    objective: tuple[Fraction, ...]
    spins: tuple[str, ...]
    include_constant: bool

    @property
    def num_coeffs(self) -> int:
        return len(self.monomials)


def _monomials(num_spins: int, max_order: int) -> list[tuple[int, ...]]:
    order = min(max_order, num_spins)
    out: list[tuple[int, ...]] = []
    for k in range(1, order + 1):
        out.extend(itertools.combinations(range(num_spins), k))
    return out


def _chi(state: Sequence[int], mono: tuple[int, ...]) -> int:
    prod = 1
    for i in mono:
        prod *= state[i]
    return prod


def _state_rows(tt: TruthTable, num_ancilla: int = 0):
    """Full spin states (inputs+outputs+ancilla) with their (x, y, a) bits."""
    for x, y, valid in tt.states():
        for code in range(1 << num_ancilla):
            a = tuple((code >> i) & 1 for i in range(num_ancilla))
            yield bits_to_spins(x + y + a), x, y, a, valid


def _assemble_lp(
    tt: TruthTable,
    basis: BasisSpec,
    spins: tuple[str, ...],
    monos: list[tuple[int, ...]],
    designated_ancilla: dict,
    num_ancilla: int,
) -> LPProblem:
    nc = len(monos)
    names = ["c:" + "".join(spins[i] for i in m) for m in monos]
    if basis.include_constant:
        names.append("const")
    names += ["E_min", "d"]
    nv = len(names)
    i_const = nc if basis.include_constant else None
    i_emin = nv - 2
    i_d = nv - 1

    constraints: list[simplex.Constraint] = []
    for state, x, _y, a, valid in _state_rows(tt, num_ancilla):
        row = [Fraction(0)] * nv
        for j, mono in enumerate(monos):
            row[j] = Fraction(-_chi(state, mono))  # energy is -sum c*chi (+ const)
        if i_const is not None:
            row[i_const] = Fraction(1)
        row[i_emin] = Fraction(-1)
        if valid and (num_ancilla == 0 or designated_ancilla[x] == a):
            constraints.append(simplex.Constraint(tuple(row), "=", Fraction(0)))
        elif valid:
            constraints.append(simplex.Constraint(tuple(row), ">=", Fraction(0)))
        else:
            row[i_d] = Fraction(-1)
            constraints.append(simplex.Constraint(tuple(row), ">=", Fraction(0)))
    if basis.coeff_bound is not None:
        for j in range(nc):
            row = [Fraction(0)] * nv
            row[j] = Fraction(1)
            constraints.append(simplex.Constraint(tuple(row), "<=", basis.coeff_bound))
            constraints.append(simplex.Constraint(tuple(row), ">=", -basis.coeff_bound))

    objective = [Fraction(0)] * nv
    objective[i_d] = Fraction(1)
    return LPProblem(
        variables=tuple(names),
        monomials=tuple(monos),
        constraints=tuple(constraints),
        objective=tuple(objective),
        spins=spins,
        include_constant=basis.include_constant,
    )


def build_lp(tt: TruthTable, basis: BasisSpec) -> LPProblem:
    """Emit the gap LP for a gate without ancilla spins.

    One equality per valid state (energy equals the common minimum), one
    inequality per invalid state (energy at least minimum + gap), plus
    optional coefficient-bound rows.  Spin products are constants here; the
    unknowns are the coefficients, the minimum energy, and the gap.
    """
    if basis.num_ancilla != 0:
        raise ValidationError("build_lp handles num_ancilla == 0; see enumerate_ancilla_lp")
    spins = gate_spin_names(tt.p, tt.q)
    monos = _monomials(len(spins), basis.max_order)
    return _assemble_lp(tt, basis, spins, monos, {}, num_ancilla=0)


def _pin_indices(lp: LPProblem) -> list[int]:
    idx = list(range(lp.num_coeffs))
    if lp.include_constant:
        idx.append(lp.num_coeffs)
    return idx


def _lexicographic_solution(lp: LPProblem, d_star: Fraction) -> tuple[Fraction, ...]:
    """Deterministic optimum: fix d, minimize sum |c|, then each c in order.

    Returns the full variable vector.  The sequential coordinate
    minimization pins a unique point of the optimal face, so the output is
    independent of constraint order.
    """
    nv = len(lp.variables)
    pins = _pin_indices(lp)
    np_ = len(pins)
    i_d = nv - 1
    ext = nv + np_  # t_k >= |x_{pins[k]}|
    cons: list[simplex.Constraint] = []
    for con in lp.constraints:
        cons.append(simplex.Constraint(con.coeffs + (Fraction(0),) * np_, con.sense, con.rhs))

    def unit(i: int, v=1) -> list[Fraction]:
        row = [Fraction(0)] * ext
        row[i] = Fraction(v)
        return row

    cons.append(simplex.Constraint(tuple(unit(i_d)), "=", d_star))
    for k, j in enumerate(pins):
        for sign in (1, -1):
            row = unit(nv + k)
            row[j] = Fraction(-sign)
            cons.append(simplex.Constraint(tuple(row), ">=", Fraction(0)))

    obj = [Fraction(0)] * ext
    for k in range(np_):
        obj[nv + k] = Fraction(-1)
    res = simplex.solve(obj, cons)
    assert res.status == simplex.OPTIMAL
    row = [Fraction(0)] * ext
    for k in range(np_):
        row[nv + k] = Fraction(1)
    cons.append(simplex.Constraint(tuple(row), "=", -res.value))

    values: tuple[Fraction, ...] | None = None
    for j in pins:
        res = simplex.solve([-f for f in unit(j)], cons)
        assert res.status == simplex.OPTIMAL
        cons.append(simplex.Constraint(tuple(unit(j)), "=", res.x[j]))
        values = res.x
    assert values is not None
    return values[:nv]


def _result_from_lp(lp: LPProblem, x: Sequence[Fraction], d_star: Fraction) -> SynthesisResult:
    terms = {m: c for m, c in zip(lp.monomials, x) if c}
    offset = x[lp.num_coeffs] if lp.include_constant else Fraction(0)
    h = Hamiltonian(lp.spins, terms, offset)
    cert = enumerate_landscape(h)
    return SynthesisResult(h, cert.e_min, d_star, cert)


def solve_lp(lp: LPProblem) -> SynthesisResult:
    """Maximize the gap exactly; deterministic among alternate optima.

    Raises :class:`UnboundedError` when no coefficient bound pins the scale
    and :class:`InfeasibleError` when the basis cannot give the gate a
    positive gap.  Ties are broken by minimizing the coefficient L1 norm,
    then lexicographically, so permuting constraints never changes output.
    """
    res = simplex.solve(lp.objective, lp.constraints)
    if res.status == simplex.UNBOUNDED:
        raise UnboundedError("gap LP is unbounded; set coeff_bound or use two_level_construct")
    assert res.status == simplex.OPTIMAL  # all-zero coefficients are always feasible
    if res.value <= 0:
        raise InfeasibleError("basis cannot represent the gate with a positive gap")
    x = _lexicographic_solution(lp, res.value)
    return _result_from_lp(lp, x, res.value)


def two_level_construct(
    tt: TruthTable, e_valid: Fraction | int, e_invalid: Fraction | int
) -> SynthesisResult:
    """Unique multilinear polynomial with exactly two energy levels.

    Computes coefficients by the Walsh-Hadamard transform over the full
    state space: valid states land on ``e_valid``, invalid on ``e_invalid``.
    Any nonzero mean goes into the offset, so coefficient normalization
    never enters.
    """
    e_valid, e_invalid = Fraction(e_valid), Fraction(e_invalid)
    if not e_invalid > e_valid:
        raise ValidationError("two-level construction needs e_invalid > e_valid")
    spins = gate_spin_names(tt.p, tt.q)
    n = len(spins)
    states = [(bits_to_spins(x + y), valid) for x, y, valid in tt.states()]
    scale = Fraction(1, 1 << n)
    terms = {}
    offset = Fraction(0)
    for k in range(1 << n):
        mono = tuple(i for i in range(n) if (k >> i) & 1)
        acc = Fraction(0)
        for state, valid in states:
            acc += (e_valid if valid else e_invalid) * _chi(state, mono)
        fhat = acc * scale
        if not mono:
            offset = fhat
        elif fhat:
            terms[mono] = -fhat
    h = Hamiltonian(spins, terms, offset)
    cert = enumerate_landscape(h)
    return SynthesisResult(h, cert.e_min, e_invalid - e_valid, cert)


def enumerate_ancilla_lp(tt: TruthTable, basis: BasisSpec) -> SynthesisResult:
    """Exhaustive ancilla-assignment search over gap LPs.

    Every assignment of ancilla values to the valid rows gets its own LP:
    designated states are pinned to the minimum, states with an invalid
    input/output projection must sit at least the gap above it, and valid
    projections with non-designated ancilla may lie anywhere at or above
    the minimum.  Candidates run in lexicographic assignment order; the
    best gap wins, first-found on ties.
    """
    if basis.num_ancilla < 1:
        raise ValidationError("enumerate_ancilla_lp needs num_ancilla >= 1")
    n_spins = tt.p + tt.q + basis.num_ancilla
    if n_spins > 6:
        raise ValidationError("ancilla search capped at 6 total spins")
    spins = gate_spin_names(tt.p, tt.q, basis.num_ancilla)
    monos = _monomials(n_spins, basis.max_order)
    inputs = sorted(tt.rows)
    n_anc = basis.num_ancilla

    best: tuple[Fraction, LPProblem] | None = None
    for codes in itertools.product(range(1 << n_anc), repeat=len(inputs)):
        designation = {
            x: tuple((code >> i) & 1 for i in range(n_anc))
            for x, code in zip(inputs, codes)
        }
        lp = _assemble_lp(tt, basis, spins, monos, designation, n_anc)
        res = simplex.solve(lp.objective, lp.constraints)
        if res.status == simplex.UNBOUNDED:
            raise UnboundedError("ancilla gap LP is unbounded; set coeff_bound")
        assert res.status == simplex.OPTIMAL
        if res.value > 0 and (best is None or res.value > best[0]):
            best = (res.value, lp)
    if best is None:
        raise InfeasibleError("no ancilla assignment represents the gate with a positive gap")
    d_star, lp = best
    x = _lexicographic_solution(lp, d_star)
    return _result_from_lp(lp, x, d_star)


def verify(result: SynthesisResult, tt: TruthTable) -> tuple[bool, dict]:
    """Re-check the synthesis conditions by exhaustive enumeration.

    Requires every valid input row to attain the global minimum for some
    ancilla completion and every invalid input/output projection to sit
    strictly above it.  The report carries the landscape row
    (e_min, d, delta_e_max, n_levels) for comparison against reference
    gates; ``d`` here is the gap to the cheapest invalid-projection state.
    """
    h = result.hamiltonian
    n_anc = h.num_spins - tt.p - tt.q
    if n_anc < 0:
        raise ValidationError("Hamiltonian has fewer spins than the truth table needs")

    rows = list(_state_rows(tt, n_anc))
    energies = [h.energy(state) for state, *_ in rows]
    e_min = min(energies)
    e_max = max(energies)
    valid_best: dict[tuple[int, ...], Fraction] = {}
    invalid_min: Fraction | None = None
    for (state, x, _y, _a, valid), e in zip(rows, energies):
        if valid:
            if x not in valid_best or e < valid_best[x]:
                valid_best[x] = e
        elif invalid_min is None or e < invalid_min:
            invalid_min = e

    d = (invalid_min - e_min) if invalid_min is not None else Fraction(0)
    ok = d > 0 and all(v == e_min for v in valid_best.values())
    first_violation = None
    if not ok:
        for (state, x, _y, _a, valid), e in zip(rows, energies):
            if (not valid and e <= e_min) or (valid and valid_best[x] > e_min):
                first_violation = state
                break

    report = {
        "ok": ok,
        "e_min": e_min,
        "d": d,
        "delta_e_max": e_max - e_min,
        "n_levels": len(set(energies)),
        "first_violation": first_violation,
    }
    return ok, report
