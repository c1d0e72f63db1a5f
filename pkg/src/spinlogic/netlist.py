"""Circuits of invertible gates over named nets.

A netlist lists gate instances wired to shared nets plus the interface
grouping (input bundles A and B, output bundle Y).  Elaboration sums the
library gate Hamiltonians into one circuit Hamiltonian, folds constant nets
into biases, and records the circuit's ground energy (the sum of per-gate
minima, attained exactly when every gate sits in a consistent valid state).

:func:`ripple_adder` generates the n-bit invertible adder Y = A + B as a
chain of full adders (2 XOR, 2 AND, 1 OR each); the carry-in net C0 is a
constant 0 folded at elaboration.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import ValidationError
from .hamiltonian import Hamiltonian, compose
from .library import GATE_PINS, GateLibrary, load_library


@dataclass(frozen=True)
class GateInstance:
    kind: str
    pins: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in GATE_PINS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "pins", tuple(str(p) for p in self.pins))
        if len(self.pins) != GATE_PINS[self.kind]:
            raise ValidationError(
                f"{self.kind} takes {GATE_PINS[self.kind]} pins, got {len(self.pins)}"
            )


@dataclass(frozen=True)
class Netlist:
    nets: tuple[str, ...]
    gates: tuple[GateInstance, ...]
    inputs: dict[str, tuple[str, ...]] = field(default_factory=dict)
    outputs: dict[str, tuple[str, ...]] = field(default_factory=dict)
    constants: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "nets", tuple(str(n) for n in self.nets))
        if len(set(self.nets)) != len(self.nets):
            raise ValidationError("duplicate net names")
        known = set(self.nets)
        for gate in self.gates:
            for pin in gate.pins:
                if pin not in known:
                    raise ValidationError(f"gate {gate.kind} references dangling net {pin!r}")
        for group in (self.inputs, self.outputs):
            for name, nets in group.items():
                group[name] = tuple(str(n) for n in nets)
                for net in group[name]:
                    if net not in known:
                        raise ValidationError(f"interface net {net!r} does not exist")
        for net, value in self.constants.items():
            if net not in known:
                raise ValidationError(f"constant net {net!r} does not exist")
            if value not in (0, 1):
                raise ValidationError(f"constant for {net!r} must be 0/1, got {value!r}")

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        data = {
            "nets": list(self.nets),
            "gates": [{"kind": g.kind, "pins": list(g.pins)} for g in self.gates],
            "inputs": {k: list(v) for k, v in self.inputs.items()},
            "outputs": {k: list(v) for k, v in self.outputs.items()},
        }
        if self.constants:
            data["constants"] = dict(self.constants)
        return data

    @classmethod
    def from_dict(cls, data: Mapping) -> Netlist:
        try:
            return cls(
                nets=tuple(data["nets"]),
                gates=tuple(
                    GateInstance(g["kind"], tuple(g["pins"])) for g in data.get("gates", [])
                ),
                inputs={k: tuple(v) for k, v in data.get("inputs", {}).items()},
                outputs={k: tuple(v) for k, v in data.get("outputs", {}).items()},
                constants={str(k): int(v) for k, v in data.get("constants", {}).items()},
            )
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"malformed netlist JSON: {exc}") from exc

    def dumps(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def loads(cls, text: str) -> Netlist:
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class CircuitHamiltonian:
    """Elaborated circuit: composed Hamiltonian over the free nets.

    ``ground_energy`` is the sum of the per-gate minima; a state attains it
    exactly when every gate is in a valid configuration, so it stays the
    convergence target through any further clamping.
    """

    hamiltonian: Hamiltonian
    net_map: dict[str, int]
    ground_energy: Fraction

    @property
    def free_nets(self) -> tuple[str, ...]:
        return self.hamiltonian.spins

    def clamped(self, assignments: Mapping[str, int]) -> CircuitHamiltonian:
        """Clamp nets to bit values (folded into biases); see :func:`clamp_mode`."""
        clamps = {}
        for net, bit in assignments.items():
            if net not in self.net_map:
                raise ValidationError(f"unknown or already-clamped net {net!r}")
            if bit not in (0, 1):
                raise ValidationError(f"clamp for {net!r} must be 0/1, got {bit!r}")
            clamps[net] = 2 * bit - 1
        h = self.hamiltonian.clamp(clamps)
        net_map = {name: i for i, name in enumerate(h.spins)}
        return CircuitHamiltonian(h, net_map, self.ground_energy)


def elaborate(nl: Netlist, library: GateLibrary | int) -> CircuitHamiltonian:
    """Sum library gate Hamiltonians over the netlist's shared nets.

    Gate ancilla spins (two-body XOR/XNOR) become auto-named internal nets
    ``<output>.anc<k>``.  Constant nets are folded into biases here.
    """
    if isinstance(library, int):
        library = load_library(library)
    universe: list[str] = list(nl.nets)
    taken = set(universe)
    parts = []
    ground = Fraction(0)
    for gate in nl.gates:
        lib_gate = library[gate.kind]
        ground += lib_gate.e_min
        target_nets = list(gate.pins)
        for k in range(lib_gate.num_ancilla):
            anc = f"{gate.pins[-1]}.anc{k}"
            if anc in taken:
                raise ValidationError(f"ancilla net name collision: {anc!r}")
            taken.add(anc)
            universe.append(anc)
            target_nets.append(anc)
        index_of = {name: i for i, name in enumerate(universe)}
        renaming = {i: index_of[net] for i, net in enumerate(target_nets)}
        parts.append((lib_gate.hamiltonian, renaming))
    h = compose(parts, universe)
    ch = CircuitHamiltonian(h, {name: i for i, name in enumerate(universe)}, ground)
    if nl.constants:
        ch = ch.clamped(nl.constants)
    return ch


def clamp_mode(ch: CircuitHamiltonian, assignments: Mapping[str, int]) -> CircuitHamiltonian:
    """Clamp interface nets to bits; ground energy is deliberately unchanged."""
    return ch.clamped(assignments)


def forward_clamps(nl: Netlist, a: int, b: int) -> dict[str, int]:
    """Clamp map fixing the input bundles A and B to integer values."""
    out = {}
    for name, value in (("A", a), ("B", b)):
        nets = nl.inputs.get(name)
        if not nets:
            raise ValidationError(f"netlist has no input bundle {name!r}")
        if not 0 <= value < (1 << len(nets)):
            raise ValidationError(f"{name}={value} does not fit in {len(nets)} bits")
        for i, net in enumerate(nets):
            out[net] = (value >> i) & 1
    return out


def backward_clamps(nl: Netlist, y: int) -> dict[str, int]:
    """Clamp map fixing the output bundle Y to an integer value."""
    nets = nl.outputs.get("Y")
    if not nets:
        raise ValidationError("netlist has no output bundle 'Y'")
    if not 0 <= y < (1 << len(nets)):
        raise ValidationError(f"Y={y} does not fit in {len(nets)} bits")
    return {net: (y >> i) & 1 for i, net in enumerate(nets)}


def ripple_adder(n: int) -> Netlist:
    """n-bit invertible ripple-carry adder netlist: Y[0..n] = A + B.

    Stage i computes t = a^b, y_i = t^c, u = a&b, v = t&c, c' = u|v; the
    carry-in C0 is a constant-0 net and the final carry is Y[n].
    """
    if n < 1:
        raise ValidationError("adder needs n >= 1")
    a = [f"A{i}" for i in range(n)]
    b = [f"B{i}" for i in range(n)]
    y = [f"Y{i}" for i in range(n + 1)]
    nets: list[str] = a + b + ["C0"]
    gates: list[GateInstance] = []
    carry = "C0"
    for i in range(n):
        t, u, v = f"T{i}", f"U{i}", f"V{i}"
        carry_out = y[n] if i == n - 1 else f"C{i + 1}"
        nets += [t, u, v]
        if i < n - 1:
            nets.append(carry_out)
        gates += [
            GateInstance("XOR", (a[i], b[i], t)),
            GateInstance("AND", (a[i], b[i], u)),
            GateInstance("XOR", (t, carry, y[i])),
            GateInstance("AND", (t, carry, v)),
            GateInstance("OR", (u, v, carry_out)),
        ]
        carry = carry_out
    nets += y
    return Netlist(
        nets=tuple(nets),
        gates=tuple(gates),
        inputs={"A": tuple(a), "B": tuple(b)},
        outputs={"Y": tuple(y)},
        constants={"C0": 0},
    )
