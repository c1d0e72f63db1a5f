"""Gate Hamiltonian library in two-body and three-body forms.

Three-body gates are the canonical two-level constructions (valid states at
-2, invalid at +2).  Two-body AND/OR are the classic ground-state spin-logic
coefficient sets; two-body XOR/XNOR need one ancilla spin and use the
integer gate found by the ancilla gap search (equivalently, twice the
half-adder penalty ``(a + b - y - 2m)^2`` recentered), whose landscape is
(-4, 2, 18, 4).  One- and two-spin gates are shared between the libraries.

The gates ship as Hamiltonian JSON files under ``spinlogic/gates/``; the
loader reads those, and :func:`build_gate` recomputes them from scratch so
tests can pin file contents to the constructions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import ValidationError
from .hamiltonian import Hamiltonian, enumerate_landscape
from .synth import two_level_construct
from .truthtable import STANDARD_TABLES

GATE_KINDS = ("AND", "OR", "XOR", "XNOR", "NOT", "BUF")

#: pins exposed to the netlist, per kind (inputs..., output); ancilla spins
#: beyond these are internal and get auto-named nets at elaboration
GATE_PINS = {"AND": 3, "OR": 3, "XOR": 3, "XNOR": 3, "NOT": 2, "BUF": 2}

_TWO_BODY_AND = {
    ("A",): 1,
    ("B",): 1,
    ("Y",): -2,
    ("A", "B"): -1,
    ("A", "Y"): 2,
    ("B", "Y"): 2,
}

# max-gap order-2 gate with one ancilla (bound 2): 2*(a+b-y-2m)^2 - 4 in spins
_TWO_BODY_XOR = {
    ("A",): 1,
    ("B",): 1,
    ("Y",): -1,
    ("M0",): -2,
    ("A", "B"): -1,
    ("A", "Y"): 1,
    ("A", "M0"): 2,
    ("B", "Y"): 1,
    ("B", "M0"): 2,
    ("Y", "M0"): -2,
}


def _negate_spins(h: Hamiltonian, names: tuple[str, ...]) -> Hamiltonian:
    """Flip the listed spins: terms containing them an odd number of times change sign."""
    idx = {h.spin_index(n) for n in names}
    terms = {
        mono: -c if len(idx.intersection(mono)) % 2 else c
        for mono, c in h.terms.items()
    }
    return Hamiltonian(h.spins, terms, h.offset)


def build_gate(kind: str, body_order: int) -> Hamiltonian:
    """Construct a library gate from scratch (no file access)."""
    if kind not in GATE_KINDS:
        raise ValidationError(f"unknown gate kind {kind!r}")
    if body_order == 3 or kind in ("NOT", "BUF"):
        return two_level_construct(STANDARD_TABLES[kind], -2, 2).hamiltonian
    if body_order != 2:
        raise ValidationError(f"body_order must be 2 or 3, got {body_order}")
    if kind == "AND":
        return Hamiltonian(("A", "B", "Y"), _TWO_BODY_AND)
    if kind == "OR":
        # OR(a, b) = not AND(not a, not b): negate all three spins
        return _negate_spins(Hamiltonian(("A", "B", "Y"), _TWO_BODY_AND), ("A", "B", "Y"))
    if kind == "XOR":
        return Hamiltonian(("A", "B", "Y", "M0"), _TWO_BODY_XOR)
    # XNOR(a, b) = not XOR(a, b): negate the output spin
    return _negate_spins(Hamiltonian(("A", "B", "Y", "M0"), _TWO_BODY_XOR), ("Y",))


@dataclass(frozen=True)
class LibraryGate:
    kind: str
    hamiltonian: Hamiltonian
    e_min: Fraction

    @property
    def num_pins(self) -> int:
        return GATE_PINS[self.kind]

    @property
    def num_ancilla(self) -> int:
        return self.hamiltonian.num_spins - self.num_pins


@dataclass(frozen=True)
class GateLibrary:
    body_order: int
    gates: dict[str, LibraryGate]

    def __getitem__(self, kind: str) -> LibraryGate:
        try:
            return self.gates[kind]
        except KeyError:
            raise ValidationError(f"gate kind {kind!r} missing from library") from None


def _gate_from_hamiltonian(kind: str, h: Hamiltonian) -> LibraryGate:
    e_min = enumerate_landscape(h).e_min
    return LibraryGate(kind, h, e_min)


def _data_dir():
    return resources.files("spinlogic") / "gates"


@lru_cache(maxsize=None)
def load_library(body_order: int) -> GateLibrary:
    """Load the shipped gate JSON files for the given interaction order."""
    if body_order not in (2, 3):
        raise ValidationError(f"body_order must be 2 or 3, got {body_order}")
    sub = "two_body" if body_order == 2 else "three_body"
    gates = {}
    for kind in GATE_KINDS:
        path = _data_dir() / sub / f"{kind.lower()}.json"
        h = Hamiltonian.from_dict(json.loads(path.read_text()))
        gates[kind] = _gate_from_hamiltonian(kind, h)
    return GateLibrary(body_order, gates)


def write_gate_files(dest: str | Path) -> list[Path]:
    """Regenerate the gate JSON files under ``dest`` (from the constructions)."""
    dest = Path(dest)
    written = []
    for body_order, sub in ((2, "two_body"), (3, "three_body")):
        d = dest / sub
        d.mkdir(parents=True, exist_ok=True)
        for kind in GATE_KINDS:
            path = d / f"{kind.lower()}.json"
            path.write_text(build_gate(kind, body_order).dumps() + "\n")
            written.append(path)
    return written


if __name__ == "__main__":  # regenerate the shipped gate files in-tree
    out = write_gate_files(Path(__file__).parent / "gates")
    print("\n".join(str(p) for p in out))
