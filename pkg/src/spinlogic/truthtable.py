"""Boolean function specifications for gate synthesis.

A truth table is a total function from p input bits to q output bits.  The
text format is one line per row, ``inputs -> outputs`` in binary, e.g. for a
two-input AND::

    00 -> 0
    01 -> 0
    10 -> 0
    11 -> 1

Rows may appear in any order but every input vector must occur exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping

from .errors import ValidationError

Bits = tuple[int, ...]


def _as_bits(value, width: int | None = None) -> Bits:
    if isinstance(value, str):
        bits = tuple(int(ch) for ch in value)
    else:
        bits = tuple(int(b) for b in value)
    if any(b not in (0, 1) for b in bits):
        raise ValidationError(f"bits must be 0/1, got {value!r}")
    if width is not None and len(bits) != width:
        raise ValidationError(f"expected {width} bits, got {value!r}")
    return bits


@dataclass(frozen=True)
class TruthTable:
    """Total Boolean function with p inputs and q outputs."""

    p: int
    q: int
    rows: Mapping[Bits, Bits]

    def __post_init__(self):
        rows = {_as_bits(k, self.p): _as_bits(v, self.q) for k, v in self.rows.items()}
        if len(rows) != 1 << self.p:
            raise ValidationError(
                f"truth table must have exactly 2^{self.p} rows, got {len(rows)}"
            )
        object.__setattr__(self, "rows", rows)

    def output(self, inputs) -> Bits:
        return self.rows[_as_bits(inputs, self.p)]

    def is_valid(self, inputs, outputs) -> bool:
        """True when (inputs, outputs) is a row of the function."""
        return self.rows[_as_bits(inputs, self.p)] == _as_bits(outputs, self.q)

    def states(self) -> Iterator[tuple[Bits, Bits, bool]]:
        """All 2^(p+q) input/output combinations with their validity."""
        for k in range(1 << self.p):
            x = tuple((k >> i) & 1 for i in range(self.p))
            for j in range(1 << self.q):
                y = tuple((j >> i) & 1 for i in range(self.q))
                yield x, y, self.rows[x] == y

    @classmethod
    def from_function(cls, p: int, q: int, fn) -> TruthTable:
        rows = {}
        for k in range(1 << p):
            x = tuple((k >> i) & 1 for i in range(p))
            rows[x] = _as_bits(fn(x), q)
        return cls(p, q, rows)

    @classmethod
    def parse(cls, text: str) -> TruthTable:
        """Parse the ``inputs -> outputs`` text format."""
        rows: dict[Bits, Bits] = {}
        p = q = None
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "->" not in line:
                raise ValidationError(f"line {lineno}: expected 'inputs -> outputs'")
            left, right = (part.strip() for part in line.split("->", 1))
            x, y = _as_bits(left), _as_bits(right)
            if p is None:
                p, q = len(x), len(y)
            if len(x) != p or len(y) != q:
                raise ValidationError(f"line {lineno}: inconsistent row width")
            if x in rows:
                raise ValidationError(f"line {lineno}: duplicate input row {left}")
            rows[x] = y
        if p is None:
            raise ValidationError("empty truth table")
        return cls(p, q, rows)

    def format(self) -> str:
        lines = []
        for k in range(1 << self.p):
            x = tuple((k >> i) & 1 for i in range(self.p))
            lines.append(
                "".join(map(str, x)) + " -> " + "".join(map(str, self.rows[x]))
            )
        return "\n".join(lines) + "\n"


def _parity_fn(x):
    return (sum(x) & 1,)


STANDARD_TABLES: dict[str, TruthTable] = {
    "AND": TruthTable.from_function(2, 1, lambda x: (x[0] & x[1],)),
    "OR": TruthTable.from_function(2, 1, lambda x: (x[0] | x[1],)),
    "XOR": TruthTable.from_function(2, 1, _parity_fn),
    "XNOR": TruthTable.from_function(2, 1, lambda x: (1 - _parity_fn(x)[0],)),
    "NOT": TruthTable.from_function(1, 1, lambda x: (1 - x[0],)),
    "BUF": TruthTable.from_function(1, 1, lambda x: (x[0],)),
}
