"""Bit strings, mixed-polarity Toffoli gates, permutations and circuits.

Line 0 is named ``a`` and is the least-significant bit of a codeword, so the
row ``c=0, b=0, a=1`` of a truth table is the integer 1.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

MAX_WIDTH = 16
LINE_NAMES = "abcdefghijklmnop"


class ContractError(ValueError):
    """An operation was called outside its precondition."""


class ParseError(ValueError):
    """Malformed gate, specification or circuit text."""

    def __init__(self, message: str, position: int | None = None, line: int | None = None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if position is not None:
            where.append(f"col {position}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.message = message
        self.position = position
        self.line = line


class NotReversibleError(ValueError):
    """A table that is not a bijection on ``{0..2^n-1}``."""


def _check_width(n: int) -> None:
    if not 1 <= n <= MAX_WIDTH:
        raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {n}")


@dataclass(frozen=True)
class BitString:
    """An ``width``-bit codeword; interchangeable with its integer value."""

    width: int
    value: int

    def __post_init__(self):
        _check_width(self.width)
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_str(cls, bits: str) -> "BitString":
        """Parse most-significant-first binary text, e.g. ``"110"`` is c=1, b=1, a=0."""
        return cls(len(bits), int(bits, 2))

    def bit(self, line: int) -> int:
        return (self.value >> line) & 1

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")


Bits = Union[BitString, int]


def _value(x: Bits) -> int:
    return x.value if isinstance(x, BitString) else int(x)


def hamming(x: Bits, y: Bits) -> int:
    """Number of bit positions in which ``x`` and ``y`` differ."""
    if isinstance(x, BitString) and isinstance(y, BitString) and x.width != y.width:
        raise ContractError(f"width mismatch: {x.width} vs {y.width}")
    return (_value(x) ^ _value(y)).bit_count()


@dataclass(frozen=True)
class ToffoliGate:
    """Flip ``target`` iff every positive control is 1 and every negative control is 0."""

    width: int
    target: int
    pos_controls: frozenset = frozenset()
    neg_controls: frozenset = frozenset()
    # (v & care) == want  <=>  controls satisfied
    _care: int = field(init=False, repr=False, compare=False)
    _want: int = field(init=False, repr=False, compare=False)
    _flip: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_width(self.width)
        pos = frozenset(self.pos_controls)
        neg = frozenset(self.neg_controls)
        object.__setattr__(self, "pos_controls", pos)
        object.__setattr__(self, "neg_controls", neg)
        if not 0 <= self.target < self.width:
            raise ValueError(f"target line {self.target} out of range for width {self.width}")
        for line in pos | neg:
            if not 0 <= line < self.width:
                raise ValueError(f"control line {line} out of range for width {self.width}")
        if pos & neg:
            raise ValueError(f"lines {sorted(pos & neg)} are both positive and negative controls")
        if self.target in pos | neg:
            raise ValueError(f"target line {self.target} is also a control")
        want = sum(1 << i for i in pos)
        object.__setattr__(self, "_want", want)
        object.__setattr__(self, "_care", want | sum(1 << i for i in neg))
        object.__setattr__(self, "_flip", 1 << self.target)

    @property
    def controls(self) -> frozenset:
        """Control lines regardless of polarity."""
        return self.pos_controls | self.neg_controls

    @property
    def num_controls(self) -> int:
        return len(self.pos_controls) + len(self.neg_controls)

    def fires(self, v: int) -> bool:
        return (v & self._care) == self._want

    def __call__(self, v: int) -> int:
        return v ^ self._flip if (v & self._care) == self._want else v

    def without_control(self, line: int) -> "ToffoliGate":
        return ToffoliGate(self.width, self.target,
                           self.pos_controls - {line}, self.neg_controls - {line})

    def __str__(self) -> str:
        return format_gate(self)


def apply_gate(g: ToffoliGate, v: Bits) -> Bits:
    """Apply ``g`` to one codeword. Returns the same kind it was given."""
    if isinstance(v, BitString):
        if v.width != g.width:
            raise ContractError(f"width mismatch: gate {g.width} vs bit string {v.width}")
        return BitString(v.width, g(v.value))
    return g(v)


@dataclass(frozen=True)
class Permutation:
    """A reversible specification: ``table[i]`` is the output for input ``i``."""

    width: int
    table: tuple

    def __post_init__(self):
        _check_width(self.width)
        table = tuple(int(x) for x in self.table)
        object.__setattr__(self, "table", table)
        size = 1 << self.width
        if len(table) != size:
            raise NotReversibleError(f"expected {size} entries for width {self.width}, got {len(table)}")
        seen = [False] * size
        for i, x in enumerate(table):
            if not 0 <= x < size:
                raise NotReversibleError(f"entry {i} = {x} is outside [0, {size})")
            if seen[x]:
                raise NotReversibleError(
                    f"not reversible: output {x} appears more than once "
                    "(each input must map to a unique output)")
            seen[x] = True

    @classmethod
    def identity(cls, width: int) -> "Permutation":
        return cls(width, tuple(range(1 << width)))

    @classmethod
    def from_list(cls, values: Sequence[int]) -> "Permutation":
        """Infer the width from the table length."""
        size = len(values)
        width = size.bit_length() - 1
        if size < 2 or size != 1 << width:
            raise NotReversibleError(f"table length {size} is not a power of two >= 2")
        return cls(width, tuple(values))

    def __getitem__(self, i: int) -> int:
        return self.table[i]

    def __len__(self) -> int:
        return len(self.table)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.table))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.table)) + "}"


def complexity(p: Permutation) -> int:
    """Sum of input/output Hamming distances over every row of ``p``."""
    return sum((i ^ x).bit_count() for i, x in enumerate(p.table))


def apply_gate_output_side(g: ToffoliGate, p: Permutation) -> Permutation:
    if g.width != p.width:
        raise ContractError(f"width mismatch: gate {g.width} vs permutation {p.width}")
    return Permutation(p.width, tuple(g(x) for x in p.table))


def invert(p: Permutation) -> Permutation:
    inv = [0] * len(p.table)
    for i, x in enumerate(p.table):
        inv[x] = i
    return Permutation(p.width, tuple(inv))


def swap_gate(x: Bits, y: Bits, width: int | None = None) -> ToffoliGate:
    """The fully controlled gate exchanging codewords ``x`` and ``y`` and fixing all others.

    ``width`` is required when plain integers are passed.
    """
    if isinstance(x, BitString):
        width = x.width
    if width is None:
        raise ContractError("width is required for integer codewords")
    xv, yv = _value(x), _value(y)
    diff = xv ^ yv
    if diff.bit_count() != 1:
        raise ContractError(f"codewords {xv} and {yv} are at Hamming distance "
                            f"{diff.bit_count()}, a swap needs distance 1")
    target = diff.bit_length() - 1
    pos = frozenset(i for i in range(width) if i != target and (xv >> i) & 1)
    neg = frozenset(i for i in range(width) if i != target and not (xv >> i) & 1)
    return ToffoliGate(width, target, pos, neg)


class Order(str, enum.Enum):
    """How a circuit's gate list is evaluated."""

    INPUT_TO_OUTPUT = "input-to-output"
    # as found by output-side synthesis; evaluated last gate first
    DISCOVERY = "discovery"


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple = ()
    order: Order = Order.INPUT_TO_OUTPUT

    def __post_init__(self):
        _check_width(self.width)
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "order", Order(self.order))
        for g in self.gates:
            if g.width != self.width:
                raise ValueError(f"gate {g} has width {g.width}, circuit has {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def evaluation_order(self) -> tuple:
        """Gates in the order they act on an input vector."""
        if self.order is Order.DISCOVERY:
            return self.gates[::-1]
        return self.gates

    def reversed(self) -> "Circuit":
        """Same gate list read backwards, same order tag: computes the inverse function."""
        return Circuit(self.width, self.gates[::-1], self.order)

    def with_order(self, order: Order) -> "Circuit":
        """Relist the gates under ``order`` without changing the function computed."""
        order = Order(order)
        if order is self.order:
            return self
        return Circuit(self.width, self.gates[::-1], order)

    def with_gates(self, gates: Iterable[ToffoliGate]) -> "Circuit":
        return Circuit(self.width, tuple(gates), self.order)

    @property
    def num_controls(self) -> int:
        return sum(g.num_controls for g in self.gates)

    def __str__(self) -> str:
        return " ".join(format_gate(g) for g in self.gates)


def simulate(c: Circuit) -> Permutation:
    table = list(range(1 << c.width))
    for g in c.evaluation_order():
        table = [g(x) for x in table]
    return Permutation(c.width, tuple(table))


# -- TOF text notation ------------------------------------------------------

def _line_name(i: int) -> str:
    return LINE_NAMES[i]


def format_gate(g: ToffoliGate) -> str:
    ctrls = []
    for line in sorted(g.controls):
        ctrls.append(_line_name(line) + ("'" if line in g.neg_controls else ""))
    return f"TOF({','.join(ctrls)};{_line_name(g.target)})"


def parse_gate(text: str, width: int) -> ToffoliGate:
    """Parse ``TOF(b',c;a)`` style notation; letters a, b, c, ... are lines 0, 1, 2, ..."""
    _check_width(width)
    s = text.strip()
    pos = 0

    def expect(pattern: str, what: str) -> re.Match:
        nonlocal pos
        m = re.compile(r"\s*" + pattern).match(s, pos)
        if not m:
            raise ParseError(f"expected {what} in {text!r}", position=pos)
        pos = m.end()
        return m

    expect(r"TOF\s*\(", "'TOF('")
    pos_ctrls: set[int] = set()
    neg_ctrls: set[int] = set()

    def line_of(letter: str, at: int) -> int:
        i = LINE_NAMES.find(letter)
        if i < 0 or i >= width:
            raise ParseError(f"unknown line {letter!r} for width {width}", position=at)
        return i

    if not re.compile(r"\s*;").match(s, pos):
        while True:
            at = pos
            m = expect(r"([a-z])(')?", "control line letter")
            line = line_of(m.group(1), at)
            if line in pos_ctrls or line in neg_ctrls:
                raise ParseError(f"control {m.group(1)!r} repeated", position=at)
            (neg_ctrls if m.group(2) else pos_ctrls).add(line)
            if not re.compile(r"\s*,").match(s, pos):
                break
            expect(",", "','")
    expect(";", "';'")
    at = pos
    m = expect(r"([a-z])", "target line letter")
    target = line_of(m.group(1), at)
    if target in pos_ctrls or target in neg_ctrls:
        raise ParseError(f"target {m.group(1)!r} repeated as a control", position=at)
    expect(r"\)", "')'")
    if s[pos:].strip():
        raise ParseError(f"trailing text {s[pos:]!r}", position=pos)
    return ToffoliGate(width, target, frozenset(pos_ctrls), frozenset(neg_ctrls))


def parse_gates(text: str, width: int) -> list[ToffoliGate]:
    """Parse a whitespace-separated run of gates such as ``TOF(b;a) TOF(;b)``."""
    chunks = re.findall(r"TOF\s*\([^)]*\)", text)
    leftover = re.sub(r"TOF\s*\([^)]*\)", " ", text).strip()
    if leftover:
        raise ParseError(f"unexpected text {leftover!r} between gates")
    return [parse_gate(chunk, width) for chunk in chunks]
