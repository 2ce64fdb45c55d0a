"""Text formats for specifications and circuits.

Specification::

    # comments start with '#'
    n=3
    perm: 1 0 3 2 5 7 4 6

or, with rows written most-significant line first (c b a)::

    n=3
    table:
    000 -> 001
    001 -> 000
    ...

Circuit::

    n=3
    order=input-to-output
    TOF(b,c;a)
    TOF(;a)
"""

from __future__ import annotations

import re
from pathlib import Path

from .core import (
    Circuit,
    NotReversibleError,
    Order,
    ParseError,
    Permutation,
    format_gate,
    parse_gate,
)


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _parse_width(lines, what: str) -> int:
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise ParseError(f"empty {what}: expected 'n=<width>'", line=1) from None
    m = re.fullmatch(r"n\s*=\s*(\d+)", line)
    if not m:
        raise ParseError(f"expected 'n=<width>', got {line!r}", line=lineno)
    n = int(m.group(1))
    if not 1 <= n <= 16:
        raise ParseError(f"width {n} outside [1, 16]", line=lineno)
    return n


def parse_spec(text: str) -> Permutation:
    lines = _content_lines(text)
    n = _parse_width(lines, "specification")
    try:
        lineno, line = next(lines)
    except StopIteration:
        raise ParseError("missing 'perm:' or 'table:' section") from None

    if line.startswith("perm:"):
        values = []
        tokens = line[len("perm:"):].split()
        for _, more in lines:
            tokens.extend(more.split())
        for tok in tokens:
            if not tok.isdigit():
                raise ParseError(f"non-integer entry {tok!r} in perm list", line=lineno)
            values.append(int(tok))
    elif line.rstrip(":") == "table" and line.endswith(":"):
        rows: dict[int, int] = {}
        for lineno, row in lines:
            m = re.fullmatch(r"([01]+)\s*->\s*([01]+)", row)
            if not m or len(m.group(1)) != n or len(m.group(2)) != n:
                raise ParseError(f"expected '<{n} bits> -> <{n} bits>', got {row!r}", line=lineno)
            x = int(m.group(1), 2)
            if x in rows:
                raise ParseError(f"input {m.group(1)} listed twice", line=lineno)
            rows[x] = int(m.group(2), 2)
        if len(rows) != 1 << n:
            raise NotReversibleError(f"table has {len(rows)} rows, expected {1 << n}")
        values = [rows[i] for i in range(1 << n)]
    else:
        raise ParseError(f"expected 'perm:' or 'table:', got {line!r}", line=lineno)
    return Permutation(n, tuple(values))


def format_spec(p: Permutation) -> str:
    return f"n={p.width}\nperm: {' '.join(map(str, p.table))}\n"


def parse_circuit(text: str) -> Circuit:
    lines = _content_lines(text)
    n = _parse_width(lines, "circuit")
    order = Order.INPUT_TO_OUTPUT
    gates = []
    for lineno, line in lines:
        m = re.fullmatch(r"order\s*=\s*(\S+)", line)
        if m:
            if gates:
                raise ParseError("'order=' must precede the gates", line=lineno)
            try:
                order = Order(m.group(1))
            except ValueError:
                raise ParseError(f"unknown order {m.group(1)!r}", line=lineno) from None
            continue
        try:
            gates.append(parse_gate(line, n))
        except ParseError as exc:
            raise ParseError(exc.message, position=exc.position, line=lineno) from None
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from None
    return Circuit(n, tuple(gates), order)


def format_circuit(c: Circuit) -> str:
    body = "".join(format_gate(g) + "\n" for g in c.gates)
    return f"n={c.width}\norder={c.order.value}\n{body}"


def read_spec(path) -> Permutation:
    return parse_spec(Path(path).read_text(encoding="utf-8"))


def read_circuit(path) -> Circuit:
    return parse_circuit(Path(path).read_text(encoding="utf-8"))
