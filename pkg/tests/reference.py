"""Deliberately naive reference semantics, independent of the package's bit-mask code.

Codewords are handled as explicit bit lists (index 0 = line a = LSB) and
gates as plain (target, {line: required_bit}) pairs.
"""

import random


def to_bits(v, n):
    return [(v >> i) & 1 for i in range(n)]


def from_bits(bits):
    return sum(b << i for i, b in enumerate(bits))


def ref_gate(target, controls):
    """controls: dict line -> required bit (1 positive, 0 negative)."""
    return (target, dict(controls))


def ref_apply(gate, bits):
    target, controls = gate
    out = list(bits)
    if all(bits[line] == want for line, want in controls.items()):
        out[target] = 1 - out[target]
    return out


def ref_simulate(n, gates):
    """Thread every input through ``gates`` left to right."""
    table = []
    for v in range(1 << n):
        bits = to_bits(v, n)
        for g in gates:
            bits = ref_apply(g, bits)
        table.append(from_bits(bits))
    return tuple(table)


def from_pkg(g):
    controls = {line: 1 for line in g.pos_controls}
    controls.update({line: 0 for line in g.neg_controls})
    return ref_gate(g.target, controls)


def ref_hamming(x, y, n):
    return sum(a != b for a, b in zip(to_bits(x, n), to_bits(y, n)))


def random_circuit(rng: random.Random, n: int, length: int):
    from revswap.core import Circuit, ToffoliGate

    gates = []
    for _ in range(length):
        target = rng.randrange(n)
        pos, neg = set(), set()
        for line in range(n):
            if line == target:
                continue
            s = rng.randrange(3)
            if s == 1:
                pos.add(line)
            elif s == 2:
                neg.add(line)
        gates.append(ToffoliGate(n, target, frozenset(pos), frozenset(neg)))
    return Circuit(n, tuple(gates))
