"""Output-side synthesis by swapping bit strings.

The specification is sorted into the identity by a sequence of fully
controlled swap gates, each exchanging two codewords at Hamming distance 1.
Swaps act on values (the output column) wherever they sit in the table.
Gates are collected in the order they are found ("discovery" order); since
``g_k(...g_1(f(x))) = x``, the realized circuit applies them last-found first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import (
    Circuit,
    ContractError,
    Order,
    Permutation,
    ToffoliGate,
    invert,
    simulate,
    swap_gate,
)

ALGORITHMS = ("alg1", "alg2", "random")
DIRECTIONS = ("output", "input")
FALLBACKS = ("lowest", "highest", "nearest")

MASK64 = (1 << 64) - 1


class GateCapExceeded(RuntimeError):
    """Synthesis emitted more gates than the configured safety cap."""


class VerificationError(RuntimeError):
    """A produced circuit does not realize its specification (a bug)."""


@dataclass(frozen=True)
class SynthOptions:
    algorithm: str = "alg1"
    direction: str = "output"
    fallback: str = "lowest"
    restarts: int = 1
    seed: int = 0
    gate_cap: Optional[int] = None  # default 4 * n * 2^n
    trace: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"direction must be one of {DIRECTIONS}, got {self.direction!r}")
        if self.fallback not in FALLBACKS:
            raise ValueError(f"fallback must be one of {FALLBACKS}, got {self.fallback!r}")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.gate_cap is not None and self.gate_cap <= 0:
            raise ValueError("gate_cap must be positive")
        if not 0 <= self.seed <= MASK64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def cap_for(self, width: int) -> int:
        return self.gate_cap if self.gate_cap is not None else 4 * width * (1 << width)


@dataclass(frozen=True)
class SynthResult:
    discovery_gates: tuple
    circuit: Circuit
    trace: Optional[tuple] = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.discovery_gates)


class XorShift64Star:
    """xorshift64* generator; the state is seeded through one splitmix64 step.

    Both are fixed algorithms so random synthesis runs are reproducible
    independently of the Python ``random`` module.
    """

    def __init__(self, seed: int):
        z = (seed + 0x9E3779B97F4A7C15) & MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        z ^= z >> 31
        self.state = z or 0x9E3779B97F4A7C15

    def next(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def below(self, k: int) -> int:
        """Integer in ``[0, k)`` by modulo reduction (bias below 2^-50 for k <= 2^16)."""
        return self.next() % k


# -- step 1: element selection ----------------------------------------------

def select_alg1(p) -> Optional[int]:
    """Value sitting at the lowest misplaced index, or None for the identity."""
    for i, x in enumerate(getattr(p, "table", p)):
        if x != i:
            return x
    return None


def select_alg2(p) -> Optional[int]:
    """Lowest misplaced value, or None for the identity."""
    for v, x in enumerate(getattr(p, "table", p)):
        if x != v:
            return v
    return None


# -- steps 2-3 ---------------------------------------------------------------

def _choose_neighbor(a: int, b: int, table, width: int, fallback: str) -> int:
    diff = a ^ b
    # flipping any bit where b disagrees with a lowers the distance to a by one
    candidates = [b ^ (1 << i) for i in range(width) if (diff >> i) & 1]
    candidates.sort()
    for c in candidates:
        if table[c] != c:
            return c
    if fallback == "lowest":
        return candidates[0]
    if fallback == "highest":
        return candidates[-1]
    return min(candidates, key=lambda c: (abs(c - a), c))


def choose_neighbor(a: int, b: int, p: Permutation, fallback: str = "lowest") -> int:
    """Pick the codeword to swap the occupant ``b`` of slot ``a`` with.

    Among the neighbours of ``b`` that are closest to ``a``, the lowest one
    not yet in its intended place wins; if all are placed, ``fallback``
    decides (``lowest``, ``highest`` or ``nearest`` to ``a``).
    """
    a, b = int(a), int(b)
    if (a ^ b).bit_count() < 2:
        raise ContractError(f"choose_neighbor needs Hamming distance >= 2 between {a} and {b}")
    if fallback not in FALLBACKS:
        raise ValueError(f"unknown fallback {fallback!r}")
    return _choose_neighbor(a, b, p.table, p.width, fallback)


class _Work:
    """Mutable table plus inverse, so a swap of two values costs O(1)."""

    def __init__(self, p: Permutation, record_trace: bool):
        self.width = p.width
        self.table = list(p.table)
        self.where = [0] * len(self.table)
        for i, x in enumerate(self.table):
            self.where[x] = i
        self.gates: list[ToffoliGate] = []
        self.trace = [] if record_trace else None

    def swap(self, x: int, y: int) -> None:
        g = swap_gate(x, y, self.width)
        i, j = self.where[x], self.where[y]
        self.table[i], self.table[j] = y, x
        self.where[x], self.where[y] = j, i
        self.gates.append(g)
        if self.trace is not None:
            self.trace.append((g, Permutation(self.width, tuple(self.table))))

    def place(self, a: int, fallback: str, cap: int) -> None:
        table = self.table
        while True:
            b = table[a]
            if b == a:
                return
            if len(self.gates) >= cap:
                raise GateCapExceeded(
                    f"gate cap {cap} exceeded while placing {a}; table now {table}")
            if (a ^ b).bit_count() == 1:
                # a step-2 swap never displaces a value that is already placed
                assert table[b] != b and self.where[a] != a, (a, b)
                self.swap(b, a)
                return
            c = _choose_neighbor(a, b, table, self.width, fallback)
            self.swap(b, c)


def place_element(p: Permutation, a: int, fallback: str = "lowest"):
    """Bring value ``a`` to index ``a``; returns ``(gates, new_permutation)``."""
    a = int(a)
    if p.table[a] == a:
        raise ContractError(f"value {a} is already in its intended place")
    work = _Work(p, record_trace=False)
    work.place(a, fallback, cap=p.width)
    return work.gates, Permutation(p.width, tuple(work.table))


def _run(p: Permutation, select: Callable[[list], Optional[int]], opts: SynthOptions) -> _Work:
    work = _Work(p, opts.trace)
    cap = opts.cap_for(p.width)
    while True:
        a = select(work.table)
        if a is None:
            return work
        work.place(a, opts.fallback, cap)


def _finish(target: Permutation, gates: list, trace, direction: str) -> SynthResult:
    discovery = tuple(gates)
    if direction == "output":
        circuit = Circuit(target.width, discovery[::-1], Order.INPUT_TO_OUTPUT)
    else:
        circuit = Circuit(target.width, discovery, Order.INPUT_TO_OUTPUT)
    if simulate(circuit) != target:
        raise VerificationError(f"synthesized circuit does not realize {target}")
    return SynthResult(discovery, circuit, tuple(trace) if trace is not None else None)


def synthesize(p: Permutation, opts: SynthOptions = SynthOptions()) -> SynthResult:
    """Greedy bit-string-swapping synthesis of ``p``.

    With ``direction="input"`` the inverse specification is sorted instead and
    the discovery list itself is the input-to-output circuit.
    """
    if opts.algorithm == "random":
        return synthesize_random(p, opts)
    work_spec = invert(p) if opts.direction == "input" else p
    select = select_alg1 if opts.algorithm == "alg1" else select_alg2
    work = _run(work_spec, select, opts)
    return _finish(p, work.gates, work.trace, opts.direction)


def synthesize_random(p: Permutation, opts: SynthOptions) -> SynthResult:
    """Best of ``opts.restarts`` runs that place a uniformly random misplaced value each round.

    Restart ``k`` draws from ``XorShift64Star(opts.seed + k)``; the shortest
    result wins and ties go to the lowest restart index.
    """
    work_spec = invert(p) if opts.direction == "input" else p
    best = None
    for k in range(opts.restarts):
        rng = XorShift64Star((opts.seed + k) & MASK64)

        def select(table, rng=rng):
            misplaced = [v for v, x in enumerate(table) if x != v]
            if not misplaced:
                return None
            return misplaced[rng.below(len(misplaced))]

        work = _run(work_spec, select, opts)
        if best is None or len(work.gates) < len(best.gates):
            best = work
    return _finish(p, best.gates, best.trace, opts.direction)
