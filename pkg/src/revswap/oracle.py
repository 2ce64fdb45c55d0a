"""Exhaustive ground truth for small widths.

Breadth-first search from the identity over all mixed-polarity Toffoli
gates gives the exact minimum gate count of every reversible function on
up to three lines. Permutations are indexed by their lexicographic (Lehmer)
rank into a dense array.
"""

from __future__ import annotations

import functools
import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import Circuit, Order, Permutation, ToffoliGate, simulate
from .synthesis import SynthOptions, VerificationError, synthesize

MAX_ORACLE_WIDTH = 3


class UnsupportedWidthError(ValueError):
    pass


def _check(n: int) -> None:
    if not 1 <= n <= MAX_ORACLE_WIDTH:
        raise UnsupportedWidthError(f"exhaustive search supports 1..{MAX_ORACLE_WIDTH} lines, got {n}")


# -- ranking -----------------------------------------------------------------

def lehmer_rank(perm) -> int:
    """Lexicographic rank of a permutation of ``range(len(perm))``."""
    perm = list(perm)
    size = len(perm)
    rank = 0
    for i, x in enumerate(perm):
        smaller = sum(1 for y in perm[i + 1:] if y < x)
        rank += smaller * math.factorial(size - 1 - i)
    return rank


def lehmer_unrank(rank: int, size: int) -> tuple:
    pool = list(range(size))
    out = []
    for i in range(size - 1, -1, -1):
        digit, rank = divmod(rank, math.factorial(i))
        out.append(pool.pop(digit))
    return tuple(out)


def rank_rows(arr: np.ndarray) -> np.ndarray:
    """Vectorized ``lehmer_rank`` over the rows of a 2-D array."""
    size = arr.shape[1]
    ranks = np.zeros(arr.shape[0], dtype=np.int64)
    for i in range(size - 1):
        smaller = (arr[:, i + 1:] < arr[:, i:i + 1]).sum(axis=1)
        ranks += smaller * math.factorial(size - 1 - i)
    return ranks


# -- gate library ----------------------------------------------------------------

@dataclass(frozen=True)
class GateLibrary:
    width: int
    gates: tuple

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)


def gate_library(n: int) -> GateLibrary:
    """Every target with every other line absent, positive or negative: ``n * 3^(n-1)`` gates."""
    gates = []
    for target in range(n):
        others = [i for i in range(n) if i != target]
        for states in itertools.product((0, 1, 2), repeat=len(others)):
            pos = frozenset(l for l, s in zip(others, states) if s == 1)
            neg = frozenset(l for l, s in zip(others, states) if s == 2)
            gates.append(ToffoliGate(n, target, pos, neg))
    return GateLibrary(n, tuple(gates))


# -- distance table ----------------------------------------------------------------

@dataclass(frozen=True)
class DistanceTable:
    width: int
    dist: np.ndarray = field(repr=False)
    layers: tuple = ()

    def __getitem__(self, p) -> int:
        table = p.table if isinstance(p, Permutation) else p
        return int(self.dist[lehmer_rank(table)])

    def __len__(self) -> int:
        return len(self.dist)


def build_distances(n: int) -> DistanceTable:
    _check(n)
    return _build_distances(n)


@functools.lru_cache(maxsize=None)
def _build_distances(n: int) -> DistanceTable:
    size = 1 << n
    maps = np.array([[g(v) for v in range(size)] for g in gate_library(n)], dtype=np.int8)
    dist = np.full(math.factorial(size), -1, dtype=np.int8)
    frontier = np.arange(size, dtype=np.int8)[None, :]
    dist[rank_rows(frontier)] = 0
    layers = [1]
    depth = 0
    while len(frontier):
        depth += 1
        found = []
        for gm in maps:
            nxt = gm[frontier]
            ranks = rank_rows(nxt)
            fresh = dist[ranks] < 0
            if fresh.any():
                ranks, idx = np.unique(ranks[fresh], return_index=True)
                dist[ranks] = depth
                found.append(nxt[fresh][idx])
        frontier = np.concatenate(found) if found else np.empty((0, size), dtype=np.int8)
        if len(frontier):
            layers.append(len(frontier))
    dist.setflags(write=False)
    return DistanceTable(n, dist, tuple(layers))


def optimal_circuit(p: Permutation, table: Optional[DistanceTable] = None) -> Circuit:
    """A minimum-length input-to-output circuit for ``p``, by descent through the distance table."""
    _check(p.width)
    table = table or build_distances(p.width)
    lib = gate_library(p.width)
    current = p.table
    d = table[current]
    found = []
    while d > 0:
        for g in lib:
            nxt = tuple(g(x) for x in current)
            if table[nxt] == d - 1:
                found.append(g)
                current, d = nxt, d - 1
                break
        else:  # pragma: no cover - a consistent BFS table always has a descent
            raise RuntimeError(f"no descending gate from {current}")
    circuit = Circuit(p.width, tuple(found), Order.DISCOVERY).with_order(Order.INPUT_TO_OUTPUT)
    if simulate(circuit) != p:
        raise VerificationError(f"oracle circuit does not realize {p}")
    return circuit


# -- benchmark -----------------------------------------------------------------

CSV_HEADER = ("perm_rank", "raw_gates_alg1", "raw_gates_alg2", "reduced_gates", "optimal_gates")


@dataclass(frozen=True)
class BenchRow:
    perm_rank: int
    raw_gates_alg1: int
    raw_gates_alg2: int
    reduced_gates: Optional[int]
    optimal_gates: int


@dataclass
class BenchStats:
    width: int
    rows: list

    def column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows if getattr(r, name) is not None]

    def summary(self) -> dict:
        out = {"width": self.width, "functions": len(self.rows)}
        for name in CSV_HEADER[1:]:
            col = self.column(name)
            if not col:
                continue
            out[name] = {
                "mean": sum(col) / len(col),
                "max": max(col),
                "histogram": dict(sorted(Counter(col).items())),
            }
        raw_best = [min(r.raw_gates_alg1, r.raw_gates_alg2) for r in self.rows]
        out["mean_gap_best_raw_vs_optimal"] = (
            sum(b - r.optimal_gates for b, r in zip(raw_best, self.rows)) / len(self.rows))
        return out

    def to_csv(self) -> str:
        lines = [",".join(CSV_HEADER)]
        for r in self.rows:
            reduced = "" if r.reduced_gates is None else str(r.reduced_gates)
            lines.append(f"{r.perm_rank},{r.raw_gates_alg1},{r.raw_gates_alg2},{reduced},{r.optimal_gates}")
        return "\n".join(lines) + "\n"


def exhaustive_benchmark(n: int, opts: SynthOptions = SynthOptions(), reduce: bool = False) -> BenchStats:
    """Synthesize every reversible function on ``n`` lines with both deterministic algorithms.

    ``opts`` supplies direction and fallback. With ``reduce`` the shorter raw
    circuit (Algorithm 1 on ties) is also run through the reduction pipeline.
    """
    from .reduction import reduce as reduce_circuit

    _check(n)
    table = build_distances(n)
    opts1 = SynthOptions("alg1", opts.direction, opts.fallback, gate_cap=opts.gate_cap)
    opts2 = SynthOptions("alg2", opts.direction, opts.fallback, gate_cap=opts.gate_cap)
    rows = []
    for rank, values in enumerate(itertools.permutations(range(1 << n))):
        p = Permutation(n, values)
        try:
            r1 = synthesize(p, opts1)
            r2 = synthesize(p, opts2)
            reduced = None
            if reduce:
                best = r1 if len(r1) <= len(r2) else r2
                small, _ = reduce_circuit(best.circuit, p)
                if simulate(small) != p:
                    raise VerificationError("reduced circuit changed the function")
                reduced = len(small)
        except Exception as exc:
            raise RuntimeError(f"benchmark failed on permutation {p} (rank {rank}): {exc}") from exc
        rows.append(BenchRow(rank, len(r1), len(r2), reduced, int(table.dist[rank])))
    return BenchStats(n, rows)
