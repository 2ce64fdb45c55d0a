"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` or ``[FAIL]`` line; run with ``-s`` to
see them inline (they are also written when output is captured).
"""

import contextlib
import itertools
import random
import time

import pytest

from revswap.core import (
    Circuit,
    Order,
    Permutation,
    complexity,
    format_gate,
    invert,
    parse_gates,
    simulate,
)
from revswap.oracle import build_distances, gate_library
from revswap.reduction import can_interchange, reduce, reduce_controls, remove_useless
from revswap.synthesis import SynthOptions, synthesize
from revswap.templates import SymControl, SymGate, Template, TemplateError, builtin_templates, register

from reference import from_pkg, random_circuit, ref_simulate

SAMPLE = Permutation(3, (1, 0, 3, 2, 5, 7, 4, 6))
FREDKIN = Permutation(3, (0, 1, 2, 3, 4, 6, 5, 7))
SWAP_3_4 = Permutation(3, (0, 1, 2, 4, 3, 5, 6, 7))
ROTATE = Permutation(3, (7, 0, 1, 2, 3, 4, 5, 6))

SWEEP_VARIANTS = [(alg, d) for alg in ("alg1", "alg2") for d in ("output", "input")]


@contextlib.contextmanager
def criterion(capsys, number, title):
    notes = []
    try:
        yield notes
    except BaseException:
        line = f"[FAIL] criterion {number}: {title}"
        raise
    else:
        line = f"[PASS] criterion {number}: {title}"
    finally:
        if notes:
            line += " (" + "; ".join(notes) + ")"
        with capsys.disabled():
            print("\n" + line)


def listing(gates):
    return " ".join(format_gate(g) for g in gates)


def circ(text, order=Order.INPUT_TO_OUTPUT, n=3):
    return Circuit(n, parse_gates(text, n), order)


@pytest.fixture(scope="session")
def sweep():
    """Synthesize every n=2 and n=3 function with every deterministic variant."""
    counts = {}
    start = time.perf_counter()
    for n in (2, 3):
        for t in itertools.permutations(range(2 ** n)):
            p = Permutation(n, t)
            row = []
            for alg, direction in SWEEP_VARIANTS:
                res = synthesize(p, SynthOptions(alg, direction))
                if simulate(res.circuit) != p:
                    raise AssertionError(f"{alg}/{direction} wrong on {p}")
                row.append(len(res.circuit))
            counts[p] = row
    return counts, time.perf_counter() - start


def test_criterion_01_alg1_sequence(capsys):
    with criterion(capsys, 1, "algorithm 1 sequence on {1,0,3,2,5,7,4,6}, exact, < 1 ms") as notes:
        res = synthesize(SAMPLE, SynthOptions("alg1"))
        assert listing(res.discovery_gates) == \
            "TOF(b',c';a) TOF(b,c';a) TOF(a,c;b) TOF(b,c;a) TOF(a',c;b)"
        assert len(res) == 5 and simulate(res.circuit) == SAMPLE
        best = min(_timed(lambda: synthesize(SAMPLE, SynthOptions("alg1"))) for _ in range(20))
        notes.append(f"best of 20: {best * 1e3:.3f} ms")
        assert best < 1e-3


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def test_criterion_02_alg2_sequence(capsys):
    with criterion(capsys, 2, "algorithm 2 sequence on {1,0,3,2,5,7,4,6}, exact"):
        res = synthesize(SAMPLE, SynthOptions("alg2"))
        assert listing(res.discovery_gates) == \
            "TOF(b',c';a) TOF(b,c';a) TOF(b',c;a) TOF(a,c;b) TOF(b,c;a)"
        assert len(res) == 5 and simulate(res.circuit) == SAMPLE


def test_criterion_03_rotation(capsys):
    with criterion(capsys, 3, "{7,0,...,6}: 7-gate sequence, 3-gate optimum, reduce <= 5") as notes:
        res = synthesize(ROTATE, SynthOptions("alg2"))
        assert listing(res.discovery_gates) == ("TOF(a,b;c) TOF(a,c';b) TOF(b',c';a) TOF(b,c';a) "
                                                "TOF(a,c;b) TOF(b',c;a) TOF(b,c;a)")
        assert build_distances(3)[ROTATE] == 3
        assert simulate(circ("TOF(a,b;c) TOF(a;b) TOF(;a)", Order.DISCOVERY)) == ROTATE
        out, report = reduce(res.circuit, ROTATE)
        notes.append(f"reduced {len(res)} -> {len(out)}")
        assert simulate(out) == ROTATE and len(out) <= 5


def test_criterion_04_fredkin(capsys):
    with criterion(capsys, 4, "Fredkin: 3-gate circuits, control reduction exact") as notes:
        for alg in ("alg1", "alg2"):
            res = synthesize(FREDKIN, SynthOptions(alg))
            notes.append(f"{alg}: {listing(res.discovery_gates)}")
            assert len(res) == 3 and simulate(res.circuit) == FREDKIN
        out = reduce_controls(circ("TOF(a,c;b) TOF(b,c;a) TOF(a,c;b)"), FREDKIN)
        assert listing(out.gates) == "TOF(a;b) TOF(b,c;a) TOF(a;b)"


def test_criterion_05_swap_3_4(capsys):
    with criterion(capsys, 5, "{0,1,2,4,3,5,6,7}: correct, <= 8 gates") as notes:
        for alg in ("alg1", "alg2"):
            res = synthesize(SWAP_3_4, SynthOptions(alg))
            notes.append(f"{alg}: {len(res)} gates")
            assert simulate(res.circuit) == SWAP_3_4 and len(res) <= 8


def test_criterion_06_complexity(capsys):
    with criterion(capsys, 6, "C(f) of {1,0,3,2,5,7,4,6} = 8"):
        assert complexity(SAMPLE) == 8


def test_criterion_07_invert(capsys):
    with criterion(capsys, 7, "inverse of {1,0,3,2,5,7,4,6} = {1,0,3,2,6,4,7,5}"):
        assert invert(SAMPLE).table == (1, 0, 3, 2, 6, 4, 7, 5)


def test_criterion_08_exhaustive_sweep(capsys, sweep):
    with criterion(capsys, 8, "all n=2 and n=3 functions, 4 variants, <= 24 gates, < 60 s") as notes:
        counts, elapsed = sweep
        n3 = [max(v) for p, v in counts.items() if p.width == 3]
        notes.append(f"{len(counts)} functions in {elapsed:.1f} s, max {max(n3)} gates")
        assert len(counts) == 40320 + 24
        assert max(n3) <= 24
        assert elapsed < 60


def test_criterion_09_oracle(capsys, sweep):
    with criterion(capsys, 9, "oracle distances bound every raw circuit"):
        d = build_distances(3)
        assert d[Permutation.identity(3)] == 0
        assert d[FREDKIN] == 3 and d[ROTATE] == 3
        counts, _ = sweep
        d2 = build_distances(2)
        for p, row in counts.items():
            assert (d if p.width == 3 else d2)[p] <= min(row), p


def test_criterion_10_reduction_soundness(capsys):
    with criterion(capsys, 10, "reduce on 1000 random circuits, interchange, pair removal") as notes:
        rng = random.Random(20240601)
        removed = 0
        for _ in range(1000):
            n = rng.choice((2, 3, 4))
            c = random_circuit(rng, n, rng.randint(0, 20))
            spec = simulate(c)
            out, _ = reduce(c, spec)
            assert simulate(out) == spec and len(out) <= len(c)
            assert ref_simulate(n, [from_pkg(g) for g in out.gates]) == spec.table
            removed += len(c) - len(out)
        notes.append(f"{removed} gates removed in total")
        pairs = 0
        for g1, g2 in itertools.product(gate_library(3), repeat=2):
            if can_interchange(g1, g2):
                assert simulate(Circuit(3, (g1, g2))) == simulate(Circuit(3, (g2, g1)))
                pairs += 1
        notes.append(f"{pairs} commuting pairs")
        assert listing(remove_useless(circ("TOF(a,b;c) TOF(a;c) TOF(a,b;c)")).gates) == "TOF(a;c)"


def test_criterion_11_template_registration(capsys):
    with criterion(capsys, 11, "unsound template rejected, T0/T1/T2/T4 accepted"):
        bad = Template("bad", (SymGate("x", (SymControl("y"),)), SymGate("y", (SymControl("x"),))), ())
        with pytest.raises(TemplateError):
            register(bad)
        registry = []
        for t in builtin_templates():
            if t.name in {"T0", "T1", "T2", "T4"}:
                register(t, registry)
        assert {t.name for t in registry} == {"T0", "T1", "T2", "T4"}
