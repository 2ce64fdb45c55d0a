"""Circuit minimization: commutation, useless-pair removal, templates, control reduction.

Every pass is function-preserving. Commutation and pair removal use the
line-level condition (polarity ignored): two gates may be exchanged when
neither one's target is a control line of the other.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import Circuit, ContractError, Permutation, ToffoliGate, simulate
from .templates import Binding, Template, builtin_templates, instantiate, unify

log = logging.getLogger(__name__)

DEFAULT_PASSES = 32


@dataclass
class ReductionReport:
    passes: int = 0
    gates_before: int = 0
    gates_after: int = 0
    hits: Counter = field(default_factory=Counter)
    pass_cap_hit: bool = False

    def merge(self, other: "ReductionReport") -> None:
        self.hits.update(other.hits)
        self.pass_cap_hit |= other.pass_cap_hit

    def __str__(self) -> str:
        rules = ", ".join(f"{k}={v}" for k, v in sorted(self.hits.items())) or "none"
        cap = " (pass cap reached)" if self.pass_cap_hit else ""
        return (f"gates {self.gates_before} -> {self.gates_after} in {self.passes} passes; "
                f"rule hits: {rules}{cap}")


def can_interchange(g1: ToffoliGate, g2: ToffoliGate) -> bool:
    if g1.width != g2.width:
        raise ContractError("gates of different widths")
    return g1.target not in g2.controls and g2.target not in g1.controls


# -- useless gate pairs --------------------------------------------------------

def _find_useless_pair(gates: Sequence[ToffoliGate]):
    for i, g in enumerate(gates):
        for j in range(i + 1, len(gates)):
            h = gates[j]
            if h == g:
                return i, j
            if not can_interchange(g, h):
                break
    return None


def remove_useless(c: Circuit) -> Circuit:
    """Delete identical pairs G ... G whose intervening gates all commute with G."""
    gates = list(c.gates)
    while (pair := _find_useless_pair(gates)) is not None:
        i, j = pair
        del gates[j]
        del gates[i]
    return c.with_gates(gates)


# -- template matching ---------------------------------------------------------

def _extend_right(gates: list, lo: int, hi: int, q: int):
    """Make ``gates[q]`` adjacent to the block ``gates[lo:hi]`` by legal interchanges.

    Intervening gates move left past the block when they commute with all of
    it (and with any earlier gate already sent right); otherwise they must
    commute with ``gates[q]`` and move right past it. Returns the new list or
    None.
    """
    block = gates[lo:hi]
    new = gates[q]
    left, right = [], []
    for s in gates[hi:q]:
        if all(can_interchange(s, b) for b in block) and all(can_interchange(s, r) for r in right):
            left.append(s)
        elif can_interchange(s, new):
            right.append(s)
        else:
            return None
    return gates[:lo] + left + block + [new] + right + gates[q + 1:], lo + len(left)


def _grow(gates: list, lo: int, hi: int, todo: list, binding: Binding):
    """Yield every way of matching the tagged pattern gates in ``todo`` around the block."""
    if not todo:
        yield gates, lo, hi, binding
        return
    direction, sym = todo[0]
    n = len(gates)
    if direction == "right":
        for q in range(hi, n):
            bindings = list(unify(sym, gates[q], binding))
            if not bindings:
                continue
            moved = _extend_right(gates, lo, hi, q)
            if moved is None:
                continue
            new_gates, new_lo = moved
            for nb in bindings:
                yield from _grow(new_gates, new_lo, new_lo + (hi - lo) + 1, todo[1:], nb)
    else:
        rev = gates[::-1]
        for q in range(n - lo, n):
            bindings = list(unify(sym, rev[q], binding))
            if not bindings:
                continue
            moved = _extend_right(rev, n - hi, n - lo, q)
            if moved is None:
                continue
            new_rev, new_lo = moved
            new_hi = new_lo + (hi - lo) + 1
            for nb in bindings:
                yield from _grow(new_rev[::-1], n - new_hi, n - new_lo, todo[1:], nb)


def matches(gates: list, t: Template):
    """Yield ``(rearranged_gates, lo, binding)`` for each way to gather ``t.pattern`` into a block.

    The widest pattern gate is anchored first, scanning the circuit left to
    right; the other pattern gates are then sought to its right and left.
    """
    anchor = t.anchor()
    todo = [("right", g) for g in t.pattern[anchor + 1:]]
    todo += [("left", g) for g in reversed(t.pattern[:anchor])]
    for i, g in enumerate(gates):
        for b in unify(t.pattern[anchor], g, Binding()):
            for new_gates, lo, _, binding in _grow(gates, i, i + 1, todo, b):
                yield new_gates, lo, binding


def _rewrite(match, t: Template, width: int) -> list:
    new_gates, lo, binding = match
    repl = [instantiate(s, binding, width) for s in t.replacement]
    return new_gates[:lo] + repl + new_gates[lo + len(t.pattern):]


def _template_variants(ts: Sequence[Template]) -> list:
    out = []
    for t in ts:
        out.append(t)
        if not t.move:
            r = t.reversed()
            if r.pattern != t.pattern:
                out.append(r)
    return out


def _saturate(gates: list, rules: list, width: int, hits: Counter) -> list:
    """Apply shrinking rules until none matches (each hit removes a gate, so this ends)."""
    progress = True
    while progress:
        progress = False
        for t in rules:
            match = next(matches(gates, t), None)
            if match is not None:
                gates = _rewrite(match, t, width)
                hits[t.name.removesuffix("~r")] += 1
                progress = True
    return gates


def apply_templates(c: Circuit, ts: Optional[Sequence[Template]] = None,
                    max_passes: int = DEFAULT_PASSES):
    """Rewrite ``c`` with templates until nothing matches; returns ``(circuit, report)``.

    Shrinking templates are tried forward and with pattern and replacement
    reversed. A move template only runs forward, and a move is kept only
    when the shrinking templates then make the circuit shorter.
    """
    if ts is None:
        ts = builtin_templates()
    variants = _template_variants(ts)
    shrink = [t for t in variants if not t.move]
    moves = [t for t in variants if t.move]
    report = ReductionReport(gates_before=len(c))
    gates = list(c.gates)
    for _ in range(max_passes):
        report.passes += 1
        gates = _saturate(gates, shrink, c.width, report.hits)
        improved = False
        for t in moves:
            for match in matches(gates, t):
                trial_hits = Counter()
                trial = _saturate(_rewrite(match, t, c.width), shrink, c.width, trial_hits)
                if len(trial) < len(gates):
                    gates = trial
                    report.hits.update(trial_hits)
                    report.hits[t.name] += 1
                    improved = True
                    break
            if improved:
                break
        if not improved:
            break
    else:
        report.pass_cap_hit = True
        log.debug("template pass cap %d reached", max_passes)
    report.gates_after = len(gates)
    return c.with_gates(gates), report


# -- control reduction ---------------------------------------------------------

def _realizes(width: int, gates: Sequence[ToffoliGate], c: Circuit, spec: Permutation) -> bool:
    return simulate(Circuit(width, tuple(gates), c.order)) == spec


def reduce_controls(c: Circuit, spec: Permutation) -> Circuit:
    """Drop controls one at a time, then from identical gate pairs, while ``c`` still realizes ``spec``."""
    if simulate(c) != spec:
        raise ContractError("circuit does not realize the given specification")
    gates = list(c.gates)
    changed = True
    while changed:
        changed = False
        for i in range(len(gates)):
            for line in sorted(gates[i].controls):
                if line not in gates[i].controls:
                    continue
                trial = gates[:i] + [gates[i].without_control(line)] + gates[i + 1:]
                if _realizes(c.width, trial, c, spec):
                    gates = trial
                    changed = True
        for i in range(len(gates)):
            for j in range(i + 1, len(gates)):
                if gates[i] != gates[j]:
                    continue
                for line in sorted(gates[i].controls):
                    if gates[i] != gates[j] or line not in gates[i].controls:
                        continue
                    dropped = gates[i].without_control(line)
                    trial = list(gates)
                    trial[i] = trial[j] = dropped
                    if _realizes(c.width, trial, c, spec):
                        gates = trial
                        changed = True
    return c.with_gates(gates)


def reduce(c: Circuit, spec: Permutation, templates: Optional[Sequence[Template]] = None,
           max_passes: int = DEFAULT_PASSES):
    """Alternate pair removal, templates and control reduction until nothing changes."""
    if simulate(c) != spec:
        raise ContractError("circuit does not realize the given specification")
    if templates is None:
        templates = builtin_templates()
    report = ReductionReport(gates_before=len(c))
    for _ in range(max_passes):
        report.passes += 1
        before = c.gates
        shorter = remove_useless(c)
        report.hits["useless"] += (len(c) - len(shorter)) // 2
        c, sub = apply_templates(shorter, templates, max_passes)
        report.merge(sub)
        narrowed = reduce_controls(c, spec)
        report.hits["controls"] += c.num_controls - narrowed.num_controls
        c = narrowed
        if c.gates == before:
            break
    else:
        report.pass_cap_hit = True
    report.hits = Counter({k: v for k, v in report.hits.items() if v})
    report.gates_after = len(c)
    return c, report
