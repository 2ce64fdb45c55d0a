"""Symbolic gate templates and their registration-time verification.

A template line is a variable bound injectively to a real circuit line. A
control polarity is fixed (``+`` / ``-``) or a polarity variable (``p``),
possibly negated (``~p``). A gate may also carry the shared context set
``C``: an arbitrary set of polarized controls on lines not bound to any
variable, the same set wherever it appears in the template.
"""

from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass
from typing import Iterator, Optional

from .core import Circuit, ParseError, ToffoliGate, simulate


class TemplateError(ValueError):
    """A template failed registration (malformed or not function-preserving)."""


@dataclass(frozen=True)
class SymControl:
    line: str
    polarity: str = "+"  # "+", "-", "p" or "~p"


@dataclass(frozen=True)
class SymGate:
    target: str
    controls: tuple = ()
    context: bool = False

    def width_rank(self) -> int:
        return len(self.controls) + (1 if self.context else 0)

    def line_vars(self) -> set:
        return {self.target} | {c.line for c in self.controls}

    def pol_vars(self) -> set:
        return {c.polarity.lstrip("~") for c in self.controls if c.polarity not in "+-"}


@dataclass(frozen=True)
class Binding:
    lines: tuple = ()          # sorted (var, line) pairs
    pols: tuple = ()           # sorted (var, bool) pairs, True = positive
    ctx: Optional[frozenset] = None  # frozenset of (line, positive?) pairs

    def line(self, var: str) -> Optional[int]:
        return dict(self.lines).get(var)

    def pol(self, var: str) -> Optional[bool]:
        return dict(self.pols).get(var)

    def bound_lines(self) -> set:
        return {line for _, line in self.lines}

    def with_line(self, var: str, line: int) -> "Binding":
        return Binding(tuple(sorted(self.lines + ((var, line),))), self.pols, self.ctx)

    def with_pol(self, var: str, value: bool) -> "Binding":
        return Binding(self.lines, tuple(sorted(self.pols + ((var, value),))), self.ctx)

    def with_ctx(self, ctx: frozenset) -> "Binding":
        return Binding(self.lines, self.pols, ctx)


def _resolve_polarity(pol: str, b: Binding) -> Optional[bool]:
    if pol == "+":
        return True
    if pol == "-":
        return False
    value = b.pol(pol.lstrip("~"))
    if value is None:
        return None
    return (not value) if pol.startswith("~") else value


def _bind_polarity(pol: str, positive: bool, b: Binding) -> Optional[Binding]:
    want = _resolve_polarity(pol, b)
    if want is not None:
        return b if want == positive else None
    var = pol.lstrip("~")
    return b.with_pol(var, (not positive) if pol.startswith("~") else positive)


def unify(sym: SymGate, gate: ToffoliGate, b: Binding) -> Iterator[Binding]:
    """All extensions of ``b`` under which ``sym`` instantiates to ``gate``."""
    t = b.line(sym.target)
    if t is None:
        if gate.target in b.bound_lines() or (b.ctx and gate.target in {l for l, _ in b.ctx}):
            return
        b = b.with_line(sym.target, gate.target)
    elif t != gate.target:
        return
    concrete = {line: True for line in gate.pos_controls}
    concrete.update({line: False for line in gate.neg_controls})
    yield from _unify_controls(sym, list(sym.controls), concrete, set(), b)


def _unify_controls(sym, todo, concrete, used, b) -> Iterator[Binding]:
    if not todo:
        rest = frozenset((line, pos) for line, pos in concrete.items() if line not in used)
        if not sym.context:
            if not rest:
                yield b
            return
        if b.ctx is None:
            if {line for line, _ in rest} & b.bound_lines():
                return
            yield b.with_ctx(rest)
        elif b.ctx == rest:
            yield b
        return
    ctrl, remaining = todo[0], todo[1:]
    line = b.line(ctrl.line)
    if line is not None:
        options = [line] if line in concrete and line not in used else []
        rebind = False
    else:
        taken = b.bound_lines()
        ctx_lines = {l for l, _ in b.ctx} if b.ctx else set()
        options = [l for l in sorted(concrete) if l not in used and l not in taken and l not in ctx_lines]
        rebind = True
    for line in options:
        nb = b.with_line(ctrl.line, line) if rebind else b
        nb = _bind_polarity(ctrl.polarity, concrete[line], nb)
        if nb is None:
            continue
        yield from _unify_controls(sym, remaining, concrete, used | {line}, nb)


def instantiate(sym: SymGate, b: Binding, width: int) -> ToffoliGate:
    pos, neg = set(), set()
    for ctrl in sym.controls:
        (pos if _resolve_polarity(ctrl.polarity, b) else neg).add(b.line(ctrl.line))
    if sym.context:
        for line, positive in b.ctx or ():
            (pos if positive else neg).add(line)
    return ToffoliGate(width, b.line(sym.target), frozenset(pos), frozenset(neg))


@dataclass(frozen=True)
class Template:
    """A pattern that may be replaced by a shorter, function-equal sequence.

    ``move`` marks equal-length rules (gate moves) that exist to expose
    other matches; they are only applied in the forward direction.
    """

    name: str
    pattern: tuple
    replacement: tuple
    move: bool = False

    def line_vars(self) -> list:
        seen: dict = {}
        for g in self.pattern:
            seen.setdefault(g.target, None)
            for c in g.controls:
                seen.setdefault(c.line, None)
        return list(seen)

    def pol_vars(self) -> list:
        return sorted(set().union(*(g.pol_vars() for g in self.pattern)))

    def uses_context(self) -> bool:
        return any(g.context for g in self.pattern + self.replacement)

    def reversed(self) -> "Template":
        return Template(self.name + "~r", self.pattern[::-1], self.replacement[::-1], self.move)

    def anchor(self) -> int:
        """Index of the widest pattern gate (first on ties)."""
        ranks = [g.width_rank() for g in self.pattern]
        return ranks.index(max(ranks))


def all_bindings(t: Template, width: int) -> Iterator[Binding]:
    """Every binding of the template's variables onto ``width`` lines."""
    line_vars = t.line_vars()
    pol_vars = t.pol_vars()
    for lines in itertools.permutations(range(width), len(line_vars)):
        free = [l for l in range(width) if l not in lines]
        ctx_options = [None]
        if t.uses_context():
            ctx_options = [
                frozenset((l, s == 1) for l, s in zip(free, states) if s)
                for states in itertools.product((0, 1, 2), repeat=len(free))
            ]
        for pols in itertools.product((True, False), repeat=len(pol_vars)):
            for ctx in ctx_options:
                yield Binding(tuple(sorted(zip(line_vars, lines))),
                              tuple(sorted(zip(pol_vars, pols))), ctx)


def verify_template(t: Template, max_width: int = 4) -> int:
    """Check ``t`` under every binding up to ``max_width`` lines; returns the count checked."""
    if not t.pattern:
        raise TemplateError(f"{t.name}: empty pattern")
    if len(t.replacement) > len(t.pattern) or (len(t.replacement) == len(t.pattern) and not t.move):
        raise TemplateError(f"{t.name}: replacement must be shorter than the pattern")
    pat_lines = set(t.line_vars())
    pat_pols = set(t.pol_vars())
    for g in t.replacement:
        if not g.line_vars() <= pat_lines or not g.pol_vars() <= pat_pols:
            raise TemplateError(f"{t.name}: replacement uses variables absent from the pattern")
    if any(g.context for g in t.replacement) and not any(g.context for g in t.pattern):
        raise TemplateError(f"{t.name}: replacement uses C but the pattern does not")
    for g in t.pattern + t.replacement:
        if g.target in {c.line for c in g.controls} or len({c.line for c in g.controls}) != len(g.controls):
            raise TemplateError(f"{t.name}: a symbolic gate repeats a line")

    checked = 0
    for n in range(max(len(pat_lines), 1), max_width + 1):
        for b in all_bindings(t, n):
            lhs = Circuit(n, [instantiate(g, b, n) for g in t.pattern])
            rhs = Circuit(n, [instantiate(g, b, n) for g in t.replacement])
            if simulate(lhs) != simulate(rhs):
                raise TemplateError(f"{t.name}: not function-preserving, e.g. {lhs} vs {rhs}")
            checked += 1
    if checked == 0:
        raise TemplateError(f"{t.name}: needs more than {max_width} lines to verify")
    return checked


def register(t: Template, registry: Optional[list] = None) -> Template:
    """Verify ``t`` and append it to ``registry``; unsound templates raise TemplateError."""
    verify_template(t)
    if registry is not None:
        registry.append(t)
    return t


def _g(target, *controls, context=False) -> SymGate:
    return SymGate(target, tuple(SymControl(*c) for c in controls), context)


def builtin_templates() -> list:
    """The built-in rule set, each rule verified on first use."""
    return list(_builtin())


@functools.lru_cache(maxsize=None)
def _builtin() -> tuple:
    ts: list = []
    # T0: two identical gates cancel
    register(Template("T0", (_g("t", context=True), _g("t", context=True)), ()), ts)
    # T1: x and x' halves of the same gate merge
    register(Template("T1", (_g("t", ("x", "+"), context=True), _g("t", ("x", "-"), context=True)),
                      (_g("t", context=True),)), ts)
    # T4: NOT on both lines after a CNOT
    register(Template("T4", (_g("x", ("y", "p")), _g("y"), _g("x")),
                      (_g("y"), _g("x", ("y", "p")))), ts)
    # T3: C&x xor C == C&~x
    register(Template("T3", (_g("t", ("x", "p"), context=True), _g("t", context=True)),
                      (_g("t", ("x", "~p"), context=True),)), ts)
    # T2: push a NOT rightwards through a gate it controls, flipping that control
    register(Template("T2", (_g("x"), _g("t", ("x", "p"), context=True)),
                      (_g("t", ("x", "~p"), context=True), _g("x")), move=True), ts)
    return tuple(ts)


# -- template file format ----------------------------------------------------

_SYM_CTRL = re.compile(r"\s*(C|v\d)(?:(')|\^(~?[a-z]))?\s*$")


def _parse_sym_gate(text: str, lineno: int) -> SymGate:
    m = re.fullmatch(r"\s*TOF\s*\((.*);\s*(v\d)\s*\)\s*", text)
    if not m:
        raise ParseError(f"malformed symbolic gate {text!r}", line=lineno)
    controls, context = [], False
    body = m.group(1).strip()
    for item in body.split(",") if body else []:
        cm = _SYM_CTRL.match(item)
        if not cm:
            raise ParseError(f"malformed symbolic control {item.strip()!r}", line=lineno)
        if cm.group(1) == "C":
            context = True
            continue
        pol = "-" if cm.group(2) else (cm.group(3) or "+")
        controls.append(SymControl(cm.group(1), pol))
    return SymGate(m.group(2), tuple(controls), context)


def parse_templates(text: str) -> list:
    """Parse ``pattern => replacement`` lines over variables ``v0..v9``.

    Controls are ``vK`` (positive), ``vK'`` (negative), ``vK^p`` / ``vK^~p``
    (polarity variable, possibly negated) or ``C`` (context set). An empty
    replacement is written ``=> -``. Each template is verified before it is
    returned.
    """
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=>" not in line:
            raise ParseError("expected 'pattern => replacement'", line=lineno)
        lhs, rhs = line.split("=>", 1)
        gates = [re.findall(r"TOF\s*\([^)]*\)", side) for side in (lhs, rhs)]
        if not gates[0]:
            raise ParseError("empty pattern", line=lineno)
        if not gates[1] and rhs.strip() != "-":
            raise ParseError("empty replacement must be written '-'", line=lineno)
        pattern = tuple(_parse_sym_gate(g, lineno) for g in gates[0])
        replacement = tuple(_parse_sym_gate(g, lineno) for g in gates[1])
        move = len(pattern) == len(replacement)
        out.append(register(Template(f"file:{lineno}", pattern, replacement, move)))
    return out
