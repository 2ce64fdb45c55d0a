import pytest

from revswap.core import ParseError, ToffoliGate
from revswap.templates import (
    Binding,
    SymControl,
    SymGate,
    Template,
    TemplateError,
    builtin_templates,
    instantiate,
    parse_templates,
    register,
    unify,
    verify_template,
)


def test_builtin_set_contains_baseline_rules():
    names = {t.name for t in builtin_templates()}
    assert {"T0", "T1", "T2", "T4"} <= names


@pytest.mark.parametrize("t", builtin_templates(), ids=lambda t: t.name)
def test_builtin_rules_verify_up_to_four_lines(t):
    assert verify_template(t, max_width=4) > 0


def test_unsound_template_rejected():
    bad = Template("bad", (SymGate("x", (SymControl("y"),)), SymGate("y", (SymControl("x"),))), ())
    with pytest.raises(TemplateError, match="not function-preserving"):
        register(bad)


def test_longer_replacement_rejected():
    g = SymGate("x")
    with pytest.raises(TemplateError, match="shorter"):
        register(Template("grow", (g, g), (g, g, g, g)))


def test_unknown_variable_in_replacement_rejected():
    with pytest.raises(TemplateError, match="variables"):
        register(Template("ghost", (SymGate("x"), SymGate("x")), (SymGate("z"),)))


def test_unify_binds_context_and_polarity():
    sym = SymGate("t", (SymControl("x", "p"),), context=True)
    gate = ToffoliGate(4, 0, frozenset({1}), frozenset({3}))
    bindings = list(unify(sym, gate, Binding()))
    # x may be line 1 (p positive, C = {3-}) or line 3 (p negative, C = {1+})
    assert len(bindings) == 2
    for b in bindings:
        assert instantiate(sym, b, 4) == gate


def test_unify_respects_existing_binding():
    sym = SymGate("t", (SymControl("x", "+"),))
    b = Binding().with_line("x", 2)
    assert list(unify(sym, ToffoliGate(3, 0, frozenset({1})), b)) == []


def test_template_file_round_trip():
    text = """
    # duplicate deletion and a NOT-swap rule
    TOF(C;v0) TOF(C;v0) => -
    TOF(v1^p;v0) TOF(;v1) TOF(;v0) => TOF(;v1) TOF(v1^p;v0)
    TOF(C,v1;v0) TOF(C,v1';v0) => TOF(C;v0)
    """
    ts = parse_templates(text)
    assert [len(t.pattern) for t in ts] == [2, 3, 2]
    assert [len(t.replacement) for t in ts] == [0, 2, 1]


def test_template_file_rejects_unsound_rule():
    with pytest.raises(TemplateError):
        parse_templates("TOF(v1;v0) TOF(v0;v1) => -\n")


@pytest.mark.parametrize("text", [
    "TOF(v1;v0)\n",
    "TOF(v1;v0) TOF(v1;v0) =>\n",
    "TOF(x1;v0) TOF(x1;v0) => -\n",
])
def test_template_file_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_templates(text)
