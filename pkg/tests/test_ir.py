"""Parser, printer, model, and validator tests."""

from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uiminer.errors import DuplicateMethodError, IrSyntaxError, UnknownTypeError
from uiminer.ir.loader import load_prelude
from uiminer.ir.model import (
    Assign,
    ConstInt,
    Goto,
    If,
    Label,
    Return,
    Switch,
    method_cfg,
)
from uiminer.ir.parser import parse_program, print_program
from uiminer.ir.validate import validate_program

RICH = """
framework class android.content.Context extends java.lang.Object {
  method java.lang.String getString(int resId);
}
class com.fix.Base extends java.lang.Object {
  field int counter;
  field final java.lang.String tag = "base";
  method java.lang.String name() {
    s = const "Base"
    return s
  }
}
class com.fix.Child extends com.fix.Base implements java.lang.Runnable {
  method void run() {
    x = const 3
    y = const -7
    label LOOP
    if x <= y goto DONE
    x = const 2
    goto LOOP
    label DONE
    n = invoke virtual com.fix.Child.name(this)
    this.counter = 5
    c = this.counter
    o = new com.fix.Base
    invoke special com.fix.Base.init(o)
    b = (com.fix.Base) o
    r = res:string/app_name
    switch c { case 1: LOOP; case 2: DONE; default: DONE; }
    return
  }
  method java.lang.String name() {
    s = const "Child \\"quoted\\" \\\\ tail"
    return s
  }
}
framework class java.lang.Runnable extends java.lang.Object {
  method void run();
}
framework class java.lang.String extends java.lang.Object {
}
framework class java.lang.Object extends java.lang.Object {
  method void init();
}
"""


def parse(text: str):
    return parse_program(text)


# ----------------------------------------------------------------- parsing


class TestParsing:
    def test_round_trip_is_canonical(self):
        program = parse(RICH)
        once = print_program(program)
        twice = print_program(parse_program(once))
        assert once == twice

    def test_statement_uids_are_program_wide_unique(self):
        program = parse(RICH)
        uids = [s.uid for m in program.methods() for s in m.body]
        assert len(uids) == len(set(uids))
        assert sorted(uids) == list(range(min(uids), max(uids) + 1))

    def test_override_and_super_resolution(self):
        program = parse(RICH)
        child = program.resolve_method("com.fix.Child", "name", 0)
        assert child.class_name == "com.fix.Child"
        base_only = program.resolve_method("com.fix.Child", "init", 0)
        assert base_only.class_name == "java.lang.Object"

    def test_field_declarations(self):
        program = parse(RICH)
        base = program.classes["com.fix.Base"]
        assert base.fields["counter"].final is False
        tag = base.fields["tag"]
        assert tag.final and str(tag.init) == '"base"'

    def test_object_redeclaration_merges_into_root(self):
        program = parse(RICH)
        root = program.classes["java.lang.Object"]
        assert root.super_name is None
        assert ("init", 0) in root.methods
        assert program.supertypes("java.lang.Object") == []

    def test_interfaces_recorded(self):
        program = parse(RICH)
        child = program.classes["com.fix.Child"]
        assert child.interfaces == ("java.lang.Runnable",)
        assert program.is_subtype("com.fix.Child", "java.lang.Runnable")

    def test_string_escapes_round_trip(self):
        program = parse(RICH)
        name = program.classes["com.fix.Child"].methods[("name", 0)]
        const = name.body[0].rhs
        assert const.value == 'Child "quoted" \\ tail'

    def test_same_name_different_arity_allowed(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m() {\n"
            "    return\n"
            "  }\n"
            "  method void m(int x) {\n"
            "    return\n"
            "  }\n"
            "}\n"
        )
        program = parse(text)
        keys = set(program.classes["com.fix.A"].methods)
        assert keys == {("m", 0), ("m", 1)}

    def test_stub_methods_have_no_body(self):
        program = parse(RICH)
        stub = program.classes["java.lang.Runnable"].methods[("run", 0)]
        assert stub.is_stub and stub.body == []

    def test_parse_into_existing_program_appends(self):
        base = load_prelude()
        before = len(base.classes)
        program = parse_program(
            "class com.fix.App extends android.app.Activity {\n}\n", program=base
        )
        assert program is base
        assert len(program.classes) == before + 1


class TestParseErrors:
    def test_unknown_character(self):
        with pytest.raises(IrSyntaxError, match="line 1"):
            parse("class com.fix.A @ java.lang.Object {")

    def test_missing_rhs(self):
        text = "class com.fix.A extends java.lang.Object {\n method void m() {\n x =\n }\n}\n"
        with pytest.raises(IrSyntaxError, match="line 3"):
            parse(text)

    def test_branch_to_undefined_label(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m() {\n"
            "    goto NOWHERE\n"
            "  }\n"
            "}\n"
        )
        with pytest.raises(IrSyntaxError, match="NOWHERE"):
            parse(text)

    def test_duplicate_case_keys(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m(int x) {\n"
            "    label L\n"
            "    switch x { case 1: L; case 1: L; }\n"
            "  }\n"
            "}\n"
        )
        with pytest.raises(IrSyntaxError, match="duplicate case"):
            parse(text)

    def test_assignment_relation_is_not_a_comparison(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m(int x, int y) {\n"
            "    label L\n"
            "    if x = y goto L\n"
            "  }\n"
            "}\n"
        )
        with pytest.raises(IrSyntaxError, match="relation"):
            parse(text)

    def test_initializer_on_non_final_field(self):
        text = 'class com.fix.A extends java.lang.Object {\n  field int x = 3;\n}\n'
        with pytest.raises(IrSyntaxError, match="final"):
            parse(text)

    def test_final_initializer_must_be_literal(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  field final int x = other;\n"
            "}\n"
        )
        with pytest.raises(IrSyntaxError, match="literal"):
            parse(text)

    def test_unclosed_block_at_eof(self):
        with pytest.raises(IrSyntaxError, match="end of input"):
            parse("class com.fix.A extends java.lang.Object {\n  method void m() {\n")

    def test_duplicate_method_same_arity(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m(int x) {\n"
            "    return\n"
            "  }\n"
            "  method void m(java.lang.String s) {\n"
            "    return\n"
            "  }\n"
            "}\n"
        )
        with pytest.raises(DuplicateMethodError):
            parse(text)

    def test_duplicate_class(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n}\n"
            "class com.fix.A extends java.lang.Object {\n}\n"
        )
        with pytest.raises(IrSyntaxError, match="declared twice"):
            parse(text)

    def test_undefined_type_rejected(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m() {\n"
            "    x = new com.fix.Ghost\n"
            "    return\n"
            "  }\n"
            "}\n"
        )
        with pytest.raises(UnknownTypeError, match="com.fix.Ghost"):
            parse(text)
        program = parse_program(text, check_types=False)
        assert "com.fix.Ghost" in program.undefined_types()

    def test_keywords_are_not_operands(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m() {\n"
            "    return return\n"
            "  }\n"
            "}\n"
        )
        with pytest.raises(IrSyntaxError, match="reserved"):
            parse(text)

    def test_trailing_tokens_rejected(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m() {\n"
            "    goto L goto L\n"
            "    label L\n"
            "  }\n"
            "}\n"
        )
        with pytest.raises(IrSyntaxError, match="trailing"):
            parse(text)


# ---------------------------------------------------- generated round trips

_NAME = st.from_regex(r"[a-z][a-z0-9_]{0,6}", fullmatch=True)
_TEXTS = st.text(
    st.characters(min_codepoint=32, max_codepoint=126), max_size=12
)


@st.composite
def _method_body(draw) -> list[str]:
    statements = []
    count = draw(st.integers(min_value=1, max_value=8))
    for i in range(count):
        form = draw(st.integers(min_value=0, max_value=4))
        if form == 0:
            statements.append(f"v{i} = const {draw(st.integers(-10**6, 10**6))}")
        elif form == 1:
            raw = draw(_TEXTS)
            quoted = raw.replace("\\", "\\\\").replace('"', '\\"')
            statements.append(f'v{i} = const "{quoted}"')
        elif form == 2:
            statements.append(f"v{i} = new com.fix.Thing")
        elif form == 3:
            statements.append(f"v{i} = res:id/{draw(_NAME)}")
        else:
            statements.append(f"v{i} = const null")
    statements.append("return")
    return statements


@given(_method_body())
@settings(max_examples=120, deadline=None)
def test_generated_bodies_round_trip(body):
    text = (
        "class com.fix.Thing extends java.lang.Object {\n"
        "  method void m() {\n"
        + "".join(f"    {line}\n" for line in body)
        + "  }\n}\n"
    )
    once = print_program(parse_program(text))
    twice = print_program(parse_program(once))
    assert once == twice
    reparsed = parse_program(once).classes["com.fix.Thing"].methods[("m", 0)]
    assert len(reparsed.body) == len(body)


# --------------------------------------------------------------------- CFG


class TestCfg:
    def _method(self, lines: str):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m(int x) {\n"
            + "".join(f"    {line}\n" for line in lines.strip().splitlines())
            + "  }\n}\n"
        )
        return parse(text).classes["com.fix.A"].methods[("m", 1)]

    def test_if_has_fallthrough_and_target(self):
        method = self._method("if x == 0 goto L\nreturn\nlabel L\nreturn")
        assert method_cfg(method)[0] == [1, 2]

    def test_goto_single_successor(self):
        method = self._method("label L\ngoto L")
        assert method_cfg(method) == [[1], [0]]

    def test_return_terminates(self):
        method = self._method("return\nlabel L\nreturn")
        assert method_cfg(method)[0] == []

    def test_switch_successors(self):
        method = self._method(
            "label A\nswitch x { case 1: A; case 2: B; }\nlabel B\nreturn"
        )
        assert method_cfg(method)[1] == [0, 2]
        with_default = self._method(
            "label A\nswitch x { case 1: A; default: B; }\nlabel B\nreturn"
        )
        assert method_cfg(with_default)[1] == [0, 2]


# --------------------------------------------------------------- validator


def _validate(text: str):
    return validate_program(parse_program(text, check_types=False))


class TestValidator:
    def test_clean_method_has_no_diagnostics(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method int m(int x) {\n"
            "    y = const 1\n"
            "    return y\n"
            "  }\n}\n"
        )
        assert _validate(text) == []

    def test_use_before_def(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m(int x) {\n"
            "    label L\n"
            "    if x == 0 goto E\n"
            "    y = const 1\n"
            "    goto L\n"
            "    label E\n"
            "    z = (int) y\n"
            "    return\n"
            "  }\n}\n"
        )
        codes = [d.code for d in _validate(text)]
        assert "use-before-def" in codes

    def test_defined_on_all_paths_is_clean(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m(int x) {\n"
            "    if x == 0 goto A\n"
            "    y = const 1\n"
            "    goto B\n"
            "    label A\n"
            "    y = const 2\n"
            "    label B\n"
            "    z = (int) y\n"
            "    return\n"
            "  }\n}\n"
        )
        assert [d for d in _validate(text) if d.code == "use-before-def"] == []

    def test_unreachable_statement(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m() {\n"
            "    return\n"
            "    x = const 1\n"
            "  }\n}\n"
        )
        diags = _validate(text)
        assert [d.code for d in diags] == ["unreachable"]

    def test_missing_return_on_value_method(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method int m(int x) {\n"
            "    label L\n"
            "    if x == 0 goto L\n"
            "  }\n}\n"
        )
        codes = [d.code for d in _validate(text)]
        assert "missing-return" in codes

    def test_void_return_value_flagged(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m(int x) {\n"
            "    return x\n"
            "  }\n}\n"
        )
        codes = [d.code for d in _validate(text)]
        assert codes == ["void-return-value"]

    def test_suspicious_cast(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n}\n"
            "class com.fix.B extends java.lang.Object {\n"
            "  method void m() {\n"
            "    a = new com.fix.A\n"
            "    b = (com.fix.B) a\n"
            "    return\n"
            "  }\n}\n"
        )
        codes = [d.code for d in _validate(text)]
        assert codes == ["suspicious-cast"]

    def test_up_and_down_casts_are_fine(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n}\n"
            "class com.fix.B extends com.fix.A {\n"
            "  method void m() {\n"
            "    b = new com.fix.B\n"
            "    a = (com.fix.A) b\n"
            "    c = (com.fix.B) a\n"
            "    return\n"
            "  }\n}\n"
        )
        assert [d for d in _validate(text) if d.code == "suspicious-cast"] == []

    def test_unknown_callee(self):
        text = (
            "class com.fix.A extends java.lang.Object {\n"
            "  method void m() {\n"
            "    invoke virtual com.fix.A.ghost(this)\n"
            "    return\n"
            "  }\n}\n"
        )
        codes = [d.code for d in _validate(text)]
        assert codes == ["unknown-callee"]
