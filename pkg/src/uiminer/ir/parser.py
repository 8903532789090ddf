"""Parser and printer for the textual program representation.

The format is line-oriented: one declaration or statement per line,
`//` comments, UTF-8. Headers end with an opening brace on the same
line, `}` closes a block on its own line, field and stub lines end with
a semicolon. Statement forms:

    x = new T                    x = invoke virtual C.m(recv, arg)
    x = const 42 | "s" | null    invoke static C.m(arg)
    x = res:layout/sample        if x == y goto L
    x = (T) y                    switch x { case 1: A; default: B; }
    x = y.f                      goto L / label L
    y.f = x                      return / return x

parse_program and print_program are inverses up to formatting:
parsing the printed form yields a structurally identical program.
"""

from __future__ import annotations

import re

from ..errors import DuplicateMethodError, IrSyntaxError, UnknownTypeError
from .model import (
    INVOKE_KINDS,
    RELATIONS,
    Assign,
    Cast,
    ClassDef,
    ConstInt,
    ConstNull,
    ConstString,
    FieldDecl,
    FieldLoad,
    FieldStore,
    Goto,
    If,
    IntConst,
    InvokeExpr,
    InvokeStmt,
    Label,
    MethodDef,
    NewObject,
    NullConst,
    Operand,
    Program,
    ResConst,
    ResIdConst,
    ResourceRef,
    Return,
    StrConst,
    Statement,
    Switch,
    Var,
)

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>//.*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<res>res:[A-Za-z_][A-Za-z0-9_]*/[A-Za-z_$][A-Za-z0-9_$.]*)
  | (?P<int>-?\d+)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$.]*)
  | (?P<op>==|!=|<=|>=|<|>|=)
  | (?P<punct>[(){},;:])
    """,
    re.VERBOSE,
)


def _tokenize(text: str, line_number: int) -> list[tuple[str, str]]:
    tokens: list[tuple[str, str]] = []
    position = 0
    while position < len(text):
        match = _TOKEN_RE.match(text, position)
        if match is None:
            raise IrSyntaxError(f"unexpected character {text[position]!r}", line_number)
        position = match.end()
        kind = match.lastgroup
        if kind in ("ws", "comment"):
            continue
        tokens.append((kind, match.group()))
    return tokens


def _unquote(raw: str) -> str:
    body = raw[1:-1]
    return body.replace('\\"', '"').replace("\\\\", "\\")


def _parse_res(raw: str) -> ResourceRef:
    type_name, name = raw[4:].split("/", 1)
    return ResourceRef(type_name, name)


class _Cursor:
    """Token list with look-ahead and error positions."""

    def __init__(self, tokens: list[tuple[str, str]], line: int):
        self.tokens = tokens
        self.line = line
        self.i = 0

    def peek(self) -> tuple[str, str] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> tuple[str, str]:
        token = self.peek()
        if token is None:
            raise IrSyntaxError("unexpected end of line", self.line)
        self.i += 1
        return token

    def expect(self, value: str) -> None:
        kind, text = self.next()
        if text != value:
            raise IrSyntaxError(f"expected {value!r}, found {text!r}", self.line)

    def expect_kind(self, kind: str) -> str:
        got_kind, text = self.next()
        if got_kind != kind:
            raise IrSyntaxError(f"expected {kind}, found {text!r}", self.line)
        return text

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def require_end(self) -> None:
        if not self.at_end():
            raise IrSyntaxError(f"trailing tokens from {self.tokens[self.i][1]!r}", self.line)


# words with statement or declaration meaning; not usable as simple names
KEYWORDS = frozenset(
    "class extends implements framework field method static final new const "
    "invoke virtual special interface goto label return if switch case "
    "default null".split()
)


def _simple_name(name: str, cursor: _Cursor, what: str) -> str:
    if "." in name:
        raise IrSyntaxError(f"{what} {name!r} must not contain dots", cursor.line)
    if name in KEYWORDS:
        raise IrSyntaxError(f"{what} {name!r} is a reserved word", cursor.line)
    return name


def _operand(cursor: _Cursor) -> Operand:
    kind, text = cursor.next()
    if kind == "int":
        return IntConst(int(text))
    if kind == "string":
        return StrConst(_unquote(text))
    if kind == "res":
        return ResConst(_parse_res(text))
    if kind == "ident":
        if text == "null":
            return NullConst()
        if "." in text:
            raise IrSyntaxError(f"operand {text!r} must be a local or literal", cursor.line)
        if text in KEYWORDS:
            raise IrSyntaxError(f"operand {text!r} is a reserved word", cursor.line)
        return Var(text)
    raise IrSyntaxError(f"expected operand, found {text!r}", cursor.line)


def _invoke_expr(cursor: _Cursor) -> InvokeExpr:
    kind = cursor.expect_kind("ident")
    if kind not in INVOKE_KINDS:
        raise IrSyntaxError(f"unknown invoke kind {kind!r}", cursor.line)
    target = cursor.expect_kind("ident")
    if "." not in target:
        raise IrSyntaxError(f"invoke target {target!r} needs Class.method", cursor.line)
    class_name, method_name = target.rsplit(".", 1)
    cursor.expect("(")
    args: list[Operand] = []
    token = cursor.peek()
    if token is not None and token[1] != ")":
        args.append(_operand(cursor))
        while cursor.peek() is not None and cursor.peek()[1] == ",":
            cursor.next()
            args.append(_operand(cursor))
    cursor.expect(")")
    if kind != "static" and not args:
        raise IrSyntaxError("non-static invoke needs a receiver argument", cursor.line)
    return InvokeExpr(kind=kind, class_name=class_name, method_name=method_name, args=tuple(args))


def _statement(cursor: _Cursor) -> Statement:
    kind, text = cursor.next()
    line = cursor.line

    if text == "label":
        name = cursor.expect_kind("ident")
        cursor.require_end()
        return Label(line=line, name=name)

    if text == "goto":
        target = cursor.expect_kind("ident")
        cursor.require_end()
        return Goto(line=line, target=target)

    if text == "return":
        if cursor.at_end():
            return Return(line=line, value=None)
        value = _operand(cursor)
        cursor.require_end()
        return Return(line=line, value=value)

    if text == "if":
        left = _operand(cursor)
        op = cursor.next()[1]
        if op not in RELATIONS:
            raise IrSyntaxError(f"unknown relation {op!r}", line)
        right = _operand(cursor)
        cursor.expect("goto")
        target = cursor.expect_kind("ident")
        cursor.require_end()
        return If(line=line, left=left, op=op, right=right, target=target)

    if text == "switch":
        var = _simple_name(cursor.expect_kind("ident"), cursor, "switch operand")
        cursor.expect("{")
        cases: list[tuple[Operand, str]] = []
        default: str | None = None
        seen_keys: set[object] = set()
        while True:
            token = cursor.next()
            if token[1] == "}":
                break
            if token[1] == "case":
                key = _operand(cursor)
                if not isinstance(key, (IntConst, ResConst)):
                    raise IrSyntaxError("case keys must be int or resource literals", line)
                cursor.expect(":")
                target = cursor.expect_kind("ident")
                cursor.expect(";")
                if key in seen_keys:
                    raise IrSyntaxError(f"duplicate case key {key}", line)
                seen_keys.add(key)
                cases.append((key, target))
            elif token[1] == "default":
                cursor.expect(":")
                default = cursor.expect_kind("ident")
                cursor.expect(";")
            else:
                raise IrSyntaxError(f"expected case/default/}}, found {token[1]!r}", line)
        cursor.require_end()
        return Switch(line=line, var=var, cases=tuple(cases), default=default)

    if text == "invoke":
        invoke = _invoke_expr(cursor)
        cursor.require_end()
        return InvokeStmt(line=line, invoke=invoke)

    if kind != "ident":
        raise IrSyntaxError(f"cannot start a statement with {text!r}", line)

    # assignment or field store
    if "." in text:
        parts = text.split(".")
        if len(parts) != 2 or any(p in KEYWORDS for p in parts):
            raise IrSyntaxError(f"field access {text!r} must be local.field", line)
        cursor.expect("=")
        value = _operand(cursor)
        cursor.require_end()
        return FieldStore(line=line, obj=parts[0], field_name=parts[1], value=value)

    if text in KEYWORDS:
        raise IrSyntaxError(f"{text!r} is a reserved word", line)
    lhs = text
    cursor.expect("=")
    token = cursor.peek()
    if token is None:
        raise IrSyntaxError("assignment without right-hand side", line)

    if token[1] == "new":
        cursor.next()
        type_name = cursor.expect_kind("ident")
        cursor.require_end()
        return Assign(line=line, lhs=lhs, rhs=NewObject(type_name))

    if token[1] == "const":
        cursor.next()
        value_kind, value_text = cursor.next()
        cursor.require_end()
        if value_kind == "int":
            return Assign(line=line, lhs=lhs, rhs=ConstInt(int(value_text)))
        if value_kind == "string":
            return Assign(line=line, lhs=lhs, rhs=ConstString(_unquote(value_text)))
        if value_text == "null":
            return Assign(line=line, lhs=lhs, rhs=ConstNull())
        raise IrSyntaxError(f"bad constant {value_text!r}", line)

    if token[0] == "res":
        cursor.next()
        cursor.require_end()
        return Assign(line=line, lhs=lhs, rhs=ResIdConst(_parse_res(token[1])))

    if token[1] == "(":
        cursor.next()
        type_name = cursor.expect_kind("ident")
        cursor.expect(")")
        source = _simple_name(cursor.expect_kind("ident"), cursor, "cast operand")
        cursor.require_end()
        return Assign(line=line, lhs=lhs, rhs=Cast(type_name, source))

    if token[1] == "invoke":
        cursor.next()
        invoke = _invoke_expr(cursor)
        cursor.require_end()
        return Assign(line=line, lhs=lhs, rhs=invoke)

    if token[0] == "ident" and "." in token[1]:
        cursor.next()
        parts = token[1].split(".")
        if len(parts) != 2:
            raise IrSyntaxError(f"field access {token[1]!r} must be local.field", line)
        cursor.require_end()
        return Assign(line=line, lhs=lhs, rhs=FieldLoad(parts[0], parts[1]))

    raise IrSyntaxError(
        f"cannot parse right-hand side starting at {token[1]!r} "
        "(plain copies are spelled as casts)",
        line,
    )


# ------------------------------------------------------------------ parsing


def parse_program(
    text: str, program: Program | None = None, check_types: bool = True
) -> Program:
    """Parse program text, appending to `program` when given."""
    program = program or Program()

    current_class: ClassDef | None = None
    current_method: MethodDef | None = None

    for line_number, raw_line in enumerate(text.splitlines(), start=1):
        tokens = _tokenize(raw_line, line_number)
        if not tokens:
            continue
        cursor = _Cursor(tokens, line_number)
        first = tokens[0][1]

        if current_method is not None:
            if first == "}":
                cursor.next()
                cursor.require_end()
                _check_labels(current_method, line_number)
                current_method = None
                continue
            stmt = _statement(cursor)
            stmt.uid = program.new_uid()
            current_method.body.append(stmt)
            continue

        if current_class is not None:
            if first == "}":
                cursor.next()
                cursor.require_end()
                current_class = None
                continue
            if first == "field":
                _parse_field(cursor, current_class)
                continue
            if first == "method":
                current_method = _parse_method_header(cursor, current_class)
                continue
            raise IrSyntaxError(f"unexpected {first!r} in class body", line_number)

        current_class = _parse_class_header(cursor, program)

    if current_method is not None or current_class is not None:
        raise IrSyntaxError("unexpected end of input inside a block", 0)

    if check_types:
        missing = program.undefined_types()
        if missing:
            raise UnknownTypeError(
                "undefined types: " + ", ".join(sorted(missing))
            )
    program.rebuild_index()
    return program


def _parse_class_header(cursor: _Cursor, program: Program) -> ClassDef:
    is_framework = False
    kind, text = cursor.next()
    if text == "framework":
        is_framework = True
        kind, text = cursor.next()
    if text != "class":
        raise IrSyntaxError(f"expected class declaration, found {text!r}", cursor.line)
    name = cursor.expect_kind("ident")
    cursor.expect("extends")
    super_name = cursor.expect_kind("ident")
    interfaces: list[str] = []
    token = cursor.peek()
    if token is not None and token[1] == "implements":
        cursor.next()
        interfaces.append(cursor.expect_kind("ident"))
        while cursor.peek() is not None and cursor.peek()[1] == ",":
            cursor.next()
            interfaces.append(cursor.expect_kind("ident"))
    cursor.expect("{")
    cursor.require_end()
    if name == "java.lang.Object":
        # merge into the implicit root so init() etc. can be declared once
        root = program.classes[name]
        root.is_framework = True
        return root
    if name in program.classes:
        raise IrSyntaxError(f"class {name!r} declared twice", cursor.line)
    cls = ClassDef(
        name=name,
        super_name=super_name,
        interfaces=tuple(interfaces),
        is_framework=is_framework,
    )
    program.add_class(cls)
    return cls


def _parse_field(cursor: _Cursor, cls: ClassDef) -> None:
    cursor.expect("field")
    final = False
    token = cursor.peek()
    if token is not None and token[1] == "final":
        cursor.next()
        final = True
    type_name = cursor.expect_kind("ident")
    name = _simple_name(cursor.expect_kind("ident"), cursor, "field name")
    init: Operand | None = None
    token = cursor.peek()
    if token is not None and token[1] == "=":
        if not final:
            raise IrSyntaxError("only final fields may carry initializers", cursor.line)
        cursor.next()
        init = _operand(cursor)
        if isinstance(init, Var):
            raise IrSyntaxError("final field initializers must be literals", cursor.line)
    cursor.expect(";")
    cursor.require_end()
    if name in cls.fields:
        raise IrSyntaxError(f"field {name!r} declared twice", cursor.line)
    cls.fields[name] = FieldDecl(type_name=type_name, name=name, final=final, init=init)


def _parse_method_header(cursor: _Cursor, cls: ClassDef) -> MethodDef | None:
    cursor.expect("method")
    is_static = False
    token = cursor.peek()
    if token is not None and token[1] == "static":
        cursor.next()
        is_static = True
    return_type = cursor.expect_kind("ident")
    name = _simple_name(cursor.expect_kind("ident"), cursor, "method name")
    cursor.expect("(")
    params: list[tuple[str, str]] = []
    token = cursor.peek()
    if token is not None and token[1] != ")":
        while True:
            param_type = cursor.expect_kind("ident")
            param_name = _simple_name(cursor.expect_kind("ident"), cursor, "parameter")
            params.append((param_type, param_name))
            token = cursor.peek()
            if token is not None and token[1] == ",":
                cursor.next()
                continue
            break
    cursor.expect(")")
    kind, text = cursor.next()
    cursor.require_end()

    method = MethodDef(
        class_name=cls.name,
        name=name,
        params=params,
        return_type=return_type,
        is_static=is_static,
        is_stub=(text == ";"),
    )
    key = (name, method.arity)
    if key in cls.methods:
        raise DuplicateMethodError(f"{cls.name}.{name}/{method.arity} declared twice")
    cls.methods[key] = method

    if text == ";":
        return None  # stub: no body follows
    if text != "{":
        raise IrSyntaxError(f"expected '{{' or ';', found {text!r}", cursor.line)
    return method


def _check_labels(method: MethodDef, line_number: int) -> None:
    labels = method.label_index()
    for stmt in method.body:
        targets: list[str] = []
        if isinstance(stmt, Goto):
            targets = [stmt.target]
        elif isinstance(stmt, If):
            targets = [stmt.target]
        elif isinstance(stmt, Switch):
            targets = [label for _, label in stmt.cases]
            if stmt.default is not None:
                targets.append(stmt.default)
        for target in targets:
            if target not in labels:
                raise IrSyntaxError(
                    f"branch to undefined label {target!r} in {method.qualified_name}",
                    stmt.line or line_number,
                )


# ----------------------------------------------------------------- printing


def print_program(program: Program, include_framework: bool = True) -> str:
    """Canonical text form; parsing it reproduces the program."""
    lines: list[str] = []
    for cls in program.classes.values():
        if cls.name == "java.lang.Object" and not cls.methods and not cls.fields:
            continue
        if cls.is_framework and not include_framework:
            continue
        head = "framework class" if cls.is_framework else "class"
        extends = cls.super_name or "java.lang.Object"
        implements = (
            " implements " + ", ".join(cls.interfaces) if cls.interfaces else ""
        )
        lines.append(f"{head} {cls.name} extends {extends}{implements} {{")
        for fld in cls.fields.values():
            final = "final " if fld.final else ""
            init = f" = {fld.init}" if fld.init is not None else ""
            lines.append(f"  field {final}{fld.type_name} {fld.name}{init};")
        for method in cls.methods.values():
            params = ", ".join(f"{t} {n}" for t, n in method.params)
            static = "static " if method.is_static else ""
            header = f"  method {static}{method.return_type} {method.name}({params})"
            if method.is_stub:
                lines.append(header + ";")
                continue
            lines.append(header + " {")
            for stmt in method.body:
                lines.append(f"    {stmt}")
            lines.append("  }")
        lines.append("}")
        lines.append("")
    return "\n".join(lines)
