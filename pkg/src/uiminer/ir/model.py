"""Object model for the textual three-address program representation.

A program is a set of classes; a class has fields and methods; a method
body is a flat statement list with labels for control flow. Framework
classes carry signature-only stubs. Every statement has a program-wide
uid so analyses can reference positions stably, and a synthetic marker
when it was injected by an augmentation pass rather than written by the
frontend.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Union

PRIMITIVES = {"int", "long", "float", "double", "boolean", "char", "byte", "short", "void"}

OBJECT_CLASS = "java.lang.Object"


# -------------------------------------------------------------- value refs


@dataclass(frozen=True)
class ResourceRef:
    """Symbolic resource literal, e.g. res:layout/sample."""

    type_name: str
    name: str

    def __str__(self) -> str:
        return f"res:{self.type_name}/{self.name}"


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class IntConst:
    value: int

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class StrConst:
    value: str

    def __str__(self) -> str:
        return '"' + self.value.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass(frozen=True)
class NullConst:
    def __str__(self) -> str:
        return "null"


@dataclass(frozen=True)
class ResConst:
    ref: ResourceRef

    def __str__(self) -> str:
        return str(self.ref)


Operand = Union[Var, IntConst, StrConst, NullConst, ResConst]


# ------------------------------------------------------------- right sides


@dataclass(frozen=True)
class NewObject:
    type_name: str

    def __str__(self) -> str:
        return f"new {self.type_name}"


@dataclass(frozen=True)
class ConstInt:
    value: int

    def __str__(self) -> str:
        return f"const {self.value}"


@dataclass(frozen=True)
class ConstString:
    value: str

    def __str__(self) -> str:
        return f"const {StrConst(self.value)}"


@dataclass(frozen=True)
class ConstNull:
    def __str__(self) -> str:
        return "const null"


@dataclass(frozen=True)
class ResIdConst:
    ref: ResourceRef

    def __str__(self) -> str:
        return str(self.ref)


@dataclass(frozen=True)
class Cast:
    type_name: str
    var: str

    def __str__(self) -> str:
        return f"({self.type_name}) {self.var}"


@dataclass(frozen=True)
class FieldLoad:
    var: str
    field_name: str

    def __str__(self) -> str:
        return f"{self.var}.{self.field_name}"


INVOKE_KINDS = ("virtual", "special", "static", "interface")


@dataclass(frozen=True)
class InvokeExpr:
    kind: str  # virtual | special | static | interface
    class_name: str
    method_name: str
    args: tuple[Operand, ...]

    @property
    def receiver(self) -> Operand | None:
        if self.kind == "static":
            return None
        return self.args[0] if self.args else None

    @property
    def call_args(self) -> tuple[Operand, ...]:
        """Arguments excluding the receiver."""
        if self.kind == "static":
            return self.args
        return self.args[1:]

    @property
    def arity(self) -> int:
        return len(self.call_args)

    def __str__(self) -> str:
        joined = ", ".join(str(a) for a in self.args)
        return f"invoke {self.kind} {self.class_name}.{self.method_name}({joined})"


Rhs = Union[NewObject, ConstInt, ConstString, ConstNull, ResIdConst, Cast, FieldLoad, InvokeExpr]


# --------------------------------------------------------------- statements


@dataclass(eq=False)
class Statement:
    uid: int = -1
    line: int = 0
    # (pass name, origin statement uid) when injected by augmentation
    synthetic: tuple[str, int] | None = None

    def reads(self) -> list[str]:
        """Names of locals this statement reads."""
        return []

    def writes(self) -> Optional[str]:
        return None


def _operand_reads(operand: Operand) -> list[str]:
    return [operand.name] if isinstance(operand, Var) else []


@dataclass(eq=False)
class Assign(Statement):
    lhs: str = ""
    rhs: Rhs = None  # type: ignore[assignment]

    def reads(self) -> list[str]:
        rhs = self.rhs
        if isinstance(rhs, Cast):
            return [rhs.var]
        if isinstance(rhs, FieldLoad):
            return [rhs.var]
        if isinstance(rhs, InvokeExpr):
            out: list[str] = []
            for arg in rhs.args:
                out.extend(_operand_reads(arg))
            return out
        return []

    def writes(self) -> Optional[str]:
        return self.lhs

    def __str__(self) -> str:
        return f"{self.lhs} = {self.rhs}"


@dataclass(eq=False)
class FieldStore(Statement):
    obj: str = ""
    field_name: str = ""
    value: Operand = None  # type: ignore[assignment]

    def reads(self) -> list[str]:
        return [self.obj] + _operand_reads(self.value)

    def __str__(self) -> str:
        return f"{self.obj}.{self.field_name} = {self.value}"


@dataclass(eq=False)
class InvokeStmt(Statement):
    invoke: InvokeExpr = None  # type: ignore[assignment]

    def reads(self) -> list[str]:
        out: list[str] = []
        for arg in self.invoke.args:
            out.extend(_operand_reads(arg))
        return out

    def __str__(self) -> str:
        return str(self.invoke)


RELATIONS = ("==", "!=", "<", "<=", ">", ">=")


@dataclass(eq=False)
class If(Statement):
    left: Operand = None  # type: ignore[assignment]
    op: str = "=="
    right: Operand = None  # type: ignore[assignment]
    target: str = ""

    def reads(self) -> list[str]:
        return _operand_reads(self.left) + _operand_reads(self.right)

    def __str__(self) -> str:
        return f"if {self.left} {self.op} {self.right} goto {self.target}"


@dataclass(eq=False)
class Switch(Statement):
    var: str = ""
    cases: tuple[tuple[Operand, str], ...] = ()
    default: str | None = None

    def reads(self) -> list[str]:
        return [self.var]

    def __str__(self) -> str:
        parts = [f"case {key}: {label};" for key, label in self.cases]
        if self.default is not None:
            parts.append(f"default: {self.default};")
        inner = " ".join(parts)
        return f"switch {self.var} {{ {inner} }}"


@dataclass(eq=False)
class Goto(Statement):
    target: str = ""

    def __str__(self) -> str:
        return f"goto {self.target}"


@dataclass(eq=False)
class Label(Statement):
    name: str = ""

    def __str__(self) -> str:
        return f"label {self.name}"


@dataclass(eq=False)
class Return(Statement):
    value: Operand | None = None

    def reads(self) -> list[str]:
        return _operand_reads(self.value) if self.value is not None else []

    def __str__(self) -> str:
        return "return" if self.value is None else f"return {self.value}"


# ------------------------------------------------------------ declarations


@dataclass
class FieldDecl:
    type_name: str
    name: str
    final: bool = False
    init: Operand | None = None  # literal initializer for final fields


@dataclass
class MethodDef:
    class_name: str
    name: str
    params: list[tuple[str, str]]  # (type, name)
    return_type: str
    is_static: bool = False
    is_stub: bool = False
    body: list[Statement] = field(default_factory=list)

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def qualified_name(self) -> str:
        return f"{self.class_name}.{self.name}"

    @property
    def signature(self) -> str:
        return f"{self.class_name}.{self.name}/{self.arity}"

    @property
    def param_names(self) -> list[str]:
        return [name for _, name in self.params]

    def label_index(self) -> dict[str, int]:
        return {
            stmt.name: i for i, stmt in enumerate(self.body) if isinstance(stmt, Label)
        }

    def local_types(self) -> dict[str, str]:
        """Declared or first-assignment-inferred type of each local."""
        out: dict[str, str] = {name: type_name for type_name, name in self.params}
        if not self.is_static:
            out.setdefault("this", self.class_name)
        for stmt in self.body:
            if not isinstance(stmt, Assign) or stmt.lhs in out:
                continue
            rhs = stmt.rhs
            if isinstance(rhs, NewObject):
                out[stmt.lhs] = rhs.type_name
            elif isinstance(rhs, ConstInt):
                out[stmt.lhs] = "int"
            elif isinstance(rhs, ConstString):
                out[stmt.lhs] = "java.lang.String"
            elif isinstance(rhs, ConstNull):
                out[stmt.lhs] = OBJECT_CLASS
            elif isinstance(rhs, ResIdConst):
                out[stmt.lhs] = "int"
            elif isinstance(rhs, Cast):
                out[stmt.lhs] = rhs.type_name
            elif isinstance(rhs, InvokeExpr):
                out[stmt.lhs] = "?"  # refined by Program.finalize
            elif isinstance(rhs, FieldLoad):
                out[stmt.lhs] = "?"
        return out


@dataclass
class ClassDef:
    name: str
    super_name: str | None
    interfaces: tuple[str, ...] = ()
    is_framework: bool = False
    fields: dict[str, FieldDecl] = field(default_factory=dict)
    methods: dict[tuple[str, int], MethodDef] = field(default_factory=dict)

    def methods_named(self, name: str) -> list[MethodDef]:
        return [m for (n, _), m in self.methods.items() if n == name]


# ----------------------------------------------------------------- program


class Program:
    """A parsed program plus the indexes analyses lean on."""

    def __init__(self) -> None:
        self.classes: dict[str, ClassDef] = {}
        self._next_uid = 0
        self._stmt_index: dict[int, tuple[MethodDef, int]] = {}
        root = ClassDef(name=OBJECT_CLASS, super_name=None, is_framework=True)
        self.classes[OBJECT_CLASS] = root

    # -------------------------------------------------------------- plumbing

    def new_uid(self) -> int:
        uid = self._next_uid
        self._next_uid += 1
        return uid

    def add_class(self, cls: ClassDef) -> None:
        self.classes[cls.name] = cls

    def methods(self) -> Iterator[MethodDef]:
        for cls in self.classes.values():
            yield from cls.methods.values()

    def app_methods(self) -> Iterator[MethodDef]:
        for method in self.methods():
            if not method.is_stub:
                yield method

    def rebuild_index(self) -> None:
        self._stmt_index = {}
        for method in self.methods():
            for i, stmt in enumerate(method.body):
                self._stmt_index[stmt.uid] = (method, i)
                if stmt.uid >= self._next_uid:
                    self._next_uid = stmt.uid + 1

    def stmt_at(self, uid: int) -> tuple[MethodDef, int]:
        return self._stmt_index[uid]

    def statement(self, uid: int) -> Statement:
        method, index = self._stmt_index[uid]
        return method.body[index]

    def has_stmt(self, uid: int) -> bool:
        return uid in self._stmt_index

    # ------------------------------------------------------------ hierarchy

    def is_framework_class(self, name: str) -> bool:
        cls = self.classes.get(name)
        return cls is not None and cls.is_framework

    def supertypes(self, name: str) -> list[str]:
        """All supertypes (classes then interfaces), excluding `name`."""
        out: list[str] = []
        seen = {name}
        frontier = [name]
        while frontier:
            current = self.classes.get(frontier.pop(0))
            if current is None:
                continue
            parents: list[str] = []
            if current.super_name:
                parents.append(current.super_name)
            parents.extend(current.interfaces)
            for parent in parents:
                if parent not in seen:
                    seen.add(parent)
                    out.append(parent)
                    frontier.append(parent)
        return out

    def is_subtype(self, sub: str, super_: str) -> bool:
        if sub == super_:
            return True
        return super_ in self.supertypes(sub)

    def resolve_method(self, class_name: str, method_name: str, arity: int) -> MethodDef | None:
        """Walk the superclass chain, then interfaces, for (name, arity)."""
        seen: set[str] = set()
        current: str | None = class_name
        while current and current not in seen:
            seen.add(current)
            cls = self.classes.get(current)
            if cls is None:
                break
            method = cls.methods.get((method_name, arity))
            if method is not None:
                return method
            current = cls.super_name
        # interface stubs (e.g. listener callbacks declared on the interface)
        for name in self.supertypes(class_name):
            cls = self.classes.get(name)
            if cls is None:
                continue
            method = cls.methods.get((method_name, arity))
            if method is not None:
                return method
        return None

    def subclasses_of(self, name: str) -> list[str]:
        return [c for c in self.classes if c != name and self.is_subtype(c, name)]

    def resolve_field(self, class_name: str, field_name: str) -> FieldDecl | None:
        seen: set[str] = set()
        current: str | None = class_name
        while current and current not in seen:
            seen.add(current)
            cls = self.classes.get(current)
            if cls is None:
                return None
            if field_name in cls.fields:
                return cls.fields[field_name]
            current = cls.super_name
        return None

    def infer_locals(self, method: MethodDef) -> dict[str, str]:
        """local_types with invoke returns and field loads resolved."""
        out = method.local_types()
        for _ in range(4):  # field loads may chain through other locals
            changed = False
            for stmt in method.body:
                if not isinstance(stmt, Assign) or out.get(stmt.lhs, "?") != "?":
                    continue
                rhs = stmt.rhs
                inferred = "?"
                if isinstance(rhs, InvokeExpr):
                    target = self.resolve_method(rhs.class_name, rhs.method_name, rhs.arity)
                    if target is not None:
                        inferred = target.return_type
                elif isinstance(rhs, FieldLoad):
                    base_type = out.get(rhs.var, "?")
                    if base_type != "?":
                        decl = self.resolve_field(base_type, rhs.field_name)
                        if decl is not None:
                            inferred = decl.type_name
                if inferred != "?":
                    out[stmt.lhs] = inferred
                    changed = True
            if not changed:
                break
        return out

    # ------------------------------------------------------------- checking

    def referenced_types(self) -> set[str]:
        out: set[str] = set()
        for cls in self.classes.values():
            if cls.super_name:
                out.add(cls.super_name)
            out.update(cls.interfaces)
            for fld in cls.fields.values():
                out.add(fld.type_name)
            for method in cls.methods.values():
                out.add(method.return_type)
                for type_name, _ in method.params:
                    out.add(type_name)
                for stmt in method.body:
                    if isinstance(stmt, Assign):
                        rhs = stmt.rhs
                        if isinstance(rhs, NewObject):
                            out.add(rhs.type_name)
                        elif isinstance(rhs, Cast):
                            out.add(rhs.type_name)
        return out

    def undefined_types(self) -> set[str]:
        return {
            t
            for t in self.referenced_types()
            if t not in PRIMITIVES and t not in self.classes
        }

    # ----------------------------------------------------------------- copy

    def clone(self) -> "Program":
        import copy

        duplicate = copy.deepcopy(self)
        duplicate.rebuild_index()
        return duplicate


# ----------------------------------------------------------------- the CFG


def method_cfg(method: MethodDef) -> list[list[int]]:
    """Successor indices per statement of one method body."""
    labels = method.label_index()
    succs: list[list[int]] = []
    n = len(method.body)
    for i, stmt in enumerate(method.body):
        out: list[int] = []
        if isinstance(stmt, Return):
            pass
        elif isinstance(stmt, Goto):
            out.append(labels[stmt.target])
        elif isinstance(stmt, If):
            if i + 1 < n:
                out.append(i + 1)
            out.append(labels[stmt.target])
        elif isinstance(stmt, Switch):
            for _, label in stmt.cases:
                out.append(labels[label])
            if stmt.default is not None:
                out.append(labels[stmt.default])
            elif i + 1 < n:
                out.append(i + 1)
        else:
            if i + 1 < n:
                out.append(i + 1)
        # dedupe, preserving order
        deduped: list[int] = []
        for s in out:
            if s not in deduped:
                deduped.append(s)
        succs.append(deduped)
    return succs


def method_preds(method: MethodDef) -> list[list[int]]:
    succs = method_cfg(method)
    preds: list[list[int]] = [[] for _ in method.body]
    for i, outs in enumerate(succs):
        for j in outs:
            preds[j].append(i)
    return preds
