"""Concrete executor for parsed programs.

Runs method bodies over an explicit heap, modeling just enough of the
platform (view lookup, inflation, listener registration, label setters,
async scheduling, dialog builders) that fixtures can be executed and
their observable behavior recorded. Tests use it as the ground-truth
oracle: static results must agree with (or safely over-approximate)
what a run actually did.

Every value carries its provenance: the uid of the statement that
created it plus a site kind. Probes snapshot a variable's value each
time execution reaches a chosen statement, which is exactly the
question the demand-driven resolver answers statically.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field as dc_field
from typing import Optional

from ..listeners import CallbackSpec, load_listener_table
from .model import (
    Assign,
    Cast,
    ConstInt,
    ConstNull,
    ConstString,
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
    Switch,
    Var,
)

VIEW_CLASS = "android.view.View"
STRINGBUILDER = "java.lang.StringBuilder"


# ------------------------------------------------------------------- values


@dataclass
class Value:
    """A runtime value with provenance.

    kind is one of object/string/int/null. Strings and ints carry their
    payload when known (None marks a value the executor cannot know,
    e.g. a framework return). Ints may carry a resource ref payload, in
    which case they compare against resource literals. origin is
    (site kind, statement uid) of the creating statement.
    """

    kind: str
    type_name: str = ""
    obj_id: int = -1
    s: Optional[str] = None
    i: Optional[int] = None
    ref: Optional[ResourceRef] = None
    origin: Optional[tuple[str, int]] = None

    @property
    def is_null(self) -> bool:
        return self.kind == "null"

    def __repr__(self) -> str:  # compact, for test failure output
        if self.kind == "object":
            return f"<{self.type_name}#{self.obj_id} @{self.origin}>"
        if self.kind == "string":
            return f"<str {self.s!r} @{self.origin}>"
        if self.kind == "int":
            payload = self.ref if self.ref is not None else self.i
            return f"<int {payload} @{self.origin}>"
        return "<null>"


def v_null() -> Value:
    return Value(kind="null")


def v_int(value: Optional[int], origin: Optional[tuple[str, int]] = None) -> Value:
    return Value(kind="int", i=value, origin=origin)


def v_str(value: Optional[str], origin: Optional[tuple[str, int]] = None) -> Value:
    return Value(kind="string", type_name="java.lang.String", s=value, origin=origin)


def v_res(ref: ResourceRef, origin: Optional[tuple[str, int]] = None) -> Value:
    return Value(kind="int", ref=ref, origin=origin)


@dataclass(frozen=True)
class Event:
    kind: str
    entry: int  # index of the public call/trigger that produced it
    uid: int  # statement uid, -1 when not tied to one
    data: dict = dc_field(default_factory=dict, compare=False)

    def __repr__(self) -> str:
        return f"Event({self.kind}, entry={self.entry}, uid={self.uid}, {self.data})"


class _Abort(Exception):
    """Internal: statement budget exhausted."""


# -------------------------------------------------------------- interpreter


class Interpreter:
    def __init__(
        self,
        program: Program,
        strings: Optional[dict[ResourceRef, str]] = None,
        stmt_budget: int = 100_000,
        depth_budget: int = 200,
    ):
        self.program = program
        self.strings = strings or {}
        self.stmt_budget = stmt_budget
        self.depth_budget = depth_budget

        self._next_obj = 1
        self._fields: dict[int, dict[str, Value]] = {}
        self._builders: dict[int, Optional[str]] = {}
        self._view_ids: dict[int, Optional[ResourceRef]] = {}
        self._views: dict[tuple[int, ResourceRef], Value] = {}
        self._bindings: dict[int, dict[str, tuple[CallbackSpec, Value]]] = {}
        self._dialogs: dict[int, dict] = {}
        self._listener_table = load_listener_table()

        self.events: list[Event] = []
        self.probes: dict[tuple[int, str], list[Value]] = {}
        self._probe_points: dict[int, set[str]] = {}

        self._steps = 0
        self._depth = 0
        self._entry = -1

    # ------------------------------------------------------------- plumbing

    def add_probe(self, uid: int, var: str) -> None:
        self._probe_points.setdefault(uid, set()).add(var)
        self.probes.setdefault((uid, var), [])

    def _emit(self, kind: str, uid: int = -1, **data) -> None:
        self.events.append(Event(kind, self._entry, uid, data))

    def _alloc(self, type_name: str, origin: Optional[tuple[str, int]]) -> Value:
        obj_id = self._next_obj
        self._next_obj += 1
        return Value(kind="object", type_name=type_name, obj_id=obj_id, origin=origin)

    # ------------------------------------------------------------ public API

    def new_instance(self, class_name: str) -> Value:
        """Fresh app object created from outside (no constructor run)."""
        return self._alloc(class_name, None)

    def call(self, receiver: Value, method_name: str, args: list[Value]):
        """Virtual-dispatch a call from outside; one schedule entry."""
        self._entry += 1
        method = self.program.resolve_method(
            receiver.type_name, method_name, len(args)
        )
        if method is None or method.is_stub:
            self._emit("noMethod", target=f"{receiver.type_name}.{method_name}")
            return None
        return self._run_guarded(method, [receiver] + args)

    def call_static(self, class_name: str, method_name: str, args: list[Value]):
        self._entry += 1
        method = self.program.resolve_method(class_name, method_name, len(args))
        if method is None or method.is_stub:
            self._emit("noMethod", target=f"{class_name}.{method_name}")
            return None
        return self._run_guarded(method, list(args))

    def trigger(self, view: Value, event_name: str) -> bool:
        """Fire a registered listener callback on a view."""
        self._entry += 1
        bound = self._bindings.get(view.obj_id, {}).get(event_name)
        if bound is None:
            self._emit("noBinding", view=view.obj_id, event=event_name)
            return False
        spec, listener = bound
        args = [listener] + self._recipe_args(spec, view)
        method = self.program.resolve_method(
            listener.type_name, spec.callback, spec.arity
        )
        if method is None or method.is_stub:
            self._emit("noMethod", target=f"{listener.type_name}.{spec.callback}")
            return False
        self._run_guarded(method, args)
        return True

    def view_for(self, scope: Value, ref: ResourceRef) -> Value:
        """The view registry object for an id, as findViewById returns."""
        return self._lookup_view(scope, ref)

    def bound_events(self, view: Value) -> list[str]:
        return sorted(self._bindings.get(view.obj_id, {}))

    # ------------------------------------------------------------ execution

    def _run_guarded(self, method: MethodDef, args: list[Value]):
        try:
            return self._exec(method, args)
        except _Abort:
            return None

    def _recipe_args(self, spec: CallbackSpec, view: Value) -> list[Value]:
        out: list[Value] = []
        for token in spec.recipe:
            if token == "receiver":
                out.append(view)
            elif token == "zero":
                out.append(v_int(0))
            else:
                out.append(v_null())
        return out

    def _bind_locals(self, method: MethodDef, args: list[Value]) -> dict[str, Value]:
        local_vars: dict[str, Value] = {}
        if method.is_static:
            names = method.param_names
        else:
            names = ["this"] + method.param_names
        for name, value in zip(names, args):
            local_vars[name] = value
        return local_vars

    def _exec(self, method: MethodDef, args: list[Value]):
        if self._depth >= self.depth_budget:
            self._emit("depthExceeded", target=method.qualified_name)
            return self._default_return(method.return_type)
        self._depth += 1
        try:
            return self._exec_body(method, self._bind_locals(method, args))
        finally:
            self._depth -= 1

    def _exec_body(self, method: MethodDef, local_vars: dict[str, Value]):
        labels = method.label_index()
        body = method.body
        pc = 0
        while pc < len(body):
            stmt = body[pc]
            self._steps += 1
            if self._steps > self.stmt_budget:
                self._emit("budgetExceeded", uid=stmt.uid)
                raise _Abort()

            probe_vars = self._probe_points.get(stmt.uid)
            if probe_vars:
                for var in probe_vars:
                    if var in local_vars:
                        self.probes[(stmt.uid, var)].append(local_vars[var])

            if isinstance(stmt, Label):
                pc += 1
            elif isinstance(stmt, Goto):
                pc = labels[stmt.target]
            elif isinstance(stmt, Return):
                if stmt.value is None:
                    return None
                return self._operand(stmt.value, local_vars, stmt.uid)
            elif isinstance(stmt, If):
                left = self._operand(stmt.left, local_vars, stmt.uid)
                right = self._operand(stmt.right, local_vars, stmt.uid)
                taken = self._compare(left, stmt.op, right, stmt.uid)
                pc = labels[stmt.target] if taken else pc + 1
            elif isinstance(stmt, Switch):
                value = local_vars.get(stmt.var, v_null())
                target = self._switch_target(stmt, value)
                pc = labels[target] if target is not None else pc + 1
            elif isinstance(stmt, FieldStore):
                base = local_vars.get(stmt.obj)
                if base is None or base.kind != "object":
                    self._emit("error", uid=stmt.uid, what="store-on-non-object")
                else:
                    self._fields.setdefault(base.obj_id, {})[stmt.field_name] = (
                        self._operand(stmt.value, local_vars, stmt.uid)
                    )
                pc += 1
            elif isinstance(stmt, InvokeStmt):
                self._invoke(stmt.invoke, local_vars, stmt.uid)
                pc += 1
            elif isinstance(stmt, Assign):
                value = self._rhs(stmt, local_vars)
                local_vars[stmt.lhs] = value if value is not None else v_null()
                pc += 1
            else:  # pragma: no cover - grammar has no other statement forms
                raise AssertionError(f"unhandled statement {stmt!r}")
        return None

    # ------------------------------------------------------------- operands

    def _operand(self, operand: Operand, local_vars: dict[str, Value], uid: int) -> Value:
        if isinstance(operand, Var):
            value = local_vars.get(operand.name)
            if value is None:
                self._emit("error", uid=uid, what=f"read-undefined:{operand.name}")
                return v_null()
            return value
        if isinstance(operand, IntConst):
            return v_int(operand.value, ("int", uid))
        if isinstance(operand, StrConst):
            return v_str(operand.value, ("string", uid))
        if isinstance(operand, ResConst):
            return v_res(operand.ref, ("res", uid))
        return v_null()

    def _rhs(self, stmt: Assign, local_vars: dict[str, Value]):
        rhs = stmt.rhs
        uid = stmt.uid
        if isinstance(rhs, NewObject):
            value = self._alloc(rhs.type_name, ("new", uid))
            if rhs.type_name == STRINGBUILDER:
                self._builders[value.obj_id] = ""
            return value
        if isinstance(rhs, ConstInt):
            return v_int(rhs.value, ("int", uid))
        if isinstance(rhs, ConstString):
            return v_str(rhs.value, ("string", uid))
        if isinstance(rhs, ConstNull):
            return v_null()
        if isinstance(rhs, ResIdConst):
            return v_res(rhs.ref, ("res", uid))
        if isinstance(rhs, Cast):
            value = local_vars.get(rhs.var)
            if value is None:
                self._emit("error", uid=uid, what=f"read-undefined:{rhs.var}")
                return v_null()
            # a downcast narrows the runtime type we dispatch on
            if (
                value.kind == "object"
                and rhs.type_name != value.type_name
                and self.program.is_subtype(rhs.type_name, value.type_name)
            ):
                return dataclasses.replace(value, type_name=rhs.type_name)
            return value
        if isinstance(rhs, FieldLoad):
            return self._field_load(rhs, local_vars, uid)
        if isinstance(rhs, InvokeExpr):
            return self._invoke(rhs, local_vars, uid)
        raise AssertionError(f"unhandled rhs {rhs!r}")  # pragma: no cover

    def _field_load(self, rhs: FieldLoad, local_vars: dict[str, Value], uid: int) -> Value:
        base = local_vars.get(rhs.var)
        if base is None or base.kind != "object":
            self._emit("error", uid=uid, what="load-on-non-object")
            return v_null()
        stored = self._fields.get(base.obj_id, {}).get(rhs.field_name)
        if stored is not None:
            return stored
        decl = self.program.resolve_field(base.type_name, rhs.field_name)
        if decl is not None and decl.final and decl.init is not None:
            value = self._operand(decl.init, {}, uid)
            value.origin = ("finalfield", uid)
            return value
        return v_null()

    # ----------------------------------------------------------- comparison

    def _compare(self, left: Value, op: str, right: Value, uid: int) -> bool:
        if op in ("==", "!="):
            equal = self._equal(left, right, uid)
            if equal is None:
                self._emit("undecided", uid=uid)
                return False
            return equal if op == "==" else not equal
        # ordered comparisons are int-only
        if left.kind == "int" and right.kind == "int" and left.i is not None and right.i is not None:
            table = {"<": left.i < right.i, "<=": left.i <= right.i,
                     ">": left.i > right.i, ">=": left.i >= right.i}
            return table[op]
        self._emit("undecided", uid=uid)
        return False

    def _equal(self, left: Value, right: Value, uid: int) -> Optional[bool]:
        if left.is_null and right.is_null:
            return True
        if left.is_null or right.is_null:
            return False
        if left.kind == "object" and right.kind == "object":
            return left.obj_id == right.obj_id
        if left.kind == "int" and right.kind == "int":
            if left.ref is not None and right.ref is not None:
                return left.ref == right.ref
            if left.i is not None and right.i is not None:
                return left.i == right.i
            return None
        if left.kind == "string" and right.kind == "string":
            if left.origin is not None and left.origin == right.origin:
                return True
            return None  # reference equality of distinct strings: unknowable
        return None

    def _switch_target(self, stmt: Switch, value: Value) -> Optional[str]:
        for key, label in stmt.cases:
            if isinstance(key, IntConst):
                if value.kind == "int" and value.i is not None and value.i == key.value:
                    return label
            elif isinstance(key, ResConst):
                if value.kind == "int" and value.ref is not None and value.ref == key.ref:
                    return label
        if value.kind != "int" or (value.i is None and value.ref is None):
            self._emit("undecided", uid=stmt.uid)
        return stmt.default

    # -------------------------------------------------------------- invokes

    def _invoke(self, invoke: InvokeExpr, local_vars: dict[str, Value], uid: int):
        args = [self._operand(a, local_vars, uid) for a in invoke.args]

        if invoke.kind == "static":
            target = self.program.resolve_method(
                invoke.class_name, invoke.method_name, invoke.arity
            )
            receiver = None
        else:
            receiver = args[0]
            if receiver.is_null:
                self._emit("error", uid=uid, what="null-receiver",
                           target=f"{invoke.class_name}.{invoke.method_name}")
                return self._default_for_call(invoke)
            dispatch_type = (
                receiver.type_name
                if invoke.kind in ("virtual", "interface") and receiver.kind == "object"
                else invoke.class_name
            )
            if invoke.kind == "special":
                dispatch_type = invoke.class_name
            target = self.program.resolve_method(
                dispatch_type, invoke.method_name, invoke.arity
            )
            if target is None:
                target = self.program.resolve_method(
                    invoke.class_name, invoke.method_name, invoke.arity
                )

        if target is not None and not target.is_stub:
            return self._exec(target, args)
        return self._framework(invoke, target, args, receiver, uid)

    def _default_return(self, return_type: str):
        if return_type == "void":
            return None
        if return_type in ("int", "long", "short", "byte", "char", "boolean"):
            return v_int(None)
        if return_type in ("float", "double"):
            return v_int(None)
        if return_type in ("java.lang.String", "java.lang.CharSequence"):
            return v_str(None)
        # an opaque instance: the platform returned *something* we can
        # keep dispatching on, even though we know nothing else about it
        return self._alloc(return_type, None)

    def _default_for_call(self, invoke: InvokeExpr):
        target = self.program.resolve_method(
            invoke.class_name, invoke.method_name, invoke.arity
        )
        return self._default_return(target.return_type if target else "java.lang.Object")

    # ----------------------------------------------------- framework model

    def _framework(self, invoke, target, args, receiver, uid):
        """Model a platform call; always records the invocation."""
        if target is not None:
            qualified = target.qualified_name
        else:
            qualified = f"{invoke.class_name}.{invoke.method_name}"
        self._emit(
            "invoke",
            uid=uid,
            target=qualified,
            declared=f"{invoke.class_name}.{invoke.method_name}",
            receiver=receiver.obj_id if receiver is not None and receiver.kind == "object" else None,
            args=args,
        )

        name = invoke.method_name

        # -- receiver-type specials (resolution lands on Object stubs)
        if receiver is not None and receiver.type_name == STRINGBUILDER:
            result = self._stringbuilder(name, receiver, args, uid)
            if result is not NotImplemented:
                return result

        handler = _HANDLERS.get(qualified)
        if handler is not None:
            return handler(self, invoke, args, receiver, uid)

        # -- listener registration, shared table
        if target is not None and target.signature in self._listener_table:
            spec = self._listener_table[target.signature]
            listener = args[1] if len(args) > 1 else v_null()
            if receiver is not None and receiver.kind == "object" and not listener.is_null:
                self._bindings.setdefault(receiver.obj_id, {})[spec.callback] = (
                    spec,
                    listener,
                )
                self._emit("listen", uid=uid, view=receiver.obj_id,
                           event=spec.callback, listener=listener.obj_id)
            return None

        return self._default_return(target.return_type if target else "java.lang.Object")

    def _stringbuilder(self, name: str, receiver: Value, args: list[Value], uid: int):
        content = self._builders.get(receiver.obj_id, "")
        if name == "init":
            piece = args[1] if len(args) > 1 else v_str("")
            self._builders[receiver.obj_id] = piece.s if piece.kind == "string" else None
            return None
        if name == "append":
            piece = args[1] if len(args) > 1 else v_str(None)
            if piece.kind == "string":
                added = piece.s
            elif piece.kind == "int":
                added = str(piece.i) if piece.i is not None else None
            else:
                added = None
            if content is None or added is None:
                self._builders[receiver.obj_id] = None
            else:
                self._builders[receiver.obj_id] = content + added
            return receiver
        if name == "toString":
            return v_str(content, ("stringbuilder", uid))
        return NotImplemented

    # view lookup scoped to whichever object the search starts from
    def _lookup_view(self, scope: Value, ref: ResourceRef) -> Value:
        key = (scope.obj_id, ref)
        view = self._views.get(key)
        if view is None:
            view = self._alloc(VIEW_CLASS, None)
            self._view_ids[view.obj_id] = ref
            self._fields.setdefault(view.obj_id, {})["$scope"] = scope
            self._views[key] = view
        return view

    def _owner_of(self, value: Value) -> Value:
        return self._fields.get(value.obj_id, {}).get("$owner", v_null())


# ------------------------------------------------------- platform handlers
#
# Handlers receive (interp, invoke, args, receiver, uid) and return the
# call's value. They are keyed by the resolved stub's qualified name.


def _h_find_view(interp: Interpreter, invoke, args, receiver, uid):
    id_arg = args[1] if len(args) > 1 else v_null()
    if id_arg.kind == "int" and id_arg.ref is not None:
        view = interp._lookup_view(receiver, id_arg.ref)
        interp._emit("findView", uid=uid, scope=receiver.obj_id,
                     ref=id_arg.ref, view=view.obj_id)
        return view
    interp._emit("findView", uid=uid, scope=receiver.obj_id, ref=None, view=None)
    return v_null()


def _h_set_content_view(interp: Interpreter, invoke, args, receiver, uid):
    layout = args[1] if len(args) > 1 else v_null()
    interp._emit("setContentView", uid=uid, activity=receiver.obj_id,
                 layout=layout.ref)
    return None


def _h_inflate(interp: Interpreter, invoke, args, receiver, uid):
    layout = args[1] if len(args) > 1 else v_null()
    container = args[2] if len(args) > 2 else v_null()
    attach_arg = args[3] if len(args) > 3 else None
    # two-arg inflate attaches when a container is given; the three-arg
    # form follows its boolean
    if attach_arg is None:
        attach = not container.is_null
    else:
        attach = bool(attach_arg.i)
    if attach and not container.is_null:
        result = container
    else:
        result = interp._alloc(VIEW_CLASS, ("inflate", uid))
    interp._emit("inflate", uid=uid, layout=layout.ref, attach=attach,
                 container=None if container.is_null else container.obj_id,
                 result=result.obj_id)
    return result


def _h_inflater_from(interp: Interpreter, invoke, args, receiver, uid):
    inflater = interp._alloc("android.view.LayoutInflater", None)
    if args and args[0].kind == "object":
        interp._fields.setdefault(inflater.obj_id, {})["$owner"] = args[0]
    return inflater


def _h_get_inflater(interp: Interpreter, invoke, args, receiver, uid):
    inflater = interp._alloc("android.view.LayoutInflater", None)
    interp._fields.setdefault(inflater.obj_id, {})["$owner"] = receiver
    return inflater


def _label_handler(prop: str):
    def handler(interp: Interpreter, invoke, args, receiver, uid):
        arg = args[1] if len(args) > 1 else v_null()
        value = arg.s if arg.kind == "string" else None
        ref = arg.ref if arg.kind == "int" else None
        if ref is not None and value is None:
            value = interp.strings.get(ref)
        interp._emit(
            "label",
            uid=uid,
            view=receiver.obj_id,
            view_ref=interp._view_ids.get(receiver.obj_id),
            prop=prop,
            value=value,
            ref=ref,
            origin=arg.origin,
        )
        return None

    return handler


def _h_get_id(interp: Interpreter, invoke, args, receiver, uid):
    ref = interp._view_ids.get(receiver.obj_id)
    if ref is None:
        return v_int(None)
    return v_res(ref, ("viewid", uid))


def _h_set_id(interp: Interpreter, invoke, args, receiver, uid):
    id_arg = args[1] if len(args) > 1 else v_null()
    interp._view_ids[receiver.obj_id] = id_arg.ref
    return None


def _h_add_view(interp: Interpreter, invoke, args, receiver, uid):
    child = args[1] if len(args) > 1 else v_null()
    interp._emit("addView", uid=uid, parent=receiver.obj_id,
                 child=None if child.is_null else child.obj_id)
    return None


def _h_get_string(interp: Interpreter, invoke, args, receiver, uid):
    id_arg = args[1] if len(args) > 1 else v_null()
    if id_arg.kind == "int" and id_arg.ref is not None:
        return v_str(interp.strings.get(id_arg.ref), ("getString", uid))
    return v_str(None, ("getString", uid))


def _h_get_context(interp: Interpreter, invoke, args, receiver, uid):
    scope = interp._fields.get(receiver.obj_id, {}).get("$scope")
    return scope if scope is not None else v_null()


def _h_async_execute(interp: Interpreter, invoke, args, receiver, uid):
    payload = args[1] if len(args) > 1 else v_null()
    for name, call_args in (
        ("onPreExecute", [receiver]),
        ("doInBackground", [receiver, payload]),
    ):
        method = interp.program.resolve_method(receiver.type_name, name, len(call_args) - 1)
        if method is not None and not method.is_stub:
            result = interp._exec(method, call_args)
        else:
            result = None
    background = result if isinstance(result, Value) else v_null()
    for name, call_args in (
        ("onProgressUpdate", [receiver, v_null()]),
        ("onPostExecute", [receiver, background]),
    ):
        method = interp.program.resolve_method(receiver.type_name, name, len(call_args) - 1)
        if method is not None and not method.is_stub:
            interp._exec(method, call_args)
    return receiver


def _h_send_message(interp: Interpreter, invoke, args, receiver, uid):
    message = args[1] if len(args) > 1 else v_null()
    method = interp.program.resolve_method(receiver.type_name, "handleMessage", 1)
    if method is not None and not method.is_stub:
        interp._exec(method, [receiver, message])
    return v_int(1)


def _h_run_runnable(interp: Interpreter, invoke, args, receiver, uid):
    task = args[1] if len(args) > 1 else v_null()
    if not task.is_null:
        method = interp.program.resolve_method(task.type_name, "run", 0)
        if method is not None and not method.is_stub:
            interp._exec(method, [task])
    return None


def _h_set_adapter(interp: Interpreter, invoke, args, receiver, uid):
    adapter = args[1] if len(args) > 1 else v_null()
    interp._emit("setAdapter", uid=uid, list=receiver.obj_id,
                 adapter=None if adapter.is_null else adapter.obj_id)
    if adapter.is_null:
        return None
    method = interp.program.resolve_method(adapter.type_name, "getView", 3)
    if method is not None and not method.is_stub:
        row = interp._exec(method, [adapter, v_int(0), v_null(), receiver])
        if isinstance(row, Value) and row.kind == "object":
            interp._emit("adapterRow", uid=uid, list=receiver.obj_id, row=row.obj_id)
    return None


def _h_view_ctor(interp: Interpreter, invoke, args, receiver, uid):
    if len(args) > 1 and args[1].kind == "object":
        interp._fields.setdefault(receiver.obj_id, {})["$scope"] = args[1]
    return None


def _h_fragment_manager(interp: Interpreter, invoke, args, receiver, uid):
    manager = interp._alloc("android.app.FragmentManager", None)
    interp._fields.setdefault(manager.obj_id, {})["$owner"] = receiver
    return manager


def _h_begin_txn(interp: Interpreter, invoke, args, receiver, uid):
    txn = interp._alloc("android.app.FragmentTransaction", None)
    owner = interp._owner_of(receiver)
    interp._fields.setdefault(txn.obj_id, {})["$owner"] = owner
    return txn


def _fragment_attach(kind: str):
    def handler(interp: Interpreter, invoke, args, receiver, uid):
        container = args[1] if len(args) > 1 else v_null()
        fragment = args[2] if len(args) > 2 else v_null()
        owner = interp._owner_of(receiver)
        root_id = None
        if not fragment.is_null:
            interp._fields.setdefault(fragment.obj_id, {})["$owner"] = owner
            created = interp.program.resolve_method(fragment.type_name, "onCreate", 1)
            if created is not None and not created.is_stub:
                interp._exec(created, [fragment, v_null()])
            create_view = interp.program.resolve_method(
                fragment.type_name, "onCreateView", 3
            )
            if create_view is not None and not create_view.is_stub:
                inflater = interp._alloc("android.view.LayoutInflater", None)
                interp._fields.setdefault(inflater.obj_id, {})["$owner"] = owner
                container_view = v_null()
                if container.kind == "int" and container.ref is not None and not owner.is_null:
                    container_view = interp._lookup_view(owner, container.ref)
                root = interp._exec(create_view, [fragment, inflater, container_view, v_null()])
                if isinstance(root, Value) and root.kind == "object":
                    root_id = root.obj_id
                    interp._fields.setdefault(fragment.obj_id, {})["$view"] = root
        interp._emit(
            "fragmentAttach",
            uid=uid,
            mode=kind,
            container=container.ref,
            fragment=None if fragment.is_null else fragment.obj_id,
            fragment_class=None if fragment.is_null else fragment.type_name,
            activity=None if owner.is_null else owner.obj_id,
            root=root_id,
        )
        return receiver

    return handler


def _h_fragment_activity(interp: Interpreter, invoke, args, receiver, uid):
    return interp._owner_of(receiver)


def _h_fragment_view(interp: Interpreter, invoke, args, receiver, uid):
    view = interp._fields.get(receiver.obj_id, {}).get("$view")
    return view if view is not None else v_null()


def _h_builder_init(interp: Interpreter, invoke, args, receiver, uid):
    interp._dialogs[receiver.obj_id] = {"buttons": {}}
    return None


def _dialog_text(prop: str):
    def handler(interp: Interpreter, invoke, args, receiver, uid):
        state = interp._dialogs.setdefault(receiver.obj_id, {"buttons": {}})
        arg = args[1] if len(args) > 1 else v_null()
        value = arg.s if arg.kind == "string" else None
        if value is None and arg.kind == "int" and arg.ref is not None:
            value = interp.strings.get(arg.ref)
        state[prop] = value
        return receiver

    return handler


def _dialog_button(which: str):
    def handler(interp: Interpreter, invoke, args, receiver, uid):
        state = interp._dialogs.setdefault(receiver.obj_id, {"buttons": {}})
        arg = args[1] if len(args) > 1 else v_null()
        value = arg.s if arg.kind == "string" else None
        if value is None and arg.kind == "int" and arg.ref is not None:
            value = interp.strings.get(arg.ref)
        state["buttons"][which] = value
        listener = args[2] if len(args) > 2 else v_null()
        if not listener.is_null:
            method = interp.program.resolve_method(listener.type_name, "onClick", 2)
            if method is not None and not method.is_stub:
                interp._emit("dialogButtonListener", uid=uid, which=which,
                             listener=listener.obj_id)
        return receiver

    return handler


def _h_builder_create(interp: Interpreter, invoke, args, receiver, uid):
    dialog = interp._alloc("android.app.AlertDialog", ("new", uid))
    interp._dialogs[dialog.obj_id] = interp._dialogs.setdefault(
        receiver.obj_id, {"buttons": {}}
    )
    return dialog


def _h_dialog_show(interp: Interpreter, invoke, args, receiver, uid):
    state = interp._dialogs.get(receiver.obj_id, {"buttons": {}})
    result = receiver
    if receiver.type_name == "android.app.AlertDialog$Builder":
        result = interp._alloc("android.app.AlertDialog", ("new", uid))
        interp._dialogs[result.obj_id] = state
    interp._emit("dialogShow", uid=uid, title=state.get("title"),
                 message=state.get("message"), buttons=dict(state.get("buttons", {})))
    return result


def _h_list_get(interp: Interpreter, invoke, args, receiver, uid):
    return v_null()


_HANDLERS = {
    "android.view.View.findViewById": _h_find_view,
    "android.app.Activity.findViewById": _h_find_view,
    "android.app.Activity.setContentView": _h_set_content_view,
    "android.view.LayoutInflater.inflate": _h_inflate,
    "android.view.LayoutInflater.from": _h_inflater_from,
    "android.app.Activity.getLayoutInflater": _h_get_inflater,
    "android.widget.TextView.setText": _label_handler("text"),
    "android.widget.TextView.setHint": _label_handler("hint"),
    "android.view.View.setContentDescription": _label_handler("contentDescription"),
    "android.view.View.getId": _h_get_id,
    "android.view.View.setId": _h_set_id,
    "android.view.View.getContext": _h_get_context,
    "android.view.View.init": _h_view_ctor,
    "android.view.ViewGroup.addView": _h_add_view,
    "android.content.Context.getString": _h_get_string,
    "android.os.AsyncTask.execute": _h_async_execute,
    "android.os.Handler.sendMessage": _h_send_message,
    "android.os.Handler.post": _h_run_runnable,
    "android.app.Activity.runOnUiThread": _h_run_runnable,
    "android.widget.AdapterView.setAdapter": _h_set_adapter,
    "android.app.Activity.getFragmentManager": _h_fragment_manager,
    "android.app.FragmentManager.beginTransaction": _h_begin_txn,
    "android.app.FragmentTransaction.add": _fragment_attach("add"),
    "android.app.FragmentTransaction.replace": _fragment_attach("replace"),
    "android.app.Fragment.getActivity": _h_fragment_activity,
    "android.app.Fragment.getView": _h_fragment_view,
    "android.app.AlertDialog$Builder.init": _h_builder_init,
    "android.app.AlertDialog$Builder.setTitle": _dialog_text("title"),
    "android.app.AlertDialog$Builder.setMessage": _dialog_text("message"),
    "android.app.AlertDialog$Builder.setPositiveButton": _dialog_button("positive"),
    "android.app.AlertDialog$Builder.setNegativeButton": _dialog_button("negative"),
    "android.app.AlertDialog$Builder.setNeutralButton": _dialog_button("neutral"),
    "android.app.AlertDialog$Builder.create": _h_builder_create,
    "android.app.AlertDialog$Builder.show": _h_dialog_show,
    "android.app.Dialog.show": _h_dialog_show,
    "java.util.List.get": _h_list_get,
}
