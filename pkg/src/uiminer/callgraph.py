"""Call-graph construction over augmented app code.

Four rewrites close the gap between raw app code and the control flow
the platform adds at runtime:

  views      shadow findViewById results with typed allocations so
             dispatch sees which widget classes exist
  async      replace AsyncTask.execute with its sequential callback
             chain; bridge Handler/Runnable hand-offs
  listeners  follow each listener registration with a call to the
             callback it arms
  adapters   follow setAdapter with one row-construction call

Each injected statement carries a (pass name, origin uid) marker, which
makes every pass idempotent and lets later stages walk back to the code
that justified the injection. The graph itself is rapid-type style:
virtual dispatch considers only classes the reachable code instantiates,
falling back to the platform stub when nothing app-side matches.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .ir.model import (
    Assign,
    Cast,
    ClassDef,
    InvokeExpr,
    InvokeStmt,
    IntConst,
    MethodDef,
    NewObject,
    NullConst,
    Operand,
    Program,
    Return,
    Statement,
    Var,
    method_cfg,
    method_preds,
)
from .listeners import load_listener_table

log = logging.getLogger(__name__)

ENTRY_CLASS = "$Entry"
ENTRY_METHOD = "main"

VIEW_CLASS = "android.view.View"

# calls emitted by the synthesized entry, in driving order
ACTIVITY_LIFECYCLE = (
    ("onCreate", ["null"]),
    ("onStart", []),
    ("onResume", []),
    ("onCreateOptionsMenu", ["null"]),
    ("onOptionsItemSelected", ["null"]),
    ("onBackPressed", []),
    ("onPause", []),
    ("onStop", []),
    ("onDestroy", []),
)

FRAGMENT_LIFECYCLE = (
    ("onCreate", ["null"]),
    ("onCreateView", ["null", "null", "null"]),
    ("onStart", []),
    ("onResume", []),
    ("onPause", []),
    ("onStop", []),
    ("onDestroy", []),
)

FIND_VIEW_STUBS = {
    "android.view.View.findViewById/1",
    "android.app.Activity.findViewById/1",
}
EXECUTE_STUB = "android.os.AsyncTask.execute/1"
SEND_MESSAGE_STUB = "android.os.Handler.sendMessage/1"
RUNNABLE_STUBS = {
    "android.os.Handler.post/1",
    "android.app.Activity.runOnUiThread/1",
}
SET_ADAPTER_STUB = "android.widget.AdapterView.setAdapter/1"
ADAPTER_CLASS = "android.widget.Adapter"
RUNNABLE_CLASS = "java.lang.Runnable"


@dataclass
class PatchReport:
    pass_name: str
    injected: list[int] = field(default_factory=list)  # uids of new statements
    replaced: list[int] = field(default_factory=list)  # uids that were rewritten
    warnings: list[str] = field(default_factory=list)

    @property
    def changed(self) -> bool:
        return bool(self.injected or self.replaced)


@dataclass
class EntryModel:
    method: MethodDef
    activity_sites: dict[str, list[int]]
    fragment_sites: dict[str, list[int]]
    warnings: list[str]


# ---------------------------------------------------------------- synthesis


def _null() -> Operand:
    return NullConst()


def synthesize_entry_point(
    program: Program,
    activities: list[str],
    fragments: list[str] | None = None,
) -> EntryModel:
    """Build $Entry.main driving every screen's lifecycle once.

    Activities come from the manifest; fragment classes are optional
    extras for fragments only ever attached dynamically. Classes the
    code does not define are skipped with a warning. Re-synthesizing
    replaces the previous entry.
    """
    program.classes.pop(ENTRY_CLASS, None)
    entry_cls = ClassDef(name=ENTRY_CLASS, super_name="java.lang.Object")
    entry = MethodDef(
        class_name=ENTRY_CLASS,
        name=ENTRY_METHOD,
        params=[],
        return_type="void",
        is_static=True,
    )
    entry_cls.methods[(ENTRY_METHOD, 0)] = entry
    program.add_class(entry_cls)

    warnings: list[str] = []
    activity_sites: dict[str, list[int]] = {}
    fragment_sites: dict[str, list[int]] = {}

    def drive(class_name: str, var: str, lifecycle) -> list[int]:
        uids: list[int] = []

        def add(stmt: Statement) -> None:
            stmt.uid = program.new_uid()
            stmt.synthetic = ("entry", -1)
            entry.body.append(stmt)
            uids.append(stmt.uid)

        add(Assign(lhs=var, rhs=NewObject(class_name)))
        add(
            InvokeStmt(
                invoke=InvokeExpr(
                    kind="special",
                    class_name=class_name,
                    method_name="init",
                    args=(Var(var),),
                )
            )
        )
        for name, extra in lifecycle:
            target = program.resolve_method(class_name, name, len(extra))
            if target is None or target.is_stub:
                continue  # not overridden; the platform default does nothing
            args: list[Operand] = [Var(var)]
            args.extend(_null() for _ in extra)
            add(
                InvokeStmt(
                    invoke=InvokeExpr(
                        kind="virtual",
                        class_name=class_name,
                        method_name=name,
                        args=tuple(args),
                    )
                )
            )
        return uids

    for i, activity in enumerate(dict.fromkeys(activities)):
        if activity not in program.classes:
            warnings.append(f"manifest names {activity} but no such class exists")
            continue
        activity_sites[activity] = drive(activity, f"a{i}", ACTIVITY_LIFECYCLE)
    for i, fragment in enumerate(dict.fromkeys(fragments or [])):
        if fragment not in program.classes:
            warnings.append(f"fragment class {fragment} does not exist")
            continue
        fragment_sites[fragment] = drive(fragment, f"f{i}", FRAGMENT_LIFECYCLE)

    tail = Return()
    tail.uid = program.new_uid()
    tail.synthetic = ("entry", -1)
    entry.body.append(tail)

    program.rebuild_index()
    for message in warnings:
        log.warning(message)
    return EntryModel(entry, activity_sites, fragment_sites, warnings)


# ---------------------------------------------------------- rewrite helpers


def _resolved_stub_signature(program: Program, invoke: InvokeExpr) -> str | None:
    target = program.resolve_method(invoke.class_name, invoke.method_name, invoke.arity)
    if target is None or not target.is_stub:
        return None
    return target.signature


def _mark(program: Program, stmt: Statement, pass_name: str, origin: int) -> Statement:
    stmt.uid = program.new_uid()
    stmt.synthetic = (pass_name, origin)
    return stmt


def _already_injected(method: MethodDef, index: int, pass_name: str, origin: int) -> bool:
    """True when a statement after `index` carries this pass+origin marker."""
    for stmt in method.body[index + 1 :]:
        if stmt.synthetic is None:
            return False
        if stmt.synthetic == (pass_name, origin):
            return True
    return False


# ------------------------------------------------------------- views pass


def patch_view_allocations(program: Program) -> PatchReport:
    """Shadow findViewById results with allocations of the cast-to type.

    The platform constructs widgets during inflation, so app code never
    allocates them and rapid-type dispatch would see no widget classes
    at all. For `v = findViewById(id)` followed by `t = (T) v`, the
    cast becomes `t = new T`; without a cast a plain View allocation is
    inserted. The lookup call stays in place: its argument is how later
    stages recover which declared widget the allocation stands for.
    """
    report = PatchReport("views")
    for method in list(program.app_methods()):
        for i, stmt in enumerate(method.body):
            if not isinstance(stmt, Assign) or not isinstance(stmt.rhs, InvokeExpr):
                continue
            if stmt.synthetic is not None and stmt.synthetic[0] == "views":
                continue
            if _resolved_stub_signature(program, stmt.rhs) not in FIND_VIEW_STUBS:
                continue
            found_var = stmt.lhs
            cast_index = None
            for j in range(i + 1, len(method.body)):
                later = method.body[j]
                if (
                    isinstance(later, Assign)
                    and isinstance(later.rhs, Cast)
                    and later.rhs.var == found_var
                    and program.is_subtype(later.rhs.type_name, VIEW_CLASS)
                ):
                    cast_index = j
                    break
                if later.writes() == found_var:
                    break
            if cast_index is not None:
                cast_stmt = method.body[cast_index]
                if cast_stmt.synthetic == ("views", stmt.uid):
                    continue  # this lookup was patched on an earlier run
                replacement = Assign(
                    lhs=cast_stmt.lhs,
                    rhs=NewObject(cast_stmt.rhs.type_name),
                )
                _mark(program, replacement, "views", stmt.uid)
                method.body[cast_index] = replacement
                report.replaced.append(replacement.uid)
            else:
                if _already_injected(method, i, "views", stmt.uid):
                    continue
                shadow = Assign(lhs=found_var, rhs=NewObject(VIEW_CLASS))
                _mark(program, shadow, "views", stmt.uid)
                method.body.insert(i + 1, shadow)
                report.injected.append(shadow.uid)
    program.rebuild_index()
    return report


# ------------------------------------------------------------- async pass


def sequentialize_async(program: Program) -> PatchReport:
    """Make asynchronous hand-off order explicit in the code itself."""
    report = PatchReport("async")
    counter = 0
    for method in list(program.app_methods()):
        i = 0
        while i < len(method.body):
            stmt = method.body[i]
            invoke = None
            if isinstance(stmt, InvokeStmt):
                invoke = stmt.invoke
            elif isinstance(stmt, Assign) and isinstance(stmt.rhs, InvokeExpr):
                invoke = stmt.rhs
            if invoke is None or invoke.kind == "static":
                i += 1
                continue
            signature = _resolved_stub_signature(program, invoke)

            if signature == EXECUTE_STUB and not isinstance(invoke.receiver, NullConst):
                if stmt.synthetic is not None and stmt.synthetic[0] == "async":
                    i += 1
                    continue
                receiver = invoke.args[0]
                payload = invoke.args[1] if len(invoke.args) > 1 else _null()
                task_cls = invoke.class_name
                origin = stmt.uid
                result_var = f"r$async{counter}"
                counter += 1

                def call(name: str, args: tuple[Operand, ...]) -> InvokeExpr:
                    return InvokeExpr(
                        kind="virtual",
                        class_name=task_cls,
                        method_name=name,
                        args=args,
                    )

                chain: list[Statement] = [
                    InvokeStmt(invoke=call("onPreExecute", (receiver,))),
                    Assign(
                        lhs=result_var,
                        rhs=call("doInBackground", (receiver, payload)),
                    ),
                    InvokeStmt(invoke=call("onProgressUpdate", (receiver, _null()))),
                    InvokeStmt(
                        invoke=call("onPostExecute", (receiver, Var(result_var)))
                    ),
                ]
                if isinstance(stmt, Assign) and isinstance(receiver, Var):
                    chain.append(Assign(lhs=stmt.lhs, rhs=Cast(task_cls, receiver.name)))
                for new_stmt in chain:
                    _mark(program, new_stmt, "async", origin)
                method.body[i : i + 1] = chain
                report.replaced.append(origin)
                report.injected.extend(s.uid for s in chain)
                i += len(chain)
                continue

            if signature == SEND_MESSAGE_STUB:
                origin = stmt.uid
                if not _already_injected(method, i, "async", origin):
                    handle = InvokeStmt(
                        invoke=InvokeExpr(
                            kind="virtual",
                            class_name=invoke.class_name,
                            method_name="handleMessage",
                            args=invoke.args,
                        )
                    )
                    _mark(program, handle, "async", origin)
                    method.body.insert(i + 1, handle)
                    report.injected.append(handle.uid)

            elif signature in RUNNABLE_STUBS:
                origin = stmt.uid
                task = invoke.args[1] if len(invoke.args) > 1 else _null()
                if not isinstance(task, NullConst) and not _already_injected(
                    method, i, "async", origin
                ):
                    run = InvokeStmt(
                        invoke=InvokeExpr(
                            kind="interface",
                            class_name=RUNNABLE_CLASS,
                            method_name="run",
                            args=(task,),
                        )
                    )
                    _mark(program, run, "async", origin)
                    method.body.insert(i + 1, run)
                    report.injected.append(run.uid)
            i += 1
    program.rebuild_index()
    return report


# --------------------------------------------------------- listeners pass


def inject_listener_callbacks(program: Program) -> PatchReport:
    """Arm each listener registration with an explicit callback call."""
    report = PatchReport("listeners")
    table = load_listener_table()
    for method in list(program.app_methods()):
        i = 0
        while i < len(method.body):
            stmt = method.body[i]
            invoke = None
            if isinstance(stmt, InvokeStmt):
                invoke = stmt.invoke
            elif isinstance(stmt, Assign) and isinstance(stmt.rhs, InvokeExpr):
                invoke = stmt.rhs
            if invoke is None or invoke.kind == "static":
                i += 1
                continue
            name = invoke.method_name
            looks_like_registration = name.startswith("setOn") and name.endswith(
                "Listener"
            )
            if not looks_like_registration:
                i += 1
                continue
            target = program.resolve_method(
                invoke.class_name, invoke.method_name, invoke.arity
            )
            spec = table.get(target.signature) if target is not None else None
            if spec is None:
                report.warnings.append(
                    f"unmodeled listener registration "
                    f"{invoke.class_name}.{name} at uid {stmt.uid}"
                )
                i += 1
                continue
            listener = invoke.args[1] if len(invoke.args) > 1 else _null()
            if isinstance(listener, NullConst):
                i += 1
                continue
            origin = stmt.uid
            if _already_injected(method, i, "listeners", origin):
                i += 1
                continue
            listener_cls = target.params[0][0]
            args: list[Operand] = [listener]
            for token in spec.recipe:
                if token == "receiver":
                    args.append(invoke.args[0])
                elif token == "zero":
                    args.append(IntConst(0))
                else:
                    args.append(_null())
            callback = InvokeStmt(
                invoke=InvokeExpr(
                    kind="interface",
                    class_name=listener_cls,
                    method_name=spec.callback,
                    args=tuple(args),
                )
            )
            _mark(program, callback, "listeners", origin)
            method.body.insert(i + 1, callback)
            report.injected.append(callback.uid)
            i += 2
    program.rebuild_index()
    for message in report.warnings:
        log.warning(message)
    return report


# ---------------------------------------------------------- adapters pass


def inject_adapter_callbacks(program: Program) -> PatchReport:
    """Follow setAdapter with one explicit row construction."""
    report = PatchReport("adapters")
    counter = 0
    for method in list(program.app_methods()):
        i = 0
        while i < len(method.body):
            stmt = method.body[i]
            invoke = None
            if isinstance(stmt, InvokeStmt):
                invoke = stmt.invoke
            elif isinstance(stmt, Assign) and isinstance(stmt.rhs, InvokeExpr):
                invoke = stmt.rhs
            if (
                invoke is None
                or invoke.kind == "static"
                or _resolved_stub_signature(program, invoke) != SET_ADAPTER_STUB
            ):
                i += 1
                continue
            adapter = invoke.args[1] if len(invoke.args) > 1 else _null()
            if isinstance(adapter, NullConst):
                i += 1
                continue
            origin = stmt.uid
            if _already_injected(method, i, "adapters", origin):
                i += 1
                continue
            row = Assign(
                lhs=f"r$row{counter}",
                rhs=InvokeExpr(
                    kind="interface",
                    class_name=ADAPTER_CLASS,
                    method_name="getView",
                    args=(adapter, IntConst(0), _null(), invoke.args[0]),
                ),
            )
            counter += 1
            _mark(program, row, "adapters", origin)
            method.body.insert(i + 1, row)
            report.injected.append(row.uid)
            i += 2
    program.rebuild_index()
    return report


ALL_PASSES = (
    patch_view_allocations,
    sequentialize_async,
    inject_listener_callbacks,
    inject_adapter_callbacks,
)


def augment(program: Program) -> list[PatchReport]:
    """Run every rewrite once, in order."""
    return [p(program) for p in ALL_PASSES]


# -------------------------------------------------------------- call graph


class CallGraph:
    """Site-level call edges plus the reachable-method closure."""

    def __init__(self, program: Program, entries: list[MethodDef]):
        self.program = program
        self.entries = entries
        self.reachable: set[str] = set()  # method signatures
        self.instantiated: set[str] = set()
        self._site_edges: dict[int, tuple[MethodDef, ...]] = {}
        self._callers: dict[str, set[int]] = {}
        self._site_owner: dict[int, MethodDef] = {}
        self._methods: dict[str, MethodDef] = {}
        self._build()

    # public API ------------------------------------------------------

    def callees_at(self, uid: int) -> tuple[MethodDef, ...]:
        return self._site_edges.get(uid, ())

    def callers_of(self, method: MethodDef | str) -> list[int]:
        signature = method if isinstance(method, str) else method.signature
        return sorted(self._callers.get(signature, ()))

    def caller_of_site(self, uid: int) -> MethodDef:
        return self._site_owner[uid]

    def is_reachable(self, method: MethodDef | str) -> bool:
        signature = method if isinstance(method, str) else method.signature
        return signature in self.reachable

    def reachable_app_methods(self) -> list[MethodDef]:
        return [
            m
            for s, m in sorted(self._methods.items())
            if s in self.reachable and not m.is_stub
        ]

    def method_by_signature(self, signature: str) -> MethodDef | None:
        found = self._methods.get(signature)
        if found is not None:
            return found
        for method in self.program.methods():
            if method.signature == signature:
                return method
        return None

    def edge_count(self) -> int:
        return sum(len(t) for t in self._site_edges.values())

    def call_sites_in(self, method: MethodDef) -> list[int]:
        return [
            s.uid
            for s in method.body
            if (isinstance(s, InvokeStmt))
            or (isinstance(s, Assign) and isinstance(s.rhs, InvokeExpr))
        ]

    # construction ----------------------------------------------------

    def _invoke_of(self, stmt: Statement) -> InvokeExpr | None:
        if isinstance(stmt, InvokeStmt):
            return stmt.invoke
        if isinstance(stmt, Assign) and isinstance(stmt.rhs, InvokeExpr):
            return stmt.rhs
        return None

    def _dispatch(self, invoke: InvokeExpr) -> list[MethodDef]:
        resolve = self.program.resolve_method
        if invoke.kind in ("static", "special"):
            target = resolve(invoke.class_name, invoke.method_name, invoke.arity)
            return [target] if target is not None else []
        # virtual/interface: app candidates need an instantiated class
        targets: dict[str, MethodDef] = {}
        for class_name in self.instantiated:
            if not self.program.is_subtype(class_name, invoke.class_name):
                continue
            target = resolve(class_name, invoke.method_name, invoke.arity)
            if target is not None and not target.is_stub:
                targets[target.signature] = target
        if not targets:
            target = resolve(invoke.class_name, invoke.method_name, invoke.arity)
            if target is not None and target.is_stub:
                return [target]
            return []
        return list(targets.values())

    def _closure(self) -> None:
        self.reachable = set()
        self._site_edges = {}
        self._callers = {}
        self._site_owner = {}
        worklist = list(self.entries)
        for entry in worklist:
            self.reachable.add(entry.signature)
            self._methods[entry.signature] = entry
        while worklist:
            method = worklist.pop()
            for stmt in method.body:
                invoke = self._invoke_of(stmt)
                if invoke is None:
                    continue
                self._site_owner[stmt.uid] = method
                targets = self._dispatch(invoke)
                self._site_edges[stmt.uid] = tuple(targets)
                for target in targets:
                    self._methods[target.signature] = target
                    self._callers.setdefault(target.signature, set()).add(stmt.uid)
                    if target.signature not in self.reachable:
                        self.reachable.add(target.signature)
                        if not target.is_stub:
                            worklist.append(target)

    def _build(self) -> None:
        # alternate closure and instantiation harvesting to a fixpoint;
        # both grow monotonically so this terminates
        self.instantiated = set()
        while True:
            self._closure()
            found = set(self.instantiated)
            for signature in self.reachable:
                method = self._methods[signature]
                for stmt in method.body:
                    if isinstance(stmt, Assign) and isinstance(stmt.rhs, NewObject):
                        found.add(stmt.rhs.type_name)
            if found == self.instantiated:
                break
            self.instantiated = found


def build_call_graph(program: Program, entries: list[MethodDef] | None = None) -> CallGraph:
    if entries is None:
        entry_cls = program.classes.get(ENTRY_CLASS)
        if entry_cls is None:
            raise ValueError("no entry point; run synthesize_entry_point first")
        entries = [entry_cls.methods[(ENTRY_METHOD, 0)]]
    return CallGraph(program, entries)


# -------------------------------------------------------------------- ICFG


class Icfg:
    """Statement-level flow with call and return edges.

    Nodes are statement uids. Within a method, edges follow the local
    control flow; at a call site with app callees, a call edge leads to
    each callee's first statement and return edges lead from each of the
    callee's return statements back to the site's local successors.
    """

    def __init__(self, program: Program, graph: CallGraph):
        self.program = program
        self.graph = graph
        self._intra_succs: dict[int, list[int]] = {}
        self._intra_preds: dict[int, list[int]] = {}
        for method in program.methods():
            if not method.body:
                continue
            preds = method_preds(method)
            for i, stmt in enumerate(method.body):
                self._intra_preds[stmt.uid] = [method.body[j].uid for j in preds[i]]
        for method in program.methods():
            if not method.body:
                continue
            succs = method_cfg(method)
            for i, stmt in enumerate(method.body):
                self._intra_succs[stmt.uid] = [method.body[j].uid for j in succs[i]]

    def intra_succs(self, uid: int) -> list[int]:
        return self._intra_succs.get(uid, [])

    def intra_preds(self, uid: int) -> list[int]:
        return self._intra_preds.get(uid, [])

    def call_edges(self, uid: int) -> list[int]:
        """First-statement uids of app callees at this site."""
        out = []
        for target in self.graph.callees_at(uid):
            if not target.is_stub and target.body:
                out.append(target.body[0].uid)
        return out

    def return_edges(self, uid: int) -> list[int]:
        """Return-statement uids of app callees at this site."""
        out = []
        for target in self.graph.callees_at(uid):
            if target.is_stub:
                continue
            for stmt in target.body:
                if isinstance(stmt, Return):
                    out.append(stmt.uid)
        return out

    def entry_sites(self, method: MethodDef | str) -> list[int]:
        """Call sites anywhere in the program that enter this method."""
        return self.graph.callers_of(method)
