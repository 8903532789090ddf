"""Structural well-formedness checks over parsed programs.

Diagnostics are data, not exceptions: malformed-but-parseable code is a
fact about the analyzed app, and the miner keeps going. Each diagnostic
carries a stable code so tests and downstream filters can match on it.

Codes:
    use-before-def     a local may be read before every path assigns it
    unreachable        statement can never execute
    suspicious-cast    cast target unrelated to the inferred source type
    missing-return     non-void method falls off the end of its body
    void-return-value  void method returns an operand
    unknown-callee     invoke names a method no class in scope declares
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    PRIMITIVES,
    Assign,
    Cast,
    If,
    InvokeExpr,
    InvokeStmt,
    Label,
    MethodDef,
    Program,
    Return,
    Switch,
    method_cfg,
)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    method: str  # qualified name
    uid: int  # statement uid, -1 for method-level findings
    message: str

    def __str__(self) -> str:
        return f"{self.code}: {self.method}: {self.message}"


def validate_program(program: Program) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    for method in program.app_methods():
        out.extend(validate_method(program, method))
    return out


def validate_method(program: Program, method: MethodDef) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    reachable = _reachable_indices(method)
    out.extend(_check_reachability(method, reachable))
    out.extend(_check_defs(method, reachable))
    out.extend(_check_returns(program, method, reachable))
    out.extend(_check_casts(program, method, reachable))
    out.extend(_check_callees(program, method, reachable))
    return out


# ------------------------------------------------------------- reachability


def _reachable_indices(method: MethodDef) -> set[int]:
    if not method.body:
        return set()
    succs = method_cfg(method)
    seen = {0}
    frontier = [0]
    while frontier:
        for succ in succs[frontier.pop()]:
            if succ not in seen:
                seen.add(succ)
                frontier.append(succ)
    return seen


def _check_reachability(method: MethodDef, reachable: set[int]) -> list[Diagnostic]:
    out = []
    for i, stmt in enumerate(method.body):
        # an unreachable label is dead code, but reporting every label of a
        # shared join point would be noise; only non-label statements count
        if i not in reachable and not isinstance(stmt, Label):
            out.append(
                Diagnostic(
                    "unreachable",
                    method.qualified_name,
                    stmt.uid,
                    f"statement {stmt} can never execute",
                )
            )
    return out


# ----------------------------------------------------------- definite defs


def _check_defs(method: MethodDef, reachable: set[int]) -> list[Diagnostic]:
    """Forward may-be-undefined dataflow with intersection at joins."""
    n = len(method.body)
    if n == 0:
        return []
    succs = method_cfg(method)
    preds: list[list[int]] = [[] for _ in range(n)]
    for i, outs in enumerate(succs):
        for j in outs:
            preds[j].append(i)

    initial = set(method.param_names)
    if not method.is_static:
        initial.add("this")

    # defined[i]: locals certainly assigned before statement i runs
    bottom: set[str] | None = None  # "not yet computed"
    defined: list[set[str] | None] = [bottom] * n
    defined[0] = set(initial)
    worklist = [0]
    while worklist:
        i = worklist.pop()
        current = defined[i]
        assert current is not None
        after = set(current)
        written = method.body[i].writes()
        if written is not None:
            after.add(written)
        for j in succs[i]:
            merged = after if defined[j] is None else (defined[j] & after)
            if defined[j] is None or merged != defined[j]:
                defined[j] = merged
                worklist.append(j)

    out = []
    flagged: set[str] = set()
    for i, stmt in enumerate(method.body):
        if i not in reachable or defined[i] is None:
            continue
        for name in stmt.reads():
            if name not in defined[i] and name not in flagged:
                flagged.add(name)
                out.append(
                    Diagnostic(
                        "use-before-def",
                        method.qualified_name,
                        stmt.uid,
                        f"{name!r} may be read before assignment",
                    )
                )
    return out


# ------------------------------------------------------------------ returns


def _check_returns(
    program: Program, method: MethodDef, reachable: set[int]
) -> list[Diagnostic]:
    out = []
    falls_off = False
    if not method.body:
        falls_off = True
    else:
        succs = method_cfg(method)
        last = len(method.body) - 1
        for i in reachable:
            stmt = method.body[i]
            if isinstance(stmt, Return):
                if method.return_type == "void" and stmt.value is not None:
                    out.append(
                        Diagnostic(
                            "void-return-value",
                            method.qualified_name,
                            stmt.uid,
                            "void method returns a value",
                        )
                    )
                continue
            # execution leaves the body without a return when a non-return
            # statement has no successor, or when the trailing statement's
            # implicit fall-through edge leads past the end
            if not succs[i]:
                falls_off = True
            elif i == last and isinstance(stmt, If):
                falls_off = True
            elif i == last and isinstance(stmt, Switch) and stmt.default is None:
                falls_off = True
    if falls_off and method.return_type != "void":
        out.append(
            Diagnostic(
                "missing-return",
                method.qualified_name,
                -1,
                f"{method.return_type} method can end without a return value",
            )
        )
    return out


# -------------------------------------------------------------------- casts


def _check_casts(
    program: Program, method: MethodDef, reachable: set[int]
) -> list[Diagnostic]:
    out = []
    types = program.infer_locals(method)
    for i, stmt in enumerate(method.body):
        if i not in reachable or not isinstance(stmt, Assign):
            continue
        rhs = stmt.rhs
        if not isinstance(rhs, Cast):
            continue
        source = types.get(rhs.var, "?")
        target = rhs.type_name
        if source in ("?", "java.lang.Object") or target == "java.lang.Object":
            continue
        if source in PRIMITIVES or target in PRIMITIVES:
            related = source in PRIMITIVES and target in PRIMITIVES
        else:
            related = program.is_subtype(source, target) or program.is_subtype(
                target, source
            )
        if not related:
            out.append(
                Diagnostic(
                    "suspicious-cast",
                    method.qualified_name,
                    stmt.uid,
                    f"cast of {rhs.var!r} ({source}) to unrelated {target}",
                )
            )
    return out


# ------------------------------------------------------------------ callees


def _check_callees(
    program: Program, method: MethodDef, reachable: set[int]
) -> list[Diagnostic]:
    out = []
    for i, stmt in enumerate(method.body):
        if i not in reachable:
            continue
        invoke: InvokeExpr | None = None
        if isinstance(stmt, InvokeStmt):
            invoke = stmt.invoke
        elif isinstance(stmt, Assign) and isinstance(stmt.rhs, InvokeExpr):
            invoke = stmt.rhs
        if invoke is None:
            continue
        target = program.resolve_method(invoke.class_name, invoke.method_name, invoke.arity)
        if target is None:
            out.append(
                Diagnostic(
                    "unknown-callee",
                    method.qualified_name,
                    stmt.uid,
                    f"no declaration found for "
                    f"{invoke.class_name}.{invoke.method_name}/{invoke.arity}",
                )
            )
    return out
