"""Demand-driven resolution of variables to their allocation sites.

Each query asks: which allocations can this variable hold right before
this statement runs? Resolution walks the inter-procedural control flow
backward, flow-sensitively, tracking an access path (base variable plus
a bounded field chain). Call sites entered on the way down are recorded
as a call string up to a fixed depth; past that the walk widens to every
caller. Platform calls are opaque dead ends unless a transparent
transfer rule says the value passes straight through (builder chains,
fragment transactions, inflater lookups).

Besides plain `new` expressions, constants, resource ids, final fields,
inflate calls, and the rewritten view lookups all count as allocation
sites, since the GUI model is assembled out of exactly those.

Every query carries a wall-clock budget. An expired budget stops the
walk and returns whatever sites were found, flagged incomplete.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from importlib import resources as importlib_resources
from typing import Optional

from .errors import InvalidQueryError, UiminerError
from .callgraph import FIND_VIEW_STUBS, Icfg
from .ir.model import (
    Assign,
    Cast,
    ConstInt,
    ConstNull,
    ConstString,
    FieldLoad,
    FieldStore,
    InvokeExpr,
    InvokeStmt,
    MethodDef,
    NewObject,
    NullConst,
    ResConst,
    ResIdConst,
    ResourceRef,
    Return,
    StrConst,
    Var,
)

DEFAULT_QUERY_BUDGET = 20.0  # seconds, per query

PLATFORM_PREFIXES = ("android.", "androidx.", "java.", "javax.")

INFLATE_STUBS = {
    "android.view.LayoutInflater.inflate/2",
    "android.view.LayoutInflater.inflate/3",
}

STRINGBUILDER = "java.lang.StringBuilder"

# allocation site kinds
NEW_OBJECT = "new"
STRING_CONST = "string"
RES_ID_CONST = "res"
FINAL_FIELD = "finalfield"
INFLATE_CALL = "inflate"
PATCHED_VIEW_ALLOC = "view"

# field-chain element standing for "any suffix" once the bound is hit
WILDCARD = "*"


@dataclass(frozen=True)
class TransferRule:
    signature: str
    source: str  # "receiver" | "param<k>"
    dest: str  # "return" | "receiver"

    def source_operand(self, invoke: InvokeExpr):
        if self.source == "receiver":
            return invoke.receiver
        index = int(self.source[len("param") :])
        call_args = invoke.call_args
        return call_args[index] if index < len(call_args) else None


def load_transfer_table(text: Optional[str] = None) -> dict[str, TransferRule]:
    if text is None:
        text = (
            importlib_resources.files("uiminer.data")
            .joinpath("transfers.tsv")
            .read_text(encoding="utf-8")
        )
    table: dict[str, TransferRule] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise UiminerError(f"malformed transfer rule: {raw!r}")
        signature, source, dest = parts
        if not source.startswith("from:") or not dest.startswith("to:"):
            raise UiminerError(f"malformed transfer rule: {raw!r}")
        table[signature] = TransferRule(
            signature, source[len("from:") :], dest[len("to:") :]
        )
    return table


@dataclass(frozen=True)
class AnalysisConfig:
    query_budget: float = DEFAULT_QUERY_BUDGET
    call_context_depth: int = 3
    access_path_bound: int = 5
    platform_prefixes: tuple[str, ...] = PLATFORM_PREFIXES
    transfers: Optional[dict[str, TransferRule]] = None

    def __post_init__(self):
        if self.call_context_depth < 1:
            raise InvalidQueryError("call_context_depth must be >= 1")
        if self.access_path_bound < 1:
            raise InvalidQueryError("access_path_bound must be >= 1")

    def transfer_table(self) -> dict[str, TransferRule]:
        return self.transfers if self.transfers is not None else _default_transfers()


_TRANSFERS_CACHE: Optional[dict[str, TransferRule]] = None


def _default_transfers() -> dict[str, TransferRule]:
    global _TRANSFERS_CACHE
    if _TRANSFERS_CACHE is None:
        _TRANSFERS_CACHE = load_transfer_table()
    return _TRANSFERS_CACHE


@dataclass(frozen=True)
class Query:
    variable: str
    at: int  # statement uid; the value is observed just before it runs
    scope: Optional[frozenset[str]] = None  # method signatures the walk may enter


@dataclass(frozen=True)
class AllocationSite:
    kind: str
    uid: int
    type_name: Optional[str] = None  # NEW_OBJECT / PATCHED_VIEW_ALLOC
    text: Optional[str] = None  # STRING_CONST / FINAL_FIELD with string init
    ref: Optional[ResourceRef] = None  # RES_ID_CONST / literal-id view lookups
    origin_uid: Optional[int] = None  # PATCHED_VIEW_ALLOC: the lookup call

    def __str__(self) -> str:
        detail = self.type_name or self.text or (str(self.ref) if self.ref else "")
        return f"{self.kind}@{self.uid}({detail})"


@dataclass(frozen=True)
class Resolution:
    sites: frozenset[AllocationSite]
    aliases: frozenset[tuple[str, int]]
    complete: bool
    elapsed: float


@dataclass(frozen=True)
class StringResolution:
    values: frozenset[str]  # fully resolved constant strings
    fragments: frozenset[str]  # known pieces of partially known strings
    sites: frozenset[AllocationSite]  # raw sites (resource ids live here)
    partial: bool
    complete: bool
    elapsed: float


# ------------------------------------------------------------------ internals


def _maybe_exhausted(fields: tuple[str, ...]) -> bool:
    """True when the tracked path may already name the value itself.

    An empty path certainly does; a lone wildcard stands for a truncated
    suffix of unknown length, which includes length zero.
    """
    return not fields or fields == (WILDCARD,)


@dataclass(frozen=True)
class _State:
    method: str  # signature
    index: int  # path holds just before body[index]
    base: str
    fields: tuple[str, ...]
    ctx: tuple[int, ...]  # call-site uids entered on the way down


class _Budget:
    def __init__(self, seconds: float):
        self.started = time.monotonic()
        self.deadline = self.started + seconds
        self.expired = False

    def check(self) -> bool:
        if not self.expired and time.monotonic() > self.deadline:
            self.expired = True
        return self.expired

    def elapsed(self) -> float:
        return time.monotonic() - self.started


class _Resolver:
    """One top-level query plus its recursive alias sub-queries."""

    def __init__(self, icfg: Icfg, config: AnalysisConfig, budget: _Budget):
        self.icfg = icfg
        self.program = icfg.program
        self.graph = icfg.graph
        self.config = config
        self.budget = budget
        self.transfers = config.transfer_table()
        # memo for alias sub-queries: (uid, var) -> sites or None (running)
        self._base_cache: dict[tuple[int, str], Optional[frozenset[AllocationSite]]] = {}
        self._anchor: Optional[tuple[str, int]] = None  # current query point

    # -------------------------------------------------------------- plumbing

    def _method_at(self, uid: int) -> tuple[MethodDef, int]:
        try:
            return self.program.stmt_at(uid)
        except KeyError:
            raise InvalidQueryError(f"no statement with uid {uid}")

    def _in_scope(self, scope: Optional[frozenset[str]], signature: str) -> bool:
        return scope is None or signature in scope

    def _is_platform(self, class_name: str) -> bool:
        return class_name.startswith(self.config.platform_prefixes)

    def _resolved_stub(self, invoke: InvokeExpr) -> Optional[str]:
        target = self.program.resolve_method(
            invoke.class_name, invoke.method_name, invoke.arity
        )
        if target is not None and target.is_stub:
            return target.signature
        return None

    def _literal_site(self, operand, uid: int) -> Optional[AllocationSite]:
        if isinstance(operand, (StrConst, ConstString)):
            return AllocationSite(STRING_CONST, uid, text=operand.value)
        if isinstance(operand, (ResConst, ResIdConst)):
            return AllocationSite(RES_ID_CONST, uid, ref=operand.ref)
        return None

    def _allocation_for_new(self, stmt: Assign, uid: int) -> AllocationSite:
        rhs = stmt.rhs
        if stmt.synthetic is not None and stmt.synthetic[0] == "views":
            origin = stmt.synthetic[1]
            ref = None
            if self.program.has_stmt(origin):
                lookup = self.program.statement(origin)
                if isinstance(lookup, Assign) and isinstance(lookup.rhs, InvokeExpr):
                    args = lookup.rhs.call_args
                    if args and isinstance(args[0], ResConst):
                        ref = args[0].ref
            return AllocationSite(
                PATCHED_VIEW_ALLOC,
                uid,
                type_name=rhs.type_name,
                ref=ref,
                origin_uid=origin,
            )
        return AllocationSite(NEW_OBJECT, uid, type_name=rhs.type_name)

    def _push_ctx(self, ctx: tuple[int, ...], uid: int) -> tuple[int, ...]:
        return (ctx + (uid,))[-self.config.call_context_depth :]

    def _map_arg_to_param(
        self, callee: MethodDef, base: str
    ) -> Optional[int]:
        """Index into invoke.args that binds this callee-local name."""
        if not callee.is_static:
            if base == "this":
                return 0
            for k, name in enumerate(callee.param_names):
                if name == base:
                    return k + 1
            return None
        for k, name in enumerate(callee.param_names):
            if name == base:
                return k
        return None

    def _param_for_arg_index(
        self, callee: MethodDef, index: int
    ) -> Optional[str]:
        """Callee-local name bound by invoke.args[index]."""
        if not callee.is_static:
            if index == 0:
                return "this"
            index -= 1
        names = callee.param_names
        return names[index] if index < len(names) else None

    # ------------------------------------------------------------ the engine

    def resolve_base(
        self, variable: str, at: int, scope: Optional[frozenset[str]]
    ) -> tuple[frozenset[AllocationSite], bool]:
        """Backward walk for a plain variable (used by alias sub-queries)."""
        key = (at, variable)
        cached = self._base_cache.get(key)
        if cached is not None:
            return cached, True
        if key in self._base_cache:
            # re-entrant: a cyclic alias question; give up on precision
            return frozenset(), False
        self._base_cache[key] = None
        sites, exhaustive = self._run(variable, at, scope)
        if exhaustive:
            self._base_cache[key] = sites
        else:
            del self._base_cache[key]
        return sites, exhaustive

    def _may_alias(
        self,
        left: str,
        right: str,
        at: int,
        scope: Optional[frozenset[str]],
    ) -> bool:
        if left == right:
            return True
        left_sites, left_done = self.resolve_base(left, at, scope)
        right_sites, right_done = self.resolve_base(right, at, scope)
        if not left_done or not right_done:
            return True  # cannot rule it out
        return bool(left_sites & right_sites)

    def _run(
        self, variable: str, at: int, scope: Optional[frozenset[str]]
    ) -> tuple[frozenset[AllocationSite], bool]:
        """Returns (sites, exhaustive). Not exhaustive once the budget dies."""
        method, index = self._method_at(at)
        saved_anchor = self._anchor
        self._anchor = (method.signature, index)
        try:
            return self._run_inner(method, index, variable, scope)
        finally:
            self._anchor = saved_anchor

    def _run_inner(
        self,
        method: MethodDef,
        index: int,
        variable: str,
        scope: Optional[frozenset[str]],
    ) -> tuple[frozenset[AllocationSite], bool]:
        sites: set[AllocationSite] = set()
        start = _State(method.signature, index, variable, (), ())
        worklist = [start]
        seen = {start}
        exhaustive = True

        def push(state: _State) -> None:
            if len(state.fields) > self.config.access_path_bound:
                state = replace(
                    state, fields=state.fields[: self.config.access_path_bound] + (WILDCARD,)
                )
            if state not in seen:
                seen.add(state)
                worklist.append(state)

        while worklist:
            if self.budget.check():
                exhaustive = False
                break
            state = worklist.pop()
            owner = self.graph.method_by_signature(state.method)
            if owner is None:
                continue
            preds = self.icfg.intra_preds(owner.body[state.index].uid)
            if state.index == 0:
                self._entry_hop(owner, state, sites, push, scope)
            for pred_uid in preds:
                pred_method, pred_index = self.program.stmt_at(pred_uid)
                self._transfer(
                    pred_method, pred_index, state, sites, push, scope
                )
        if self.budget.expired:
            exhaustive = False
        return frozenset(sites), exhaustive

    # ------------------------------------------------- statement transfer

    def _transfer(self, method, index, state, sites, push, scope) -> None:
        stmt = method.body[index]
        base, fields, ctx = state.base, state.fields, state.ctx
        here = replace(state, index=index)

        if isinstance(stmt, Assign):
            if stmt.lhs == base:
                self._transfer_def(method, index, stmt, state, sites, push, scope)
                return
            if isinstance(stmt.rhs, InvokeExpr) and fields:
                self._enter_call_for_fields(
                    method, index, stmt.rhs, state, push, scope
                )
            push(here)
            return

        if isinstance(stmt, FieldStore) and fields:
            head, rest = fields[0], fields[1:]
            if head == stmt.field_name or head == WILDCARD:
                # a wildcard head stands for any remaining suffix, so the
                # store may or may not be the one that matters: keep it
                consumed_fields = rest if head != WILDCARD else fields
                if stmt.obj == base and head != WILDCARD:
                    # same base name: nothing redefined it on this walk,
                    # so the store must hit our object
                    self._consume_store(
                        method, index, stmt, consumed_fields, state, sites, push
                    )
                    return
                if stmt.obj == base or self._may_alias(
                    stmt.obj, base, stmt.uid, scope
                ):
                    self._consume_store(
                        method, index, stmt, consumed_fields, state, sites, push
                    )
                    push(here)  # weak update: the store may miss our object
                    return
            push(here)
            return

        if isinstance(stmt, InvokeStmt) and fields:
            self._enter_call_for_fields(method, index, stmt.invoke, state, push, scope)
            push(here)
            return

        # conditions, labels, gotos, returns, plain calls: no effect
        push(here)

    def _transfer_def(self, method, index, stmt, state, sites, push, scope) -> None:
        rhs = stmt.rhs
        base, fields, ctx = state.base, state.fields, state.ctx

        if isinstance(rhs, NewObject):
            if _maybe_exhausted(fields):
                sites.add(self._allocation_for_new(stmt, stmt.uid))
            # a fresh object's fields hold nothing older than the
            # allocation; aliased stores were already examined en route
            return
        if isinstance(rhs, (ConstString, ResIdConst)):
            if _maybe_exhausted(fields):
                site = self._literal_site(rhs, stmt.uid)
                if site is not None:
                    sites.add(site)
            return
        if isinstance(rhs, (ConstInt, ConstNull)):
            return
        if isinstance(rhs, Var):
            push(replace(state, index=index, base=rhs.name))
            return
        if isinstance(rhs, Cast):
            push(replace(state, index=index, base=rhs.var))
            return
        if isinstance(rhs, FieldLoad):
            decl = self._final_decl(method, rhs)
            if decl is not None and not fields:
                sites.add(self._final_site(decl, stmt.uid))
                return
            push(
                replace(
                    state,
                    index=index,
                    base=rhs.var,
                    fields=(rhs.field_name,) + fields,
                )
            )
            return
        if isinstance(rhs, InvokeExpr):
            self._transfer_call_result(method, index, rhs, state, sites, push, scope)
            return

    def _final_decl(self, method, load: FieldLoad):
        owner_type = method.local_types().get(load.var)
        if owner_type is None:
            return None
        decl = self.program.resolve_field(owner_type, load.field_name)
        if decl is not None and decl.final and decl.init is not None:
            return decl
        return None

    def _final_site(self, decl, uid: int) -> AllocationSite:
        init = decl.init
        if isinstance(init, StrConst):
            return AllocationSite(FINAL_FIELD, uid, text=init.value)
        if isinstance(init, ResConst):
            return AllocationSite(FINAL_FIELD, uid, ref=init.ref)
        return AllocationSite(FINAL_FIELD, uid, text=str(init))

    def _transfer_call_result(
        self, method, index, invoke, state, sites, push, scope
    ) -> None:
        stmt = method.body[index]
        fields = state.fields
        stub = self._resolved_stub(invoke)

        if stub is not None:
            rule = self.transfers.get(stub)
            if rule is not None and rule.dest == "return":
                operand = rule.source_operand(invoke)
                self._continue_with_operand(operand, index, state, sites, push)
                return
            if stub in INFLATE_STUBS and _maybe_exhausted(fields):
                args = invoke.call_args
                ref = args[0].ref if args and isinstance(args[0], ResConst) else None
                sites.add(AllocationSite(INFLATE_CALL, stmt.uid, ref=ref))
                return
            if stub in FIND_VIEW_STUBS and _maybe_exhausted(fields):
                # unpatched lookup: surface it like the rewrite would so
                # ids stay recoverable even without augmentation
                args = invoke.call_args
                ref = args[0].ref if args and isinstance(args[0], ResConst) else None
                sites.add(
                    AllocationSite(
                        PATCHED_VIEW_ALLOC,
                        stmt.uid,
                        type_name="android.view.View",
                        ref=ref,
                        origin_uid=stmt.uid,
                    )
                )
                return
            # a platform-declared target can still dispatch to app
            # overrides (Adapter.getView, Runnable.run); only calls with
            # no app implementation are opaque
            if not any(
                not c.is_stub and c.body for c in self.graph.callees_at(stmt.uid)
            ):
                return

        for callee in self.graph.callees_at(stmt.uid):
            if callee.is_stub or not callee.body:
                continue
            if not self._in_scope(scope, callee.signature):
                continue
            ctx = self._push_ctx(state.ctx, stmt.uid)
            for i, ret in enumerate(callee.body):
                if not isinstance(ret, Return) or ret.value is None:
                    continue
                returned = ret.value
                if isinstance(returned, Var):
                    push(
                        _State(callee.signature, i, returned.name, fields, ctx)
                    )
                elif _maybe_exhausted(fields):
                    site = self._literal_site(returned, ret.uid)
                    if site is not None:
                        sites.add(site)

    def _continue_with_operand(self, operand, index, state, sites, push) -> None:
        if operand is None or isinstance(operand, NullConst):
            return
        if isinstance(operand, Var):
            push(replace(state, index=index, base=operand.name))
            return
        if _maybe_exhausted(state.fields):
            owner = self.graph.method_by_signature(state.method)
            site = self._literal_site(operand, owner.body[index].uid)
            if site is not None:
                sites.add(site)

    def _consume_store(
        self, method, index, stmt, rest_fields, state, sites, push
    ) -> None:
        value = stmt.value
        if isinstance(value, Var):
            targets = [
                replace(state, index=index, base=value.name, fields=rest_fields)
            ]
            if (
                rest_fields
                and self._anchor is not None
                and self._anchor[0] == method.signature
            ):
                # hops beyond the first may be written between this store
                # and the query point; rescan from the query anchor too
                a_sig, a_index = self._anchor
                targets.append(
                    _State(a_sig, a_index, value.name, rest_fields, ())
                )
            for target in targets:
                push(target)
                if rest_fields == (WILDCARD,):
                    # the truncated suffix may already be exhausted
                    push(replace(target, fields=()))
        elif _maybe_exhausted(rest_fields):
            site = self._literal_site(value, stmt.uid)
            if site is not None:
                sites.add(site)

    def _enter_call_for_fields(
        self, method, index, invoke, state, push, scope
    ) -> None:
        """A call that may store into our tracked field chain."""
        stmt = method.body[index]
        if self._resolved_stub(invoke) is not None:
            return  # platform calls do not touch app heap state
        involved = [
            i for i, arg in enumerate(invoke.args)
            if isinstance(arg, Var) and arg.name == state.base
        ]
        if not involved:
            return
        for callee in self.graph.callees_at(stmt.uid):
            if callee.is_stub or not callee.body:
                continue
            if not self._in_scope(scope, callee.signature):
                continue
            ctx = self._push_ctx(state.ctx, stmt.uid)
            for arg_index in involved:
                name = self._param_for_arg_index(callee, arg_index)
                if name is None:
                    continue
                for i, ret in enumerate(callee.body):
                    if isinstance(ret, Return):
                        push(_State(callee.signature, i, name, state.fields, ctx))

    # ------------------------------------------------------- entry handling

    def _entry_hop(self, owner, state, sites, push, scope) -> None:
        base = state.base
        if owner.is_static:
            if base not in owner.param_names:
                return
        elif base != "this" and base not in owner.param_names:
            return
        arg_index = self._map_arg_to_param(owner, base)
        if arg_index is None:
            return

        if state.ctx:
            caller_uids = [state.ctx[-1]]
            ctx = state.ctx[:-1]
        else:
            caller_uids = self.icfg.entry_sites(owner.signature)
            ctx = ()

        for site_uid in caller_uids:
            if not self.program.has_stmt(site_uid):
                continue
            caller, index = self.program.stmt_at(site_uid)
            if not self._in_scope(scope, caller.signature):
                continue
            call = caller.body[index]
            invoke = (
                call.invoke
                if isinstance(call, InvokeStmt)
                else call.rhs
                if isinstance(call, Assign) and isinstance(call.rhs, InvokeExpr)
                else None
            )
            if invoke is None or arg_index >= len(invoke.args):
                continue
            operand = invoke.args[arg_index]
            if isinstance(operand, Var):
                push(
                    _State(
                        caller.signature, index, operand.name, state.fields, ctx
                    )
                )
            elif _maybe_exhausted(state.fields):
                site = self._literal_site(operand, call.uid)
                if site is not None:
                    sites.add(site)


# ------------------------------------------------------------------- queries


def resolve(
    query: Query, icfg: Icfg, config: Optional[AnalysisConfig] = None
) -> Resolution:
    """Backward resolution of a variable to its allocation sites."""
    config = config or AnalysisConfig()
    if not query.variable:
        raise InvalidQueryError("query needs a variable name")
    budget = _Budget(config.query_budget)
    resolver = _Resolver(icfg, config, budget)
    sites, exhaustive = resolver._run(query.variable, query.at, query.scope)
    return Resolution(
        sites=sites,
        aliases=frozenset(),
        complete=exhaustive and not budget.expired,
        elapsed=budget.elapsed(),
    )


def resolve_aliases(
    query: Query, icfg: Icfg, config: Optional[AnalysisConfig] = None
) -> Resolution:
    """Variables in the query's method that may hold the same value.

    An alias pair (name, uid) states: right before uid runs, `name` may
    refer to one of the queried value's allocation sites.
    """
    config = config or AnalysisConfig()
    budget = _Budget(config.query_budget)
    resolver = _Resolver(icfg, config, budget)
    sites, exhaustive = resolver._run(query.variable, query.at, query.scope)
    aliases: set[tuple[str, int]] = set()
    method, _ = icfg.program.stmt_at(query.at)
    if sites:
        names = set()
        for stmt in method.body:
            names.update(stmt.reads())
            written = stmt.writes()
            if written:
                names.add(written)
        names.discard(query.variable)
        for name in sorted(names):
            if budget.check():
                exhaustive = False
                break
            other, done = resolver.resolve_base(name, query.at, query.scope)
            if other & sites:
                aliases.add((name, query.at))
            if not done:
                exhaustive = False
    return Resolution(
        sites=sites,
        aliases=frozenset(aliases),
        complete=exhaustive and not budget.expired,
        elapsed=budget.elapsed(),
    )


def resolve_string(
    query: Query, icfg: Icfg, config: Optional[AnalysisConfig] = None
) -> StringResolution:
    """Resolution specialized for string-typed values.

    Constant strings come back as values. A builder chain whose appended
    pieces are all constant concatenates them; when any piece stays
    unknown the known pieces are reported as fragments instead.
    """
    config = config or AnalysisConfig()
    budget = _Budget(config.query_budget)
    resolver = _Resolver(icfg, config, budget)
    sites, exhaustive = resolver._run(query.variable, query.at, query.scope)

    values: set[str] = set()
    fragments: set[str] = set()
    partial = False
    passthrough: set[AllocationSite] = set()
    for site in sites:
        if site.kind in (STRING_CONST, FINAL_FIELD) and site.text is not None:
            values.add(site.text)
        elif site.kind == NEW_OBJECT and site.type_name == STRINGBUILDER:
            text, pieces, complete_chain = _builder_chain(
                resolver, site, query, config
            )
            if complete_chain and text is not None:
                values.add(text)
            else:
                partial = True
                fragments.update(pieces)
        else:
            passthrough.add(site)
    return StringResolution(
        values=frozenset(values),
        fragments=frozenset(fragments),
        sites=frozenset(passthrough),
        partial=partial,
        complete=exhaustive and not budget.expired,
        elapsed=budget.elapsed(),
    )


def _builder_chain(
    resolver: _Resolver, site: AllocationSite, query: Query, config: AnalysisConfig
) -> tuple[Optional[str], list[str], bool]:
    """Concatenate a linear StringBuilder chain starting at its `new`.

    Walks forward from the allocation within its method, following the
    builder through direct copies and fluent append returns. Returns
    (text, known pieces, fully-constant?).
    """
    program = resolver.program
    method, start = program.stmt_at(site.uid)
    aliases = {method.body[start].lhs}
    pieces: list[str] = []
    all_known = True
    read_back = False  # toString() already observed the buffer
    for stmt in method.body[start + 1 :]:
        if stmt.uid == query.at:
            break  # queried use; later statements cannot affect the value
        invoke = None
        if isinstance(stmt, InvokeStmt):
            invoke = stmt.invoke
        elif isinstance(stmt, Assign) and isinstance(stmt.rhs, InvokeExpr):
            invoke = stmt.rhs
        if invoke is not None:
            receiver = invoke.receiver
            if any(
                isinstance(arg, Var) and arg.name in aliases
                for arg in invoke.call_args
            ):
                all_known = False  # escapes as an argument; callee may append
            if isinstance(receiver, Var) and receiver.name in aliases:
                stub = resolver._resolved_stub(invoke)
                if stub in (
                    f"{STRINGBUILDER}.append/1",
                    f"{STRINGBUILDER}.init/1",
                ):
                    if read_back:
                        # growth after a read: the chain is no longer linear
                        all_known = False
                    args = invoke.call_args
                    arg = args[0] if args else None
                    if isinstance(arg, StrConst):
                        pieces.append(arg.value)
                    elif isinstance(arg, Var):
                        sub, done = resolver.resolve_base(
                            arg.name, stmt.uid, query.scope
                        )
                        texts = {
                            s.text
                            for s in sub
                            if s.kind in (STRING_CONST, FINAL_FIELD)
                            and s.text is not None
                        }
                        if done and len(texts) == 1 and len(sub) == 1:
                            pieces.append(next(iter(texts)))
                        else:
                            all_known = False
                    else:
                        all_known = False
                    if isinstance(stmt, Assign):
                        aliases.add(stmt.lhs)
                elif stub == f"{STRINGBUILDER}.init/0":
                    pass  # empty buffer
                elif stub == f"{STRINGBUILDER}.toString/0":
                    read_back = True
                else:
                    all_known = False  # something else touched the builder
            continue
        if isinstance(stmt, Return):
            if isinstance(stmt.value, Var) and stmt.value.name in aliases:
                all_known = False  # escapes to the caller mid-chain
            continue
        if isinstance(stmt, FieldStore):
            if isinstance(stmt.value, Var) and stmt.value.name in aliases:
                all_known = False  # escapes to the heap
            continue
        if isinstance(stmt, Assign):
            if isinstance(stmt.rhs, Var) and stmt.rhs.name in aliases:
                aliases.add(stmt.lhs)
            elif isinstance(stmt.rhs, Cast) and stmt.rhs.var in aliases:
                aliases.add(stmt.lhs)
            elif stmt.lhs in aliases:
                aliases.discard(stmt.lhs)
    text = "".join(pieces) if all_known else None
    return text, pieces, all_known
