"""Per-app GUI model assembly.

The pipeline walks one app end to end: decode the manifest and resource
table, parse the code, augment it, synthesize the lifecycle entry, then
collect points of interest (POIs) -- the framework calls that create,
attach, label, or arm widgets -- and resolve each one's operands back to
allocation sites. Resolved POIs are folded into per-activity screen
trees, fragment trees, adapter rows, dialogs, callback bindings, and
per-widget API call sets.

Every resolution runs inside the activity's calling-context scope (the
methods its lifecycle can reach), which is what keeps labels flowing
through shared helpers attached to the right screen. Expected failures
-- query timeouts, unresolvable operands, dangling inflates -- are
recorded as diagnostics on the model, never raised.
"""

from __future__ import annotations

import copy
import logging
import time
from dataclasses import dataclass, field
from importlib import resources as importlib_resources
from pathlib import Path

from .apk import load_apk
from .binres import (
    LocalePolicy,
    ResourceTable,
    decode_binary_xml,
    decode_resource_table,
    resolve_resource,
)
from .callgraph import (
    ENTRY_CLASS,
    CallGraph,
    EntryModel,
    Icfg,
    augment,
    build_call_graph,
    synthesize_entry_point,
)
from .errors import UiminerError
from .guimodel import (
    AdapterModel,
    DialogModel,
    Diagnostics,
    FragmentModel,
    GuiModel,
    Label,
    ScreenModel,
    UiNode,
)
from .ir.loader import load_prelude
from .ir.model import (
    Assign,
    If,
    IntConst,
    InvokeExpr,
    InvokeStmt,
    MethodDef,
    NewObject,
    NullConst,
    Operand,
    Program,
    ResConst,
    Return,
    StrConst,
    Var,
    method_cfg,
)
from .ir.parser import parse_program
from .layout import (
    LayoutRegistry,
    ManifestModel,
    TemplateNode,
    ViewKind,
    parse_manifest,
)
from .layout import _BARE_NAME_PREFIXES, _classification
from .listeners import load_listener_table
from .pointsto import (
    DEFAULT_QUERY_BUDGET,
    AnalysisConfig,
    Query,
    Resolution,
    resolve,
    resolve_string,
)

log = logging.getLogger(__name__)

DEFAULT_APP_BUDGET = 600.0  # seconds, whole-app wall clock

LISTENER_REGISTRATION = "ListenerRegistration"

FRAGMENT_BASE = "android.app.Fragment"
VIEW_BASE = "android.view.View"
DIALOG_BUILDER = "android.app.AlertDialog$Builder"

_DIALOG_TEXT_SETTERS = {
    "setTitle": "titles",
    "setMessage": "messages",
    "setPositiveButton": "buttons",
    "setNegativeButton": "buttons",
    "setNeutralButton": "buttons",
}


# ------------------------------------------------------------------ POIs


@dataclass(frozen=True)
class PointOfInterest:
    """One framework call the model cares about."""

    category: str
    uid: int
    method: MethodDef  # the app method containing the call
    invoke: InvokeExpr
    signature: str  # resolved stub signature


def load_poi_table() -> dict[str, str]:
    """Stub signature -> category, from the shipped table plus every
    known listener registration."""
    text = (
        importlib_resources.files("uiminer.data")
        .joinpath("pois.tsv")
        .read_text("utf-8")
    )
    table: dict[str, str] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"pois.tsv:{line_number}: expected two columns")
        table[parts[0]] = parts[1]
    for registration in load_listener_table():
        table[registration] = LISTENER_REGISTRATION
    return table


def _invoke_of(stmt) -> InvokeExpr | None:
    if isinstance(stmt, InvokeStmt):
        return stmt.invoke
    if isinstance(stmt, Assign) and isinstance(stmt.rhs, InvokeExpr):
        return stmt.rhs
    return None


def _stub_signature(program: Program, invoke: InvokeExpr) -> str | None:
    resolved = program.resolve_method(invoke.class_name, invoke.method_name, invoke.arity)
    if resolved is not None and resolved.is_stub:
        return resolved.signature
    return None


def collect_pois(program: Program, table: dict[str, str] | None = None) -> list[PointOfInterest]:
    """Scan every app method for calls in the POI table, in uid order."""
    table = table if table is not None else load_poi_table()
    pois: list[PointOfInterest] = []
    for method in program.app_methods():
        if method.class_name == ENTRY_CLASS:
            continue
        for stmt in method.body:
            invoke = _invoke_of(stmt)
            if invoke is None:
                continue
            signature = _stub_signature(program, invoke)
            if signature is None:
                continue
            category = table.get(signature)
            if category is None:
                continue
            pois.append(PointOfInterest(category, stmt.uid, method, invoke, signature))
    pois.sort(key=lambda p: p.uid)
    return pois


# ------------------------------------------------------------- build state


class _ScreenBuild:
    """Mutable per-activity state while the model is assembled."""

    def __init__(self, activity: str, scope: set[str]):
        self.activity = activity
        self.scope = scope
        self.screen = ScreenModel(activity=activity)
        self.by_id: dict[str, list[UiNode]] = {}  # "id/name" -> nodes
        self.dynamic: dict[int, UiNode] = {}  # new-site uid -> node
        self.inflated: dict[int, UiNode] = {}  # inflate uid -> returned root
        self.orphans: list[UiNode] = []  # inflated but never attached
        self.xml_onclick: list[tuple[UiNode, str]] = []


class _Deadline:
    def __init__(self, seconds: float | None):
        self._end = None if seconds is None else time.monotonic() + seconds

    def remaining(self) -> float | None:
        if self._end is None:
            return None
        return self._end - time.monotonic()

    @property
    def expired(self) -> bool:
        remaining = self.remaining()
        return remaining is not None and remaining <= 0.0


# ----------------------------------------------------------------- builder


class ModelBuilder:
    """Folds resolved POIs into a GuiModel.

    The builder owns no I/O: it takes an analyzed program (augmented,
    with a synthesized entry), the decoded resources, and a config, and
    produces the model. `mine_app` is the I/O wrapper around it.
    """

    def __init__(
        self,
        program: Program,
        icfg: Icfg,
        entry: EntryModel,
        manifest: ManifestModel,
        registry: LayoutRegistry | None = None,
        table: ResourceTable | None = None,
        config: AnalysisConfig | None = None,
        policy: LocalePolicy | None = None,
        app_budget: float | None = DEFAULT_APP_BUDGET,
    ):
        self.program = program
        self.icfg = icfg
        self.graph: CallGraph = icfg.graph
        self.entry = entry
        self.manifest = manifest
        self.registry = registry
        self.table = table
        self.config = config or AnalysisConfig()
        self.policy = policy or LocalePolicy()
        self.deadline = _Deadline(app_budget)
        self.diagnostics = Diagnostics()
        self.pois = collect_pois(program)
        self._claimed_inflates: set[int] = set()
        self._builds: dict[str, _ScreenBuild] = {}

    # ------------------------------------------------------------ queries

    def _scoped_config(self) -> AnalysisConfig | None:
        """Clip the per-query budget to the app's remaining wall clock."""
        remaining = self.deadline.remaining()
        if remaining is None:
            return self.config
        budget = min(self.config.query_budget, max(remaining, 0.0))
        return AnalysisConfig(
            query_budget=budget,
            call_context_depth=self.config.call_context_depth,
            access_path_bound=self.config.access_path_bound,
            platform_prefixes=self.config.platform_prefixes,
            transfers=self.config.transfers,
        )

    def _out_of_time(self) -> bool:
        if self.deadline.expired:
            if not self.diagnostics.app_timeout_hit:
                self.diagnostics.app_timeout_hit = True
                self.diagnostics.note("app budget exhausted; later queries skipped")
            return True
        return False

    def _resolve_sites(self, operand: Operand, uid: int, scope: set[str]):
        """Allocation sites of an operand observed just before uid."""
        if isinstance(operand, ResConst):
            return [_literal_res_site(operand, uid)], True
        if not isinstance(operand, Var):
            return [], True
        if self._out_of_time():
            return [], False
        resolution = resolve(
            Query(operand.name, uid, frozenset(scope)), self.icfg, self._scoped_config()
        )
        if not resolution.complete:
            self.diagnostics.query_timeouts += 1
        sites = sorted(resolution.sites, key=lambda s: (s.kind, s.uid, str(s)))
        return sites, resolution.complete

    def _resolve_texts(self, operand: Operand, uid: int, scope: set[str]):
        """(text, source) pairs for a CharSequence operand.

        Sources: "code" for constants built in code, "resource" for
        resource references resolved through the table.
        """
        if isinstance(operand, StrConst):
            return [(operand.value, "code")], False
        if isinstance(operand, ResConst):
            text = self._resource_text(operand.ref)
            if text is None:
                return [], False
            return [(text, "resource")], False
        if not isinstance(operand, Var):
            return [], False
        if self._out_of_time():
            return [], True
        resolution = resolve_string(
            Query(operand.name, uid, frozenset(scope)), self.icfg, self._scoped_config()
        )
        if not resolution.complete:
            self.diagnostics.query_timeouts += 1
        texts = [(value, "code") for value in sorted(resolution.values)]
        partial = resolution.partial
        for site in sorted(resolution.sites, key=lambda s: (s.kind, s.uid)):
            if site.kind == "res" and site.ref is not None and site.ref.type_name == "string":
                text = self._resource_text(site.ref)
                if text is not None:
                    texts.append((text, "resource"))
                    continue
            partial = True
        return texts, partial

    def _resource_text(self, ref) -> str | None:
        if self.table is None:
            return None
        rid = self.table.id_for_name(ref.type_name, ref.name)
        if rid is None:
            return None
        try:
            resolved = resolve_resource(self.table, rid, self.policy)
        except UiminerError:
            return None
        if resolved.value.kind == "string":
            return str(resolved.value.value)
        return None

    def _id_name(self, rid) -> str | None:
        """ResourceId -> "id/name"; falls back to the raw id."""
        if rid is None:
            return None
        if self.table is not None:
            full = self.table.name_for_id(rid)
            if full is not None:
                return full
        return f"id/0x{rid.raw:08x}"

    # ------------------------------------------------------------- scopes

    def _closure_from_sites(self, uids: list[int]) -> set[str]:
        frontier: list[MethodDef] = []
        for uid in uids:
            frontier.extend(m for m in self.graph.callees_at(uid) if not m.is_stub)
        seen: set[str] = set()
        while frontier:
            method = frontier.pop()
            if method.signature in seen:
                continue
            seen.add(method.signature)
            for uid in self.graph.call_sites_in(method):
                frontier.extend(m for m in self.graph.callees_at(uid) if not m.is_stub)
        seen.add(self.entry.method.signature)
        return seen

    def _activity_scope(self, activity: str) -> set[str]:
        return self._closure_from_sites(self.entry.activity_sites.get(activity, []))

    def _fragment_scope(self, fragment: str) -> set[str]:
        return self._closure_from_sites(self.entry.fragment_sites.get(fragment, []))

    def _scopes_containing(self, signature: str) -> list[_ScreenBuild]:
        return [sb for sb in self._builds.values() if signature in sb.scope]

    # -------------------------------------------------------------- build

    def build(self) -> GuiModel:
        model = GuiModel(
            package_name=self.manifest.package_name,
            version_name=self.manifest.version_name,
            diagnostics=self.diagnostics,
        )
        seen: set[str] = set()
        for info in self.manifest.activities:
            if info.name in seen:
                continue
            seen.add(info.name)
            sb = _ScreenBuild(info.name, set())
            self._builds[info.name] = sb
            model.screens.append(sb.screen)
            if info.name not in self.program.classes:
                self.diagnostics.note(f"manifest activity {info.name} has no code")
                continue
            sb.scope = self._activity_scope(info.name)

        for sb in self._builds.values():
            self._bind_content_views(sb)

        model.fragments = self._bind_fragments()
        model.adapters = self._bind_adapters()

        for sb in self._builds.values():
            self._materialize_dynamic(sb)
        for sb in self._builds.values():
            self._bind_labels(sb)
        for sb in self._builds.values():
            self._bind_callbacks(sb)
        for sb in self._builds.values():
            sb.screen.dialogs = self._detect_dialogs(sb)

        for sb in self._builds.values():
            screen = sb.screen
            screen.has_layout = bool(screen.roots)
            if sb.orphans:
                if screen.has_layout:
                    screen.roots.extend(sb.orphans)
                else:
                    # no content view: inflated trees have nowhere to hang
                    self.diagnostics.note(
                        f"{sb.activity}: {len(sb.orphans)} inflated tree(s) dropped "
                        "(no content view)"
                    )
            for index, root in enumerate(screen.roots):
                root.assign_paths(str(index))
        for fragment in model.fragments:
            if fragment.root is not None:
                fragment.root.assign_paths("0")
        for adapter in model.adapters:
            if adapter.row_root is not None:
                adapter.row_root.assign_paths("0")
        return model

    # ------------------------------------------------------ content views

    def _pois_in(self, sb: _ScreenBuild, category: str) -> list[PointOfInterest]:
        return [
            poi
            for poi in self.pois
            if poi.category == category and poi.method.signature in sb.scope
        ]

    def _bind_content_views(self, sb: _ScreenBuild) -> None:
        for poi in self._pois_in(sb, "SetContentView"):
            arg = poi.invoke.call_args[0]
            sites, _ = self._resolve_sites(arg, poi.uid, sb.scope)
            names = _layout_names(sites)
            if not names:
                self.diagnostics.note(
                    f"{sb.activity}: content view at uid {poi.uid} unresolved"
                )
                continue
            for name in names:
                root = self._instantiate_layout(name, sb.by_id, sb.xml_onclick)
                if root is not None:
                    sb.screen.roots.append(root)

    def _instantiate_layout(
        self,
        name: str,
        index: dict[str, list[UiNode]],
        onclick: list[tuple[UiNode, str]],
    ) -> UiNode | None:
        if self.registry is None:
            self.diagnostics.note(f"no layout registry; cannot expand {name}")
            return None
        try:
            template = self.registry.template(name)
        except UiminerError as exc:
            self.diagnostics.note(f"layout {name}: {exc}")
            return None
        return self._instantiate(template.root, index, onclick)

    def _instantiate(
        self,
        tnode: TemplateNode,
        index: dict[str, list[UiNode]],
        onclick: list[tuple[UiNode, str]],
    ) -> UiNode:
        node = UiNode(
            class_name=_qualify_class(tnode.class_name),
            kind=tnode.kind,
            view_id=self._id_name(tnode.view_id),
            fragment_class=tnode.fragment_class,
        )
        if tnode.text is not None:
            node.add_label(Label(tnode.text[0], tnode.text[1]))
        if tnode.hint is not None:
            node.add_label(Label(tnode.hint[0], tnode.hint[1]))
        if tnode.content_description is not None:
            node.add_content_description(
                Label(tnode.content_description[0], tnode.content_description[1])
            )
        node.drawables = list(tnode.drawables)
        if tnode.on_click:
            onclick.append((node, tnode.on_click))
        if node.view_id is not None:
            index.setdefault(node.view_id, []).append(node)
        for child in tnode.children:
            node.children.append(self._instantiate(child, index, onclick))
        return node

    # ---------------------------------------------------------- fragments

    def _fragment_classes(self) -> list[str]:
        out = []
        for name, cls in self.program.classes.items():
            if cls.is_framework or name == FRAGMENT_BASE:
                continue
            if self.program.is_subtype(name, FRAGMENT_BASE):
                out.append(name)
        return sorted(out)

    def _bind_fragments(self) -> list[FragmentModel]:
        models: list[FragmentModel] = []
        for cls in self._fragment_classes():
            fragment = FragmentModel(class_name=cls)
            index: dict[str, list[UiNode]] = {}
            onclick: list[tuple[UiNode, str]] = []
            fragment.root = self._fragment_tree(cls, index, onclick)

            # static placements: <fragment> hosts in already-built screens
            for sb in self._builds.values():
                for root in sb.screen.roots:
                    for node in root.iter_tree():
                        if node.kind is ViewKind.FRAGMENT_HOST and node.fragment_class == cls:
                            fragment.attachments.append(
                                (sb.activity, node.view_id, "static")
                            )

            models.append(fragment)

        # dynamic placements: FragmentTransaction.add/replace
        for poi in self.pois:
            if poi.category not in ("FragmentAdd", "FragmentReplace"):
                continue
            owners = self._scopes_containing(poi.method.signature)
            if not owners:
                continue
            container_arg, fragment_arg = poi.invoke.call_args[:2]
            container = (
                f"id/{container_arg.ref.name}"
                if isinstance(container_arg, ResConst)
                else None
            )
            how = "transaction"
            for sb in owners:
                sites, _ = self._resolve_sites(fragment_arg, poi.uid, sb.scope)
                classes = sorted(
                    s.type_name for s in sites if s.kind == "new" and s.type_name
                )
                if not classes:
                    self.diagnostics.note(
                        f"{sb.activity}: fragment at uid {poi.uid} unresolved"
                    )
                for fragment in models:
                    if fragment.class_name in classes:
                        fragment.attachments.append((sb.activity, container, how))

        # attached fragments see their host's screen: merge trees into the
        # host index and extend the host scope with the fragment's methods
        for fragment in models:
            fragment.attachments.sort(key=lambda a: (a[0], a[1] or "", a[2]))
            closure = self._fragment_scope(fragment.class_name)
            for activity, _, _ in fragment.attachments:
                sb = self._builds.get(activity)
                if sb is None:
                    continue
                sb.scope |= closure
                if fragment.root is not None:
                    for node in fragment.root.iter_tree():
                        if node.view_id is not None:
                            sb.by_id.setdefault(node.view_id, []).append(node)
        return models

    def _fragment_tree(
        self,
        cls: str,
        index: dict[str, list[UiNode]],
        onclick: list[tuple[UiNode, str]],
    ) -> UiNode | None:
        method = self.program.resolve_method(cls, "onCreateView", 3)
        if method is None or method.is_stub or not method.body:
            return None
        scope = self._fragment_scope(cls)
        roots: list[UiNode] = []
        for stmt in method.body:
            if not isinstance(stmt, Return) or not isinstance(stmt.value, Var):
                continue
            sites, _ = self._resolve_sites(stmt.value, stmt.uid, scope)
            for site in sites:
                if site.kind == "inflate" and site.ref is not None:
                    self._claimed_inflates.add(site.uid)
                    root = self._instantiate_layout(site.ref.name, index, onclick)
                    if root is not None:
                        roots.append(root)
                elif site.kind == "new" and site.type_name and self._is_view_class(site.type_name):
                    roots.append(self._dynamic_node(site))
        if not roots:
            self.diagnostics.note(f"fragment {cls}: onCreateView view unresolved")
            return None
        if len(roots) > 1:
            self.diagnostics.note(
                f"fragment {cls}: {len(roots)} possible roots; keeping the first"
            )
        return roots[0]

    # ----------------------------------------------------------- adapters

    def _bind_adapters(self) -> list[AdapterModel]:
        models: list[AdapterModel] = []
        for poi in self.pois:
            if poi.category != "SetAdapter":
                continue
            for sb in self._scopes_containing(poi.method.signature):
                receiver = poi.invoke.receiver
                sites, _ = self._resolve_sites(receiver, poi.uid, sb.scope)
                view_ids = sorted(
                    {
                        f"{s.ref.type_name}/{s.ref.name}"
                        for s in sites
                        if s.kind == "view" and s.ref is not None
                    }
                )
                if not view_ids:
                    self.diagnostics.note(
                        f"{sb.activity}: adapter view at uid {poi.uid} unresolved"
                    )
                    continue
                adapter_sites, _ = self._resolve_sites(
                    poi.invoke.call_args[0], poi.uid, sb.scope
                )
                classes = sorted(
                    s.type_name for s in adapter_sites if s.kind == "new" and s.type_name
                ) or [None]
                row_layout, row_root = self._adapter_row(poi, sb)
                for view_id in view_ids:
                    for adapter_class in classes:
                        models.append(
                            AdapterModel(
                                adapter_view_id=view_id,
                                activity=sb.activity,
                                adapter_class=adapter_class,
                                row_layout=row_layout,
                                row_root=row_root,
                            )
                        )
        models.sort(key=lambda a: (a.activity, a.adapter_view_id, a.adapter_class or ""))
        return models

    def _adapter_row(self, poi: PointOfInterest, sb: _ScreenBuild):
        """Resolve the row tree through the injected getView call."""
        body = poi.method.body
        position = next(i for i, s in enumerate(body) if s.uid == poi.uid)
        probe = None
        for stmt in body[position + 1 :]:
            if (
                isinstance(stmt, Assign)
                and stmt.synthetic is not None
                and stmt.synthetic[0] == "adapters"
                and stmt.synthetic[1] == poi.uid
            ):
                probe = stmt
                break
        if probe is None:
            return None, None
        after = body[body.index(probe) + 1]
        sites, _ = self._resolve_sites(Var(probe.lhs), after.uid, sb.scope)
        for site in sites:
            if site.kind == "inflate" and site.ref is not None:
                self._claimed_inflates.add(site.uid)
                root = self._instantiate_layout(site.ref.name, sb.by_id, sb.xml_onclick)
                return site.ref.name, root
        self.diagnostics.note(f"{sb.activity}: row layout at uid {poi.uid} unresolved")
        return None, None

    # ----------------------------------------------------- dynamic views

    def _is_view_class(self, name: str) -> bool:
        if self.program.is_subtype(name, VIEW_BASE):
            return True
        table = _classification()
        return name in table or any(p + name in table for p in _BARE_NAME_PREFIXES)

    def _dynamic_node(self, site) -> UiNode:
        from .layout import classify_view_class

        return UiNode(
            class_name=site.type_name,
            kind=classify_view_class(site.type_name, self.program),
            view_id=None,
        )

    def _nodes_for_sites(self, sb: _ScreenBuild, sites) -> list[UiNode]:
        """Map receiver allocation sites to the widget nodes they denote."""
        out: list[UiNode] = []
        for site in sites:
            if site.kind == "view" and site.ref is not None:
                key = f"{site.ref.type_name}/{site.ref.name}"
                out.extend(sb.by_id.get(key, []))
            elif site.kind == "new" and site.uid in sb.dynamic:
                out.append(sb.dynamic[site.uid])
            elif site.kind == "inflate" and site.uid in sb.inflated:
                out.append(sb.inflated[site.uid])
        deduped: list[UiNode] = []
        for node in out:
            if not any(node is kept for kept in deduped):
                deduped.append(node)
        return deduped

    def _materialize_dynamic(self, sb: _ScreenBuild) -> None:
        for poi in self._pois_in(sb, "Inflate"):
            if poi.uid in self._claimed_inflates:
                continue
            self._apply_inflate(sb, poi)
        for poi in self._pois_in(sb, "AddView"):
            self._apply_add_view(sb, poi)

    def _apply_inflate(self, sb: _ScreenBuild, poi: PointOfInterest) -> None:
        args = poi.invoke.call_args
        layout_sites, _ = self._resolve_sites(args[0], poi.uid, sb.scope)
        names = _layout_names(layout_sites)
        if not names:
            self.diagnostics.note(f"{sb.activity}: inflate at uid {poi.uid} unresolved")
            return
        trees = []
        for name in names:
            root = self._instantiate_layout(name, sb.by_id, sb.xml_onclick)
            if root is not None:
                trees.append(root)
        if not trees:
            return

        # inflate(layout, root) attaches when root is non-null;
        # inflate(layout, root, attach) obeys the literal flag
        root_arg = args[1] if len(args) > 1 else NullConst()
        attach = not isinstance(root_arg, NullConst)
        if len(args) > 2 and isinstance(args[2], IntConst):
            attach = args[2].value != 0

        parents: list[UiNode] = []
        if attach and isinstance(root_arg, Var):
            parent_sites, _ = self._resolve_sites(root_arg, poi.uid, sb.scope)
            parents = self._nodes_for_sites(sb, parent_sites)
        if attach and parents:
            self._attach_to_parents(sb, parents, trees, poi.uid)
            # with attach the call returns the parent it grew into
            sb.inflated[poi.uid] = parents[0]
        else:
            if attach:
                self.diagnostics.note(
                    f"{sb.activity}: inflate at uid {poi.uid} has no resolvable parent"
                )
            sb.inflated[poi.uid] = trees[0]
            sb.orphans.extend(trees)

    def _apply_add_view(self, sb: _ScreenBuild, poi: PointOfInterest) -> None:
        receiver_sites, _ = self._resolve_sites(poi.invoke.receiver, poi.uid, sb.scope)
        parents = self._nodes_for_sites(sb, receiver_sites)
        child_sites, _ = self._resolve_sites(poi.invoke.call_args[0], poi.uid, sb.scope)
        children: list[UiNode] = []
        for site in child_sites:
            if site.kind == "new" and site.type_name and self._is_view_class(site.type_name):
                if site.uid not in sb.dynamic:
                    sb.dynamic[site.uid] = self._dynamic_node(site)
                children.append(sb.dynamic[site.uid])
            elif site.kind == "inflate" and site.uid in sb.inflated:
                node = sb.inflated[site.uid]
                if node in sb.orphans:
                    sb.orphans.remove(node)  # adopted
                children.append(node)
        if not children:
            self.diagnostics.note(f"{sb.activity}: addView at uid {poi.uid} unresolved")
            return
        if not parents:
            self.diagnostics.note(
                f"{sb.activity}: addView at uid {poi.uid} has no resolvable parent"
            )
            sb.orphans.extend(c for c in children if c not in sb.orphans)
            return
        self._attach_to_parents(sb, parents, children, poi.uid)

    def _attach_to_parents(
        self, sb: _ScreenBuild, parents: list[UiNode], children: list[UiNode], uid: int
    ) -> None:
        """First parent gets the real subtrees; other candidates get copies
        so an imprecise receiver still shows the structure everywhere."""
        for child in children:
            if child in sb.orphans:
                sb.orphans.remove(child)
        parents[0].children.extend(children)
        for extra in parents[1:]:
            self.diagnostics.note(
                f"{sb.activity}: ambiguous parent at uid {uid}; subtree copied"
            )
            for child in children:
                clone = copy.deepcopy(child)
                for node in clone.iter_tree():
                    if node.view_id is not None:
                        sb.by_id.setdefault(node.view_id, []).append(node)
                extra.children.append(clone)

    # -------------------------------------------------------------- labels

    _LABEL_CATEGORIES = ("SetText", "SetHint", "SetContentDescription")

    def _bind_labels(self, sb: _ScreenBuild) -> None:
        for category in self._LABEL_CATEGORIES:
            for poi in self._pois_in(sb, category):
                texts, partial = self._resolve_texts(
                    poi.invoke.call_args[0], poi.uid, sb.scope
                )
                if partial:
                    self.diagnostics.note(
                        f"{sb.activity}: text at uid {poi.uid} only partially known"
                    )
                if not texts:
                    continue
                receiver_sites, _ = self._resolve_sites(
                    poi.invoke.receiver, poi.uid, sb.scope
                )
                nodes = self._nodes_for_sites(sb, receiver_sites)
                if not nodes:
                    self.diagnostics.note(
                        f"{sb.activity}: label target at uid {poi.uid} unresolved"
                    )
                    continue
                shared = len(nodes) > 1
                for node in nodes:
                    for text, source in texts:
                        label = Label(text, source, shared=shared)
                        if category == "SetContentDescription":
                            node.add_content_description(label)
                        else:
                            node.add_label(label)

    # ----------------------------------------------------------- callbacks

    def _bind_callbacks(self, sb: _ScreenBuild) -> None:
        for node, handler_name in sb.xml_onclick:
            handler = self._xml_handler(sb.activity, handler_name)
            if handler is None:
                self.diagnostics.note(
                    f"{sb.activity}: onClick handler {handler_name!r} not found"
                )
                continue
            self._arm(node, "onClick", handler)

        listener_table = load_listener_table()
        for poi in self.pois:
            if poi.category != LISTENER_REGISTRATION:
                continue
            if poi.method.signature not in sb.scope:
                continue
            spec = listener_table[poi.signature]
            receiver_sites, _ = self._resolve_sites(poi.invoke.receiver, poi.uid, sb.scope)
            nodes = self._nodes_for_sites(sb, receiver_sites)
            if not nodes:
                self.diagnostics.note(
                    f"{sb.activity}: listener target at uid {poi.uid} unresolved"
                )
                continue
            listener_sites, _ = self._resolve_sites(
                poi.invoke.call_args[0], poi.uid, sb.scope
            )
            handlers: list[MethodDef] = []
            for site in sorted(
                (s for s in listener_sites if s.kind == "new" and s.type_name),
                key=lambda s: s.uid,
            ):
                method = self.program.resolve_method(
                    site.type_name, spec.callback, spec.arity
                )
                if method is not None and not method.is_stub:
                    handlers.append(method)
            if not handlers:
                self.diagnostics.note(
                    f"{sb.activity}: listener at uid {poi.uid} has no app callback"
                )
                continue
            for node in nodes:
                for handler in handlers:
                    self._arm(node, spec.callback, handler)

    def _arm(self, node: UiNode, event: str, handler: MethodDef) -> None:
        binding = (event, handler.signature)
        if binding not in node.callbacks:
            node.callbacks.append(binding)
        node.api_calls |= self._extract_api_calls(handler, node.view_id)

    def _xml_handler(self, activity: str, name: str) -> MethodDef | None:
        """Single-View-parameter method `name`, searched up the activity's
        superclass chain; ambiguity keeps the first and records it."""
        current: str | None = activity
        seen: set[str] = set()
        while current and current not in seen:
            seen.add(current)
            cls = self.program.classes.get(current)
            if cls is None:
                break
            matches = [
                m
                for m in cls.methods_named(name)
                if not m.is_stub
                and m.arity == 1
                and self._is_view_param(m.params[0][0])
            ]
            if matches:
                if len(matches) > 1:
                    self.diagnostics.note(
                        f"{activity}: onClick {name!r} is ambiguous; first match used"
                    )
                return matches[0]
            current = cls.super_name
        return None

    def _is_view_param(self, type_name: str) -> bool:
        return type_name == VIEW_BASE or self.program.is_subtype(type_name, VIEW_BASE)

    # ----------------------------------------------------------- API calls

    def _extract_api_calls(self, handler: MethodDef, view_id: str | None) -> set[str]:
        """Platform calls reachable from a callback, walking into app
        callees, with branches on the handled view's id pruned."""
        id_name = view_id.split("/", 1)[1] if view_id else None
        calls: set[str] = set()
        visited: set[str] = set()
        self._walk_api_calls(handler, id_name, calls, visited)
        return calls

    def _walk_api_calls(
        self, method: MethodDef, id_name: str | None, calls: set[str], visited: set[str]
    ) -> None:
        if method.signature in visited or not method.body:
            return
        visited.add(method.signature)
        succs = method_cfg(method)
        labels = method.label_index()
        reached = {0}
        frontier = [0]
        while frontier:
            index = frontier.pop()
            stmt = method.body[index]
            invoke = _invoke_of(stmt)
            if invoke is not None:
                stub = _stub_signature(self.program, invoke)
                if stub is not None:
                    calls.add(stub)
                for callee in self.graph.callees_at(stmt.uid):
                    if not callee.is_stub:
                        self._walk_api_calls(callee, id_name, calls, visited)
            out = succs[index]
            if isinstance(stmt, If):
                out = self._prune_id_branch(method, index, stmt, labels, id_name) or out
            for nxt in out:
                if nxt not in reached:
                    reached.add(nxt)
                    frontier.append(nxt)

    def _prune_id_branch(
        self,
        method: MethodDef,
        index: int,
        stmt: If,
        labels: dict[str, int],
        id_name: str | None,
    ) -> list[int] | None:
        """For `if v == res:id/x` where v came from getId on a handled
        view, keep only the arm consistent with that view's id."""
        if stmt.op not in ("==", "!="):
            return None
        if isinstance(stmt.left, ResConst) and isinstance(stmt.right, Var):
            ref, var = stmt.left.ref, stmt.right
        elif isinstance(stmt.right, ResConst) and isinstance(stmt.left, Var):
            ref, var = stmt.right.ref, stmt.left
        else:
            return None
        if ref.type_name != "id":
            return None
        if not self._is_handled_view_id(method, index, var.name):
            self.diagnostics.note(
                f"id comparison at uid {stmt.uid} not pruned "
                "(condition is not the handled view's id)"
            )
            return None
        if id_name is None:
            return None
        matches = ref.name == id_name
        take_target = matches == (stmt.op == "==")
        if take_target:
            return [labels[stmt.target]]
        return [index + 1] if index + 1 < len(method.body) else []

    def _is_handled_view_id(self, method: MethodDef, index: int, var: str) -> bool:
        """True when `var`'s nearest def above is getId/getItemId on a
        View-typed parameter of this callback."""
        param_views = {
            name for type_name, name in method.params if self._is_view_param(type_name)
        }
        for position in range(index - 1, -1, -1):
            stmt = method.body[position]
            if isinstance(stmt, Assign) and stmt.lhs == var:
                rhs = stmt.rhs
                return (
                    isinstance(rhs, InvokeExpr)
                    and rhs.method_name in ("getId", "getItemId")
                    and isinstance(rhs.receiver, Var)
                    and rhs.receiver.name in param_views
                )
        return False

    # ------------------------------------------------------------- dialogs

    def _detect_dialogs(self, sb: _ScreenBuild) -> list[DialogModel]:
        dialogs: list[DialogModel] = []
        for signature in sorted(sb.scope):
            method = self.graph.method_by_signature(signature)
            if method is None or method.is_stub or method.class_name == ENTRY_CLASS:
                continue
            dialogs.extend(self._dialogs_in(sb, method))
        dialogs.sort(key=lambda d: (d.titles, d.messages, d.buttons))
        return dialogs

    def _dialogs_in(self, sb: _ScreenBuild, method: MethodDef) -> list[DialogModel]:
        """Intra-method scan of AlertDialog builder chains.

        A chain contributes a dialog when code can show it; attribute
        setters may appear fluently or on an alias of the builder."""
        records: list[dict] = []
        owner: dict[str, dict] = {}  # var -> record it currently denotes
        for stmt in method.body:
            if isinstance(stmt, Assign) and isinstance(stmt.rhs, NewObject):
                if stmt.rhs.type_name == DIALOG_BUILDER:
                    record = {"titles": [], "messages": [], "buttons": [], "shown": False}
                    records.append(record)
                    owner[stmt.lhs] = record
                continue
            invoke = _invoke_of(stmt)
            if invoke is None:
                continue
            receiver = invoke.receiver
            if not isinstance(receiver, Var) or receiver.name not in owner:
                continue
            record = owner[receiver.name]
            bucket = _DIALOG_TEXT_SETTERS.get(invoke.method_name)
            if bucket is not None and invoke.call_args:
                texts, _ = self._resolve_texts(
                    invoke.call_args[0], stmt.uid, sb.scope
                )
                record[bucket].extend(
                    Label(text, source) for text, source in texts
                )
            elif invoke.method_name == "show":
                record["shown"] = True
            # fluent returns and create() keep denoting the same dialog
            if isinstance(stmt, Assign):
                owner[stmt.lhs] = record
        out = []
        for record in records:
            resolved = record["titles"] + record["messages"] + record["buttons"]
            if record["shown"] and resolved:
                out.append(
                    DialogModel(
                        activity=sb.activity,
                        titles=sorted(set(record["titles"])),
                        messages=sorted(set(record["messages"])),
                        buttons=sorted(set(record["buttons"])),
                    )
                )
        return out


# --------------------------------------------------------------- plumbing


def _literal_res_site(operand: ResConst, uid: int):
    from .pointsto import AllocationSite

    return AllocationSite("res", uid, ref=operand.ref)


def _layout_names(sites) -> list[str]:
    names = []
    for site in sites:
        if site.kind == "res" and site.ref is not None and site.ref.type_name == "layout":
            if site.ref.name not in names:
                names.append(site.ref.name)
    return sorted(names)


def _qualify_class(name: str) -> str:
    """XML element names are bare for framework views; qualify them the
    way the classification table spells them."""
    if "." in name or name == "fragment" or name == "merge":
        return name
    table = _classification()
    for prefix in _BARE_NAME_PREFIXES:
        if prefix + name in table:
            return prefix + name
    return name


# ------------------------------------------------------------------ miner


@dataclass
class MineResult:
    model: GuiModel
    elapsed: float

    @property
    def partial(self) -> bool:
        return self.model.diagnostics.partial


def analyze_program(text: str, activities: list[str], fragments: list[str] | None = None):
    """Parse + augment + entry synthesis; returns (program, icfg, entry)."""
    program = load_prelude()
    parse_program(text, program=program)
    augment(program)
    if fragments is None:
        fragments = [
            name
            for name, cls in program.classes.items()
            if not cls.is_framework
            and name != FRAGMENT_BASE
            and program.is_subtype(name, FRAGMENT_BASE)
        ]
    entry = synthesize_entry_point(program, activities, sorted(fragments))
    icfg = Icfg(program, build_call_graph(program))
    return program, icfg, entry


def mine_app(
    apk_path: str | Path,
    ir_path: str | Path | None = None,
    ir_text: str | None = None,
    query_budget: float = DEFAULT_QUERY_BUDGET,
    app_budget: float | None = DEFAULT_APP_BUDGET,
    locale: str | None = None,
) -> MineResult:
    """Mine one app: APK resources plus its code, into a GuiModel."""
    started = time.monotonic()
    if ir_text is None:
        if ir_path is None:
            raise ValueError("mine_app needs ir_path or ir_text")
        ir_text = Path(ir_path).read_text("utf-8")

    handle = load_apk(apk_path)
    table = decode_resource_table(handle.read_entry("resources.arsc"))
    manifest = parse_manifest(
        decode_binary_xml(handle.read_entry("AndroidManifest.xml")), table
    )

    activities = [info.name for info in manifest.activities]
    program, icfg, entry = analyze_program(ir_text, activities)
    registry = LayoutRegistry.from_apk(
        handle, table, program=program, policy=LocalePolicy(locale)
    )

    builder = ModelBuilder(
        program,
        icfg,
        entry,
        manifest,
        registry=registry,
        table=table,
        config=AnalysisConfig(query_budget=query_budget),
        policy=LocalePolicy(locale),
        app_budget=app_budget,
    )
    model = builder.build()
    model.diagnostics.warnings.extend(entry.warnings)
    return MineResult(model=model, elapsed=time.monotonic() - started)
