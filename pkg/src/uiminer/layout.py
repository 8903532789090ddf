"""Static layout structure: manifest model, templates, classification.

A layout template is the decoded shape of one res/layout file with
includes spliced in, merge roots flattened, and every element
classified as widget, container, adapter view, or fragment host.
Templates are the raw material the model builder later instantiates
into screens.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources as importlib_resources

from .apk import ApkHandle
from .binres import (
    LocalePolicy,
    ResourceId,
    ResourceTable,
    XmlDocument,
    XmlElement,
    decode_binary_xml,
    resolve_resource,
)
from .errors import (
    IncludeCycleError,
    MalformedManifestError,
    UnknownLayoutReferenceError,
)

log = logging.getLogger(__name__)

ANDROID_NS = "http://schemas.android.com/apk/res/android"


# ------------------------------------------------------------------ manifest


@dataclass(frozen=True)
class ActivityInfo:
    name: str
    launcher: bool = False
    exported: bool = False


@dataclass
class ManifestModel:
    package_name: str
    version_name: str = ""
    activities: list[ActivityInfo] = field(default_factory=list)

    def launcher_activities(self) -> list[ActivityInfo]:
        return [a for a in self.activities if a.launcher]


def _string_attr(element: XmlElement, name: str) -> str | None:
    attribute = element.attr(name)
    if attribute is None:
        return None
    if attribute.value.kind == "string":
        return str(attribute.value.value)
    if attribute.raw is not None:
        return attribute.raw
    return None


def parse_manifest(doc: XmlDocument, table: ResourceTable | None = None) -> ManifestModel:
    """Build the manifest model; relative activity names are expanded."""
    root = doc.root
    if root.name != "manifest":
        raise MalformedManifestError(f"root element is {root.name!r}, not manifest")
    package = _string_attr(root, "package")
    if not package:
        raise MalformedManifestError("manifest has no package attribute")
    version = _string_attr(root, "versionName") or ""

    application = next((c for c in root.children if c.name == "application"), None)
    if application is None:
        raise MalformedManifestError("manifest has no application element")

    activities: list[ActivityInfo] = []
    for element in application.children:
        if element.name != "activity":
            continue
        name = _string_attr(element, "name")
        if not name:
            raise MalformedManifestError("activity without android:name")
        if name.startswith("."):
            name = package + name
        elif "." not in name:
            name = f"{package}.{name}"
        launcher = _has_launcher_filter(element)
        exported_attr = element.attr("exported")
        exported = (
            bool(exported_attr.value.value)
            if exported_attr is not None and exported_attr.value.kind == "bool"
            else launcher
        )
        activities.append(ActivityInfo(name=name, launcher=launcher, exported=exported))
    return ManifestModel(package_name=package, version_name=version, activities=activities)


def _has_launcher_filter(activity: XmlElement) -> bool:
    for intent_filter in activity.children:
        if intent_filter.name != "intent-filter":
            continue
        has_main = any(
            child.name == "action"
            and _string_attr(child, "name") == "android.intent.action.MAIN"
            for child in intent_filter.children
        )
        has_launcher = any(
            child.name == "category"
            and _string_attr(child, "name") == "android.intent.category.LAUNCHER"
            for child in intent_filter.children
        )
        if has_main and has_launcher:
            return True
    return False


# -------------------------------------------------------------- view kinds


class ViewKind(Enum):
    WIDGET = "Widget"
    CONTAINER = "Container"
    ADAPTER_VIEW = "AdapterView"
    FRAGMENT_HOST = "FragmentHost"


_BARE_NAME_PREFIXES = ("android.widget.", "android.view.", "android.webkit.")


def load_classification_table() -> dict[str, ViewKind]:
    """Read the shipped ClassName<TAB>Kind table."""
    text = (
        importlib_resources.files("uiminer.data")
        .joinpath("view_classes.tsv")
        .read_text("utf-8")
    )
    table: dict[str, ViewKind] = {}
    for line_number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"view_classes.tsv:{line_number}: expected two columns")
        table[parts[0]] = ViewKind(parts[1])
    return table


_CLASSIFICATION: dict[str, ViewKind] | None = None


def _classification() -> dict[str, ViewKind]:
    global _CLASSIFICATION
    if _CLASSIFICATION is None:
        _CLASSIFICATION = load_classification_table()
    return _CLASSIFICATION


def classify_view_class(class_name: str, program=None) -> ViewKind:
    """Map a view class to its kind.

    Framework names come from the shipped table (bare layout names are
    tried against the standard packages). App classes walk their IR
    superclass chain to the nearest classified ancestor. Anything else
    is a Widget, with a warning.
    """
    table = _classification()
    if class_name in table:
        return table[class_name]
    if "." not in class_name:
        for prefix in _BARE_NAME_PREFIXES:
            if prefix + class_name in table:
                return table[prefix + class_name]
    if program is not None:
        current = class_name
        seen: set[str] = set()
        while current and current not in seen:
            seen.add(current)
            if current in table:
                return table[current]
            defined = program.classes.get(current)
            if defined is None:
                break
            current = defined.super_name
        if current in table:
            return table[current]
    log.warning("unclassified view class %r treated as Widget", class_name)
    return ViewKind.WIDGET


# ---------------------------------------------------------------- templates


@dataclass
class TemplateNode:
    class_name: str
    kind: ViewKind
    view_id: ResourceId | None = None
    text: tuple[str, str] | None = None  # (value, "xml" | "resource")
    hint: tuple[str, str] | None = None
    content_description: tuple[str, str] | None = None
    on_click: str | None = None
    fragment_class: str | None = None
    drawables: list[tuple[str, str]] = field(default_factory=list)  # (name, kind)
    children: list["TemplateNode"] = field(default_factory=list)

    def clone(self) -> "TemplateNode":
        return replace(
            self,
            drawables=list(self.drawables),
            children=[child.clone() for child in self.children],
        )

    def iter_tree(self):
        yield self
        for child in self.children:
            yield from child.iter_tree()


@dataclass
class LayoutTemplate:
    name: str
    resource_id: ResourceId | None
    root: TemplateNode
    is_merge: bool = False

    def fragment_classes(self) -> list[str]:
        return [
            node.fragment_class
            for node in self.root.iter_tree()
            if node.kind is ViewKind.FRAGMENT_HOST and node.fragment_class
        ]


class LayoutRegistry:
    """All templates of one app, keyed by layout name, built on demand."""

    def __init__(
        self,
        documents: dict[str, XmlDocument],
        table: ResourceTable | None = None,
        program=None,
        policy: LocalePolicy | None = None,
    ):
        self._documents = documents
        self._table = table
        self._program = program
        self._policy = policy or LocalePolicy()
        self._templates: dict[str, LayoutTemplate] = {}
        self._building: list[str] = []

    @classmethod
    def from_apk(
        cls,
        handle: ApkHandle,
        table: ResourceTable,
        program=None,
        policy: LocalePolicy | None = None,
    ) -> "LayoutRegistry":
        documents: dict[str, XmlDocument] = {}
        for package in table.packages.values():
            layout_type = package.type_id_of("layout")
            if layout_type is None:
                continue
            for (type_id, _), entry in package.entries.items():
                if type_id != layout_type:
                    continue
                chosen = LocalePolicy().choose(entry.configs())
                value = next(v for c, v in entry.values if c == chosen)
                if value.kind != "string":
                    continue
                path = str(value.value)
                if not handle.has_entry(path):
                    log.warning("layout %s points at missing entry %s", entry.key, path)
                    continue
                documents[entry.key] = decode_binary_xml(handle.read_entry(path))
        return cls(documents, table=table, program=program, policy=policy)

    def names(self) -> list[str]:
        return sorted(self._documents)

    def has_layout(self, name: str) -> bool:
        return name in self._documents

    def layout_name_for_id(self, rid: ResourceId) -> str | None:
        if self._table is None:
            return None
        full = self._table.name_for_id(rid)
        if full is None or not full.startswith("layout/"):
            return None
        return full.split("/", 1)[1]

    def template(self, name: str) -> LayoutTemplate:
        if name in self._templates:
            return self._templates[name]
        if name not in self._documents:
            raise UnknownLayoutReferenceError(f"no layout named {name!r}")
        if name in self._building:
            raise IncludeCycleError(" -> ".join(self._building + [name]))
        self._building.append(name)
        try:
            doc = self._documents[name]
            expanded = self._expand(doc.root)
            if len(expanded) != 1:
                raise UnknownLayoutReferenceError(
                    f"layout {name!r} expands to {len(expanded)} roots"
                )
            root = expanded[0]
            rid = None
            if self._table is not None:
                rid = self._table.id_for_name("layout", name)
            template = LayoutTemplate(
                name=name,
                resource_id=rid,
                root=root,
                is_merge=doc.root.name == "merge",
            )
        finally:
            self._building.pop()
        self._templates[name] = template
        return template

    # ------------------------------------------------------------- helpers

    def _resolve_string(self, value) -> tuple[str, str] | None:
        """Resolve an attribute to (text, source) where source is xml|resource."""
        if value.kind == "string":
            return str(value.value), "xml"
        if value.kind == "reference" and self._table is not None:
            try:
                resolved = resolve_resource(self._table, value.value, self._policy)
            except Exception as exc:  # noqa: BLE001 - diagnostics only
                log.warning("unresolvable attribute reference %s: %s", value.value, exc)
                return None
            if resolved.value.kind == "string":
                return str(resolved.value.value), "resource"
        return None

    def _drawable_name(self, value) -> str | None:
        if value.kind == "color":
            return f"#{value.value:08x}"
        if value.kind == "reference" and self._table is not None:
            full = self._table.name_for_id(value.value)
            if full is not None:
                return full.split("/", 1)[1]
            return str(value.value)
        return None

    def _expand(self, element: XmlElement) -> list[TemplateNode]:
        """Expand one XML element to template nodes (includes may splice
        several when the target layout has a merge root)."""
        if element.name == "include":
            return self._splice_include(element)
        return [self._build_node(element)]

    def _build_node(self, element: XmlElement) -> TemplateNode:
        if element.name == "fragment":
            fragment_class = None
            name_attr = element.attr("name", ANDROID_NS) or element.attr("class")
            if name_attr is not None and name_attr.value.kind == "string":
                fragment_class = str(name_attr.value.value)
            node = TemplateNode(
                class_name="fragment",
                kind=ViewKind.FRAGMENT_HOST,
                view_id=self._view_id(element),
                fragment_class=fragment_class,
            )
            return node

        kind = (
            ViewKind.CONTAINER
            if element.name == "merge"
            else classify_view_class(element.name, self._program)
        )
        node = TemplateNode(
            class_name=element.name,
            kind=kind,
            view_id=self._view_id(element),
        )
        for attribute in element.attributes:
            if attribute.namespace != ANDROID_NS:
                continue
            if attribute.name == "text":
                node.text = self._resolve_string(attribute.value) or node.text
            elif attribute.name == "hint":
                node.hint = self._resolve_string(attribute.value) or node.hint
            elif attribute.name == "contentDescription":
                node.content_description = (
                    self._resolve_string(attribute.value) or node.content_description
                )
            elif attribute.name == "onClick":
                if attribute.value.kind == "string":
                    node.on_click = str(attribute.value.value)
            elif attribute.name in ("src", "background"):
                name = self._drawable_name(attribute.value)
                if name is not None:
                    node.drawables.append((name, attribute.name))
        for child in element.children:
            node.children.extend(self._expand(child))
        return node

    def _view_id(self, element: XmlElement) -> ResourceId | None:
        attribute = element.attr("id", ANDROID_NS)
        if attribute is not None and attribute.value.kind == "reference":
            return attribute.value.value
        return None

    def _splice_include(self, element: XmlElement) -> list[TemplateNode]:
        layout_attr = element.attr("layout", None) or element.attr("layout", ANDROID_NS)
        if layout_attr is None or layout_attr.value.kind != "reference":
            raise UnknownLayoutReferenceError("include without a layout reference")
        target_name = self.layout_name_for_id(layout_attr.value.value)
        if target_name is None:
            raise UnknownLayoutReferenceError(
                f"include references unknown layout {layout_attr.value.value}"
            )
        template = self.template(target_name)
        override = self._view_id(element)
        if template.is_merge:
            # merge roots flatten into the including parent
            if override is not None:
                log.warning("android:id on include of merge layout %s ignored", target_name)
            return [child.clone() for child in template.root.children]
        root = template.root.clone()
        if override is not None:
            root.view_id = override
        return [root]
