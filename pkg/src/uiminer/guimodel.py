"""GUI model data types: screens, widget trees, labels, dialogs, stats.

The model is plain data. Builders fill it in, the dataset layer
serializes it; nothing here runs analyses. Stats are always derived
from the content by compute_stats so they can never drift from the
trees they describe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .layout import ViewKind


@dataclass(frozen=True, order=True)
class Label:
    text: str
    source: str  # "xml" | "resource" | "code"
    shared: bool = False  # receiver resolved to several widgets


@dataclass
class UiNode:
    class_name: str
    kind: ViewKind
    view_id: str | None = None  # resolved "id/name"
    path: str = ""
    labels: list[Label] = field(default_factory=list)
    content_description: list[Label] = field(default_factory=list)
    drawables: list[tuple[str, str]] = field(default_factory=list)  # (name, src|background)
    callbacks: list[tuple[str, str]] = field(default_factory=list)  # (event, handler signature)
    api_calls: set[str] = field(default_factory=set)
    fragment_class: str | None = None  # FragmentHost slots only
    children: list["UiNode"] = field(default_factory=list)

    def iter_tree(self):
        yield self
        for child in self.children:
            yield from child.iter_tree()

    def add_label(self, label: Label) -> None:
        if label not in self.labels:
            self.labels.append(label)

    def add_content_description(self, label: Label) -> None:
        if label not in self.content_description:
            self.content_description.append(label)

    def assign_paths(self, prefix: str) -> None:
        self.path = prefix
        for i, child in enumerate(self.children):
            child.assign_paths(f"{prefix}/{i}")


@dataclass
class DialogModel:
    activity: str
    titles: list[Label] = field(default_factory=list)
    messages: list[Label] = field(default_factory=list)
    buttons: list[Label] = field(default_factory=list)

    @property
    def resolved(self) -> bool:
        return bool(self.titles or self.messages or self.buttons)


@dataclass
class ScreenModel:
    activity: str
    has_layout: bool = False
    roots: list[UiNode] = field(default_factory=list)
    dialogs: list[DialogModel] = field(default_factory=list)

    def iter_nodes(self):
        for root in self.roots:
            yield from root.iter_tree()


@dataclass
class FragmentModel:
    class_name: str
    root: UiNode | None = None
    # (activity, container id name, "static" | "transaction")
    attachments: list[tuple[str, str, str]] = field(default_factory=list)


@dataclass
class AdapterModel:
    adapter_view_id: str  # resolved "id/name" of the AdapterView
    activity: str
    adapter_class: str | None = None
    row_layout: str | None = None
    row_root: UiNode | None = None


@dataclass
class Diagnostics:
    query_timeouts: int = 0
    unresolved: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    app_timeout_hit: bool = False

    @property
    def partial(self) -> bool:
        return self.query_timeouts > 0 or self.app_timeout_hit

    def note(self, message: str) -> None:
        if message not in self.unresolved:
            self.unresolved.append(message)


@dataclass
class GuiModel:
    package_name: str
    version_name: str = ""
    screens: list[ScreenModel] = field(default_factory=list)
    fragments: list[FragmentModel] = field(default_factory=list)
    adapters: list[AdapterModel] = field(default_factory=list)
    diagnostics: Diagnostics = field(default_factory=Diagnostics)

    def all_trees(self):
        """Every (tree kind, owner, root) the model holds, each once."""
        for screen in self.screens:
            for root in screen.roots:
                yield "screen", screen.activity, root
        for fragment in self.fragments:
            if fragment.root is not None:
                yield "fragment", fragment.class_name, fragment.root
        for adapter in self.adapters:
            if adapter.row_root is not None:
                yield "adapter", adapter.adapter_view_id, adapter.row_root


_CONTAINER_KINDS = (ViewKind.CONTAINER, ViewKind.ADAPTER_VIEW)


@dataclass(frozen=True)
class ModelStats:
    activities: int
    activities_with_layout: int
    elements: int
    containers: int
    widgets: int
    widgets_with_id: int
    unique_widgets: int
    labeled_widgets: int
    labels: int
    labels_per_widget: float
    drawables: tuple[tuple[str, int], ...]  # (name, count), most frequent first


def compute_stats(model: GuiModel) -> ModelStats:
    elements = containers = widgets = 0
    with_id = 0
    labeled = 0
    labels = 0
    drawable_counts: dict[str, int] = {}
    unique = 0

    for _, _, root in model.all_trees():
        seen_pairs: set[tuple[str, str]] = set()
        for node in root.iter_tree():
            elements += 1
            if node.kind in _CONTAINER_KINDS:
                containers += 1
            else:
                widgets += 1
            if node.view_id is not None:
                with_id += 1
                pair = (node.view_id, node.class_name)
                if pair not in seen_pairs:
                    seen_pairs.add(pair)
                    unique += 1
            if node.labels:
                labeled += 1
                labels += len(node.labels)
            for name, _ in node.drawables:
                drawable_counts[name] = drawable_counts.get(name, 0) + 1

    per_widget = labels / labeled if labeled else 0.0
    ranked = tuple(
        sorted(drawable_counts.items(), key=lambda item: (-item[1], item[0]))
    )
    return ModelStats(
        activities=len(model.screens),
        activities_with_layout=sum(1 for s in model.screens if s.has_layout),
        elements=elements,
        containers=containers,
        widgets=widgets,
        widgets_with_id=with_id,
        unique_widgets=unique,
        labeled_widgets=labeled,
        labels=labels,
        labels_per_widget=per_widget,
        drawables=ranked,
    )
