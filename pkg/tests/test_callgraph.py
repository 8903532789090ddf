"""Entry synthesis, the four code rewrites, and graph construction."""

from __future__ import annotations

import pytest

import fixture_programs as fx
from uiminer.callgraph import (
    Icfg,
    augment,
    build_call_graph,
    inject_adapter_callbacks,
    inject_listener_callbacks,
    patch_view_allocations,
    sequentialize_async,
    synthesize_entry_point,
)
from uiminer.ir.loader import load_prelude
from uiminer.ir.model import (
    Assign,
    InvokeExpr,
    InvokeStmt,
    IntConst,
    NewObject,
    NullConst,
    Return,
    Var,
)
from uiminer.ir.parser import parse_program, print_program
from uiminer.ir.validate import validate_program


def load(text: str):
    program = load_prelude()
    parse_program(text, program=program)
    return program


def body_of(program, class_name, method_name, arity):
    return program.resolve_method(class_name, method_name, arity).body


def invoke_of(stmt):
    if isinstance(stmt, InvokeStmt):
        return stmt.invoke
    if isinstance(stmt, Assign) and isinstance(stmt.rhs, InvokeExpr):
        return stmt.rhs
    return None


# --------------------------------------------------------------- entry point


class TestEntrySynthesis:
    def test_only_overridden_lifecycle_methods_are_driven(self):
        program = load(fx.SAMPLE_APP)
        entry = synthesize_entry_point(program, ["sample.SampleActivity"])
        body = entry.method.body
        assert isinstance(body[0], Assign) and isinstance(body[0].rhs, NewObject)
        assert body[0].rhs.type_name == "sample.SampleActivity"
        calls = [invoke_of(s) for s in body if invoke_of(s) is not None]
        names = [c.method_name for c in calls]
        # init plus the single overridden callback; no onStart/onResume spam
        assert names == ["init", "onCreate"]
        assert isinstance(body[-1], Return)
        assert calls[1].args[1] == NullConst()

    def test_every_entry_statement_is_marked_synthetic(self):
        program = load(fx.SAMPLE_APP)
        entry = synthesize_entry_point(program, ["sample.SampleActivity"])
        assert all(s.synthetic == ("entry", -1) for s in entry.method.body)
        sites = entry.activity_sites["sample.SampleActivity"]
        uids = {s.uid for s in entry.method.body}
        assert set(sites) <= uids and len(sites) == 3

    def test_missing_activity_class_is_skipped_with_warning(self):
        program = load(fx.SAMPLE_APP)
        entry = synthesize_entry_point(
            program, ["sample.SampleActivity", "sample.Ghost"]
        )
        assert any("sample.Ghost" in w for w in entry.warnings)
        assert "sample.Ghost" not in entry.activity_sites
        assert "sample.SampleActivity" in entry.activity_sites

    def test_zero_activities_gives_empty_main(self):
        program = load(fx.SAMPLE_APP)
        entry = synthesize_entry_point(program, [])
        assert len(entry.method.body) == 1
        assert isinstance(entry.method.body[0], Return)

    def test_fragment_lifecycle_drives_oncreateview(self):
        program = load(fx.SAMPLE_APP)
        entry = synthesize_entry_point(
            program, [], fragments=["sample.SampleFragment"]
        )
        calls = [invoke_of(s) for s in entry.method.body if invoke_of(s)]
        names = [c.method_name for c in calls]
        assert names == ["init", "onCreateView"]
        assert len(calls[1].args) == 4  # receiver + three null placeholders

    def test_resynthesis_replaces_previous_entry(self):
        program = load(fx.SAMPLE_APP)
        first = synthesize_entry_point(program, ["sample.SampleActivity"])
        second = synthesize_entry_point(program, ["sample.SampleActivity"])
        assert len(first.method.body) == len(second.method.body)
        entry_cls = program.classes["$Entry"]
        assert list(entry_cls.methods) == [("main", 0)]
        # the fresh body is indexed, the stale one is gone
        for stmt in second.method.body:
            assert program.statement(stmt.uid) is stmt

    def test_duplicate_manifest_entries_drive_once(self):
        program = load(fx.SAMPLE_APP)
        entry = synthesize_entry_point(
            program, ["sample.SampleActivity", "sample.SampleActivity"]
        )
        news = [
            s
            for s in entry.method.body
            if isinstance(s, Assign) and isinstance(s.rhs, NewObject)
        ]
        assert len(news) == 1


# -------------------------------------------------------------- views rewrite


class TestViewsPass:
    def test_cast_of_lookup_result_becomes_allocation(self):
        program = load(fx.CUSTOM_WIDGET_APP)
        body = body_of(program, "sample.GaugeActivity", "onCreate", 1)
        lookup = body[1]
        report = patch_view_allocations(program)
        body = body_of(program, "sample.GaugeActivity", "onCreate", 1)
        patched = body[2]
        assert isinstance(patched.rhs, NewObject)
        assert patched.rhs.type_name == "sample.Gauge"
        assert patched.lhs == "g"
        assert patched.synthetic == ("views", lookup.uid)
        assert report.replaced == [patched.uid]
        assert not report.injected

    def test_uncast_lookup_gets_view_shadow(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    v = invoke virtual sample.A.findViewById(this, res:id/info)
    invoke virtual android.view.View.setVisibility(v, 0)
    return
  }
}
"""
        )
        report = patch_view_allocations(program)
        body = body_of(program, "sample.A", "onCreate", 1)
        shadow = body[1]
        assert isinstance(shadow, Assign) and shadow.lhs == "v"
        assert shadow.rhs == NewObject("android.view.View")
        assert report.injected == [shadow.uid]

    def test_redefinition_between_lookup_and_cast_blocks_replacement(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    v = invoke virtual sample.A.findViewById(this, res:id/info)
    v = const null
    b = (android.widget.Button) v
    return
  }
}
"""
        )
        report = patch_view_allocations(program)
        body = body_of(program, "sample.A", "onCreate", 1)
        # shadow inserted right after the lookup; the cast stays a cast
        assert body[1].rhs == NewObject("android.view.View")
        assert not report.replaced
        from uiminer.ir.model import Cast

        assert isinstance(body[3], Assign) and isinstance(body[3].rhs, Cast)

    def test_non_view_cast_is_not_replaced(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    v = invoke virtual sample.A.findViewById(this, res:id/info)
    o = (java.lang.Object) v
    return
  }
}
"""
        )
        patch_view_allocations(program)
        body = body_of(program, "sample.A", "onCreate", 1)
        assert body[1].rhs == NewObject("android.view.View")

    def test_pass_is_idempotent(self):
        program = load(fx.SAMPLE_APP)
        patch_view_allocations(program)
        before = print_program(program)
        report = patch_view_allocations(program)
        assert not report.changed
        assert print_program(program) == before

    def test_custom_widget_method_needs_the_pass(self):
        baseline = load(fx.CUSTOM_WIDGET_APP)
        synthesize_entry_point(baseline, ["sample.GaugeActivity"])
        graph0 = build_call_graph(baseline)
        assert not graph0.is_reachable("sample.Gauge.refresh/0")

        patched = load(fx.CUSTOM_WIDGET_APP)
        patch_view_allocations(patched)
        synthesize_entry_point(patched, ["sample.GaugeActivity"])
        graph1 = build_call_graph(patched)
        assert graph1.is_reachable("sample.Gauge.refresh/0")
        assert graph1.edge_count() > graph0.edge_count()


# -------------------------------------------------------------- async rewrite


class TestAsyncPass:
    def test_execute_becomes_sequential_chain(self):
        program = load(fx.ASYNC_TASK_APP)
        report = sequentialize_async(program)
        body = body_of(program, "sample.SyncActivity", "onCreate", 1)
        names = [invoke_of(s).method_name for s in body if invoke_of(s)]
        assert names == [
            "init",
            "onPreExecute",
            "doInBackground",
            "onProgressUpdate",
            "onPostExecute",
        ]
        background = next(
            s for s in body if invoke_of(s) and invoke_of(s).method_name == "doInBackground"
        )
        post = next(
            s for s in body if invoke_of(s) and invoke_of(s).method_name == "onPostExecute"
        )
        # the background result feeds the completion callback
        assert invoke_of(post).args[1] == Var(background.lhs)
        assert len(report.injected) == 4 and len(report.replaced) == 1

    def test_execute_assignment_keeps_task_alias(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    t = new sample.T
    invoke special sample.T.init(t)
    r = invoke virtual sample.T.execute(t, "x")
    return
  }
}
class sample.T extends android.os.AsyncTask {
  method java.lang.Object doInBackground(java.lang.Object input) {
    return input
  }
}
"""
        )
        sequentialize_async(program)
        body = body_of(program, "sample.A", "onCreate", 1)
        from uiminer.ir.model import Cast

        tail = body[-2]
        assert isinstance(tail, Assign) and tail.lhs == "r"
        assert tail.rhs == Cast("sample.T", "t")

    def test_send_message_gets_handle_message(self):
        program = load(fx.HANDLER_APP)
        report = sequentialize_async(program)
        body = body_of(program, "sample.PingActivity", "onCreate", 1)
        send = body[4]
        handle = body[5]
        assert invoke_of(send).method_name == "sendMessage"
        assert invoke_of(handle).method_name == "handleMessage"
        assert invoke_of(handle).args == invoke_of(send).args
        assert handle.synthetic == ("async", send.uid)
        assert report.injected == [handle.uid]

    def test_posted_runnable_gets_run_call(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    r = new sample.Job
    invoke special sample.Job.init(r)
    invoke virtual sample.A.runOnUiThread(this, r)
    return
  }
}
class sample.Job extends java.lang.Object implements java.lang.Runnable {
  method void run() {
    invoke static android.util.Log.d("job", "ran")
    return
  }
}
"""
        )
        sequentialize_async(program)
        body = body_of(program, "sample.A", "onCreate", 1)
        run = invoke_of(body[3])
        assert run.class_name == "java.lang.Runnable" and run.method_name == "run"
        assert run.args == (Var("r"),)

    def test_pass_is_idempotent(self):
        for text in (fx.ASYNC_TASK_APP, fx.HANDLER_APP):
            program = load(text)
            sequentialize_async(program)
            before = print_program(program)
            report = sequentialize_async(program)
            assert not report.changed
            assert print_program(program) == before

    def test_task_callbacks_need_the_pass(self):
        baseline = load(fx.ASYNC_TASK_APP)
        synthesize_entry_point(baseline, ["sample.SyncActivity"])
        graph0 = build_call_graph(baseline)
        assert not graph0.is_reachable("sample.FetchTask.doInBackground/1")
        assert not graph0.is_reachable("sample.FetchTask.onPostExecute/1")

        patched = load(fx.ASYNC_TASK_APP)
        sequentialize_async(patched)
        synthesize_entry_point(patched, ["sample.SyncActivity"])
        graph1 = build_call_graph(patched)
        assert graph1.is_reachable("sample.FetchTask.doInBackground/1")
        assert graph1.is_reachable("sample.FetchTask.onPostExecute/1")
        assert graph1.edge_count() > graph0.edge_count()

    def test_handle_message_needs_the_pass(self):
        baseline = load(fx.HANDLER_APP)
        synthesize_entry_point(baseline, ["sample.PingActivity"])
        assert not build_call_graph(baseline).is_reachable(
            "sample.PingHandler.handleMessage/1"
        )

        patched = load(fx.HANDLER_APP)
        sequentialize_async(patched)
        synthesize_entry_point(patched, ["sample.PingActivity"])
        assert build_call_graph(patched).is_reachable(
            "sample.PingHandler.handleMessage/1"
        )


# ---------------------------------------------------------- listeners rewrite


class TestListenersPass:
    def test_registration_arms_callback(self):
        program = load(fx.CLICK_LISTENER_APP)
        report = inject_listener_callbacks(program)
        body = body_of(program, "sample.TapActivity", "onCreate", 1)
        injected = invoke_of(body[-2])
        assert injected.kind == "interface"
        assert injected.class_name == "android.view.View$OnClickListener"
        assert injected.method_name == "onClick"
        assert injected.args == (Var("l"), Var("b"))
        assert report.injected and not report.warnings

    def test_recipe_supplies_placeholder_arguments(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    v = invoke virtual sample.A.findViewById(this, res:id/list)
    lv = (android.widget.ListView) v
    l = new sample.Picker
    invoke special sample.Picker.init(l)
    invoke virtual android.widget.ListView.setOnItemClickListener(lv, l)
    return
  }
}
class sample.Picker extends java.lang.Object implements android.widget.AdapterView$OnItemClickListener {
  method void onItemClick(android.widget.AdapterView parent, android.view.View view, int position, int row) {
    return
  }
}
"""
        )
        inject_listener_callbacks(program)
        body = body_of(program, "sample.A", "onCreate", 1)
        injected = invoke_of(body[-2])
        assert injected.method_name == "onItemClick"
        assert injected.args == (
            Var("l"),
            Var("lv"),
            NullConst(),
            IntConst(0),
            IntConst(0),
        )

    def test_unmodeled_registration_warns_and_skips(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    w = new sample.Widget
    invoke special sample.Widget.init(w)
    l = new java.lang.Object
    invoke special java.lang.Object.init(l)
    invoke virtual sample.Widget.setOnBoomListener(w, l)
    return
  }
}
class sample.Widget extends java.lang.Object {
  method void setOnBoomListener(java.lang.Object listener) {
    return
  }
}
"""
        )
        report = inject_listener_callbacks(program)
        assert not report.injected
        assert any("setOnBoomListener" in w for w in report.warnings)

    def test_null_listener_is_ignored(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    v = invoke virtual sample.A.findViewById(this, res:id/btn)
    invoke virtual android.view.View.setOnClickListener(v, null)
    return
  }
}
"""
        )
        report = inject_listener_callbacks(program)
        assert not report.changed

    def test_registration_outside_activity_still_armed(self):
        program = load(
            """
class sample.Wiring extends java.lang.Object {
  method static void hook(android.view.View v, sample.Tap l) {
    invoke virtual android.view.View.setOnClickListener(v, l)
    return
  }
}
class sample.Tap extends java.lang.Object implements android.view.View$OnClickListener {
  method void onClick(android.view.View view) {
    return
  }
}
"""
        )
        report = inject_listener_callbacks(program)
        body = body_of(program, "sample.Wiring", "hook", 2)
        assert report.injected == [body[1].uid]

    def test_pass_is_idempotent(self):
        program = load(fx.SAMPLE_APP)
        inject_listener_callbacks(program)
        before = print_program(program)
        report = inject_listener_callbacks(program)
        assert not report.changed
        assert print_program(program) == before

    def test_listener_callback_needs_the_pass(self):
        baseline = load(fx.CLICK_LISTENER_APP)
        synthesize_entry_point(baseline, ["sample.TapActivity"])
        graph0 = build_call_graph(baseline)
        assert not graph0.is_reachable("sample.Tap.onClick/1")

        patched = load(fx.CLICK_LISTENER_APP)
        inject_listener_callbacks(patched)
        synthesize_entry_point(patched, ["sample.TapActivity"])
        graph1 = build_call_graph(patched)
        assert graph1.is_reachable("sample.Tap.onClick/1")
        assert graph1.edge_count() > graph0.edge_count()


# ----------------------------------------------------------- adapters rewrite


class TestAdaptersPass:
    def test_set_adapter_gets_row_construction(self):
        program = load(fx.ADAPTER_ROWS_APP)
        report = inject_adapter_callbacks(program)
        body = body_of(program, "sample.FeedActivity", "onCreate", 1)
        injected = body[-2]
        call = invoke_of(injected)
        assert call.class_name == "android.widget.Adapter"
        assert call.method_name == "getView"
        assert call.args == (Var("a"), IntConst(0), NullConst(), Var("lv"))
        assert report.injected == [injected.uid]

    def test_adapter_from_field_uses_same_variable(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  field android.widget.Adapter cached;
  method void onCreate(android.os.Bundle bundle) {
    v = invoke virtual sample.A.findViewById(this, res:id/list)
    lv = (android.widget.ListView) v
    ad = this.cached
    invoke virtual android.widget.ListView.setAdapter(lv, ad)
    return
  }
}
"""
        )
        inject_adapter_callbacks(program)
        body = body_of(program, "sample.A", "onCreate", 1)
        assert invoke_of(body[-2]).args[0] == Var("ad")

    def test_null_adapter_is_ignored(self):
        program = load(
            """
class sample.A extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    v = invoke virtual sample.A.findViewById(this, res:id/list)
    lv = (android.widget.ListView) v
    invoke virtual android.widget.ListView.setAdapter(lv, null)
    return
  }
}
"""
        )
        report = inject_adapter_callbacks(program)
        assert not report.changed

    def test_pass_is_idempotent(self):
        program = load(fx.SAMPLE_APP)
        inject_adapter_callbacks(program)
        before = print_program(program)
        report = inject_adapter_callbacks(program)
        assert not report.changed
        assert print_program(program) == before

    def test_row_construction_needs_the_pass(self):
        baseline = load(fx.ADAPTER_ROWS_APP)
        synthesize_entry_point(baseline, ["sample.FeedActivity"])
        graph0 = build_call_graph(baseline)
        assert not graph0.is_reachable("sample.FeedAdapter.getView/3")

        patched = load(fx.ADAPTER_ROWS_APP)
        inject_adapter_callbacks(patched)
        synthesize_entry_point(patched, ["sample.FeedActivity"])
        graph1 = build_call_graph(patched)
        assert graph1.is_reachable("sample.FeedAdapter.getView/3")
        assert graph1.edge_count() > graph0.edge_count()


# ------------------------------------------------------------ all four at once


ALL_FIXTURES = [
    fx.SAMPLE_APP,
    fx.SHARED_LISTENER_APP,
    fx.TWO_CONTEXT_APP,
    fx.SIXTEEN_LABEL_APP,
    fx.CUSTOM_WIDGET_APP,
    fx.ASYNC_TASK_APP,
    fx.HANDLER_APP,
    fx.CLICK_LISTENER_APP,
    fx.ADAPTER_ROWS_APP,
    fx.DIALOG_APP,
]


class TestAugment:
    @pytest.mark.parametrize("text", ALL_FIXTURES)
    def test_rewrites_never_break_validity(self, text):
        program = load(text)
        before = validate_program(program)
        augment(program)
        assert validate_program(program) == before

    @pytest.mark.parametrize("text", ALL_FIXTURES)
    def test_full_augmentation_is_idempotent(self, text):
        program = load(text)
        augment(program)
        before = print_program(program)
        reports = augment(program)
        assert not any(r.changed for r in reports)
        assert print_program(program) == before

    def test_flagship_reaches_every_injected_callback(self):
        program = load(fx.SAMPLE_APP)
        augment(program)
        synthesize_entry_point(program, fx.SAMPLE_ACTIVITIES)
        graph = build_call_graph(program)
        for signature in (
            "sample.HintListener.onLongClick/1",
            "sample.SampleAdapter.getView/3",
            "sample.Helper.getLabels/0",
        ):
            assert graph.is_reachable(signature), signature

    def test_monotone_edges_on_every_fixture(self):
        for text in ALL_FIXTURES:
            baseline = load(text)
            activities = [
                name
                for name, cls in baseline.classes.items()
                if not cls.is_framework
                and baseline.is_subtype(name, "android.app.Activity")
            ]
            synthesize_entry_point(baseline, activities)
            base_edges = build_call_graph(baseline).edge_count()

            patched = load(text)
            augment(patched)
            synthesize_entry_point(patched, activities)
            assert build_call_graph(patched).edge_count() >= base_edges


# ------------------------------------------------------------------ the graph


class TestCallGraph:
    def test_virtual_dispatch_covers_instantiated_subtypes_only(self):
        program = load(
            """
class sample.Main extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    a = new sample.Beep
    invoke special sample.Beep.init(a)
    s = (sample.Sound) a
    invoke interface sample.Sound.play(s)
    return
  }
}
class sample.Sound extends java.lang.Object {
  method void play();
}
class sample.Beep extends java.lang.Object implements sample.Sound {
  method void play() {
    return
  }
}
class sample.Boop extends java.lang.Object implements sample.Sound {
  method void play() {
    return
  }
}
"""
        )
        synthesize_entry_point(program, ["sample.Main"])
        graph = build_call_graph(program)
        assert graph.is_reachable("sample.Beep.play/0")
        assert not graph.is_reachable("sample.Boop.play/0")

    def test_both_subtypes_dispatch_when_both_instantiated(self):
        program = load(
            """
class sample.Main extends android.app.Activity {
  method void onCreate(android.os.Bundle bundle) {
    a = new sample.Beep
    b = new sample.Boop
    s = (sample.Sound) a
    invoke interface sample.Sound.play(s)
    return
  }
}
class sample.Sound extends java.lang.Object {
  method void play();
}
class sample.Beep extends java.lang.Object implements sample.Sound {
  method void play() {
    return
  }
}
class sample.Boop extends java.lang.Object implements sample.Sound {
  method void play() {
    return
  }
}
"""
        )
        synthesize_entry_point(program, ["sample.Main"])
        graph = build_call_graph(program)
        body = body_of(program, "sample.Main", "onCreate", 1)
        site = body[3]
        targets = {m.signature for m in graph.callees_at(site.uid)}
        assert targets == {"sample.Beep.play/0", "sample.Boop.play/0"}

    def test_framework_call_is_a_leaf_edge(self):
        program = load(fx.CUSTOM_WIDGET_APP)
        synthesize_entry_point(program, ["sample.GaugeActivity"])
        graph = build_call_graph(program)
        body = body_of(program, "sample.GaugeActivity", "onCreate", 1)
        lookup = body[1]
        targets = graph.callees_at(lookup.uid)
        assert [t.signature for t in targets] == ["android.app.Activity.findViewById/1"]
        assert targets[0].is_stub

    def test_callers_and_sites_are_inverse(self):
        program = load(fx.SAMPLE_APP)
        augment(program)
        synthesize_entry_point(program, fx.SAMPLE_ACTIVITIES)
        graph = build_call_graph(program)
        target = "sample.Helper.getLabels/0"
        sites = graph.callers_of(target)
        assert sites
        for uid in sites:
            owner = graph.caller_of_site(uid)
            assert uid in graph.call_sites_in(owner)
            assert any(m.signature == target for m in graph.callees_at(uid))

    def test_requires_an_entry(self):
        program = load(fx.SAMPLE_APP)
        with pytest.raises(ValueError):
            build_call_graph(program)

    def test_unreachable_methods_stay_out(self):
        program = load(fx.TWO_CONTEXT_APP)
        synthesize_entry_point(program, ["sample.AlphaActivity"])
        graph = build_call_graph(program)
        assert graph.is_reachable("sample.LabelHelper.set/2")
        assert not graph.is_reachable("sample.BetaActivity.onCreate/1")


# ---------------------------------------------------------------------- icfg


class TestIcfg:
    def make(self, text, activities):
        program = load(text)
        augment(program)
        synthesize_entry_point(program, activities)
        graph = build_call_graph(program)
        return program, graph, Icfg(program, graph)

    def test_intraprocedural_chain(self):
        program, _, icfg = self.make(fx.TWO_CONTEXT_APP, ["sample.AlphaActivity"])
        body = body_of(program, "sample.AlphaActivity", "onCreate", 1)
        for left, right in zip(body, body[1:]):
            assert icfg.intra_succs(left.uid) == [right.uid]
            assert icfg.intra_preds(right.uid) == [left.uid]
        assert icfg.intra_succs(body[-1].uid) == []

    def test_call_and_return_edges_mirror_the_graph(self):
        program, graph, icfg = self.make(fx.TWO_CONTEXT_APP, ["sample.AlphaActivity"])
        body = body_of(program, "sample.AlphaActivity", "onCreate", 1)
        helper = program.resolve_method("sample.LabelHelper", "set", 2)
        site = next(
            s
            for s in body
            if invoke_of(s) and invoke_of(s).method_name == "set"
        )
        assert icfg.call_edges(site.uid) == [helper.body[0].uid]
        assert icfg.return_edges(site.uid) == [helper.body[-1].uid]
        assert site.uid in icfg.entry_sites(helper)

    def test_stub_sites_have_no_call_edges(self):
        program, _, icfg = self.make(fx.TWO_CONTEXT_APP, ["sample.AlphaActivity"])
        body = body_of(program, "sample.AlphaActivity", "onCreate", 1)
        content = body[0]
        assert invoke_of(content).method_name == "setContentView"
        assert icfg.call_edges(content.uid) == []
        assert icfg.return_edges(content.uid) == []
