"""State-machine extraction from a resolved Java syntax graph.

Coding conventions recognised:

* the state root is the class named ``State``; every non-abstract proper
  subclass of it becomes a state;
* ``Target.Instance().activate()`` inside a method of a state class is a
  transition to ``Target``;
* the trigger is the owning method's name, or, inside ``run``, the enum
  constant of the enclosing ``case``, the exception type of the enclosing
  ``catch``, or ``--``;
* the action is the enum constant passed to the first ``send(...)`` call in
  the statement list that holds the activation, or ``--``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .diagnostics import Diagnostic, warning
from .hotgen import OwnerResult, TraversalPlan, find_owner, generate_plan
from .metamodel import MetaModel, MetaReference, merge_metamodels, shipped_metamodel, with_reference
from .model import Model, copy_model

PLACEHOLDER = "--"
STATE_ROOT = "State"
RUN_METHOD = "run"

OWNER_KIND = "ClassMethod"
CASE_KIND = "NormalSwitchCase"
CATCH_KIND = "CatchBlock"

# trigger branch tags
BY_METHOD = "method"
BY_CASE = "case"
BY_CATCH = "catch"
BY_DEFAULT = "default"


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class State:
    name: str
    origin_class: Optional[str] = field(default=None, compare=False)


@dataclass(frozen=True)
class Transition:
    source: State
    target: State
    trigger: str
    action: str
    site: Optional[str] = field(default=None, compare=False)


@dataclass
class StateMachine:
    states: list[State] = field(default_factory=list)
    transitions: list[Transition] = field(default_factory=list)

    def state(self, name: str) -> Optional[State]:
        return next((s for s in self.states if s.name == name), None)


@dataclass(frozen=True)
class TraceLink:
    class_id: str
    class_name: str
    state: State


@dataclass(frozen=True)
class ActivationSite:
    activate_call: str
    instance_call: str
    class_ref: str
    target_class: str


@dataclass
class Extraction:
    machine: Optional[StateMachine]
    traces: list[TraceLink] = field(default_factory=list)
    warnings: list[Diagnostic] = field(default_factory=list)


# --------------------------------------------------------------------------
# states


def find_state_root(m: Model) -> Optional[str]:
    found = [n.id for n in m.nodes_of("Class") if n.name == STATE_ROOT]
    if len(found) > 1:
        where = ", ".join(str(m.nodes[i].origin or i) for i in found)
        raise ExtractionError(f"more than one class named {STATE_ROOT!r}: {where}")
    return found[0] if found else None


def superclass(m: Model, cls: str) -> Optional[str]:
    ref = m.get_ref(cls, "extends")
    if ref is None:
        return None
    target = m.get_ref(ref, "target")
    if target is None or m.nodes[target].kind != "Class":
        return None
    return target


def is_subclass_of(m: Model, sub: str, sup: str) -> bool:
    """True iff ``sup`` is a proper superclass of ``sub`` via resolved ``extends`` links."""
    for nid in (sub, sup):
        if m[nid].kind != "Class":
            raise ExtractionError(f"node {nid} is a {m.nodes[nid].kind}, not a Class")
    seen = [sub]
    cur = superclass(m, sub)
    while cur is not None:
        if cur in seen:
            names = " -> ".join(m.nodes[c].name for c in seen + [cur])
            raise ExtractionError(f"inheritance cycle: {names}")
        if cur == sup:
            return True
        seen.append(cur)
        cur = superclass(m, cur)
    return False


def build_states(m: Model, root: str) -> tuple[list[State], list[TraceLink], list[Diagnostic]]:
    states: list[State] = []
    traces: list[TraceLink] = []
    diags: list[Diagnostic] = []
    names: set[str] = set()
    for nid in m.walk():
        n = m.nodes[nid]
        if n.kind != "Class" or n.get("abstract") or not is_subclass_of(m, nid, root):
            continue
        if n.name in names:
            diags.append(warning(f"duplicate state class {n.name!r} ignored", n.origin))
            continue
        names.add(n.name)
        st = State(n.name, nid)
        states.append(st)
        traces.append(TraceLink(nid, n.name, st))
    return states, traces, diags


# --------------------------------------------------------------------------
# transitions


def _argless_call(m: Model, nid: str, name: str) -> bool:
    n = m.nodes[nid]
    return n.kind == "MethodCall" and n.name == name and not n.refs.get("arguments")


def match_activations(m: Model, diagnostics: Optional[list[Diagnostic]] = None) -> list[ActivationSite]:
    """Every ``X.Instance().activate()`` chain whose ``X`` resolves to a class."""
    sites = []
    for nid in m.walk():
        if not _argless_call(m, nid, "activate"):
            continue
        cont = m.nodes[nid].container
        if cont is None or cont[1] != "next" or not _argless_call(m, cont[0], "Instance"):
            continue
        inst = cont[0]
        cont = m.nodes[inst].container
        if cont is None or cont[1] != "next" or m.nodes[cont[0]].kind != "IdentifierReference":
            continue
        ref = cont[0]
        target = m.get_ref(ref, "target")
        if target is None:
            if diagnostics is not None:
                diagnostics.append(
                    warning(
                        f"activation of unresolved name {m.nodes[ref].name!r} skipped",
                        m.nodes[ref].origin,
                    )
                )
            continue
        if m.nodes[target].kind != "Class":
            continue
        sites.append(ActivationSite(nid, inst, ref, target))
    return sites


def _enum_constant_of(m: Model, expr: str) -> Optional[str]:
    """Name of the enum constant an argument or case label denotes, if any."""
    cur: Optional[str] = expr
    last = None
    while cur is not None:
        if not m.mm.conforms(m.nodes[cur].kind, "ElementReference"):
            return None
        last = cur
        cur = m.get_ref(cur, "next")
    target = m.get_ref(last, "target")
    if target is not None and m.nodes[target].kind == "EnumConstant":
        return m.nodes[target].name
    return None


def trigger_rule(
    m: Model, site: ActivationSite, owner: OwnerResult, diagnostics: Optional[list] = None
) -> tuple[str, str]:
    """(trigger text, branch tag) for an activation whose owning method is known."""
    if owner.owner is None:
        raise ExtractionError("activation site has no owning method")
    method = m.nodes[owner.owner].name
    if method != RUN_METHOD:
        return method, BY_METHOD
    case = owner.collected.get(CASE_KIND)
    if case is not None:
        label = m.get_ref(case, "condition")
        name = _enum_constant_of(m, label) if label else None
        if name is None:
            raw = _chain_text(m, label) if label else PLACEHOLDER
            if diagnostics is not None:
                diagnostics.append(
                    warning(f"case label {raw!r} is not an enum constant; using its text", m.nodes[case].origin)
                )
            name = raw or PLACEHOLDER
        return name, BY_CASE
    catch = owner.collected.get(CATCH_KIND)
    if catch is not None:
        param = m.get_ref(catch, "parameter")
        type_ref = m.get_ref(param, "type") if param else None
        if type_ref is not None:
            return m.nodes[type_ref].name.rsplit(".", 1)[-1], BY_CATCH
    return PLACEHOLDER, BY_DEFAULT


def resolve_trigger(m: Model, site: ActivationSite, owner: OwnerResult, diagnostics: Optional[list] = None) -> str:
    return trigger_rule(m, site, owner, diagnostics)[0]


def _chain_text(m: Model, expr: str) -> str:
    parts = []
    cur: Optional[str] = expr
    while cur is not None:
        n = m.nodes[cur]
        if not m.mm.conforms(n.kind, "ElementReference"):
            break
        parts.append(n.name)
        cur = m.get_ref(cur, "next")
    return ".".join(parts)


_SCOPE_BARRIERS = ("Statement", "StatementListContainer", "CatchBlock")


def _expression_nodes(m: Model, stmt: str):
    """Pre-order over ``stmt``'s subtree without entering nested statements."""
    stack = list(reversed(list(m.children(stmt))))
    while stack:
        nid = stack.pop()
        kind = m.nodes[nid].kind
        if any(m.mm.conforms(kind, b) for b in _SCOPE_BARRIERS):
            continue
        yield nid
        stack.extend(reversed(list(m.children(nid))))


def resolve_action(m: Model, site: ActivationSite, diagnostics: Optional[list] = None) -> str:
    container = None
    cur = m.nodes[site.activate_call].container
    while cur is not None:
        if m.is_a(cur[0], "StatementListContainer"):
            container = cur[0]
            break
        cur = m.nodes[cur[0]].container
    if container is None:
        return PLACEHOLDER
    for stmt in m.navigate(container, "statements"):
        for nid in _expression_nodes(m, stmt):
            n = m.nodes[nid]
            if n.kind != "MethodCall" or n.name != "send":
                continue
            args = m.navigate(nid, "arguments")
            if not args:
                continue
            for a in args:
                name = _enum_constant_of(m, a)
                if name is not None:
                    return name
            if diagnostics is not None:
                diagnostics.append(
                    warning("send(...) argument is not an enum constant; action set to '--'", n.origin)
                )
            return PLACEHOLDER
    return PLACEHOLDER


def owner_plan(mm: MetaModel) -> TraversalPlan:
    return generate_plan(mm, OWNER_KIND, [CASE_KIND, CATCH_KIND])


def _describe_site(m: Model, site: ActivationSite) -> str:
    return f"activation of {m.nodes[site.target_class].name}"


def extract(m: Model, plan: Optional[TraversalPlan] = None, dedupe: bool = False) -> Extraction:
    root = find_state_root(m)
    if root is None:
        return Extraction(
            None,
            [],
            [warning(f"no class named {STATE_ROOT!r}; nothing extracted")],
        )
    diags: list[Diagnostic] = []
    states, traces, state_diags = build_states(m, root)
    diags.extend(state_diags)
    state_of = {t.class_id: t.state for t in traces}
    plan = plan if plan is not None else owner_plan(m.mm)
    transitions: list[Transition] = []
    seen: set[Transition] = set()
    for site in match_activations(m, diags):
        origin = m.nodes[site.class_ref].origin
        owner = find_owner(plan, m, site.activate_call)
        if owner.owner is None:
            diags.append(warning(f"{_describe_site(m, site)} outside any method skipped", origin))
            continue
        cls = m.nodes[owner.owner].container
        source = state_of.get(cls[0]) if cls else None
        if source is None:
            where = m.nodes[cls[0]].name if cls else "?"
            diags.append(
                warning(f"{_describe_site(m, site)} in non-state class {where!r} skipped", origin)
            )
            continue
        target = state_of.get(site.target_class)
        if target is None:
            diags.append(
                warning(
                    f"{_describe_site(m, site)} skipped: {m.nodes[site.target_class].name!r} is not a state",
                    origin,
                )
            )
            continue
        trigger = resolve_trigger(m, site, owner, diags)
        action = resolve_action(m, site, diags)
        t = Transition(source, target, trigger, action, site.activate_call)
        if dedupe:
            if t in seen:
                continue
            seen.add(t)
        transitions.append(t)
    return Extraction(StateMachine(states, transitions), traces, diags)


# --------------------------------------------------------------------------
# target-model materialization


def transformation_metamodel(java: Optional[MetaModel] = None, sm: Optional[MetaModel] = None) -> MetaModel:
    """Java and state-machine metamodels joined by one Class -> State trace reference."""
    java = java if java is not None else shipped_metamodel("java_subset")
    sm = sm if sm is not None else shipped_metamodel("statemachine")
    merged = merge_metamodels(java, sm, name="transformation")
    return with_reference(merged, "Class", MetaReference("state", "State"))


def materialize(m: Model, x: Extraction, mm: Optional[MetaModel] = None) -> Model:
    """Copy ``m`` into the joined metamodel and add the extracted target nodes.

    Each state class gets a ``state`` trace link to its State node.  Stripping
    the result to the state-machine metamodel yields the bare target model.
    """
    out = copy_model(m, mm if mm is not None else transformation_metamodel())
    if x.machine is None:
        return out
    machine = out.add_node("StateMachine")
    ids: dict[str, str] = {}
    for st in x.machine.states:
        sid = out.add_node("State", {"name": st.name})
        out.set_container(sid, machine, "states")
        ids[st.name] = sid
    for tr in x.traces:
        out.add_reference(tr.class_id, "state", ids[tr.state.name])
    for tr in x.machine.transitions:
        tid = out.add_node("Transition", {"trigger": tr.trigger, "action": tr.action})
        out.set_container(tid, machine, "transitions")
        out.add_reference(tid, "source", ids[tr.source.name])
        out.add_reference(tid, "target", ids[tr.target.name])
    return out
