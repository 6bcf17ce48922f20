"""Generate ancestor-search procedures from a metamodel.

:func:`generate_plan` looks only at the metamodel.  For every concrete kind
that can be contained somewhere it records the (container kind, reference)
pairs through which such a node may be owned.  :func:`find_owner` then
interprets the plan: it climbs from a node to its container one dispatch
step at a time until it meets the target kind or runs out of known
containment contexts.  :func:`find_owner_oracle` answers the same question by
scanning the container chain directly and is kept independent of the plan
for testing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .metamodel import MetaModel, containment_contexts
from .model import Model, container_chain


@dataclass(frozen=True)
class DispatchEntry:
    kind: str
    contexts: tuple[tuple[str, str], ...]


@dataclass(frozen=True)
class PlanStats:
    types_checked: int
    containment_links: int


@dataclass(frozen=True)
class TraversalPlan:
    target: str
    collect: tuple[str, ...]
    entries: tuple[DispatchEntry, ...]
    stats: PlanStats
    # concrete kinds answering each membership test, fixed at generation time
    target_kinds: frozenset[str] = field(default=frozenset(), compare=False, repr=False)
    collect_kinds: tuple[frozenset[str], ...] = field(default=(), compare=False, repr=False)

    def dispatch(self) -> dict[str, DispatchEntry]:
        table = self.__dict__.get("_dispatch")
        if table is None:
            table = {e.kind: e for e in self.entries}
            object.__setattr__(self, "_dispatch", table)
        return table


@dataclass
class OwnerResult:
    owner: Optional[str]
    collected: dict[str, Optional[str]]
    visited_depth: int


def _conforming(mm: MetaModel, kind: str) -> frozenset[str]:
    return frozenset(c.name for c in mm.classes() if mm.conforms(c.name, kind))


def generate_plan(mm: MetaModel, target: str, collect: Sequence[str] = ()) -> TraversalPlan:
    for k in (target, *collect):
        mm.get(k)
    entries = []
    for cls in mm.classes():
        if cls.abstract:
            continue
        contexts = containment_contexts(mm, cls.name)
        if contexts:
            entries.append(DispatchEntry(cls.name, tuple(contexts)))
    stats = PlanStats(len(entries), sum(len(e.contexts) for e in entries))
    return TraversalPlan(
        target=target,
        collect=tuple(collect),
        entries=tuple(entries),
        stats=stats,
        target_kinds=_conforming(mm, target),
        collect_kinds=tuple(_conforming(mm, k) for k in collect),
    )


def find_owner(plan: TraversalPlan, m: Model, node: str) -> OwnerResult:
    """Nearest ancestor-or-self of the plan's target kind, plus collected kinds.

    Collection stops with the owner, so collected nodes never lie above it.
    """
    collected: dict[str, Optional[str]] = dict.fromkeys(plan.collect)
    table = plan.dispatch()
    nodes = m.nodes
    if node not in nodes:
        m[node]
    cur, depth = node, 0
    while True:
        kind = nodes[cur].kind
        for k, kinds in zip(plan.collect, plan.collect_kinds):
            if collected[k] is None and kind in kinds:
                collected[k] = cur
        if kind in plan.target_kinds:
            return OwnerResult(cur, collected, depth)
        entry = table.get(kind)
        if entry is None:
            return OwnerResult(None, collected, depth)
        container = nodes[cur].container
        step = None
        if container is not None:
            parent, ref = container
            pkind = nodes[parent].kind
            for ckind, cref in entry.contexts:
                if cref == ref and ckind == pkind:
                    step = parent
                    break
        if step is None:
            return OwnerResult(None, collected, depth)
        cur, depth = step, depth + 1


def find_owner_oracle(m: Model, node: str, target: str, collect: Sequence[str] = ()) -> OwnerResult:
    """Reference answer for :func:`find_owner` from a plain container-chain scan."""
    mm = m.mm
    path = [node] + [p for p, _ in container_chain(m, node)]
    owner_index = None
    for i, nid in enumerate(path):
        if mm.conforms(m.nodes[nid].kind, target):
            owner_index = i
            break
    scanned = path if owner_index is None else path[: owner_index + 1]
    collected: dict[str, Optional[str]] = {}
    for k in collect:
        collected[k] = next((nid for nid in scanned if mm.conforms(m.nodes[nid].kind, k)), None)
    if owner_index is None:
        return OwnerResult(None, collected, len(path) - 1)
    return OwnerResult(path[owner_index], collected, owner_index)


# --------------------------------------------------------------------------
# rendering


def plan_to_dict(plan: TraversalPlan) -> dict:
    return {
        "target": plan.target,
        "collect": list(plan.collect),
        "stats": {
            "typesChecked": plan.stats.types_checked,
            "containmentLinks": plan.stats.containment_links,
        },
        "entries": [
            {
                "kind": e.kind,
                "contexts": [{"container": c, "reference": r} for c, r in e.contexts],
            }
            for e in plan.entries
        ],
    }


def render_plan_json(plan: TraversalPlan) -> str:
    return json.dumps(plan_to_dict(plan), indent=2) + "\n"


def dot_quote(text: str) -> str:
    escaped = text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
    return f'"{escaped}"'


def render_plan_dot(plan: TraversalPlan) -> str:
    """DOT digraph: one node per dispatch entry, one edge per containment context."""
    label = f"find {plan.target}"
    if plan.collect:
        label += "; collect " + ", ".join(plan.collect)
    label += f"; {plan.stats.types_checked} types, {plan.stats.containment_links} links"
    lines = ["digraph plan {", f"  label={dot_quote(label)};"]
    if plan.entries:
        lines.append(f"  {dot_quote(plan.target)} [shape=doubleoctagon];")
        lines.append("  node [shape=box];")
    declared = {plan.target}
    for e in plan.entries:
        if e.kind not in declared:
            lines.append(f"  {dot_quote(e.kind)};")
            declared.add(e.kind)
    for e in plan.entries:
        for container, ref in e.contexts:
            lines.append(
                f"  {dot_quote(e.kind)} -> {dot_quote(container)} [label={dot_quote(ref)}];"
            )
    lines.append("}")
    return "\n".join(lines) + "\n"
