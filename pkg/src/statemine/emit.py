"""Render extraction results as JSON, DOT and plain text."""

from __future__ import annotations

import json
from typing import Optional

from .extractor import Extraction, State, StateMachine, Transition
from .hotgen import dot_quote


def machine_to_dict(sm: Optional[StateMachine]) -> Optional[dict]:
    if sm is None:
        return None
    return {
        "states": [{"name": s.name} for s in sm.states],
        "transitions": [
            {
                "source": t.source.name,
                "target": t.target.name,
                "trigger": t.trigger,
                "action": t.action,
            }
            for t in sm.transitions
        ],
    }


def render_json(x: Extraction) -> str:
    doc = {
        "stateMachine": machine_to_dict(x.machine),
        "traces": [{"class": t.class_name, "state": t.state.name} for t in x.traces],
        "warnings": [str(w) for w in x.warnings],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def machine_from_json(text: str) -> Optional[StateMachine]:
    """Inverse of :func:`render_json` for the state machine part."""
    doc = json.loads(text)["stateMachine"]
    if doc is None:
        return None
    states = {s["name"]: State(s["name"]) for s in doc["states"]}
    return StateMachine(
        list(states.values()),
        [
            Transition(states[t["source"]], states[t["target"]], t["trigger"], t["action"])
            for t in doc["transitions"]
        ],
    )


def render_dot(sm: StateMachine) -> str:
    lines = ["digraph statemachine {"]
    for s in sm.states:
        lines.append(f"  {dot_quote(s.name)} [label={dot_quote(s.name)}];")
    for t in sm.transitions:
        label = dot_quote(f"{t.trigger} / {t.action}")
        lines.append(f"  {dot_quote(t.source.name)} -> {dot_quote(t.target.name)} [label={label}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_text(sm: Optional[StateMachine]) -> str:
    if sm is None:
        return "no state machine\n"
    lines = [f"state machine: {len(sm.states)} states, {len(sm.transitions)} transitions"]
    lines += [f"state {s.name}" for s in sm.states]
    lines += [f"{t.source.name} --{t.trigger}/{t.action}--> {t.target.name}" for t in sm.transitions]
    return "\n".join(lines) + "\n"
