"""Typed instance graphs conforming to a :class:`~statemine.metamodel.MetaModel`.

Containment is single-container and acyclic, so nodes form a forest.  Every
reference is navigable in both directions: synthetic opposite slots are
computed on demand from container links and an incoming-edge index, and are
never stored or serialized.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Optional

from .diagnostics import Diagnostic, Location, error
from .metamodel import MetaModel, MetaReference, augment_opposites


class ModelError(ValueError):
    """Raised when an operation would break the model's structural invariants."""


@dataclass
class Node:
    id: str
    kind: str
    attrs: dict[str, Any] = field(default_factory=dict)
    container: Optional[tuple[str, str]] = None
    refs: dict[str, list[str]] = field(default_factory=dict)
    origin: Optional[Location] = None

    def get(self, attr: str, default=None):
        return self.attrs.get(attr, default)

    @property
    def name(self) -> Optional[str]:
        return self.attrs.get("name")


_ATTR_PY_TYPES = {"text": str, "boolean": bool, "integer": int}


def _attr_ok(type_name: str, value: Any) -> bool:
    if type_name == "integer":
        return isinstance(value, int) and not isinstance(value, bool)
    return isinstance(value, _ATTR_PY_TYPES[type_name])


class Model:
    def __init__(self, metamodel: MetaModel, name: Optional[str] = None):
        self.mm = augment_opposites(metamodel)
        self.metamodel_name = metamodel.name if name is None else name
        self.nodes: dict[str, Node] = {}
        self._counter = 0
        self._incoming: dict[str, list[tuple[str, str]]] = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def __getitem__(self, node_id: str) -> Node:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise ModelError(f"unknown node {node_id!r}") from None

    @property
    def roots(self) -> list[str]:
        return [n.id for n in self.nodes.values() if n.container is None]

    def _fresh_id(self) -> str:
        while True:
            self._counter += 1
            nid = f"n{self._counter}"
            if nid not in self.nodes:
                return nid

    # ---- construction

    def add_node(
        self,
        kind: str,
        attrs: Optional[dict[str, Any]] = None,
        *,
        node_id: Optional[str] = None,
        origin: Optional[Location] = None,
    ) -> str:
        if kind not in self.mm:
            raise ModelError(f"undeclared kind {kind!r}")
        if self.mm.get(kind).abstract:
            raise ModelError(f"cannot instantiate abstract kind {kind!r}")
        attrs = dict(attrs or {})
        for k, v in attrs.items():
            decl = self.mm.attribute(kind, k)
            if decl is None:
                raise ModelError(f"{kind} has no attribute {k!r}")
            if not _attr_ok(decl.type, v):
                raise ModelError(f"{kind}.{k} expects {decl.type}, got {v!r}")
        if node_id is None:
            node_id = self._fresh_id()
        elif node_id in self.nodes:
            raise ModelError(f"duplicate node id {node_id!r}")
        self.nodes[node_id] = Node(node_id, kind, attrs, origin=origin)
        return node_id

    def _declared_ref(self, node: Node, ref: str) -> MetaReference:
        decl = self.mm.reference(node.kind, ref)
        if decl is None or decl.synthetic:
            raise ModelError(f"{node.kind} declares no reference {ref!r}")
        return decl

    def set_container(self, child: str, parent: str, ref: str) -> None:
        c, p = self[child], self[parent]
        decl = self._declared_ref(p, ref)
        if not decl.containment:
            raise ModelError(f"{p.kind}.{ref} is not a containment reference")
        if not self.mm.conforms(c.kind, decl.target):
            raise ModelError(f"{c.kind} does not conform to {p.kind}.{ref} target {decl.target}")
        if c.container is not None:
            raise ModelError(f"node {child} already has a container; detach it first")
        anc: Optional[str] = parent
        while anc is not None:
            if anc == child:
                raise ModelError(f"containment cycle: {parent} is inside {child}")
            cont = self.nodes[anc].container
            anc = cont[0] if cont else None
        slot = p.refs.setdefault(ref, [])
        if not decl.many and slot:
            raise ModelError(f"{p.kind}.{ref} of {parent} is already occupied")
        slot.append(child)
        c.container = (parent, ref)

    def detach(self, child: str) -> None:
        c = self[child]
        if c.container is None:
            return
        parent, ref = c.container
        slot = self.nodes[parent].refs[ref]
        slot.remove(child)
        if not slot:
            del self.nodes[parent].refs[ref]
        c.container = None

    def remove_nodes(self, ids: Iterable[str]) -> None:
        """Delete a set of nodes, unhooking them from any surviving neighbours."""
        doomed = {i for i in ids if i in self.nodes}
        for nid in doomed:
            cont = self.nodes[nid].container
            if cont is not None and cont[0] not in doomed:
                self.detach(nid)
        for nid in doomed:
            n = self.nodes[nid]
            for ref, targets in n.refs.items():
                for t in targets:
                    if t in doomed or t not in self._incoming:
                        continue
                    self._incoming[t] = [(s, r) for s, r in self._incoming[t] if not (s == nid and r == ref)]
                    if not self._incoming[t]:
                        del self._incoming[t]
            for src, ref in self._incoming.pop(nid, ()):
                if src in doomed or src not in self.nodes:
                    continue
                slot = self.nodes[src].refs.get(ref)
                if slot is not None:
                    slot[:] = [t for t in slot if t != nid]
                    if not slot:
                        del self.nodes[src].refs[ref]
        for nid in doomed:
            del self.nodes[nid]

    def add_reference(self, node: str, ref: str, target: str) -> None:
        n = self[node]
        t = self[target]
        decl = self._declared_ref(n, ref)
        if decl.containment:
            raise ModelError(f"{n.kind}.{ref} is a containment reference; use set_container")
        if not self.mm.conforms(t.kind, decl.target):
            raise ModelError(f"{t.kind} does not conform to {n.kind}.{ref} target {decl.target}")
        slot = n.refs.setdefault(ref, [])
        if not decl.many and slot:
            raise ModelError(f"{n.kind}.{ref} of {node} is single-valued and already set")
        slot.append(target)
        self._incoming.setdefault(target, []).append((node, ref))

    # ---- navigation

    def children(self, node: str) -> Iterator[str]:
        """Contained children in reference-declaration order."""
        return iter(self._child_list(self[node]))

    def _child_list(self, n: Node) -> list[str]:
        refs = n.refs
        if not refs:
            return []
        out: list[str] = []
        for name in self.mm.containment_names(n.kind):
            ids = refs.get(name)
            if ids:
                out.extend(ids)
        # slots not declared (possible in loaded, non-conforming models)
        declared = self.mm.reference_table(n.kind)
        if len(refs) > len(declared) or any(name not in declared for name in refs):
            for name, ids in refs.items():
                if name not in declared:
                    out.extend(i for i in ids if i in self.nodes and self.nodes[i].container == (n.id, name))
        return out

    def get_ref(self, node: str, ref: str) -> Optional[str]:
        ids = self.navigate(node, ref)
        return ids[0] if ids else None

    def navigate(self, node: str, ref: str) -> list[str]:
        """Targets of ``ref`` on ``node``, including synthetic opposite slots."""
        n = self[node]
        decl = self.mm.reference(n.kind, ref)
        if decl is None:
            raise ModelError(f"{n.kind} has no reference {ref!r}")
        if not decl.synthetic:
            return list(n.refs.get(ref, ()))
        owner_kind, forward = decl.target, decl.opposite
        fwd = self.mm.reference(owner_kind, forward)
        if fwd is not None and fwd.containment:
            if n.container is None:
                return []
            parent, via = n.container
            if via == forward and self.mm.conforms(self.nodes[parent].kind, owner_kind):
                return [parent]
            return []
        return [
            src
            for src, via in self._incoming.get(node, ())
            if via == forward and self.mm.conforms(self.nodes[src].kind, owner_kind)
        ]

    def walk(self) -> Iterator[str]:
        """Pre-order traversal of the containment forest, roots in creation order."""
        for root in self.roots:
            yield from self.subtree(root)

    def subtree(self, node: str) -> Iterator[str]:
        self[node]
        nodes, kids = self.nodes, self._child_list
        stack = [node]
        while stack:
            nid = stack.pop()
            yield nid
            stack.extend(reversed(kids(nodes[nid])))

    def is_a(self, node: str, kind: str) -> bool:
        return self.mm.conforms(self[node].kind, kind)

    def nodes_of(self, kind: str) -> Iterator[Node]:
        for n in self.nodes.values():
            if self.mm.conforms(n.kind, kind):
                yield n


def container_chain(m: Model, node: str) -> list[tuple[str, str]]:
    """Ancestors of ``node`` nearest-first, each with the reference that holds the step below."""
    chain = []
    cur = m[node].container
    while cur is not None:
        chain.append(cur)
        cur = m.nodes[cur[0]].container
    return chain


# --------------------------------------------------------------------------
# conformance


def check_conformance(m: Model, mm: Optional[MetaModel] = None) -> list[Diagnostic]:
    mm = augment_opposites(mm) if mm is not None else m.mm
    out: list[Diagnostic] = []

    def diag(n: Node, msg: str) -> None:
        out.append(error(f"node {n.id} ({n.kind}): {msg}", n.origin))

    for n in m.nodes.values():
        if n.kind not in mm:
            diag(n, "undeclared kind")
            continue
        if mm.get(n.kind).abstract:
            diag(n, "abstract kind instantiated")
        for k, v in n.attrs.items():
            decl = mm.attribute(n.kind, k)
            if decl is None:
                diag(n, f"undeclared attribute {k!r}")
            elif not _attr_ok(decl.type, v):
                diag(n, f"attribute {k!r} expects {decl.type}, got {v!r}")
        for ref, ids in n.refs.items():
            decl = mm.reference(n.kind, ref)
            if decl is None or decl.synthetic:
                diag(n, f"undeclared reference slot {ref!r}")
                continue
            if not decl.many and len(ids) > 1:
                diag(n, f"single-valued reference {ref!r} holds {len(ids)} targets")
            for t in ids:
                target = m.nodes.get(t)
                if target is None:
                    diag(n, f"reference {ref!r} targets missing node {t!r}")
                    continue
                if target.kind in mm and not mm.conforms(target.kind, decl.target):
                    diag(n, f"reference {ref!r} target {t} is {target.kind}, expected {decl.target}")
                if decl.containment and target.container != (n.id, ref):
                    diag(n, f"contained node {t} does not record {n.id}.{ref} as its container")
        if n.container is not None:
            parent, ref = n.container
            p = m.nodes.get(parent)
            if p is None:
                diag(n, f"container {parent!r} does not exist")
            elif n.id not in p.refs.get(ref, ()):
                diag(n, f"container {parent}.{ref} does not list this node")
    # cycles: a containment cycle leaves every member without a root
    reached: set[str] = set()
    for root in m.roots:
        for nid in m.subtree(root):
            reached.add(nid)
    for n in m.nodes.values():
        if n.id not in reached and n.container is not None and n.container[0] in m.nodes:
            diag(n, "node is part of a containment cycle")
    return out


# --------------------------------------------------------------------------
# serialization


def model_to_dict(m: Model) -> dict:
    nodes = []
    for n in m.nodes.values():
        d: dict[str, Any] = {
            "id": n.id,
            "kind": n.kind,
            "attrs": dict(n.attrs),
            "container": list(n.container) if n.container else None,
            "refs": {k: list(v) for k, v in n.refs.items() if v},
        }
        if n.origin is not None:
            d["origin"] = [n.origin.file, n.origin.line, n.origin.column]
        nodes.append(d)
    return {"metamodel": m.metamodel_name, "nodes": nodes}


def save_model(m: Model) -> str:
    return json.dumps(model_to_dict(m), indent=2, ensure_ascii=False) + "\n"


def load_model(text: str, mm: MetaModel) -> Model:
    """Rebuild a model from JSON.

    Slots naming synthetic opposites are dropped (they are recomputed).  Other
    conformance problems are kept so :func:`check_conformance` can report them;
    only an unknown kind or a malformed document raises.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or not isinstance(data.get("nodes"), list):
        raise ModelError("model JSON must be an object with a 'nodes' list")
    m = Model(mm, name=data.get("metamodel", mm.name))
    for i, raw in enumerate(data["nodes"]):
        if not isinstance(raw, dict) or "id" not in raw or "kind" not in raw:
            raise ModelError(f"nodes[{i}]: expected an object with 'id' and 'kind'")
        kind = raw["kind"]
        if kind not in m.mm:
            raise ModelError(f"nodes[{i}] ({raw['id']}): unknown kind {kind!r}")
        if raw["id"] in m.nodes:
            raise ModelError(f"nodes[{i}]: duplicate id {raw['id']!r}")
        origin = raw.get("origin")
        n = Node(
            raw["id"],
            kind,
            dict(raw.get("attrs") or {}),
            tuple(raw["container"]) if raw.get("container") else None,
            origin=Location(*origin) if origin else None,
        )
        for ref, ids in (raw.get("refs") or {}).items():
            decl = m.mm.reference(kind, ref)
            if decl is not None and decl.synthetic:
                continue
            n.refs[ref] = list(ids)
        m.nodes[n.id] = n
    for n in m.nodes.values():
        for ref, ids in n.refs.items():
            decl = m.mm.reference(n.kind, ref)
            if decl is not None and not decl.containment:
                for t in ids:
                    m._incoming.setdefault(t, []).append((n.id, ref))
    m._counter = len(m.nodes)
    return m


def structurally_equal(a: Model, b: Model, *, origins: bool = True) -> bool:
    da, db = model_to_dict(a), model_to_dict(b)
    if not origins:
        for d in (da, db):
            for n in d["nodes"]:
                n.pop("origin", None)
    return da["nodes"] == db["nodes"]


def copy_model(m: Model, mm: Optional[MetaModel] = None) -> Model:
    """Copy of ``m`` (ids and order preserved), optionally bound to another metamodel."""
    out = Model(mm if mm is not None else m.mm, name=None if mm is not None else m.metamodel_name)
    for n in m.nodes.values():
        out.nodes[n.id] = Node(
            n.id,
            n.kind,
            dict(n.attrs),
            n.container,
            {k: list(v) for k, v in n.refs.items()},
            n.origin,
        )
    for src, edges in m._incoming.items():
        out._incoming[src] = list(edges)
    out._counter = m._counter
    return out


def strip_to_metamodel(m: Model, target: MetaModel) -> Model:
    """Keep only nodes whose kinds ``target`` declares, with their declared slots.

    Containment links to removed parents are cut, so kept nodes may become roots.
    """
    target = augment_opposites(target)
    keep = {
        n.id
        for n in m.nodes.values()
        if n.kind in target and not target.get(n.kind).abstract
    }
    out = Model(target)
    for n in m.nodes.values():
        if n.id not in keep:
            continue
        attrs = {k: v for k, v in n.attrs.items() if target.attribute(n.kind, k) is not None}
        refs = {}
        for ref, ids in n.refs.items():
            decl = target.reference(n.kind, ref)
            if decl is None or decl.synthetic:
                continue
            kept = [i for i in ids if i in keep]
            if kept:
                refs[ref] = kept
        container = n.container
        if container is not None:
            decl = target.reference(n.kind if container[0] not in m.nodes else m.nodes[container[0]].kind, container[1])
            if container[0] not in keep or decl is None or decl.synthetic:
                container = None
        out.nodes[n.id] = Node(n.id, n.kind, attrs, container, refs, n.origin)
    for n in out.nodes.values():
        for ref, ids in n.refs.items():
            decl = target.reference(n.kind, ref)
            if not decl.containment:
                for t in ids:
                    out._incoming.setdefault(t, []).append((n.id, ref))
    out._counter = m._counter
    return out
