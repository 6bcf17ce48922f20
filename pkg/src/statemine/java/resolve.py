"""Name-based, global resolution of parsed Java units.

There are no imports or packages: every class and enumeration is visible
everywhere.  When a name is declared more than once the first declaration
(in unit order) wins and a warning lists the candidates.
"""

from __future__ import annotations

from typing import Optional

from ..diagnostics import Diagnostic, warning
from ..model import Model, Node


def _simple(name: str) -> str:
    return name.rsplit(".", 1)[-1]


class _Scope:
    def __init__(self, m: Model):
        self.m = m
        self.classifiers: dict[str, list[str]] = {}
        self.constants: dict[str, list[str]] = {}
        for nid in m.walk():
            n = m.nodes[nid]
            if n.kind in ("Class", "Enumeration"):
                self.classifiers.setdefault(n.name, []).append(nid)
            elif n.kind == "EnumConstant":
                self.constants.setdefault(n.name, []).append(nid)

    def pick(self, table: dict[str, list[str]], name: str, node: Node, what: str, out: list) -> Optional[str]:
        found = table.get(name)
        if not found:
            return None
        if len(found) > 1:
            where = ", ".join(self._describe(c) for c in found)
            out.append(
                warning(f"ambiguous {what} {name!r} ({where}); using the first", node.origin)
            )
        return found[0]

    def _describe(self, nid: str) -> str:
        n = self.m.nodes[nid]
        if n.kind == "EnumConstant" and n.container:
            return f"{self.m.nodes[n.container[0]].name}.{n.name}"
        if n.origin:
            return f"{n.name} at {n.origin}"
        return n.name


def _enclosing(m: Model, nid: str, kind: str) -> Optional[str]:
    cur = m.nodes[nid].container
    while cur is not None:
        if m.is_a(cur[0], kind):
            return cur[0]
        cur = m.nodes[cur[0]].container
    return None


def _local_names(m: Model, method: str) -> dict[str, str]:
    """Parameters, local variables and catch parameters declared in ``method``."""
    out: dict[str, str] = {}
    for nid in m.subtree(method):
        n = m.nodes[nid]
        if n.kind in ("Parameter", "LocalVariable"):
            out.setdefault(n.name, nid)
    return out


def _fields(m: Model, cls: str) -> dict[str, str]:
    out: dict[str, str] = {}
    seen = set()
    while cls is not None and cls not in seen:
        seen.add(cls)
        for mem in m.navigate(cls, "members"):
            if m.nodes[mem].kind == "Field":
                out.setdefault(m.nodes[mem].name, mem)
        ext = m.get_ref(cls, "extends")
        cls = m.get_ref(ext, "target") if ext else None
        if cls is not None and m.nodes[cls].kind != "Class":
            cls = None
    return out


def _members_named(m: Model, classifier: str, name: str, kind: str) -> Optional[str]:
    if m.nodes[classifier].kind == "Enumeration":
        if kind == "EnumConstant":
            for c in m.navigate(classifier, "constants"):
                if m.nodes[c].name == name:
                    return c
        return None
    for mem in m.navigate(classifier, "members"):
        if m.nodes[mem].kind == kind and m.nodes[mem].name == name:
            return mem
    return None


def resolve_names(m: Model) -> list[Diagnostic]:
    """Set ``target`` on classifier references and reference-chain heads.

    Chain heads resolve by searching enum constants, then classifiers, then the
    locals and parameters of the enclosing method, then fields of the
    enclosing class and its superclasses.  Unresolved heads keep an empty
    target and yield a warning.  Qualified enum constants (``Event.ACK``) and
    members of a resolved class (``Running.Instance()``) are linked as well.
    """
    out: list[Diagnostic] = []
    scope = _Scope(m)
    locals_cache: dict[str, dict[str, str]] = {}
    fields_cache: dict[str, dict[str, str]] = {}

    for n in list(m.nodes_of("ClassifierReference")):
        if n.refs.get("target"):
            continue
        in_extends = n.container is not None and n.container[1] == "extends"
        simple = _simple(n.name)
        if in_extends:
            target = scope.pick(scope.classifiers, simple, n, "class", out)
            if target is None:
                out.append(warning(f"cannot resolve superclass {n.name!r}", n.origin))
            elif m.nodes[target].kind != "Class":
                out.append(warning(f"superclass {n.name!r} is not a class", n.origin))
                target = None
        else:
            found = scope.classifiers.get(simple)
            target = found[0] if found else None
        if target is not None:
            m.add_reference(n.id, "target", target)

    for nid in list(m.walk()):
        n = m.nodes[nid]
        if not m.mm.conforms(n.kind, "ElementReference") or n.refs.get("target"):
            continue
        via_next = n.container is not None and n.container[1] == "next"
        if via_next:
            prev = m.nodes[n.container[0]]
            prev_target = prev.refs.get("target")
            if not prev_target:
                continue
            owner = prev_target[0]
            okind = m.nodes[owner].kind
            if okind not in ("Class", "Enumeration"):
                continue
            if n.kind == "MethodCall":
                target = _members_named(m, owner, n.name, "ClassMethod")
            elif okind == "Enumeration":
                target = _members_named(m, owner, n.name, "EnumConstant")
            else:
                target = _members_named(m, owner, n.name, "Field")
            if target is not None:
                m.add_reference(nid, "target", target)
            continue
        if n.kind == "MethodCall":
            cls = _enclosing(m, nid, "Class")
            target = _members_named(m, cls, n.name, "ClassMethod") if cls else None
            if target is not None:
                m.add_reference(nid, "target", target)
            continue
        target = scope.pick(scope.constants, n.name, n, "enum constant", out)
        if target is None:
            target = scope.pick(scope.classifiers, n.name, n, "class", out)
        if target is None:
            meth = _enclosing(m, nid, "ClassMethod")
            if meth is not None:
                if meth not in locals_cache:
                    locals_cache[meth] = _local_names(m, meth)
                target = locals_cache[meth].get(n.name)
        if target is None:
            cls = _enclosing(m, nid, "Class")
            if cls is not None:
                if cls not in fields_cache:
                    fields_cache[cls] = _fields(m, cls)
                target = fields_cache[cls].get(n.name)
        if target is None:
            out.append(warning(f"cannot resolve name {n.name!r}", n.origin))
            continue
        m.add_reference(nid, "target", target)
    return out
