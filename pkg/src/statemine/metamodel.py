"""Typed metamodels: kinds, inheritance, attributes and references.

Metamodels are authored as JSON (``*.mmjson``)::

    {"packages": [{"name": "p", "classes": [
        {"name": "A", "abstract": false, "supertypes": [],
         "attributes": [{"name": "name", "type": "text"}],
         "references": [{"name": "items", "target": "B",
                         "containment": true, "many": true}]}]}]}

A loaded :class:`MetaModel` is immutable.  :func:`augment_opposites` returns a
new metamodel in which every reference can be navigated backwards.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources
from typing import Iterable, Iterator, Optional

ATTRIBUTE_TYPES = ("text", "boolean", "integer")


class MetamodelError(ValueError):
    """Raised for malformed or inconsistent metamodels."""


@dataclass(frozen=True)
class MetaAttribute:
    name: str
    type: str = "text"


@dataclass(frozen=True)
class MetaReference:
    name: str
    target: str
    containment: bool = False
    many: bool = False
    opposite: Optional[str] = None
    synthetic: bool = False


@dataclass(frozen=True)
class MetaClass:
    name: str
    package: str
    abstract: bool = False
    supertypes: tuple[str, ...] = ()
    attributes: tuple[MetaAttribute, ...] = ()
    references: tuple[MetaReference, ...] = ()


@dataclass(frozen=True)
class MetaPackage:
    name: str
    classes: tuple[MetaClass, ...] = ()


@dataclass(frozen=True, eq=True)
class MetaModel:
    packages: tuple[MetaPackage, ...] = ()
    name: str = field(default="", compare=False)

    @cached_property
    def index(self) -> dict[str, MetaClass]:
        out: dict[str, MetaClass] = {}
        for pkg in self.packages:
            for cls in pkg.classes:
                out.setdefault(cls.name, cls)
        return out

    def classes(self) -> Iterator[MetaClass]:
        for pkg in self.packages:
            yield from pkg.classes

    def __contains__(self, kind: str) -> bool:
        return kind in self.index

    def __len__(self) -> int:
        return len(self.index)

    def get(self, kind: str) -> MetaClass:
        try:
            return self.index[kind]
        except KeyError:
            raise MetamodelError(f"undeclared kind {kind!r}") from None

    def ancestors(self, kind: str) -> tuple[str, ...]:
        """``kind`` followed by all its supertypes, depth-first, without repeats."""
        cache = self._ancestor_cache
        if kind not in cache:
            self.get(kind)
            seen: list[str] = []
            stack = [kind]
            while stack:
                k = stack.pop()
                if k in seen or k not in self.index:
                    continue
                seen.append(k)
                stack.extend(reversed(self.index[k].supertypes))
            cache[kind] = tuple(seen)
        return cache[kind]

    @cached_property
    def _ancestor_cache(self) -> dict[str, tuple[str, ...]]:
        return {}

    def conforms(self, sub: str, sup: str) -> bool:
        sups = self._conform_sets.get(sub)
        if sups is None:
            sups = self._conform_sets[sub] = frozenset(self.ancestors(sub))
        if sup in sups:
            return True
        self.get(sup)
        return False

    @cached_property
    def _conform_sets(self) -> dict[str, frozenset[str]]:
        return {}

    def all_references(self, kind: str) -> tuple[MetaReference, ...]:
        """Own and inherited references; inherited ones come first."""
        cache = self._ref_cache
        if kind not in cache:
            refs: list[MetaReference] = []
            names: set[str] = set()
            for k in reversed(self.ancestors(kind)):
                for r in self.index[k].references:
                    if r.name not in names:
                        names.add(r.name)
                        refs.append(r)
            cache[kind] = tuple(refs)
        return cache[kind]

    @cached_property
    def _ref_cache(self) -> dict[str, tuple[MetaReference, ...]]:
        return {}

    def reference(self, kind: str, name: str) -> Optional[MetaReference]:
        return self.reference_table(kind).get(name)

    def reference_table(self, kind: str) -> dict[str, MetaReference]:
        table = self._ref_by_name.get(kind)
        if table is None:
            table = self._ref_by_name[kind] = {r.name: r for r in self.all_references(kind)}
        return table

    @cached_property
    def _ref_by_name(self) -> dict[str, dict[str, MetaReference]]:
        return {}

    def containment_names(self, kind: str) -> tuple[str, ...]:
        """Names of containment references of ``kind`` in declaration order."""
        cache = self._containment_cache
        if kind not in cache:
            cache[kind] = tuple(r.name for r in self.all_references(kind) if r.containment)
        return cache[kind]

    @cached_property
    def _containment_cache(self) -> dict[str, tuple[str, ...]]:
        return {}

    def reference_owner(self, kind: str, name: str) -> Optional[str]:
        """Name of the class that declares reference ``name`` as seen from ``kind``."""
        for k in self.ancestors(kind):
            if any(r.name == name for r in self.index[k].references):
                return k
        return None

    def all_attributes(self, kind: str) -> tuple[MetaAttribute, ...]:
        return tuple(self._attr_table(kind).values())

    def attribute(self, kind: str, name: str) -> Optional[MetaAttribute]:
        return self._attr_table(kind).get(name)

    def _attr_table(self, kind: str) -> dict[str, MetaAttribute]:
        cache = self._attr_cache
        if kind not in cache:
            table: dict[str, MetaAttribute] = {}
            for k in reversed(self.ancestors(kind)):
                for a in self.index[k].attributes:
                    table.setdefault(a.name, a)
            cache[kind] = table
        return cache[kind]

    @cached_property
    def _attr_cache(self) -> dict[str, dict[str, MetaAttribute]]:
        return {}

    def opposite_of(self, kind: str, ref: MetaReference) -> Optional[MetaReference]:
        if ref.opposite is None or ref.target not in self.index:
            return None
        return self.reference(ref.target, ref.opposite)


# --------------------------------------------------------------------------
# loading and saving


def _expect(value, typ, where: str):
    if not isinstance(value, typ):
        name = typ.__name__ if isinstance(typ, type) else "/".join(t.__name__ for t in typ)
        raise MetamodelError(f"{where}: expected {name}, got {type(value).__name__}")
    return value


def _check_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise MetamodelError(f"{where}: unknown key(s) {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise MetamodelError(f"{where}: missing key(s) {sorted(missing)}")


def metamodel_from_dict(data: dict, name: str = "") -> MetaModel:
    """Build a metamodel from parsed JSON without semantic validation."""
    _expect(data, dict, "$")
    _check_keys(data, {"packages"}, {"packages"}, "$")
    packages = []
    for i, p in enumerate(_expect(data["packages"], list, "$.packages")):
        pw = f"$.packages[{i}]"
        _expect(p, dict, pw)
        _check_keys(p, {"name", "classes"}, {"name", "classes"}, pw)
        classes = []
        for j, c in enumerate(_expect(p["classes"], list, pw + ".classes")):
            cw = f"{pw}.classes[{j}]"
            _expect(c, dict, cw)
            _check_keys(
                c,
                {"name", "abstract", "supertypes", "attributes", "references"},
                {"name"},
                cw,
            )
            attrs = []
            for k, a in enumerate(_expect(c.get("attributes", []), list, cw + ".attributes")):
                aw = f"{cw}.attributes[{k}]"
                _expect(a, dict, aw)
                _check_keys(a, {"name", "type"}, {"name", "type"}, aw)
                if a["type"] not in ATTRIBUTE_TYPES:
                    raise MetamodelError(f"{aw}.type: unknown attribute type {a['type']!r}")
                attrs.append(MetaAttribute(_expect(a["name"], str, aw + ".name"), a["type"]))
            refs = []
            for k, r in enumerate(_expect(c.get("references", []), list, cw + ".references")):
                rw = f"{cw}.references[{k}]"
                _expect(r, dict, rw)
                _check_keys(
                    r,
                    {"name", "target", "containment", "many", "opposite"},
                    {"name", "target"},
                    rw,
                )
                refs.append(
                    MetaReference(
                        name=_expect(r["name"], str, rw + ".name"),
                        target=_expect(r["target"], str, rw + ".target"),
                        containment=_expect(r.get("containment", False), bool, rw + ".containment"),
                        many=_expect(r.get("many", False), bool, rw + ".many"),
                        opposite=r.get("opposite"),
                    )
                )
            classes.append(
                MetaClass(
                    name=_expect(c["name"], str, cw + ".name"),
                    package=p["name"],
                    abstract=_expect(c.get("abstract", False), bool, cw + ".abstract"),
                    supertypes=tuple(_expect(c.get("supertypes", []), list, cw + ".supertypes")),
                    attributes=tuple(attrs),
                    references=tuple(refs),
                )
            )
        packages.append(MetaPackage(_expect(p["name"], str, pw + ".name"), tuple(classes)))
    return MetaModel(tuple(packages), name=name)


def load_metamodel(text: str, name: str = "") -> MetaModel:
    """Parse and validate metamodel JSON.

    Raises :class:`MetamodelError` on malformed JSON, unknown keys, unresolved
    kind names or inheritance cycles.  The message carries the JSON location.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MetamodelError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    mm = metamodel_from_dict(data, name)
    problems = validate_metamodel(mm)
    if problems:
        raise MetamodelError("; ".join(problems))
    return mm


def metamodel_to_dict(mm: MetaModel, include_synthetic: bool = False) -> dict:
    packages = []
    for p in mm.packages:
        classes = []
        for c in p.classes:
            refs = []
            for r in c.references:
                if r.synthetic and not include_synthetic:
                    continue
                d = {
                    "name": r.name,
                    "target": r.target,
                    "containment": r.containment,
                    "many": r.many,
                }
                opp = r.opposite
                if opp is not None and not include_synthetic:
                    opp_ref = mm.reference(r.target, opp) if r.target in mm else None
                    if opp_ref is not None and opp_ref.synthetic:
                        opp = None
                if opp is not None:
                    d["opposite"] = opp
                refs.append(d)
            classes.append(
                {
                    "name": c.name,
                    "abstract": c.abstract,
                    "supertypes": list(c.supertypes),
                    "attributes": [{"name": a.name, "type": a.type} for a in c.attributes],
                    "references": refs,
                }
            )
        packages.append({"name": p.name, "classes": classes})
    return {"packages": packages}


def save_metamodel(mm: MetaModel) -> str:
    """Serialize declared (non-synthetic) content with stable key order."""
    return json.dumps(metamodel_to_dict(mm), indent=2, ensure_ascii=False) + "\n"


def read_metamodel(path) -> MetaModel:
    from pathlib import Path

    p = Path(path)
    return load_metamodel(p.read_text(encoding="utf-8"), name=p.stem)


def shipped_metamodel(name: str = "java_subset") -> MetaModel:
    """One of the metamodels bundled in ``statemine/data``."""
    text = resources.files("statemine").joinpath("data", f"{name}.mmjson").read_text("utf-8")
    return load_metamodel(text, name=name)


# --------------------------------------------------------------------------
# validation


def _find_cycle(mm: MetaModel) -> Optional[list[str]]:
    state: dict[str, int] = {}
    path: list[str] = []

    def visit(k: str) -> Optional[list[str]]:
        state[k] = 1
        path.append(k)
        for s in mm.index[k].supertypes:
            if s not in mm.index:
                continue
            if state.get(s) == 1:
                return path[path.index(s):] + [s]
            if s not in state:
                found = visit(s)
                if found:
                    return found
        path.pop()
        state[k] = 2
        return None

    for cls in mm.classes():
        if cls.name not in state:
            found = visit(cls.name)
            if found:
                return found
    return None


def _name_conflicts(mm: MetaModel, kind: str, slot: str) -> set[str]:
    counts: dict[str, int] = {}
    for k in mm.ancestors(kind):
        for f in getattr(mm.index[k], slot):
            counts[f.name] = counts.get(f.name, 0) + 1
    return {n for n, c in counts.items() if c > 1}


def validate_metamodel(mm: MetaModel) -> list[str]:
    """One message per violated metamodel invariant; empty when valid."""
    out: list[str] = []
    seen: dict[str, str] = {}
    for p in mm.packages:
        for c in p.classes:
            if c.name in seen:
                out.append(f"kind {c.name!r} declared in both {seen[c.name]!r} and {p.name!r}")
            else:
                seen[c.name] = p.name
    for p in mm.packages:
        for j, c in enumerate(p.classes):
            where = f"{p.name}.{c.name}"
            for s in c.supertypes:
                if s not in mm.index:
                    out.append(f"{where}: unresolved supertype {s!r}")
            for r in c.references:
                if r.target not in mm.index:
                    out.append(f"{where}.{r.name}: unresolved target kind {r.target!r}")
    cycle = _find_cycle(mm)
    if cycle:
        out.append("inheritance cycle: " + " -> ".join(cycle))
        return out
    if out:
        return out

    for c in mm.classes():
        where = f"{c.package}.{c.name}"
        for what, names in (
            ("reference", _name_conflicts(mm, c.name, "references")),
            ("attribute", _name_conflicts(mm, c.name, "attributes")),
        ):
            inherited = set()
            for s in c.supertypes:
                inherited |= _name_conflicts(mm, s, "references" if what == "reference" else "attributes")
            for n in sorted(names - inherited):
                out.append(f"{where}: duplicate {what} {n!r}")
        for r in c.references:
            if r.opposite is None:
                continue
            opp = mm.reference(r.target, r.opposite)
            if opp is None:
                out.append(
                    f"{where}.{r.name}: opposite {r.opposite!r} not found on {r.target!r}"
                )
                continue
            back = mm.reference(opp.target, opp.opposite) if opp.opposite else None
            if opp.opposite != r.name or back is None or back is not r:
                out.append(
                    f"{where}.{r.name}: opposite {r.target}.{opp.name} does not point back"
                )
            if r.containment and (opp.containment or opp.many):
                out.append(
                    f"{where}.{r.name}: opposite of a containment reference must be "
                    f"single-valued and non-containment"
                )
    return out


# --------------------------------------------------------------------------
# meta-level queries


def kind_conforms(mm: MetaModel, sub: str, sup: str) -> bool:
    """True iff ``sup`` is reachable from ``sub`` through zero or more supertype edges."""
    mm.get(sub)
    return mm.conforms(sub, sup)


def containment_contexts(mm: MetaModel, kind: str) -> list[tuple[str, str]]:
    """Every (container kind, reference) through which a ``kind`` node can be owned.

    Container kinds are the concrete classes, each with its own and inherited
    containment references, since only concrete kinds are ever instantiated.
    """
    mm.get(kind)
    accepted = set(mm.ancestors(kind))
    out = []
    for c in mm.classes():
        if c.abstract:
            continue
        for r in mm.all_references(c.name):
            if r.containment and r.target in accepted:
                out.append((c.name, r.name))
    return out


def synthetic_name(owner: str, ref: str) -> str:
    return f"{owner}_{ref}_opposite"


def augment_opposites(mm: MetaModel) -> MetaModel:
    """Give every reference without an opposite a synthetic one on its target.

    The synthetic reference is named ``<owner>_<ref>_opposite``; it is
    single-valued for containment references and many-valued otherwise.
    Applying the function twice equals applying it once.
    """
    added: dict[str, list[MetaReference]] = {}
    patched: dict[tuple[str, str], MetaReference] = {}
    for c in mm.classes():
        for r in c.references:
            if r.opposite is not None:
                continue
            name = synthetic_name(c.name, r.name)
            clash = mm.reference(r.target, name)
            if clash is None:
                # a subclass of the target may declare it too
                for other in mm.classes():
                    if mm.conforms(other.name, r.target) and any(
                        x.name == name for x in other.references
                    ):
                        clash = name
                        break
            if clash is None:
                clash = next((x for x in added.get(r.target, []) if x.name == name), None)
            if clash is not None:
                raise MetamodelError(
                    f"synthetic opposite {r.target}.{name} for {c.name}.{r.name} "
                    f"collides with a declared reference {r.target}.{name}"
                )
            added.setdefault(r.target, []).append(
                MetaReference(
                    name=name,
                    target=c.name,
                    containment=False,
                    many=not r.containment,
                    opposite=r.name,
                    synthetic=True,
                )
            )
            patched[(c.name, r.name)] = replace(r, opposite=name)
    if not added:
        return mm
    packages = []
    for p in mm.packages:
        classes = []
        for c in p.classes:
            refs = tuple(patched.get((c.name, r.name), r) for r in c.references)
            refs += tuple(added.get(c.name, ()))
            classes.append(replace(c, references=refs))
        packages.append(replace(p, classes=tuple(classes)))
    return MetaModel(tuple(packages), name=mm.name)


def merge_metamodels(*mms: MetaModel, name: str = "") -> MetaModel:
    """Concatenate the packages of several metamodels (declared content only)."""
    packages: list[MetaPackage] = []
    for mm in mms:
        for p in mm.packages:
            packages.append(
                replace(
                    p,
                    classes=tuple(
                        replace(c, references=tuple(r for r in c.references if not r.synthetic))
                        for c in p.classes
                    ),
                )
            )
    merged = MetaModel(tuple(packages), name=name)
    # opposites pointing at dropped synthetic refs are reset
    fixed = []
    for p in merged.packages:
        classes = []
        for c in p.classes:
            refs = tuple(
                replace(r, opposite=None)
                if r.opposite is not None and r.target in merged and merged.reference(r.target, r.opposite) is None
                else r
                for r in c.references
            )
            classes.append(replace(c, references=refs))
        fixed.append(replace(p, classes=tuple(classes)))
    return MetaModel(tuple(fixed), name=name)


def with_reference(mm: MetaModel, kind: str, ref: MetaReference) -> MetaModel:
    """Copy of ``mm`` with ``ref`` appended to the declared references of ``kind``."""
    mm.get(kind)
    packages = []
    for p in mm.packages:
        classes = tuple(
            replace(c, references=c.references + (ref,)) if c.name == kind else c
            for c in p.classes
        )
        packages.append(replace(p, classes=classes))
    return MetaModel(tuple(packages), name=mm.name)


def iter_kinds(mm: MetaModel, concrete_only: bool = False) -> Iterable[str]:
    for c in mm.classes():
        if not (concrete_only and c.abstract):
            yield c.name
