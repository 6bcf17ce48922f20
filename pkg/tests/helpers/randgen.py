"""Seeded random generators for metamodels, models and class hierarchies."""

import random

from statemine.metamodel import (
    MetaAttribute,
    MetaClass,
    MetaModel,
    MetaPackage,
    MetaReference,
)
from statemine.model import Model


def random_metamodel(rng: random.Random, max_classes: int = 12) -> MetaModel:
    """Valid metamodel: supertypes only point backwards, reference names unique."""
    n = rng.randint(1, max_classes)
    names = [f"K{i}" for i in range(n)]
    specs = []
    for i, name in enumerate(names):
        sups = rng.sample(names[:i], k=min(i, rng.randint(0, 2)))
        specs.append((name, rng.random() < 0.3, tuple(sups)))
    classes = []
    for i, (name, abstract, sups) in enumerate(specs):
        refs = []
        for j in range(rng.randint(0, 3)):
            refs.append(
                MetaReference(
                    name=f"{name.lower()}r{j}",
                    target=rng.choice(names),
                    containment=rng.random() < 0.5,
                    many=rng.random() < 0.5,
                )
            )
        attrs = tuple(MetaAttribute(f"{name.lower()}a{j}", rng.choice(("text", "boolean", "integer")))
                      for j in range(rng.randint(0, 2)))
        classes.append(MetaClass(name, "", abstract, sups, attrs, tuple(refs)))
    # spread classes over one to three packages
    cut = sorted(rng.sample(range(1, n), k=min(n - 1, rng.randint(0, 2)))) if n > 1 else []
    packages, start = [], 0
    for k, end in enumerate(cut + [n]):
        pname = f"p{k}"
        packages.append(
            MetaPackage(pname, tuple(MetaClass(c.name, pname, c.abstract, c.supertypes, c.attributes, c.references)
                                     for c in classes[start:end]))
        )
        start = end
    return MetaModel(tuple(packages), name="random")


def random_containment_model(
    rng: random.Random, mm: MetaModel, max_nodes: int = 500, max_depth: int = 12
) -> Model:
    """Random model whose containment tree respects ``mm``."""
    m = Model(mm)
    concrete = [c.name for c in m.mm.classes() if not c.abstract]
    by_target = {}
    for c in m.mm.classes():
        by_target[c.name] = [k for k in concrete if m.mm.conforms(k, c.name)]
    frontier = []
    # deep roots (kinds with containment references) make for interesting chains
    deep = [k for k in concrete if m.mm.containment_names(k)] or concrete
    roots = 0
    while concrete and len(m) < max_nodes and roots < 40:
        roots += 1
        root = m.add_node(rng.choice(deep if rng.random() < 0.8 else concrete))
        frontier.append((root, 0))
        while frontier and len(m) < max_nodes:
            nid, depth = frontier.pop(rng.randrange(len(frontier)))
            if depth >= max_depth:
                continue
            for ref in m.mm.all_references(m.nodes[nid].kind):
                if not ref.containment or not by_target[ref.target]:
                    continue
                count = rng.choice((0, 0, 1, 1, 2, 3)) if ref.many else rng.choice((0, 1))
                for _ in range(count):
                    if len(m) >= max_nodes:
                        break
                    child = m.add_node(rng.choice(by_target[ref.target]))
                    m.set_container(child, nid, ref.name)
                    frontier.append((child, depth + 1))
    return m


def random_hierarchy_source(rng: random.Random, max_classes: int = 50):
    """Java source for a random single-inheritance forest plus its extends map."""
    n = rng.randint(1, max_classes)
    names = [f"C{i}" for i in range(n)]
    order = names[:]
    rng.shuffle(order)
    parent = {}
    for i, name in enumerate(order):
        if i and rng.random() < 0.8:
            parent[name] = rng.choice(order[:i])
    lines = []
    for name in names:
        ext = f" extends {parent[name]}" if name in parent else ""
        lines.append(f"class {name}{ext} {{ }}")
    return "\n".join(lines) + "\n", parent


def synthetic_state_corpus(rng: random.Random, n_states: int = 500, n_sites: int = 5000) -> dict[str, str]:
    """File name -> source for a large machine with ``n_sites`` activation sites.

    Sites are spread over plain methods, switch cases and catch blocks inside
    ``run``, and half of them are preceded by a ``send``.
    """
    files = {
        "Event.java": "enum Event { " + ", ".join(f"E{i}" for i in range(20)) + " }\n",
        "Bus.java": "class Bus { void send(Event e) { } }\n",
        "Fault.java": "class Fault { }\n",
        "State.java": "abstract class State { abstract void activate(); }\n",
    }
    per_class = [n_sites // n_states + (1 if i < n_sites % n_states else 0) for i in range(n_states)]
    for i, count in enumerate(per_class):
        name = f"S{i}"
        methods, cases, catches = [], [], []
        for j in range(count):
            target = f"S{rng.randrange(n_states)}"
            act = f"{target}.Instance().activate();"
            if rng.random() < 0.5:
                act = f"bus.send(E{rng.randrange(20)}); " + act
            where = rng.randrange(3)
            if where == 0:
                methods.append(f"    void on{j}() {{ {act} }}")
            elif where == 1:
                cases.append(f"            case E{j % 20}: {act} break;")
            else:
                catches.append(f"        try {{ step(); }} catch (Fault f) {{ {act} }}")
        lines = [
            f"class {name} extends State {{",
            f"    static {name} instance = new {name}();",
            "    Bus bus;",
            f"    static {name} Instance() {{ return instance; }}",
            "    void activate() { }",
            "    void step() { }",
            *methods,
            "    void run(Event ev) {",
        ]
        if cases:
            lines += ["        switch (ev) {", *cases, "            default: break;", "        }"]
        lines += [*catches, "    }", "}"]
        files[f"states/{name}.java"] = "\n".join(lines) + "\n"
    return files
