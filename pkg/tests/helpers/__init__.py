from statemine.java import SourceUnit, load_sources


def build(source: str, name: str = "Test.java", strict: bool = False):
    """Parse and resolve one Java source; returns (model, diagnostics)."""
    return load_sources([SourceUnit(name, source)], strict=strict)


def find(m, kind, **attrs):
    """All node ids of ``kind`` whose attrs match, in walk order."""
    return [
        nid
        for nid in m.walk()
        if m.nodes[nid].kind == kind and all(m.nodes[nid].attrs.get(k) == v for k, v in attrs.items())
    ]
