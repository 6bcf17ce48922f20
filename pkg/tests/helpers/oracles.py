"""Brute-force reference answers computed from raw metamodel dictionaries."""


def raw_supertypes(data: dict) -> dict:
    return {c["name"]: c.get("supertypes", []) for p in data["packages"] for c in p["classes"]}


def brute_conforms(sups: dict, sub: str, sup: str) -> bool:
    """Reachability over the raw supertype lists, recursive and unmemoized."""
    if sub == sup:
        return True
    return any(brute_conforms(sups, s, sup) for s in sups[sub])


def brute_contexts(data: dict, kind: str) -> set:
    sups = raw_supertypes(data)
    classes = {c["name"]: c for p in data["packages"] for c in p["classes"]}
    out = set()
    for cname, c in classes.items():
        if c.get("abstract"):
            continue
        for owner, oc in classes.items():
            if not brute_conforms(sups, cname, owner):
                continue
            for r in oc.get("references", []):
                if r.get("containment") and brute_conforms(sups, kind, r["target"]):
                    out.add((cname, r["name"]))
    return out


def brute_plan_stats(data: dict) -> tuple[int, int]:
    """(concrete kinds with at least one context, total contexts)."""
    types = links = 0
    for p in data["packages"]:
        for c in p["classes"]:
            if c.get("abstract"):
                continue
            n = len(brute_contexts(data, c["name"]))
            if n:
                types += 1
                links += n
    return types, links


def transitive_closure(parents: dict) -> set:
    """All (sub, sup) pairs with sub != sup reachable through single-parent links."""
    pairs = set()
    for start in parents:
        cur, seen = parents.get(start), {start}
        while cur is not None and cur not in seen:
            pairs.add((start, cur))
            seen.add(cur)
            cur = parents.get(cur)
    return pairs
