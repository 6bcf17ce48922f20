"""Debug emitter: print a parsed unit back as Java source in the supported subset."""

from __future__ import annotations

from ..model import Model


class _Printer:
    def __init__(self, m: Model):
        self.m = m
        self.lines: list[str] = []

    def one(self, nid: str, ref: str):
        return self.m.get_ref(nid, ref)

    def many(self, nid: str, ref: str) -> list[str]:
        return self.m.navigate(nid, ref)

    def emit(self, depth: int, text: str) -> None:
        self.lines.append("    " * depth + text)

    def type_(self, nid: str) -> str:
        n = self.m.nodes[nid]
        return n.name + "[]" * n.get("arrayDimension", 0)

    def mods(self, text: str) -> str:
        return text + " " if text else ""

    def unit(self, nid: str) -> str:
        for i, c in enumerate(self.many(nid, "classifiers")):
            if i:
                self.lines.append("")
            self.classifier(c)
        return "\n".join(self.lines) + "\n"

    def classifier(self, nid: str) -> None:
        n = self.m.nodes[nid]
        if n.kind == "Enumeration":
            names = ", ".join(self.m.nodes[c].name for c in self.many(nid, "constants"))
            self.emit(0, f"{self.mods(n.get('modifiers', ''))}enum {n.name} {{ {names} }}")
            return
        head = self.mods(n.get("modifiers", ""))
        if n.get("abstract"):
            head += "abstract "
        head += f"class {n.name}"
        ext = self.one(nid, "extends")
        if ext:
            head += f" extends {self.m.nodes[ext].name}"
        self.emit(0, head + " {")
        for mem in self.many(nid, "members"):
            self.member(mem, 1)
        self.emit(0, "}")

    def member(self, nid: str, d: int) -> None:
        n = self.m.nodes[nid]
        head = f"{self.mods(n.get('modifiers', ''))}{self.type_(self.one(nid, 'type'))} {n.name}"
        if n.kind == "Field":
            init = self.one(nid, "initialValue")
            self.emit(d, head + (f" = {self.expr(init)};" if init else ";"))
            return
        params = ", ".join(
            f"{self.type_(self.one(p, 'type'))} {self.m.nodes[p].name}"
            for p in self.many(nid, "parameters")
        )
        head += f"({params})"
        exc = self.many(nid, "exceptions")
        if exc:
            head += " throws " + ", ".join(self.m.nodes[e].name for e in exc)
        body = self.one(nid, "body")
        if body is None:
            self.emit(d, head + ";")
        else:
            self.emit(d, head + " {")
            self.statements(body, d + 1)
            self.emit(d, "}")

    def statements(self, owner: str, d: int) -> None:
        for s in self.many(owner, "statements"):
            self.statement(s, d)

    def statement(self, nid: str, d: int) -> None:
        n = self.m.nodes[nid]
        k = n.kind
        if k == "Block":
            self.emit(d, "{")
            self.statements(nid, d + 1)
            self.emit(d, "}")
        elif k == "ExpressionStatement":
            self.emit(d, self.expr(self.one(nid, "expression")) + ";")
        elif k == "Return":
            v = self.one(nid, "returnValue")
            self.emit(d, f"return {self.expr(v)};" if v else "return;")
        elif k == "Break":
            self.emit(d, "break;")
        elif k == "LocalVariableStatement":
            var = self.one(nid, "variable")
            text = f"{self.type_(self.one(var, 'type'))} {self.m.nodes[var].name}"
            init = self.one(var, "initialValue")
            self.emit(d, text + (f" = {self.expr(init)};" if init else ";"))
        elif k == "Condition":
            self.branch(f"if ({self.expr(self.one(nid, 'condition'))})", self.one(nid, "statement"), d)
            other = self.one(nid, "elseStatement")
            if other:
                self.branch("else", other, d)
        elif k == "Switch":
            self.emit(d, f"switch ({self.expr(self.one(nid, 'variable'))}) {{")
            for case in self.many(nid, "cases"):
                if self.m.nodes[case].kind == "NormalSwitchCase":
                    self.emit(d + 1, f"case {self.expr(self.one(case, 'condition'))}:")
                else:
                    self.emit(d + 1, "default:")
                self.statements(case, d + 2)
            self.emit(d, "}")
        elif k == "TryBlock":
            self.emit(d, "try {")
            self.statements(self.one(nid, "block"), d + 1)
            for cb in self.many(nid, "catches"):
                p = self.one(cb, "parameter")
                self.emit(d, f"}} catch ({self.type_(self.one(p, 'type'))} {self.m.nodes[p].name}) {{")
                self.statements(self.one(cb, "block"), d + 1)
            self.emit(d, "}")
        else:
            raise ValueError(f"cannot print statement kind {k}")

    def branch(self, head: str, stmt: str, d: int) -> None:
        if self.m.nodes[stmt].kind == "Block":
            self.emit(d, head + " {")
            self.statements(stmt, d + 1)
            self.emit(d, "}")
        else:
            self.emit(d, head)
            self.statement(stmt, d + 1)

    def expr(self, nid: str) -> str:
        n = self.m.nodes[nid]
        k = n.kind
        if k == "Assignment":
            return f"{self.expr(self.one(nid, 'child'))} = {self.expr(self.one(nid, 'value'))}"
        if k == "NewConstructorCall":
            args = ", ".join(self.expr(a) for a in self.many(nid, "arguments"))
            return f"new {self.m.nodes[self.one(nid, 'type')].name}({args})"
        if k == "StringLiteral":
            return f'"{n.get("value")}"'
        if k == "CharacterLiteral":
            return f"'{n.get('value')}'"
        if k == "BooleanLiteral":
            return "true" if n.get("value") else "false"
        if k == "NullLiteral":
            return "null"
        if k in ("IntegerLiteral", "DecimalLiteral"):
            return str(n.get("value"))
        parts = []
        cur = nid
        while cur is not None:
            c = self.m.nodes[cur]
            if c.kind == "MethodCall":
                args = ", ".join(self.expr(a) for a in self.many(cur, "arguments"))
                parts.append(f"{c.name}({args})")
            else:
                parts.append(c.name)
            cur = self.one(cur, "next")
        return ".".join(parts)


def print_unit(m: Model, unit: str) -> str:
    return _Printer(m).unit(unit)
