"""Recursive-descent parser from the Java subset into syntax-graph model nodes.

Grammar::

    Unit      := (ClassDecl | EnumDecl)*
    ClassDecl := Modifier* "class" Id ["extends" Name] "{" Member* "}"
    EnumDecl  := Modifier* "enum" Id "{" [Id ("," Id)* [","]] [";"] "}"
    Member    := Modifier* (Type | "void") Id "(" [Param ("," Param)*] ")"
                   ["throws" Name ("," Name)*] (Block | ";")
               | Modifier* Type Id ["=" Expr] ";"
    Stmt      := Block | If | Switch | Try | Return | Break | LocalVar | Expr ";"
    Expr      := Chain ["=" Expr] | Literal | "new" Name "(" Args ")"
    Chain     := Element ("." Element)*        Element := Id ["(" Args ")"]

Java outside the subset (generics, annotations, operators, loops, inner
classes, constructors...) raises :class:`UnsupportedConstruct`.  Unless the
parser is strict, the offending declaration or statement is skipped and a
warning is recorded instead.
"""

from __future__ import annotations

from typing import Optional

from ..diagnostics import Diagnostic, Location, warning
from ..model import Model
from .tokens import EOF, IDENTIFIER, KEYWORD, LITERAL, PUNCT, UNSUPPORTED_WORDS, Token

MODIFIERS = ("public", "private", "protected", "static", "abstract")
PRIMITIVES = frozenset("int long short byte char boolean float double".split())
# tokens that may legally follow a complete expression
_EXPR_END = frozenset(") ; , : ]".split())


class ParseError(SyntaxError):
    def __init__(self, message: str, loc: Location):
        super().__init__(f"{loc}: {message}")
        self.location = loc
        self.reason = message


class UnsupportedConstruct(ParseError):
    pass


class Parser:
    def __init__(
        self,
        tokens: list[Token],
        model: Model,
        file: str = "<input>",
        strict: bool = False,
        diagnostics: Optional[list[Diagnostic]] = None,
    ):
        self.tokens = tokens
        self.pos = 0
        self.m = model
        self.file = file
        self.strict = strict
        self.diagnostics = diagnostics if diagnostics is not None else []

    # ---- token helpers

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.pos + k, len(self.tokens) - 1)]

    def loc(self, tok: Optional[Token] = None) -> Location:
        t = tok or self.tok
        return Location(self.file, t.line, t.column)

    def at(self, text: str) -> bool:
        return self.tok.is_(text)

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, got {self.tok}")
        t = self.tok
        self.pos += 1
        return t

    def ident(self, what: str = "identifier") -> Token:
        t = self.tok
        if t.kind != IDENTIFIER:
            self.fail(f"expected {what}, got {t}")
        self.check_supported(t)
        self.pos += 1
        return t

    def fail(self, message: str, tok: Optional[Token] = None):
        raise ParseError(message, self.loc(tok))

    def unsupported(self, what: str, tok: Optional[Token] = None):
        raise UnsupportedConstruct(f"unsupported construct: {what}", self.loc(tok))

    def check_supported(self, t: Token) -> None:
        if t.kind == IDENTIFIER and t.text in UNSUPPORTED_WORDS:
            self.unsupported(f"'{t.text}'", t)

    # ---- node helpers

    def node(self, kind: str, tok: Token, **attrs) -> str:
        return self.m.add_node(kind, attrs, origin=self.loc(tok))

    def attach(self, parent: str, ref: str, child: str) -> str:
        self.m.set_container(child, parent, ref)
        return child

    # ---- recovery

    def guarded(self, parse, *args) -> Optional[str]:
        """Run ``parse``; on an unsupported construct, warn, roll back and skip it."""
        start = self.pos
        mark = len(self.m.nodes)
        counter = self.m._counter
        try:
            return parse(*args)
        except UnsupportedConstruct as exc:
            if self.strict:
                raise
            self._rollback(mark, counter)
            self.pos = start
            self._skip_construct()
            self.diagnostics.append(
                warning(f"{exc.reason}; skipped", self.loc(self.tokens[start]))
            )
            return None

    def _rollback(self, mark: int, counter: int) -> None:
        self.m.remove_nodes(list(self.m.nodes)[mark:])
        self.m._counter = counter

    def _skip_construct(self) -> None:
        depth = 0
        while self.tok.kind != EOF:
            t = self.tok
            if t.is_("{") or t.is_("("):
                depth += 1
            elif t.is_("}") or t.is_(")"):
                if depth == 0:
                    return
                depth -= 1
                if depth == 0 and t.is_("}"):
                    self.pos += 1
                    nxt = self.tok
                    if nxt.is_("else") or nxt.is_("catch") or nxt.text == "finally":
                        continue
                    if nxt.is_(";"):
                        self.pos += 1
                    return
            elif t.is_(";") and depth == 0:
                self.pos += 1
                return
            self.pos += 1

    # ---- declarations

    def parse_unit(self, name: str) -> str:
        unit = self.node("CompilationUnit", self.tok, name=name)
        while self.tok.kind != EOF:
            before = self.pos
            decl = self.guarded(self.parse_type_decl)
            if decl is not None:
                self.attach(unit, "classifiers", decl)
            elif self.pos == before:
                self.fail(f"unexpected {self.tok}")
        return unit

    def modifiers(self) -> list[str]:
        mods = []
        while True:
            t = self.tok
            if t.kind == KEYWORD and t.text in MODIFIERS:
                mods.append(t.text)
                self.pos += 1
            elif t.is_("@"):
                self.unsupported("annotation")
            elif t.kind == IDENTIFIER and t.text in ("final", "synchronized", "native", "transient", "volatile", "strictfp"):
                self.unsupported(f"modifier '{t.text}'")
            else:
                return mods

    def parse_type_decl(self) -> str:
        start = self.tok
        self.check_supported(start)
        mods = self.modifiers()
        if self.at("class"):
            return self.parse_class(mods, start)
        if self.at("enum"):
            return self.parse_enum(mods, start)
        self.check_supported(self.tok)
        self.fail(f"expected class or enum declaration, got {self.tok}")

    def parse_class(self, mods: list[str], start: Token) -> str:
        self.expect("class")
        name = self.ident("class name")
        if self.at("<"):
            self.unsupported("generic class")
        cls = self.node(
            "Class",
            start,
            name=name.text,
            abstract="abstract" in mods,
            modifiers=" ".join(m for m in mods if m != "abstract"),
        )
        if self.accept("extends"):
            self.attach(cls, "extends", self.parse_classifier_ref())
        self.check_supported(self.tok)
        self.expect("{")
        while not self.at("}"):
            if self.tok.kind == EOF:
                self.fail("expected '}' to close class body, got end of file")
            before = self.pos
            member = self.guarded(self.parse_member)
            if member is not None:
                self.attach(cls, "members", member)
            elif self.pos == before:
                self.fail(f"unexpected {self.tok} in class body")
        self.expect("}")
        return cls

    def parse_enum(self, mods: list[str], start: Token) -> str:
        self.expect("enum")
        name = self.ident("enum name")
        enum = self.node("Enumeration", start, name=name.text, modifiers=" ".join(mods))
        self.expect("{")
        while self.tok.kind == IDENTIFIER:
            t = self.ident("enum constant")
            if self.at("("):
                self.unsupported("enum constant arguments")
            self.attach(enum, "constants", self.node("EnumConstant", t, name=t.text))
            if not self.accept(","):
                break
        if self.accept(";") and not self.at("}"):
            self.unsupported("enum body declarations")
        self.expect("}")
        return enum

    def parse_member(self) -> str:
        start = self.tok
        mods = self.modifiers()
        t = self.tok
        if t.is_("class") or t.is_("enum") or t.text == "interface":
            self.unsupported("nested type declaration")
        if t.is_("<"):
            self.unsupported("generic method")
        if t.kind == IDENTIFIER and self.peek().is_("("):
            self.unsupported("constructor")
        if t.is_("{"):
            self.unsupported("initializer block")
        if self.accept("void"):
            type_node = self.m.add_node("PrimitiveType", {"name": "void"}, origin=self.loc(t))
        else:
            type_node = self.parse_type()
        name = self.ident("member name")
        if self.at("("):
            return self.parse_method(mods, start, type_node, name)
        if t.is_("void"):
            self.fail("field cannot have type void", t)
        fld = self.node("Field", start, name=name.text, modifiers=" ".join(mods))
        self.attach(fld, "type", type_node)
        if self.accept("="):
            self.attach(fld, "initialValue", self.parse_expr())
        if self.at(","):
            self.unsupported("multiple declarators")
        self.expect(";")
        return fld

    def parse_method(self, mods: list[str], start: Token, type_node: str, name: Token) -> str:
        meth = self.node("ClassMethod", start, name=name.text, modifiers=" ".join(mods))
        self.attach(meth, "type", type_node)
        self.expect("(")
        if not self.at(")"):
            while True:
                self.attach(meth, "parameters", self.parse_param())
                if not self.accept(","):
                    break
        self.expect(")")
        if self.accept("throws"):
            while True:
                self.attach(meth, "exceptions", self.parse_classifier_ref())
                if not self.accept(","):
                    break
        if not self.accept(";"):
            self.attach(meth, "body", self.parse_block())
        return meth

    def parse_param(self) -> str:
        start = self.tok
        if self.tok.is_("@"):
            self.unsupported("annotation")
        self.check_supported(start)
        type_node = self.parse_type()
        if self.at("..."):
            self.unsupported("varargs parameter")
        name = self.ident("parameter name")
        param = self.node("Parameter", start, name=name.text)
        self.attach(param, "type", type_node)
        return param

    # ---- types

    def qualified_name(self) -> tuple[Token, str]:
        first = self.ident("type name")
        parts = [first.text]
        while self.at(".") and self.peek().kind == IDENTIFIER:
            self.pos += 1
            parts.append(self.ident("type name").text)
        if self.at("<"):
            self.unsupported("generic type")
        return first, ".".join(parts)

    def parse_classifier_ref(self) -> str:
        first, name = self.qualified_name()
        return self.node("ClassifierReference", first, name=name)

    def parse_type(self) -> str:
        first = self.tok
        if first.kind == IDENTIFIER and first.text in PRIMITIVES:
            self.pos += 1
            kind, name = "PrimitiveType", first.text
        else:
            first, name = self.qualified_name()
            kind = "ClassifierReference"
        dims = 0
        while self.at("[") and self.peek().is_("]"):
            self.pos += 2
            dims += 1
        attrs = {"name": name}
        if dims:
            attrs["arrayDimension"] = dims
        return self.node(kind, first, **attrs)

    def looks_like_local_var(self) -> bool:
        """Type followed by an identifier, scanned without consuming tokens."""
        i = self.pos
        toks = self.tokens
        if toks[i].kind != IDENTIFIER:
            return False
        i += 1
        if toks[i - 1].text not in PRIMITIVES:
            while toks[i].is_(".") and toks[i + 1].kind == IDENTIFIER:
                i += 2
            if toks[i].is_("<"):
                return True  # generic local; parse_type reports it
        while toks[i].is_("[") and toks[i + 1].is_("]"):
            i += 2
        return toks[i].kind == IDENTIFIER

    # ---- statements

    def parse_block(self) -> str:
        start = self.expect("{")
        block = self.node("Block", start)
        self.parse_statements(block, lambda: self.at("}"))
        self.expect("}")
        return block

    def parse_statements(self, owner: str, done) -> None:
        while not done():
            if self.tok.kind == EOF:
                self.fail("unexpected end of file in statement list")
            before = self.pos
            stmt = self.guarded(self.parse_statement)
            if stmt is not None:
                self.attach(owner, "statements", stmt)
            elif self.pos == before:
                self.fail(f"unexpected {self.tok}")

    def parse_statement(self) -> str:
        t = self.tok
        self.check_supported(t)
        if t.is_("{"):
            return self.parse_block()
        if t.is_("if"):
            return self.parse_if()
        if t.is_("switch"):
            return self.parse_switch()
        if t.is_("try"):
            return self.parse_try()
        if t.is_("return"):
            self.pos += 1
            ret = self.node("Return", t)
            if not self.at(";"):
                self.attach(ret, "returnValue", self.parse_expr())
            self.expect(";")
            return ret
        if t.is_("break"):
            self.pos += 1
            if self.tok.kind == IDENTIFIER:
                self.unsupported("labeled break")
            self.expect(";")
            return self.node("Break", t)
        if t.is_(";"):
            self.unsupported("empty statement")
        if t.kind == KEYWORD and t.text in MODIFIERS or t.is_("class") or t.is_("enum"):
            self.unsupported(f"'{t.text}' in statement position")
        if t.kind == IDENTIFIER and self.peek().is_(":"):
            self.unsupported("labeled statement")
        if self.looks_like_local_var():
            return self.parse_local_var()
        stmt = self.node("ExpressionStatement", t)
        self.attach(stmt, "expression", self.parse_expr())
        self.expect(";")
        return stmt

    def parse_local_var(self) -> str:
        start = self.tok
        type_node = self.parse_type()
        name = self.ident("variable name")
        stmt = self.node("LocalVariableStatement", start)
        var = self.node("LocalVariable", name, name=name.text)
        self.attach(stmt, "variable", var)
        self.attach(var, "type", type_node)
        if self.accept("="):
            self.attach(var, "initialValue", self.parse_expr())
        if self.at(","):
            self.unsupported("multiple declarators")
        self.expect(";")
        return stmt

    def parse_if(self) -> str:
        start = self.expect("if")
        cond = self.node("Condition", start)
        self.expect("(")
        self.attach(cond, "condition", self.parse_expr())
        self.expect(")")
        self.attach(cond, "statement", self.parse_statement())
        if self.accept("else"):
            self.attach(cond, "elseStatement", self.parse_statement())
        return cond

    def parse_switch(self) -> str:
        start = self.expect("switch")
        sw = self.node("Switch", start)
        self.expect("(")
        self.attach(sw, "variable", self.parse_expr())
        self.expect(")")
        self.expect("{")
        while not self.at("}"):
            t = self.tok
            if t.is_("case"):
                self.pos += 1
                case = self.node("NormalSwitchCase", t)
                self.attach(case, "condition", self.parse_expr())
                if self.at(","):
                    self.unsupported("multiple case labels")
            elif t.is_("default"):
                self.pos += 1
                case = self.node("DefaultSwitchCase", t)
            else:
                self.fail(f"expected 'case', 'default' or '}}', got {t}")
            if self.at("->"):
                self.unsupported("arrow switch case")
            self.expect(":")
            self.attach(sw, "cases", case)
            self.parse_statements(
                case, lambda: self.at("case") or self.at("default") or self.at("}")
            )
        self.expect("}")
        return sw

    def parse_try(self) -> str:
        start = self.expect("try")
        if self.at("("):
            self.unsupported("try-with-resources")
        tb = self.node("TryBlock", start)
        self.attach(tb, "block", self.parse_block())
        if not self.at("catch"):
            if self.tok.text == "finally":
                self.unsupported("'finally'")
            self.fail(f"expected 'catch', got {self.tok}")
        while self.at("catch"):
            ct = self.tok
            self.pos += 1
            cb = self.node("CatchBlock", ct)
            self.expect("(")
            ptok = self.tok
            type_node = self.parse_type()
            if self.at("|"):
                self.unsupported("multi-catch")
            name = self.ident("exception parameter name")
            param = self.node("Parameter", ptok, name=name.text)
            self.attach(param, "type", type_node)
            self.attach(cb, "parameter", param)
            self.expect(")")
            self.attach(cb, "block", self.parse_block())
            self.attach(tb, "catches", cb)
        if self.tok.text == "finally":
            self.unsupported("'finally'")
        return tb

    # ---- expressions

    def parse_expr(self) -> str:
        t = self.tok
        if t.kind == LITERAL or (t.kind == IDENTIFIER and t.text in ("true", "false", "null")):
            expr = self.parse_literal()
        elif t.is_("new"):
            expr = self.parse_new()
        elif t.kind == IDENTIFIER:
            expr = self.parse_chain()
            if self.accept("="):
                assign = self.m.add_node("Assignment", {}, origin=self.loc(t))
                self.attach(assign, "child", expr)
                self.attach(assign, "value", self.parse_expr())
                expr = assign
        elif t.kind == PUNCT and t.text not in _EXPR_END and t.text not in "{}":
            self.unsupported(f"operator '{t.text}'")
        else:
            self.check_supported(t)
            self.fail(f"expected expression, got {t}")
        nxt = self.tok
        if nxt.kind == PUNCT and nxt.text not in _EXPR_END and nxt.text not in "{}":
            self.unsupported(f"operator '{nxt.text}'")
        if nxt.kind == IDENTIFIER and nxt.text == "instanceof":
            self.unsupported("'instanceof'")
        return expr

    def parse_literal(self) -> str:
        t = self.tok
        self.pos += 1
        text = t.text
        if text in ("true", "false"):
            return self.node("BooleanLiteral", t, value=text == "true")
        if text == "null":
            return self.node("NullLiteral", t)
        if text.startswith('"'):
            return self.node("StringLiteral", t, value=text[1:-1])
        if text.startswith("'"):
            return self.node("CharacterLiteral", t, value=text[1:-1])
        digits = text.replace("_", "")
        if digits.isdigit():
            return self.node("IntegerLiteral", t, value=int(digits))
        return self.node("DecimalLiteral", t, value=text)

    def parse_new(self) -> str:
        start = self.expect("new")
        call = self.node("NewConstructorCall", start)
        self.attach(call, "type", self.parse_classifier_ref())
        if self.at("["):
            self.unsupported("array creation")
        self.parse_args(call)
        if self.at("{"):
            self.unsupported("anonymous class")
        if self.at("."):
            self.unsupported("member access on a constructor call")
        return call

    def parse_args(self, call: str) -> None:
        self.expect("(")
        if not self.at(")"):
            while True:
                self.attach(call, "arguments", self.parse_expr())
                if not self.accept(","):
                    break
        self.expect(")")

    def parse_element(self) -> str:
        t = self.ident()
        if self.at("("):
            el = self.node("MethodCall", t, name=t.text)
            self.parse_args(el)
        else:
            el = self.node("IdentifierReference", t, name=t.text)
        if self.at("["):
            self.unsupported("array access")
        return el

    def parse_chain(self) -> str:
        head = cur = self.parse_element()
        while self.accept("."):
            if self.at("<"):
                self.unsupported("explicit type arguments")
            if self.tok.kind != IDENTIFIER:
                self.check_supported(self.tok)
                self.fail(f"expected member name after '.', got {self.tok}")
            nxt = self.parse_element()
            self.attach(cur, "next", nxt)
            cur = nxt
        return head


def parse_unit(
    tokens: list[Token],
    m: Model,
    file: str = "<input>",
    strict: bool = False,
    diagnostics: Optional[list[Diagnostic]] = None,
) -> str:
    """Parse one token stream into a CompilationUnit node of ``m``; returns its id."""
    return Parser(tokens, m, file, strict, diagnostics).parse_unit(file)
