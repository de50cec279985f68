"""Recursive-descent parser mapping a Java subset onto the normalized tree.

The subset covers the constructs the feature extractors reason about:
classes/interfaces/enums, fields, methods, constructors, the full statement
repertoire, and ordinary expressions with Java precedence.  Deliberately out
of scope: lambdas, method references, anonymous classes, try-with-resources,
switch arrows and explicit generic method invocation.  Any unsupported
construct raises SourceSyntaxError rather than producing a wrong tree.

Only leaves carry labels (identifiers, literals, operators, modifiers,
keywords, type text); every inner node is pure structure, so tree diffs
localize renames and literal changes to single leaf updates.
"""

from __future__ import annotations

from ..errors import SourceSyntaxError
from .java_lexer import MODIFIERS, PRIMITIVE_TYPES, Token, tokenize
from .tree import NormalizedAst, TreeBuilder

ASSIGN_OPS = frozenset(
    {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="}
)

BINARY_LEVELS = (
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
)

UNARY_PREFIX = frozenset({"+", "-", "!", "~", "++", "--"})

# primary-expression starts that make a parenthesized type a cast
CAST_FOLLOW_REF = frozenset({"ident", "int", "float", "char", "string"})
CAST_FOLLOW_KEYWORDS = frozenset({"this", "super", "new", "true", "false", "null"})


class JavaParser:
    def __init__(self, source: str, source_path: str, kind_map: dict[str, str], grammar_id: str):
        self.source = source
        self.source_path = source_path
        self.kind_map = kind_map
        self.toks = tokenize(source, source_path)
        self.pos = 0
        self.builder = TreeBuilder(source_path, grammar_id)

    # ------------------------------------------------------------------ util

    def peek(self, offset: int = 0) -> Token:
        idx = min(self.pos + offset, len(self.toks) - 1)
        return self.toks[idx]

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().type in ("keyword", "op", "sep")

    def at_type(self, ttype: str) -> bool:
        return self.peek().type == ttype

    def advance(self) -> Token:
        tok = self.toks[self.pos]
        if tok.type != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.peek().text!r}")
        return self.advance()

    def expect_ident(self) -> Token:
        if not self.at_type("ident"):
            self.fail(f"expected identifier, found {self.peek().text!r}")
        return self.advance()

    def fail(self, message: str):
        tok = self.peek()
        raise SourceSyntaxError(message, (tok.start, tok.end), self.source_path)

    def node(self, concrete: str, label: str, children: list[int], start: int, end: int) -> int:
        kind = self.kind_map.get(concrete)
        if kind is None:
            raise KeyError(f"concrete kind {concrete!r} missing from grammar mapping")
        return self.builder.add(kind, label, children, (start, end))

    def span_of(self, node_id: int) -> tuple[int, int]:
        return self.builder.nodes[node_id].span

    # ------------------------------------------------------------- top level

    def parse(self) -> NormalizedAst:
        children: list[int] = []
        self.skip_annotations()
        if self.at("package"):
            start = self.advance().start
            name = self.parse_qualified_name()
            end = self.expect(";").end
            children.append(self.node("package_declaration", name, [], start, end))
        while True:
            self.skip_annotations()
            if not self.at("import"):
                break
            start = self.advance().start
            parts = ["static "] if self.at("static") and self.advance() else []
            parts.append(self.parse_qualified_name())
            if self.at("."):
                self.advance()
                self.expect("*")
                parts.append(".*")
            end = self.expect(";").end
            children.append(self.node("import_declaration", "".join(parts), [], start, end))
        while not self.at_type("eof"):
            children.append(self.parse_type_declaration())
        end = len(self.source)
        root = self.node("compilation_unit", "", children, 0, end if children else 0)
        return self.builder.build(root)

    def parse_qualified_name(self) -> str:
        parts = [self.expect_ident().text]
        while self.at(".") and self.peek(1).type == "ident":
            self.advance()
            parts.append(self.advance().text)
        return ".".join(parts)

    def skip_annotations(self) -> None:
        while self.at("@"):
            self.advance()
            self.parse_qualified_name()
            if self.at("("):
                depth = 0
                while True:
                    tok = self.advance()
                    if tok.type == "eof":
                        self.fail("unterminated annotation")
                    if tok.text == "(":
                        depth += 1
                    elif tok.text == ")":
                        depth -= 1
                        if depth == 0:
                            break

    def parse_modifiers(self) -> list[int]:
        nodes = []
        while True:
            self.skip_annotations()
            tok = self.peek()
            if tok.type == "keyword" and tok.text in MODIFIERS:
                self.advance()
                nodes.append(self.node("modifier", tok.text, [], tok.start, tok.end))
            else:
                return nodes

    # ------------------------------------------------------------- type decl

    def parse_type_declaration(self, modifiers: list[int] | None = None) -> int:
        mods = self.parse_modifiers() if modifiers is None else modifiers
        tok = self.peek()
        if tok.text not in ("class", "interface", "enum"):
            self.fail(f"expected type declaration, found {tok.text!r}")
        kw = self.advance()
        start = self.builder.nodes[mods[0]].span[0] if mods else kw.start
        children = list(mods)
        children.append(self.node("decl_keyword", kw.text, [], kw.start, kw.end))
        name = self.expect_ident()
        children.append(self.node("identifier", name.text, [], name.start, name.end))
        if self.at("<"):
            self.skip_balanced("<", ">")
        if self.at("extends"):
            estart = self.advance().start
            types = [self.parse_type_node()]
            while self.at(","):
                self.advance()
                types.append(self.parse_type_node())
            children.append(
                self.node("extends_clause", "", types, estart, self.span_of(types[-1])[1])
            )
        if self.at("implements"):
            istart = self.advance().start
            types = [self.parse_type_node()]
            while self.at(","):
                self.advance()
                types.append(self.parse_type_node())
            children.append(
                self.node("implements_clause", "", types, istart, self.span_of(types[-1])[1])
            )
        body = self.parse_class_body(is_enum=kw.text == "enum", class_name=name.text)
        children.append(body)
        concrete = f"{kw.text}_declaration"
        return self.node(concrete, "", children, start, self.span_of(body)[1])

    def parse_class_body(self, is_enum: bool, class_name: str) -> int:
        lbrace = self.expect("{")
        members: list[int] = []
        if is_enum:
            while self.at_type("ident"):
                tok = self.advance()
                ident = self.node("identifier", tok.text, [], tok.start, tok.end)
                end = tok.end
                if self.at("("):
                    args = self.parse_arguments()
                    end = self.span_of(args)[1]
                    members.append(self.node("enum_constant", "", [ident, args], tok.start, end))
                else:
                    members.append(self.node("enum_constant", "", [ident], tok.start, end))
                if self.at(","):
                    self.advance()
                else:
                    break
            if self.at(";"):
                self.advance()
        while not self.at("}"):
            if self.at_type("eof"):
                self.fail("unterminated class body")
            if self.at(";"):
                self.advance()
                continue
            members.append(self.parse_member(class_name))
        rbrace = self.advance()
        return self.node("class_body", "", members, lbrace.start, rbrace.end)

    def parse_member(self, class_name: str) -> int:
        mods = self.parse_modifiers()
        tok = self.peek()
        if tok.text in ("class", "interface", "enum"):
            return self.parse_type_declaration(mods)
        if tok.text == "{":
            block = self.parse_block()
            start = self.builder.nodes[mods[0]].span[0] if mods else self.span_of(block)[0]
            return self.node("initializer_block", "", mods + [block], start, self.span_of(block)[1])
        if tok.text == "<":
            self.skip_balanced("<", ">")
            tok = self.peek()
        if tok.type == "ident" and self.peek(1).text == "(":
            # constructor: bare identifier immediately followed by parameters
            name = self.advance()
            start = self.builder.nodes[mods[0]].span[0] if mods else name.start
            children = list(mods)
            children.append(self.node("identifier", name.text, [], name.start, name.end))
            children.append(self.parse_formal_params())
            throws = self.parse_throws_clause()
            if throws is not None:
                children.append(throws)
            body = self.parse_block()
            children.append(body)
            return self.node("constructor_declaration", "", children, start, self.span_of(body)[1])
        type_node = self.parse_type_node(allow_void=True)
        name = self.expect_ident()
        start = (
            self.builder.nodes[mods[0]].span[0] if mods else self.span_of(type_node)[0]
        )
        name_node = self.node("identifier", name.text, [], name.start, name.end)
        if self.at("("):
            children = list(mods) + [type_node, name_node, self.parse_formal_params()]
            throws = self.parse_throws_clause()
            if throws is not None:
                children.append(throws)
            if self.at(";"):
                end = self.advance().end
            else:
                body = self.parse_block()
                children.append(body)
                end = self.span_of(body)[1]
            return self.node("method_declaration", "", children, start, end)
        declarators = [self.parse_declarator(name_node, name.start)]
        while self.at(","):
            self.advance()
            ident = self.expect_ident()
            ident_node = self.node("identifier", ident.text, [], ident.start, ident.end)
            declarators.append(self.parse_declarator(ident_node, ident.start))
        end = self.expect(";").end
        return self.node("field_declaration", "", mods + [type_node] + declarators, start, end)

    def parse_declarator(self, ident_node: int, start: int) -> int:
        while self.at("[") :
            self.advance()
            self.expect("]")
        children = [ident_node]
        end = self.span_of(ident_node)[1]
        if self.at("="):
            self.advance()
            init = self.parse_array_init() if self.at("{") else self.parse_expression()
            children.append(init)
            end = self.span_of(init)[1]
        return self.node("declarator", "", children, start, end)

    def parse_formal_params(self) -> int:
        lparen = self.expect("(")
        params: list[int] = []
        while not self.at(")"):
            if params:
                self.expect(",")
            params.append(self.parse_formal_param())
        rparen = self.advance()
        return self.node("formal_params", "", params, lparen.start, rparen.end)

    def parse_formal_param(self) -> int:
        mods = self.parse_modifiers()
        type_node = self.parse_type_node()
        if self.at(".") and self.peek(1).text == "." and self.peek(2).text == ".":
            self.advance(), self.advance(), self.advance()
        name = self.expect_ident()
        end = name.end
        while self.at("["):
            self.advance()
            end = self.expect("]").end
        ident = self.node("identifier", name.text, [], name.start, name.end)
        start = self.builder.nodes[mods[0]].span[0] if mods else self.span_of(type_node)[0]
        return self.node("formal_param", "", mods + [type_node, ident], start, end)

    def parse_throws_clause(self) -> int | None:
        if not self.at("throws"):
            return None
        start = self.advance().start
        types = [self.parse_type_node()]
        while self.at(","):
            self.advance()
            types.append(self.parse_type_node())
        return self.node("throws_clause", "", types, start, self.span_of(types[-1])[1])

    # ------------------------------------------------------------------ types

    def parse_type_node(self, allow_void: bool = False) -> int:
        start = self.peek().start
        label, end = self.parse_type_text(allow_void=allow_void)
        return self.node("type", label, [], start, end)

    def parse_type_text(self, allow_void: bool = False) -> tuple[str, int]:
        tok = self.peek()
        if tok.type == "keyword" and (tok.text in PRIMITIVE_TYPES or (allow_void and tok.text == "void")):
            self.advance()
            label, end = tok.text, tok.end
        elif tok.type == "ident":
            label = self.parse_qualified_name()
            end = self.toks[self.pos - 1].end
            if self.at("<"):
                args_label, end = self.parse_type_args()
                label += args_label
        else:
            self.fail(f"expected type, found {tok.text!r}")
        while self.at("[") and self.peek(1).text == "]":
            self.advance()
            end = self.advance().end
            label += "[]"
        return label, end

    def parse_type_args(self) -> tuple[str, int]:
        self.expect("<")
        parts: list[str] = []
        if self.at(">") or self.peek().text in (">>", ">>>"):
            end = self._consume_gt()
            return "<>", end
        while True:
            if self.at("?"):
                wtok = self.advance()
                wildcard = "?"
                if self.at("extends") or self.at("super"):
                    kw = self.advance()
                    inner, _ = self.parse_type_text()
                    wildcard = f"? {kw.text} {inner}"
                parts.append(wildcard)
            else:
                inner, _ = self.parse_type_text()
                parts.append(inner)
            if self.at(","):
                self.advance()
                continue
            end = self._consume_gt()
            return "<" + ",".join(parts) + ">", end

    def _consume_gt(self) -> int:
        tok = self.peek()
        if tok.text == ">":
            return self.advance().end
        if tok.text in (">>", ">>>"):
            # closing of nested generics: split the shift token
            self.toks[self.pos] = Token("op", tok.text[1:], tok.start + 1, tok.end)
            return tok.start + 1
        self.fail(f"expected '>', found {tok.text!r}")
        raise AssertionError("unreachable")

    def skip_balanced(self, opener: str, closer: str) -> None:
        self.expect(opener)
        depth = 1
        while depth:
            tok = self.advance()
            if tok.type == "eof":
                self.fail(f"unterminated {opener}...{closer}")
            if tok.text == opener:
                depth += 1
            elif tok.text == closer:
                depth -= 1
            elif opener == "<" and tok.text == ">>":
                depth -= 2
            elif opener == "<" and tok.text == ">>>":
                depth -= 3

    # ------------------------------------------------------------ statements

    def parse_block(self) -> int:
        lbrace = self.expect("{")
        stmts: list[int] = []
        while not self.at("}"):
            if self.at_type("eof"):
                self.fail("unterminated block")
            stmt = self.parse_statement()
            if stmt is not None:
                stmts.append(stmt)
        rbrace = self.advance()
        return self.node("block", "", stmts, lbrace.start, rbrace.end)

    def parse_condition(self) -> int:
        lparen = self.expect("(")
        expr = self.parse_expression()
        rparen = self.expect(")")
        return self.node("condition", "", [expr], lparen.start, rparen.end)

    def parse_statement(self) -> int | None:
        tok = self.peek()
        if tok.text == ";":
            self.advance()
            return None
        if tok.text == "{":
            return self.parse_block()
        if tok.text == "if":
            return self.parse_if()
        if tok.text == "while":
            start = self.advance().start
            cond = self.parse_condition()
            body = self.parse_statement_required()
            return self.node("while_statement", "", [cond, body], start, self.span_of(body)[1])
        if tok.text == "do":
            start = self.advance().start
            body = self.parse_statement_required()
            self.expect("while")
            cond = self.parse_condition()
            end = self.expect(";").end
            return self.node("do_statement", "", [body, cond], start, end)
        if tok.text == "for":
            return self.parse_for()
        if tok.text == "try":
            return self.parse_try()
        if tok.text == "switch":
            return self.parse_switch()
        if tok.text == "return":
            start = self.advance().start
            if self.at(";"):
                end = self.advance().end
                return self.node("return_statement", "", [], start, end)
            expr = self.parse_expression()
            end = self.expect(";").end
            return self.node("return_statement", "", [expr], start, end)
        if tok.text == "throw":
            start = self.advance().start
            expr = self.parse_expression()
            end = self.expect(";").end
            return self.node("throw_statement", "", [expr], start, end)
        if tok.text in ("break", "continue"):
            start = self.advance().start
            label = ""
            end = start + len(tok.text)
            if self.at_type("ident"):
                ident = self.advance()
                label, end = ident.text, ident.end
            end = self.expect(";").end
            concrete = f"{tok.text}_statement"
            return self.node(concrete, label, [], start, end)
        if tok.text == "synchronized":
            start = self.advance().start
            self.expect("(")
            expr = self.parse_expression()
            self.expect(")")
            body = self.parse_block()
            return self.node(
                "synchronized_statement", "", [expr, body], start, self.span_of(body)[1]
            )
        if tok.text == "assert":
            start = self.advance().start
            children = [self.parse_expression()]
            if self.at(":"):
                self.advance()
                children.append(self.parse_expression())
            end = self.expect(";").end
            return self.node("assert_statement", "", children, start, end)
        if tok.type == "ident" and self.peek(1).text == ":" and self.peek(1).type == "op":
            name = self.advance()
            ident = self.node("identifier", name.text, [], name.start, name.end)
            self.advance()
            body = self.parse_statement_required()
            return self.node("labeled_statement", "", [ident, body], name.start, self.span_of(body)[1])
        if self.looks_like_local_declaration():
            return self.parse_local_declaration(require_semi=True)
        expr = self.parse_expression()
        end = self.expect(";").end
        start = self.span_of(expr)[0]
        return self.node(self._stmt_concrete_for(expr), "", [expr], start, end)

    def _stmt_concrete_for(self, expr: int) -> str:
        kind = self.builder.nodes[expr].kind
        if kind == "assign" or (
            kind == "unary"
            and any(
                self.builder.nodes[c].label in ("++", "--")
                for c in self.builder.nodes[expr].children
            )
        ):
            return "expression_statement_assign"
        if kind == "call":
            return "expression_statement_call"
        return "expression_statement_other"

    def parse_statement_required(self) -> int:
        tok = self.peek()
        stmt = self.parse_statement()
        if stmt is None:
            # bare ';' body: represent as an empty block over the semicolon
            return self.node("block", "", [], tok.start, tok.end)
        return stmt

    def parse_if(self) -> int:
        start = self.expect("if").start
        cond = self.parse_condition()
        then = self.parse_statement_required()
        children = [cond, then]
        end = self.span_of(then)[1]
        if self.at("else"):
            estart = self.advance().start
            alt = self.parse_statement_required()
            children.append(
                self.node("else_branch", "", [alt], estart, self.span_of(alt)[1])
            )
            end = self.span_of(alt)[1]
        return self.node("if_statement", "", children, start, end)

    def parse_for(self) -> int:
        start = self.expect("for").start
        self.expect("(")
        if self._enhanced_for_ahead():
            param = self.parse_formal_param()
            self.expect(":")
            iterable = self.parse_expression()
            self.expect(")")
            body = self.parse_statement_required()
            return self.node(
                "enhanced_for_statement", "", [param, iterable, body], start, self.span_of(body)[1]
            )
        children: list[int] = []
        if not self.at(";"):
            istart = self.peek().start
            if self.looks_like_local_declaration():
                init = [self.parse_local_declaration(require_semi=False)]
            else:
                init = [self.parse_expression()]
                while self.at(","):
                    self.advance()
                    init.append(self.parse_expression())
            children.append(
                self.node("for_init", "", init, istart, self.span_of(init[-1])[1])
            )
        self.expect(";")
        if not self.at(";"):
            cstart = self.peek().start
            expr = self.parse_expression()
            children.append(self.node("condition", "", [expr], cstart, self.span_of(expr)[1]))
        self.expect(";")
        if not self.at(")"):
            ustart = self.peek().start
            update = [self.parse_expression()]
            while self.at(","):
                self.advance()
                update.append(self.parse_expression())
            children.append(
                self.node("for_update", "", update, ustart, self.span_of(update[-1])[1])
            )
        self.expect(")")
        body = self.parse_statement_required()
        children.append(body)
        return self.node("for_statement", "", children, start, self.span_of(body)[1])

    def _enhanced_for_ahead(self) -> bool:
        depth = 0
        i = self.pos
        while i < len(self.toks):
            text = self.toks[i].text
            if text in ("(", "[", "<"):
                depth += 1
            elif text in (")", "]", ">"):
                depth -= 1
                if depth < 0:
                    return False
            elif text in (";", "?") and depth == 0:
                # '?' at depth 0 means the ':' ahead belongs to a ternary
                return False
            elif text == ":" and depth == 0:
                return True
            elif self.toks[i].type == "eof":
                return False
            i += 1
        return False

    def parse_try(self) -> int:
        start = self.expect("try").start
        if self.at("("):
            self.fail("try-with-resources is outside the supported subset")
        body = self.parse_block()
        children = [body]
        end = self.span_of(body)[1]
        while self.at("catch"):
            cstart = self.advance().start
            self.expect("(")
            mods = self.parse_modifiers()
            tstart = self.peek().start
            label, tend = self.parse_type_text()
            while self.at("|"):
                self.advance()
                extra, tend = self.parse_type_text()
                label += "|" + extra
            type_node = self.node("type", label, [], tstart, tend)
            name = self.expect_ident()
            ident = self.node("identifier", name.text, [], name.start, name.end)
            param = self.node(
                "formal_param", "", mods + [type_node, ident], tstart, name.end
            )
            self.expect(")")
            cblock = self.parse_block()
            end = self.span_of(cblock)[1]
            children.append(self.node("catch_clause", "", [param, cblock], cstart, end))
        if self.at("finally"):
            fstart = self.advance().start
            fblock = self.parse_block()
            end = self.span_of(fblock)[1]
            children.append(self.node("finally_clause", "", [fblock], fstart, end))
        if len(children) == 1:
            self.fail("try statement requires at least one catch or finally")
        return self.node("try_statement", "", children, start, end)

    def parse_switch(self) -> int:
        start = self.expect("switch").start
        cond = self.parse_condition()
        self.expect("{")
        cases: list[int] = []
        while not self.at("}"):
            if self.at_type("eof"):
                self.fail("unterminated switch")
            if self.at("case"):
                cstart = self.advance().start
                expr = self.parse_expression()
                colon = self.expect(":")
                stmts, end = self.parse_case_body(colon.end)
                cases.append(self.node("switch_case", "", [expr] + stmts, cstart, end))
            elif self.at("default"):
                cstart = self.advance().start
                colon = self.expect(":")
                stmts, end = self.parse_case_body(colon.end)
                cases.append(self.node("switch_case", "", stmts, cstart, end))
            else:
                self.fail("expected 'case' or 'default'")
        end = self.advance().end
        return self.node("switch_statement", "", [cond] + cases, start, end)

    def parse_case_body(self, fallback_end: int) -> tuple[list[int], int]:
        stmts: list[int] = []
        end = fallback_end
        while not (self.at("case") or self.at("default") or self.at("}")):
            if self.at_type("eof"):
                self.fail("unterminated switch case")
            stmt = self.parse_statement()
            if stmt is not None:
                stmts.append(stmt)
                end = self.span_of(stmt)[1]
        return stmts, end

    # ----------------------------------------------------- local declarations

    def looks_like_local_declaration(self) -> bool:
        tok = self.peek()
        if tok.type == "keyword":
            return tok.text in PRIMITIVE_TYPES or tok.text == "final"
        if tok.type != "ident":
            return False
        i = self.pos
        i = self._scan_qualified(i)
        if i is None:
            return False
        i = self._scan_generics(i)
        if i is None:
            return False
        while (
            self.toks[i].text == "["
            and i + 1 < len(self.toks)
            and self.toks[i + 1].text == "]"
        ):
            i += 2
        return self.toks[i].type == "ident"

    def _scan_qualified(self, i: int) -> int | None:
        if self.toks[i].type != "ident":
            return None
        i += 1
        while self.toks[i].text == "." and self.toks[i + 1].type == "ident":
            i += 2
        return i

    def _scan_generics(self, i: int) -> int | None:
        if self.toks[i].text != "<":
            return i
        depth = 0
        while i < len(self.toks):
            text = self.toks[i].text
            if self.toks[i].type == "eof" or text == ";":
                return None
            if text == "<":
                depth += 1
            elif text == ">":
                depth -= 1
            elif text == ">>":
                depth -= 2
            elif text == ">>>":
                depth -= 3
            elif depth == 0:
                return i
            i += 1
            if depth <= 0:
                return i
        return None

    def parse_local_declaration(self, require_semi: bool) -> int:
        mods = self.parse_modifiers()
        type_node = self.parse_type_node()
        start = self.builder.nodes[mods[0]].span[0] if mods else self.span_of(type_node)[0]
        declarators = []
        while True:
            name = self.expect_ident()
            ident = self.node("identifier", name.text, [], name.start, name.end)
            declarators.append(self.parse_declarator(ident, name.start))
            if self.at(","):
                self.advance()
                continue
            break
        end = self.span_of(declarators[-1])[1]
        if require_semi:
            end = self.expect(";").end
        return self.node(
            "local_var_declaration", "", mods + [type_node] + declarators, start, end
        )

    # ------------------------------------------------------------ expressions

    def parse_expression(self) -> int:
        return self.parse_assignment()

    def parse_assignment(self) -> int:
        lhs = self.parse_ternary()
        tok = self.peek()
        if tok.type == "op" and tok.text in ASSIGN_OPS:
            self.advance()
            op = self.node("operator", tok.text, [], tok.start, tok.end)
            rhs = self.parse_assignment()
            return self.node(
                "assign_expr", "", [lhs, op, rhs], self.span_of(lhs)[0], self.span_of(rhs)[1]
            )
        return lhs

    def parse_ternary(self) -> int:
        cond = self.parse_binary(0)
        if self.at("?"):
            self.advance()
            then = self.parse_expression()
            self.expect(":")
            alt = self.parse_ternary()
            return self.node(
                "ternary_expr", "", [cond, then, alt], self.span_of(cond)[0], self.span_of(alt)[1]
            )
        return cond

    def parse_binary(self, level: int) -> int:
        if level >= len(BINARY_LEVELS):
            return self.parse_unary()
        ops = BINARY_LEVELS[level]
        left = self.parse_binary(level + 1)
        while True:
            tok = self.peek()
            matches = tok.text in ops and (tok.type == "op" or tok.text == "instanceof")
            if not matches:
                return left
            self.advance()
            op = self.node("operator", tok.text, [], tok.start, tok.end)
            if tok.text == "instanceof":
                right = self.parse_type_node()
            else:
                right = self.parse_binary(level + 1)
            left = self.node(
                "binary_expr", "", [left, op, right], self.span_of(left)[0], self.span_of(right)[1]
            )

    def parse_unary(self) -> int:
        tok = self.peek()
        if tok.type == "op" and tok.text in UNARY_PREFIX:
            self.advance()
            op = self.node("operator", tok.text, [], tok.start, tok.end)
            operand = self.parse_unary()
            return self.node("unary_expr", "", [op, operand], tok.start, self.span_of(operand)[1])
        if tok.text == "(" and self._cast_ahead():
            lparen = self.advance()
            type_node = self.parse_type_node()
            self.expect(")")
            operand = self.parse_unary()
            return self.node(
                "cast_expr", "", [type_node, operand], lparen.start, self.span_of(operand)[1]
            )
        return self.parse_postfix()

    def _cast_ahead(self) -> bool:
        i = self.pos + 1
        primitive = self.toks[i].type == "keyword" and self.toks[i].text in PRIMITIVE_TYPES
        if primitive:
            i += 1
        else:
            i = self._scan_qualified(i)
            if i is None:
                return False
            i = self._scan_generics(i)
            if i is None:
                return False
        while self.toks[i].text == "[" and self.toks[i + 1].text == "]":
            i += 2
            primitive = True
        if self.toks[i].text != ")":
            return False
        nxt = self.toks[i + 1]
        if nxt.type in CAST_FOLLOW_REF or nxt.text in CAST_FOLLOW_KEYWORDS:
            return True
        if nxt.text in ("(", "!", "~"):
            return True
        if primitive and nxt.text in ("+", "-"):
            return True
        return False

    def parse_postfix(self) -> int:
        expr = self.parse_primary()
        while True:
            tok = self.peek()
            if tok.text == "." and self.peek(1).type in ("ident", "keyword"):
                name = self.peek(1)
                if name.type == "keyword" and name.text not in ("this", "super"):
                    break
                self.advance()
                self.advance()
                ident = self.node("identifier", name.text, [], name.start, name.end)
                if self.at("("):
                    args = self.parse_arguments()
                    expr = self.node(
                        "method_call",
                        "",
                        [expr, ident, args],
                        self.span_of(expr)[0],
                        self.span_of(args)[1],
                    )
                else:
                    expr = self.node(
                        "field_access", "", [expr, ident], self.span_of(expr)[0], name.end
                    )
                continue
            if tok.text == "[":
                self.advance()
                index = self.parse_expression()
                end = self.expect("]").end
                expr = self.node(
                    "array_access", "", [expr, index], self.span_of(expr)[0], end
                )
                continue
            if tok.type == "op" and tok.text in ("++", "--"):
                self.advance()
                op = self.node("operator", tok.text, [], tok.start, tok.end)
                expr = self.node("unary_expr", "", [expr, op], self.span_of(expr)[0], tok.end)
                continue
            return expr
        return expr

    def parse_primary(self) -> int:
        tok = self.peek()
        if tok.type in ("int", "float", "char", "string"):
            self.advance()
            return self.node("literal", tok.text, [], tok.start, tok.end)
        if tok.type == "keyword" and tok.text in ("true", "false", "null"):
            self.advance()
            return self.node("literal", tok.text, [], tok.start, tok.end)
        if tok.type == "keyword" and tok.text in ("this", "super"):
            self.advance()
            return self.node("identifier", tok.text, [], tok.start, tok.end)
        if tok.text == "new":
            return self.parse_creation()
        if tok.text == "(":
            self.advance()
            expr = self.parse_expression()
            self.expect(")")
            return expr
        if tok.type == "ident":
            self.advance()
            ident = self.node("identifier", tok.text, [], tok.start, tok.end)
            if self.at("("):
                args = self.parse_arguments()
                return self.node(
                    "method_call", "", [ident, args], tok.start, self.span_of(args)[1]
                )
            return ident
        self.fail(f"unexpected token {tok.text!r} in expression")
        raise AssertionError("unreachable")

    def parse_creation(self) -> int:
        start = self.expect("new").start
        type_node = self.parse_type_node()
        if self.at("("):
            args = self.parse_arguments()
            if self.at("{"):
                self.fail("anonymous classes are outside the supported subset")
            return self.node(
                "object_creation", "", [type_node, args], start, self.span_of(args)[1]
            )
        if self.at("[") or self.at("{"):
            children = [type_node]
            end = self.span_of(type_node)[1]
            while self.at("[") :
                self.advance()
                if self.at("]"):
                    end = self.advance().end
                    continue
                dim = self.parse_expression()
                children.append(dim)
                end = self.expect("]").end
            if self.at("{"):
                init = self.parse_array_init()
                children.append(init)
                end = self.span_of(init)[1]
            return self.node("array_creation", "", children, start, end)
        self.fail("expected '(' or '[' after new")
        raise AssertionError("unreachable")

    def parse_array_init(self) -> int:
        lbrace = self.expect("{")
        elements: list[int] = []
        while not self.at("}"):
            if elements:
                self.expect(",")
                if self.at("}"):
                    break
            elements.append(self.parse_array_init() if self.at("{") else self.parse_expression())
        rbrace = self.advance()
        return self.node("array_init", "", elements, lbrace.start, rbrace.end)

    def parse_arguments(self) -> int:
        lparen = self.expect("(")
        args: list[int] = []
        while not self.at(")"):
            if args:
                self.expect(",")
            args.append(self.parse_expression())
        rparen = self.advance()
        return self.node("arg_list", "", args, lparen.start, rparen.end)
