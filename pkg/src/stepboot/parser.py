"""Recursive-descent parser for the supported Python subset.

Node kinds follow the standard Python AST taxonomy; every node carries the
exact source span of its text (extended over enclosing parentheses).
Unsupported constructs are rejected with a SubsetSyntaxError naming them.
"""

from __future__ import annotations

from .errors import SubsetSyntaxError
from .source import (
    DEDENT,
    ENDMARKER,
    INDENT,
    KEYWORD,
    NAME,
    NEWLINE,
    NUMBER,
    OP,
    STRING,
    SourceSpan,
    Token,
    tokenize,
)


class AstNode:
    kind = "?"
    __slots__ = ("span",)

    def children(self):
        """Child nodes, for generic traversals."""
        out = []
        for slot in self.__slots__:
            value = getattr(self, slot)
            if isinstance(value, AstNode):
                out.append(value)
            elif isinstance(value, (list, tuple)):
                for item in value:
                    if isinstance(item, AstNode):
                        out.append(item)
        return out

    def __repr__(self):
        return f"{self.kind}@{self.span}"


def _node(name, *fields):
    cls = type(name, (AstNode,), {"__slots__": fields, "kind": name})
    return cls


Module = _node("Module", "body")
FunctionDef = _node("FunctionDef", "name", "params", "body")
ClassDef = _node("ClassDef", "name", "base", "body")
If = _node("If", "test", "body", "orelse")
While = _node("While", "test", "body", "orelse")
For = _node("For", "target", "iter", "body", "orelse")
Try = _node("Try", "body", "handlers", "orelse", "finalbody")
Return = _node("Return", "value")
Raise = _node("Raise", "exc")
Assert = _node("Assert", "test", "msg")
Pass = _node("Pass")
Break = _node("Break")
Continue = _node("Continue")
Import = _node("Import", "module", "names")  # names: [(name, asname)]
Global = _node("Global", "names")
Nonlocal = _node("Nonlocal", "names")
Assign = _node("Assign", "targets", "value")
AugAssign = _node("AugAssign", "target", "op", "value")
ExprStmt = _node("ExprStmt", "value")
BinOp = _node("BinOp", "op", "left", "right")
UnaryOp = _node("UnaryOp", "op", "operand")
BoolOp = _node("BoolOp", "op", "values")
Compare = _node("Compare", "left", "ops", "comparators")
Call = _node("Call", "func", "args", "kwargs")  # kwargs: [(name, node)]
Attribute = _node("Attribute", "value", "attr")
Subscript = _node("Subscript", "value", "index")
Name = _node("Name", "id")
Constant = _node("Constant", "value")
ListDisplay = _node("ListDisplay", "elts")
TupleDisplay = _node("TupleDisplay", "elts")
Lambda = _node("Lambda", "params", "body")
IfExp = _node("IfExp", "test", "body", "orelse")
Slice = _node("Slice", "lower", "upper", "step")

ExceptHandler = _node("ExceptHandler", "type", "name", "body")
Param = _node("Param", "name", "default")

ATOM_KINDS = frozenset({"Name", "Constant"})

AUG_OPS = {"+=": "+", "-=": "-", "*=": "*", "/=": "/", "//=": "//", "%=": "%", "**=": "**"}

_REJECTED_KEYWORDS = {
    "del": "del is not supported",
    "with": "with is not supported",
    "yield": "yield is not supported",
    "async": "async/await is not supported",
    "await": "async/await is not supported",
}

_BITWISE = {"|", "&", "^", "<<", ">>", "|=", "&=", "^=", "<<=", ">>=", "@", "@="}


def make(cls, span, *args):
    node = cls.__new__(cls)
    node.span = span
    for slot, value in zip(cls.__slots__, args):
        setattr(node, slot, value)
    return node


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing -------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def at(self, kind, text=None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def at_op(self, *texts) -> bool:
        t = self.tok
        return t.kind == OP and t.text in texts

    def at_kw(self, *texts) -> bool:
        t = self.tok
        return t.kind == KEYWORD and t.text in texts

    def next(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != ENDMARKER:
            self.pos += 1
        return t

    def expect(self, kind, text=None) -> Token:
        if not self.at(kind, text):
            self.fail(f"expected {text or kind}")
        return self.next()

    def fail(self, message):
        t = self.tok
        if t.kind == OP and t.text == ":=":
            message = "assignment expressions (':=') are not supported"
        elif t.kind == OP and t.text in _BITWISE:
            message = f"bitwise operator {t.text!r} is not supported"
        elif t.kind == KEYWORD and t.text in _REJECTED_KEYWORDS:
            message = _REJECTED_KEYWORDS[t.text]
        elif t.kind == ENDMARKER:
            message = "unexpected end of input"
        elif message == "invalid syntax" and t.text:
            message = f"invalid syntax near {t.text!r}"
        raise SubsetSyntaxError(message, t.span)

    # -- statements -----------------------------------------------------

    def parse_module(self) -> Module:
        body = self.stmt_list()
        end = self.tok.span
        self.expect(ENDMARKER)
        file = end.file
        span = SourceSpan(file, 1, 0, end.end_line, end.end_col)
        if body:
            span = body[0].span.to(body[-1].span)
        return make(Module, span, body)

    def stmt_list(self) -> list:
        body = []
        while True:
            if self.at(NEWLINE):
                self.next()
                continue
            if self.at(ENDMARKER) or self.at(DEDENT):
                break
            body.extend(self.statement())
        return body

    def statement(self) -> list:
        if self.at(KEYWORD):
            kw = self.tok.text
            if kw == "if":
                return [self.if_stmt()]
            if kw == "while":
                return [self.while_stmt()]
            if kw == "for":
                return [self.for_stmt()]
            if kw == "try":
                return [self.try_stmt()]
            if kw == "def":
                return [self.def_stmt()]
            if kw == "class":
                return [self.class_stmt()]
            if kw in _REJECTED_KEYWORDS:
                self.fail("invalid syntax")
        if self.at_op("@"):
            raise SubsetSyntaxError("method decorators are not supported", self.tok.span)
        return self.simple_line()

    def simple_line(self) -> list:
        stmts = [self.small_stmt()]
        while self.at_op(";"):
            self.next()
            if self.at(NEWLINE) or self.at(ENDMARKER):
                break
            stmts.append(self.small_stmt())
        if not self.at(ENDMARKER):
            self.expect(NEWLINE)
        return stmts

    def small_stmt(self) -> AstNode:
        t = self.tok
        if t.kind == KEYWORD:
            kw = t.text
            if kw == "pass":
                return make(Pass, self.next().span)
            if kw == "break":
                return make(Break, self.next().span)
            if kw == "continue":
                return make(Continue, self.next().span)
            if kw == "return":
                return self.return_stmt()
            if kw == "raise":
                return self.raise_stmt()
            if kw == "import":
                return self.import_stmt()
            if kw == "from":
                return self.from_import_stmt()
            if kw == "global" or kw == "nonlocal":
                return self.scope_decl_stmt()
            if kw == "assert":
                return self.assert_stmt()
            if kw in _REJECTED_KEYWORDS:
                self.fail("invalid syntax")
        return self.expr_based_stmt()

    def return_stmt(self):
        start = self.next().span
        if self.at(NEWLINE) or self.at_op(";") or self.at(ENDMARKER):
            return make(Return, start, None)
        value = self.testlist()
        return make(Return, start.to(value.span), value)

    def raise_stmt(self):
        start = self.next().span
        if self.at(NEWLINE) or self.at_op(";") or self.at(ENDMARKER):
            return make(Raise, start, None)
        exc = self.test()
        if self.at_kw("from"):
            raise SubsetSyntaxError("raise ... from is not supported", self.tok.span)
        return make(Raise, start.to(exc.span), exc)

    def import_stmt(self):
        start = self.next().span
        names = []
        end = start
        while True:
            mod = self.expect(NAME)
            asname = None
            end = mod.span
            if self.at_kw("as"):
                self.next()
                alias = self.expect(NAME)
                asname = alias.text
                end = alias.span
            if self.at_op("."):
                raise SubsetSyntaxError("dotted module paths are not supported", self.tok.span)
            names.append((mod.text, asname))
            if not self.at_op(","):
                break
            self.next()
        return make(Import, start.to(end), None, names)

    def from_import_stmt(self):
        start = self.next().span
        if self.at_op("."):
            raise SubsetSyntaxError("relative imports are not supported", self.tok.span)
        mod = self.expect(NAME)
        self.expect(KEYWORD, "import")
        if self.at_op("*"):
            raise SubsetSyntaxError("from ... import * is not supported", self.tok.span)
        names = []
        end = mod.span
        while True:
            name = self.expect(NAME)
            asname = None
            end = name.span
            if self.at_kw("as"):
                self.next()
                alias = self.expect(NAME)
                asname = alias.text
                end = alias.span
            names.append((name.text, asname))
            if not self.at_op(","):
                break
            self.next()
        return make(Import, start.to(end), mod.text, names)

    def scope_decl_stmt(self):
        kw = self.next()
        names = [self.expect(NAME)]
        while self.at_op(","):
            self.next()
            names.append(self.expect(NAME))
        cls = Global if kw.text == "global" else Nonlocal
        return make(cls, kw.span.to(names[-1].span), [t.text for t in names])

    def assert_stmt(self):
        start = self.next().span
        test = self.test()
        msg = None
        end = test.span
        if self.at_op(","):
            self.next()
            msg = self.test()
            end = msg.span
        return make(Assert, start.to(end), test, msg)

    def expr_based_stmt(self):
        first = self.testlist()
        if self.at_op(*AUG_OPS):
            op_tok = self.next()
            self.check_target(first, augmented=True)
            value = self.testlist()
            return make(
                AugAssign, first.span.to(value.span), first, AUG_OPS[op_tok.text], value
            )
        if self.at_op("="):
            parts = [first]
            while self.at_op("="):
                self.next()
                parts.append(self.testlist())
            targets, value = parts[:-1], parts[-1]
            for target in targets:
                self.check_target(target)
            return make(Assign, first.span.to(value.span), targets, value)
        if self.at_op(":"):
            raise SubsetSyntaxError("type annotations are not supported", self.tok.span)
        return make(ExprStmt, first.span, first)

    def check_target(self, node, augmented=False):
        kind = node.kind
        if kind == "Name" or kind == "Attribute" or kind == "Subscript":
            return
        if not augmented and kind in ("TupleDisplay", "ListDisplay"):
            for elt in node.elts:
                self.check_target(elt)
            return
        article = {"Constant": "literal", "Call": "function call"}.get(kind, "expression")
        raise SubsetSyntaxError(f"cannot assign to {article}", node.span)

    # -- compound statements ---------------------------------------------

    def suite(self) -> list:
        self.expect(OP, ":")
        if self.at(NEWLINE):
            self.next()
            self.expect(INDENT)
            body = []
            while not self.at(DEDENT):
                if self.at(NEWLINE):
                    self.next()
                    continue
                body.extend(self.statement())
            self.expect(DEDENT)
            if not body:
                self.fail("expected an indented block")
            return body
        return self.simple_line()

    def else_suite(self):
        if self.at_kw("else"):
            self.next()
            return self.suite()
        return []

    def if_stmt(self):
        start = self.next().span
        test = self.test()
        body = self.suite()
        orelse = []
        if self.at_kw("elif"):
            orelse = [self.if_stmt()]
        elif self.at_kw("else"):
            self.next()
            orelse = self.suite()
        end = orelse[-1].span if orelse else body[-1].span
        return make(If, start.to(end), test, body, orelse)

    def while_stmt(self):
        start = self.next().span
        test = self.test()
        body = self.suite()
        orelse = self.else_suite()
        end = (orelse or body)[-1].span
        return make(While, start.to(end), test, body, orelse)

    def for_stmt(self):
        start = self.next().span
        target = self.target_list()
        self.expect(KEYWORD, "in")
        iterable = self.testlist()
        body = self.suite()
        orelse = self.else_suite()
        end = (orelse or body)[-1].span
        return make(For, start.to(end), target, iterable, body, orelse)

    def target_list(self):
        """For-loop targets: postfix expressions only, so `in` stays unconsumed."""
        first = self.postfix()
        if self.at_op(","):
            elts = [first]
            end = first.span
            while self.at_op(","):
                self.next()
                if self.at_kw("in"):
                    break
                node = self.postfix()
                elts.append(node)
                end = node.span
            first = make(TupleDisplay, first.span.to(end), elts)
        self.check_target(first)
        return first

    def try_stmt(self):
        start = self.next().span
        body = self.suite()
        handlers = []
        end = body[-1].span
        while self.at_kw("except"):
            h_start = self.next().span
            h_type = None
            h_name = None
            if not self.at_op(":"):
                h_type = self.test()
                if self.at_kw("as"):
                    self.next()
                    h_name = self.expect(NAME).text
            h_body = self.suite()
            end = h_body[-1].span
            handlers.append(make(ExceptHandler, h_start.to(end), h_type, h_name, h_body))
        orelse = []
        if handlers and self.at_kw("else"):
            self.next()
            orelse = self.suite()
            end = orelse[-1].span
        finalbody = []
        if self.at_kw("finally"):
            self.next()
            finalbody = self.suite()
            end = finalbody[-1].span
        if not handlers and not finalbody:
            self.fail("expected 'except' or 'finally' block")
        return make(Try, start.to(end), body, handlers, orelse, finalbody)

    def def_stmt(self):
        start = self.next().span
        name = self.expect(NAME)
        self.expect(OP, "(")
        params = self.param_list()
        self.expect(OP, ")")
        body = self.suite()
        return make(FunctionDef, start.to(body[-1].span), name.text, params, body)

    def param_list(self, closer=")"):
        params = []
        seen_default = False
        while not self.at_op(closer):
            if self.at_op("*", "**"):
                raise SubsetSyntaxError(
                    "star parameters (*args/**kwargs) are not supported", self.tok.span
                )
            name = self.expect(NAME)
            if closer != ":" and self.at_op(":"):
                raise SubsetSyntaxError("type annotations are not supported", self.tok.span)
            default = None
            end = name.span
            if self.at_op("="):
                self.next()
                default = self.test()
                end = default.span
                seen_default = True
            elif seen_default:
                raise SubsetSyntaxError(
                    "parameter without a default follows parameter with a default",
                    name.span,
                )
            if any(p.name == name.text for p in params):
                raise SubsetSyntaxError(f"duplicate parameter {name.text!r}", name.span)
            params.append(make(Param, name.span.to(end), name.text, default))
            if not self.at_op(","):
                break
            self.next()
        return params

    def class_stmt(self):
        start = self.next().span
        name = self.expect(NAME)
        base = None
        if self.at_op("("):
            self.next()
            if not self.at_op(")"):
                base = self.test()
                if self.at_op(","):
                    raise SubsetSyntaxError(
                        "multiple inheritance is not supported", self.tok.span
                    )
            self.expect(OP, ")")
        body = self.suite()
        return make(ClassDef, start.to(body[-1].span), name.text, base, body)

    # -- expressions ------------------------------------------------------

    def testlist(self):
        """test (',' test)* — a bare comma makes a tuple display."""
        first = self.test()
        if not self.at_op(","):
            return first
        elts = [first]
        end = first.span
        while self.at_op(","):
            self.next()
            if self.starts_expression():
                node = self.test()
                elts.append(node)
                end = node.span
            else:
                break
        return make(TupleDisplay, first.span.to(end), elts)

    def starts_expression(self):
        t = self.tok
        if t.kind in (NAME, NUMBER, STRING):
            return True
        if t.kind == OP and t.text in ("(", "[", "-", "+"):
            return True
        if t.kind == KEYWORD and t.text in ("not", "lambda", "True", "False", "None"):
            return True
        return False

    def test(self):
        if self.at_kw("lambda"):
            return self.lambda_expr()
        node = self.or_test()
        if self.at_kw("if"):
            self.next()
            test = self.or_test()
            self.expect(KEYWORD, "else")
            orelse = self.test()
            return make(IfExp, node.span.to(orelse.span), test, node, orelse)
        return node

    def lambda_expr(self):
        start = self.next().span
        params = self.param_list(closer=":")
        self.expect(OP, ":")
        body = self.test()
        return make(Lambda, start.to(body.span), params, body)

    def or_test(self):
        node = self.and_test()
        if not self.at_kw("or"):
            return node
        values = [node]
        while self.at_kw("or"):
            self.next()
            values.append(self.and_test())
        return make(BoolOp, node.span.to(values[-1].span), "or", values)

    def and_test(self):
        node = self.not_test()
        if not self.at_kw("and"):
            return node
        values = [node]
        while self.at_kw("and"):
            self.next()
            values.append(self.not_test())
        return make(BoolOp, node.span.to(values[-1].span), "and", values)

    def not_test(self):
        if self.at_kw("not"):
            start = self.next().span
            operand = self.not_test()
            return make(UnaryOp, start.to(operand.span), "not", operand)
        return self.comparison()

    _COMP_OPS = ("<", ">", "<=", ">=", "==", "!=")

    def comp_op(self):
        if self.at_op(*self._COMP_OPS):
            return self.next().text
        if self.at_kw("in"):
            self.next()
            return "in"
        if self.at_kw("not") and self.tokens[self.pos + 1].text == "in":
            self.next()
            self.next()
            return "not in"
        if self.at_kw("is"):
            self.next()
            if self.at_kw("not"):
                self.next()
                return "is not"
            return "is"
        return None

    def comparison(self):
        node = self.arith()
        op = self.comp_op()
        if op is None:
            if self.at_op(*(t for t in _BITWISE if t in ("|", "&", "^", "<<", ">>"))):
                self.fail("invalid syntax")
            return node
        ops, comparators = [], []
        while op is not None:
            ops.append(op)
            comparators.append(self.arith())
            op = self.comp_op()
        return make(Compare, node.span.to(comparators[-1].span), node, ops, comparators)

    def arith(self):
        node = self.term()
        while self.at_op("+", "-"):
            op = self.next().text
            right = self.term()
            node = make(BinOp, node.span.to(right.span), op, node, right)
        return node

    def term(self):
        node = self.factor()
        while self.at_op("*", "/", "//", "%"):
            op = self.next().text
            right = self.factor()
            node = make(BinOp, node.span.to(right.span), op, node, right)
        return node

    def factor(self):
        if self.at_op("+", "-"):
            op = self.next()
            operand = self.factor()
            return make(UnaryOp, op.span.to(operand.span), op.text, operand)
        if self.at_op("~"):
            self.fail("invalid syntax")
        return self.power()

    def power(self):
        node = self.postfix()
        if self.at_op("**"):
            self.next()
            right = self.factor()  # right-associative; binds over unary on the right
            return make(BinOp, node.span.to(right.span), "**", node, right)
        return node

    def postfix(self):
        node = self.atom()
        while True:
            if self.at_op("."):
                self.next()
                attr = self.expect(NAME)
                node = make(Attribute, node.span.to(attr.span), node, attr.text)
            elif self.at_op("("):
                node = self.call_trailer(node)
            elif self.at_op("["):
                node = self.subscript_trailer(node)
            else:
                return node

    def call_trailer(self, func):
        self.next()
        args, kwargs = [], []
        while not self.at_op(")"):
            if self.at_op("*", "**"):
                raise SubsetSyntaxError(
                    "star arguments (*args/**kwargs) are not supported", self.tok.span
                )
            if (
                self.at(NAME)
                and self.tokens[self.pos + 1].kind == OP
                and self.tokens[self.pos + 1].text == "="
            ):
                key = self.next().text
                self.next()
                kwargs.append((key, self.test()))
            else:
                arg = self.test()
                if self.at_kw("for"):
                    raise SubsetSyntaxError(
                        "generator expressions are not supported", self.tok.span
                    )
                if kwargs:
                    raise SubsetSyntaxError(
                        "positional argument follows keyword argument", arg.span
                    )
                args.append(arg)
            if not self.at_op(","):
                break
            self.next()
        close = self.expect(OP, ")")
        return make(Call, func.span.to(close.span), func, args, kwargs)

    def subscript_trailer(self, value):
        self.next()
        index = self.subscript_index()
        close = self.expect(OP, "]")
        return make(Subscript, value.span.to(close.span), value, index)

    def subscript_index(self):
        lower = None
        if not self.at_op(":"):
            lower = self.testlist()
            if not self.at_op(":"):
                return lower
        colon = self.expect(OP, ":")
        upper = None
        step = None
        span = (lower.span if lower else colon.span).to(colon.span)
        if not self.at_op(":", "]"):
            upper = self.test()
            span = span.to(upper.span)
        if self.at_op(":"):
            self.next()
            if not self.at_op("]"):
                step = self.test()
                span = span.to(step.span)
        return make(Slice, span, lower, upper, step)

    def atom(self):
        t = self.tok
        if t.kind == NUMBER:
            self.next()
            if "." in t.text or "e" in t.text or "E" in t.text:
                return make(Constant, t.span, float(t.text))
            return make(Constant, t.span, int(t.text))
        if t.kind == STRING:
            self.next()
            text = t.text
            end = t.span
            while self.at(STRING):  # implicit adjacent-literal concatenation
                nxt = self.next()
                text += nxt.text
                end = nxt.span
            return make(Constant, t.span.to(end), text)
        if t.kind == NAME:
            self.next()
            return make(Name, t.span, t.text)
        if t.kind == KEYWORD:
            if t.text in ("True", "False", "None"):
                self.next()
                value = {"True": True, "False": False, "None": None}[t.text]
                return make(Constant, t.span, value)
            if t.text == "lambda":
                return self.lambda_expr()
            self.fail("invalid syntax")
        if t.kind == OP:
            if t.text == "(":
                return self.paren_atom()
            if t.text == "[":
                return self.list_atom()
            if t.text == "{":
                raise SubsetSyntaxError("dict/set displays are not supported", t.span)
        self.fail("invalid syntax")

    def paren_atom(self):
        open_tok = self.next()
        if self.at_op(")"):
            close = self.next()
            return make(TupleDisplay, open_tok.span.to(close.span), [])
        node = self.testlist()
        if self.at_kw("for"):
            raise SubsetSyntaxError("generator expressions are not supported", self.tok.span)
        close = self.expect(OP, ")")
        node.span = open_tok.span.to(close.span)
        return node

    def list_atom(self):
        open_tok = self.next()
        elts = []
        while not self.at_op("]"):
            elts.append(self.test())
            if self.at_kw("for"):
                raise SubsetSyntaxError(
                    "list-comprehensions are not supported", self.tok.span
                )
            if not self.at_op(","):
                break
            self.next()
        close = self.expect(OP, "]")
        return make(ListDisplay, open_tok.span.to(close.span), elts)


def parse(tokens: list[Token]) -> Module:
    """Parse a token stream from tokenize() into a Module node."""
    return _Parser(tokens).parse_module()


def parse_source(source: str, file_id: str = "<string>") -> Module:
    return parse(tokenize(source, file_id))
