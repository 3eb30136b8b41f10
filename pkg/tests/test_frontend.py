"""Tokenizer and parser tests, including differential checks against the
standard library tokenizer for block structure."""

import io
import tokenize as std_tokenize

import pytest

from stepboot.errors import SubsetSyntaxError
from stepboot.parser import parse_source
from stepboot.source import tokenize


def kinds(source):
    return [t.kind for t in tokenize(source)]


def texts(source):
    return [(t.kind, t.text) for t in tokenize(source)]


def test_smallest_assignment():
    assert texts("x=1") == [
        ("NAME", "x"),
        ("OP", "="),
        ("NUMBER", "1"),
        ("NEWLINE", ""),
        ("ENDMARKER", ""),
    ]


def test_empty_input():
    assert kinds("") == ["ENDMARKER"]


def test_indent_dedent_placement():
    toks = texts("if x:\n  y\n")
    names = [t for t in toks]
    i_y = names.index(("NAME", "y"))
    assert names[i_y - 1] == ("INDENT", "  ")
    assert names[-2] == ("DEDENT", "")
    assert names[-1] == ("ENDMARKER", "")


def std_block_shape(source):
    """INDENT/DEDENT/NEWLINE skeleton per the reference tokenizer."""
    out = []
    for tok in std_tokenize.generate_tokens(io.StringIO(source).readline):
        if tok.type == std_tokenize.INDENT:
            out.append("INDENT")
        elif tok.type == std_tokenize.DEDENT:
            out.append("DEDENT")
        elif tok.type == std_tokenize.NEWLINE:
            out.append("NEWLINE")
    return out


def our_block_shape(source):
    return [t.kind for t in tokenize(source) if t.kind in ("INDENT", "DEDENT", "NEWLINE")]


@pytest.mark.parametrize(
    "source",
    [
        "x = 1\n",
        "x = 1",
        "if a:\n    b\n",
        "if a:\n    b\nelse:\n    c\n",
        "while x:\n    if y:\n        z\n    w\n",
        "def f():\n    return 1\n\n\nf()\n",
        "a = (1 +\n     2)\n",
        "for i in r:\n    pass\n\nprint(i)\n",
        "x = 1\n\n# comment\ny = 2\n",
        "def g():\n    a = 1\n    def h():\n        return a\n    return h\n",
    ],
)
def test_block_shape_matches_reference(source):
    assert our_block_shape(source) == std_block_shape(source)


def test_span_positions():
    toks = tokenize("x = 12\ny = 3")
    x = toks[0]
    assert x.span.as_tuple() == (1, 0, 1, 1)
    twelve = toks[2]
    assert twelve.span.as_tuple() == (1, 4, 1, 6)
    y = toks[4]
    assert y.span.as_tuple() == (2, 0, 2, 1)


def test_string_escapes():
    assert texts(r"'a\nb'")[0] == ("STRING", "a\nb")
    assert texts(r'"q\x41\u0042"')[0] == ("STRING", "qAB")
    assert texts(r"'back\\slash'")[0] == ("STRING", "back\\slash")
    assert texts(r"'unknown\q'")[0] == ("STRING", "unknown\\q")


@pytest.mark.parametrize(
    "source,fragment",
    [
        ("x = \t1\nif x:\n\ty\n", "tabs"),
        ("s = 'abc", "unterminated"),
        ("x = 0x1f", "hex"),
        ("x = 1_000", "number"),
        ("x = f'{a}'", "f-strings"),
        ("x = b'ab'", "byte strings"),
        ("s = '''doc'''", "triple-quoted"),
        ("x = $1", "illegal character"),
        ("x = 007", "leading zeros"),
    ],
)
def test_lexer_rejections(source, fragment):
    with pytest.raises(SubsetSyntaxError) as exc:
        tokenize(source)
    assert fragment in str(exc.value)


def test_tokenize_is_pure():
    src = "if x:\n    y = 'a\\n'\n"
    a = texts(src)
    b = texts(src)
    assert a == b


# -- parser -------------------------------------------------------------


def shape(node):
    """Structural shape of a node, ignoring spans."""
    if node is None:
        return None
    if isinstance(node, (list, tuple)):
        return [shape(x) for x in node]
    if not hasattr(node, "kind"):
        return node
    fields = [shape(getattr(node, f)) for f in type(node).__slots__]
    return (node.kind, *fields)


def expr(source):
    module = parse_source(source)
    assert len(module.body) == 1
    return module.body[0].value


def test_precedence_shape():
    node = expr("1+2*3")
    assert shape(node) == (
        "BinOp",
        "+",
        ("Constant", 1),
        ("BinOp", "*", ("Constant", 2), ("Constant", 3)),
    )


def test_def_bare_return():
    module = parse_source("def f(): return")
    fn = module.body[0]
    assert fn.kind == "FunctionDef" and fn.name == "f" and fn.params == []
    assert shape(fn.body) == [("Return", None)]


def test_power_right_assoc_and_unary():
    assert shape(expr("-2**2")) == (
        "UnaryOp",
        "-",
        ("BinOp", "**", ("Constant", 2), ("Constant", 2)),
    )
    assert shape(expr("2**3**2")) == (
        "BinOp",
        "**",
        ("Constant", 2),
        ("BinOp", "**", ("Constant", 3), ("Constant", 2)),
    )


def test_chained_comparison_single_node():
    node = expr("a < b < c")
    assert node.kind == "Compare"
    assert node.ops == ["<", "<"]


def test_call_with_kwargs():
    node = expr("f(1, x, sep='-')")
    assert node.kind == "Call"
    assert [shape(a) for a in node.args] == [("Constant", 1), ("Name", "x")]
    assert node.kwargs[0][0] == "sep"


def test_slice_forms():
    node = expr("a[1:2:3]")
    assert node.kind == "Subscript"
    assert node.index.kind == "Slice"
    assert shape(expr("a[:]").index) == ("Slice", None, None, None)
    assert shape(expr("a[1]").index) == ("Constant", 1)


def test_tuple_displays():
    assert shape(expr("1, 2")) == ("TupleDisplay", [("Constant", 1), ("Constant", 2)])
    assert shape(expr("(1,)")) == ("TupleDisplay", [("Constant", 1)])
    assert shape(expr("()")) == ("TupleDisplay", [])
    assert shape(expr("(1)")) == ("Constant", 1)


@pytest.mark.parametrize(
    "source,fragment",
    [
        ("x = [i for i in y]", "list-comprehensions"),
        ("del x", "del is not supported"),
        ("with open(f) as g:\n    pass\n", "with is not supported"),
        ("def f():\n    yield 1\n", "yield is not supported"),
        ("async def f():\n    pass\n", "async"),
        ("@wrap\ndef f():\n    pass\n", "decorators"),
        ("x: int = 1", "annotations"),
        ("def f(x: int):\n    pass\n", "annotations"),
        ("x = {1: 2}", "dict/set"),
        ("x = a | b", "bitwise"),
        ("x = (y := 5)", "assignment expressions"),
        ("def f(*args):\n    pass\n", "star parameters"),
        ("f(*a)", "star arguments"),
        ("from math import *", "import *"),
        ("x = (i for i in y)", "generator expressions"),
        ("1 = x", "cannot assign to literal"),
        ("f() = 3", "cannot assign to function call"),
        ("class C(A, B):\n    pass\n", "multiple inheritance"),
    ],
)
def test_parser_rejections(source, fragment):
    with pytest.raises(SubsetSyntaxError) as exc:
        parse_source(source)
    assert fragment in str(exc.value)


def test_spans_contained_in_parents():
    src = "def f(a, b):\n    if a > b:\n        return [a, b, (a+b)*2]\n    return f(b, a)\n"
    module = parse_source(src)

    def walk(node):
        for child in node.children():
            assert node.span.contains(child.span), (node, child)
            walk(child)

    walk(module)


def test_span_roundtrip_shapes():
    src = "x = (1+2)*len('ab')\nwhile x > 0:\n    x = x - 1\n"
    module = parse_source(src)

    def walk(node):
        if node.kind in ("Module",):
            for child in node.children():
                walk(child)
            return
        text = node.span.text()
        reparsed = parse_source(text)
        got = reparsed.body[0]
        if got.kind == "ExprStmt" and node.kind not in ("ExprStmt",):
            got = got.value
        assert shape(got) == shape(node), (text, node.kind)
        for child in node.children():
            walk(child)

    walk(module)


def test_parse_is_pure():
    src = "a = [1, 2]\nb = a[0]\n"
    assert shape(parse_source(src)) == shape(parse_source(src))
