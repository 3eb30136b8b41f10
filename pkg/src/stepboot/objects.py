"""Object model for the interpreted language.

Scalars and sequences are represented directly by host Python values
(int/float/str/bool/None/list/tuple/range), which carry reference semantics
for arithmetic, comparison, repr and slicing. Functions, classes, instances,
modules and bound methods are wrapper objects defined here; the interpreter
only ever consults the supported method subset on them.
"""

from __future__ import annotations


class Unbound:
    def __repr__(self):
        return "<unbound>"


UNBOUND = Unbound()


class Cell:
    """Mutable box for a local variable captured by a closure."""

    __slots__ = ("v",)

    def __init__(self, v=UNBOUND):
        self.v = v


class MPObject:
    """Base for every non-host value in the interpreted universe."""

    __slots__ = ()


class FunctionTemplate:
    """Compile-time description of a function body, shared by all closures."""

    __slots__ = (
        "name",
        "param_names",
        "first_default",
        "nlocals",
        "cell_slots",
        "free_names",
        "capture_plan",
        "local_table",
        "body",
        "span",
    )

    def __init__(
        self,
        name,
        param_names,
        first_default,
        nlocals,
        cell_slots,
        free_names,
        capture_plan,
        local_table,
        body,
        span,
    ):
        self.name = name
        self.param_names = param_names
        self.first_default = first_default  # index of first param with a default
        self.nlocals = nlocals
        self.cell_slots = cell_slots  # slots that hold a Cell
        self.free_names = free_names  # names captured from enclosing scopes
        self.capture_plan = capture_plan  # per free name: ("frame"|"cells", index)
        self.local_table = local_table  # [(name, slot, is_cell)] in declaration order
        self.body = body  # code value for the body
        self.span = span


class MPFunction(MPObject):
    __slots__ = ("template", "cells", "globals", "defaults")

    def __init__(self, template, cells, globals_, defaults):
        self.template = template
        self.cells = cells
        self.globals = globals_
        self.defaults = defaults

    @property
    def name(self):
        return self.template.name

    def __repr__(self):
        return f"<function {self.template.name}>"


class MPBoundMethod(MPObject):
    __slots__ = ("receiver", "func")

    def __init__(self, receiver, func):
        self.receiver = receiver
        self.func = func

    def __repr__(self):
        return f"<bound method {self.func.name}>"


class NativeFunction(MPObject):
    """Builtin callable: fn(ctx, args, kwargs) -> trampoline outcome."""

    __slots__ = ("name", "fn")

    def __init__(self, name, fn):
        self.name = name
        self.fn = fn

    def __repr__(self):
        return f"<built-in function {self.name}>"


class MPClass(MPObject):
    __slots__ = ("name", "base", "attrs", "flavor", "host_types", "convert", "module")

    def __init__(self, name, base=None, attrs=None, flavor="user", host_types=(), convert=None):
        self.name = name
        self.base = base
        self.attrs = attrs if attrs is not None else {}
        self.flavor = flavor  # "user" | "exception" | "builtin"
        self.host_types = host_types  # host types this class stands for
        self.convert = convert  # native constructor for builtin facades
        self.module = None  # defining module, set for class statements

    def lookup(self, name):
        cls = self
        while cls is not None:
            if name in cls.attrs:
                return cls.attrs[name]
            cls = cls.base
        return None

    def issub(self, other):
        cls = self
        while cls is not None:
            if cls is other:
                return True
            cls = cls.base
        return False

    @property
    def qualname(self):
        return f"{self.module}.{self.name}" if self.module else self.name

    def __repr__(self):
        return f"<class '{self.qualname}'>"


class MPInstance(MPObject):
    __slots__ = ("cls", "attrs", "tb")

    def __init__(self, cls, attrs=None):
        self.cls = cls
        self.attrs = attrs if attrs is not None else {}
        self.tb = None  # traceback spans, set when raised

    def __repr__(self):
        if self.cls.flavor == "exception":
            args = self.attrs.get("args", ())
            return f"{self.cls.name}({', '.join(map(repr, args))})"
        return f"<{self.cls.qualname} object>"

    def __str__(self):
        if self.cls.flavor == "exception":
            return exc_message(self)
        return self.__repr__()


class MPModule(MPObject):
    __slots__ = ("name", "attrs")

    def __init__(self, name, attrs):
        self.name = name
        self.attrs = attrs

    def __repr__(self):
        return f"<module '{self.name}'>"


class MPRaise(Exception):
    """Host-level carrier transferring an interpreted exception to the
    nearest CPS boundary, which converts it into a handler transfer."""

    __slots__ = ("exc",)

    def __init__(self, exc):
        self.exc = exc


# -- exception classes ----------------------------------------------------

def _exc_class(name, base):
    return MPClass(name, base, flavor="exception")


EXC_EXCEPTION = _exc_class("Exception", None)
EXC_TYPE_ERROR = _exc_class("TypeError", EXC_EXCEPTION)
EXC_VALUE_ERROR = _exc_class("ValueError", EXC_EXCEPTION)
EXC_NAME_ERROR = _exc_class("NameError", EXC_EXCEPTION)
EXC_UNBOUND_LOCAL_ERROR = _exc_class("UnboundLocalError", EXC_NAME_ERROR)
EXC_ATTRIBUTE_ERROR = _exc_class("AttributeError", EXC_EXCEPTION)
EXC_INDEX_ERROR = _exc_class("IndexError", EXC_EXCEPTION)
EXC_ZERO_DIVISION_ERROR = _exc_class("ZeroDivisionError", EXC_EXCEPTION)
EXC_STOP_ITERATION = _exc_class("StopIteration", EXC_EXCEPTION)
EXC_ASSERTION_ERROR = _exc_class("AssertionError", EXC_EXCEPTION)
EXC_RUNTIME_ERROR = _exc_class("RuntimeError", EXC_EXCEPTION)
EXC_IMPORT_ERROR = _exc_class("ImportError", EXC_EXCEPTION)

EXCEPTION_CLASSES = {
    cls.name: cls
    for cls in (
        EXC_EXCEPTION,
        EXC_TYPE_ERROR,
        EXC_VALUE_ERROR,
        EXC_NAME_ERROR,
        EXC_UNBOUND_LOCAL_ERROR,
        EXC_ATTRIBUTE_ERROR,
        EXC_INDEX_ERROR,
        EXC_ZERO_DIVISION_ERROR,
        EXC_STOP_ITERATION,
        EXC_ASSERTION_ERROR,
        EXC_RUNTIME_ERROR,
        EXC_IMPORT_ERROR,
    )
}


def exc_new(cls, *args):
    return MPInstance(cls, {"args": args})


def exc_message(exc: MPInstance) -> str:
    args = exc.attrs.get("args", ())
    if not args:
        return ""
    if len(args) == 1:
        return to_display_str(args[0])
    return repr(args)


def type_error(msg):
    return exc_new(EXC_TYPE_ERROR, msg)


def value_error(msg):
    return exc_new(EXC_VALUE_ERROR, msg)


def name_error(msg):
    return exc_new(EXC_NAME_ERROR, msg)


def attribute_error(msg):
    return exc_new(EXC_ATTRIBUTE_ERROR, msg)


_HOST_EXC_NAMES = {
    "TypeError": EXC_TYPE_ERROR,
    "ValueError": EXC_VALUE_ERROR,
    "IndexError": EXC_INDEX_ERROR,
    "ZeroDivisionError": EXC_ZERO_DIVISION_ERROR,
    "StopIteration": EXC_STOP_ITERATION,
    "AttributeError": EXC_ATTRIBUTE_ERROR,
    "KeyError": EXC_INDEX_ERROR,
    "OverflowError": EXC_VALUE_ERROR,
    "RecursionError": EXC_RUNTIME_ERROR,
    "RuntimeError": EXC_RUNTIME_ERROR,
}


def convert_host_exc(e: BaseException) -> MPInstance:
    cls = _HOST_EXC_NAMES.get(type(e).__name__, EXC_RUNTIME_ERROR)
    return exc_new(cls, *e.args) if e.args else exc_new(cls)


# -- type naming and display ------------------------------------------------

def type_name(v) -> str:
    t = type(v)
    if t is bool:
        return "bool"
    if t is int:
        return "int"
    if t is float:
        return "float"
    if t is str:
        return "str"
    if v is None:
        return "NoneType"
    if t is list:
        return "list"
    if t is tuple:
        return "tuple"
    if t is range:
        return "range"
    if t is MPInstance:
        return v.cls.name
    if t is MPClass:
        return "type"
    if t is MPFunction:
        return "function"
    if t is MPBoundMethod:
        return "method"
    if t is NativeFunction:
        return "builtin_function_or_method"
    if t is MPModule:
        return "module"
    return t.__name__


def to_display_str(v) -> str:
    """str()-style display without consulting interpreted __str__."""
    if type(v) is str:
        return v
    return safe_repr(v, limit=0)


def safe_repr(v, limit=70, depth=0) -> str:
    """repr-style display that never runs interpreted code; bubbles and
    traces use it. A positive limit truncates with an ellipsis."""
    if depth > 4:
        text = "..."
    elif type(v) is list:
        text = "[" + ", ".join(safe_repr(x, 0, depth + 1) for x in v) + "]"
    elif type(v) is tuple:
        if len(v) == 1:
            text = "(" + safe_repr(v[0], 0, depth + 1) + ",)"
        else:
            text = "(" + ", ".join(safe_repr(x, 0, depth + 1) for x in v) + ")"
    else:
        text = repr(v)
    if limit and len(text) > limit:
        text = text[: limit - 1] + "…"
    return text
