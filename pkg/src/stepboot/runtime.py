"""Semantic operations and builtins.

Every operation takes a StepContext and returns a trampoline outcome:
either a bounce into the context's continuation with the result, or a
transfer to the current exception handler. Operations on instances may
dispatch to interpreted magic methods, which chains through call_value
rather than the native stack.
"""

from __future__ import annotations

import math as host_math
import operator
import time as host_time

from .objects import (
    EXC_RUNTIME_ERROR,
    EXC_STOP_ITERATION,
    EXCEPTION_CLASSES,
    MPBoundMethod,
    MPClass,
    MPFunction,
    MPInstance,
    MPModule,
    MPObject,
    MPRaise,
    NativeFunction,
    UNBOUND,
    Cell,
    attribute_error,
    convert_host_exc,
    exc_message,
    exc_new,
    type_error,
    type_name,
    value_error,
)
from .stepper import Failed, NeedInput, RTE, StepContext

__all__ = [
    "apply_binop",
    "apply_compare",
    "apply_unary",
    "call_value",
    "raise_exception",
    "sem_getattribute",
    "sem_setattribute",
    "sem_getitem",
    "sem_setitem",
    "sem_truth",
    "sem_iter",
    "sem_next",
    "sem_repr",
    "sem_str",
    "make_builtins",
    "make_module_rte",
    "resolve_module",
    "MODULE_NAMES",
]


# -- raising ----------------------------------------------------------------

def build_traceback(rte, span=None):
    entries = []
    tb = rte.tb
    while tb is not None:
        parent, where, call_span = tb
        entries.append((call_span.file_id if call_span else "?",
                        call_span.start_line if call_span else 0, where))
        tb = parent
    entries.reverse()
    if span is not None:
        entries.append((span.file_id, span.start_line, None))
    return entries


def raise_exception(exc, ctx):
    """Transfer to the nearest handler; exc may be an exception class."""
    rte = ctx.rte
    if type(exc) is MPClass:
        if exc.flavor != "exception":
            return raise_exception(
                type_error("exceptions must derive from BaseException"), ctx
            )
        exc = exc_new(exc)
    elif not (type(exc) is MPInstance and exc.cls.flavor == "exception"):
        return raise_exception(
            type_error("exceptions must derive from BaseException"), ctx
        )
    if exc.tb is None:
        exc.tb = build_traceback(rte, ctx.span)
    return (rte.handler, rte, exc)


def make_base_handler():
    def base_handler(rte, exc):
        return Failed(exc, exc.tb or [])

    return base_handler


def make_module_rte(engine, globals_, base_handler=None, module_name="__main__"):
    rte = RTE(engine, globals_, module_name)
    rte.handler = base_handler or make_base_handler()
    return rte


# -- operators ---------------------------------------------------------------

_BIN = {
    "+": operator.add,
    "-": operator.sub,
    "*": operator.mul,
    "/": operator.truediv,
    "//": operator.floordiv,
    "%": operator.mod,
    "**": operator.pow,
}

_AUG = {
    "+": operator.iadd,
    "-": operator.isub,
    "*": operator.imul,
    "/": operator.itruediv,
    "//": operator.ifloordiv,
    "%": operator.imod,
    "**": operator.ipow,
}

_MAGIC_BIN = {"+": "__add__"}


def apply_binop(op, a, b, ctx, inplace=False):
    if type(a) is MPInstance or type(b) is MPInstance:
        return _instance_binop(op, a, b, ctx)
    if isinstance(a, MPObject) or isinstance(b, MPObject):
        return raise_exception(
            type_error(
                f"unsupported operand type(s) for {op}: "
                f"'{type_name(a)}' and '{type_name(b)}'"
            ),
            ctx,
        )
    try:
        v = (_AUG if inplace else _BIN)[op](a, b)
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)
    return (ctx.cont, ctx.rte, v)


def _instance_binop(op, a, b, ctx):
    magic = _MAGIC_BIN.get(op)
    if magic is not None and type(a) is MPInstance:
        m = a.cls.lookup(magic)
        if m is not None:
            return call_value(m, [a, b], ctx)
    return raise_exception(
        type_error(
            f"unsupported operand type(s) for {op}: "
            f"'{type_name(a)}' and '{type_name(b)}'"
        ),
        ctx,
    )


_CMP = {
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}


def _unsupported_cmp(op, a, b):
    return type_error(
        f"'{op}' not supported between instances of "
        f"'{type_name(a)}' and '{type_name(b)}'"
    )


def apply_compare(op, a, b, ctx):
    if op == "is":
        return (ctx.cont, ctx.rte, a is b)
    if op == "is not":
        return (ctx.cont, ctx.rte, a is not b)
    if op == "in" or op == "not in":
        return _contains(op, a, b, ctx)
    a_inst = type(a) is MPInstance
    b_inst = type(b) is MPInstance
    if a_inst or b_inst:
        return _instance_compare(op, a, b, ctx, a_inst, b_inst)
    if op in ("==", "!="):
        return (ctx.cont, ctx.rte, _CMP[op](a, b))
    if isinstance(a, MPObject) or isinstance(b, MPObject):
        return raise_exception(_unsupported_cmp(op, a, b), ctx)
    try:
        v = _CMP[op](a, b)
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)
    return (ctx.cont, ctx.rte, v)


def _instance_compare(op, a, b, ctx, a_inst, b_inst):
    if op == "==" or op == "!=":
        m = a.cls.lookup("__eq__") if a_inst else None
        args = [a, b]
        if m is None and b_inst:
            m = b.cls.lookup("__eq__")
            args = [b, a]
        if m is None:
            v = a is b
            return (ctx.cont, ctx.rte, v if op == "==" else not v)
        if op == "==":
            return call_value(m, args, ctx)

        def negate(rte, v):
            return sem_truth(v, StepContext(rte, _flip(ctx.cont), ctx.span))

        return call_value(m, args, StepContext(ctx.rte, negate, ctx.span))
    if op == "<" and a_inst:
        m = a.cls.lookup("__lt__")
        if m is not None:
            return call_value(m, [a, b], ctx)
    if op == ">" and b_inst:
        m = b.cls.lookup("__lt__")
        if m is not None:
            return call_value(m, [b, a], ctx)
    return raise_exception(_unsupported_cmp(op, a, b), ctx)


def _flip(cont):
    def k(rte, b):
        return (cont, rte, not b)

    return k


def _contains(op, a, b, ctx):
    if isinstance(b, MPObject):
        return raise_exception(
            type_error(f"argument of type '{type_name(b)}' is not iterable"), ctx
        )
    try:
        v = a in b
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)
    return (ctx.cont, ctx.rte, v if op == "in" else not v)


def apply_unary(op, v, ctx):
    if op == "not":
        return sem_truth(v, StepContext(ctx.rte, _flip(ctx.cont), ctx.span))
    if isinstance(v, MPObject):
        return raise_exception(
            type_error(f"bad operand type for unary {op}: '{type_name(v)}'"), ctx
        )
    try:
        r = operator.neg(v) if op == "-" else operator.pos(v)
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)
    return (ctx.cont, ctx.rte, r)


# -- truthiness ---------------------------------------------------------------

def truth_fast(v):
    """bool of v, or None when interpreted __len__ must be consulted."""
    t = type(v)
    if t is bool:
        return v
    if t is MPInstance:
        if v.cls.lookup("__len__") is not None:
            return None
        return True
    if isinstance(v, MPObject):
        return True
    return bool(v)


def sem_truth(v, ctx):
    b = truth_fast(v)
    if b is not None:
        return (ctx.cont, ctx.rte, b)
    m = v.cls.lookup("__len__")

    def k(rte, n):
        if type(n) is not int:
            return raise_exception(
                type_error(f"'{type_name(n)}' object cannot be interpreted as an integer"),
                StepContext(rte, ctx.cont, ctx.span),
            )
        return (ctx.cont, rte, n != 0)

    return call_value(m, [v], StepContext(ctx.rte, k, ctx.span))


# -- attributes ----------------------------------------------------------------

_STR_METHODS = ("upper", "lower", "split", "join", "find", "replace", "strip")


def _native_method(receiver, name, fn):
    def method(ctx, args, kwargs):
        if kwargs:
            return raise_exception(
                type_error(f"{name}() takes no keyword arguments"), ctx
            )
        try:
            v = fn(receiver, *args)
        except MPRaise as m:
            return raise_exception(m.exc, ctx)
        except Exception as e:
            return raise_exception(convert_host_exc(e), ctx)
        return (ctx.cont, ctx.rte, v)

    return NativeFunction(name, method)


def _list_append(lst, *args):
    if len(args) != 1:
        raise MPRaise(
            type_error(f"append() takes exactly one argument ({len(args)} given)")
        )
    lst.append(args[0])
    return None


def _str_method(name):
    def fn(s, *args):
        for a in args:
            if isinstance(a, MPObject):
                raise MPRaise(
                    type_error(f"{name}() argument must not be a '{type_name(a)}'")
                )
        return getattr(s, name)(*args)

    return fn


def sem_getattribute(ctx, obj, name):
    t = type(obj)
    if t is MPInstance:
        if name in obj.attrs:
            return (ctx.cont, ctx.rte, obj.attrs[name])
        found = obj.cls.lookup(name)
        if found is not None:
            if type(found) is MPFunction:
                found = MPBoundMethod(obj, found)
            return (ctx.cont, ctx.rte, found)
        return raise_exception(
            attribute_error(f"'{obj.cls.name}' object has no attribute '{name}'"), ctx
        )
    if t is MPClass:
        found = obj.lookup(name)
        if found is not None:
            return (ctx.cont, ctx.rte, found)
        return raise_exception(
            attribute_error(f"type object '{obj.name}' has no attribute '{name}'"), ctx
        )
    if t is MPModule:
        if name in obj.attrs:
            return (ctx.cont, ctx.rte, obj.attrs[name])
        return raise_exception(
            attribute_error(f"module '{obj.name}' has no attribute '{name}'"), ctx
        )
    if t is list and name == "append":
        return (ctx.cont, ctx.rte, _native_method(obj, "append", _list_append))
    if t is str and name in _STR_METHODS:
        return (ctx.cont, ctx.rte, _native_method(obj, name, _str_method(name)))
    return raise_exception(
        attribute_error(f"'{type_name(obj)}' object has no attribute '{name}'"), ctx
    )


def sem_setattribute(ctx, obj, name, value):
    t = type(obj)
    if t is MPInstance:
        obj.attrs[name] = value
        return (ctx.cont, ctx.rte, None)
    if t is MPClass:
        if obj.flavor == "user":
            obj.attrs[name] = value
            return (ctx.cont, ctx.rte, None)
        return raise_exception(
            type_error(
                f"cannot set '{name}' attribute of immutable type '{obj.name}'"
            ),
            ctx,
        )
    return raise_exception(
        attribute_error(f"'{type_name(obj)}' object has no attribute '{name}'"), ctx
    )


# -- subscripts ------------------------------------------------------------------

def sem_getitem(ctx, obj, index):
    if type(obj) is MPInstance:
        m = obj.cls.lookup("__getitem__")
        if m is None:
            return raise_exception(
                type_error(f"'{obj.cls.name}' object is not subscriptable"), ctx
            )
        return call_value(m, [obj, index], ctx)
    if isinstance(obj, MPObject):
        return raise_exception(
            type_error(f"'{type_name(obj)}' object is not subscriptable"), ctx
        )
    try:
        v = obj[index]
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)
    return (ctx.cont, ctx.rte, v)


def sem_setitem(ctx, obj, index, value):
    if type(obj) is MPInstance:
        m = obj.cls.lookup("__setitem__")
        if m is None:
            return raise_exception(
                type_error(
                    f"'{obj.cls.name}' object does not support item assignment"
                ),
                ctx,
            )
        return call_value(m, [obj, index, value], ctx)
    if isinstance(obj, MPObject):
        return raise_exception(
            type_error(f"'{type_name(obj)}' object does not support item assignment"),
            ctx,
        )
    try:
        obj[index] = value
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)
    return (ctx.cont, ctx.rte, None)


# -- calls ------------------------------------------------------------------------

def _name_list(names):
    quoted = [f"'{n}'" for n in names]
    if len(quoted) == 1:
        return quoted[0]
    if len(quoted) == 2:
        return f"{quoted[0]} and {quoted[1]}"
    return ", ".join(quoted[:-1]) + f", and {quoted[-1]}"


def call_function(fn, args, kwargs, ctx):
    t = fn.template
    rte = ctx.rte
    engine = rte.engine
    depth = rte.depth + 1
    if depth > engine.depth_limit:
        return raise_exception(
            exc_new(EXC_RUNTIME_ERROR, "maximum recursion depth exceeded"), ctx
        )
    params = t.param_names
    nparams = len(params)
    name = t.name
    if len(args) > nparams:
        if t.first_default < nparams:
            took = f"from {t.first_default} to {nparams}"
        else:
            took = str(nparams)
        return raise_exception(
            type_error(
                f"{name}() takes {took} positional "
                f"argument{'s' if nparams != 1 else ''} but {len(args)} "
                f"{'was' if len(args) == 1 else 'were'} given"
            ),
            ctx,
        )
    frame = [UNBOUND] * t.nlocals
    for i, v in enumerate(args):
        frame[i] = v
    if kwargs:
        npos = len(args)
        for k, v in kwargs:
            try:
                idx = params.index(k)
            except ValueError:
                return raise_exception(
                    type_error(f"{name}() got an unexpected keyword argument '{k}'"),
                    ctx,
                )
            if idx < npos or frame[idx] is not UNBOUND:
                return raise_exception(
                    type_error(f"{name}() got multiple values for argument '{k}'"),
                    ctx,
                )
            frame[idx] = v
    missing = []
    for i in range(nparams):
        if frame[i] is UNBOUND:
            if i >= t.first_default:
                frame[i] = fn.defaults[i - t.first_default]
            else:
                missing.append(params[i])
    if missing:
        return raise_exception(
            type_error(
                f"{name}() missing {len(missing)} required positional "
                f"argument{'s' if len(missing) > 1 else ''}: {_name_list(missing)}"
            ),
            ctx,
        )
    for i in t.cell_slots:
        frame[i] = Cell(frame[i])
    new = RTE(engine, fn.globals)
    new.frame = frame
    new.cells = fn.cells
    new.local_table = t.local_table
    new.free_names = t.free_names
    new.handler = rte.handler
    new.depth = depth
    new.tb = (rte.tb, name, ctx.span)
    caller_rte = ctx.rte
    cont = ctx.cont

    def return_k(_rte, value):
        return (cont, caller_rte, value)

    new.return_k = return_k

    def fallthrough(_rte, _v):
        return (cont, caller_rte, None)

    return (t.body, new, fallthrough)


def call_value(callee, args, ctx, kwargs=None):
    t = type(callee)
    if t is MPFunction:
        return call_function(callee, args, kwargs, ctx)
    if t is MPBoundMethod:
        return call_function(callee.func, [callee.receiver] + list(args), kwargs, ctx)
    if t is NativeFunction:
        return callee.fn(ctx, args, kwargs)
    if t is MPClass:
        return _instantiate(callee, args, kwargs, ctx)
    if t is MPInstance:
        m = callee.cls.lookup("__call__")
        if m is not None and type(m) is MPFunction:
            return call_function(m, [callee] + list(args), kwargs, ctx)
    return raise_exception(
        type_error(f"'{type_name(callee)}' object is not callable"), ctx
    )


def _instantiate(cls, args, kwargs, ctx):
    if cls.flavor == "builtin":
        return cls.convert(ctx, args, kwargs)
    init = cls.lookup("__init__")
    if init is not None and type(init) is MPFunction:
        inst = MPInstance(cls)

        def after_init(rte, result):
            if result is not None:
                return raise_exception(
                    type_error(
                        f"__init__() should return None, not '{type_name(result)}'"
                    ),
                    StepContext(rte, ctx.cont, ctx.span),
                )
            return (ctx.cont, ctx.rte, inst)

        return call_function(
            init, [inst] + list(args), kwargs, StepContext(ctx.rte, after_init, ctx.span)
        )
    if cls.flavor == "exception" or (cls.base is not None and cls.base.flavor == "exception"):
        return (ctx.cont, ctx.rte, MPInstance(cls, {"args": tuple(args)}))
    if args or kwargs:
        return raise_exception(type_error(f"{cls.name}() takes no arguments"), ctx)
    return (ctx.cont, ctx.rte, MPInstance(cls))


# -- iteration ----------------------------------------------------------------------

def sem_iter(v, ctx):
    if type(v) in (list, tuple, str, range):
        return (ctx.cont, ctx.rte, iter(v))
    if type(v) is MPInstance:
        m = v.cls.lookup("__iter__")
        if m is not None:
            return call_value(m, [v], ctx)
    return raise_exception(
        type_error(f"'{type_name(v)}' object is not iterable"), ctx
    )


def sem_next(it, ctx, on_stop):
    """Advance an iterator; on_stop() -> outcome handles exhaustion."""
    if type(it) is MPInstance:
        m = it.cls.lookup("__next__")
        if m is None:
            return raise_exception(
                type_error(f"iter() returned non-iterator of type '{it.cls.name}'"),
                ctx,
            )
        outer = ctx.rte.handler
        caller_rte = ctx.rte
        cont = ctx.cont

        def catching(rte, exc):
            if exc.cls.issub(EXC_STOP_ITERATION):
                return on_stop()
            return (outer, rte, exc)

        h_rte = caller_rte.fork()
        h_rte.handler = catching

        def got(_rte, value):
            return (cont, caller_rte, value)

        return call_value(m, [it], StepContext(h_rte, got, ctx.span))
    try:
        v = next(it)
    except StopIteration:
        return on_stop()
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)
    return (ctx.cont, ctx.rte, v)


def collect_values(v, ctx):
    """Materialize any iterable into a host list, then continue."""
    if type(v) in (list, tuple, str, range):
        return (ctx.cont, ctx.rte, list(v))

    def got_iter(rte, it):
        out = []

        def loop():
            return sem_next(it, StepContext(rte, append_k, ctx.span), stop)

        def append_k(_rte, value):
            out.append(value)
            return loop()

        def stop():
            return (ctx.cont, rte, out)

        return loop()

    return sem_iter(v, StepContext(ctx.rte, got_iter, ctx.span))


# -- display (repr / str) --------------------------------------------------------------

def _display_needs_cps(v, depth=0):
    if depth > 6:
        return False
    t = type(v)
    if t is MPInstance:
        return (
            v.cls.lookup("__repr__") is not None or v.cls.lookup("__str__") is not None
        )
    if t is list or t is tuple:
        return any(_display_needs_cps(x, depth + 1) for x in v)
    return False


def sem_repr(v, ctx):
    if not _display_needs_cps(v):
        return (ctx.cont, ctx.rte, repr(v))
    t = type(v)
    if t is MPInstance:
        m = v.cls.lookup("__repr__")
        if m is None:
            return (ctx.cont, ctx.rte, repr(v))

        def check(rte, s):
            if type(s) is not str:
                return raise_exception(
                    type_error(f"__repr__ returned non-string (type {type_name(s)})"),
                    StepContext(rte, ctx.cont, ctx.span),
                )
            return (ctx.cont, rte, s)

        return call_value(m, [v], StepContext(ctx.rte, check, ctx.span))
    if t is list:
        return _repr_seq(list(v), "[", "]", False, ctx)
    if t is tuple:
        return _repr_seq(list(v), "(", ")", len(v) == 1, ctx)
    return (ctx.cont, ctx.rte, repr(v))


def _repr_seq(items, open_, close, trailing_comma, ctx):
    parts = []
    caller_rte = ctx.rte

    def loop(rte):
        if len(parts) == len(items):
            body = ", ".join(parts) + ("," if trailing_comma else "")
            return (ctx.cont, caller_rte, open_ + body + close)
        return sem_repr(items[len(parts)], StepContext(rte, collect, ctx.span))

    def collect(rte, s):
        parts.append(s)
        return loop(rte)

    return loop(caller_rte)


def sem_str(v, ctx):
    if type(v) is str:
        return (ctx.cont, ctx.rte, v)
    if type(v) is MPInstance:
        m = v.cls.lookup("__str__")
        if m is not None:

            def check(rte, s):
                if type(s) is not str:
                    return raise_exception(
                        type_error(
                            f"__str__ returned non-string (type {type_name(s)})"
                        ),
                        StepContext(rte, ctx.cont, ctx.span),
                    )
                return (ctx.cont, rte, s)

            return call_value(m, [v], StepContext(ctx.rte, check, ctx.span))
        if v.cls.flavor == "exception":
            return (ctx.cont, ctx.rte, exc_message(v))
        return sem_repr(v, ctx)
    return sem_repr(v, ctx)

# -- builtin type facades ---------------------------------------------------------------

def _native(name):
    def deco(fn):
        return NativeFunction(name, fn)

    return deco


def _simple(name, minargs, maxargs, fn):
    """Native wrapper for a host function over host values."""

    def wrapped(ctx, args, kwargs):
        if kwargs:
            return raise_exception(
                type_error(f"{name}() takes no keyword arguments"), ctx
            )
        if not (minargs <= len(args) <= maxargs):
            expected = str(minargs) if minargs == maxargs else f"{minargs} to {maxargs}"
            return raise_exception(
                type_error(
                    f"{name} expected {expected} argument{'s' if maxargs != 1 else ''}, "
                    f"got {len(args)}"
                ),
                ctx,
            )
        try:
            v = fn(*args)
        except MPRaise as m:
            return raise_exception(m.exc, ctx)
        except Exception as e:
            return raise_exception(convert_host_exc(e), ctx)
        return (ctx.cont, ctx.rte, v)

    return NativeFunction(name, wrapped)


def _guard_host(name, v):
    if isinstance(v, MPObject):
        raise MPRaise(
            type_error(f"{name}() argument must not be a '{type_name(v)}'")
        )
    return v


def _conv_int(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("int() takes no keyword arguments"), ctx)
    if len(args) > 1:
        return raise_exception(
            type_error(f"int() takes at most 1 argument ({len(args)} given)"), ctx
        )
    if not args:
        return (ctx.cont, ctx.rte, 0)
    v = args[0]
    if isinstance(v, MPObject) or type(v) in (list, tuple, range):
        return raise_exception(
            type_error(
                "int() argument must be a string, a bytes-like object or a real "
                f"number, not '{type_name(v)}'"
            ),
            ctx,
        )
    try:
        return (ctx.cont, ctx.rte, int(v))
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)


def _conv_float(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("float() takes no keyword arguments"), ctx)
    if len(args) > 1:
        return raise_exception(
            type_error(f"float() takes at most 1 argument ({len(args)} given)"), ctx
        )
    if not args:
        return (ctx.cont, ctx.rte, 0.0)
    v = args[0]
    if isinstance(v, MPObject) or type(v) in (list, tuple, range):
        return raise_exception(
            type_error(
                f"float() argument must be a string or a real number, not "
                f"'{type_name(v)}'"
            ),
            ctx,
        )
    try:
        return (ctx.cont, ctx.rte, float(v))
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)


def _conv_str(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("str() takes no keyword arguments"), ctx)
    if len(args) > 1:
        return raise_exception(
            type_error(f"str() takes at most 1 argument ({len(args)} given)"), ctx
        )
    if not args:
        return (ctx.cont, ctx.rte, "")
    return sem_str(args[0], ctx)


def _conv_bool(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("bool() takes no keyword arguments"), ctx)
    if len(args) > 1:
        return raise_exception(
            type_error(f"bool() takes at most 1 argument ({len(args)} given)"), ctx
        )
    if not args:
        return (ctx.cont, ctx.rte, False)
    return sem_truth(args[0], ctx)


def _conv_list(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("list() takes no keyword arguments"), ctx)
    if len(args) > 1:
        return raise_exception(
            type_error(f"list expected at most 1 argument, got {len(args)}"), ctx
        )
    if not args:
        return (ctx.cont, ctx.rte, [])
    return collect_values(args[0], ctx)


def _conv_tuple(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("tuple() takes no keyword arguments"), ctx)
    if len(args) > 1:
        return raise_exception(
            type_error(f"tuple expected at most 1 argument, got {len(args)}"), ctx
        )
    if not args:
        return (ctx.cont, ctx.rte, ())

    def done(rte, values):
        return (ctx.cont, rte, tuple(values))

    return collect_values(args[0], StepContext(ctx.rte, done, ctx.span))


def _conv_range(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("range() takes no keyword arguments"), ctx)
    if not 1 <= len(args) <= 3:
        return raise_exception(
            type_error(f"range expected at most 3 arguments, got {len(args)}"), ctx
        )
    for a in args:
        if type(a) is not int and type(a) is not bool:
            return raise_exception(
                type_error(
                    f"'{type_name(a)}' object cannot be interpreted as an integer"
                ),
                ctx,
            )
    try:
        return (ctx.cont, ctx.rte, range(*args))
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)


def _facade(name, host_types, convert):
    return MPClass(name, None, {}, "builtin", host_types, convert)


CLASS_BOOL = _facade("bool", (bool,), _conv_bool)
CLASS_INT = _facade("int", (int,), _conv_int)
CLASS_FLOAT = _facade("float", (float,), _conv_float)
CLASS_STR = _facade("str", (str,), _conv_str)
CLASS_LIST = _facade("list", (list,), _conv_list)
CLASS_TUPLE = _facade("tuple", (tuple,), _conv_tuple)
CLASS_RANGE = _facade("range", (range,), _conv_range)
CLASS_NONETYPE = _facade("NoneType", (type(None),), None)
CLASS_TYPE = _facade("type", (MPClass,), None)
CLASS_FUNCTION = _facade("function", (MPFunction,), None)
CLASS_METHOD = _facade("method", (MPBoundMethod,), None)
CLASS_BUILTIN = _facade("builtin_function_or_method", (NativeFunction,), None)
CLASS_MODULE = _facade("module", (MPModule,), None)

_TYPE_FACADES = {
    bool: CLASS_BOOL,
    int: CLASS_INT,
    float: CLASS_FLOAT,
    str: CLASS_STR,
    list: CLASS_LIST,
    tuple: CLASS_TUPLE,
    range: CLASS_RANGE,
    type(None): CLASS_NONETYPE,
    MPClass: CLASS_TYPE,
    MPFunction: CLASS_FUNCTION,
    MPBoundMethod: CLASS_METHOD,
    NativeFunction: CLASS_BUILTIN,
    MPModule: CLASS_MODULE,
}


def value_class(v):
    if type(v) is MPInstance:
        return v.cls
    return _TYPE_FACADES.get(type(v), CLASS_TYPE if type(v) is MPClass else None)


def _matches_class(v, cls):
    if cls.flavor == "builtin":
        return isinstance(v, cls.host_types) and (
            not isinstance(v, MPObject) or cls.host_types[0] is not object
        )
    return type(v) is MPInstance and v.cls.issub(cls)


# -- builtin functions ----------------------------------------------------------------

@_native("print")
def _bi_print(ctx, args, kwargs):
    sep, end = " ", "\n"
    if kwargs:
        for k, v in kwargs:
            if k == "sep" or k == "end":
                if v is None:
                    continue
                if type(v) is not str:
                    return raise_exception(
                        type_error(
                            f"{k} must be None or a string, not {type_name(v)}"
                        ),
                        ctx,
                    )
                if k == "sep":
                    sep = v
                else:
                    end = v
            else:
                return raise_exception(
                    type_error(f"'{k}' is an invalid keyword argument for print()"),
                    ctx,
                )
    engine = ctx.rte.engine
    if not any(_display_needs_cps(a) for a in args):
        engine.stdout(sep.join(str(a) for a in args) + end)
        return (ctx.cont, ctx.rte, None)
    parts = []

    def loop(rte):
        if len(parts) == len(args):
            engine.stdout(sep.join(parts) + end)
            return (ctx.cont, rte, None)
        return sem_str(args[len(parts)], StepContext(rte, collect, ctx.span))

    def collect(rte, s):
        parts.append(s)
        return loop(rte)

    return loop(ctx.rte)


@_native("input")
def _bi_input(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("input() takes no keyword arguments"), ctx)
    if len(args) > 1:
        return raise_exception(
            type_error(f"input expected at most 1 argument, got {len(args)}"), ctx
        )
    prompt = ""
    if args:
        prompt = args[0] if type(args[0]) is str else str(args[0])
    engine = ctx.rte.engine
    engine.stdout(prompt)
    cont, rte = ctx.cont, ctx.rte

    def resume(text):
        if text is None:
            return raise_exception(
                exc_new(EXC_RUNTIME_ERROR, "EOF when reading a line"), ctx
            )
        return (cont, rte, text)

    return NeedInput(prompt, resume)


@_native("len")
def _bi_len(ctx, args, kwargs):
    if kwargs or len(args) != 1:
        return raise_exception(
            type_error(f"len() takes exactly one argument ({len(args)} given)"), ctx
        )
    v = args[0]
    if type(v) in (str, list, tuple, range):
        return (ctx.cont, ctx.rte, len(v))
    if type(v) is MPInstance:
        m = v.cls.lookup("__len__")
        if m is not None:

            def check(rte, n):
                if type(n) is not int:
                    return raise_exception(
                        type_error(
                            f"'{type_name(n)}' object cannot be interpreted as an integer"
                        ),
                        StepContext(rte, ctx.cont, ctx.span),
                    )
                if n < 0:
                    return raise_exception(
                        value_error("__len__() should return >= 0"),
                        StepContext(rte, ctx.cont, ctx.span),
                    )
                return (ctx.cont, rte, n)

            return call_value(m, [v], StepContext(ctx.rte, check, ctx.span))
    return raise_exception(
        type_error(f"object of type '{type_name(v)}' has no len()"), ctx
    )


@_native("abs")
def _bi_abs(ctx, args, kwargs):
    if kwargs or len(args) != 1:
        return raise_exception(
            type_error(f"abs() takes exactly one argument ({len(args)} given)"), ctx
        )
    v = args[0]
    if isinstance(v, MPObject) or type(v) not in (int, float, bool):
        return raise_exception(
            type_error(f"bad operand type for abs(): '{type_name(v)}'"), ctx
        )
    return (ctx.cont, ctx.rte, abs(v))


def _fold_minmax(name, op):
    def fn(ctx, args, kwargs):
        if kwargs:
            return raise_exception(
                type_error(f"{name}() takes no keyword arguments"), ctx
            )
        if not args:
            return raise_exception(
                type_error(f"{name} expected at least 1 argument, got 0"), ctx
            )

        def with_values(rte, values):
            if not values:
                return raise_exception(
                    value_error(f"{name}() arg is an empty sequence"),
                    StepContext(rte, ctx.cont, ctx.span),
                )
            best = [values[0]]
            idx = [1]

            def loop(rte):
                if idx[0] >= len(values):
                    return (ctx.cont, rte, best[0])
                challenger = values[idx[0]]
                idx[0] += 1

                def decide(rte2, wins):
                    if wins:
                        best[0] = challenger
                    return loop(rte2)

                return apply_compare(
                    op, challenger, best[0], StepContext(rte, decide, ctx.span)
                )

            return loop(rte)

        if len(args) == 1:
            return collect_values(args[0], StepContext(ctx.rte, with_values, ctx.span))
        return with_values(ctx.rte, list(args))

    return NativeFunction(name, fn)


_bi_min = _fold_minmax("min", "<")
_bi_max = _fold_minmax("max", ">")


@_native("sum")
def _bi_sum(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("sum() takes no keyword arguments"), ctx)
    if not 1 <= len(args) <= 2:
        return raise_exception(
            type_error(f"sum expected at most 2 arguments, got {len(args)}"), ctx
        )
    start = args[1] if len(args) == 2 else 0
    if type(start) is str:
        return raise_exception(
            type_error("sum() can't sum strings [use ''.join(seq) instead]"), ctx
        )

    def with_values(rte, values):
        total = [start]
        idx = [0]

        def loop(rte):
            if idx[0] >= len(values):
                return (ctx.cont, rte, total[0])
            v = values[idx[0]]
            idx[0] += 1

            def store(rte2, acc):
                total[0] = acc
                return loop(rte2)

            return apply_binop("+", total[0], v, StepContext(rte, store, ctx.span))

        return loop(rte)

    return collect_values(args[0], StepContext(ctx.rte, with_values, ctx.span))


@_native("type")
def _bi_type(ctx, args, kwargs):
    if kwargs or len(args) != 1:
        return raise_exception(type_error("type() takes 1 argument"), ctx)
    cls = value_class(args[0])
    if cls is None:
        return raise_exception(
            type_error(f"type() cannot classify '{type_name(args[0])}'"), ctx
        )
    return (ctx.cont, ctx.rte, cls)


@_native("repr")
def _bi_repr(ctx, args, kwargs):
    if kwargs or len(args) != 1:
        return raise_exception(
            type_error(f"repr() takes exactly one argument ({len(args)} given)"), ctx
        )
    return sem_repr(args[0], ctx)


@_native("chr")
def _bi_chr(ctx, args, kwargs):
    if kwargs or len(args) != 1:
        return raise_exception(
            type_error(f"chr() takes exactly one argument ({len(args)} given)"), ctx
        )
    v = args[0]
    if type(v) is not int:
        return raise_exception(
            type_error(f"'{type_name(v)}' object cannot be interpreted as an integer"),
            ctx,
        )
    try:
        return (ctx.cont, ctx.rte, chr(v))
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)


@_native("ord")
def _bi_ord(ctx, args, kwargs):
    if kwargs or len(args) != 1:
        return raise_exception(
            type_error(f"ord() takes exactly one argument ({len(args)} given)"), ctx
        )
    v = args[0]
    if type(v) is not str:
        return raise_exception(
            type_error(
                f"ord() expected string of length 1, but {type_name(v)} found"
            ),
            ctx,
        )
    try:
        return (ctx.cont, ctx.rte, ord(v))
    except Exception as e:
        return raise_exception(convert_host_exc(e), ctx)


@_native("isinstance")
def _bi_isinstance(ctx, args, kwargs):
    if kwargs or len(args) != 2:
        return raise_exception(type_error("isinstance expected 2 arguments"), ctx)
    v, classinfo = args
    if type(classinfo) is tuple:
        classes = classinfo
    else:
        classes = (classinfo,)
    for cls in classes:
        if type(cls) is not MPClass:
            return raise_exception(
                type_error(
                    "isinstance() arg 2 must be a type or tuple of types, not "
                    f"{type_name(cls)}"
                ),
                ctx,
            )
    return (ctx.cont, ctx.rte, any(_matches_class(v, c) for c in classes))


# -- playground builtins -------------------------------------------------------------

_NAMED_COLORS = {
    "black": "#000000", "silver": "#c0c0c0", "gray": "#808080", "white": "#ffffff",
    "maroon": "#800000", "red": "#ff0000", "purple": "#800080", "fuchsia": "#ff00ff",
    "green": "#008000", "lime": "#00ff00", "olive": "#808000", "yellow": "#ffff00",
    "navy": "#000080", "blue": "#0000ff", "teal": "#008080", "aqua": "#00ffff",
}


def normalize_color(color):
    if type(color) is not str:
        raise MPRaise(value_error(f"invalid color: {color!r}"))
    c = color.lower()
    if c in _NAMED_COLORS:
        return _NAMED_COLORS[c]
    if (
        len(c) == 7
        and c[0] == "#"
        and all(ch in "0123456789abcdef" for ch in c[1:])
    ):
        return c
    raise MPRaise(value_error(f"invalid color: {color!r}"))


@_native("setScreenMode")
def _bi_set_screen_mode(ctx, args, kwargs):
    if kwargs or len(args) != 2:
        return raise_exception(
            type_error("setScreenMode() takes exactly 2 arguments"), ctx
        )
    w, h = args
    if type(w) is not int or type(h) is not int:
        return raise_exception(
            type_error("setScreenMode() width and height must be integers"), ctx
        )
    if not (1 <= w <= 512 and 1 <= h <= 512):
        return raise_exception(
            value_error("setScreenMode() dimensions must be between 1 and 512"), ctx
        )
    engine = ctx.rte.engine
    engine.screen = (w, h)
    if engine.channel is not None:
        engine.channel.screen(w, h)
    return (ctx.cont, ctx.rte, None)


@_native("setPixel")
def _bi_set_pixel(ctx, args, kwargs):
    if kwargs or len(args) != 3:
        return raise_exception(type_error("setPixel() takes exactly 3 arguments"), ctx)
    x, y, color = args
    if type(x) is not int or type(y) is not int:
        return raise_exception(
            type_error("setPixel() coordinates must be integers"), ctx
        )
    engine = ctx.rte.engine
    if engine.screen is None:
        return raise_exception(
            exc_new(
                EXC_RUNTIME_ERROR,
                "screen mode not set; call setScreenMode(width, height) first",
            ),
            ctx,
        )
    w, h = engine.screen
    if not (0 <= x < w and 0 <= y < h):
        return raise_exception(
            value_error(f"pixel ({x}, {y}) outside the {w}x{h} screen"), ctx
        )
    try:
        rgb = normalize_color(color)
    except MPRaise as m:
        return raise_exception(m.exc, ctx)
    if engine.channel is not None:
        engine.channel.pixel(x, y, rgb)
    return (ctx.cont, ctx.rte, None)


@_native("getMouse")
def _bi_get_mouse(ctx, args, kwargs):
    if kwargs or args:
        return raise_exception(type_error("getMouse() takes no arguments"), ctx)
    return (ctx.cont, ctx.rte, tuple(ctx.rte.engine.mouse_state))


def _turtle_native(name, fn, nargs=(0,)):
    def wrapped(ctx, args, kwargs):
        if kwargs or len(args) not in nargs:
            return raise_exception(
                type_error(f"{name}() takes {' or '.join(map(str, nargs))} arguments"),
                ctx,
            )
        for a in args:
            if type(a) not in (int, float, bool):
                return raise_exception(
                    type_error(f"{name}() arguments must be numbers"), ctx
                )
        engine = ctx.rte.engine
        try:
            fn(engine, *args)
        except MPRaise as m:
            return raise_exception(m.exc, ctx)
        return (ctx.cont, ctx.rte, None)

    return NativeFunction(name, wrapped)


def _turtle_emit(engine, cmd):
    if engine.channel is not None:
        engine.channel.turtle(cmd)


def _turtle_move(engine, dist):
    t = engine.turtle_state
    rad = host_math.radians(t["heading"])
    nx = t["x"] + dist * host_math.cos(rad)
    ny = t["y"] + dist * host_math.sin(rad)
    _turtle_goto(engine, nx, ny)


def _turtle_goto(engine, nx, ny):
    t = engine.turtle_state
    cmd = {
        "op": "line" if t["pen"] else "move",
        "x1": t["x"],
        "y1": t["y"],
        "x2": nx,
        "y2": ny,
    }
    t["x"], t["y"] = nx, ny
    _turtle_emit(engine, cmd)


def _turtle_turn(engine, degrees):
    engine.turtle_state["heading"] = (engine.turtle_state["heading"] + degrees) % 360.0


def _turtle_pen(engine, down):
    engine.turtle_state["pen"] = down


def _turtle_clear(engine):
    _turtle_emit(engine, {"op": "clear"})


def _turtle_speed(engine, s):
    engine.turtle_state["speed"] = s


TURTLE_FUNCTIONS = {
    "fd": _turtle_native("fd", lambda e, d: _turtle_move(e, d), (1,)),
    "bk": _turtle_native("bk", lambda e, d: _turtle_move(e, -d), (1,)),
    "lt": _turtle_native("lt", lambda e, a: _turtle_turn(e, a), (1,)),
    "rt": _turtle_native("rt", lambda e, a: _turtle_turn(e, -a), (1,)),
    "penup": _turtle_native("penup", lambda e: _turtle_pen(e, False), (0,)),
    "pendown": _turtle_native("pendown", lambda e: _turtle_pen(e, True), (0,)),
    "goto": _turtle_native("goto", lambda e, x, y: _turtle_goto(e, x, y), (2,)),
    "clear": _turtle_native("clear", _turtle_clear, (0,)),
    "speed": _turtle_native("speed", _turtle_speed, (0, 1)),
}

PLAYGROUND_FUNCTIONS = {
    "setScreenMode": _bi_set_screen_mode,
    "setPixel": _bi_set_pixel,
    "getMouse": _bi_get_mouse,
    **TURTLE_FUNCTIONS,
}

_CORE_BUILTINS = {
    "print": _bi_print,
    "input": _bi_input,
    "len": _bi_len,
    "abs": _bi_abs,
    "min": _bi_min,
    "max": _bi_max,
    "sum": _bi_sum,
    "int": CLASS_INT,
    "float": CLASS_FLOAT,
    "str": CLASS_STR,
    "bool": CLASS_BOOL,
    "list": CLASS_LIST,
    "tuple": CLASS_TUPLE,
    "range": CLASS_RANGE,
    "type": _bi_type,
    "repr": _bi_repr,
    "chr": _bi_chr,
    "ord": _bi_ord,
    "isinstance": _bi_isinstance,
    **EXCEPTION_CLASSES,
}


def make_builtins(playground=False):
    """The builtin name table; playground functions only when a channel exists."""
    table = dict(_CORE_BUILTINS)
    if playground:
        table.update(PLAYGROUND_FUNCTIONS)
    return table


# -- module registry -------------------------------------------------------------------

def _math_fn(name, fn, nargs):
    def wrapped(*args):
        if len(args) != nargs:
            raise MPRaise(
                type_error(f"{name}() takes exactly {nargs} argument"
                           f"{'s' if nargs != 1 else ''} ({len(args)} given)")
            )
        for a in args:
            if type(a) not in (int, float, bool):
                raise MPRaise(
                    type_error(
                        f"must be real number, not {type_name(a)}"
                    )
                )
        return fn(*args)

    return _simple(name, nargs, nargs, wrapped)


def _make_math_module():
    return MPModule(
        "math",
        {
            "pi": host_math.pi,
            "e": host_math.e,
            "sqrt": _math_fn("sqrt", host_math.sqrt, 1),
            "floor": _math_fn("floor", host_math.floor, 1),
            "ceil": _math_fn("ceil", host_math.ceil, 1),
            "sin": _math_fn("sin", host_math.sin, 1),
            "cos": _math_fn("cos", host_math.cos, 1),
            "atan2": _math_fn("atan2", host_math.atan2, 2),
            "log": _math_fn("log", host_math.log, 1),
        },
    )


def _rng_native(name, method, minargs, maxargs, check=None):
    def fn(ctx, args, kwargs):
        if kwargs:
            return raise_exception(
                type_error(f"{name}() takes no keyword arguments"), ctx
            )
        if not (minargs <= len(args) <= maxargs):
            return raise_exception(
                type_error(f"{name}() takes {minargs} to {maxargs} arguments"), ctx
            )
        if check is not None:
            err = check(args)
            if err is not None:
                return raise_exception(err, ctx)
        try:
            v = method(ctx.rte.engine.rng, *args)
        except Exception as e:
            return raise_exception(convert_host_exc(e), ctx)
        return (ctx.cont, ctx.rte, v)

    return NativeFunction(name, fn)


def _check_randint(args):
    for a in args:
        if type(a) is not int:
            return type_error(f"randint() argument must be int, not {type_name(a)}")
    return None


def _check_choice(args):
    if type(args[0]) not in (list, tuple, str, range):
        return type_error(f"choice() argument must be a sequence, not {type_name(args[0])}")
    return None


def _check_shuffle(args):
    if type(args[0]) is not list:
        return type_error(f"shuffle() argument must be a list, not {type_name(args[0])}")
    return None


def _make_random_module():
    return MPModule(
        "random",
        {
            "random": _rng_native("random", lambda rng: rng.random(), 0, 0),
            "randint": _rng_native(
                "randint", lambda rng, a, b: rng.randint(a, b), 2, 2, _check_randint
            ),
            "seed": _rng_native("seed", lambda rng, *a: rng.seed(*a), 0, 1),
            "choice": _rng_native(
                "choice", lambda rng, seq: rng.choice(seq), 1, 1, _check_choice
            ),
            "shuffle": _rng_native(
                "shuffle", lambda rng, seq: rng.shuffle(seq), 1, 1, _check_shuffle
            ),
        },
    )


def _bi_time(ctx, args, kwargs):
    if args or kwargs:
        return raise_exception(type_error("time() takes no arguments"), ctx)
    engine = ctx.rte.engine
    fn = engine.time_fn or host_time.time
    return (ctx.cont, ctx.rte, fn())


def _bi_sleep(ctx, args, kwargs):
    if kwargs or len(args) != 1:
        return raise_exception(type_error("sleep() takes exactly 1 argument"), ctx)
    v = args[0]
    if type(v) not in (int, float, bool):
        return raise_exception(
            type_error(f"'{type_name(v)}' object cannot be interpreted as a number"),
            ctx,
        )
    if v < 0:
        return raise_exception(
            value_error("sleep length must be non-negative"), ctx
        )
    engine = ctx.rte.engine
    if engine.time_fn is None:  # real time only when not stubbed
        host_time.sleep(v)
    return (ctx.cont, ctx.rte, None)


def _make_time_module():
    return MPModule(
        "time",
        {
            "time": NativeFunction("time", _bi_time),
            "sleep": NativeFunction("sleep", _bi_sleep),
        },
    )


def _bi_reduce(ctx, args, kwargs):
    if kwargs:
        return raise_exception(type_error("reduce() takes no keyword arguments"), ctx)
    if not 2 <= len(args) <= 3:
        return raise_exception(
            type_error(f"reduce expected at most 3 arguments, got {len(args)}"), ctx
        )
    fn = args[0]

    def with_values(rte, values):
        if len(args) == 3:
            acc = [args[2]]
            idx = [0]
        else:
            if not values:
                return raise_exception(
                    type_error("reduce() of empty iterable with no initial value"),
                    StepContext(rte, ctx.cont, ctx.span),
                )
            acc = [values[0]]
            idx = [1]

        def loop(rte):
            if idx[0] >= len(values):
                return (ctx.cont, rte, acc[0])
            v = values[idx[0]]
            idx[0] += 1

            def store(rte2, result):
                acc[0] = result
                return loop(rte2)

            return call_value(fn, [acc[0], v], StepContext(rte, store, ctx.span))

        return loop(rte)

    return collect_values(args[1], StepContext(ctx.rte, with_values, ctx.span))


def _make_functools_module():
    return MPModule("functools", {"reduce": NativeFunction("reduce", _bi_reduce)})


def _make_turtle_module():
    return MPModule("turtle", dict(TURTLE_FUNCTIONS))


_MODULE_FACTORIES = {
    "math": _make_math_module,
    "random": _make_random_module,
    "time": _make_time_module,
    "functools": _make_functools_module,
    "turtle": _make_turtle_module,
}

MODULE_NAMES = frozenset(_MODULE_FACTORIES)


def resolve_module(name):
    """Whitelisted standard module, or None when the name is not registered."""
    factory = _MODULE_FACTORIES.get(name)
    return factory() if factory else None
