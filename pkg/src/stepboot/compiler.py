"""AST-to-code compilation.

Each node compiles into a code value `code(rte, cont) -> outcome` capturing
its children's code values; a compile-time environment threads through and
collects bindings. Variable references are resolved statically to frame
slots, closure cells, or the globals table. Atoms (names, constants) also
expose a direct evaluator on the code value's `atom` attribute so parents
can fuse them without a trampoline bounce.
"""

from __future__ import annotations

from .errors import SubsetSyntaxError
from .objects import (
    EXC_ASSERTION_ERROR,
    EXC_IMPORT_ERROR,
    EXC_RUNTIME_ERROR,
    EXC_UNBOUND_LOCAL_ERROR,
    FunctionTemplate,
    MPClass,
    MPFunction,
    MPRaise,
    UNBOUND,
    exc_new,
    name_error,
    type_error,
    type_name,
    value_error,
)
from .runtime import (
    apply_binop,
    apply_compare,
    apply_unary,
    build_traceback,
    call_value,
    raise_exception,
    sem_getattribute,
    sem_getitem,
    sem_iter,
    sem_next,
    sem_setattribute,
    sem_setitem,
    sem_truth,
    truth_fast,
)
from .stepper import (
    ASSIGN_DONE,
    EXPR_END,
    STMT_DONE,
    StepContext,
    do_expr_end,
    note_step,
)

_MISS = object()


# -- scope analysis -----------------------------------------------------------

class ScopeInfo:
    def __init__(self, kind, parent, name="<module>"):
        self.kind = kind  # "module" | "function" | "class"
        self.parent = parent
        self.name = name
        self.params = []
        self.assigned = {}  # ordered set of assigned names
        self.reads = []
        self.globals_decl = set()
        self.nonlocals_decl = set()
        self.children = []
        # filled by resolution
        self.slot_of = {}
        self.cell_names = set()
        self.free_order = []
        if parent is not None:
            parent.children.append(self)

    @property
    def nlocals(self):
        return len(self.slot_of)


class _SymbolCollector:
    def __init__(self):
        self.symtab = {}

    def collect_module(self, module_node):
        root = ScopeInfo("module", None)
        self.symtab[module_node] = root
        for stmt in module_node.body:
            self.visit(stmt, root)
        return root

    def target(self, node, scope):
        kind = node.kind
        if kind == "Name":
            scope.assigned.setdefault(node.id)
        elif kind in ("TupleDisplay", "ListDisplay"):
            for elt in node.elts:
                self.target(elt, scope)
        else:  # Attribute / Subscript targets read their object parts
            self.visit(node, scope)

    def visit(self, node, scope):
        kind = node.kind
        if kind == "Name":
            scope.reads.append(node.id)
        elif kind == "Assign":
            for t in node.targets:
                self.target(t, scope)
            self.visit(node.value, scope)
        elif kind == "AugAssign":
            if node.target.kind == "Name":
                scope.reads.append(node.target.id)
                scope.assigned.setdefault(node.target.id)
            else:
                self.visit(node.target, scope)
            self.visit(node.value, scope)
        elif kind == "For":
            self.target(node.target, scope)
            self.visit(node.iter, scope)
            for s in node.body + node.orelse:
                self.visit(s, scope)
        elif kind == "FunctionDef" or kind == "Lambda":
            if kind == "FunctionDef":
                scope.assigned.setdefault(node.name)
                name = node.name
            else:
                name = "<lambda>"
            for p in node.params:
                if p.default is not None:
                    self.visit(p.default, scope)
            child = ScopeInfo("function", scope, name)
            child.params = [p.name for p in node.params]
            for p in child.params:
                child.assigned.setdefault(p)
            self.symtab[node] = child
            body = node.body if kind == "FunctionDef" else [node.body]
            for s in body:
                self.visit(s, child)
        elif kind == "ClassDef":
            scope.assigned.setdefault(node.name)
            if node.base is not None:
                self.visit(node.base, scope)
            child = ScopeInfo("class", scope, node.name)
            self.symtab[node] = child
            for s in node.body:
                self.visit(s, child)
        elif kind == "Import":
            for name, asname in node.names:
                scope.assigned.setdefault(asname or name)
        elif kind == "Global":
            scope.globals_decl.update(node.names)
        elif kind == "Nonlocal":
            scope.nonlocals_decl.update(node.names)
        elif kind == "Try":
            for s in node.body + node.orelse + node.finalbody:
                self.visit(s, scope)
            for h in node.handlers:
                if h.type is not None:
                    self.visit(h.type, scope)
                if h.name is not None:
                    scope.assigned.setdefault(h.name)
                for s in h.body:
                    self.visit(s, scope)
        else:
            for child in node.children():
                self.visit(child, scope)


def _assign_slots(scope):
    if scope.kind == "function":
        for name in scope.assigned:
            if name not in scope.globals_decl and name not in scope.nonlocals_decl:
                scope.slot_of[name] = len(scope.slot_of)
    for child in scope.children:
        _assign_slots(child)


def _mark_free(chain, name):
    for s in chain:
        if name not in s.free_order:
            s.free_order.append(name)


def _resolve_use(scope, name, for_nonlocal=False, span=None):
    """Resolve a name use upward, marking cells and pass-through captures."""
    if not for_nonlocal and scope.kind == "function":
        if (
            name in scope.slot_of
            or name in scope.globals_decl
            or name in scope.free_order
        ):
            return
    chain = [scope] if scope.kind == "function" else []
    s = scope.parent
    while s is not None:
        if s.kind == "function":
            if name in s.globals_decl:
                break
            if name in s.slot_of:
                s.cell_names.add(name)
                _mark_free(chain, name)
                return
            if name in s.free_order or name in s.nonlocals_decl:
                _mark_free(chain + [s], name)
                return
            chain.append(s)
        s = s.parent
    if for_nonlocal:
        raise SubsetSyntaxError(f"no binding for nonlocal '{name}' found", span)


def _resolve_uses(scope):
    for name in scope.nonlocals_decl:
        _resolve_use(scope, name, for_nonlocal=True)
    for name in scope.reads:
        _resolve_use(scope, name)
    for child in scope.children:
        _resolve_uses(child)


def analyze(module_node):
    """Symbol-table pass; raises SubsetSyntaxError for scope violations."""
    collector = _SymbolCollector()
    root = collector.collect_module(module_node)
    _assign_slots(root)
    _resolve_uses(root)
    return collector.symtab


# -- compile-time environment ----------------------------------------------------

class CompileTimeEnv:
    """Static view of the scope chain while compiling one scope's body."""

    __slots__ = ("scope", "symtab", "loop_depth")

    def __init__(self, scope, symtab, loop_depth=0):
        self.scope = scope
        self.symtab = symtab
        self.loop_depth = loop_depth

    def in_loop(self):
        return CompileTimeEnv(self.scope, self.symtab, self.loop_depth + 1)

    def enter_scope(self, scope):
        return CompileTimeEnv(scope, self.symtab, 0)

    def resolve(self, name, store=False):
        """-> ("local"|"cell", slot) | ("free", idx) | ("global",) | ("classdyn",)"""
        s = self.scope
        if s.kind == "module":
            return ("global",)
        if s.kind == "class":
            if store:
                if name in s.globals_decl:
                    return ("global",)
                return ("classdyn",)
            if name in s.assigned and name not in s.globals_decl:
                return ("classdyn",)
            return self._resolve_outward(s.parent, name)
        # function scope
        if name in s.globals_decl:
            return ("global",)
        if name in s.nonlocals_decl:
            return ("free", s.free_order.index(name))
        if name in s.slot_of:
            slot = s.slot_of[name]
            if name in s.cell_names:
                return ("cell", slot)
            return ("local", slot)
        if name in s.free_order:
            return ("free", s.free_order.index(name))
        return ("global",)

    def _resolve_outward(self, scope, name):
        # a class body runs on the defining activation's frame, so enclosing
        # function slots/cells are directly addressable from it
        while scope is not None and scope.kind == "class":
            scope = scope.parent
        if scope is None or scope.kind == "module":
            return ("global",)
        return CompileTimeEnv(scope, self.symtab).resolve(name)


# -- helpers -----------------------------------------------------------------------

def _raise_to(rte, exc, span):
    if exc.tb is None:
        exc.tb = build_traceback(rte, span)
    return (rte.handler, rte, exc)


def _trivial_code(rte, cont):
    return (cont, rte, None)


def _pair(first, rest):
    def code(rte, cont):
        return first(rte, lambda rte2, _v: (rest, rte2, cont))

    return code


def gen_sequence(codes):
    if not codes:
        return _trivial_code
    result = codes[-1]
    for c in reversed(codes[:-1]):
        result = _pair(c, result)
    return result


class Compiler:
    def __init__(self, symtab):
        self.symtab = symtab

    # -- name access -------------------------------------------------------------

    def gen_read(self, cte, name, span):
        res = cte.resolve(name)
        kind = res[0]
        if kind == "local":
            slot = res[1]

            def atom(rte):
                v = rte.frame[slot]
                if v is UNBOUND:
                    raise MPRaise(
                        exc_new(
                            EXC_UNBOUND_LOCAL_ERROR,
                            f"local variable '{name}' referenced before assignment",
                        )
                    )
                return v

        elif kind == "cell":
            slot = res[1]

            def atom(rte):
                v = rte.frame[slot].v
                if v is UNBOUND:
                    raise MPRaise(
                        exc_new(
                            EXC_UNBOUND_LOCAL_ERROR,
                            f"local variable '{name}' referenced before assignment",
                        )
                    )
                return v

        elif kind == "free":
            idx = res[1]

            def atom(rte):
                v = rte.cells[idx].v
                if v is UNBOUND:
                    raise MPRaise(
                        name_error(
                            f"free variable '{name}' referenced before assignment "
                            f"in enclosing scope"
                        )
                    )
                return v

        elif kind == "classdyn":

            def atom(rte):
                v = rte.class_ns.get(name, _MISS)
                if v is _MISS:
                    v = rte.globals.get(name, _MISS)
                if v is _MISS:
                    v = rte.engine.builtins.get(name, _MISS)
                if v is _MISS:
                    raise MPRaise(name_error(f"name '{name}' is not defined"))
                return v

        else:

            def atom(rte):
                v = rte.globals.get(name, _MISS)
                if v is _MISS:
                    v = rte.engine.builtins.get(name, _MISS)
                    if v is _MISS:
                        raise MPRaise(name_error(f"name '{name}' is not defined"))
                return v

        def code(rte, cont):
            try:
                v = atom(rte)
            except MPRaise as m:
                return _raise_to(rte, m.exc, span)
            return (cont, rte, v)

        code.atom = atom
        return code

    def gen_store_fn(self, cte, name):
        """Direct store fn(rte, value); storing UNBOUND unbinds the name."""
        res = cte.resolve(name, store=True)
        kind = res[0]
        if kind == "local":
            slot = res[1]

            def store(rte, value):
                rte.frame[slot] = value

        elif kind == "cell":
            slot = res[1]

            def store(rte, value):
                rte.frame[slot].v = value

        elif kind == "free":
            idx = res[1]

            def store(rte, value):
                rte.cells[idx].v = value

        elif kind == "classdyn":

            def store(rte, value):
                if value is UNBOUND:
                    rte.class_ns.pop(name, None)
                else:
                    rte.class_ns[name] = value

        else:

            def store(rte, value):
                if value is UNBOUND:
                    rte.globals.pop(name, None)
                else:
                    rte.globals[name] = value

        return store

    def gen_store(self, cte, target):
        """CPS store: returns fn(rte, value, cont) -> outcome."""
        kind = target.kind
        if kind == "Name":
            direct = self.gen_store_fn(cte, target.id)

            def store_name(rte, value, cont):
                direct(rte, value)
                return (cont, rte, None)

            store_name.direct = direct
            return store_name
        if kind == "Attribute":
            obj_code = self.compile_expr(cte, target.value)
            attr = target.attr
            span = target.span

            def store_attr(rte, value, cont):
                def with_obj(rte2, obj):
                    return sem_setattribute(
                        StepContext(rte2, cont, span), obj, attr, value
                    )

                return obj_code(rte, with_obj)

            return store_attr
        if kind == "Subscript":
            obj_code = self.compile_expr(cte, target.value)
            index_code = self.compile_subscript_index(cte, target.index)
            span = target.span

            def store_item(rte, value, cont):
                def with_obj(rte2, obj):
                    def with_index(rte3, index):
                        return sem_setitem(
                            StepContext(rte3, cont, span), obj, index, value
                        )

                    return index_code(rte2, with_index)

                return obj_code(rte, with_obj)

            return store_item
        # tuple/list unpacking target
        elt_stores = [self.gen_store(cte, e) for e in target.elts]
        n = len(elt_stores)
        span = target.span

        def store_unpack(rte, value, cont):
            if type(value) not in (list, tuple, str, range):
                return _raise_to(
                    rte,
                    type_error(f"cannot unpack non-iterable {type_name(value)} object"),
                    span,
                )
            if len(value) > n:
                return _raise_to(
                    rte, value_error(f"too many values to unpack (expected {n})"), span
                )
            if len(value) < n:
                return _raise_to(
                    rte,
                    value_error(
                        f"not enough values to unpack (expected {n}, got {len(value)})"
                    ),
                    span,
                )
            items = list(value)

            def run(rte2, i):
                if i == n:
                    return (cont, rte2, None)

                def after(rte3, _v):
                    return run(rte3, i + 1)

                return elt_stores[i](rte2, items[i], after)

            return run(rte, 0)

        return store_unpack

    # -- expressions -----------------------------------------------------------------

    def compile_expr(self, cte, node):
        method = getattr(self, "gen_" + node.kind, None)
        if method is None:
            raise SubsetSyntaxError(f"unsupported expression: {node.kind}", node.span)
        return method(cte, node)

    def gen_Constant(self, cte, node):
        value = node.value

        def atom(_rte):
            return value

        def code(rte, cont):
            return (cont, rte, value)

        code.atom = atom
        return code

    def gen_Name(self, cte, node):
        return self.gen_read(cte, node.id, node.span)

    def gen_eval_list(self, cte, nodes):
        """code(rte, cont) where cont receives the list of values."""
        codes = [self.compile_expr(cte, n) for n in nodes]
        atoms = [getattr(c, "atom", None) for c in codes]
        n = len(codes)
        spans = [x.span for x in nodes]

        def code(rte, cont):
            values = []

            def loop(rte):
                while True:
                    i = len(values)
                    if i == n:
                        return (cont, rte, values)
                    a = atoms[i]
                    if a is None:
                        return codes[i](rte, collect)
                    try:
                        values.append(a(rte))
                    except MPRaise as m:
                        return _raise_to(rte, m.exc, spans[i])

            def collect(rte2, v):
                values.append(v)
                return loop(rte2)

            return loop(rte)

        return code

    def gen_BinOp(self, cte, node):
        lcode = self.compile_expr(cte, node.left)
        rcode = self.compile_expr(cte, node.right)
        latom = getattr(lcode, "atom", None)
        ratom = getattr(rcode, "atom", None)
        op = node.op
        span = node.span

        def finish(rte, cont, a, b):
            def done(rte2, v):
                return note_step(rte2, EXPR_END, span, cont, v)

            return apply_binop(op, a, b, StepContext(rte, done, span))

        if latom is not None and ratom is not None:

            def code(rte, cont):
                try:
                    a = latom(rte)
                    b = ratom(rte)
                except MPRaise as m:
                    return _raise_to(rte, m.exc, span)
                return finish(rte, cont, a, b)

        elif ratom is not None:

            def code(rte, cont):
                def with_left(rte2, a):
                    try:
                        b = ratom(rte2)
                    except MPRaise as m:
                        return _raise_to(rte2, m.exc, span)
                    return finish(rte2, cont, a, b)

                return lcode(rte, with_left)

        else:

            def code(rte, cont):
                def with_left(rte2, a):
                    def with_right(rte3, b):
                        return finish(rte3, cont, a, b)

                    return rcode(rte2, with_right)

                return lcode(rte, with_left)

        return code

    def gen_UnaryOp(self, cte, node):
        vcode = self.compile_expr(cte, node.operand)
        vatom = getattr(vcode, "atom", None)
        op = node.op
        span = node.span

        def finish(rte, cont, v):
            def done(rte2, r):
                return note_step(rte2, EXPR_END, span, cont, r)

            return apply_unary(op, v, StepContext(rte, done, span))

        if vatom is not None:

            def code(rte, cont):
                try:
                    v = vatom(rte)
                except MPRaise as m:
                    return _raise_to(rte, m.exc, span)
                return finish(rte, cont, v)

        else:

            def code(rte, cont):
                return vcode(rte, lambda rte2, v: finish(rte2, cont, v))

        return code

    def gen_Compare(self, cte, node):
        left_code = self.compile_expr(cte, node.left)
        comp_codes = [self.compile_expr(cte, c) for c in node.comparators]
        ops = node.ops
        span = node.span
        n = len(ops)

        if n == 1:
            rcode = comp_codes[0]
            latom = getattr(left_code, "atom", None)
            ratom = getattr(rcode, "atom", None)
            op = ops[0]

            def finish(rte, cont, a, b):
                def done(rte2, v):
                    return note_step(rte2, EXPR_END, span, cont, v)

                return apply_compare(op, a, b, StepContext(rte, done, span))

            if latom is not None and ratom is not None:

                def code(rte, cont):
                    try:
                        a = latom(rte)
                        b = ratom(rte)
                    except MPRaise as m:
                        return _raise_to(rte, m.exc, span)
                    return finish(rte, cont, a, b)

            else:

                def code(rte, cont):
                    def with_left(rte2, a):
                        def with_right(rte3, b):
                            return finish(rte3, cont, a, b)

                        return rcode(rte2, with_right)

                    return left_code(rte, with_left)

            return code

        def code(rte, cont):
            def done(rte2, v):
                return note_step(rte2, EXPR_END, span, cont, v)

            def chain(rte2, prev, i):
                def with_comp(rte3, b):
                    def decided(rte4, r):
                        if i + 1 == n:
                            return done(rte4, r)
                        t = truth_fast(r)
                        if t is None:

                            def with_truth(rte5, tr):
                                if not tr:
                                    return done(rte5, r)
                                return chain(rte5, b, i + 1)

                            return sem_truth(r, StepContext(rte4, with_truth, span))
                        if not t:
                            return done(rte4, r)
                        return chain(rte4, b, i + 1)

                    return apply_compare(
                        ops[i], prev, b, StepContext(rte3, decided, span)
                    )

                return comp_codes[i](rte2, with_comp)

            return left_code(rte, lambda rte2, a: chain(rte2, a, 0))

        return code

    def gen_BoolOp(self, cte, node):
        codes = [self.compile_expr(cte, v) for v in node.values]
        is_or = node.op == "or"
        span = node.span
        n = len(codes)

        def code(rte, cont):
            def done(rte2, v):
                return note_step(rte2, EXPR_END, span, cont, v)

            def step(rte2, i):
                def with_value(rte3, v):
                    if i + 1 == n:
                        return done(rte3, v)
                    t = truth_fast(v)
                    if t is None:

                        def with_truth(rte4, tr):
                            if tr == is_or:
                                return done(rte4, v)
                            return step(rte4, i + 1)

                        return sem_truth(v, StepContext(rte3, with_truth, span))
                    if t == is_or:
                        return done(rte3, v)
                    return step(rte3, i + 1)

                return codes[i](rte2, with_value)

            return step(rte, 0)

        return code

    def gen_IfExp(self, cte, node):
        test_code = self.compile_expr(cte, node.test)
        body_code = self.compile_expr(cte, node.body)
        else_code = self.compile_expr(cte, node.orelse)
        span = node.span
        test_span = node.test.span

        def code(rte, cont):
            def done(rte2, v):
                return note_step(rte2, EXPR_END, span, cont, v)

            def decide(rte2, v):
                t = truth_fast(v)
                if t is None:
                    return sem_truth(v, StepContext(rte2, branch, test_span))
                return branch(rte2, t)

            def branch(rte2, t):
                return (body_code if t else else_code)(rte2, done)

            return test_code(rte, decide)

        return code

    def gen_Call(self, cte, node):
        func_code = self.compile_expr(cte, node.func)
        args_code = self.gen_eval_list(cte, node.args)
        kw_names = [k for k, _ in node.kwargs]
        kw_code = (
            self.gen_eval_list(cte, [v for _, v in node.kwargs]) if node.kwargs else None
        )
        span = node.span

        def code(rte, cont):
            expr_end = do_expr_end(cont, span)

            def with_func(rte2, fn):
                def with_args(rte3, args):
                    if kw_code is None:
                        return call_value(fn, args, StepContext(rte3, expr_end, span))

                    def with_kw(rte4, kw_values):
                        kwargs = list(zip(kw_names, kw_values))
                        return call_value(
                            fn, args, StepContext(rte4, expr_end, span), kwargs
                        )

                    return kw_code(rte3, with_kw)

                return args_code(rte2, with_args)

            return func_code(rte, with_func)

        return code

    def gen_Attribute(self, cte, node):
        obj_code = self.compile_expr(cte, node.value)
        return self.gen_attribute_code(obj_code, node.attr, node.span)

    @staticmethod
    def gen_attribute_code(obj_code, name, span):
        def call_getattribute(rte, cont, obj):
            ctx = StepContext(rte, cont, span)
            return sem_getattribute(ctx, obj, name)

        def code(rte, cont):
            expr_end_cont = do_expr_end(cont, span)
            return obj_code(
                rte, lambda rte2, val: call_getattribute(rte2, expr_end_cont, val)
            )

        return code

    def compile_subscript_index(self, cte, index):
        """Index code; Slice nodes build a host slice and count one step."""
        if index.kind != "Slice":
            return self.compile_expr(cte, index)
        span = index.span
        part_codes = [
            None if p is None else self.compile_expr(cte, p)
            for p in (index.lower, index.upper, index.step)
        ]

        def code(rte, cont):
            parts = [None, None, None]

            def fill(rte2, i):
                while i < 3 and part_codes[i] is None:
                    i += 1
                if i == 3:
                    return note_step(
                        rte2, EXPR_END, span, cont, slice(parts[0], parts[1], parts[2])
                    )

                def with_part(rte3, v):
                    parts[i] = v
                    return fill(rte3, i + 1)

                return part_codes[i](rte2, with_part)

            return fill(rte, 0)

        return code

    def gen_Subscript(self, cte, node):
        obj_code = self.compile_expr(cte, node.value)
        index_code = self.compile_subscript_index(cte, node.index)
        span = node.span

        def code(rte, cont):
            def done(rte2, v):
                return note_step(rte2, EXPR_END, span, cont, v)

            def with_obj(rte2, obj):
                def with_index(rte3, index):
                    return sem_getitem(StepContext(rte3, done, span), obj, index)

                return index_code(rte2, with_index)

            return obj_code(rte, with_obj)

        return code

    def gen_ListDisplay(self, cte, node):
        elts_code = self.gen_eval_list(cte, node.elts)
        span = node.span

        def code(rte, cont):
            def with_elts(rte2, values):
                return note_step(rte2, EXPR_END, span, cont, list(values))

            return elts_code(rte, with_elts)

        return code

    def gen_TupleDisplay(self, cte, node):
        elts_code = self.gen_eval_list(cte, node.elts)
        span = node.span

        def code(rte, cont):
            def with_elts(rte2, values):
                return note_step(rte2, EXPR_END, span, cont, tuple(values))

            return elts_code(rte, with_elts)

        return code

    def gen_Lambda(self, cte, node):
        return self.gen_function_value(cte, node, "<lambda>")

    # -- function machinery ------------------------------------------------------------

    def gen_function_value(self, cte, node, name):
        """Code that builds the closure value (no binding, no step)."""
        scope = self.symtab[node]
        body_cte = cte.enter_scope(scope)
        if node.kind == "Lambda":
            expr_code = self.compile_expr(body_cte, node.body)

            def body(rte, _cont):
                def ret(rte2, v):
                    return (rte2.return_k, rte2, v)

                return expr_code(rte, ret)

        else:
            body = self.compile_sequence(body_cte, node.body)
        defaults_nodes = [p.default for p in node.params if p.default is not None]
        first_default = len(node.params) - len(defaults_nodes)
        defaults_code = self.gen_eval_list(cte, defaults_nodes)
        template = FunctionTemplate(
            name=name,
            param_names=[p.name for p in node.params],
            first_default=first_default,
            nlocals=scope.nlocals,
            cell_slots=tuple(
                slot for n, slot in scope.slot_of.items() if n in scope.cell_names
            ),
            free_names=tuple(scope.free_order),
            capture_plan=self.build_capture_plan(cte, scope, node),
            local_table=tuple(
                (n, s, n in scope.cell_names) for n, s in scope.slot_of.items()
            ),
            body=body,
            span=node.span,
        )
        plan = template.capture_plan

        def code(rte, cont):
            def with_defaults(rte2, defaults):
                cells = tuple(
                    rte2.frame[idx] if where == "frame" else rte2.cells[idx]
                    for where, idx in plan
                )
                fn = MPFunction(template, cells, rte2.globals, list(defaults))
                return (cont, rte2, fn)

            return defaults_code(rte, with_defaults)

        return code

    def build_capture_plan(self, cte, child_scope, node):
        plan = []
        defining = cte.scope
        while defining.kind == "class":
            defining = defining.parent
        for name in child_scope.free_order:
            if defining.kind == "function":
                if name in defining.slot_of and name in defining.cell_names:
                    plan.append(("frame", defining.slot_of[name]))
                    continue
                if name in defining.free_order:
                    plan.append(("cells", defining.free_order.index(name)))
                    continue
            raise SubsetSyntaxError(
                f"cannot resolve captured variable '{name}'", node.span
            )
        return tuple(plan)

    # -- statements ----------------------------------------------------------------------

    def compile_stmt(self, cte, node):
        method = getattr(self, "stmt_" + node.kind, None)
        if method is None:
            raise SubsetSyntaxError(f"unsupported statement: {node.kind}", node.span)
        return method(cte, node)

    def compile_sequence(self, cte, body):
        return gen_sequence([self.compile_stmt(cte, s) for s in body])

    def stmt_ExprStmt(self, cte, node):
        return self.compile_expr(cte, node.value)

    def stmt_Pass(self, cte, node):
        span = node.span

        def code(rte, cont):
            return note_step(rte, STMT_DONE, span, cont, None)

        return code

    def stmt_Break(self, cte, node):
        if cte.loop_depth == 0:
            raise SubsetSyntaxError("'break' outside loop", node.span)
        span = node.span

        def go(rte, _v):
            return (rte.break_k, rte, None)

        def code(rte, cont):
            return note_step(rte, STMT_DONE, span, go, None)

        return code

    def stmt_Continue(self, cte, node):
        if cte.loop_depth == 0:
            raise SubsetSyntaxError("'continue' not properly in loop", node.span)
        span = node.span

        def go(rte, _v):
            return (rte.continue_k, rte, None)

        def code(rte, cont):
            return note_step(rte, STMT_DONE, span, go, None)

        return code

    def stmt_Return(self, cte, node):
        if cte.scope.kind != "function":
            raise SubsetSyntaxError("'return' outside function", node.span)
        span = node.span
        if node.value is None:

            def go(rte, _v):
                return (rte.return_k, rte, None)

            def code(rte, cont):
                return note_step(rte, STMT_DONE, span, go, None)

            return code

        value_code = self.compile_expr(cte, node.value)

        def ret(rte, v):
            return (rte.return_k, rte, v)

        def code(rte, cont):
            return value_code(rte, ret)

        return code

    def stmt_Raise(self, cte, node):
        span = node.span
        if node.exc is None:

            def go(rte, _v):
                exc = rte.exc_current
                if exc is None:
                    return _raise_to(
                        rte,
                        exc_new(EXC_RUNTIME_ERROR, "No active exception to re-raise"),
                        span,
                    )
                return (rte.handler, rte, exc)

            def code(rte, cont):
                return note_step(rte, STMT_DONE, span, go, None)

            return code

        exc_code = self.compile_expr(cte, node.exc)

        def code(rte, cont):
            def go(rte2, v):
                return raise_exception(v, StepContext(rte2, cont, span))

            return exc_code(rte, go)

        return code

    def stmt_Assert(self, cte, node):
        test_code = self.compile_expr(cte, node.test)
        msg_code = self.compile_expr(cte, node.msg) if node.msg is not None else None
        span = node.span

        def code(rte, cont):
            def decide(rte2, v):
                t = truth_fast(v)
                if t is None:
                    return sem_truth(v, StepContext(rte2, branch, span))
                return branch(rte2, t)

            def branch(rte2, t):
                if t:
                    return (cont, rte2, None)
                if msg_code is None:
                    return _raise_to(rte2, exc_new(EXC_ASSERTION_ERROR), span)

                def with_msg(rte3, msg):
                    return _raise_to(rte3, exc_new(EXC_ASSERTION_ERROR, msg), span)

                return msg_code(rte2, with_msg)

            return test_code(rte, decide)

        return code

    def stmt_Global(self, cte, node):
        return _trivial_code

    def stmt_Nonlocal(self, cte, node):
        if cte.scope.kind != "function":
            raise SubsetSyntaxError(
                "nonlocal declaration not allowed at module level", node.span
            )
        for name in node.names:
            _resolve_use(cte.scope, name, for_nonlocal=True, span=node.span)
        return _trivial_code

    def stmt_Assign(self, cte, node):
        value_code = self.compile_expr(cte, node.value)
        stores = [self.gen_store(cte, t) for t in node.targets]
        span = node.span
        target_text = node.targets[0].span.to(node.targets[-1].span).text()
        n = len(stores)

        def code(rte, cont):
            def with_value(rte2, v):
                def run(rte3, i):
                    if i == n:
                        return note_step(
                            rte3, ASSIGN_DONE, span, cont, None, target_text, v
                        )

                    def after(rte4, _unused):
                        return run(rte4, i + 1)

                    return stores[i](rte3, v, after)

                return run(rte2, 0)

            return value_code(rte, with_value)

        return code

    def stmt_AugAssign(self, cte, node):
        op = node.op
        span = node.span
        value_code = self.compile_expr(cte, node.value)
        target_text = node.target.span.text()
        target = node.target

        if target.kind == "Name":
            read_atom = self.gen_read(cte, target.id, target.span).atom
            store = self.gen_store_fn(cte, target.id)

            def code(rte, cont):
                try:
                    a = read_atom(rte)
                except MPRaise as m:
                    return _raise_to(rte, m.exc, span)

                def with_value(rte2, b):
                    def with_result(rte3, v):
                        store(rte3, v)
                        return note_step(
                            rte3, ASSIGN_DONE, span, cont, None, target_text, v
                        )

                    return apply_binop(
                        op, a, b, StepContext(rte2, with_result, span), inplace=True
                    )

                return value_code(rte, with_value)

            return code

        if target.kind == "Attribute":
            obj_code = self.compile_expr(cte, target.value)
            attr = target.attr

            def code(rte, cont):
                def with_obj(rte2, obj):
                    def with_current(rte3, a):
                        def with_value(rte4, b):
                            def with_result(rte5, v):
                                def stored(rte6, _unused):
                                    return note_step(
                                        rte6, ASSIGN_DONE, span, cont, None,
                                        target_text, v,
                                    )

                                return sem_setattribute(
                                    StepContext(rte5, stored, span), obj, attr, v
                                )

                            return apply_binop(
                                op, a, b, StepContext(rte4, with_result, span),
                                inplace=True,
                            )

                        return value_code(rte3, with_value)

                    return sem_getattribute(
                        StepContext(rte2, with_current, span), obj, attr
                    )

                return obj_code(rte, with_obj)

            return code

        # subscript target: object and index evaluated once
        obj_code = self.compile_expr(cte, target.value)
        index_code = self.compile_subscript_index(cte, target.index)

        def code(rte, cont):
            def with_obj(rte2, obj):
                def with_index(rte3, index):
                    def with_current(rte4, a):
                        def with_value(rte5, b):
                            def with_result(rte6, v):
                                def stored(rte7, _unused):
                                    return note_step(
                                        rte7, ASSIGN_DONE, span, cont, None,
                                        target_text, v,
                                    )

                                return sem_setitem(
                                    StepContext(rte6, stored, span), obj, index, v
                                )

                            return apply_binop(
                                op, a, b, StepContext(rte5, with_result, span),
                                inplace=True,
                            )

                        return value_code(rte4, with_value)

                    return sem_getitem(
                        StepContext(rte3, with_current, span), obj, index
                    )

                return index_code(rte2, with_index)

            return obj_code(rte, with_obj)

        return code

    def stmt_If(self, cte, node):
        test_code = self.compile_expr(cte, node.test)
        body_code = self.compile_sequence(cte, node.body)
        else_code = self.compile_sequence(cte, node.orelse) if node.orelse else None
        test_span = node.test.span

        def code(rte, cont):
            def decide(rte2, v):
                t = truth_fast(v)
                if t is None:
                    return sem_truth(v, StepContext(rte2, branch, test_span))
                return branch(rte2, t)

            def branch(rte2, t):
                if t:
                    return (body_code, rte2, cont)
                if else_code is not None:
                    return (else_code, rte2, cont)
                return (cont, rte2, None)

            return test_code(rte, decide)

        return code

    def stmt_While(self, cte, node):
        test_code = self.compile_expr(cte, node.test)
        body_code = self.compile_sequence(cte.in_loop(), node.body)
        else_code = self.compile_sequence(cte, node.orelse) if node.orelse else None
        test_span = node.test.span

        def code(rte0, cont):
            loop_rte = rte0.fork()

            def exit_normal():
                if else_code is not None:
                    return (else_code, rte0, cont)
                return (cont, rte0, None)

            def break_k(_rte, _v):
                return (cont, rte0, None)

            # iteration always restarts from the loop's own rte, whatever rte
            # the transfer (continue, finally unwind) was carrying
            def iterate(_rte=None, _v=None):
                return (test_code, loop_rte, decide)

            def decide(rte, v):
                t = truth_fast(v)
                if t is None:
                    return sem_truth(v, StepContext(rte, decide_bool, test_span))
                if t:
                    return (body_code, rte, iterate)
                return exit_normal()

            def decide_bool(rte, t):
                if t:
                    return (body_code, rte, iterate)
                return exit_normal()

            loop_rte.break_k = break_k
            loop_rte.continue_k = iterate
            return iterate()

        return code

    def stmt_For(self, cte, node):
        iter_code = self.compile_expr(cte, node.iter)
        store = self.gen_store(cte, node.target)
        store_direct = getattr(store, "direct", None)
        body_code = self.compile_sequence(cte.in_loop(), node.body)
        else_code = self.compile_sequence(cte, node.orelse) if node.orelse else None
        iter_span = node.iter.span

        def code(rte0, cont):
            holder = [None]
            loop_rte = rte0.fork()

            def exit_normal():
                if else_code is not None:
                    return (else_code, rte0, cont)
                return (cont, rte0, None)

            def break_k(_rte, _v):
                return (cont, rte0, None)

            # iteration always restarts from the loop's own rte; see stmt_While
            def iterate(_rte=None, _v=None):
                return sem_next(
                    holder[0], StepContext(loop_rte, bind, iter_span), exit_normal
                )

            def bind(rte, x):
                if store_direct is not None:
                    store_direct(rte, x)
                    return (body_code, rte, iterate)
                return store(rte, x, body_after_store)

            def body_after_store(rte, _v):
                return (body_code, rte, iterate)

            def got_iter(_rte, it):
                holder[0] = it
                loop_rte.break_k = break_k
                loop_rte.continue_k = iterate
                return iterate()

            def with_iterable(rte, v):
                if type(v) in (list, tuple, str, range):
                    return got_iter(rte, iter(v))
                return sem_iter(v, StepContext(rte, got_iter, iter_span))

            return iter_code(rte0, with_iterable)

        return code

    def stmt_FunctionDef(self, cte, node):
        value_code = self.gen_function_value(cte, node, node.name)
        store = self.gen_store_fn(cte, node.name)
        span = node.span
        name = node.name

        def code(rte, cont):
            def with_fn(rte2, fn):
                store(rte2, fn)
                return note_step(rte2, ASSIGN_DONE, span, cont, None, name, fn)

            return value_code(rte, with_fn)

        return code

    def stmt_ClassDef(self, cte, node):
        scope = self.symtab[node]
        body_cte = cte.enter_scope(scope)
        body_code = self.compile_sequence(body_cte, node.body)
        base_code = self.compile_expr(cte, node.base) if node.base is not None else None
        store = self.gen_store_fn(cte, node.name)
        span = node.span
        name = node.name

        def code(rte, cont):
            def with_base(rte2, base):
                if base is not None:
                    if type(base) is not MPClass:
                        return _raise_to(
                            rte2,
                            type_error(f"cannot subclass '{type_name(base)}'"),
                            span,
                        )
                    if base.flavor == "builtin":
                        return _raise_to(
                            rte2,
                            type_error(
                                f"type '{base.name}' is not an acceptable base type"
                            ),
                            span,
                        )
                ns = {}
                class_rte = rte2.fork()
                class_rte.class_ns = ns

                def after_body(_rte, _v):
                    flavor = (
                        "exception"
                        if base is not None and base.flavor == "exception"
                        else "user"
                    )
                    cls = MPClass(name, base, ns, flavor)
                    cls.module = rte2.module_name
                    store(rte2, cls)
                    return note_step(rte2, ASSIGN_DONE, span, cont, None, name, cls)

                return (body_code, class_rte, after_body)

            if base_code is None:
                return with_base(rte, None)
            return base_code(rte, with_base)

        return code

    def stmt_Import(self, cte, node):
        span = node.span
        names = node.names
        from_module = node.module
        stores = [self.gen_store_fn(cte, asname or name) for name, asname in names]
        bound_text = ", ".join(asname or name for name, asname in names)

        def code(rte, cont):
            importer = rte.engine.importer
            if importer is None:
                return _raise_to(
                    rte,
                    exc_new(EXC_RUNTIME_ERROR, "no import machinery attached"),
                    span,
                )

            if from_module is not None:

                def with_module(rte2, module):
                    last = None
                    for (name, _asname), store in zip(names, stores):
                        value = module.attrs.get(name, _MISS)
                        if value is _MISS:
                            return _raise_to(
                                rte2,
                                exc_new(
                                    EXC_IMPORT_ERROR,
                                    f"cannot import name '{name}' from '{from_module}'",
                                ),
                                span,
                            )
                        store(rte2, value)
                        last = value
                    return note_step(
                        rte2, ASSIGN_DONE, span, cont, None, bound_text, last
                    )

                return importer(rte, from_module, with_module, span)

            def run(rte2, i, last):
                if i == len(names):
                    return note_step(
                        rte2, ASSIGN_DONE, span, cont, None, bound_text, last
                    )
                mod_name, _asname = names[i]

                def with_module(rte3, module):
                    stores[i](rte3, module)
                    return run(rte3, i + 1, module)

                return importer(rte2, mod_name, with_module, span)

            return run(rte, 0, None)

        return code

    def stmt_Try(self, cte, node):
        body_code = self.compile_sequence(cte, node.body)
        else_code = self.compile_sequence(cte, node.orelse) if node.orelse else None
        final_code = (
            self.compile_sequence(cte, node.finalbody) if node.finalbody else None
        )
        handlers = []
        for h in node.handlers:
            handlers.append(
                (
                    self.compile_expr(cte, h.type) if h.type is not None else None,
                    self.gen_store_fn(cte, h.name) if h.name is not None else None,
                    self.compile_sequence(cte, h.body),
                    h.span,
                )
            )

        def code(rte0, cont):
            outer_handler = rte0.handler

            if final_code is None:

                def escape(transfer):
                    return transfer()

                def after_all(rte, _v):
                    return (cont, rte0, None)

                protected_rte = rte0
            else:

                def escape(transfer):
                    final_rte = rte0.fork()

                    def fk(_rte, _v):
                        return transfer()

                    return (final_code, final_rte, fk)

                def after_all(rte, _v):
                    return escape(lambda: (cont, rte0, None))

                def wrap_k(orig_k):
                    if orig_k is None:
                        return None

                    def k(rte, v):
                        return escape(lambda: (orig_k, rte, v))

                    return k

                protected_rte = rte0.fork()
                protected_rte.break_k = wrap_k(rte0.break_k)
                protected_rte.continue_k = wrap_k(rte0.continue_k)
                protected_rte.return_k = wrap_k(rte0.return_k)

                def escape_handler(rte, exc):
                    return escape(lambda: (outer_handler, rte, exc))

                protected_rte.handler = escape_handler

            # handler/else bodies run with finally-wrapped destinations and a
            # handler that routes unhandled exceptions through the finally suite
            clause_base = protected_rte

            def on_exc(rte_raiser, exc):
                return match_clause(rte_raiser, 0, exc)

            def match_clause(rte_r, i, exc):
                if i == len(handlers):
                    return escape(lambda: (outer_handler, rte_r, exc))
                type_code, name_store, h_body, h_span = handlers[i]
                if type_code is None:
                    return run_clause(i, exc)

                def with_cls(rte2, cls):
                    classes = cls if type(cls) is tuple else (cls,)
                    for c in classes:
                        if type(c) is not MPClass or c.flavor != "exception":
                            return _raise_to(
                                rte2,
                                type_error(
                                    "catching classes that do not inherit from "
                                    "BaseException is not allowed"
                                ),
                                h_span,
                            )
                    if any(exc.cls.issub(c) for c in classes):
                        return run_clause(i, exc)
                    return match_clause(rte_r, i + 1, exc)

                return type_code(clause_base.fork(), with_cls)

            def run_clause(i, exc):
                _tc, name_store, h_body, _hs = handlers[i]
                clause_rte = clause_base.fork()
                clause_rte.exc_current = exc
                if name_store is not None:
                    name_store(clause_rte, exc)

                def after_clause(rte2, _v):
                    if name_store is not None:
                        name_store(rte2, UNBOUND)
                    return after_all(rte2, None)

                return (h_body, clause_rte, after_clause)

            def after_body(rte, _v):
                if else_code is not None:
                    return (else_code, clause_base.fork(), after_all)
                return after_all(rte, None)

            body_rte = protected_rte.fork()
            body_rte.handler = on_exc
            return (body_code, body_rte, after_body)

        return code

    # -- modules -----------------------------------------------------------------------

    def compile_module_body(self, cte, module_node):
        return self.compile_sequence(cte, module_node.body)


# -- public API --------------------------------------------------------------------------

def compile_module(module_node):
    """Compile a parsed Module; returns (cte, code)."""
    symtab = analyze(module_node)
    cte = CompileTimeEnv(symtab[module_node], symtab)
    code = Compiler(symtab).compile_module_body(cte, module_node)
    return cte, code


def compile_node(cte, node):
    """Compile one statement or expression under an existing cte."""
    compiler = Compiler(cte.symtab)
    if hasattr(compiler, "stmt_" + node.kind):
        return cte, compiler.compile_stmt(cte, node)
    return cte, compiler.compile_expr(cte, node)


def compile_attribute(cte, node):
    """The attribute-access construct, compiled via the expression-end hook."""
    compiler = Compiler(cte.symtab)
    obj_code = compiler.compile_expr(cte, node.value)
    return cte, Compiler.gen_attribute_code(obj_code, node.attr, node.span)
