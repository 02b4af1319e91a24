"""Small expression trees over the variables ``x`` and ``t``.

Trees are immutable. The module-level constructors (``add``, ``mul``, ...)
fold constants and drop neutral elements so that repeated differentiation
does not blow up the tree; no other simplification is attempted.

>>> x, t = Var("x"), Var("t")
>>> f = sin(x) * t
>>> float(f.diff("x")(0.0, 2.0))
2.0
"""

import numbers

import numpy as np

VARIABLES = ("x", "t")

_FUNCS = {
    "exp": np.exp,
    "log": np.log,
    "sin": np.sin,
    "cos": np.cos,
    "arctan": np.arctan,
    "sqrt": np.sqrt,
}


class Expr:
    __slots__ = ("_vars", "_dcache")

    def __init__(self):
        self._vars = None
        self._dcache = {}

    # evaluation -----------------------------------------------------------
    def __call__(self, x=0.0, t=0.0):
        x = np.asarray(x)
        t = np.asarray(t)
        val = self._eval(x, t)
        shape = np.broadcast_shapes(np.shape(x), np.shape(t))
        val = np.asarray(val)
        if val.shape != shape:
            val = np.broadcast_to(val, shape).copy()
        return val

    def _eval(self, x, t):
        raise NotImplementedError

    # structure --------------------------------------------------------------
    @property
    def variables(self):
        if self._vars is None:
            self._vars = frozenset(self._collect())
        return self._vars

    def _collect(self):
        return ()

    def depends_on(self, var):
        return var in self.variables

    def children(self):
        return ()

    def diff(self, var):
        """Exact partial derivative with respect to ``var`` ('x' or 't')."""
        if var not in VARIABLES:
            raise ValueError(f"unknown variable {var!r}")
        if var not in self._dcache:
            self._dcache[var] = self._diff(var) if self.depends_on(var) else ZERO
        return self._dcache[var]

    def diff_n(self, var, n):
        e = self
        for _ in range(n):
            e = e.diff(var)
        return e

    def subs(self, var, value):
        """Replace ``var`` with ``value`` (an Expr or a number)."""
        if not self.depends_on(var):
            return self
        return self._subs(var, as_expr(value))

    # operators --------------------------------------------------------------
    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __pow__(self, other):
        return power(self, other)

    def __neg__(self):
        return mul(-1.0, self)

    def __pos__(self):
        return self


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        super().__init__()
        self.value = value

    def _eval(self, x, t):
        return self.value

    def _subs(self, var, value):
        return self

    def __repr__(self):
        return f"Const({self.value!r})"

    def __str__(self):
        v = self.value
        if np.iscomplexobj(v):
            return f"({v.real:.17g}{v.imag:+.17g}j)"
        return f"{float(v):.17g}"


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name):
        if name not in VARIABLES:
            raise ValueError(f"unknown variable {name!r}")
        super().__init__()
        self.name = name

    def _collect(self):
        return (self.name,)

    def _eval(self, x, t):
        return x if self.name == "x" else t

    def _diff(self, var):
        return ONE

    def _subs(self, var, value):
        return value

    def __repr__(self):
        return f"Var({self.name!r})"

    def __str__(self):
        return self.name


class _Binary(Expr):
    __slots__ = ("a", "b")
    symbol = "?"

    def __init__(self, a, b):
        super().__init__()
        self.a = a
        self.b = b

    def children(self):
        return (self.a, self.b)

    def _collect(self):
        return self.a.variables | self.b.variables

    def _subs(self, var, value):
        return type(self).build(self.a.subs(var, value), self.b.subs(var, value))

    def __repr__(self):
        return f"{type(self).__name__}({self.a!r}, {self.b!r})"

    def __str__(self):
        return f"({self.a} {self.symbol} {self.b})"


class Add(_Binary):
    symbol = "+"

    @staticmethod
    def build(a, b):
        return add(a, b)

    def _eval(self, x, t):
        return self.a._eval(x, t) + self.b._eval(x, t)

    def _diff(self, var):
        return add(self.a.diff(var), self.b.diff(var))


class Sub(_Binary):
    symbol = "-"

    @staticmethod
    def build(a, b):
        return sub(a, b)

    def _eval(self, x, t):
        return self.a._eval(x, t) - self.b._eval(x, t)

    def _diff(self, var):
        return sub(self.a.diff(var), self.b.diff(var))


class Mul(_Binary):
    symbol = "*"

    @staticmethod
    def build(a, b):
        return mul(a, b)

    def _eval(self, x, t):
        return self.a._eval(x, t) * self.b._eval(x, t)

    def _diff(self, var):
        return add(mul(self.a.diff(var), self.b), mul(self.a, self.b.diff(var)))


class Div(_Binary):
    symbol = "/"

    @staticmethod
    def build(a, b):
        return div(a, b)

    def _eval(self, x, t):
        return self.a._eval(x, t) / self.b._eval(x, t)

    def _diff(self, var):
        da = self.a.diff(var)
        if not self.b.depends_on(var):
            return div(da, self.b)
        db = self.b.diff(var)
        return sub(div(da, self.b), div(mul(self.a, db), power(self.b, 2)))


class Pow(Expr):
    """``base ** exponent`` with a constant real exponent."""

    __slots__ = ("base", "exponent")

    def __init__(self, base, exponent):
        super().__init__()
        self.base = base
        self.exponent = float(exponent)

    def children(self):
        return (self.base,)

    def _collect(self):
        return self.base.variables

    def _eval(self, x, t):
        b = self.base._eval(x, t)
        p = self.exponent
        if p.is_integer():
            return b ** int(p) if int(p) >= 0 else 1.0 / b ** (-int(p))
        return np.power(b, p)

    def _diff(self, var):
        p = self.exponent
        return mul(mul(p, power(self.base, p - 1.0)), self.base.diff(var))

    def _subs(self, var, value):
        return power(self.base.subs(var, value), self.exponent)

    def __repr__(self):
        return f"Pow({self.base!r}, {self.exponent!r})"

    def __str__(self):
        p = self.exponent
        ps = str(int(p)) if p.is_integer() else repr(p)
        return f"({self.base} ^ {ps})"


class Func(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name, arg):
        if name not in _FUNCS:
            raise ValueError(f"unknown function {name!r}")
        super().__init__()
        self.name = name
        self.arg = arg

    def children(self):
        return (self.arg,)

    def _collect(self):
        return self.arg.variables

    def _eval(self, x, t):
        return _FUNCS[self.name](self.arg._eval(x, t))

    def _diff(self, var):
        u = self.arg
        du = u.diff(var)
        name = self.name
        if name == "exp":
            outer = self
        elif name == "log":
            return div(du, u)
        elif name == "sin":
            outer = func("cos", u)
        elif name == "cos":
            outer = mul(-1.0, func("sin", u))
        elif name == "arctan":
            return div(du, add(1.0, power(u, 2)))
        else:  # sqrt
            return div(du, mul(2.0, self))
        return mul(outer, du)

    def _subs(self, var, value):
        return func(self.name, self.arg.subs(var, value))

    def __repr__(self):
        return f"Func({self.name!r}, {self.arg!r})"

    def __str__(self):
        return f"{self.name}({self.arg})"


ZERO = Const(0.0)
ONE = Const(1.0)


def as_expr(value):
    if isinstance(value, Expr):
        return value
    if isinstance(value, numbers.Number):
        return Const(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def const_value(e):
    """Numeric value of a constant node, else None."""
    return e.value if isinstance(e, Const) else None


def _is(e, v):
    c = const_value(e)
    return c is not None and c == v


def add(a, b):
    a, b = as_expr(a), as_expr(b)
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def sub(a, b):
    a, b = as_expr(a), as_expr(b)
    if _is(b, 0):
        return a
    if _is(a, 0):
        return mul(-1.0, b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def mul(a, b):
    a, b = as_expr(a), as_expr(b)
    if _is(a, 0) or _is(b, 0):
        return ZERO
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    # keep constants on the left and merge nested constant factors
    if isinstance(b, Const):
        a, b = b, a
    if isinstance(a, Const) and isinstance(b, Mul) and isinstance(b.a, Const):
        return mul(a.value * b.a.value, b.b)
    return Mul(a, b)


def div(a, b):
    a, b = as_expr(a), as_expr(b)
    if _is(a, 0):
        return ZERO
    if _is(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    if isinstance(b, Const):
        return mul(1.0 / b.value, a)
    return Div(a, b)


def power(base, exponent):
    base = as_expr(base)
    if isinstance(exponent, Expr):
        if not isinstance(exponent, Const):
            raise TypeError("only constant real exponents are supported")
        exponent = exponent.value
    if isinstance(exponent, complex):
        raise TypeError("only constant real exponents are supported")
    p = float(exponent)
    if p == 0:
        return ONE
    if p == 1:
        return base
    if isinstance(base, Const):
        return Const(Pow(base, p)._eval(None, None))
    # (u^a)^n = u^(a n) holds wherever u^a is defined, for integer n only
    if isinstance(base, Pow) and p.is_integer():
        return power(base.base, base.exponent * p)
    return Pow(base, p)


def func(name, arg):
    arg = as_expr(arg)
    if isinstance(arg, Const):
        return Const(_FUNCS[name](arg.value))
    return Func(name, arg)


def exp(u):
    return func("exp", u)


def log(u):
    return func("log", u)


def sin(u):
    return func("sin", u)


def cos(u):
    return func("cos", u)


def arctan(u):
    return func("arctan", u)


def sqrt(u):
    return func("sqrt", u)


X = Var("x")
T = Var("t")


def polynomial(coeffs, var=X):
    """Horner-form Expr of ``sum(c_k var**k)`` for ascending ``coeffs``."""
    var = Var(var) if isinstance(var, str) else var
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    e = as_expr(coeffs[-1]) if coeffs else ZERO
    for c in reversed(coeffs[:-1]):
        e = add(c, mul(var, e))
    return e
