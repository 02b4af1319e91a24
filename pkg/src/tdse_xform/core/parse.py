"""Infix expression strings -> :class:`Expr`.

Grammar: numbers, ``x``, ``t``, ``pi``, ``i`` (imaginary unit), ``+ - * /``, ``^`` or ``**`` with a
constant exponent, and the calls ``exp log sin cos arctan sqrt``.
Python's own tokenizer/parser does the heavy lifting; we only walk the AST.
"""

import ast
import math

from ..errors import XformError
from . import expr as E

_BINOPS = {
    ast.Add: E.add,
    ast.Sub: E.sub,
    ast.Mult: E.mul,
    ast.Div: E.div,
}


def parse_expr(text):
    """Parse ``text`` into an Expr; errors carry the 1-based column."""
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as exc:
        col = exc.offset or 0
        raise XformError("parse-error", f"invalid syntax at position {col} in {text!r}") from None
    return _convert(tree.body, text)


def _fail(node, text, why):
    col = getattr(node, "col_offset", -1) + 1
    raise XformError("parse-error", f"{why} at position {col} in {text!r}")


def _convert(node, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            _fail(node, text, "unsupported literal")
        return E.Const(float(node.value))
    if isinstance(node, ast.Name):
        if node.id in E.VARIABLES:
            return E.Var(node.id)
        if node.id == "pi":
            return E.Const(math.pi)
        if node.id == "i":
            return E.Const(1j)
        _fail(node, text, f"unknown name {node.id!r}")
    if isinstance(node, ast.UnaryOp):
        operand = _convert(node.operand, text)
        if isinstance(node.op, ast.USub):
            return -operand
        if isinstance(node.op, ast.UAdd):
            return operand
        _fail(node, text, "unsupported unary operator")
    if isinstance(node, ast.BinOp):
        left = _convert(node.left, text)
        right = _convert(node.right, text)
        if isinstance(node.op, ast.Pow):
            if not isinstance(right, E.Const):
                _fail(node.right, text, "exponent must be constant")
            return E.power(left, right.value)
        op = _BINOPS.get(type(node.op))
        if op is None:
            _fail(node, text, "unsupported operator")
        return op(left, right)
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in E._FUNCS:
            _fail(node, text, "unknown function")
        if len(node.args) != 1 or node.keywords:
            _fail(node, text, "functions take exactly one argument")
        return E.func(node.func.id, _convert(node.args[0], text))
    _fail(node, text, "unsupported syntax")
