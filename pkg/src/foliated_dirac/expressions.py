"""Closed-form expression grammar for scenario files.

Accepted pieces: numeric literals, the constant ``pi``, the time variable
``t``, spatial variables ``x1 x2 x3`` (``x`` is an alias for ``x1``), the
binary operators ``+ - * / **``, unary ``+ -``, and the functions
``sin cos exp pow``.  Anything else is rejected before evaluation.

Expressions evaluate vectorized over numpy arrays and carry exact symbolic
derivatives in ``t`` and the spatial variables.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field

import numpy as np
import sympy

_SPATIAL = ("x1", "x2", "x3")
_VARIABLES = ("t",) + _SPATIAL
_FUNCTIONS = {"sin": sympy.sin, "cos": sympy.cos, "exp": sympy.exp, "pow": sympy.Pow}
_SYMBOLS = {name: sympy.Symbol(name, real=True) for name in _VARIABLES}
_LOCALS = {**_FUNCTIONS, **_SYMBOLS, "pi": sympy.pi, "x": _SYMBOLS["x1"]}

_ALLOWED_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Div, ast.Pow)
_ALLOWED_UNARY = (ast.UAdd, ast.USub)


class ExpressionError(ValueError):
    """Raised for text outside the documented grammar."""


def _validate(node: ast.AST, text: str) -> None:
    if isinstance(node, ast.Expression):
        _validate(node.body, text)
    elif isinstance(node, ast.BinOp) and isinstance(node.op, _ALLOWED_BINOPS):
        _validate(node.left, text)
        _validate(node.right, text)
    elif isinstance(node, ast.UnaryOp) and isinstance(node.op, _ALLOWED_UNARY):
        _validate(node.operand, text)
    elif isinstance(node, ast.Constant):
        if not isinstance(node.value, (int, float)):
            raise ExpressionError(f"non-numeric literal {node.value!r} in {text!r}")
    elif isinstance(node, ast.Name):
        if node.id not in _LOCALS:
            raise ExpressionError(f"unknown name {node.id!r} in {text!r}")
    elif isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in _FUNCTIONS:
            raise ExpressionError(f"unsupported call in {text!r}")
        if node.keywords:
            raise ExpressionError(f"keyword arguments not allowed in {text!r}")
        nargs = 2 if node.func.id == "pow" else 1
        if len(node.args) != nargs:
            raise ExpressionError(f"{node.func.id} takes {nargs} argument(s) in {text!r}")
        for arg in node.args:
            _validate(arg, text)
    else:
        raise ExpressionError(f"unsupported syntax {type(node).__name__!r} in {text!r}")


@dataclass(frozen=True)
class Expression:
    """A validated scalar expression in t, x1..x3."""

    text: str
    sym: sympy.Expr = field(repr=False, compare=False)

    @classmethod
    def parse(cls, text) -> "Expression":
        if isinstance(text, (int, float)):
            return cls(text=repr(float(text)), sym=sympy.Float(float(text)))
        if not isinstance(text, str):
            raise ExpressionError(f"expected an expression string, got {type(text).__name__}")
        try:
            tree = ast.parse(text, mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {text!r}: {exc.msg}") from None
        _validate(tree, text)
        sym = sympy.sympify(text, locals=dict(_LOCALS))
        return cls(text=text, sym=sympy.simplify(sym) if sym.free_symbols else sym)

    @property
    def variables(self) -> tuple[str, ...]:
        free = {str(s) for s in self.sym.free_symbols}
        return tuple(v for v in _VARIABLES if v in free)

    @property
    def is_constant(self) -> bool:
        return not self.sym.free_symbols

    def depends_on(self, name: str) -> bool:
        return name in self.variables

    def __call__(self, t=0.0, x: tuple = ()) -> np.ndarray:
        func = _compiled(self.sym)
        xs = list(x) + [0.0] * (len(_SPATIAL) - len(x))
        out = func(t, *xs)
        shape = np.broadcast_shapes(np.shape(t), *(np.shape(xi) for xi in x))
        return np.broadcast_to(np.asarray(out, dtype=float), shape).copy() if shape else float(out)

    def diff(self, name: str) -> "Expression":
        if name == "x":
            name = "x1"
        if name not in _VARIABLES:
            raise ExpressionError(f"cannot differentiate with respect to {name!r}")
        d = sympy.diff(self.sym, _SYMBOLS[name])
        return Expression(text=f"d/d{name}({self.text})", sym=d)


_COMPILE_CACHE: dict = {}


def _compiled(sym: sympy.Expr):
    key = sympy.srepr(sym)
    fn = _COMPILE_CACHE.get(key)
    if fn is None:
        fn = sympy.lambdify([_SYMBOLS[v] for v in _VARIABLES], sym, modules="numpy")
        _COMPILE_CACHE[key] = fn
    return fn


def parse_number(value, what: str = "value") -> float:
    """A number or a constant expression string (e.g. ``"2*pi"``)."""
    if isinstance(value, (int, float)):
        return float(value)
    expr = Expression.parse(value)
    if not expr.is_constant:
        raise ExpressionError(f"{what} must be constant, got {value!r}")
    return float(expr())
