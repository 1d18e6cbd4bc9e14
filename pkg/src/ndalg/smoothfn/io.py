"""JSON expression-tree format.

Every node is an object with a ``"node"`` tag::

    {"node": "constant", "value": 3}
    {"node": "identity"}
    {"node": "sum", "terms": [...]}
    {"node": "product", "factors": [...]}
    {"node": "scale", "c": 2, "expr": {...}}
    {"node": "compose", "outer": {...}, "inner": {...}}
    {"node": "affine", "slope": 2, "offset": -1, "expr": {...}}
    {"node": "step", "order": 0}
    {"node": "glued", "breakpoint": 0, "deadzone": [lo, hi], "left": {...}, "right": {...}}

Reading also accepts shorthands: a bare number (constant), the string ``"x"``,
``{"node": "rho"}`` and ``{"node": "poly", "coeffs": [c0, c1, ...]}``.  Numbers are
JSON numbers or ``"p/q"`` strings; writing emits the latter only when a value is not
exactly a double.
"""

from __future__ import annotations

from fractions import Fraction

from .builders import make_rho, polynomial
from .expr import (
    AffineArg, Compose, Constant, Glued, Identity, Product, Scale, SmoothExpr,
    SmoothStep, Sum,
)
from .intervals import Interval, exact


class ExprFormatError(ValueError):
    """Malformed expression JSON; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def number_to_json(q: Fraction):
    if q.denominator == 1:
        return int(q)
    if Fraction(float(q)) == q:
        return float(q)
    return f"{q.numerator}/{q.denominator}"


def number_from_json(value, path: str = "$") -> Fraction:
    try:
        return exact(value)
    except (TypeError, ValueError, ZeroDivisionError) as err:
        raise ExprFormatError(path, f"not a finite real number: {value!r}") from err


def expr_to_json(e: SmoothExpr) -> dict:
    if isinstance(e, Constant):
        return {"node": "constant", "value": number_to_json(e.value)}
    if isinstance(e, Identity):
        return {"node": "identity"}
    if isinstance(e, Sum):
        return {"node": "sum", "terms": [expr_to_json(t) for t in e.terms]}
    if isinstance(e, Product):
        return {"node": "product", "factors": [expr_to_json(f) for f in e.factors]}
    if isinstance(e, Scale):
        return {"node": "scale", "c": number_to_json(e.c), "expr": expr_to_json(e.expr)}
    if isinstance(e, Compose):
        return {"node": "compose", "outer": expr_to_json(e.outer), "inner": expr_to_json(e.inner)}
    if isinstance(e, AffineArg):
        return {"node": "affine", "slope": number_to_json(e.slope),
                "offset": number_to_json(e.offset), "expr": expr_to_json(e.expr)}
    if isinstance(e, SmoothStep):
        return {"node": "step", "order": e.order}
    if isinstance(e, Glued):
        return {"node": "glued", "breakpoint": number_to_json(e.breakpoint),
                "deadzone": [number_to_json(e.deadzone.lo), number_to_json(e.deadzone.hi)],
                "left": expr_to_json(e.left), "right": expr_to_json(e.right)}
    raise TypeError(f"cannot serialize {type(e).__name__}")


def _children(obj: dict, key: str, path: str) -> list:
    items = obj.get(key)
    if not isinstance(items, list) or not items:
        raise ExprFormatError(f"{path}.{key}", "expected a nonempty list")
    return [expr_from_json(c, f"{path}.{key}[{i}]") for i, c in enumerate(items)]


def _child(obj: dict, key: str, path: str) -> SmoothExpr:
    if key not in obj:
        raise ExprFormatError(f"{path}.{key}", "missing")
    return expr_from_json(obj[key], f"{path}.{key}")


def _number(obj: dict, key: str, path: str) -> Fraction:
    if key not in obj:
        raise ExprFormatError(f"{path}.{key}", "missing")
    return number_from_json(obj[key], f"{path}.{key}")


def expr_from_json(obj, path: str = "$") -> SmoothExpr:
    """Parse an expression; raises :class:`ExprFormatError` naming the bad field."""
    if obj == "x":
        return Identity()
    if isinstance(obj, (int, float, str)) and not isinstance(obj, bool):
        return Constant(number_from_json(obj, path))
    if not isinstance(obj, dict):
        raise ExprFormatError(path, f"expected an expression object, got {obj!r}")
    tag = obj.get("node")
    try:
        if tag == "constant":
            return Constant(_number(obj, "value", path))
        if tag == "identity":
            return Identity()
        if tag == "sum":
            return Sum(tuple(_children(obj, "terms", path)))
        if tag == "product":
            return Product(tuple(_children(obj, "factors", path)))
        if tag == "scale":
            return Scale(_number(obj, "c", path), _child(obj, "expr", path))
        if tag == "compose":
            return Compose(_child(obj, "outer", path), _child(obj, "inner", path))
        if tag == "affine":
            return AffineArg(_number(obj, "slope", path), _number(obj, "offset", path),
                             _child(obj, "expr", path))
        if tag == "step":
            order = obj.get("order", 0)
            if not isinstance(order, int) or isinstance(order, bool) or order < 0:
                raise ExprFormatError(f"{path}.order", "expected a nonnegative integer")
            return SmoothStep(order)
        if tag == "glued":
            dz = obj.get("deadzone")
            if not isinstance(dz, list) or len(dz) != 2:
                raise ExprFormatError(f"{path}.deadzone", "expected [lo, hi]")
            deadzone = Interval(number_from_json(dz[0], f"{path}.deadzone[0]"),
                                number_from_json(dz[1], f"{path}.deadzone[1]"))
            return Glued(_number(obj, "breakpoint", path), _child(obj, "left", path),
                         _child(obj, "right", path), deadzone)
        if tag == "rho":
            return make_rho()
        if tag == "poly":
            coeffs = obj.get("coeffs")
            if not isinstance(coeffs, list):
                raise ExprFormatError(f"{path}.coeffs", "expected a list of numbers")
            return polynomial(*(number_from_json(c, f"{path}.coeffs[{i}]")
                                for i, c in enumerate(coeffs)))
    except ExprFormatError:
        raise
    except ValueError as err:
        raise ExprFormatError(path, str(err)) from err
    raise ExprFormatError(f"{path}.node", f"unknown node tag {tag!r}")
