"""Exact symbolic C-infinity functions of one real variable."""

from .builders import (
    X, affine_precompose, cutoff_at, glue_jumps, make_rho, make_rho_glued, make_rho_wide,
    make_smooth_step, polynomial,
)
from .expr import (
    AffineArg, Compose, Constant, FlatZone, Glued, Identity, Product, Scale, SmoothExpr,
    SmoothStep, Sum, add, affine, compose, evaluate, evaluate_exact, is_exact, mul, scale,
)
from .intervals import Interval, exact
from .io import ExprFormatError, expr_from_json, expr_to_json, number_from_json, number_to_json
from .zero import Decision, is_zero_on, restrict, structurally_zero, to_poly, zero_verdict


def diff(e: SmoothExpr, order: int = 1) -> SmoothExpr:
    """``order``-fold derivative of ``e``."""
    for _ in range(order):
        e = e.diff()
    return e


def flat_zones(e: SmoothExpr) -> tuple[FlatZone, ...]:
    return e.zones


__all__ = [
    "AffineArg", "Compose", "Constant", "Decision", "ExprFormatError", "FlatZone", "Glued",
    "Identity", "Interval", "Product", "Scale", "SmoothExpr", "SmoothStep", "Sum", "X", "add",
    "affine", "affine_precompose", "compose", "cutoff_at", "diff", "evaluate", "evaluate_exact",
    "exact", "expr_from_json", "expr_to_json", "flat_zones", "glue_jumps", "is_exact",
    "is_zero_on", "make_rho", "make_rho_glued", "make_rho_wide", "make_smooth_step", "mul",
    "number_from_json", "number_to_json", "polynomial", "restrict", "scale",
    "structurally_zero", "to_poly", "zero_verdict",
]
